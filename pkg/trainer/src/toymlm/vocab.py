"""Word-level vocabulary with the four special symbols."""

from __future__ import annotations

from collections import Counter
from typing import Iterable

PAD = "[PAD]"
UNK = "[UNK]"
MASK = "[MASK]"
SEP = "[SEP]"
SPECIALS = (PAD, UNK, MASK, SEP)


class Vocab:
    def __init__(self, words: Iterable[str]):
        self.tokens = list(SPECIALS)
        seen = set(self.tokens)
        for word in words:
            if word not in seen:
                seen.add(word)
                self.tokens.append(word)
        self.index = {tok: i for i, tok in enumerate(self.tokens)}
        self.pad_id = self.index[PAD]
        self.unk_id = self.index[UNK]
        self.mask_id = self.index[MASK]
        self.sep_id = self.index[SEP]

    @classmethod
    def from_sentences(cls, sentences: Iterable[list[str]]) -> "Vocab":
        counts = Counter()
        for sentence in sentences:
            counts.update(sentence)
        # frequency-major, alphabetical tie-break: deterministic ids
        ordered = sorted(counts, key=lambda w: (-counts[w], w))
        return cls(ordered)

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self.index

    def encode(self, tokens: Iterable[str]) -> list[int]:
        return [self.index.get(tok, self.unk_id) for tok in tokens]

    def decode(self, ids: Iterable[int]) -> list[str]:
        return [self.tokens[i] for i in ids]

    def special_ids(self) -> list[int]:
        return [self.index[tok] for tok in SPECIALS]
