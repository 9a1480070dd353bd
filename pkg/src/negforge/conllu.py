"""CoNLL-U reading, validation, and serialization.

Sentences are consumed as plain CoNLL-U v2 text (10 tab-separated columns,
blank line between sentences). Multiword-token ranges (``3-4``) and empty
nodes (``5.1``) are skipped: downstream matching and rewriting address
syntactic words only.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Iterable, Iterator, TextIO

PUNCT = "PUNCT"


class ConlluError(ValueError):
    """Malformed CoNLL-U input. Carries the 1-based line number."""

    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class Token:
    """One syntactic word of a parsed sentence."""

    index: int
    form: str
    lemma: str
    upos: str
    xpos: str
    feats: tuple[tuple[str, str], ...] = ()
    head: int = 0
    deprel: str = "dep"
    space_after: bool = True

    @property
    def feats_str(self) -> str:
        """Serialized features in source order, ``_`` when empty."""
        if not self.feats:
            return "_"
        return "|".join(f"{k}={v}" for k, v in self.feats)

    @property
    def cpos(self) -> str:
        """UPOS and serialized features joined by ``|`` for feature regexes."""
        return f"{self.upos}|{self.feats_str}"

    def feat(self, key: str) -> str | None:
        for k, v in self.feats:
            if k == key:
                return v
        return None


@dataclass(frozen=True)
class ParsedSentence:
    sent_id: str
    tokens: tuple[Token, ...]
    text: str | None = None
    _children: dict[int, list[int]] = field(
        default=None, repr=False, compare=False, hash=False
    )

    def __post_init__(self):
        children: dict[int, list[int]] = {0: []}
        for tok in self.tokens:
            children.setdefault(tok.index, [])
        for tok in self.tokens:
            children.setdefault(tok.head, []).append(tok.index)
        for deps in children.values():
            deps.sort()
        object.__setattr__(self, "_children", children)

    def token(self, idx: int) -> Token:
        return self.tokens[idx - 1]

    def children_of(self, idx: int) -> list[int]:
        """Indices of tokens governed by ``idx`` (0 = the root slot), in linear order."""
        if idx != 0 and not 1 <= idx <= len(self.tokens):
            raise IndexError(f"token index {idx} out of range for {self.sent_id!r}")
        return list(self._children[idx])

    def root_index(self) -> int:
        return self._children[0][0]

    def word_count(self, include_punct: bool = False) -> int:
        if include_punct:
            return len(self.tokens)
        return sum(1 for t in self.tokens if t.upos != PUNCT)


def within_length_limit(
    sentence: ParsedSentence, max_words: int = 20, include_punct: bool = False
) -> bool:
    """True iff the word count (punctuation excluded by default) is <= max_words."""
    return sentence.word_count(include_punct) <= max_words


def children_of(sentence: ParsedSentence, idx: int) -> list[int]:
    return sentence.children_of(idx)


def _parse_feats(raw: str, line_no: int) -> tuple[tuple[str, str], ...]:
    if raw == "_" or raw == "":
        return ()
    pairs = []
    seen = set()
    for item in raw.split("|"):
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise ConlluError(f"bad feature item {item!r}", line_no)
        if key in seen:
            raise ConlluError(f"duplicate feature {key!r}", line_no)
        seen.add(key)
        pairs.append((key, value))
    return tuple(pairs)


def _space_after(misc: str) -> bool:
    if misc == "_":
        return True
    return not any(part == "SpaceAfter=No" for part in misc.split("|"))


def _finish_sentence(
    sent_id: str | None,
    text: str | None,
    rows: list[tuple[int, Token]],
    block_line: int,
    counter: int,
) -> ParsedSentence:
    if not rows:
        raise ConlluError("sentence block with no token lines", block_line)
    tokens = tuple(tok for _, tok in rows)
    indices = {tok.index for tok in tokens}
    expected = set(range(1, len(tokens) + 1))
    if indices != expected:
        raise ConlluError("token ids are not 1..n", rows[0][0])
    roots = [tok for tok in tokens if tok.head == 0]
    if not roots:
        raise ConlluError("no root token (head 0)", rows[0][0])
    if len(roots) > 1:
        line = next(ln for ln, tok in rows if tok is roots[1])
        raise ConlluError("multiple root tokens", line)
    for line_no, tok in rows:
        if tok.head != 0 and tok.head not in indices:
            raise ConlluError(f"head {tok.head} references no token", line_no)
    # cycle check: walk each token to the root
    for line_no, tok in rows:
        seen = set()
        cur = tok.index
        while cur != 0:
            if cur in seen:
                raise ConlluError("cyclic head chain", line_no)
            seen.add(cur)
            cur = tokens[cur - 1].head
    return ParsedSentence(
        sent_id=sent_id or f"sentence-{counter}", tokens=tokens, text=text
    )


def parse_conllu(
    stream: TextIO | Iterable[str] | str, on_error: str = "raise"
) -> Iterator[ParsedSentence]:
    """Lazily parse CoNLL-U text into ParsedSentence values.

    ``on_error`` is ``"raise"`` (abort on the first malformed sentence) or
    ``"skip"`` (drop malformed sentences and continue).
    """
    if on_error not in ("raise", "skip"):
        raise ValueError(f"on_error must be 'raise' or 'skip', got {on_error!r}")
    if isinstance(stream, str):
        stream = io.StringIO(stream)

    sent_id: str | None = None
    text: str | None = None
    rows: list[tuple[int, Token]] = []
    block_line = 1
    counter = 0
    broken = False

    def flush(line_no: int) -> ParsedSentence | None:
        nonlocal sent_id, text, rows, broken, counter
        try:
            if broken:
                return None
            if not rows and sent_id is None and text is None:
                return None
            counter += 1
            return _finish_sentence(sent_id, text, rows, block_line, counter)
        except ConlluError:
            if on_error == "raise":
                raise
            return None
        finally:
            sent_id = None
            text = None
            rows = []
            broken = False

    line_no = 0
    for line_no, raw in enumerate(stream, start=1):
        line = raw.rstrip("\r\n")
        if line == "":
            sent = flush(line_no)
            if sent is not None:
                yield sent
            block_line = line_no + 1
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("sent_id"):
                _, _, value = body.partition("=")
                sent_id = value.strip()
            elif body.startswith("text"):
                _, _, value = body.partition("=")
                text = value.strip()
            continue
        if broken:
            continue
        try:
            rows.append((line_no, _parse_token_line(line, line_no)))
        except _SkipLine:
            continue
        except ConlluError:
            if on_error == "raise":
                raise
            broken = True
    sent = flush(line_no + 1)
    if sent is not None:
        yield sent


class _SkipLine(Exception):
    pass


def _parse_token_line(line: str, line_no: int) -> Token:
    cols = line.split("\t")
    if len(cols) != 10:
        raise ConlluError(f"expected 10 columns, got {len(cols)}", line_no)
    tok_id = cols[0]
    if "-" in tok_id or "." in tok_id:
        raise _SkipLine()  # multiword range or empty node
    try:
        index = int(tok_id)
    except ValueError:
        raise ConlluError(f"bad token id {tok_id!r}", line_no) from None
    if index < 1:
        raise ConlluError(f"token id must be >= 1, got {index}", line_no)
    try:
        head = int(cols[6])
    except ValueError:
        raise ConlluError(f"non-integer head {cols[6]!r}", line_no) from None
    if head < 0:
        raise ConlluError(f"negative head {head}", line_no)
    if head == index:
        raise ConlluError("token is its own head", line_no)
    return Token(
        index=index,
        form=cols[1],
        lemma=cols[2],
        upos=cols[3],
        xpos=cols[4],
        feats=_parse_feats(cols[5], line_no),
        head=head,
        deprel=cols[7],
        space_after=_space_after(cols[9]),
    )


def parse_conllu_file(path, on_error: str = "raise") -> Iterator[ParsedSentence]:
    with open(path, encoding="utf-8") as handle:
        yield from parse_conllu(handle, on_error=on_error)


def to_conllu(sentence: ParsedSentence) -> str:
    """Serialize one sentence back to a CoNLL-U block (with trailing blank line)."""
    lines = [f"# sent_id = {sentence.sent_id}"]
    if sentence.text is not None:
        lines.append(f"# text = {sentence.text}")
    for tok in sentence.tokens:
        misc = "_" if tok.space_after else "SpaceAfter=No"
        lines.append(
            "\t".join(
                (
                    str(tok.index),
                    tok.form,
                    tok.lemma,
                    tok.upos,
                    tok.xpos,
                    tok.feats_str,
                    str(tok.head),
                    tok.deprel,
                    "_",
                    misc,
                )
            )
        )
    return "\n".join(lines) + "\n\n"
