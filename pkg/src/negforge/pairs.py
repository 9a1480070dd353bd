"""Reference-paired training examples: contradictory, copy, and plain streams.

Each example pairs a reference sentence A with a sentence B and marks one
supervised token in B. Contradictory pairs carry the polarity-flipped B and
its unlikelihood token; copy pairs reuse the same token with B = A; plain
examples are bare corpus sentences with a sampled content token. Examples
serialize to line-delimited JSON with a sidecar manifest.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .conllu import ParsedSentence, within_length_limit
from .rules import RuleSet, negate, render, select_rule

UNLIKELIHOOD = "UNLIKELIHOOD"
DISTILL = "DISTILL"
DISTILL_PLAIN = "DISTILL_PLAIN"

CONTENT_POS = ("NOUN", "PROPN", "VERB", "ADJ")

_FIELD_ORDER = (
    "sentence_a",
    "sentence_b",
    "b_tokens",
    "target_index",
    "target_form",
    "objective",
    "rule_name",
    "source_id",
)


class DatasetError(ValueError):
    """Sampling could not satisfy the request (e.g. pool smaller than n)."""


@dataclass(frozen=True)
class TrainingExample:
    sentence_a: str
    sentence_b: str
    b_tokens: tuple[str, ...]
    target_index: int  # 0-based position in b_tokens
    target_form: str
    objective: str
    rule_name: str | None
    source_id: str

    def to_json(self) -> str:
        record = {
            "sentence_a": self.sentence_a,
            "sentence_b": self.sentence_b,
            "b_tokens": list(self.b_tokens),
            "target_index": self.target_index,
            "target_form": self.target_form,
            "objective": self.objective,
            "rule_name": self.rule_name,
            "source_id": self.source_id,
        }
        return json.dumps(record, ensure_ascii=False)

    @classmethod
    def from_json(cls, line: str) -> "TrainingExample":
        raw = json.loads(line)
        return cls(
            sentence_a=raw["sentence_a"],
            sentence_b=raw["sentence_b"],
            b_tokens=tuple(raw["b_tokens"]),
            target_index=raw["target_index"],
            target_form=raw["target_form"],
            objective=raw["objective"],
            rule_name=raw.get("rule_name"),
            source_id=raw["source_id"],
        )


def build_contradictory(
    sentence: ParsedSentence, rules: RuleSet
) -> TrainingExample | None:
    """A = the sentence, B = its polarity flip, target = the unlikelihood token."""
    outcome = negate(rules, sentence)
    if outcome is None:
        return None
    b_tokens = tuple(t.form for t in outcome.tokens)
    return TrainingExample(
        sentence_a=render(sentence.tokens),
        sentence_b=render(outcome.tokens),
        b_tokens=b_tokens,
        target_index=outcome.ul_index,
        target_form=b_tokens[outcome.ul_index],
        objective=UNLIKELIHOOD,
        rule_name=outcome.rule_name,
        source_id=sentence.sent_id,
    )


def build_copy(sentence: ParsedSentence, rules: RuleSet) -> TrainingExample | None:
    """B is a copy of A; the target is the token the flip rule would select."""
    outcome = negate(rules, sentence)
    if outcome is None:
        return None
    source_idx = outcome.ul_token.source_index
    b_tokens = tuple(t.form for t in sentence.tokens)
    rendered = render(sentence.tokens)
    return TrainingExample(
        sentence_a=rendered,
        sentence_b=rendered,
        b_tokens=b_tokens,
        target_index=source_idx - 1,
        target_form=b_tokens[source_idx - 1],
        objective=DISTILL,
        rule_name=outcome.rule_name,
        source_id=sentence.sent_id,
    )


def build_plain(
    sentence: ParsedSentence, rng_seed: int | random.Random
) -> TrainingExample:
    """B is the bare sentence; the target is one sampled content token."""
    rng = rng_seed if isinstance(rng_seed, random.Random) else random.Random(rng_seed)
    candidates = [t for t in sentence.tokens if t.upos in CONTENT_POS]
    if not candidates:
        candidates = [t for t in sentence.tokens if t.upos != "PUNCT"]
    if not candidates:
        raise DatasetError(
            f"sentence {sentence.sent_id!r} has no non-punctuation token to supervise"
        )
    target = rng.choice(candidates)
    b_tokens = tuple(t.form for t in sentence.tokens)
    return TrainingExample(
        sentence_a="",
        sentence_b=render(sentence.tokens),
        b_tokens=b_tokens,
        target_index=target.index - 1,
        target_form=target.form,
        objective=DISTILL_PLAIN,
        rule_name=None,
        source_id=sentence.sent_id,
    )


def sample_dataset(
    corpus: Iterable[ParsedSentence],
    rules: RuleSet,
    n_per_objective: int = 20_000,
    seed: int = 0,
    max_words: int = 20,
    disjoint_pools: bool = False,
) -> tuple[list[TrainingExample], dict]:
    """Draw n examples per objective, deterministically under the seed.

    Contradictory and copy examples come from the same eligible sentences
    (one of each per drawn sentence) unless ``disjoint_pools`` is set, in
    which case the two streams draw disjoint source sentences.
    """
    sentences = list(corpus)
    short = [s for s in sentences if within_length_limit(s, max_words)]
    eligible = [s for s in short if select_rule(rules, s) is not None]

    rng = random.Random(seed)
    needed = 2 * n_per_objective if disjoint_pools else n_per_objective
    if len(eligible) < needed:
        raise DatasetError(
            f"need {needed} rule-matched sentences of <= {max_words} words, "
            f"found only {len(eligible)}"
        )
    if len(short) < n_per_objective:
        raise DatasetError(
            f"need {n_per_objective} sentences of <= {max_words} words for the "
            f"plain stream, found only {len(short)}"
        )

    drawn = rng.sample(range(len(eligible)), needed)
    if disjoint_pools:
        ul_sources = [eligible[i] for i in sorted(drawn[:n_per_objective])]
        copy_sources = [eligible[i] for i in sorted(drawn[n_per_objective:])]
    else:
        ul_sources = [eligible[i] for i in sorted(drawn)]
        copy_sources = ul_sources
    plain_sources = [
        short[i] for i in sorted(rng.sample(range(len(short)), n_per_objective))
    ]

    examples: list[TrainingExample] = []
    for sentence in ul_sources:
        example = build_contradictory(sentence, rules)
        if example is None:  # matched at eligibility time, so this cannot happen
            raise DatasetError(f"sentence {sentence.sent_id!r} lost its rule match")
        examples.append(example)
    for sentence in copy_sources:
        example = build_copy(sentence, rules)
        if example is None:
            raise DatasetError(f"sentence {sentence.sent_id!r} lost its rule match")
        examples.append(example)
    for sentence in plain_sources:
        examples.append(build_plain(sentence, rng))

    counts = {UNLIKELIHOOD: 0, DISTILL: 0, DISTILL_PLAIN: 0}
    for example in examples:
        counts[example.objective] += 1
    manifest = {
        "counts": counts,
        "n_per_objective": n_per_objective,
        "seed": seed,
        "max_words": max_words,
        "disjoint_pools": disjoint_pools,
        "rules_sha256": rules.sha256,
        "rules_source": rules.source,
    }
    return examples, manifest


def write_dataset(
    examples: Sequence[TrainingExample],
    manifest: dict,
    dataset_path,
    manifest_path=None,
) -> None:
    with open(dataset_path, "w", encoding="utf-8") as handle:
        for example in examples:
            handle.write(example.to_json())
            handle.write("\n")
    if manifest_path is None:
        manifest_path = str(dataset_path) + ".manifest.json"
    with open(manifest_path, "w", encoding="utf-8") as handle:
        json.dump(manifest, handle, indent=2, sort_keys=True)
        handle.write("\n")


def read_dataset(path) -> list[TrainingExample]:
    with open(path, encoding="utf-8") as handle:
        return [TrainingExample.from_json(line) for line in handle if line.strip()]
