"""Dataset reading and tensor encoding.

Consumes the pair-builder's line-delimited JSON directly (sentence_a,
sentence_b, b_tokens, target_index, target_form, objective, source_id) and
the sidecar manifest. Reference inputs are encoded as ``A [SEP] B`` with B's
target replaced by the mask id; plain inputs are B alone.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import torch

from .vocab import Vocab

OBJECTIVES = ("UNLIKELIHOOD", "DISTILL", "DISTILL_PLAIN")


@dataclass(frozen=True)
class Example:
    a_tokens: tuple[str, ...]
    b_tokens: tuple[str, ...]
    target_index: int
    target_form: str
    objective: str
    source_id: str


def load_dataset(path) -> dict[str, list[Example]]:
    """Objective -> examples, in file order (schedule ordinals index these lists)."""
    streams: dict[str, list[Example]] = {name: [] for name in OBJECTIVES}
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            if not line.strip():
                continue
            raw = json.loads(line)
            example = Example(
                a_tokens=tuple(raw["sentence_a"].split()),
                b_tokens=tuple(raw["b_tokens"]),
                target_index=raw["target_index"],
                target_form=raw["target_form"],
                objective=raw["objective"],
                source_id=raw["source_id"],
            )
            if example.objective not in streams:
                raise ValueError(f"unknown objective {example.objective!r}")
            if example.b_tokens[example.target_index] != example.target_form:
                raise ValueError(f"corrupt example for {example.source_id!r}")
            streams[example.objective].append(example)
    return streams


def load_manifest(path) -> dict:
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)


def encode_example(example: Example, vocab: Vocab, max_len: int) -> tuple[list[int], int, int]:
    """(input ids, mask position, target id). Pair input when a reference exists."""
    b_ids = vocab.encode(example.b_tokens)
    target_id = b_ids[example.target_index]
    if example.a_tokens:
        ids = vocab.encode(example.a_tokens) + [vocab.sep_id] + b_ids
        mask_pos = len(example.a_tokens) + 1 + example.target_index
    else:
        ids = list(b_ids)
        mask_pos = example.target_index
    ids[mask_pos] = vocab.mask_id
    if len(ids) > max_len:
        raise ValueError(
            f"example {example.source_id!r} needs {len(ids)} positions, max is {max_len}"
        )
    return ids, mask_pos, target_id


def collate(
    examples: list[Example], vocab: Vocab, max_len: int, device="cpu"
) -> tuple[torch.Tensor, torch.Tensor, torch.Tensor, torch.Tensor]:
    """Padded batch tensors: ids, pad_mask, mask positions, target ids."""
    encoded = [encode_example(e, vocab, max_len) for e in examples]
    width = max(len(ids) for ids, _, _ in encoded)
    batch = torch.full((len(encoded), width), vocab.pad_id, dtype=torch.long)
    pad_mask = torch.ones((len(encoded), width), dtype=torch.bool)
    positions = torch.zeros(len(encoded), dtype=torch.long)
    targets = torch.zeros(len(encoded), dtype=torch.long)
    for row, (ids, mask_pos, target_id) in enumerate(encoded):
        batch[row, : len(ids)] = torch.tensor(ids, dtype=torch.long)
        pad_mask[row, : len(ids)] = False
        positions[row] = mask_pos
        targets[row] = target_id
    return (
        batch.to(device),
        pad_mask.to(device),
        positions.to(device),
        targets.to(device),
    )
