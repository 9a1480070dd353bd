"""Cloze probing: rank vocabulary completions for masked query statements."""

from __future__ import annotations

import json
import warnings

import torch
import torch.nn.functional as F

from .model import ToyMLM
from .vocab import MASK, Vocab


@torch.no_grad()
def probe(
    model: ToyMLM,
    queries: list[dict],
    vocab: Vocab,
    top_k: int = 10,
    max_len: int = 48,
) -> list[dict]:
    """Prediction records ({query_id, candidates:[{token, logprob}]}) per query.

    Queries whose gold answer is out of vocabulary are skipped with a warning.
    Statements are whitespace-tokenized; the mask symbol marks the slot.
    """
    model.eval()
    special_ids = torch.tensor(vocab.special_ids())
    records = []
    for query in queries:
        if query["gold_answer"] not in vocab:
            warnings.warn(
                f"skipping query {query['query_id']!r}: gold answer "
                f"{query['gold_answer']!r} is out of vocabulary"
            )
            continue
        tokens = query["statement"].split()
        if MASK not in tokens:
            raise ValueError(f"query {query['query_id']!r} lacks the mask symbol")
        position = tokens.index(MASK)
        ids = torch.tensor([vocab.encode(tokens)[:max_len]], dtype=torch.long)
        pad_mask = torch.zeros_like(ids, dtype=torch.bool)
        log_probs = F.log_softmax(
            model.logits_at(ids, pad_mask, torch.tensor([position])), dim=-1
        )[0]
        log_probs[special_ids] = float("-inf")
        values, indices = torch.topk(log_probs, k=min(top_k, len(vocab)))
        candidates = [
            {"token": vocab.tokens[int(i)], "logprob": round(float(v), 6)}
            for v, i in zip(values, indices)
            if v != float("-inf")
        ]
        records.append({"query_id": query["query_id"], "candidates": candidates})
    return records


def write_predictions(records: list[dict], path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")
