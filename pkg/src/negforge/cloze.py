"""Templated cloze queries and prediction scoring.

Relation templates hold ``[X]`` / ``[Y]`` placeholders; instantiation fills
the subject and masks the object slot. Positive queries are scored with
precision at k. Negated queries are scored with the top-1 error: 1 when the
top prediction reproduces the positive gold object, i.e. the model ignored
the negation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

MASK = "[MASK]"
POSITIVE = "positive"
NEGATED = "negated"


class ClozeError(ValueError):
    pass


@dataclass(frozen=True)
class RelationTemplate:
    relation: str
    template: str
    negated_template: str

    def __post_init__(self):
        for label, text in (("template", self.template),
                            ("negated_template", self.negated_template)):
            for placeholder in ("[X]", "[Y]"):
                if text.count(placeholder) != 1:
                    raise ClozeError(
                        f"{label} for relation {self.relation!r} must contain "
                        f"{placeholder} exactly once: {text!r}"
                    )


@dataclass(frozen=True)
class ClozeQuery:
    query_id: str
    relation: str
    statement: str  # with the object slot replaced by the mask symbol
    gold_answer: str  # always the positive object, also for negated queries
    polarity: str

    def to_json(self) -> str:
        return json.dumps(
            {
                "query_id": self.query_id,
                "relation": self.relation,
                "statement": self.statement,
                "gold_answer": self.gold_answer,
                "polarity": self.polarity,
            },
            ensure_ascii=False,
        )


@dataclass(frozen=True)
class PredictionRecord:
    query_id: str
    candidates: tuple[tuple[str, float], ...]  # (token, logprob), descending

    def __post_init__(self):
        probs = [lp for _, lp in self.candidates]
        if any(b > a for a, b in zip(probs, probs[1:])):
            raise ClozeError(
                f"candidates for {self.query_id!r} are not sorted by logprob"
            )


@dataclass(frozen=True)
class EvalReport:
    k: int
    positive_per_relation: dict[str, float]
    mean_p_at_k: float | None
    negated_per_relation: dict[str, float]
    mean_top1_error: float | None
    query_count: int


def instantiate(
    template: RelationTemplate, subject: str, obj: str, polarity: str, mask: str = MASK
) -> ClozeQuery:
    if polarity not in (POSITIVE, NEGATED):
        raise ClozeError(f"polarity must be positive or negated, got {polarity!r}")
    text = template.template if polarity == POSITIVE else template.negated_template
    statement = text.replace("[X]", subject).replace("[Y]", mask)
    return ClozeQuery(
        query_id=f"{template.relation}/{subject}/{polarity}",
        relation=template.relation,
        statement=statement,
        gold_answer=obj,
        polarity=polarity,
    )


def _tokens_equal(a: str, b: str, case_insensitive: bool) -> bool:
    return a.lower() == b.lower() if case_insensitive else a == b


def p_at_k(
    pred: PredictionRecord,
    query: ClozeQuery,
    k: int = 1,
    case_insensitive: bool = False,
) -> int:
    """1 iff the gold answer is among the top-k candidates (truncated to what exists)."""
    if query.polarity != POSITIVE:
        raise ClozeError(f"p_at_k applies to positive queries, got {query.query_id!r}")
    if not pred.candidates:
        raise ClozeError(f"no candidates for query {query.query_id!r}")
    top = pred.candidates[: max(k, 1)]
    return int(any(_tokens_equal(tok, query.gold_answer, case_insensitive) for tok, _ in top))


def top1_error_negated(
    pred: PredictionRecord, query: ClozeQuery, case_insensitive: bool = False
) -> int:
    """1 iff the top candidate equals the positive gold answer (negation ignored)."""
    if query.polarity != NEGATED:
        raise ClozeError(
            f"top1_error_negated applies to negated queries, got {query.query_id!r}"
        )
    if not pred.candidates:
        raise ClozeError(f"no candidates for query {query.query_id!r}")
    return int(_tokens_equal(pred.candidates[0][0], query.gold_answer, case_insensitive))


def aggregate(
    predictions: Iterable[PredictionRecord] | Mapping[str, PredictionRecord],
    queries: Sequence[ClozeQuery],
    k: int = 1,
    case_insensitive: bool = False,
) -> EvalReport:
    """Per-relation means, then unweighted means over relations."""
    if isinstance(predictions, Mapping):
        by_id = dict(predictions)
    else:
        by_id = {p.query_id: p for p in predictions}
    missing = [q.query_id for q in queries if q.query_id not in by_id]
    if missing:
        raise ClozeError(f"missing predictions for queries: {missing}")

    pos_scores: dict[str, list[int]] = {}
    neg_scores: dict[str, list[int]] = {}
    for query in queries:
        pred = by_id[query.query_id]
        if query.polarity == POSITIVE:
            pos_scores.setdefault(query.relation, []).append(
                p_at_k(pred, query, k, case_insensitive)
            )
        else:
            neg_scores.setdefault(query.relation, []).append(
                top1_error_negated(pred, query, case_insensitive)
            )

    def relation_means(scores: dict[str, list[int]]) -> dict[str, float]:
        return {rel: sum(vals) / len(vals) for rel, vals in sorted(scores.items())}

    pos_means = relation_means(pos_scores)
    neg_means = relation_means(neg_scores)
    return EvalReport(
        k=k,
        positive_per_relation=pos_means,
        mean_p_at_k=sum(pos_means.values()) / len(pos_means) if pos_means else None,
        negated_per_relation=neg_means,
        mean_top1_error=sum(neg_means.values()) / len(neg_means) if neg_means else None,
        query_count=len(queries),
    )


# ---------------------------------------------------------------------------
# File formats


def load_templates(text: str) -> list[RelationTemplate]:
    data = json.loads(text)
    if not isinstance(data, list):
        raise ClozeError("template file must hold a JSON array")
    return [
        RelationTemplate(
            relation=raw["relation"],
            template=raw["template"],
            negated_template=raw["negated_template"],
        )
        for raw in data
    ]


def load_queries(lines: Iterable[str]) -> list[ClozeQuery]:
    queries = []
    for line in lines:
        line = line.strip()
        if not line:
            continue
        raw = json.loads(line)
        queries.append(
            ClozeQuery(
                query_id=raw["query_id"],
                relation=raw["relation"],
                statement=raw["statement"],
                gold_answer=raw["gold_answer"],
                polarity=raw["polarity"],
            )
        )
    return queries


def load_predictions(lines: Iterable[str]) -> dict[str, PredictionRecord]:
    records: dict[str, PredictionRecord] = {}
    for line in lines:
        line = line.strip()
        if not line:
            continue
        raw = json.loads(line)
        record = PredictionRecord(
            query_id=raw["query_id"],
            candidates=tuple((c["token"], float(c["logprob"])) for c in raw["candidates"]),
        )
        records[record.query_id] = record
    return records


def report_to_dict(report: EvalReport) -> dict:
    return {
        "k": report.k,
        "positive": {
            "per_relation": report.positive_per_relation,
            "mean_p_at_k": report.mean_p_at_k,
        },
        "negated": {
            "per_relation": report.negated_per_relation,
            "mean_top1_error": report.mean_top1_error,
        },
        "query_count": report.query_count,
    }


def format_report_table(reports: Mapping[str, EvalReport]) -> str:
    """Aligned text tables: one row per model, one column per relation plus the mean."""
    relations: list[str] = []
    for report in reports.values():
        for rel in (*report.positive_per_relation, *report.negated_per_relation):
            if rel not in relations:
                relations.append(rel)
    lines = []
    for title, attr, mean_attr in (
        ("positive p@k", "positive_per_relation", "mean_p_at_k"),
        ("negated top-1 error", "negated_per_relation", "mean_top1_error"),
    ):
        header = ["model"] + relations + ["mean"]
        rows = [header]
        for name, report in reports.items():
            per_relation = getattr(report, attr)
            mean = getattr(report, mean_attr)
            row = [name]
            for rel in relations:
                value = per_relation.get(rel)
                row.append("-" if value is None else f"{value:.2f}")
            row.append("-" if mean is None else f"{mean:.4f}")
            rows.append(row)
        widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
        lines.append(title)
        for row in rows:
            lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)))
        lines.append("")
    return "\n".join(lines).rstrip() + "\n"
