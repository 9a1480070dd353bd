import json
import subprocess
import sys

import pytest

from toymlm import probe, write_predictions
from toymlm.data import encode_example, load_dataset, load_manifest
from toymlm.training import FinetuneMetrics


def test_dataset_streams_and_fields(small_setup):
    streams = small_setup["streams"]
    assert {len(v) for v in streams.values()} == {32}
    for example in streams["UNLIKELIHOOD"]:
        assert example.a_tokens  # contradictory pairs carry a reference
        assert example.b_tokens[example.target_index] == example.target_form
    for example in streams["DISTILL"]:
        assert example.a_tokens == example.b_tokens  # copy pairs
    for example in streams["DISTILL_PLAIN"]:
        assert example.a_tokens == ()


def test_manifest_counts_power_the_schedule(small_setup):
    manifest = load_manifest(small_setup["manifest_path"])
    assert manifest["counts"] == {
        "UNLIKELIHOOD": 32, "DISTILL": 32, "DISTILL_PLAIN": 32
    }


def test_encoding_layout(small_setup):
    vocab = small_setup["vocab"]
    example = small_setup["streams"]["UNLIKELIHOOD"][0]
    ids, mask_pos, target_id = encode_example(example, vocab, 48)
    assert ids[mask_pos] == vocab.mask_id
    assert ids[len(example.a_tokens)] == vocab.sep_id
    assert vocab.tokens[target_id] == example.target_form

    plain = small_setup["streams"]["DISTILL_PLAIN"][0]
    ids, mask_pos, _ = encode_example(plain, vocab, 48)
    assert vocab.sep_id not in ids
    assert mask_pos == plain.target_index


def test_corrupt_dataset_rejected(tmp_path):
    bad = tmp_path / "bad.jsonl"
    bad.write_text(json.dumps({
        "sentence_a": "", "sentence_b": "x y", "b_tokens": ["x", "y"],
        "target_index": 0, "target_form": "y", "objective": "DISTILL_PLAIN",
        "rule_name": None, "source_id": "s",
    }) + "\n")
    with pytest.raises(ValueError, match="corrupt"):
        load_dataset(bad)


def test_probe_output_feeds_the_scorer(small_setup, tmp_path):
    model, vocab, facts = small_setup["model"], small_setup["vocab"], small_setup["facts"]
    queries = []
    for fact in facts[:10]:
        queries.append({
            "query_id": f"{fact.relation}/{fact.subject}/positive",
            "relation": fact.relation,
            "statement": f"The {fact.subject} {fact.relation} the [MASK] .",
            "gold_answer": fact.obj,
            "polarity": "positive",
        })
        queries.append({
            "query_id": f"{fact.relation}/{fact.subject}/negated",
            "relation": fact.relation,
            "statement": f"The {fact.subject} does not {fact.lemma} the [MASK] .",
            "gold_answer": fact.obj,
            "polarity": "negated",
        })
    queries_path = tmp_path / "queries.jsonl"
    with open(queries_path, "w") as handle:
        for query in queries:
            handle.write(json.dumps(query) + "\n")

    records = probe(model, queries, vocab, top_k=5)
    assert len(records) == len(queries)
    for record in records:
        logprobs = [c["logprob"] for c in record["candidates"]]
        assert logprobs == sorted(logprobs, reverse=True)
        assert all(c["token"] not in ("[PAD]", "[MASK]", "[SEP]", "[UNK]")
                   for c in record["candidates"])
    preds_path = tmp_path / "preds.jsonl"
    write_predictions(records, preds_path)

    report_path = tmp_path / "report.json"
    result = subprocess.run(
        [sys.executable, "-m", "negforge", "eval-cloze",
         "--queries", str(queries_path),
         "--preds", f"toy={preds_path}",
         "--report", str(report_path)],
        capture_output=True, text=True,
    )
    assert result.returncode == 0, result.stderr
    payload = json.loads(report_path.read_text())["toy"]
    assert 0.0 <= payload["positive"]["mean_p_at_k"] <= 1.0
    assert 0.0 <= payload["negated"]["mean_top1_error"] <= 1.0


def test_probe_skips_oov_gold_with_warning(small_setup):
    model, vocab = small_setup["model"], small_setup["vocab"]
    queries = [{
        "query_id": "weird/q/positive",
        "statement": "The museum houses the [MASK] .",
        "gold_answer": "zzz-not-a-word",
    }]
    with pytest.warns(UserWarning, match="out of vocabulary"):
        records = probe(model, queries, vocab)
    assert records == []


def test_probe_deterministic(small_setup):
    model, vocab = small_setup["model"], small_setup["vocab"]
    query = [{
        "query_id": "q", "statement": "The museum houses the [MASK] .",
        "gold_answer": "crown",
    }]
    assert probe(model, query, vocab) == probe(model, query, vocab)


def test_metrics_csv_schema(tmp_path):
    metrics = FinetuneMetrics(rows=[
        {"step": -1, "mean_p_ul": 0.5, "mean_kl": 0.0},
        {"step": 9, "mean_p_ul": 0.1, "mean_kl": 0.02},
    ])
    path = tmp_path / "metrics.csv"
    metrics.write_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "step,mean_p_ul,mean_kl"
    assert len(lines) == 3
