"""End-to-end demo: corpus -> pairs -> pretrain -> two-phase finetune -> probes.

The pair dataset and the cloze reports come from the ``negforge`` command-line
tool (invoked as a subprocess on the generated files); the schedule comes from
``negforge.objective.make_schedule``. Everything else is local.
"""

from __future__ import annotations

import argparse
import json
import subprocess
import sys
from dataclasses import dataclass
from pathlib import Path

from negforge.objective import make_schedule, steps_for_epochs

from . import corpus as corpus_mod
from .data import load_dataset, load_manifest
from .probe import probe, write_predictions
from .training import (
    finetune,
    mean_target_probability,
    mean_teacher_kl,
    pretrain,
    snapshot_teacher,
)
from .vocab import Vocab

MAX_LEN = 48


def run_negforge(*args) -> subprocess.CompletedProcess:
    result = subprocess.run(
        [sys.executable, "-m", "negforge", *args], capture_output=True, text=True
    )
    if result.returncode != 0:
        raise RuntimeError(
            f"negforge {' '.join(args)} failed ({result.returncode}): {result.stderr}"
        )
    return result


def conllu_sentences(text: str) -> list[list[str]]:
    """Token forms per sentence, straight from the generated CoNLL-U text."""
    sentences = []
    current: list[str] = []
    for line in text.splitlines():
        if not line.strip():
            if current:
                sentences.append(current)
                current = []
            continue
        if line.startswith("#"):
            continue
        current.append(line.split("\t")[1])
    if current:
        sentences.append(current)
    return sentences


@dataclass
class DemoResult:
    pre_p_ul: float
    post_p_ul: float
    plain_kl: float
    pre_report: dict
    post_report: dict
    workdir: Path

    @property
    def p_ul_drop(self) -> float:
        return 1.0 - self.post_p_ul / self.pre_p_ul

    def summary(self) -> dict:
        return {
            "pre_mean_p_ul": round(self.pre_p_ul, 6),
            "post_mean_p_ul": round(self.post_p_ul, 6),
            "p_ul_relative_drop": round(self.p_ul_drop, 4),
            "heldout_plain_kl": round(self.plain_kl, 6),
            "pre_positive_p_at_1": self.pre_report["positive"]["mean_p_at_k"],
            "post_positive_p_at_1": self.post_report["positive"]["mean_p_at_k"],
            "pre_negated_top1_error": self.pre_report["negated"]["mean_top1_error"],
            "post_negated_top1_error": self.post_report["negated"]["mean_top1_error"],
        }


def run_demo(
    workdir: Path,
    seed: int = 7,
    n_per_objective: int = 256,
    pretrain_steps: int = 2500,
    batch_size: int = 16,
    epochs: int = 5,
    lr: float = 3e-4,
) -> DemoResult:
    workdir = Path(workdir)
    workdir.mkdir(parents=True, exist_ok=True)

    train_text, heldout_text, facts = corpus_mod.generate_corpus(seed)
    train_path = workdir / "train.conllu"
    heldout_path = workdir / "heldout.conllu"
    train_path.write_text(train_text, encoding="utf-8")
    heldout_path.write_text(heldout_text, encoding="utf-8")
    (workdir / "templates.json").write_text(
        json.dumps(corpus_mod.cloze_templates(), indent=2), encoding="utf-8"
    )
    with open(workdir / "facts.jsonl", "w", encoding="utf-8") as handle:
        for fact in corpus_mod.cloze_facts(facts):
            handle.write(json.dumps(fact) + "\n")

    dataset_path = workdir / "pairs.jsonl"
    run_negforge(
        "pairs", "--in", str(train_path), "--out", str(dataset_path),
        "--n", str(n_per_objective), "--seed", str(seed),
    )
    heldout_pairs_path = workdir / "heldout_pairs.jsonl"
    run_negforge(
        "pairs", "--in", str(heldout_path), "--out", str(heldout_pairs_path),
        "--n", "48", "--seed", str(seed + 1),
    )

    streams = load_dataset(dataset_path)
    heldout_streams = load_dataset(heldout_pairs_path)
    manifest = load_manifest(str(dataset_path) + ".manifest.json")

    train_sentences = conllu_sentences(train_text)
    dataset_tokens = [list(e.b_tokens) for s in streams.values() for e in s]
    vocab = Vocab.from_sentences(train_sentences + dataset_tokens)

    pretrained = pretrain(
        train_sentences, vocab, steps=pretrain_steps, seed=seed, max_len=MAX_LEN
    )
    model = pretrained.model
    teacher = snapshot_teacher(model)

    heldout_ul = heldout_streams["UNLIKELIHOOD"]
    heldout_plain = heldout_streams["DISTILL_PLAIN"]
    pre_p_ul = mean_target_probability(model, heldout_ul, vocab, MAX_LEN)

    queries_path = workdir / "queries.jsonl"
    run_negforge(
        "eval-cloze",
        "--templates", str(workdir / "templates.json"),
        "--facts", str(workdir / "facts.jsonl"),
        "--queries-out", str(queries_path),
    )
    queries = [json.loads(line) for line in queries_path.read_text().splitlines()]

    pre_preds_path = workdir / "preds_pretrained.jsonl"
    write_predictions(probe(model, queries, vocab, max_len=MAX_LEN), pre_preds_path)

    total_steps = steps_for_epochs(manifest, batch_size=batch_size, epochs=epochs)
    schedule = make_schedule(total_steps, manifest, batch_size=batch_size, seed=seed)
    metrics = finetune(
        model, teacher, streams, schedule, vocab,
        lr=lr, max_len=MAX_LEN, seed=seed,
        heldout_ul=heldout_ul, heldout_plain=heldout_plain,
        eval_every=max(1, total_steps // epochs),
    )
    metrics.write_csv(workdir / "metrics.csv")

    post_p_ul = mean_target_probability(model, heldout_ul, vocab, MAX_LEN)
    plain_kl = mean_teacher_kl(model, teacher, heldout_plain, vocab, MAX_LEN)

    post_preds_path = workdir / "preds_finetuned.jsonl"
    write_predictions(probe(model, queries, vocab, max_len=MAX_LEN), post_preds_path)

    report_path = workdir / "report.json"
    run_negforge(
        "eval-cloze",
        "--queries", str(queries_path),
        "--preds",
        f"pretrained={pre_preds_path}",
        f"finetuned={post_preds_path}",
        "--report", str(report_path),
    )
    reports = json.loads(report_path.read_text())
    return DemoResult(
        pre_p_ul=pre_p_ul,
        post_p_ul=post_p_ul,
        plain_kl=plain_kl,
        pre_report=reports["pretrained"],
        post_report=reports["finetuned"],
        workdir=workdir,
    )


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="toymlm-demo",
        description="Train the toy masked LM with the two-phase objective and "
        "report the before/after probe metrics.",
    )
    parser.add_argument("--workdir", default="toymlm-run", help="artifact directory")
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--pretrain-steps", type=int, default=2500)
    parser.add_argument("--n", type=int, default=256, help="examples per objective")
    parser.add_argument("--epochs", type=int, default=5)
    parser.add_argument("--batch-size", type=int, default=16)
    parser.add_argument("--lr", type=float, default=3e-4)
    args = parser.parse_args(argv)
    result = run_demo(
        Path(args.workdir),
        seed=args.seed,
        n_per_objective=args.n,
        pretrain_steps=args.pretrain_steps,
        batch_size=args.batch_size,
        epochs=args.epochs,
        lr=args.lr,
    )
    print(json.dumps(result.summary(), indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
