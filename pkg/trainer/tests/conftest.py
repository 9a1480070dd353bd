import pathlib
import subprocess
import sys

import pytest

from toymlm import Vocab, load_dataset, pretrain
from toymlm.corpus import generate_corpus
from toymlm.pipeline import conllu_sentences


@pytest.fixture(scope="session")
def small_setup(tmp_path_factory):
    """Small corpus + pair dataset + vocab + briefly pretrained model."""
    workdir = tmp_path_factory.mktemp("toy")
    train_text, heldout_text, facts = generate_corpus(5, fact_repeats=3, filler_count=60)
    train_path = workdir / "train.conllu"
    train_path.write_text(train_text, encoding="utf-8")

    dataset_path = workdir / "pairs.jsonl"
    subprocess.run(
        [sys.executable, "-m", "negforge", "pairs",
         "--in", str(train_path), "--out", str(dataset_path),
         "--n", "32", "--seed", "5"],
        check=True, capture_output=True,
    )
    streams = load_dataset(dataset_path)
    sentences = conllu_sentences(train_text)
    dataset_tokens = [list(e.b_tokens) for s in streams.values() for e in s]
    vocab = Vocab.from_sentences(sentences + dataset_tokens)
    pretrained = pretrain(sentences, vocab, steps=150, seed=5, batch_size=16)
    return {
        "workdir": workdir,
        "facts": facts,
        "sentences": sentences,
        "streams": streams,
        "dataset_path": dataset_path,
        "manifest_path": pathlib.Path(str(dataset_path) + ".manifest.json"),
        "vocab": vocab,
        "model": pretrained.model,
        "losses": pretrained.losses,
    }
