"""Pretraining and the two-phase fine-tuning loop.

Fine-tuning executes each schedule step literally: first an update from
gamma * UL + (1 - gamma) * KD on reference pairs, then a second update from
the distillation loss alone on plain sentences. The teacher is the frozen
pretrained snapshot.
"""

from __future__ import annotations

import copy
import csv
import random
from dataclasses import dataclass, field

import torch
import torch.nn.functional as F

from .data import Example, collate
from .model import ToyMLM
from .vocab import Vocab

UL_EPS = 1e-6


@dataclass
class PretrainResult:
    model: ToyMLM
    losses: list[float] = field(default_factory=list)


def pretrain(
    sentences: list[list[str]],
    vocab: Vocab,
    steps: int,
    seed: int = 0,
    batch_size: int = 32,
    lr: float = 3e-4,
    pair_fraction: float = 0.3,
    max_len: int = 48,
    d_model: int = 64,
) -> PretrainResult:
    """Masked-LM pretraining on bare sentences plus some [SEP]-joined pairs."""
    if not sentences:
        raise ValueError("empty corpus")
    torch.manual_seed(seed)
    rng = random.Random(seed)
    model = ToyMLM(len(vocab), d_model=d_model, max_len=max_len)
    result = PretrainResult(model=model)
    if steps == 0:
        return result
    optimizer = torch.optim.Adam(model.parameters(), lr=lr)
    usable = [s for s in sentences if len(s) <= max_len]
    model.train()
    for _ in range(steps):
        batch = []
        for _ in range(batch_size):
            first = rng.choice(usable)
            if rng.random() < pair_fraction:
                second = rng.choice(usable)
                if len(first) + len(second) + 1 <= max_len:
                    mask_at = rng.randrange(len(second))
                    batch.append(
                        Example(tuple(first), tuple(second), mask_at,
                                second[mask_at], "DISTILL", "pretrain")
                    )
                    continue
            mask_at = rng.randrange(len(first))
            batch.append(
                Example((), tuple(first), mask_at, first[mask_at],
                        "DISTILL_PLAIN", "pretrain")
            )
        ids, pad_mask, positions, targets = collate(batch, vocab, max_len)
        logits = model.logits_at(ids, pad_mask, positions)
        loss = F.cross_entropy(logits, targets)
        optimizer.zero_grad()
        loss.backward()
        optimizer.step()
        result.losses.append(float(loss.detach()))
    model.eval()
    return result


def snapshot_teacher(model: ToyMLM) -> ToyMLM:
    teacher = copy.deepcopy(model)
    teacher.eval()
    for parameter in teacher.parameters():
        parameter.requires_grad_(False)
    return teacher


def ul_loss_torch(p_target: torch.Tensor) -> torch.Tensor:
    return -torch.log1p(-p_target.clamp(max=1.0 - UL_EPS)).mean()


def kd_loss_torch(student_logits: torch.Tensor, teacher_logits: torch.Tensor) -> torch.Tensor:
    """Mean KL(teacher || student) over the batch, in nats."""
    log_student = F.log_softmax(student_logits, dim=-1)
    teacher_probs = F.softmax(teacher_logits, dim=-1)
    return F.kl_div(log_student, teacher_probs, reduction="batchmean")


def phase1_loss(model, teacher, ul_batch, kd_batch, vocab, max_len, gamma):
    ids, pad, pos, targets = collate(ul_batch, vocab, max_len)
    probs = F.softmax(model.logits_at(ids, pad, pos), dim=-1)
    p_target = probs[torch.arange(len(ul_batch)), targets]
    l_ul = ul_loss_torch(p_target)

    ids, pad, pos, _ = collate(kd_batch, vocab, max_len)
    student_logits = model.logits_at(ids, pad, pos)
    with torch.no_grad():
        teacher_logits = teacher.logits_at(ids, pad, pos)
    l_kd = kd_loss_torch(student_logits, teacher_logits)
    return gamma * l_ul + (1.0 - gamma) * l_kd, float(l_ul.detach()), float(l_kd.detach())


def phase2_loss(model, teacher, plain_batch, vocab, max_len):
    ids, pad, pos, _ = collate(plain_batch, vocab, max_len)
    student_logits = model.logits_at(ids, pad, pos)
    with torch.no_grad():
        teacher_logits = teacher.logits_at(ids, pad, pos)
    return kd_loss_torch(student_logits, teacher_logits)


@torch.no_grad()
def mean_target_probability(model, examples, vocab, max_len, batch_size=64) -> float:
    """Mean model probability of the supervised token, masked, over examples."""
    model.eval()
    total = 0.0
    for start in range(0, len(examples), batch_size):
        chunk = examples[start:start + batch_size]
        ids, pad, pos, targets = collate(chunk, vocab, max_len)
        probs = F.softmax(model.logits_at(ids, pad, pos), dim=-1)
        total += float(probs[torch.arange(len(chunk)), targets].sum())
    return total / len(examples)


@torch.no_grad()
def mean_teacher_kl(model, teacher, examples, vocab, max_len, batch_size=64) -> float:
    """Mean KL(teacher || model) at the masked position, in nats."""
    model.eval()
    total = 0.0
    for start in range(0, len(examples), batch_size):
        chunk = examples[start:start + batch_size]
        ids, pad, pos, _ = collate(chunk, vocab, max_len)
        log_student = F.log_softmax(model.logits_at(ids, pad, pos), dim=-1)
        teacher_probs = F.softmax(teacher.logits_at(ids, pad, pos), dim=-1)
        kl = (teacher_probs * (teacher_probs.clamp_min(1e-12).log() - log_student)).sum(-1)
        total += float(kl.sum())
    return total / len(examples)


@dataclass
class FinetuneMetrics:
    rows: list[dict] = field(default_factory=list)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.DictWriter(handle, fieldnames=["step", "mean_p_ul", "mean_kl"])
            writer.writeheader()
            writer.writerows(self.rows)


def finetune(
    model: ToyMLM,
    teacher: ToyMLM,
    streams: dict[str, list[Example]],
    schedule,
    vocab: Vocab,
    lr: float = 3e-4,
    max_len: int = 48,
    seed: int = 0,
    heldout_ul: list[Example] | None = None,
    heldout_plain: list[Example] | None = None,
    eval_every: int | None = None,
) -> FinetuneMetrics:
    """Run the schedule's two updates per step, logging held-out metrics."""
    sizes = {name: len(streams.get(name, ())) for name in
             ("UNLIKELIHOOD", "DISTILL", "DISTILL_PLAIN")}
    for plan in schedule:
        for name, batch in (
            ("UNLIKELIHOOD", plan.phase1_unlikelihood),
            ("DISTILL", plan.phase1_distill),
            ("DISTILL_PLAIN", plan.phase2_plain),
        ):
            if batch and max(batch) >= sizes[name]:
                raise ValueError(
                    f"schedule indexes example {max(batch)} of {name}, "
                    f"dataset has {sizes[name]}"
                )
    torch.manual_seed(seed)
    optimizer = torch.optim.Adam(model.parameters(), lr=lr)
    metrics = FinetuneMetrics()

    def log(step: int):
        if heldout_ul is None or heldout_plain is None:
            return
        row = {
            "step": step,
            "mean_p_ul": round(mean_target_probability(model, heldout_ul, vocab, max_len), 6),
            "mean_kl": round(mean_teacher_kl(model, teacher, heldout_plain, vocab, max_len), 6),
        }
        metrics.rows.append(row)
        model.train()

    model.train()
    log(-1)
    for plan in schedule:
        ul_batch = [streams["UNLIKELIHOOD"][i] for i in plan.phase1_unlikelihood]
        kd_batch = [streams["DISTILL"][i] for i in plan.phase1_distill]
        loss1, _, _ = phase1_loss(model, teacher, ul_batch, kd_batch, vocab, max_len, plan.gamma)
        optimizer.zero_grad()
        loss1.backward()
        optimizer.step()

        plain_batch = [streams["DISTILL_PLAIN"][i] for i in plan.phase2_plain]
        loss2 = phase2_loss(model, teacher, plain_batch, vocab, max_len)
        optimizer.zero_grad()
        loss2.backward()
        optimizer.step()

        if eval_every and (plan.step + 1) % eval_every == 0:
            log(plan.step)
    if not eval_every:
        log(len(schedule) - 1)
    model.eval()
    return metrics
