"""Loss kernels and the two-phase step schedule.

Pure numerics: the unlikelihood loss -log(1 - p) with an epsilon clamp, the
teacher-direction KL distillation loss, their gamma mix, analytic gradients
for cross-checking against finite differences, and a deterministic schedule
that partitions each objective stream once per epoch into two-phase steps.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

UL_EPS = 1e-6
KL_SMOOTH = 1e-12
DEFAULT_GAMMA = 0.4
DEFAULT_BATCH_SIZE = 32
DEFAULT_EPOCHS = 5
DEFAULT_LEARNING_RATE = 1e-5

_OBJECTIVES = ("UNLIKELIHOOD", "DISTILL", "DISTILL_PLAIN")


def ul_loss(p_u: float) -> float:
    """Unlikelihood loss -ln(1 - p) with p clamped to 1 - 1e-6; finite on [0, 1]."""
    p = float(p_u)
    if not np.isfinite(p) or p < 0.0 or p > 1.0:
        raise ValueError(f"p_u must be a probability in [0, 1], got {p_u!r}")
    return -float(np.log1p(-min(p, 1.0 - UL_EPS)))


def ul_loss_grad(p_u: float) -> float:
    """d/dp of ul_loss; zero beyond the clamp point."""
    p = float(p_u)
    if not np.isfinite(p) or p < 0.0 or p > 1.0:
        raise ValueError(f"p_u must be a probability in [0, 1], got {p_u!r}")
    if p >= 1.0 - UL_EPS:
        return 0.0
    return 1.0 / (1.0 - p)


def _check_prob_vector(values, label: str) -> np.ndarray:
    vec = np.asarray(values, dtype=np.float64)
    if vec.ndim != 1:
        raise ValueError(f"{label} must be 1-dimensional, got shape {vec.shape}")
    if not np.all(np.isfinite(vec)) or np.any(vec < 0):
        raise ValueError(f"{label} must be finite and nonnegative")
    total = float(vec.sum())
    if abs(total - 1.0) > 1e-6:
        raise ValueError(f"{label} must sum to 1 within 1e-6, got {total}")
    return vec


def kl_loss(p_teacher, p_student, smooth: float = KL_SMOOTH) -> float:
    """KL(teacher || student) in nats; zero-probability student entries under
    positive teacher mass are clamped to ``smooth`` before the log."""
    teacher = _check_prob_vector(p_teacher, "teacher distribution")
    student = _check_prob_vector(p_student, "student distribution")
    if teacher.shape != student.shape:
        raise ValueError(
            f"distributions must share a support: {teacher.shape} vs {student.shape}"
        )
    mask = teacher > 0
    s = np.maximum(student[mask], smooth)
    t = teacher[mask]
    return float(np.sum(t * (np.log(t) - np.log(s))))


def kl_loss_grad_student(p_teacher, p_student, smooth: float = KL_SMOOTH) -> np.ndarray:
    """Gradient of kl_loss w.r.t. the student entries (elementwise -t_i / s_i)."""
    teacher = _check_prob_vector(p_teacher, "teacher distribution")
    student = _check_prob_vector(p_student, "student distribution")
    if teacher.shape != student.shape:
        raise ValueError(
            f"distributions must share a support: {teacher.shape} vs {student.shape}"
        )
    grad = np.zeros_like(student)
    mask = (teacher > 0) & (student > smooth)
    grad[mask] = -teacher[mask] / student[mask]
    return grad


def combined_loss(l_ul: float, l_kl: float, gamma: float = DEFAULT_GAMMA) -> float:
    """gamma * l_ul + (1 - gamma) * l_kl."""
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma!r}")
    return gamma * float(l_ul) + (1.0 - gamma) * float(l_kl)


# ---------------------------------------------------------------------------
# Schedule


@dataclass(frozen=True)
class StepPlan:
    """One training step: a mixed phase-1 batch and a plain phase-2 batch.

    Batch entries are 0-based ordinals into each objective's example stream.
    """

    step: int
    phase1_unlikelihood: tuple[int, ...]
    phase1_distill: tuple[int, ...]
    phase2_plain: tuple[int, ...]
    gamma: float = DEFAULT_GAMMA


@dataclass(frozen=True)
class Schedule:
    steps: tuple[StepPlan, ...]
    batch_size: int
    seed: int
    gamma: float
    learning_rate: float = DEFAULT_LEARNING_RATE

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def __getitem__(self, i):
        return self.steps[i]


def _manifest_counts(manifest: dict) -> dict[str, int]:
    counts = manifest.get("counts", manifest)
    missing = [o for o in _OBJECTIVES if o not in counts]
    if missing:
        raise ValueError(f"manifest lacks counts for objectives {missing}")
    return {o: int(counts[o]) for o in _OBJECTIVES}


def steps_per_epoch(manifest: dict, batch_size: int = DEFAULT_BATCH_SIZE) -> int:
    """Steps needed to pass once over each objective stream at this batch size."""
    counts = _manifest_counts(manifest)
    sizes = set(counts.values())
    if len(sizes) != 1:
        raise ValueError(f"objective streams differ in size: {counts}")
    n = sizes.pop()
    if n == 0:
        raise ValueError("empty dataset")
    if n % batch_size != 0:
        raise ValueError(
            f"batch size {batch_size} does not evenly divide the stream size {n}"
        )
    return n // batch_size


def steps_for_epochs(
    manifest: dict,
    batch_size: int = DEFAULT_BATCH_SIZE,
    epochs: int = DEFAULT_EPOCHS,
) -> int:
    return steps_per_epoch(manifest, batch_size) * epochs


def make_schedule(
    total_steps: int,
    manifest: dict,
    batch_size: int = DEFAULT_BATCH_SIZE,
    seed: int = 0,
    gamma: float = DEFAULT_GAMMA,
    learning_rate: float = DEFAULT_LEARNING_RATE,
) -> Schedule:
    """Deterministic two-phase step plans.

    Each epoch independently shuffles every objective stream and chops it
    into batches, so every example ordinal appears exactly once per epoch in
    its phase. ``total_steps`` may cut the final epoch short.
    """
    if total_steps < 0:
        raise ValueError("total_steps must be >= 0")
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma!r}")
    if total_steps == 0:
        return Schedule((), batch_size, seed, gamma, learning_rate)
    per_epoch = steps_per_epoch(manifest, batch_size)
    counts = _manifest_counts(manifest)
    n = counts["UNLIKELIHOOD"]
    rng = random.Random(seed)
    plans: list[StepPlan] = []
    step = 0
    while step < total_steps:
        streams = {}
        for objective in _OBJECTIVES:
            ordinals = list(range(n))
            rng.shuffle(ordinals)
            streams[objective] = ordinals
        for b in range(per_epoch):
            if step >= total_steps:
                break
            lo, hi = b * batch_size, (b + 1) * batch_size
            plans.append(
                StepPlan(
                    step=step,
                    phase1_unlikelihood=tuple(streams["UNLIKELIHOOD"][lo:hi]),
                    phase1_distill=tuple(streams["DISTILL"][lo:hi]),
                    phase2_plain=tuple(streams["DISTILL_PLAIN"][lo:hi]),
                    gamma=gamma,
                )
            )
            step += 1
    return Schedule(tuple(plans), batch_size, seed, gamma, learning_rate)
