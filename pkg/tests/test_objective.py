import math
from collections import Counter

import numpy as np
import pytest

from negforge.objective import (
    Schedule,
    combined_loss,
    kl_loss,
    kl_loss_grad_student,
    make_schedule,
    steps_for_epochs,
    steps_per_epoch,
    ul_loss,
    ul_loss_grad,
)


def manifest(n):
    return {"counts": {"UNLIKELIHOOD": n, "DISTILL": n, "DISTILL_PLAIN": n}}


# ---------------------------------------------------------------------------
# ul_loss


def test_ul_loss_values():
    assert ul_loss(0.0) == 0.0
    assert abs(ul_loss(0.5) - math.log(2)) < 1e-12
    assert abs(ul_loss(1.0) - (-math.log(1e-6))) < 1e-9  # clamped, finite


def test_ul_loss_domain_errors():
    for bad in (-0.1, 1.1, float("nan"), float("inf")):
        with pytest.raises(ValueError):
            ul_loss(bad)


def test_ul_loss_monotone_on_grid():
    grid = np.linspace(0.0, 1.0 - 1e-6, 2001)
    values = [ul_loss(p) for p in grid]
    assert all(b > a for a, b in zip(values, values[1:]))


# ---------------------------------------------------------------------------
# kl_loss


def test_kl_identical_is_zero():
    p = [0.2, 0.3, 0.5]
    assert abs(kl_loss(p, p)) < 1e-12


def test_kl_hand_computed_values():
    got = kl_loss([0.75, 0.25], [0.5, 0.5])
    want = 0.75 * math.log(1.5) + 0.25 * math.log(0.5)
    assert abs(got - want) < 1e-12
    assert abs(got - 0.130812) < 1e-6
    assert abs(kl_loss([1.0, 0.0], [0.5, 0.5]) - math.log(2)) < 1e-12


def test_kl_shape_mismatch():
    with pytest.raises(ValueError, match="support"):
        kl_loss([0.5, 0.5], [0.3, 0.3, 0.4])


def test_kl_rejects_non_distributions():
    with pytest.raises(ValueError):
        kl_loss([0.5, 0.6], [0.5, 0.5])
    with pytest.raises(ValueError):
        kl_loss([0.5, 0.5], [-0.5, 1.5])


def test_kl_nonnegative_on_random_pairs():
    rng = np.random.default_rng(42)
    for _ in range(1000):
        size = rng.integers(2, 30)
        teacher = rng.dirichlet(np.ones(size))
        student = rng.dirichlet(np.ones(size))
        assert kl_loss(teacher, student) >= -1e-12


def test_kl_zero_student_mass_is_smoothed_finite():
    value = kl_loss([0.5, 0.5], [1.0, 0.0])
    assert math.isfinite(value)
    assert value > 10  # 0.5 * ln(0.5 / 1e-12) dominates


# ---------------------------------------------------------------------------
# combined_loss


def test_combined_loss_values():
    assert combined_loss(1.0, 2.0, 0.4) == pytest.approx(1.6, abs=0)
    assert combined_loss(3.0, 7.0, 0.0) == 7.0
    assert combined_loss(3.0, 7.0, 1.0) == 3.0


def test_combined_loss_gamma_range():
    with pytest.raises(ValueError):
        combined_loss(1.0, 1.0, 1.5)
    with pytest.raises(ValueError):
        combined_loss(1.0, 1.0, -0.1)


def test_combined_loss_linear_in_each_argument():
    rng = np.random.default_rng(7)
    for _ in range(100):
        a, b, c, d = rng.uniform(0, 5, size=4)
        g = rng.uniform(0, 1)
        assert combined_loss(a + c, b, g) == pytest.approx(
            combined_loss(a, b, g) + combined_loss(c, 0.0, g)
        )
        assert combined_loss(a, b + d, g) == pytest.approx(
            combined_loss(a, b, g) + combined_loss(0.0, d, g)
        )


# ---------------------------------------------------------------------------
# gradients vs central finite differences


def test_ul_gradient_matches_finite_differences():
    rng = np.random.default_rng(3)
    h = 1e-7
    for p in rng.uniform(0.01, 0.98, size=100):
        analytic = ul_loss_grad(p)
        numeric = (ul_loss(p + h) - ul_loss(p - h)) / (2 * h)
        assert abs(analytic - numeric) / abs(numeric) < 1e-5


def test_kl_gradient_matches_finite_differences():
    rng = np.random.default_rng(4)
    h = 1e-8
    for _ in range(100):
        size = int(rng.integers(2, 8))
        teacher = rng.dirichlet(np.ones(size) * 2)
        student = rng.dirichlet(np.ones(size) * 2)
        student = np.clip(student, 0.01, None)
        student /= student.sum()
        analytic = kl_loss_grad_student(teacher, student)
        for i in range(size):
            up = student.copy()
            up[i] += h
            down = student.copy()
            down[i] -= h
            numeric = (kl_loss(teacher, up) - kl_loss(teacher, down)) / (2 * h)
            denom = max(abs(numeric), 1e-12)
            assert abs(analytic[i] - numeric) / denom < 1e-5


# ---------------------------------------------------------------------------
# schedule


def test_schedule_zero_steps_is_empty():
    schedule = make_schedule(0, manifest(32))
    assert len(schedule) == 0
    assert isinstance(schedule, Schedule)


def test_schedule_full_run_shape():
    m = manifest(20_000)
    assert steps_per_epoch(m, 32) == 625
    total = steps_for_epochs(m, 32, 5)
    assert total == 3125  # 20,000 / 32 per epoch, five epochs
    schedule = make_schedule(total, m, 32, seed=9)
    assert len(schedule) == 3125
    for phase in ("phase1_unlikelihood", "phase1_distill", "phase2_plain"):
        appearances = Counter()
        for plan in schedule:
            batch = getattr(plan, phase)
            assert len(batch) == 32
            appearances.update(batch)
        assert set(appearances) == set(range(20_000))
        assert set(appearances.values()) == {5}


def test_schedule_partitions_each_epoch():
    m = manifest(12)
    schedule = make_schedule(steps_for_epochs(m, 4, 3), m, 4, seed=1)
    per_epoch = steps_per_epoch(m, 4)
    assert per_epoch == 3
    for epoch in range(3):
        steps = schedule[epoch * per_epoch:(epoch + 1) * per_epoch]
        for phase in ("phase1_unlikelihood", "phase1_distill", "phase2_plain"):
            seen = [i for plan in steps for i in getattr(plan, phase)]
            assert sorted(seen) == list(range(12))


def test_schedule_deterministic_under_seed():
    m = manifest(64)
    a = make_schedule(10, m, 8, seed=5)
    b = make_schedule(10, m, 8, seed=5)
    c = make_schedule(10, m, 8, seed=6)
    assert a.steps == b.steps
    assert a.steps != c.steps


def test_schedule_errors():
    with pytest.raises(ValueError, match="empty"):
        make_schedule(1, manifest(0))
    with pytest.raises(ValueError, match="evenly divide"):
        make_schedule(1, manifest(10), 3)
    with pytest.raises(ValueError, match="differ in size"):
        make_schedule(1, {"counts": {"UNLIKELIHOOD": 4, "DISTILL": 8, "DISTILL_PLAIN": 4}}, 2)
    with pytest.raises(ValueError, match="lacks counts"):
        make_schedule(1, {"counts": {"UNLIKELIHOOD": 4}}, 2)


def test_schedule_carries_consumer_metadata():
    schedule = make_schedule(2, manifest(8), 4, seed=0, gamma=0.4, learning_rate=1e-5)
    assert schedule.gamma == 0.4
    assert schedule.learning_rate == 1e-5
    assert all(plan.gamma == 0.4 for plan in schedule)
