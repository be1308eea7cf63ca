import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from optimal_pac.invariants import (
    branch_agreement_violations,
    cross_branch_violations,
    member_violations,
)
from optimal_pac.learners import (
    ConceptClass,
    Ensemble,
    Interval,
    LabeledExample,
    NotRealizableError,
    Rectangle,
    TargetSpec,
    Threshold,
    erm_train,
    exact_error,
    exact_error_1d,
    is_consistent,
    majority_label,
    mc_error,
    predict,
    predict_many,
    shattering_vcdim,
    simon_blocks,
    train_erm,
    train_hanneke,
    train_simon,
)
from optimal_pac.subsample import subsample_count

T, I, R = ConceptClass.THRESHOLD, ConceptClass.INTERVAL, ConceptClass.RECTANGLE
THRESH_SPEC = TargetSpec(T, Threshold(0.5))


# --- majority ----------------------------------------------------------------

@pytest.mark.parametrize("votes, out", [((1, 1, -1), 1), ((1, -1), 1), ((-1, -1, 1), -1)])
def test_majority_label(votes, out):
    assert majority_label(votes) == out


def test_majority_rejects_empty():
    with pytest.raises(ValueError):
        majority_label([])


@given(st.lists(st.sampled_from([-1, 1]), min_size=1, max_size=50))
def test_majority_tie_goes_positive(v):
    assert majority_label(v + [-x for x in v]) == 1


@given(st.lists(st.sampled_from([-1, 1]), min_size=1, max_size=51))
def test_majority_matches_sign_rule(v):
    assert majority_label(v) == 2 * int(sum(v) >= 0) - 1


# --- prediction --------------------------------------------------------------

def test_predict_examples():
    assert predict(Threshold(0.5), 0.5) == 1
    assert predict(Threshold(0.5), 0.4999) == -1
    assert predict(Interval(0.2, 0.4), 0.5) == -1
    assert predict(Interval(0.2, 0.4), 0.4) == 1
    assert all(predict(Interval.empty(), x) == -1 for x in (-1e9, 0, 0.5, 1e9))
    assert predict(Rectangle(0, 1, 0, 1), (1.0, 0.0)) == 1
    assert predict(Rectangle(0, 1, 0, 1), (1.0, 1.1)) == -1
    assert predict(Rectangle.empty(), (0.5, 0.5)) == -1


def test_predict_dimension_mismatch():
    with pytest.raises(ValueError):
        predict(Rectangle(0, 1, 0, 1), 0.5)
    with pytest.raises(ValueError):
        predict_many(Threshold(0.5), np.zeros((3, 2)))


def test_label_validation():
    with pytest.raises(ValueError):
        LabeledExample((0.1,), 0)


# --- ERM ---------------------------------------------------------------------

def test_erm_threshold_example():
    S = [LabeledExample((0.2,), -1), LabeledExample((0.7,), 1)]
    h = erm_train(T, S)
    assert h == Threshold(0.7)
    assert all(predict(h, ex.point) == ex.label for ex in S)


def test_erm_interval_no_positives():
    h = erm_train(I, [LabeledExample((0.3,), -1), LabeledExample((0.6,), -1)])
    assert h.is_empty


def test_erm_empty_sample():
    assert erm_train(T, []) == Threshold(math.inf)
    assert erm_train(I, []).is_empty
    assert erm_train(R, []).is_empty


def test_erm_rectangle_example():
    S = [LabeledExample((.2, .3), 1), LabeledExample((.6, .5), 1), LabeledExample((.9, .9), -1)]
    h = erm_train(R, S)
    assert h == Rectangle(.2, .6, .3, .5)
    assert all(predict(h, ex.point) == ex.label for ex in S)


@pytest.mark.parametrize("cls, X, y", [
    (T, [[0.2], [0.7]], [1, -1]),
    (I, [[0.1], [0.5], [0.9]], [1, -1, 1]),
    (R, [[0.1, 0.1], [0.5, 0.5], [0.9, 0.9]], [1, -1, 1]),
])
def test_erm_not_realizable(cls, X, y):
    with pytest.raises(NotRealizableError):
        erm_train(cls, (np.array(X), np.array(y)))


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(list(ConceptClass)), st.integers(0, 60), st.integers(0, 2**32 - 1))
def test_erm_consistent_and_deterministic(cls, m, seed):
    from optimal_pac.learners import DEFAULT_TARGETS

    spec = TargetSpec(cls, DEFAULT_TARGETS[cls])
    X, y = spec.sample(m, np.random.default_rng(seed))
    h = erm_train(cls, (X, y))
    assert is_consistent(h, X, y)
    assert erm_train(cls, (X.copy(), y.copy())) == h


# --- learners ----------------------------------------------------------------

def test_hanneke_terminal_case(rng):
    X, y = THRESH_SPEC.sample(3, rng)
    ens = train_hanneke(THRESH_SPEC, (X, y))
    assert ens.members == (erm_train(T, (X, y)),)


@pytest.mark.parametrize("m, n", [(16, 9), (100, 81)])
def test_hanneke_sizes(spec, rng, m, n):
    X, y = spec.sample(m, rng)
    ens = train_hanneke(spec, (X, y))
    assert len(ens) == n == subsample_count(m)
    assert member_violations(ens, X, y) == 0


@pytest.mark.parametrize("m", [0, 1, 4, 5, 16, 33, 64, 250])
def test_hanneke_batched_equals_reference(spec, rng, m):
    X, y = spec.sample(m, rng)
    assert train_hanneke(spec, (X, y)) == train_hanneke(spec, (X, y), method="reference")


def test_hanneke_rejects_unrealizable():
    X = np.array([[0.1], [0.2], [0.3], [0.4], [0.5]])
    y = np.array([1, -1, 1, 1, 1])
    with pytest.raises(NotRealizableError):
        train_hanneke(THRESH_SPEC, (X, y))


@pytest.mark.parametrize("m", [16, 64, 256])
def test_cross_branch_and_agreement(spec, m):
    for t in range(10):
        rng = np.random.default_rng([m, t])
        X, y = spec.sample(m, rng)
        ens = train_hanneke(spec, (X, y))
        assert cross_branch_violations(ens, X, y) == 0
        assert branch_agreement_violations(ens, rng.random((500, spec.concept.input_dim))) == 0


def test_simon_blocks():
    assert simon_blocks(9, 2) == [range(0, 3), range(3, 6), range(6, 9)]
    assert simon_blocks(10, 2) == [range(0, 3), range(3, 6), range(6, 9)]
    assert simon_blocks(7, 1) == [range(0, 7)]
    with pytest.raises(ValueError):
        simon_blocks(2, 2)


def test_simon_k1_is_plain_erm(spec, rng):
    X, y = spec.sample(40, rng)
    assert train_simon(spec, (X, y), 1) == train_erm(spec, (X, y))


def test_simon_block_members(rng):
    X, y = THRESH_SPEC.sample(10, rng)
    ens = train_simon(THRESH_SPEC, (X, y), 2)
    assert len(ens) == 3
    for h, b in zip(ens.members, simon_blocks(10, 2)):
        assert h == erm_train(T, (X[b.start:b.stop], y[b.start:b.stop]))


# --- error measurement -------------------------------------------------------

def grid_error_1d(predictor, target, n=1_000_000):
    """Midpoint-rule integral of the disagreement indicator on [0, 1]."""
    xs = (np.arange(n) + 0.5) / n
    return float(np.mean(predict_many(predictor, xs) != predict_many(target, xs)))


def test_exact_error_identity():
    assert exact_error_1d(Threshold(0.5), THRESH_SPEC) == 0
    assert exact_error(Rectangle(.2, .7, .3, .8), TargetSpec(R, Rectangle(.2, .7, .3, .8))) == 0


def test_exact_error_threshold_offset():
    assert exact_error_1d(Threshold(0.6), THRESH_SPEC) == pytest.approx(0.1, abs=1e-15)


def test_median_threshold_ensemble():
    ens = Ensemble((Threshold(0.4), Threshold(0.55), Threshold(0.7)))
    oracle = grid_error_1d(ens, Threshold(0.5))
    assert oracle == pytest.approx(0.05, abs=2e-6)
    assert exact_error_1d(ens, THRESH_SPEC) == pytest.approx(oracle, abs=2e-6)
    assert exact_error_1d(ens, THRESH_SPEC) == pytest.approx(0.05, abs=1e-15)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-0.2, 1.2, allow_nan=False), min_size=1, max_size=15).filter(
    lambda v: len(v) % 2 == 1))
def test_median_identity(ts):
    ens = Ensemble(tuple(Threshold(t) for t in ts))
    med = sorted(ts)[len(ts) // 2]
    assert exact_error_1d(ens, THRESH_SPEC) == pytest.approx(
        exact_error_1d(Threshold(med), THRESH_SPEC), abs=1e-12)


@settings(max_examples=15, deadline=None)
@given(st.lists(st.tuples(st.floats(0, 1), st.floats(0, 1)), min_size=1, max_size=6),
       st.tuples(st.floats(0, 1), st.floats(0, 1)))
def test_interval_ensemble_against_grid(pairs, tgt):
    ens = Ensemble(tuple(Interval(min(p), max(p)) for p in pairs))
    target = Interval(min(tgt), max(tgt))
    exact = exact_error_1d(ens, TargetSpec(I, target))
    assert exact == pytest.approx(grid_error_1d(ens, target, 200_000), abs=2 * (2 * len(pairs) + 2) / 200_000)


def test_rectangle_exact_against_grid(rng):
    spec = TargetSpec(R, Rectangle(.2, .7, .3, .8))
    X, y = spec.sample(64, rng)
    ens = train_hanneke(spec, (X, y))
    n = 1000
    g = (np.arange(n) + 0.5) / n
    pts = np.stack(np.meshgrid(g, g, indexing="ij"), axis=-1).reshape(-1, 2)
    grid = float(np.mean(predict_many(ens, pts) != predict_many(spec.target, pts)))
    # each box edge can misclassify at most one row of grid cells
    tol = (4 * len(ens) + 4) / n
    assert exact_error(ens, spec) == pytest.approx(grid, abs=tol)


def test_exact_error_1d_rejects_2d():
    with pytest.raises(ValueError):
        exact_error_1d(Rectangle(0, 1, 0, 1), TargetSpec(R, Rectangle(0, 1, 0, 1)))


def test_mc_error_slab():
    spec = TargetSpec(R, Rectangle(.2, .7, .3, .8))
    pred = Rectangle(.2, .7, .1, .8)
    assert exact_error(pred, spec) == pytest.approx(0.1, abs=1e-12)
    err = mc_error(pred, spec, 100_000, seed=3)
    sigma = math.sqrt(0.1 * 0.9 / 100_000)
    assert abs(err - 0.1) <= 3 * sigma
    assert abs(err - 0.1) <= 0.01


def test_mc_error_identity_and_determinism():
    spec = TargetSpec(R, Rectangle(.2, .7, .3, .8))
    assert mc_error(spec.target, spec, 1000, 1) == 0
    pred = Rectangle(.25, .7, .3, .8)
    assert mc_error(pred, spec, 5000, 42) == mc_error(pred, spec, 5000, 42)


# --- VC dimension ------------------------------------------------------------

def candidate_labelings(cls, pool):
    """Labelings of ``pool`` realized by an explicit finite family of hypotheses.

    Edges at the pool coordinates and just outside them realize every
    labeling any member of the class can produce on the pool.
    """
    pool = np.asarray(pool).reshape(-1, cls.input_dim)
    coords = [np.unique(pool[:, a]) for a in range(cls.input_dim)]
    out = set()
    if cls is T:
        hyps = [Threshold(t) for t in list(coords[0]) + [math.inf]]
    elif cls is I:
        hyps = [Interval(a, b) for a in coords[0] for b in coords[0] if a <= b] + [Interval.empty()]
    else:
        xs, ys = coords
        hyps = [Rectangle(a, b, c, d) for a in xs for b in xs if a <= b
                for c in ys for d in ys if c <= d] + [Rectangle.empty()]
    for h in hyps:
        out.add(tuple(predict_many(h, pool)))
    return out


def brute_vcdim(cls, pool, cap):
    pool = np.asarray(pool).reshape(-1, cls.input_dim)
    best = 0
    for k in range(1, cap + 1):
        for idx in itertools.combinations(range(len(pool)), k):
            if len(candidate_labelings(cls, pool[list(idx)])) == 2 ** k:
                best = k
                break
    return best


@pytest.mark.parametrize("cls, pool, d", [
    (T, np.linspace(0.1, 0.9, 9), 1),
    (I, np.linspace(0.05, 0.95, 10), 2),
])
def test_vcdim_1d_examples(cls, pool, d):
    assert shattering_vcdim(cls, pool, cap=d + 1) == d
    assert brute_vcdim(cls, pool, d + 1) == d


def test_vcdim_rectangle_pool():
    rng = np.random.default_rng(5)
    pool = rng.random((12, 2))
    assert shattering_vcdim(R, pool, cap=5) == 4


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("cls", [T, I, R])
def test_vcdim_agrees_with_enumeration(cls, seed):
    rng = np.random.default_rng(seed)
    pool = rng.random((7, cls.input_dim))
    cap = cls.vc_dim + 1
    assert shattering_vcdim(cls, pool, cap) == brute_vcdim(cls, pool, cap)


def test_hypothesis_validation():
    with pytest.raises(ValueError):
        TargetSpec(T, Interval(0, 1))
    with pytest.raises(ValueError):
        Ensemble(())
