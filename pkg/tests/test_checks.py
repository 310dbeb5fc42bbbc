import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from posmaps import BlockAlgebra, SuperMap, example1, example2
from posmaps.checks import (EXACT, NOT_REFUTED, REFUTED, choi_states, cp_test, k_positivity_test,
                            positivity_sample_test, random_psd, schwarz_battery, schwarz_defect,
                            schwarz_violation_search, trial_rng)
from posmaps.papermaps import flip_map

from oracles import TWO_PI_5, rand_complex

GOLDEN_PSD_SEED42 = np.array([
    [3.3383146076923054 + 0j, -0.2935567806086686 - 1.5283916065147685j],
    [-0.2935567806086686 + 1.5283916065147685j, 0.7820957644507945 + 0j],
])


def transpose_map(n):
    alg = BlockAlgebra((n,))
    return SuperMap.from_function(alg, lambda x: alg.element([x.blocks[0].T]))


def kraus_map(alg, kraus):
    return SuperMap.from_function(alg, lambda x: alg.element([sum(K @ x.blocks[0] @ K.conj().T for K in kraus)]))


def test_random_psd_golden():
    x = random_psd(BlockAlgebra((2,)), 42)
    assert np.allclose(x.blocks[0], GOLDEN_PSD_SEED42, rtol=0, atol=1e-15)


def test_random_psd_is_psd_and_seeded():
    alg = BlockAlgebra((3, 1))
    x = random_psd(alg, trial_rng(7, 3))
    y = random_psd(alg, trial_rng(7, 3))
    assert x.allclose(y, 0)
    for b in x.blocks:
        assert np.allclose(b, b.conj().T, atol=0)
        assert np.linalg.eigvalsh(b)[0] >= -1e-12


@pytest.mark.parametrize("theta", [TWO_PI_5, math.pi])
def test_example1_hierarchy(theta):
    f = example1(theta).map
    pos = positivity_sample_test(f, trials=1000, seed=42)
    assert pos.violations == 0 and pos.trials == 1000 and pos.certifies == NOT_REFUTED
    # oracle: the output eigenvalues of a unit-trace input are (1 +- 2|x12|) / 2 >= 0
    assert pos.worst_value >= 0

    kp = k_positivity_test(f, 2, trials=1000, seed=42)
    assert kp.first_violation_trial == 0 and kp.certifies == REFUTED
    assert kp.worst_value == pytest.approx(-0.5, abs=1e-9)

    cp = cp_test(f)
    assert cp.worst_value == pytest.approx(-0.5, abs=1e-9)
    assert cp.certifies == REFUTED and not cp.heuristic

    sw = schwarz_violation_search(f, trials=1000, seed=42)
    assert sw.first_violation_trial == 0
    assert sw.worst_value <= -0.4


def test_schwarz_closed_form():
    # x = E11 + E12: defect = [[3/4, lam/2], [conj(lam)/2, -1/4]], smallest eigenvalue 1/4 - sqrt(1/2)
    for theta in (TWO_PI_5, math.pi, 0.1):
        f = example1(theta).map
        x = f.algebra.matrix_unit(0, 0, 0) + f.algebra.matrix_unit(0, 0, 1)
        lam = complex(math.cos(theta), math.sin(theta))
        expect = np.array([[0.75, lam / 2], [lam.conjugate() / 2, -0.25]])
        assert np.allclose(schwarz_defect(f, x).blocks[0], expect, atol=1e-15)
        sw = schwarz_violation_search(f, trials=5, seed=0)
        assert sw.worst_value == pytest.approx(0.25 - math.sqrt(0.5), abs=1e-12)


def test_schwarz_battery_shape():
    assert len(schwarz_battery(BlockAlgebra((2,)))) == 2
    assert len(schwarz_battery(BlockAlgebra((3, 1)))) == 7


def test_transpose_positive_not_two_positive():
    f = transpose_map(2)
    assert positivity_sample_test(f, trials=300, seed=1).violations == 0
    kp = k_positivity_test(f, 2, trials=50, seed=1)
    # the Choi matrix of the transpose is the swap, eigenvalue -1 on the antisymmetric vector
    assert kp.first_violation_trial == 0 and kp.worst_value == pytest.approx(-1.0, abs=1e-12)
    assert cp_test(f).worst_value == pytest.approx(-1.0, abs=1e-12)


def test_non_positive_map_detected():
    alg = BlockAlgebra((2,))
    # x -> x - tr(x)/2 * 1 sends E11 to diag(1/2, -1/2)
    f = SuperMap.from_function(alg, lambda x: x - (x.trace() / 2) * alg.identity())
    r = positivity_sample_test(f, trials=100, seed=0)
    assert r.violated and r.first_violation_trial == 0 and r.worst_value < -0.1


@pytest.mark.parametrize("build", [flip_map, lambda: example2(TWO_PI_5)])
def test_ergodic_examples_positive(build):
    f = build().map
    assert positivity_sample_test(f, trials=200, seed=3).violations == 0


def test_identity_and_flip_pass_everything():
    for f in (SuperMap.identity(BlockAlgebra((2,))), flip_map().map):
        for k in (1, 2, 3):
            assert k_positivity_test(f, k, trials=100, seed=5).violations == 0
        assert schwarz_violation_search(f, trials=100, seed=5).violations == 0
        assert not cp_test(f, trials=100).violated


def test_cp_exact_on_kraus_map(rng):
    alg = BlockAlgebra((3,))
    f = kraus_map(alg, [rand_complex(rng, (3, 3)) for _ in range(2)])
    r = cp_test(f)
    assert r.certifies == EXACT and r.violations == 0 and r.worst_value >= -1e-10


def test_cp_multiblock_is_heuristic():
    r = cp_test(example2(TWO_PI_5).map, trials=50)
    assert r.heuristic and r.k == 4 and r.violated


def test_kpos_at_block_size_agrees_with_cp():
    for f in (example1(0.7).map, transpose_map(3), SuperMap.identity(BlockAlgebra((3,)))):
        n = f.algebra.block_sizes[0]
        kp = k_positivity_test(f, n, trials=20, seed=0)
        cp = cp_test(f)
        assert kp.violated == cp.violated
        if cp.violated:
            assert kp.worst_value == pytest.approx(cp.worst_value, abs=1e-10)


def test_k_one_matches_plain_positivity():
    for f in (example1(TWO_PI_5).map, transpose_map(2)):
        assert not k_positivity_test(f, 1, trials=200, seed=9).violated
        assert not positivity_sample_test(f, trials=200, seed=9).violated


def test_choi_states_trace_and_rank():
    alg = BlockAlgebra((3, 1))
    states = choi_states(alg, 2)
    assert [s.trace().real for s in states] == [2.0, 1.0]
    for s in states:
        for b in s.blocks:
            assert np.linalg.matrix_rank(b) <= 1


def test_reports_are_deterministic():
    f = example1(TWO_PI_5).map
    for fn in (lambda: positivity_sample_test(f, 100, seed=11), lambda: k_positivity_test(f, 2, 100, seed=11),
               lambda: schwarz_violation_search(f, 100, seed=11)):
        a, b = fn(), fn()
        assert (a.worst_value, a.violations, a.first_violation_trial) == (b.worst_value, b.violations,
                                                                          b.first_violation_trial)
        assert a.witness.allclose(b.witness, 0)


def test_bad_arguments():
    f = example1(1.0).map
    with pytest.raises(ValueError):
        positivity_sample_test(f, trials=0)
    with pytest.raises(ValueError):
        k_positivity_test(f, 0)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_kraus_maps_never_refuted(k, seed):
    rng = np.random.default_rng(seed)
    alg = BlockAlgebra((2,))
    f = kraus_map(alg, [rand_complex(rng, (2, 2)) for _ in range(2)])
    r = k_positivity_test(f, k, trials=30, seed=seed % 1000, tol=1e-9)
    assert r.violations == 0


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 3), st.integers(0, 2**32 - 1))
def test_refutation_is_monotone_in_k(k, seed):
    # a k-positive map is j-positive for j < k, so a violation at j persists at k
    f = transpose_map(2)
    s = seed % 1000
    assert not k_positivity_test(f, 1, trials=30, seed=s).violated
    assert k_positivity_test(f, k, trials=30, seed=s).violated
