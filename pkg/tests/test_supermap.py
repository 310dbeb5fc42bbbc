import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from posmaps import (BlockAlgebra, State, SuperMap, adjoint, ampliate, apply, choi_matrix, compose, example1,
                     from_basis_images, map_flags, power)
from posmaps.checks import choi_states
from posmaps.supermap import state_invariance_defect

from oracles import TWO_PI_5, ex1_formula, rand_complex, rand_element


def random_map(alg, rng):
    return SuperMap(alg, rand_complex(rng, (alg.dim, alg.dim)))


def conjugation_map(alg, mats):
    """x -> sum_k A_k x A_k^*, blockwise (each A_k is a list of per-block matrices)."""
    def f(x):
        return alg.element([sum(A[i] @ x.blocks[i] @ A[i].conj().T for A in mats) for i in range(len(x.blocks))])
    return SuperMap.from_function(alg, f)


def test_from_basis_images_identity(m2):
    f = from_basis_images(m2, list(m2.basis()))
    assert np.array_equal(f.matrix, np.eye(4))


def test_from_basis_images_example1_columns(m2, lam5):
    one = m2.identity()
    images = [0.5 * one, lam5.conjugate() * m2.matrix_unit(0, 1, 0), lam5 * m2.matrix_unit(0, 0, 1), 0.5 * one]
    f = from_basis_images(m2, images)
    for j, b in enumerate(m2.basis()):
        assert apply(f, b).allclose(images[j], 0)
    assert np.array_equal(f.matrix, example1(TWO_PI_5).map.matrix)


def test_from_basis_images_matches_formula(m2, lam5, rng):
    images = [m2.element([ex1_formula(b.blocks[0], lam5)]) for b in m2.basis()]
    f = from_basis_images(m2, images)
    for _ in range(100):
        X = rand_complex(rng, (2, 2))
        assert np.max(np.abs(apply(f, m2.element([X])).blocks[0] - ex1_formula(X, lam5))) <= 1e-12


def test_from_basis_images_errors(m2):
    with pytest.raises(ValueError):
        from_basis_images(m2, list(m2.basis())[:3])
    other = BlockAlgebra((1, 1, 1, 1))
    with pytest.raises(ValueError):
        from_basis_images(m2, list(other.basis()))
    with pytest.raises(ValueError):
        SuperMap(m2, np.eye(3))


def test_apply_examples(m2, lam5):
    f = example1(TWO_PI_5).map
    assert apply(f, m2.identity()).allclose(m2.identity(), 1e-15)
    E12 = m2.matrix_unit(0, 0, 1)
    assert apply(f, E12).allclose(lam5 * E12, 1e-15)
    assert apply(f, m2.zero()).allclose(m2.zero(), 0)
    with pytest.raises(ValueError):
        apply(f, BlockAlgebra((1,)).identity())


def test_power_and_compose(m2, lam5, rng):
    f = example1(TWO_PI_5).map
    assert np.array_equal(power(f, 0).matrix, np.eye(4))
    assert np.allclose(power(f, 2).matrix, compose(f, f).matrix, atol=0)
    E12 = m2.matrix_unit(0, 0, 1)
    X = E12.blocks[0]
    for _ in range(3):
        X = ex1_formula(X, lam5)
    assert np.allclose(apply(power(f, 3), E12).blocks[0], X, atol=1e-14)
    assert np.allclose(X, lam5 ** 3 * E12.blocks[0], atol=1e-14)
    with pytest.raises(ValueError):
        power(f, -1)
    with pytest.raises(ValueError):
        compose(f, SuperMap.identity(BlockAlgebra((1, 1))))


def test_ampliate_identity_and_k1(m2):
    idk = ampliate(SuperMap.identity(BlockAlgebra((2, 1))), 3)
    assert idk.algebra.block_sizes == (6, 3)
    assert np.array_equal(idk.matrix, np.eye(idk.algebra.dim))
    f = example1(1.0).map
    assert np.array_equal(ampliate(f, 1).matrix, f.matrix)


def test_ampliate_matches_blockwise_formula(lam5, rng):
    f = example1(TWO_PI_5).map
    big = ampliate(f, 2)
    for _ in range(20):
        X = rand_complex(rng, (4, 4))
        out = apply(big, big.algebra.element([X])).blocks[0]
        expect = np.zeros((4, 4), dtype=complex)
        for a in range(2):
            for b in range(2):
                expect[2 * a:2 * a + 2, 2 * b:2 * b + 2] = ex1_formula(X[2 * a:2 * a + 2, 2 * b:2 * b + 2], lam5)
        assert np.max(np.abs(out - expect)) <= 1e-12


def test_ampliate_multiblock_matches_blockwise(rng):
    # flip on C^2 ampliated by 3: each 3x3 block of the pair gets the other block's entries
    flip = SuperMap(BlockAlgebra((1, 1)), np.array([[0, 1], [1, 0]]))
    big = ampliate(flip, 3)
    assert big.algebra.block_sizes == (3, 3)
    x = rand_element(big.algebra, rng)
    y = apply(big, x)
    assert np.allclose(y.blocks[0], x.blocks[1]) and np.allclose(y.blocks[1], x.blocks[0])


def test_ampliate_choi_state_gives_min_eigenvalue_minus_half():
    for theta in (TWO_PI_5, math.pi, 0.3):
        f = example1(theta).map
        out = apply(ampliate(f, 2), choi_states(f.algebra, 2)[0])
        assert np.linalg.eigvalsh(out.blocks[0])[0] == pytest.approx(-0.5, abs=1e-12)
        assert np.allclose(out.blocks[0], choi_matrix(f), atol=1e-15)


def test_choi_matrix_examples(m2):
    ident = choi_matrix(SuperMap.identity(m2))
    # oracle: sum_ij E_ij (x) E_ij built directly
    direct = np.zeros((4, 4))
    for i in range(2):
        for j in range(2):
            Eij = np.zeros((2, 2)); Eij[i, j] = 1
            direct += np.kron(Eij, Eij)
    assert np.array_equal(ident, direct)
    assert np.linalg.eigvalsh(ident) == pytest.approx([0, 0, 0, 2], abs=1e-12)

    avg = SuperMap.from_function(m2, lambda x: (x.trace() / 2) * m2.identity())
    assert np.allclose(choi_matrix(avg), 0.5 * np.eye(4), atol=0)

    for theta in np.linspace(-3, 3, 7):
        lam = cmath.exp(1j * theta)
        C = choi_matrix(example1(theta).map)
        # oracle: 1/2 I_4 plus the lambda0 coupling between entries (0, 3) and (3, 0)
        expect = 0.5 * np.eye(4, dtype=complex)
        expect[0, 3], expect[3, 0] = lam, lam.conjugate()
        assert np.allclose(C, expect, atol=1e-15)
        assert np.linalg.eigvalsh(C)[0] == pytest.approx(-0.5, abs=1e-12)


def test_choi_matrix_rejects_multiblock():
    with pytest.raises(ValueError):
        choi_matrix(SuperMap.identity(BlockAlgebra((1, 1))))


def test_map_flags_examples(m2):
    s = example1(TWO_PI_5)
    assert map_flags(s.map, s.state) == {"unital": True, "adjoint_preserving": True, "state_invariant": True}
    P = np.diag([1.0, 0.0])
    cut = SuperMap.from_function(m2, lambda x: m2.element([P @ x.blocks[0] @ P]))
    assert not map_flags(cut)["unital"]
    assert "state_invariant" not in map_flags(cut)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 2), min_size=1, max_size=2), st.integers(0, 2**32 - 1))
def test_composition_laws(sizes, seed):
    rng = np.random.default_rng(seed)
    alg = BlockAlgebra(tuple(sizes))
    f, g, h = (random_map(alg, rng) for _ in range(3))
    lhs = compose(compose(f, g), h).matrix
    rhs = compose(f, compose(g, h)).matrix
    assert np.max(np.abs(lhs - rhs)) <= 1e-10 * max(1.0, np.max(np.abs(lhs)))
    scaled = SuperMap(alg, f.matrix / np.linalg.norm(f.matrix, 2))
    for m, n in [(1, 2), (2, 3), (0, 4)]:
        assert np.allclose(power(scaled, m + n).matrix, compose(power(scaled, m), power(scaled, n)).matrix,
                           atol=1e-10)
    x, y = rand_element(alg, rng), rand_element(alg, rng)
    a, b = 0.7 - 0.2j, -1.3
    assert (apply(f, a * x + b * y) - (a * apply(f, x) + b * apply(f, y))).norm() <= 1e-12 * 10 * (
        1 + np.linalg.norm(f.matrix)) * (x.norm() + y.norm())


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_ampliation_is_multiplicative(k, seed):
    rng = np.random.default_rng(seed)
    alg = BlockAlgebra((2, 1))
    f, g = random_map(alg, rng), random_map(alg, rng)
    lhs = ampliate(compose(f, g), k).matrix
    rhs = compose(ampliate(f, k), ampliate(g, k)).matrix
    assert np.max(np.abs(lhs - rhs)) <= 1e-10 * max(1.0, np.max(np.abs(lhs)))


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_choi_hermitian_for_adjoint_preserving(n, seed):
    rng = np.random.default_rng(seed)
    alg = BlockAlgebra((n,))
    f = conjugation_map(alg, [rand_complex(rng, (1, n, n)) for _ in range(2)])
    assert map_flags(f)["adjoint_preserving"]
    C = choi_matrix(f)
    assert np.max(np.abs(C - C.conj().T)) <= 1e-12 * max(1.0, np.max(np.abs(C)))


def test_state_invariance_both_formulations(rng):
    for theta in (TWO_PI_5, math.pi, 2.0):
        s = example1(theta)
        assert map_flags(s.map, s.state)["state_invariant"]
        assert state_invariance_defect(s.map, s.state) <= 1e-12
    alg = BlockAlgebra((2,))
    f = conjugation_map(alg, [[np.array([[1.0, 0.3], [0.0, 0.5]])]])
    st_ = State.normalized_trace(alg)
    assert not map_flags(f, st_)["state_invariant"]
    assert state_invariance_defect(f, st_) > 1e-3
