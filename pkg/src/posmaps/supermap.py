"""Linear maps on block algebras as superoperator matrices acting on ``vec(x)``."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .matalg import AlgElement, BlockAlgebra, State, adjoint


@dataclass(frozen=True, eq=False)
class SuperMap:
    algebra: BlockAlgebra
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        d = self.algebra.dim
        if m.shape != (d, d):
            raise ValueError(f"superoperator shape {m.shape} does not match algebra dimension {d}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def __call__(self, x: AlgElement) -> AlgElement:
        return apply(self, x)

    def __matmul__(self, other: "SuperMap") -> "SuperMap":
        return compose(self, other)

    @classmethod
    def identity(cls, algebra: BlockAlgebra) -> "SuperMap":
        return cls(algebra, np.eye(algebra.dim))

    @classmethod
    def from_function(cls, algebra: BlockAlgebra, f: Callable[[AlgElement], AlgElement]) -> "SuperMap":
        return from_basis_images(algebra, [f(b) for b in algebra.basis()])


def from_basis_images(algebra: BlockAlgebra, images: Sequence[AlgElement]) -> SuperMap:
    """Superoperator whose j-th column is ``vec(images[j])``."""
    if len(images) != algebra.dim:
        raise ValueError(f"need {algebra.dim} basis images, got {len(images)}")
    for img in images:
        if img.algebra != algebra:
            raise ValueError("basis image lives in a different algebra")
    return SuperMap(algebra, np.column_stack([img.vec() for img in images]))


def apply(f: SuperMap, x: AlgElement) -> AlgElement:
    if x.algebra != f.algebra:
        raise ValueError(f"algebra mismatch: map on {f.algebra.block_sizes}, element in {x.algebra.block_sizes}")
    return f.algebra.devec(f.matrix @ x.vec())


def compose(f: SuperMap, g: SuperMap) -> SuperMap:
    """The map ``x -> f(g(x))``."""
    if f.algebra != g.algebra:
        raise ValueError("cannot compose maps on different algebras")
    return SuperMap(f.algebra, f.matrix @ g.matrix)


def power(f: SuperMap, n: int) -> SuperMap:
    if n < 0:
        raise ValueError("power requires n >= 0")
    return SuperMap(f.algebra, np.linalg.matrix_power(f.matrix, n))


def _ampliation_permutation(algebra: BlockAlgebra, k: int) -> tuple[BlockAlgebra, np.ndarray]:
    """Index map from stacked k x k arrays of small-algebra vectors to the enlarged vec.

    The stacked vector lists, for each (a, b) in column-major order, the vec of the
    (a, b) entry.  Inside block i of the enlarged algebra the (a, b) sub-block occupies
    rows ``a*n_i:(a+1)*n_i`` and columns ``b*n_i:(b+1)*n_i`` (k x k factor major).
    """
    big = BlockAlgebra(tuple(k * n for n in algebra.block_sizes))
    d = algebra.dim
    perm = np.empty(k * k * d, dtype=np.intp)
    for b in range(k):
        for a in range(k):
            slot = (b * k + a) * d
            for i, n in enumerate(algebra.block_sizes):
                for c in range(n):
                    for r in range(n):
                        small = algebra.basis_index(i, r, c)
                        perm[slot + small] = big.basis_index(i, a * n + r, b * n + c)
    return big, perm


def ampliate(f: SuperMap, k: int) -> SuperMap:
    """``id_k (x) f`` on the algebra with every block enlarged by a factor k."""
    if k < 1:
        raise ValueError("ampliation order must be >= 1")
    if k == 1:
        return f
    big, perm = _ampliation_permutation(f.algebra, k)
    d = f.algebra.dim
    stacked = np.kron(np.eye(k * k), f.matrix)
    out = np.zeros((big.dim, big.dim), dtype=complex)
    out[np.ix_(perm, perm)] = stacked
    return SuperMap(big, out)


def choi_matrix(f: SuperMap) -> np.ndarray:
    """Block matrix whose (i, j) block is ``f(E_ij)``; single-block algebras only."""
    if len(f.algebra.block_sizes) != 1:
        raise ValueError("choi_matrix is defined for single-block algebras; use k_positivity_test instead")
    n = f.algebra.block_sizes[0]
    c = np.zeros((n * n, n * n), dtype=complex)
    for i in range(n):
        for j in range(n):
            img = apply(f, f.algebra.matrix_unit(0, i, j)).blocks[0]
            c[i * n:(i + 1) * n, j * n:(j + 1) * n] = img
    return c


def map_flags(f: SuperMap, state: Optional[State] = None, tol: float = 1e-10) -> dict[str, bool]:
    """Unitality, adjoint preservation and (if a state is given) invariance of the state.

    Invariance is tested on the predual side: ``S^H vec(rho) == vec(rho)``.
    """
    alg = f.algebra
    one = alg.identity()
    unital = (apply(f, one) - one).op_norm() <= tol
    adj_ok = True
    for b in alg.basis():
        if (apply(f, adjoint(b)) - adjoint(apply(f, b))).norm() > tol:
            adj_ok = False
            break
    flags = {"unital": bool(unital), "adjoint_preserving": adj_ok}
    if state is not None:
        rho = state.density.vec()
        flags["state_invariant"] = bool(np.max(np.abs(f.matrix.conj().T @ rho - rho)) <= tol)
    return flags


def state_invariance_defect(f: SuperMap, state: State) -> float:
    """max over basis b of |omega(f(b)) - omega(b)|; the primal form of state invariance."""
    return max(abs(state(apply(f, b)) - state(b)) for b in f.algebra.basis())
