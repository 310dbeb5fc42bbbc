"""Arithmetic on finite-dimensional *-algebras.

An algebra is a direct sum of full complex matrix blocks ``M_{n_1} + ... + M_{n_k}``.
Elements hold one square matrix per block.  Vectorization uses column stacking
inside each block with blocks concatenated in order, so the canonical basis is

    E_11, E_21, ..., E_n1, E_12, ...   (block 1), then block 2, ...

All superoperator matrices and the file format depend on this ordering.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

HERMITIAN_TOL = 1e-10
CLUSTER_TOL = 1e-8


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class BlockAlgebra:
    """Direct sum of full matrix algebras with the given block sizes."""

    block_sizes: tuple[int, ...]

    def __post_init__(self):
        sizes = tuple(int(n) for n in self.block_sizes)
        if len(sizes) == 0 or any(n < 1 for n in sizes):
            raise ValueError(f"block sizes must be a nonempty list of positive ints, got {self.block_sizes!r}")
        object.__setattr__(self, "block_sizes", sizes)

    @property
    def dim(self) -> int:
        """Vector-space dimension D = sum of n_i^2."""
        return sum(n * n for n in self.block_sizes)

    @property
    def offsets(self) -> tuple[int, ...]:
        out, pos = [], 0
        for n in self.block_sizes:
            out.append(pos)
            pos += n * n
        return tuple(out)

    @property
    def is_abelian(self) -> bool:
        return all(n == 1 for n in self.block_sizes)

    def element(self, blocks: Sequence) -> "AlgElement":
        return AlgElement(self, tuple(np.asarray(b, dtype=complex) for b in blocks))

    def zero(self) -> "AlgElement":
        return self.element([np.zeros((n, n)) for n in self.block_sizes])

    def identity(self) -> "AlgElement":
        return self.element([np.eye(n) for n in self.block_sizes])

    def scalar(self, c: complex) -> "AlgElement":
        return self.element([c * np.eye(n) for n in self.block_sizes])

    def basis_index(self, block: int, row: int, col: int) -> int:
        n = self.block_sizes[block]
        return self.offsets[block] + col * n + row

    def matrix_unit(self, block: int, row: int, col: int) -> "AlgElement":
        v = np.zeros(self.dim, dtype=complex)
        v[self.basis_index(block, row, col)] = 1.0
        return self.devec(v)

    def basis(self) -> Iterator["AlgElement"]:
        """Canonical basis of matrix units, in vec order."""
        eye = np.eye(self.dim, dtype=complex)
        for j in range(self.dim):
            yield self.devec(eye[:, j])

    def devec(self, v) -> "AlgElement":
        v = np.asarray(v, dtype=complex).reshape(-1)
        if v.shape[0] != self.dim:
            raise ValueError(f"vector of length {v.shape[0]} does not match algebra dimension {self.dim}")
        blocks = []
        for off, n in zip(self.offsets, self.block_sizes):
            blocks.append(v[off:off + n * n].reshape((n, n), order="F"))
        return self.element(blocks)


@dataclass(frozen=True, eq=False)
class AlgElement:
    algebra: BlockAlgebra
    blocks: tuple[np.ndarray, ...] = field(repr=False)

    def __post_init__(self):
        blocks = tuple(_frozen(b) for b in self.blocks)
        sizes = self.algebra.block_sizes
        if len(blocks) != len(sizes):
            raise ValueError(f"expected {len(sizes)} blocks, got {len(blocks)}")
        for b, n in zip(blocks, sizes):
            if b.shape != (n, n):
                raise ValueError(f"block of shape {b.shape} does not match size {n}")
        object.__setattr__(self, "blocks", blocks)

    def vec(self) -> np.ndarray:
        return np.concatenate([b.reshape(-1, order="F") for b in self.blocks])

    def _check(self, other: "AlgElement"):
        if not isinstance(other, AlgElement):
            return NotImplemented
        if other.algebra != self.algebra:
            raise ValueError(f"algebra mismatch: {self.algebra.block_sizes} vs {other.algebra.block_sizes}")
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return AlgElement(self.algebra, tuple(a + b for a, b in zip(self.blocks, other.blocks)))

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return AlgElement(self.algebra, tuple(a - b for a, b in zip(self.blocks, other.blocks)))

    def __neg__(self):
        return AlgElement(self.algebra, tuple(-b for b in self.blocks))

    def __mul__(self, c):
        if not np.isscalar(c):
            return NotImplemented
        return AlgElement(self.algebra, tuple(c * b for b in self.blocks))

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (1.0 / c)

    def __matmul__(self, other):
        return multiply(self, other)

    @property
    def H(self) -> "AlgElement":
        return adjoint(self)

    def norm(self) -> float:
        """Hilbert-Schmidt (Frobenius) norm."""
        return float(np.linalg.norm(self.vec()))

    def op_norm(self) -> float:
        return max(float(np.linalg.norm(b, 2)) for b in self.blocks)

    def inner(self, other: "AlgElement") -> complex:
        """Hilbert-Schmidt inner product tr(self^* other), conjugate-linear in self."""
        self._check(other)
        return complex(np.vdot(self.vec(), other.vec()))

    def trace(self) -> complex:
        return complex(sum(np.trace(b) for b in self.blocks))

    def allclose(self, other: "AlgElement", atol: float = 1e-12) -> bool:
        self._check(other)
        return bool(np.max(np.abs(self.vec() - other.vec()), initial=0.0) <= atol)

    def __repr__(self):
        inner = ", ".join(np.array2string(b, precision=4, suppress_small=True) for b in self.blocks)
        return f"AlgElement({self.algebra.block_sizes}, [{inner}])"


def adjoint(x: AlgElement) -> AlgElement:
    return AlgElement(x.algebra, tuple(b.conj().T for b in x.blocks))


def multiply(x: AlgElement, y: AlgElement) -> AlgElement:
    x._check(y)
    return AlgElement(x.algebra, tuple(a @ b for a, b in zip(x.blocks, y.blocks)))


def jordan_product(x: AlgElement, y: AlgElement) -> AlgElement:
    """Symmetrized product (xy + yx)/2."""
    return 0.5 * (multiply(x, y) + multiply(y, x))


def _is_hermitian(x: AlgElement, tol: float) -> bool:
    scale = max(1.0, x.norm())
    return (x - adjoint(x)).norm() <= tol * scale


def hermitian_spectrum(h: AlgElement, cluster_tol: float = CLUSTER_TOL) -> list[tuple[float, AlgElement]]:
    """Spectral decomposition of a hermitian element into clustered eigenvalues and projections.

    Eigenvalues closer than ``cluster_tol * (1 + ||h||)`` are merged; the returned
    projections are mutually orthogonal and sum to the identity.  Output is sorted by
    eigenvalue, largest first.
    """
    if not _is_hermitian(h, HERMITIAN_TOL):
        raise ValueError("hermitian_spectrum requires a hermitian element")
    alg = h.algebra
    hnorm = h.op_norm()
    gap = cluster_tol * (1.0 + hnorm)

    pairs = []  # (eigenvalue, block index, eigenvector)
    for i, b in enumerate(h.blocks):
        w, v = np.linalg.eigh(0.5 * (b + b.conj().T))
        for k in range(len(w)):
            pairs.append((float(w[k]), i, v[:, k]))
    pairs.sort(key=lambda p: -p[0])

    clusters: list[list] = []
    for p in pairs:
        if clusters and abs(clusters[-1][-1][0] - p[0]) <= gap:
            clusters[-1].append(p)
        else:
            clusters.append([p])

    out = []
    for members in clusters:
        vals = [m[0] for m in members]
        lam = float(np.mean(vals))
        if abs(lam) <= gap:
            lam = 0.0
        blocks = [np.zeros((n, n), dtype=complex) for n in alg.block_sizes]
        for _, i, vec in members:
            blocks[i] += np.outer(vec, vec.conj())
        out.append((lam, alg.element(blocks)))
    return out


def is_scalar_multiple_of_identity(x: AlgElement, tol: float) -> bool:
    one = x.algebra.identity()
    c = one.inner(x) / one.inner(one)
    return (x - c * one).norm() <= tol * max(1.0, x.norm())


def structure_flags(x: AlgElement, tol: float = HERMITIAN_TOL) -> dict[str, bool]:
    """Predicates used by the eigenvector trichotomy.

    Residuals are compared against ``tol * max(1, ||x||)`` (operator norm based).
    """
    one = x.algebra.identity()
    scale = max(1.0, x.op_norm())
    xs = adjoint(x)

    def small(d: AlgElement, s: float = 1.0) -> bool:
        return d.op_norm() <= tol * s

    hermitian = small(x - xs, scale)
    psd = hermitian and all(
        np.linalg.eigvalsh(0.5 * (b + b.conj().T))[0] >= -tol * scale for b in x.blocks
    )
    projection = hermitian and small(x @ x - x, scale)
    partial_isometry = small(x @ xs @ x - x, scale)
    unitary = small(xs @ x - one) and small(x @ xs - one)
    return {
        "hermitian": hermitian,
        "psd": psd,
        "projection": projection,
        "partial_isometry": partial_isometry or unitary,
        "unitary": unitary,
        "scalar_multiple_of_identity": is_scalar_multiple_of_identity(x, tol),
    }


@dataclass(frozen=True, eq=False)
class State:
    """Faithful normal state given by positive-definite density blocks."""

    algebra: BlockAlgebra
    density_blocks: tuple[np.ndarray, ...] = field(repr=False)

    def __post_init__(self):
        dens = AlgElement(self.algebra, tuple(self.density_blocks))
        for b in dens.blocks:
            if not np.allclose(b, b.conj().T, atol=1e-12):
                raise ValueError("density blocks must be hermitian")
            if np.linalg.eigvalsh(b)[0] <= 0:
                raise ValueError("density blocks must be positive definite (faithful state)")
        if abs(dens.trace() - 1.0) > 1e-12:
            raise ValueError(f"state is not normalized: total trace {dens.trace()}")
        object.__setattr__(self, "density_blocks", dens.blocks)

    @property
    def density(self) -> AlgElement:
        return AlgElement(self.algebra, self.density_blocks)

    def __call__(self, x: AlgElement) -> complex:
        return complex(sum(np.trace(r @ b) for r, b in zip(self.density_blocks, x.blocks)))

    @classmethod
    def normalized_trace(cls, algebra: BlockAlgebra) -> "State":
        """The trace state (1/sum n_i) tr, e.g. tr/2 on M_2."""
        total = sum(algebra.block_sizes)
        return cls(algebra, tuple(np.eye(n) / total for n in algebra.block_sizes))
