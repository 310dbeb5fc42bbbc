"""Eigen-analysis of superoperators: clustered eigenspaces, peripheral spectrum, ergodicity,
group closure of the peripheral spectrum and the covariance of eigenspaces under
adjoints and Jordan products."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .config import DEFAULT_TOLERANCES, ToleranceSet
from .matalg import AlgElement, adjoint, is_scalar_multiple_of_identity, jordan_product
from .supermap import SuperMap, apply

NULLSPACE_SAFETY = 1e3


@dataclass(frozen=True)
class EigenCluster:
    value: complex
    multiplicity: int  # geometric, i.e. rank of the computed null space
    algebraic: int  # number of solver eigenvalues merged into this cluster
    basis: tuple[AlgElement, ...] = field(repr=False)


@dataclass(frozen=True)
class SpectralData:
    clusters: tuple[EigenCluster, ...]
    eps_peripheral: float
    operator_norm: float
    warnings: tuple[str, ...] = ()

    @property
    def peripheral(self) -> tuple[EigenCluster, ...]:
        per = [c for c in self.clusters if abs(abs(c.value) - 1.0) <= self.eps_peripheral]
        return tuple(sorted(per, key=lambda c: principal_arg(c.value)))

    @property
    def fixed_space(self) -> Optional[EigenCluster]:
        for c in self.clusters:
            if abs(c.value - 1.0) <= self.eps_peripheral:
                return c
        return None

    @property
    def peripheral_subspace_basis(self) -> list[AlgElement]:
        return [b for c in self.peripheral for b in c.basis]

    def cluster_at(self, value: complex, tol: Optional[float] = None) -> Optional[EigenCluster]:
        tol = self.eps_peripheral if tol is None else tol
        best = min(self.clusters, key=lambda c: abs(c.value - value), default=None)
        if best is not None and abs(best.value - value) <= tol:
            return best
        return None


def principal_arg(z: complex) -> float:
    """Argument in (-pi, pi]; values on the negative real axis map to +pi."""
    a = math.atan2(z.imag, z.real)
    if a <= -math.pi + 1e-12:
        a = math.pi
    return a


def _cluster_values(values: np.ndarray, tol: float) -> list[list[complex]]:
    groups: list[list[complex]] = []
    for v in sorted(values, key=lambda z: (-round(abs(z), 12), principal_arg(z))):
        for g in groups:
            if abs(v - g[0]) <= tol * (1.0 + abs(g[0])):
                g.append(v)
                break
        else:
            groups.append([v])
    return groups


def _canonical_phase(v: np.ndarray) -> np.ndarray:
    mags = np.abs(v)
    k = int(np.argmax(mags >= mags.max() - 1e-12))
    return v * (abs(v[k]) / v[k])


def eigendecompose(f: SuperMap, tols: ToleranceSet = DEFAULT_TOLERANCES,
                   null_tol: Optional[float] = None) -> SpectralData:
    """Spectrum of ``f`` with orthonormal (Hilbert-Schmidt) eigenspace bases.

    Eigenvalues from a dense solver are merged when within ``cluster_tol``; each
    cluster's eigenspace is the numerical null space of ``S - value*I``, cut at
    ``null_tol`` (default ``1e3 * D * eps * ||S||``).  Only geometric eigenspaces
    are computed.  Raises ``numpy.linalg.LinAlgError`` if the solver fails.
    """
    S = f.matrix
    d = S.shape[0]
    if d > 4096:
        raise ValueError(f"dimension {d} exceeds the dense-solver limit of 4096")
    snorm = float(np.linalg.norm(S, 2)) if d else 0.0
    tau = null_tol if null_tol is not None else NULLSPACE_SAFETY * d * np.finfo(float).eps * max(snorm, 1.0)

    values = np.linalg.eigvals(S)
    warnings = []
    clusters = []
    for group in _cluster_values(values, tols.cluster_tol):
        lam = complex(np.mean(group))
        _, s, vh = np.linalg.svd(S - lam * np.eye(d))
        null = [vh[i].conj() for i in range(d) if s[i] <= tau]
        if not null:
            null = [vh[-1].conj()]
            warnings.append(f"eigenvalue {lam:.6g}: null space empty at threshold {tau:.3g}; "
                            f"kept smallest singular vector (sigma={s[-1]:.3g})")
        if len(group) > len(null):
            warnings.append(f"eigenvalue {lam:.6g}: algebraic count {len(group)} exceeds "
                            f"geometric multiplicity {len(null)} (non-semisimple)")
        basis = tuple(f.algebra.devec(_canonical_phase(v)) for v in null)
        clusters.append(EigenCluster(lam, len(basis), len(group), basis))
    return SpectralData(tuple(clusters), tols.eps_peripheral, snorm, tuple(warnings))


def peripheral_point_spectrum(data: SpectralData) -> list[tuple[complex, int]]:
    return [(c.value, c.multiplicity) for c in data.peripheral]


@dataclass(frozen=True)
class ErgodicityVerdict:
    ergodic: bool
    fixed_dim: int


def is_ergodic(data: SpectralData, tol: float = 1e-8) -> ErgodicityVerdict:
    fixed = data.fixed_space
    if fixed is None:
        return ErgodicityVerdict(False, 0)
    ok = fixed.multiplicity == 1 and is_scalar_multiple_of_identity(fixed.basis[0], tol)
    return ErgodicityVerdict(bool(ok), fixed.multiplicity)


@dataclass(frozen=True)
class GroupVerdict:
    is_group: bool
    has_identity: bool
    missing: tuple[tuple[complex, complex], ...]
    missing_conjugates: tuple[complex, ...]


def group_closure(values: Sequence[complex], tol: float = 1e-8) -> GroupVerdict:
    """Check whether a finite set of unit-modulus numbers is a subgroup of the circle."""
    vals = [complex(v) for v in values]
    if not vals:
        raise ValueError("group_closure needs a nonempty list")

    def member(z: complex) -> bool:
        return any(abs(z - v) <= tol for v in vals)

    has_one = member(1.0)
    missing_conj = tuple(v for v in vals if not member(v.conjugate()))
    missing = tuple((a, b) for a, b in itertools.combinations_with_replacement(vals, 2) if not member(a * b))
    ok = has_one and not missing_conj and not missing
    return GroupVerdict(ok, has_one, missing, missing_conj)


@dataclass(frozen=True)
class StructureReport:
    max_adjoint_residual: float
    max_jordan_residual: float
    max_xxstar_residual: float
    pairs_tested: int
    failures: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return not self.failures


def peripheral_structure_tests(f: SuperMap, data: SpectralData, tol: float = 1e-8) -> StructureReport:
    """Residuals of ``f(x*) = conj(l) x*`` and ``f(x o y) = l1 l2 (x o y)`` on peripheral eigenvectors.

    Residuals are normalized by ``||x||`` (resp. ``||x|| ||y||``) in the Hilbert-Schmidt norm.
    """
    labelled = [(c.value, b) for c in data.peripheral for b in c.basis]
    failures = []
    max_adj = max_jor = max_xx = 0.0

    for lam, x in labelled:
        xs = adjoint(x)
        r = (apply(f, xs) - lam.conjugate() * xs).norm() / x.norm()
        max_adj = max(max_adj, r)
        if r > tol:
            failures.append(f"adjoint: eigenvalue {lam:.6g}, residual {r:.3g}")
        # x o x* must be a fixed point
        j = jordan_product(x, xs)
        r = (apply(f, j) - j).norm() / x.norm() ** 2
        max_xx = max(max_xx, r)
        if r > tol:
            failures.append(f"x o x*: eigenvalue {lam:.6g}, residual {r:.3g}")

    pairs = 0
    for (l1, x), (l2, y) in itertools.combinations_with_replacement(labelled, 2):
        j = jordan_product(x, y)
        r = (apply(f, j) - (l1 * l2) * j).norm() / (x.norm() * y.norm())
        pairs += 1
        max_jor = max(max_jor, r)
        if r > tol:
            failures.append(f"jordan: eigenvalues ({l1:.6g}, {l2:.6g}), residual {r:.3g}")
    return StructureReport(max_adj, max_jor, max_xx, pairs, tuple(failures))


def eigen_residual(f: SuperMap, value: complex, x: AlgElement) -> float:
    """||f(x) - value*x|| in the Hilbert-Schmidt norm."""
    return (apply(f, x) - value * x).norm()

