"""Sampled positivity, k-positivity, complete positivity via the Choi matrix, and a search
for violations of the Schwarz inequality ``f(x)* f(x) <= f(x* x)``.

Sampling can only refute a property; reports say which of the two they did through the
``certifies`` field.  Structured witnesses are always tried before random samples, and
trial ``t`` draws from its own generator seeded with ``(seed, t)`` so reports do not
depend on evaluation order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .matalg import AlgElement, BlockAlgebra, adjoint
from .supermap import SuperMap, ampliate, apply, choi_matrix

# Schwarz inputs are rescaled to the Hilbert-Schmidt norm of the battery elements E_ii + E_ij
SCHWARZ_INPUT_NORM = math.sqrt(2.0)

REFUTED = "refuted"  # a violation was exhibited: sound
NOT_REFUTED = "not_refuted"  # no violation found: heuristic
EXACT = "exact"  # decided (Choi matrix)


@dataclass(frozen=True)
class CheckReport:
    kind: str
    trials: int
    violations: int
    worst_value: float
    witness: Optional[AlgElement] = field(default=None, repr=False)
    seed: Optional[int] = None
    certifies: str = NOT_REFUTED
    first_violation_trial: Optional[int] = None
    k: Optional[int] = None
    heuristic: bool = True
    tol: float = 1e-10

    @property
    def violated(self) -> bool:
        return self.violations > 0


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, trial])


def random_psd(algebra: BlockAlgebra, rng) -> AlgElement:
    """``G G*`` per block, G with i.i.d. standard complex Gaussian entries."""
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    blocks = []
    for n in algebra.block_sizes:
        g = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)
        h = g @ g.conj().T
        blocks.append(0.5 * (h + h.conj().T))
    return algebra.element(blocks)


def random_element(algebra: BlockAlgebra, rng) -> AlgElement:
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    return algebra.element([
        (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)
        for n in algebra.block_sizes
    ])


def _min_eig(y: AlgElement) -> tuple[float, float]:
    """Smallest eigenvalue of the hermitian part and size of the antihermitian part."""
    lo = min(float(np.linalg.eigvalsh(0.5 * (b + b.conj().T))[0]) for b in y.blocks)
    skew = max(float(np.linalg.norm(0.5 * (b - b.conj().T), 2)) for b in y.blocks)
    return lo, skew


def _run_positivity(f: SuperMap, kind: str, trials: int, seed: int, tol: float,
                    battery: Sequence[AlgElement], input_trace: float, k: Optional[int]) -> CheckReport:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    alg = f.algebra
    n_random = max(trials - len(battery), 0)
    inputs: Iterable = list(battery) + [None] * n_random

    worst, witness, violations, first = math.inf, None, 0, None
    total = 0
    for t, x in enumerate(inputs):
        if x is None:
            x = random_psd(alg, trial_rng(seed, t))
        x = x * (input_trace / x.trace().real)
        lo, skew = _min_eig(apply(f, x))
        bound = tol * x.op_norm()
        total += 1
        if lo < worst:
            worst, witness = lo, x
        if lo < -bound or skew > bound:
            violations += 1
            if first is None:
                first = t
    return CheckReport(kind, total, violations, float(worst), witness, seed,
                       REFUTED if violations else NOT_REFUTED, first, k, True, tol)


def positivity_sample_test(f: SuperMap, trials: int = 1000, seed: int = 0, tol: float = 1e-10) -> CheckReport:
    """Apply ``f`` to unit-trace random PSD elements and record the smallest output eigenvalue.

    A trial is a violation when that eigenvalue is below ``-tol * ||x||`` (or the output
    fails to be hermitian by more than that).
    """
    return _run_positivity(f, "positivity", trials, seed, tol, (), 1.0, None)


def choi_states(algebra: BlockAlgebra, k: int) -> list[AlgElement]:
    """Unnormalized maximally entangled rank-one elements, one per block, in the k-ampliation.

    In block i the state is ``sum_{a,b<m} E_ab (x) E_ab`` with ``m = min(k, n_i)``; for
    ``m = n_i`` the ampliated map sends it to the Choi matrix of block i.
    """
    big = BlockAlgebra(tuple(k * n for n in algebra.block_sizes))
    out = []
    for i, n in enumerate(algebra.block_sizes):
        m = min(k, n)
        blocks = [np.zeros((k * nn, k * nn), dtype=complex) for nn in algebra.block_sizes]
        for a in range(m):
            for b in range(m):
                blocks[i][a * n + a, b * n + b] = 1.0
        out.append(big.element(blocks))
    return out


def k_positivity_test(f: SuperMap, k: int, trials: int = 1000, seed: int = 0, tol: float = 1e-10) -> CheckReport:
    """Positivity sampling of ``id_k (x) f``, starting with the Choi states.

    Every input is rescaled to trace ``min(k, max n_i)``, the trace of the Choi state of
    the largest block, so trial #0 reproduces the Choi matrix on single-block algebras.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    big = ampliate(f, k)
    battery = choi_states(f.algebra, k)
    scale = float(min(k, max(f.algebra.block_sizes)))
    return _run_positivity(big, "k_positivity", max(trials, len(battery)), seed, tol, battery, scale, k)


def cp_test(f: SuperMap, tol: float = 1e-10, trials: int = 1000, seed: int = 0) -> CheckReport:
    """Complete positivity: exact via the Choi matrix on a single block.

    Multi-block algebras fall back to sampled k-positivity with k = sum of block sizes
    (flagged ``heuristic``).
    """
    alg = f.algebra
    if len(alg.block_sizes) != 1:
        k = sum(alg.block_sizes)
        r = k_positivity_test(f, k, trials, seed, tol)
        return CheckReport("cp_choi", r.trials, r.violations, r.worst_value, r.witness, seed,
                           r.certifies, r.first_violation_trial, k, True, tol)
    c = choi_matrix(f)
    herm = 0.5 * (c + c.conj().T)
    skew = float(np.linalg.norm(0.5 * (c - c.conj().T), 2))
    lo = float(np.linalg.eigvalsh(herm)[0])
    bad = lo < -tol or skew > tol
    n = alg.block_sizes[0]
    # id_n (x) f sends this input to the Choi matrix itself
    witness = choi_states(alg, n)[0] if bad else None
    return CheckReport("cp_choi", 1, int(bad), lo, witness, None, REFUTED if bad else EXACT,
                       0 if bad else None, n, False, tol)


def schwarz_battery(algebra: BlockAlgebra) -> list[AlgElement]:
    """Matrix-unit combinations ``E_ii + E_ij`` (i != j) in every block; ``E_11`` for 1x1 blocks."""
    out = []
    for blk, n in enumerate(algebra.block_sizes):
        if n == 1:
            out.append(algebra.matrix_unit(blk, 0, 0))
            continue
        for i in range(n):
            for j in range(n):
                if i != j:
                    out.append(algebra.matrix_unit(blk, i, i) + algebra.matrix_unit(blk, i, j))
    return out


def schwarz_defect(f: SuperMap, x: AlgElement) -> AlgElement:
    """``f(x* x) - f(x)* f(x)``; positive semidefinite for every x iff f is a Schwarz map."""
    fx = apply(f, x)
    return apply(f, adjoint(x) @ x) - adjoint(fx) @ fx


def schwarz_violation_search(f: SuperMap, trials: int = 1000, seed: int = 0, tol: float = 1e-10) -> CheckReport:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    alg = f.algebra
    battery = schwarz_battery(alg)
    inputs = list(battery) + [None] * max(trials - len(battery), 0)
    worst, witness, violations, first = math.inf, None, 0, None
    for t, x in enumerate(inputs):
        if x is None:
            x = random_element(alg, trial_rng(seed, t))
        x = x * (SCHWARZ_INPUT_NORM / x.norm())
        lo, _ = _min_eig(schwarz_defect(f, x))
        if lo < worst:
            worst, witness = lo, x
        if lo < -tol * x.norm() ** 2:
            violations += 1
            if first is None:
                first = t
    return CheckReport("schwarz", len(inputs), violations, float(worst), witness, seed,
                       REFUTED if violations else NOT_REFUTED, first, None, True, tol)
