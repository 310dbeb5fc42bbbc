"""Builders for the example systems (algebra, map, invariant state).

Maps are parameterized by an angle theta with ``lambda0 = exp(i theta)``, so
``|lambda0| = 1`` exactly.  Angles are reduced to the principal range (-pi, pi].

* ``example1(theta)``: on M_2,
  ``[[a, b], [c, d]] -> [[(a+d)/2, lambda0 b], [conj(lambda0) c, (a+d)/2]]`` with the state tr/2.
* ``example1_continuous(theta, t)``: the same with ``lambda0**t := exp(i t theta)``.
* ``flip_map()``: the swap on C^2, a concrete ergodic map with peripheral spectrum {1, -1}.
* ``mat2_lift(psi, omega, theta)``: for an abelian ``psi`` the map on Mat_2(M)
  ``[[a, b], [c, d]] -> [[psi((a+d)/2), lambda0 psi(b)], [conj(lambda0) psi(c), psi((a+d)/2)]]``
  with the state ``(omega(a) + omega(d)) / 2``.
* ``example2(theta)``: ``mat2_lift(flip_map(), theta)``.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .matalg import AlgElement, BlockAlgebra, State
from .supermap import SuperMap, compose, from_basis_images

EXAMPLE2_CONTINUOUS_UNSUPPORTED = (
    "example2-continuous is not constructed: it needs an ergodic semigroup (psi_t) of positive "
    "maps on an abelian algebra with point spectrum {1, -1}, for which no construction is "
    "available (on finite-dimensional abelian algebras psi_t(u) = exp(i pi t) u with u a "
    "hermitian unitary cannot preserve hermiticity at non-integer t)"
)


@dataclass(frozen=True)
class BuiltSystem:
    map: SuperMap
    state: State
    label: str
    params: dict = field(default_factory=dict)

    @property
    def algebra(self) -> BlockAlgebra:
        return self.map.algebra


def principal_angle(theta: float) -> float:
    """Reduce theta to (-pi, pi]."""
    t = math.remainder(float(theta), 2.0 * math.pi)
    if t <= -math.pi:
        t += 2.0 * math.pi
    return t


def _example1_map(lam: complex) -> SuperMap:
    m2 = BlockAlgebra((2,))
    one = m2.identity()
    # basis order E11, E21, E12, E22
    images = [0.5 * one, lam.conjugate() * m2.matrix_unit(0, 1, 0), lam * m2.matrix_unit(0, 0, 1), 0.5 * one]
    return from_basis_images(m2, images)


def example1(theta: float) -> BuiltSystem:
    th = principal_angle(theta)
    lam = cmath.exp(1j * th)
    f = _example1_map(lam)
    return BuiltSystem(f, State.normalized_trace(f.algebra), f"example1(theta={th!r})",
                       {"theta": th, "lambda0": lam})


def example1_continuous(theta: float, t: float) -> SuperMap:
    if t < 0:
        raise ValueError("the continuous family is defined for t >= 0")
    th = principal_angle(theta)
    return _example1_map(cmath.exp(1j * t * th))


def example1_family(theta: float) -> Callable[[float], SuperMap]:
    return lambda t: example1_continuous(theta, t)


def flip_map() -> BuiltSystem:
    c2 = BlockAlgebra((1, 1))
    f = SuperMap(c2, np.array([[0.0, 1.0], [1.0, 0.0]]))
    state = State(c2, (np.array([[0.5]]), np.array([[0.5]])))
    return BuiltSystem(f, state, "flip", {})


def mat2_lift(psi: SuperMap, omega: State, theta: float) -> BuiltSystem:
    """Lift an abelian map to ``Mat_2(M) = M_2 + ... + M_2`` (one 2x2 block per block of M)."""
    small = psi.algebra
    if not small.is_abelian:
        raise ValueError(f"mat2_lift needs an abelian algebra, got blocks {small.block_sizes}")
    if omega.algebra != small:
        raise ValueError("state and map live on different algebras")
    th = principal_angle(theta)
    lam = cmath.exp(1j * th)
    k = len(small.block_sizes)
    big = BlockAlgebra((2,) * k)
    P = psi.matrix

    def lifted(x: AlgElement) -> AlgElement:
        a = np.array([b[0, 0] for b in x.blocks])
        b = np.array([b[0, 1] for b in x.blocks])
        c = np.array([b[1, 0] for b in x.blocks])
        d = np.array([b[1, 1] for b in x.blocks])
        diag = P @ ((a + d) / 2)
        pb, pc = lam * (P @ b), lam.conjugate() * (P @ c)
        return big.element([[[diag[i], pb[i]], [pc[i], diag[i]]] for i in range(k)])

    f = SuperMap.from_function(big, lifted)
    weights = [float(np.real(r[0, 0])) for r in omega.density_blocks]
    state = State(big, tuple(0.5 * w * np.eye(2) for w in weights))
    if abs(lam - 1) < 1e-12 or abs(lam + 1) < 1e-12:
        warnings.warn("lambda0 in {1, -1}: outside the regime of the lifted example", stacklevel=2)
    return BuiltSystem(f, state, f"mat2_lift(theta={th!r})", {"theta": th, "lambda0": lam})


def example2(theta: float) -> BuiltSystem:
    base = flip_map()
    out = mat2_lift(base.map, base.state, theta)
    return BuiltSystem(out.map, out.state, f"example2(theta={out.params['theta']!r})", out.params)


def example2_elements() -> dict[str, AlgElement]:
    """The named elements of the lifted flip example, as block tuples over M_2 + M_2.

    ``u = (1, -1)`` spans the -1 eigenspace of the flip, so ``[[0, 1], [0, 0]]`` is the
    element with both blocks E12 and ``[[0, 0], [u, 0]]`` has blocks (E21, -E21).
    """
    alg = BlockAlgebra((2, 2))
    e = lambda blk, r, c: alg.matrix_unit(blk, r, c)
    E12 = e(0, 0, 1) + e(1, 0, 1)
    E21 = e(0, 1, 0) + e(1, 1, 0)
    uE12 = e(0, 0, 1) - e(1, 0, 1)
    uE21 = e(0, 1, 0) - e(1, 1, 0)
    diag_u = alg.element([np.eye(2), -np.eye(2)])
    upper = alg.element([np.diag([1.0, 0.0]), np.diag([1.0, 0.0])])
    lower = alg.element([np.diag([0.0, 1.0]), np.diag([0.0, 1.0])])
    return {"1_upper": E12, "1_lower": E21, "u_upper": uE12, "u_lower": uE21,
            "diag_u": diag_u, "p_upper": upper, "p_lower": lower}


@dataclass(frozen=True)
class SemigroupLawReport:
    max_deviation: float
    deviations: tuple[tuple[float, float, float], ...]
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tol


def semigroup_law_check(family: Callable[[float], SuperMap], pairs: Sequence[tuple[float, float]],
                        tol: float = 1e-12) -> SemigroupLawReport:
    """max over (s, t) of the spectral-norm distance between f_s o f_t and f_{s+t}."""
    devs = []
    for s, t in pairs:
        if s <= 0 or t <= 0:
            raise ValueError("semigroup_law_check expects s, t > 0")
        lhs = compose(family(s), family(t)).matrix
        rhs = family(s + t).matrix
        devs.append((s, t, float(np.linalg.norm(lhs - rhs, 2))))
    return SemigroupLawReport(max((d[2] for d in devs), default=0.0), tuple(devs), tol)


BUILTINS = ("example1", "example1-continuous", "example2", "flip")


def builtin(name: str, theta: Optional[float] = None, t: Optional[float] = None) -> BuiltSystem:
    """Dispatch by CLI name."""
    if name == "example2-continuous":
        raise ValueError(EXAMPLE2_CONTINUOUS_UNSUPPORTED)
    if name not in BUILTINS:
        raise ValueError(f"unknown builtin {name!r}; choose from {', '.join(BUILTINS)}")
    if name == "flip":
        return flip_map()
    if theta is None:
        raise ValueError(f"builtin {name} needs theta")
    if name == "example1":
        return example1(theta)
    if name == "example2":
        return example2(theta)
    if t is None:
        raise ValueError("example1-continuous needs t")
    f = example1_continuous(theta, t)
    th = principal_angle(theta)
    return BuiltSystem(f, State.normalized_trace(f.algebra), f"example1_continuous(theta={th!r}, t={float(t)!r})",
                       {"theta": th, "t": float(t), "lambda0": cmath.exp(1j * th)})
