"""Decompose a peripheral eigenvector of an ergodic semigroup into partial isometries.

Every such eigenvector is one of

  (i)   alpha * v, v a partial isometry with v*v = e, vv* = 1 - e, e a proper projection;
  (ii)  a1 * v1 + a2 * v2 with v1*v1 = v2v2* = e and v1v1* = v2*v2 = 1 - e;
  (iii) alpha * u, u unitary.

The case is read off the spectrum of ``x*x``.  Coefficients are reported real positive
and in descending order; the phases end up in the witnesses.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .config import DEFAULT_TOLERANCES, ToleranceSet
from .matalg import AlgElement, adjoint, hermitian_spectrum
from .supermap import SuperMap, apply

# witness identities must hold to this multiple of the clustering tolerance
RELATION_FACTOR = 100.0


class Case(str, Enum):
    PARTIAL_ISOMETRY = "i"
    TWO_PARTIAL_ISOMETRIES = "ii"
    UNITARY_MULTIPLE = "iii"


class ClassificationError(Exception):
    """Base class for classifier failures; ``diagnostics`` carries the evidence."""

    def __init__(self, message: str, diagnostics: Optional[dict] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class ZeroVector(ClassificationError):
    pass


class NotAnEigenvector(ClassificationError):
    pass


class PatternViolation(ClassificationError):
    """``x*x`` does not have one of the three admissible spectral patterns.

    For an eigenvector of an ergodic map this cannot happen, so it signals that the
    ergodicity hypothesis fails for the supplied map.
    """


@dataclass(frozen=True)
class Classification:
    case: Case
    coefficients: tuple[float, ...]
    witnesses: tuple[AlgElement, ...] = field(repr=False)
    e: Optional[AlgElement] = field(default=None, repr=False)
    e_perp: Optional[AlgElement] = field(default=None, repr=False)
    residuals: dict = field(default_factory=dict)

    def recombine(self) -> AlgElement:
        out = self.coefficients[0] * self.witnesses[0]
        for c, w in zip(self.coefficients[1:], self.witnesses[1:]):
            out = out + c * w
        return out


def witness_residuals(c: Classification) -> dict[str, float]:
    """Operator-norm deviations of every identity the case asserts."""
    one = c.witnesses[0].algebra.identity()
    dev = lambda a, b: (a - b).op_norm()
    if c.case is Case.UNITARY_MULTIPLE:
        (u,) = c.witnesses
        return {"u*u=1": dev(adjoint(u) @ u, one), "uu*=1": dev(u @ adjoint(u), one)}
    e, ep = c.e, c.e_perp
    res = {
        "e^2=e": dev(e @ e, e),
        "e*=e": dev(adjoint(e), e),
        "e+e_perp=1": dev(e + ep, one),
    }
    if c.case is Case.PARTIAL_ISOMETRY:
        (v,) = c.witnesses
        res.update({"v*v=e": dev(adjoint(v) @ v, e), "vv*=e_perp": dev(v @ adjoint(v), ep)})
    else:
        v1, v2 = c.witnesses
        res.update({
            "v1*v1=e": dev(adjoint(v1) @ v1, e),
            "v1v1*=e_perp": dev(v1 @ adjoint(v1), ep),
            "v2*v2=e_perp": dev(adjoint(v2) @ v2, ep),
            "v2v2*=e": dev(v2 @ adjoint(v2), e),
        })
    return res


def classify_eigenvector(f: SuperMap, lam: complex, x: AlgElement,
                         tols: ToleranceSet = DEFAULT_TOLERANCES) -> Classification:
    xnorm = x.norm()
    if xnorm == 0.0:
        raise ZeroVector("cannot classify the zero element")
    if abs(abs(lam) - 1.0) > tols.eps_peripheral:
        raise NotAnEigenvector(f"|lambda| = {abs(lam):.12g} is not 1", {"modulus": abs(lam)})
    resid = (apply(f, x) - lam * x).norm()
    if resid > tols.eps_residual * xnorm:
        raise NotAnEigenvector(
            f"residual ||f(x) - lambda x|| = {resid:.3g} exceeds {tols.eps_residual:g} * ||x||",
            {"residual": resid, "relative_residual": resid / xnorm},
        )

    # work with a unit-norm copy so clustering does not depend on the scale of x
    scale = x.op_norm()
    xh = x / scale
    spec = hermitian_spectrum(adjoint(xh) @ xh, tols.cluster_tol)
    zero_gap = tols.cluster_tol * 2.0
    nonzero = [(s2, p) for s2, p in spec if s2 > zero_gap]
    has_zero = len(nonzero) < len(spec)
    diag = {"clusters": [(s2 * scale ** 2, float(p.trace().real)) for s2, p in spec]}
    one = x.algebra.identity()

    if len(nonzero) == 1 and not has_zero:
        s = float(np.sqrt(nonzero[0][0]))
        c = Classification(Case.UNITARY_MULTIPLE, (s * scale,), (xh / s,))
    elif len(nonzero) == 1:
        s2, e = nonzero[0]
        s = float(np.sqrt(s2))
        c = Classification(Case.PARTIAL_ISOMETRY, (s * scale,), (xh / s,), e=e, e_perp=one - e)
    elif len(nonzero) == 2 and not has_zero:
        (s1sq, e1), (s2sq, e2) = nonzero
        s1, s2 = float(np.sqrt(s1sq)), float(np.sqrt(s2sq))
        v1 = (xh @ e1) / s1
        v2 = (xh @ e2) / s2
        c = Classification(Case.TWO_PARTIAL_ISOMETRIES, (s1 * scale, s2 * scale), (v1, v2), e=e1, e_perp=e2)
    else:
        raise PatternViolation(
            f"x*x has {len(nonzero)} nonzero singular clusters"
            f"{' plus a kernel' if has_zero else ''}; expected one of the three eigenvector patterns",
            diag,
        )

    res = witness_residuals(c)
    res["recombination"] = (c.recombine() - x).norm() / xnorm
    c = Classification(c.case, c.coefficients, c.witnesses, c.e, c.e_perp, res)
    bound = RELATION_FACTOR * tols.cluster_tol
    bad = {k: v for k, v in res.items() if v > bound}
    if bad:
        raise PatternViolation(
            f"case ({c.case.value}) relations fail: " + ", ".join(f"{k}={v:.3g}" for k, v in bad.items()),
            {**diag, "residuals": res},
        )
    return c


@dataclass(frozen=True)
class VerificationReport:
    recombination_error: float
    residuals: dict
    tol: float

    @property
    def passed(self) -> bool:
        return self.recombination_error <= self.tol and all(v <= self.tol for v in self.residuals.values())


def verify_classification(x: AlgElement, c: Classification, tol: float = 1e-9) -> VerificationReport:
    err = (c.recombine() - x).norm() / x.norm()
    return VerificationReport(err, witness_residuals(c), tol)
