from __future__ import annotations

from dataclasses import asdict, dataclass, fields


@dataclass(frozen=True)
class ToleranceSet:
    """Relative tolerances shared by the spectral analysis, classifier and reports."""

    eps_peripheral: float = 1e-8
    cluster_tol: float = 1e-8
    eps_residual: float = 1e-9
    psd_tol: float = 1e-10

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not v > 0:
                raise ValueError(f"tolerance {f.name} must be strictly positive, got {v!r}")

    def to_dict(self) -> dict[str, float]:
        return asdict(self)

    def replace(self, **overrides) -> "ToleranceSet":
        vals = self.to_dict()
        vals.update({k: v for k, v in overrides.items() if v is not None})
        return ToleranceSet(**vals)


DEFAULT_TOLERANCES = ToleranceSet()
