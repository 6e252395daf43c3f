"""Shared value types: parity labels and admissible QES states."""

from __future__ import annotations

import dataclasses
import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

#: Tolerance on the x = 0 matching constraint (relative to the coefficient scale).
CONSTRAINT_TOL = 1e-9


class DomainError(ValueError):
    """Raised when parameters fall outside the domain of a closed-form family."""


class Parity(enum.IntEnum):
    EVEN = 1
    ODD = -1

    @classmethod
    def parse(cls, value) -> "Parity":
        """Accept ``even``/``odd``, ``+1``/``-1`` or an existing member."""
        if isinstance(value, Parity):
            return value
        if isinstance(value, str):
            key = value.strip().lower()
            if key in ("even", "+", "+1", "1"):
                return cls.EVEN
            if key in ("odd", "-", "-1"):
                return cls.ODD
            raise ValueError(f"unknown parity {value!r}")
        if value in (1, -1):
            return cls(int(value))
        raise ValueError(f"unknown parity {value!r}")

    @property
    def label(self) -> str:
        return "even" if self is Parity.EVEN else "odd"


class ParityCategory(str, enum.Enum):
    NATURAL = "natural"
    UNNATURAL = "unnatural"


def classify_parity_category(n: int, parity) -> ParityCategory:
    """Natural iff the parity equals (-1)**n."""
    eps = Parity.parse(parity)
    return ParityCategory.NATURAL if int(eps) == (-1) ** n else ParityCategory.UNNATURAL


def monic(coeffs) -> np.ndarray:
    """Scale an ascending coefficient vector so its highest nonzero entry is +1."""
    v = np.asarray(coeffs, dtype=float)
    scale = np.max(np.abs(v)) if v.size else 0.0
    if scale == 0.0:
        raise ValueError("zero polynomial cannot be made monic")
    nz = np.nonzero(np.abs(v) > 1e-13 * scale)[0]
    return v / v[nz[-1]]


@dataclass(frozen=True)
class QesState:
    """One admissible (or candidate) eigenpair of a symmetrized oscillator.

    ``coeffs`` holds v_0..v_n of the polynomial factor on the x < 0 branch in
    ascending monomial order; the x > 0 branch follows from the parity.
    ``parity`` is ``None`` for raw matrix eigenpairs not yet matched at x = 0.
    """

    family: str
    n: int
    energy: float
    coeffs: tuple[float, ...]
    a: float
    b: float
    c: Optional[float] = None
    parity: Optional[Parity] = None
    node_count: Optional[int] = None
    provenance: str = "matrix"
    roots: Optional[tuple[complex, ...]] = None
    notes: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.family not in ("quartic", "sextic"):
            raise ValueError(f"unknown family {self.family!r}")
        if self.provenance not in ("closed-form", "matrix", "bethe"):
            raise ValueError(f"unknown provenance {self.provenance!r}")
        if len(self.coeffs) != self.n + 1:
            raise ValueError("coefficient vector must have length n + 1")
        if self.family == "sextic" and self.c is None:
            raise ValueError("sextic states need the gauge parameter c")

    @property
    def gauge(self) -> dict:
        g = {"a": self.a, "b": self.b}
        if self.c is not None:
            g["c"] = self.c
        return g

    @property
    def matching_parameter(self) -> float:
        """The coefficient entering v_1 + (.) v_0 = 0: b (quartic) or c (sextic)."""
        return self.b if self.family == "quartic" else self.c

    @property
    def category(self) -> Optional[ParityCategory]:
        if self.parity is None:
            return None
        return classify_parity_category(self.n, self.parity)

    def replace(self, **changes) -> "QesState":
        return dataclasses.replace(self, **changes)


def constraint_residual(coeffs, matching_parameter: float, parity) -> float:
    """Scaled residual of the x = 0 matching condition on monic coefficients."""
    eps = Parity.parse(parity)
    v = np.asarray(coeffs, dtype=float)
    v0 = v[0]
    v1 = v[1] if v.size > 1 else 0.0
    if eps is Parity.EVEN:
        return abs(v1 + matching_parameter * v0) / max(1.0, abs(v0), abs(v1))
    return abs(v0) / max(1.0, abs(v1))


def satisfies_constraint(coeffs, matching_parameter: float, parity,
                         tol: float = CONSTRAINT_TOL) -> bool:
    return constraint_residual(coeffs, matching_parameter, parity) <= tol


def enforce_constraint(coeffs, matching_parameter: float, parity) -> tuple[float, ...]:
    """Project coefficients that already pass the filter onto the exact condition."""
    v = [float(x) for x in coeffs]
    if Parity.parse(parity) is Parity.ODD:
        v[0] = 0.0
    elif len(v) > 1:
        v[1] = -matching_parameter * v[0] + 0.0
    return tuple(v)
