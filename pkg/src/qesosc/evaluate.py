"""Pointwise evaluation of symmetrized potentials and QES wavefunctions.

Everything is computed on the x < 0 branch, where |x| = -x and the polynomial
factor is phi(x) = sum_k v_k x**k; values for x > 0 follow from
psi(x) = eps * psi(-x).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.integrate import simpson

from .states import QesState

DEFAULT_WINDOW = {"quartic": 6.0, "sextic": 4.0}
# residual grids stay clear of the kink at the origin
ORIGIN_EXCLUSION = 1e-3


@dataclass(frozen=True)
class PotentialSpec:
    """V(x) = x^4 - s|x|^3 + r x^2 - q|x|  or  x^6 - u|x|^5 + t x^4 - s|x|^3 + r x^2 - q|x|."""

    family: str
    coefficients: tuple[float, ...]

    def __post_init__(self):
        expected = {"quartic": 3, "sextic": 5}.get(self.family)
        if expected is None:
            raise ValueError(f"unknown family {self.family!r}")
        if len(self.coefficients) != expected:
            raise ValueError(f"{self.family} potential needs {expected} coefficients")

    @property
    def names(self) -> tuple[str, ...]:
        return ("s", "r", "q") if self.family == "quartic" else ("u", "t", "s", "r", "q")

    def as_dict(self) -> dict:
        return dict(zip(self.names, self.coefficients))

    def halfline_poly(self) -> np.ndarray:
        """Ascending coefficients of V on x >= 0."""
        if self.family == "quartic":
            s, r, q = self.coefficients
            return np.array([0.0, -q, r, -s, 1.0])
        u, t, s, r, q = self.coefficients
        return np.array([0.0, -q, r, -s, t, -u, 1.0])

    def __call__(self, x):
        return potential_value(x, self)


@dataclass(frozen=True)
class GridFunction:
    xs: np.ndarray
    ys: np.ndarray

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float)
        ys = np.asarray(self.ys, dtype=float)
        if xs.shape != ys.shape or xs.ndim != 1:
            raise ValueError("xs and ys must be 1-d arrays of equal length")
        if np.any(np.diff(xs) <= 0):
            raise ValueError("xs must be strictly increasing")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)


def potential_value(x, spec: PotentialSpec):
    """Evaluate the symmetrized polynomial; exactly even in x."""
    return P.polyval(np.abs(x), spec.halfline_poly())


def potential_spec(state: QesState) -> PotentialSpec:
    """Potential coefficients implied by a state's gauge parameters and degree."""
    a, b, n = state.a, state.b, state.n
    if state.family == "quartic":
        return PotentialSpec("quartic", (4 * a, 4 * a * a + 2 * b, 4 * a * b + 2 * n + 2))
    c = state.c
    # monic phi: coefficient of x^{n-1} is minus the root sum
    root_sum = -state.coeffs[n - 1] if n > 0 else 0.0
    return PotentialSpec("sextic", (
        -6 * a,
        9 * a * a - 4 * b,
        12 * a * b - 2 * c,
        4 * b * b + 6 * a * c - 2 * n - 3,
        -2 * root_sum + 6 * a * (n + 1) + 4 * b * c,
    ))


def _left_gauge_poly(state: QesState) -> np.ndarray:
    """Ascending coefficients of W(x) restricted to x <= 0."""
    if state.family == "quartic":
        # -|x|^3/3 + a x^2 - b|x|
        return np.array([0.0, state.b, state.a, 1.0 / 3.0])
    # -x^4/4 - a|x|^3 + b x^2 - c|x|
    return np.array([0.0, state.c, state.b, state.a, -0.25])


def gauge_exponent(x, state: QesState):
    """W(x); even in x."""
    return P.polyval(-np.abs(x), _left_gauge_poly(state))


def _left_branch(y, state: QesState):
    """psi, psi', psi'' at points y <= 0."""
    w = _left_gauge_poly(state)
    v = np.asarray(state.coeffs, dtype=float)
    W = P.polyval(y, w)
    W1 = P.polyval(y, P.polyder(w))
    W2 = P.polyval(y, P.polyder(w, 2))
    f = P.polyval(y, v)
    f1 = P.polyval(y, P.polyder(v)) if v.size > 1 else np.zeros_like(y)
    f2 = P.polyval(y, P.polyder(v, 2)) if v.size > 2 else np.zeros_like(y)
    e = np.exp(W)
    return e * f, e * (f1 + W1 * f), e * (f2 + 2 * W1 * f1 + (W2 + W1 * W1) * f)


def _require_parity(state: QesState) -> int:
    if state.parity is None:
        raise ValueError("state has no parity; run the matching filter first")
    return int(state.parity)


def wavefunction_value(x, state: QesState):
    """psi(x) = exp(W(x)) * phi(x), with phi on x > 0 given by eps * phi(-x)."""
    eps = _require_parity(state)
    x = np.asarray(x, dtype=float)
    psi, _, _ = _left_branch(-np.abs(x), state)
    out = np.where(x > 0, eps * psi, psi)
    return out if out.ndim else float(out)


def wavefunction_derivatives(x, state: QesState):
    """Analytic (psi, psi', psi'') away from x = 0 (one-sided limits at 0)."""
    eps = _require_parity(state)
    x = np.asarray(x, dtype=float)
    psi, d1, d2 = _left_branch(-np.abs(x), state)
    right = x > 0
    return (np.where(right, eps * psi, psi),
            np.where(right, -eps * d1, d1),
            np.where(right, eps * d2, d2))


def one_sided_at_origin(state: QesState):
    """((psi(0-), psi'(0-)), (psi(0+), psi'(0+)))."""
    eps = _require_parity(state)
    psi, d1, _ = _left_branch(np.array(0.0), state)
    return (float(psi), float(d1)), (float(eps * psi), float(-eps * d1))


def default_window(state: QesState) -> float:
    return DEFAULT_WINDOW[state.family]


def node_positions(state: QesState, window: float | None = None,
                   samples: int = 4001) -> list[float]:
    """Zeros of psi where it changes sign, located by bisection."""
    if window is None:
        window = default_window(state)
    if window <= 0:
        raise ValueError("window must be positive")
    if samples < 1000:
        raise ValueError("need at least 1000 samples")
    xs = np.linspace(-window, window, samples)
    ys = wavefunction_value(xs, state)
    floor = 1e-12 * np.max(np.abs(ys))
    keep = np.abs(ys) > floor
    idx = np.nonzero(keep)[0]
    nodes = []
    for i, j in zip(idx[:-1], idx[1:]):
        if np.sign(ys[i]) == np.sign(ys[j]):
            continue
        lo, hi, flo = xs[i], xs[j], ys[i]
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            fm = wavefunction_value(mid, state)
            if fm == 0.0 or hi - lo < 1e-14 * max(1.0, abs(mid)):
                break
            if np.sign(fm) == np.sign(flo):
                lo, flo = mid, fm
            else:
                hi = mid
        nodes.append(0.5 * (lo + hi))
    return nodes


def count_nodes(state: QesState, window: float | None = None, samples: int = 4001) -> int:
    return len(node_positions(state, window, samples))


def schrodinger_residual(state: QesState, spec: PotentialSpec | None = None,
                         grid=None, energy: float | None = None) -> float:
    """max |-psi'' + (V - E) psi| / max |psi| over a grid avoiding x = 0.

    ``grid`` may be an array of abscissae or a GridFunction (only its xs are
    used); points with |x| < 1e-3 are dropped.
    """
    if spec is None:
        spec = potential_spec(state)
    if grid is None:
        w = default_window(state)
        xs = np.linspace(-w, w, 4001)
    else:
        xs = np.asarray(grid.xs if isinstance(grid, GridFunction) else grid, dtype=float)
    xs = xs[np.abs(xs) >= ORIGIN_EXCLUSION]
    E = state.energy if energy is None else energy
    psi, _, d2 = wavefunction_derivatives(xs, state)
    res = -d2 + (potential_value(xs, spec) - E) * psi
    return float(np.max(np.abs(res)) / np.max(np.abs(psi)))


def norm_squared(state: QesState, window: float | None = None, samples: int = 8001) -> float:
    """Composite Simpson estimate of the integral of psi^2 over [-window, window]."""
    if window is None:
        window = default_window(state)
    xs = np.linspace(-window, window, samples)
    return float(simpson(wavefunction_value(xs, state) ** 2, x=xs))


def normalized_wavefunction(xs, state: QesState, window: float | None = None) -> np.ndarray:
    """Unit L2 norm; sign chosen so psi is positive just right of the origin."""
    if window is None:
        window = default_window(state)
    scale = 1.0 / np.sqrt(norm_squared(state, window))
    probe = np.linspace(0.0, window, 4001)[1:]
    vals = wavefunction_value(probe, state)
    first = np.nonzero(np.abs(vals) > 1e-12 * np.max(np.abs(vals)))[0][0]
    if vals[first] < 0:
        scale = -scale
    return scale * wavefunction_value(np.asarray(xs, dtype=float), state)
