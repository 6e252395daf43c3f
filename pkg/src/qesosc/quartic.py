"""QES pipeline for the symmetrized quartic oscillator

    V(x) = x^4 - s|x|^3 + r x^2 - q|x|,   psi = exp(-|x|^3/3 + a x^2 - b|x|) phi(x).

The closed families (n, eps) = (0, +1), (1, -1), (1, +1) are available directly;
any other degree goes through the sl(2) matrix plus a root-find in b for the
matching condition at x = 0.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .algebra import diagonalize, quartic_gauge_operator
from .evaluate import count_nodes
from .states import (CONSTRAINT_TOL, DomainError, Parity, QesState, constraint_residual,
                     enforce_constraint, monic, satisfies_constraint)

log = logging.getLogger(__name__)

MAX_SECTOR_DEGREE = 16
# split eigenvalues of a defective h (a^2 = b at n = 1) land within ~sqrt(eps)
DEGENERACY_TOL = 1e-6

CLOSED_FAMILIES = ((0, Parity.EVEN), (1, Parity.ODD), (1, Parity.EVEN))


class NoClosedFormError(NotImplementedError):
    """No closed-form family for the requested (n, parity)."""


@dataclass(frozen=True)
class QuarticModel:
    a: float
    b: float
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be non-negative")

    @property
    def s(self) -> float:
        return 4.0 * self.a

    @property
    def r(self) -> float:
        return 4.0 * self.a ** 2 + 2.0 * self.b

    @property
    def q(self) -> float:
        return 4.0 * self.a * self.b + 2.0 * self.n + 2.0

    def coefficients(self) -> tuple[float, float, float]:
        return self.s, self.r, self.q


def quartic_potential_coeffs(a: float, b: float, n: int) -> tuple[float, float, float]:
    """(s, r, q) = (4a, 4a^2 + 2b, 4ab + 2n + 2)."""
    return QuarticModel(a, b, n).coefficients()


def _null_vector(h: np.ndarray, energy: float) -> np.ndarray:
    _, _, vt = np.linalg.svd(h - energy * np.eye(h.shape[0]))
    return vt[-1]


def solve_quartic_sector(a: float, b: float, n: int) -> tuple[list[QesState], dict]:
    """Real eigenpairs of the gauge operator as unfiltered candidate states.

    Returns ``(states, diagnostics)``. Nearly coincident eigenvalues (the
    defective a^2 = b point at n = 1) are merged and flagged ``degenerate``.
    """
    if not 0 <= n <= MAX_SECTOR_DEGREE:
        raise ValueError(f"n must lie in [0, {MAX_SECTOR_DEGREE}]")
    h = quartic_gauge_operator(a, b, n)
    diag = diagonalize(h)

    entries = [(p.eigenvalue, p.eigenvector) for p in diag.pairs]
    complex_left = []
    for lam in diag.discarded:
        if abs(lam.imag) <= DEGENERACY_TOL * max(1.0, abs(lam.real)):
            entries.append((lam.real, None))
        else:
            complex_left.append(lam)
    entries.sort(key=lambda ev: ev[0])

    groups: list[list] = []
    for e, vec in entries:
        if groups and abs(e - groups[-1][-1][0]) <= DEGENERACY_TOL * max(1.0, abs(e)):
            groups[-1].append((e, vec))
        else:
            groups.append([(e, vec)])

    states, degenerate = [], []
    for g in groups:
        e = float(np.mean([ev[0] for ev in g]))
        vec, notes = g[0][1], ()
        if len(g) > 1:
            notes = ("degenerate",)
            degenerate.append(e)
        if vec is None or len(g) > 1:
            vec = monic(_null_vector(h, e))
        states.append(QesState("quartic", n, e, tuple(float(x) for x in vec),
                               a=float(a), b=float(b), provenance="matrix", notes=notes))
    diagnostics = {"complex_eigenvalues": [complex(z) for z in complex_left],
                   "n_complex": len(complex_left),
                   "degenerate": degenerate}
    return states, diagnostics


def matching_filter(state: QesState, parity) -> bool:
    """True iff v_1 + b v_0 = 0 (even) or v_0 = 0 (odd) holds to 1e-9."""
    if state.family != "quartic":
        raise ValueError("matching_filter expects a quartic state")
    return satisfies_constraint(state.coeffs, state.b, parity)


def filter_states(states, parity) -> list[QesState]:
    """Admissible states for ``parity``, with parity and node count attached."""
    eps = Parity.parse(parity)
    out = []
    for st in states:
        if matching_filter(st, eps):
            st = st.replace(parity=eps, coeffs=enforce_constraint(st.coeffs, st.b, eps))
            out.append(st.replace(node_count=count_nodes(st)))
    return out


def quartic_family_solve(n: int, parity, a: float | None = None,
                         b: float | None = None) -> list[QesState]:
    """Closed-form admissible states of the worked quartic families.

    (0, even) and (1, odd) need ``a`` and force b = 0; (1, even) needs b != 0
    and fixes a = -(b^3 + 1)/(2b).
    """
    eps = Parity.parse(parity)
    if (n, eps) not in CLOSED_FAMILIES:
        raise NoClosedFormError(f"no closed form implemented for n={n}, parity={eps.label}")

    if n == 0 or eps is Parity.ODD:
        if a is None:
            raise DomainError("this family needs the gauge parameter a")
        if b not in (None, 0, 0.0):
            raise DomainError("this family requires b = 0")
        b = 0.0
        if n == 0:
            energy, coeffs = -2.0 * a, (1.0,)
        else:
            energy, coeffs = -6.0 * a, (0.0, 1.0)
    else:
        if b is None or b == 0:
            raise DomainError("the (1, even) family needs a nonzero b")
        a_fixed = -(b ** 3 + 1.0) / (2.0 * b)
        if a is not None and abs(a - a_fixed) > 1e-12 * max(1.0, abs(a_fixed)):
            raise DomainError(f"the (1, even) family fixes a = {a_fixed!r} for b = {b!r}")
        a = a_fixed
        energy = (2.0 * b ** 3 + 1.0) / b
        # phi = x - 1/b on x < 0, i.e. -(|x| + 1/b)
        coeffs = (-1.0 / b, 1.0)

    # + 0.0 folds -0.0 into 0.0
    st = QesState("quartic", n, float(energy) + 0.0, tuple(float(v) + 0.0 for v in coeffs),
                  a=float(a), b=float(b), parity=eps, provenance="closed-form")
    return [st.replace(node_count=count_nodes(st))]


# generic path: track eigen-branches in b at fixed a and root-find the constraint

def _unit_pairs(a, b, n):
    h = quartic_gauge_operator(a, b, n)
    w, vecs = np.linalg.eig(h)
    real = np.abs(w.imag) < 1e-9
    w, vecs = w[real].real, vecs[:, real].real
    order = np.argsort(w)
    vecs = vecs[:, order]
    return w[order], vecs / np.linalg.norm(vecs, axis=0)


def _branch_residual(vec, b, eps):
    v0 = vec[0]
    v1 = vec[1] if vec.size > 1 else 0.0
    return v1 + b * v0 if eps is Parity.EVEN else v0


def _nearest(a, b, n, target_e, ref_vec):
    w, vecs = _unit_pairs(a, b, n)
    if w.size == 0:
        raise ValueError("branch lost")
    i = int(np.argmin(np.abs(w - target_e)))
    v = vecs[:, i]
    if np.dot(v, ref_vec) < 0:
        v = -v
    return w[i], v


def search_quartic_constraint(n: int, parity, a: float, b_range=(-3.0, 3.0),
                              step: float = 1e-2, xtol: float = 1e-12) -> list[QesState]:
    """Find b values (at fixed a) where some eigen-branch meets the x = 0 condition.

    Eigen-branches are followed with nearest-eigenvalue continuation on a grid
    of spacing ``step``; each sign change of the constraint residual is refined
    by Brent's method.
    """
    eps = Parity.parse(parity)
    if not 0 <= n <= MAX_SECTOR_DEGREE:
        raise ValueError(f"n must lie in [0, {MAX_SECTOR_DEGREE}]")
    lo, hi = b_range
    bs = np.linspace(lo, hi, int(round((hi - lo) / step)) + 1)

    brackets = []
    branches = []  # each: (energy, unit vector, residual)
    prev_b = None
    for b in bs:
        w, vecs = _unit_pairs(a, b, n)
        used, new_branches = set(), []
        for e_prev, v_prev, g_prev in branches:
            if w.size == 0:
                break
            dist = np.abs(w - e_prev)
            dist[list(used)] = np.inf
            i = int(np.argmin(dist))
            if not np.isfinite(dist[i]):
                continue
            used.add(i)
            v = vecs[:, i] if np.dot(vecs[:, i], v_prev) >= 0 else -vecs[:, i]
            g = _branch_residual(v, b, eps)
            if g == 0.0 or np.sign(g) != np.sign(g_prev):
                brackets.append((prev_b, b, e_prev, w[i], v_prev))
            new_branches.append((w[i], v, g))
        for i in range(w.size):
            if i not in used:
                v = vecs[:, i]
                new_branches.append((w[i], v, _branch_residual(v, b, eps)))
        branches, prev_b = new_branches, b

    found: list[QesState] = []
    for b0, b1, e0, e1, v_ref in brackets:
        def resid(bb):
            frac = (bb - b0) / (b1 - b0)
            _, v = _nearest(a, bb, n, e0 + frac * (e1 - e0), v_ref)
            return _branch_residual(v, bb, eps)
        try:
            g0, g1 = resid(b0), resid(b1)
            if g0 == 0.0:
                b_star = b0
            elif g1 == 0.0:
                b_star = b1
            elif np.sign(g0) == np.sign(g1):
                continue
            else:
                b_star = brentq(resid, b0, b1, xtol=xtol, maxiter=200)
        except ValueError:
            continue
        e_star, v_star = _nearest(a, b_star, n, 0.5 * (e0 + e1), v_ref)
        coeffs = monic(v_star)
        if not satisfies_constraint(coeffs, b_star, eps):
            log.debug("dropped b=%r: residual %g", b_star,
                      constraint_residual(coeffs, b_star, eps))
            continue
        if any(abs(s.b - b_star) < 1e-8 and abs(s.energy - e_star) < 1e-8 for s in found):
            continue
        st = QesState("quartic", n, float(e_star), enforce_constraint(coeffs, b_star, eps),
                      a=float(a), b=float(b_star), parity=eps, provenance="matrix")
        found.append(st.replace(node_count=count_nodes(st)))
    found.sort(key=lambda s: (s.b, s.energy))
    return found


__all__ = [
    "CLOSED_FAMILIES", "CONSTRAINT_TOL", "NoClosedFormError", "QuarticModel",
    "filter_states", "matching_filter", "quartic_family_solve", "quartic_potential_coeffs",
    "search_quartic_constraint", "solve_quartic_sector",
]
