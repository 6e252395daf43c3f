"""QES pipeline for the symmetrized sextic oscillator via the functional Bethe ansatz.

    V(x) = x^6 - u|x|^5 + t x^4 - s|x|^3 + r x^2 - q|x|
    psi  = exp(-x^4/4 - a|x|^3 + b x^2 - c|x|) * prod_i (x - x_i)   on x < 0

The roots x_i solve

    sum_{j != i} 1/(x_i - x_j) - x_i^3 + 3a x_i^2 + 2b x_i + c = 0.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .evaluate import count_nodes
from .states import (DomainError, Parity, QesState, classify_parity_category,
                     enforce_constraint, satisfies_constraint)

log = logging.getLogger(__name__)

BAE_TOL = 1e-10
DEDUP_TOL = 1e-6
MAX_BETHE_DEGREE = 8
DEFAULT_STARTS = 200

SUPPORTED_FAMILIES = ((0, Parity.EVEN), (1, Parity.ODD), (1, Parity.EVEN),
                      (2, Parity.ODD), (2, Parity.EVEN))

__all__ = [
    "BetheRoots", "BetheSolution", "SexticModel", "bethe_residuals", "classify_parity_category",
    "sextic_energy", "sextic_family_solve", "sextic_matching_filter", "sextic_potential_coeffs",
    "solve_bethe", "solve_quartic_in_c",
]


@dataclass(frozen=True)
class BetheRoots:
    """Roots x_1..x_n of the polynomial factor on the x < 0 branch.

    Normally real; complex-conjugate pairs are allowed as long as the
    polynomial prod(x - x_i) stays real.
    """

    roots: tuple

    def __post_init__(self):
        arr = np.asarray(self.roots, dtype=complex).ravel()
        if np.all(arr.imag == 0):
            arr = np.sort(arr.real)
            object.__setattr__(self, "roots", tuple(float(x) for x in arr))
        else:
            arr = arr[np.lexsort((arr.imag, np.round(arr.real, 12)))]
            object.__setattr__(self, "roots", tuple(complex(x) for x in arr))

    def __len__(self):
        return len(self.roots)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.roots)

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.array)

    def polynomial(self) -> np.ndarray:
        """Ascending coefficients v_0..v_n of prod(x - x_i) (real part)."""
        if len(self) == 0:
            return np.array([1.0])
        return np.real(np.poly(self.array))[::-1].copy()

    def min_separation(self) -> float:
        x = self.array
        if x.size < 2:
            return np.inf
        d = np.abs(x[:, None] - x[None, :])
        return float(np.min(d[~np.eye(x.size, dtype=bool)]))


@dataclass(frozen=True)
class SexticModel:
    a: float
    b: float
    c: float
    n: int

    @property
    def u(self) -> float:
        return -6.0 * self.a

    @property
    def t(self) -> float:
        return 9.0 * self.a ** 2 - 4.0 * self.b

    @property
    def s(self) -> float:
        return 12.0 * self.a * self.b - 2.0 * self.c

    @property
    def r(self) -> float:
        return 4.0 * self.b ** 2 + 6.0 * self.a * self.c - 2.0 * self.n - 3.0

    def q(self, roots: BetheRoots) -> float:
        total = float(np.real(np.sum(roots.array))) if len(roots) else 0.0
        return -2.0 * total + 6.0 * self.a * (self.n + 1) + 4.0 * self.b * self.c


def _as_roots(roots) -> BetheRoots:
    return roots if isinstance(roots, BetheRoots) else BetheRoots(tuple(np.atleast_1d(roots)))


def sextic_potential_coeffs(model: SexticModel, roots) -> tuple[float, ...]:
    """(u, t, s, r, q) for the model with attached Bethe roots."""
    roots = _as_roots(roots)
    if len(roots) != model.n:
        raise DomainError(f"expected {model.n} roots, got {len(roots)}")
    return model.u, model.t, model.s, model.r, model.q(roots)


def _pair_inverse(x: np.ndarray) -> np.ndarray:
    """Matrix of 1/(x_i - x_j) with zeros on the diagonal."""
    diff = x[:, None] - x[None, :]
    off = ~np.eye(x.size, dtype=bool)
    inv = np.zeros_like(diff)
    inv[off] = 1.0 / diff[off]
    return inv


def _residual_vector(x: np.ndarray, a, b, c) -> np.ndarray:
    return np.sum(_pair_inverse(x), axis=1) - x ** 3 + 3 * a * x ** 2 + 2 * b * x + c


def _jacobian(x: np.ndarray, a, b) -> np.ndarray:
    jac = _pair_inverse(x) ** 2
    np.fill_diagonal(jac, -np.sum(jac, axis=1) - 3 * x ** 2 + 6 * a * x + 2 * b)
    return jac


def bethe_residuals(roots, a: float, b: float, c: float) -> np.ndarray:
    """Left-hand sides of the Bethe ansatz equations, one per root."""
    roots = _as_roots(roots)
    x = roots.array
    if x.size > 1 and roots.min_separation() == 0.0:
        raise DomainError("coincident Bethe roots make the pair terms singular")
    return _residual_vector(x, a, b, c)


def sextic_energy(roots, a: float, b: float, c: float, n: int) -> float:
    """E = 2 sum x_i^2 - 6a sum x_i - 2b(2n + 1) - c^2."""
    roots = _as_roots(roots)
    if len(roots) != n:
        raise DomainError(f"expected {n} roots, got {len(roots)}")
    x = roots.array
    return float(np.real(2 * np.sum(x ** 2) - 6 * a * np.sum(x))) - 2 * b * (2 * n + 1) - c * c


def sextic_matching_filter(roots, c: float, parity) -> bool:
    """Expand prod(x - x_i) and test v_1 + c v_0 = 0 (even) or v_0 = 0 (odd)."""
    return satisfies_constraint(_as_roots(roots).polynomial(), c, parity)


@dataclass
class BetheSolution:
    """Deduplicated root sets from a multistart run, with bookkeeping."""

    root_sets: list[BetheRoots]
    starts: int
    failed: int = 0
    rejected_degenerate: int = 0
    notes: list[str] = field(default_factory=list)

    def __len__(self):
        return len(self.root_sets)

    def __iter__(self):
        return iter(self.root_sets)

    def __getitem__(self, i):
        return self.root_sets[i]


def _newton(x0: np.ndarray, a, b, c, max_iter: int = 200) -> Optional[np.ndarray]:
    """Damped Newton; runs until the step stalls so multiple roots converge too."""
    x = x0.copy()
    f = _residual_vector(x, a, b, c)
    norm = np.max(np.abs(f))
    for _ in range(max_iter):
        if not np.all(np.isfinite(f)):
            return None
        if norm == 0.0:
            break
        try:
            dx = np.linalg.solve(_jacobian(x, a, b), -f)
        except np.linalg.LinAlgError:
            return None
        if not np.all(np.isfinite(dx)):
            return None
        lam = 1.0
        while lam > 1e-4:
            xn = x + lam * dx
            fn = _residual_vector(xn, a, b, c)
            nn = np.max(np.abs(fn))
            if np.isfinite(nn) and (nn < (1 - 1e-4 * lam) * norm or norm < 1e-13):
                break
            lam *= 0.5
        else:
            break
        x, f, norm = xn, fn, nn
        if np.max(np.abs(lam * dx)) <= 1e-15 * max(1.0, np.max(np.abs(x))):
            break
    return x if norm < BAE_TOL else None


def _same_set(p: BetheRoots, q: BetheRoots, tol: float) -> bool:
    if p.is_real and q.is_real:
        return np.max(np.abs(p.array - q.array)) < tol
    return np.max(np.abs(p.polynomial() - q.polynomial())) < tol * max(1.0, np.max(np.abs(p.polynomial())))


def _real_poly_roots(x: np.ndarray) -> Optional[np.ndarray]:
    """Snap a complex root set to a conjugate-closed one, or None if not real."""
    coeffs = np.poly(x)
    if np.max(np.abs(coeffs.imag)) > 1e-9 * max(1.0, np.max(np.abs(coeffs))):
        return None
    snapped = np.where(np.abs(x.imag) < 1e-10 * max(1.0, np.max(np.abs(x))), x.real, x)
    return snapped


def multistart_box(a: float, b: float, c: float) -> float:
    return 2.0 + abs(a) + np.sqrt(1.0 + abs(b)) + abs(c)


def solve_bethe(n: int, a: float, b: float, c: float, starts: int = DEFAULT_STARTS,
                seed: int = 0, complex_roots: bool = False,
                radius: float | None = None) -> BetheSolution:
    """Multistart damped Newton on the Bethe ansatz equations.

    Starting roots are drawn uniformly from [-R, R] (and also from the
    imaginary box when ``complex_roots``) with a seeded generator, so results
    do not depend on anything but the arguments. Returned sets are sorted and
    deduplicated; all residuals are below 1e-10.
    """
    if not 0 <= n <= MAX_BETHE_DEGREE:
        raise ValueError(f"n must lie in [0, {MAX_BETHE_DEGREE}]")
    if n == 0:
        return BetheSolution([BetheRoots(())], starts=0)
    R = multistart_box(a, b, c) if radius is None else radius
    rng = np.random.default_rng(seed)
    out = BetheSolution([], starts=starts)
    for _ in range(starts):
        x0 = rng.uniform(-R, R, n)
        if complex_roots:
            x0 = x0 + 1j * rng.uniform(-R, R, n)
        x = _newton(x0, a, b, c)
        if x is None:
            out.failed += 1
            continue
        if complex_roots:
            x = _real_poly_roots(x)
            if x is None:
                out.failed += 1
                continue
        cand = BetheRoots(tuple(x))
        if cand.min_separation() <= 1e-8 * (1 + np.max(np.abs(cand.array))):
            out.rejected_degenerate += 1
            continue
        if np.max(np.abs(bethe_residuals(cand, a, b, c))) >= BAE_TOL:
            out.failed += 1
            continue
        if not any(_same_set(cand, seen, DEDUP_TOL) for seen in out.root_sets):
            out.root_sets.append(cand)
    if out.rejected_degenerate:
        out.notes.append(f"{out.rejected_degenerate} near-degenerate root sets rejected")
    out.root_sets.sort(key=lambda r: tuple((float(np.real(z)), float(np.imag(z))) for z in r.roots))
    return out


# quartic equations in c

def solve_quartic_in_c(coeffs_desc: Sequence[float]) -> list[float]:
    """Real nonzero roots of a polynomial in c (descending coefficients).

    Companion-matrix eigenvalues give candidates; near-real ones are polished
    by Newton on the real polynomial.
    """
    p = np.asarray(coeffs_desc, dtype=float)
    dp = np.polyder(p)
    found: list[float] = []
    for z in np.roots(p):
        if abs(z.imag) > 1e-7 * max(1.0, abs(z)):
            continue
        x = z.real
        for _ in range(50):
            d = np.polyval(dp, x)
            if d == 0:
                break
            step = np.polyval(p, x) / d
            x -= step
            if abs(step) < 1e-16 * max(1.0, abs(x)):
                break
        scale = np.polyval(np.abs(p), abs(x))
        if abs(np.polyval(p, x)) > 1e-12 * scale:
            continue
        if abs(x) < 1e-14:
            continue
        if not any(abs(x - y) < 1e-10 * max(1.0, abs(x)) for y in found):
            found.append(float(x))
    return sorted(found)


def _make_state(n, eps, a, b, c, roots: BetheRoots, notes=()) -> QesState:
    st = QesState("sextic", n, sextic_energy(roots, a, b, c, n),
                  tuple(float(v) for v in roots.polynomial()), a=float(a), b=float(b),
                  c=float(c), parity=eps, provenance="bethe" if n >= 2 and eps is Parity.EVEN
                  else "closed-form", roots=roots.roots, notes=tuple(notes))
    return st.replace(node_count=count_nodes(st))


# (2, even): symmetric-function form of the coupled system.
# sigma = x1 + x2, pi = x1 x2, c = sigma / pi; pair roots may be complex conjugates.

def _two_even_system(z, a, b):
    sg, pi = z
    g1 = pi * (sg ** 3 - 3 * sg * pi - 3 * a * sg ** 2 + 6 * a * pi - 2 * b * sg) - 2 * sg
    g2 = (sg ** 2 - 4 * pi) * (sg ** 2 - pi - 3 * a * sg - 2 * b) - 2
    return np.array([g1, g2])


def _two_even_jacobian(z, a, b):
    sg, pi = z
    d1s = pi * (3 * sg ** 2 - 3 * pi - 6 * a * sg - 2 * b) - 2
    d1p = sg ** 3 - 6 * sg * pi - 3 * a * sg ** 2 + 12 * a * pi - 2 * b * sg
    m, k = sg ** 2 - 4 * pi, sg ** 2 - pi - 3 * a * sg - 2 * b
    d2s = 2 * sg * k + m * (2 * sg - 3 * a)
    d2p = -4 * k - m
    return np.array([[d1s, d1p], [d2s, d2p]])


def _solve_two_even(a, b, starts, seed):
    R = multistart_box(a, b, 0.0)
    rng = np.random.default_rng(seed)
    sols, failed = [], 0
    for _ in range(starts):
        z = np.array([rng.uniform(-2 * R, 2 * R), rng.uniform(-R * R, R * R)])
        ok = False
        for _ in range(100):
            f = _two_even_system(z, a, b)
            try:
                dz = np.linalg.solve(_two_even_jacobian(z, a, b), -f)
            except np.linalg.LinAlgError:
                break
            lam, nf = 1.0, np.max(np.abs(f))
            while lam > 1e-4:
                zn = z + lam * dz
                if np.max(np.abs(_two_even_system(zn, a, b))) < (1 - 1e-4 * lam) * nf or nf < 1e-13:
                    break
                lam *= 0.5
            z = zn
            if not np.all(np.isfinite(z)) or np.max(np.abs(z)) > 1e8:
                break
            if np.max(np.abs(dz)) < 1e-15 * max(1.0, np.max(np.abs(z))):
                ok = True
                break
        if not ok and np.all(np.isfinite(z)):
            ok = np.max(np.abs(_two_even_system(z, a, b))) < 1e-12
        if not ok or abs(z[1]) < 1e-12:
            failed += 1
            continue
        if not any(np.max(np.abs(z - s)) < DEDUP_TOL * max(1.0, np.max(np.abs(s))) for s in sols):
            sols.append(z)
    return sols, failed


def sextic_family_solve(n: int, parity, a: float, b: float, starts: int = DEFAULT_STARTS,
                        seed: int = 0) -> list[QesState]:
    """All admissible states found for the worked sextic families at fixed (a, b).

    c is an output: forced to 0 for (0, even) and (1, odd), a real nonzero
    root of a quartic for (1, even) and (2, odd), and part of the coupled
    solve for (2, even).
    """
    eps = Parity.parse(parity)
    if (n, eps) not in SUPPORTED_FAMILIES:
        raise NotImplementedError(f"no sextic family implemented for n={n}, parity={eps.label}")

    states: list[QesState] = []
    if (n, eps) == (0, Parity.EVEN):
        states.append(_make_state(0, eps, a, b, 0.0, BetheRoots(())))
    elif (n, eps) == (1, Parity.ODD):
        states.append(_make_state(1, eps, a, b, 0.0, BetheRoots((0.0,))))
    elif n == 1:
        for c in solve_quartic_in_c([1.0, 0.0, 2 * b, 3 * a, -1.0]):
            states.append(_make_state(1, eps, a, b, c, BetheRoots((1.0 / c,))))
    elif eps is Parity.ODD:
        for c in solve_quartic_in_c([2.0, 0.0, 2 * b, 3 * a, -1.0]):
            states.append(_make_state(2, eps, a, b, c, BetheRoots((0.0, 1.0 / c))))
    else:
        sols, failed = _solve_two_even(a, b, starts, seed)
        if failed:
            log.debug("(2, even): %d of %d starts did not converge", failed, starts)
        for sg, pi in sols:
            if abs(sg) <= 1e-14 * max(1.0, abs(pi)):
                sg = 0.0  # roundoff around the symmetric x2 = -x1 branch
            c = sg / pi
            roots = np.roots([1.0, -sg, pi]).astype(complex)
            if abs(roots[0] - roots[1]) <= 1e-8 * (1 + np.max(np.abs(roots))):
                continue
            if np.any(np.abs(roots) < 1e-8) or (c != 0 and np.any(np.abs(roots - 1 / c) < 1e-8)):
                continue
            if np.all(np.abs(roots.imag) < 1e-12 * max(1.0, np.max(np.abs(roots)))):
                roots = roots.real
            br = BetheRoots(tuple(roots))
            notes = () if br.is_real else ("complex-conjugate roots",)
            states.append(_make_state(2, eps, a, b, c, br, notes))

    admissible = []
    for st in states:
        roots = BetheRoots(st.roots)
        if not sextic_matching_filter(roots, st.c, eps):
            log.debug("state at c=%r fails the matching condition", st.c)
            continue
        if len(roots) and np.max(np.abs(bethe_residuals(roots, a, b, st.c))) >= BAE_TOL:
            log.debug("state at c=%r fails the Bethe residual check", st.c)
            continue
        admissible.append(st.replace(coeffs=enforce_constraint(st.coeffs, st.c, eps)))
    admissible.sort(key=lambda s: (s.c, s.energy))
    return admissible
