"""Independent reference computations used only by the tests.

Nothing here goes through the matrix/Bethe code paths under test: the
differential operators are applied with plain polynomial arithmetic.
"""

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.optimize import brentq


def _padd(*polys):
    n = max(len(p) for p in polys)
    out = np.zeros(n)
    for p in polys:
        out[: len(p)] += p
    return out


def quartic_heun_apply(coeffs, a, b, q):
    """(-d2 - 2(x^2 + 2ax + b) d + (q - 4ab - 2) x - b^2 - 2a) phi."""
    v = np.asarray(coeffs, float)
    d1 = P.polyder(v) if v.size > 1 else np.zeros(1)
    d2 = P.polyder(v, 2) if v.size > 2 else np.zeros(1)
    return _padd(-d2, -2 * P.polymul([b, 2 * a, 1.0], d1),
                 P.polymul([0.0, q - 4 * a * b - 2], v), -(b * b + 2 * a) * v)


def sextic_heun_apply(coeffs, a, b, c, r, q):
    """(-d2 + 2(x^3 - 3ax^2 - 2bx - c) d + (r - 4b^2 - 6ac + 3)x^2 + (q - 4bc - 6a)x - c^2 - 2b) phi."""
    v = np.asarray(coeffs, float)
    d1 = P.polyder(v) if v.size > 1 else np.zeros(1)
    d2 = P.polyder(v, 2) if v.size > 2 else np.zeros(1)
    return _padd(-d2, 2 * P.polymul([-c, -2 * b, -3 * a, 1.0], d1),
                 P.polymul([0.0, q - 4 * b * c - 6 * a, r - 4 * b * b - 6 * a * c + 3], v),
                 -(c * c + 2 * b) * v)


def operator_matrix_from_monomials(apply, n):
    """Matrix of a degree-preserving operator built column by column from x^k."""
    m = np.zeros((n + 1, n + 1))
    for k in range(n + 1):
        e = np.zeros(k + 1)
        e[k] = 1.0
        img = apply(e)
        assert np.all(np.abs(img[n + 1:]) < 1e-12), "operator leaves P_n"
        m[: min(len(img), n + 1), k] = img[: n + 1]
    return m


def quadratic_roots_2x2(m):
    """Eigenvalues of a 2x2 matrix from its characteristic polynomial."""
    tr, det = m[0, 0] + m[1, 1], m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    disc = tr * tr / 4 - det
    if disc < 0:
        return None
    return sorted([tr / 2 - np.sqrt(disc), tr / 2 + np.sqrt(disc)])


def sign_change_roots(f, lo, hi, samples=200001):
    """All simple real roots of f on [lo, hi] from sign changes and Brent refinement."""
    xs = np.linspace(lo, hi, samples)
    ys = f(xs)
    out = []
    for i in np.nonzero(np.sign(ys[:-1]) * np.sign(ys[1:]) < 0)[0]:
        out.append(brentq(f, xs[i], xs[i + 1], xtol=1e-15, rtol=1e-15))
    return out


def harmonic_levels(parity, k):
    """Exact eigenvalues of -d2 + x^2 in one parity sector: 1, 5, 9, ... / 3, 7, 11, ..."""
    start = 1 if parity > 0 else 3
    return np.array([start + 4 * i for i in range(k)], dtype=float)
