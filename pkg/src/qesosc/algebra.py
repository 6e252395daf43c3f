"""sl(2,R) generators on polynomials of degree <= n and the gauge-rotated quartic operator.

Matrices act on ascending coefficient vectors (v_0, ..., v_n) of
phi(x) = sum_k v_k x**k; column k is the image of the monomial x**k.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .states import monic

#: Eigenvalues with |Im| above this are treated as complex and discarded.
IMAG_TOL = 1e-9
MAX_DIM = 32

KINDS = ("raising", "neutral", "lowering")


class DiagonalizationError(RuntimeError):
    """The dense eigen-iteration failed; the offending matrix is attached."""

    def __init__(self, message: str, matrix: np.ndarray):
        super().__init__(message)
        self.matrix = matrix


@dataclass(frozen=True)
class EigenPair:
    eigenvalue: float
    eigenvector: np.ndarray  # monic: highest-degree nonzero coefficient is +1


@dataclass(frozen=True)
class Diagonalization:
    """Real eigenpairs in ascending order plus the complex eigenvalues left out."""

    pairs: list[EigenPair]
    discarded: list[complex] = field(default_factory=list)

    @property
    def n_complex(self) -> int:
        return len(self.discarded)

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.array([p.eigenvalue for p in self.pairs])

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __getitem__(self, i):
        return self.pairs[i]


def _check_dim(n: int) -> int:
    n = int(n)
    if n < 0:
        raise ValueError("representation degree n must be non-negative")
    return n


def generator_matrix(kind: str, n: int) -> np.ndarray:
    """Matrix of J^+_n, J^0_n or J^-_n in the monomial basis of P_{n+1}.

    J^+ x^k = (k - n) x^{k+1},  J^0 x^k = (k - n/2) x^k,  J^- x^k = k x^{k-1}.
    """
    n = _check_dim(n)
    m = np.zeros((n + 1, n + 1))
    k = np.arange(n + 1)
    if kind == "raising":
        m[k[:-1] + 1, k[:-1]] = k[:-1] - n
    elif kind == "neutral":
        m[k, k] = k - n / 2
    elif kind == "lowering":
        m[k[1:] - 1, k[1:]] = k[1:]
    else:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    return m


def quartic_gauge_operator(a: float, b: float, n: int) -> np.ndarray:
    """h = -J^-J^- - 2J^+ - 4a J^0 - 2b J^- - 2(n+1)a - b^2 on P_{n+1}."""
    n = _check_dim(n)
    jp = generator_matrix("raising", n)
    j0 = generator_matrix("neutral", n)
    jm = generator_matrix("lowering", n)
    shift = -2.0 * (n + 1) * a - b * b
    return -jm @ jm - 2.0 * jp - 4.0 * a * j0 - 2.0 * b * jm + shift * np.eye(n + 1)


def diagonalize(op: np.ndarray, imag_tol: float = IMAG_TOL) -> Diagonalization:
    """All real eigenpairs of a small dense non-symmetric matrix, ascending.

    LAPACK's Hessenberg-QR (``geev``) does the work. Eigenvectors are made
    monic, matching phi(x) = x^n + ... .
    """
    op = np.asarray(op, dtype=float)
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise ValueError("operator must be a square matrix")
    if op.shape[0] > MAX_DIM:
        raise ValueError(f"dimension {op.shape[0]} exceeds the dense limit {MAX_DIM}")
    try:
        w, vecs = np.linalg.eig(op)
    except np.linalg.LinAlgError as exc:
        raise DiagonalizationError(f"eigen-iteration did not converge: {exc}", op) from exc

    pairs, discarded = [], []
    for i in np.argsort(w.real, kind="stable"):
        lam = w[i]
        if abs(lam.imag) >= imag_tol:
            discarded.append(complex(lam))
            continue
        pairs.append(EigenPair(float(lam.real), monic(vecs[:, i].real)))
    return Diagonalization(pairs, discarded)
