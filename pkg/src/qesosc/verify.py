"""Independent finite-difference check of QES eigenpairs.

The even/odd sectors of a parity-symmetric problem are the half-line problems
on [0, L] with psi'(0) = 0 or psi(0) = 0. Each is discretized with second-order
central differences into a symmetric tridiagonal matrix and extrapolated
from N and 2N points.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal

from .evaluate import PotentialSpec, count_nodes, potential_spec
from .states import Parity, QesState

DEFAULT_LENGTH = {"quartic": 8.0, "sextic": 5.0}
DEFAULT_POINTS = 4000
CONVERGENCE_TOL = 1e-3
MATCH_WINDOW = 0.1
ACCEPT_TOL = 1e-4

Potential = Union[PotentialSpec, Callable[[np.ndarray], np.ndarray]]


class EigensolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class FdConfig:
    length: float
    points: int = DEFAULT_POINTS
    parity: Parity = Parity.EVEN
    count: int = 4
    richardson: bool = True

    def __post_init__(self):
        if self.length <= 0:
            raise ValueError("domain length must be positive")
        if self.points < 200:
            raise ValueError("need at least 200 grid points")
        if self.count < 1:
            raise ValueError("count must be at least 1")
        object.__setattr__(self, "parity", Parity.parse(self.parity))

    @classmethod
    def for_family(cls, family: str, **kw) -> "FdConfig":
        return cls(length=kw.pop("length", None) or DEFAULT_LENGTH[family], **kw)


@dataclass
class SectorSpectrum:
    eigenvalues: np.ndarray
    coarse: np.ndarray
    fine: np.ndarray

    @property
    def converged(self) -> bool:
        return bool(np.all(np.abs(self.coarse - self.fine) <= CONVERGENCE_TOL))


@dataclass
class SpectrumReport:
    qes_energy: float
    parity: Parity
    eigenvalues: dict  # parity label -> ascending array
    merged: np.ndarray
    matched_index: Optional[int]
    fd_energy: Optional[float]
    abs_error: float
    converged: bool
    node_count: Optional[int]
    notes: list[str] = field(default_factory=list)

    @property
    def index_matches_nodes(self) -> bool:
        return self.matched_index is not None and self.matched_index == self.node_count

    @property
    def passed(self) -> bool:
        return self.converged and self.abs_error <= ACCEPT_TOL and self.index_matches_nodes


def _tridiagonal(potential: Potential, length: float, points: int, parity: Parity):
    h = length / points
    if parity is Parity.EVEN:
        x = h * np.arange(points)  # 0 .. L - h; psi(L) = 0
    else:
        x = h * np.arange(1, points)  # psi(0) = psi(L) = 0
    v = np.asarray(potential(x), dtype=float)
    diag = 2.0 / h ** 2 + v
    off = np.full(x.size - 1, -1.0 / h ** 2)
    if parity is Parity.EVEN:
        # ghost point psi_{-1} = psi_1, symmetrized with the half weight at x = 0
        off[0] = -np.sqrt(2.0) / h ** 2
    return diag, off


def _lowest(potential, length, points, parity, k):
    d, e = _tridiagonal(potential, length, points, parity)
    k = min(k, d.size)
    try:
        w = eigh_tridiagonal(d, e, eigvals_only=True, select="i", select_range=(0, k - 1))
    except LinAlgError as exc:
        raise EigensolverError(f"tridiagonal eigensolver failed: {exc}") from exc
    return np.sort(w)


def sector_spectrum(potential: Potential, cfg: FdConfig) -> SectorSpectrum:
    coarse = _lowest(potential, cfg.length, cfg.points, cfg.parity, cfg.count)
    if not cfg.richardson:
        return SectorSpectrum(coarse, coarse, coarse)
    fine = _lowest(potential, cfg.length, 2 * cfg.points, cfg.parity, cfg.count)
    return SectorSpectrum((4.0 * fine - coarse) / 3.0, coarse, fine)


def fd_halfline_spectrum(potential: Potential, cfg: FdConfig) -> np.ndarray:
    """The ``cfg.count`` lowest eigenvalues of one parity sector, ascending.

    ``potential`` is a PotentialSpec or any vectorized callable V(x) on x >= 0.
    """
    return sector_spectrum(potential, cfg).eigenvalues


def verify_state(state: QesState, spec: PotentialSpec | None = None,
                 cfg: FdConfig | None = None) -> SpectrumReport:
    """Locate the QES energy in the numerical spectrum and check its rank.

    The rank in the parity-merged spectrum must equal the node count of psi
    (oscillation theorem).
    """
    if state.parity is None:
        raise ValueError("state has no parity")
    spec = spec or potential_spec(state)
    cfg = cfg or FdConfig.for_family(state.family)
    nodes = state.node_count if state.node_count is not None else count_nodes(state)
    k = max(cfg.count, nodes // 2 + 3)

    sectors = {eps: sector_spectrum(spec, FdConfig(cfg.length, cfg.points, eps, k, cfg.richardson))
               for eps in (Parity.EVEN, Parity.ODD)}

    own = sectors[state.parity].eigenvalues
    i = int(np.argmin(np.abs(own - state.energy)))
    fd_energy = float(own[i])
    abs_error = abs(fd_energy - state.energy)
    merged = np.sort(np.concatenate([s.eigenvalues for s in sectors.values()]))
    # only levels up to the matched one decide the rank; higher ones are context
    converged = all(np.all(np.abs(sec.coarse - sec.fine)[sec.eigenvalues <= fd_energy + MATCH_WINDOW]
                           <= CONVERGENCE_TOL) for sec in sectors.values())
    notes = []
    if abs_error > MATCH_WINDOW:
        converged = False
        matched_index = None
        notes.append(f"no eigenvalue within {MATCH_WINDOW} of the QES energy")
    else:
        matched_index = int(np.searchsorted(merged, fd_energy))
    if matched_index is not None and matched_index != nodes:
        notes.append(f"merged-spectrum index {matched_index} != node count {nodes}")
    return SpectrumReport(
        qes_energy=float(state.energy), parity=state.parity,
        eigenvalues={eps.label: s.eigenvalues for eps, s in sectors.items()},
        merged=merged, matched_index=matched_index, fd_energy=fd_energy,
        abs_error=float(abs_error), converged=bool(converged), node_count=nodes, notes=notes)
