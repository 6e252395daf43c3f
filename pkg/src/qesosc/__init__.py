"""Quasi-exactly solvable symmetrized quartic and sextic polynomial oscillators.

The quartic family is solved through a finite sl(2) matrix, the sextic family
through the functional Bethe ansatz; :mod:`qesosc.verify` checks every
eigenpair against a finite-difference spectrum.
"""

from .algebra import diagonalize, generator_matrix, quartic_gauge_operator
from .evaluate import (PotentialSpec, count_nodes, gauge_exponent, potential_spec,
                       potential_value, schrodinger_residual, wavefunction_value)
from .quartic import (QuarticModel, matching_filter, quartic_family_solve,
                      quartic_potential_coeffs, search_quartic_constraint, solve_quartic_sector)
from .sextic import (BetheRoots, SexticModel, bethe_residuals, sextic_energy,
                     sextic_family_solve, sextic_matching_filter, sextic_potential_coeffs,
                     solve_bethe)
from .states import DomainError, Parity, ParityCategory, QesState, classify_parity_category
from .verify import FdConfig, SpectrumReport, fd_halfline_spectrum, verify_state

__version__ = "0.1.0"
