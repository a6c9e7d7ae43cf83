"""Two-body colour code on the ruby lattice: Pauli algebra, lattice patches,
the spin-boson effective model, anyon statistics and logical gates."""

from .colors import COLORS, Color
from .errors import (CapacityError, CodeSpaceError, ConstructionError, DimensionError,
                     EncodingError, HermiticityError, IllegalMoveError, RubyCodeError)
from .lattice import (CouplingParams, LatticePatch, build_hamiltonian, build_patch,
                      check_patch, plaquette_operators, string_operator)
from .pauli import OperatorSum, PauliString, commutes, spectrum, symplectic_rank

__version__ = "0.1.0"
