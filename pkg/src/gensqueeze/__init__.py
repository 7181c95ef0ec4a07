"""su(1,1) squeezing algebra, the detuned parametric amplifier, two-mode
phase-space functions and Wehrl entropies, checked against a truncated-Fock
oracle."""
from .amplifier import (
    AmplifierConfig,
    EvolutionFactors,
    TMatrix,
    check_constraints,
    factor_evolution,
    heisenberg_solution,
    intensity_correlation,
    invert,
    mean_photon,
)
from .errors import *  # noqa: F401,F403
from .fock import FockRep, OperatorMatrix, RepKind
from .phase_space import (
    PhasePoint,
    Role,
    characteristic_t,
    characteristic_t0,
    laguerre,
    moment,
    pullback,
    pushforward,
    wigner_t,
    wigner_t0,
)
from .states import Coherent, InitialState, Number, Thermal
from .su11 import (
    AlgebraParams,
    GroupMatrix,
    NormalFactors,
    Ordering,
    UnitaryParams,
    compose,
    compose_factors,
    decompose_antinormal,
    decompose_normal,
    inverse,
    is_unitary,
    matrix_rep,
    params_from_matrix,
    radical_functions,
)
from .wehrl import EntropyReport, correlation, entropy_closed, entropy_numeric

__version__ = "0.1.0"
