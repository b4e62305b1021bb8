"""Exact, probabilistic and impossible maps between parallel and anti-parallel spin pairs."""

__version__ = "0.1.0"

from .bloch import (
    BlochVector,
    GreatCircle,
    NoFit,
    antipode,
    bloch_from_qubit,
    great_circle_fit,
    pauli_dot,
    qubit_from_bloch,
)
from .linalg import hermitian_eigenvalues, is_psd, is_unitary, numerical_rank
from .machines import (
    FlipMachine,
    antiparallel_to_parallel_machine,
    flipper_for_circle,
    machine_fidelity,
    parallel_to_antiparallel_machine,
    verify_basis_action,
)
from .protrans import (
    Impossible,
    Probabilistic,
    RankObstruction,
    compare_sets,
    max_uniform_gamma,
    psd_feasible,
    rank_obstruction,
    usd_max_success,
)
from .states import (
    Exact,
    Infeasible,
    antiparallel,
    exact_transformability,
    gram,
    parallel,
    span_dimension,
)
