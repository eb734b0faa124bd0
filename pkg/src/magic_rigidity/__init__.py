"""Numerical rigidity checks for the parallel-repeated Magic Square game."""

from .game import Answer, Question, classical_value_single, win_parallel, win_single
from .lemmas import run_lemma_tests
from .strategy import (
    MeasurementFamily,
    PureStrategy,
    classical_strategy,
    ideal_parallel,
    ideal_single_round,
    output_observable,
    perturb,
    strategy_from_json,
    strategy_to_json,
    win_probability,
)
from .sweep import SweepConfig, run_sweep
from .tensor import (
    DenseOperator,
    FeasibilityError,
    RegisterLayout,
    StateVector,
    StructuredOperator,
    apply,
    hermitian_eig,
    kron_assemble,
    state_dep_distance,
)

__version__ = "0.1.0"

__all__ = [
    "Answer",
    "DenseOperator",
    "FeasibilityError",
    "MeasurementFamily",
    "PureStrategy",
    "Question",
    "RegisterLayout",
    "StateVector",
    "StructuredOperator",
    "SweepConfig",
    "apply",
    "classical_strategy",
    "classical_value_single",
    "hermitian_eig",
    "ideal_parallel",
    "ideal_single_round",
    "kron_assemble",
    "output_observable",
    "perturb",
    "run_lemma_tests",
    "run_sweep",
    "state_dep_distance",
    "strategy_from_json",
    "strategy_to_json",
    "win_parallel",
    "win_probability",
    "win_single",
]
