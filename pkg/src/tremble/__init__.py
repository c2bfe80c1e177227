"""Exact-arithmetic checks of equilibrium refinements in strategic-form games."""

from .game import (
    DimensionError,
    Game,
    MixedProfile,
    NotEquilibriumError,
    PureProfile,
    best_reply_value,
    check_nash,
    expected_payoff,
)
from .lp import LinearProgram, LPSolution, Status, feasible, solve
from .minmax import MinmaxBounds, PromiseInstance, Verdict, classify_promise, minmax_bounds, normalize_instance
from .reduction import ReducedGame, TheoremReport, build_gprime, mu_of, verify_theorem
from .refinement import (
    CertificationFailure,
    PerfectionCertificate,
    build_witness_sequence,
    certify_witness,
    check_dominated,
    check_perfect_two_player,
    conditional_best_reply_test,
    epsilon_perfection_oracle,
    verify_certificate,
)

__all__ = [
    "DimensionError",
    "Game",
    "MixedProfile",
    "NotEquilibriumError",
    "PureProfile",
    "best_reply_value",
    "check_nash",
    "expected_payoff",
    "LinearProgram",
    "LPSolution",
    "Status",
    "feasible",
    "solve",
    "MinmaxBounds",
    "PromiseInstance",
    "Verdict",
    "classify_promise",
    "minmax_bounds",
    "normalize_instance",
    "ReducedGame",
    "TheoremReport",
    "build_gprime",
    "mu_of",
    "verify_theorem",
    "CertificationFailure",
    "PerfectionCertificate",
    "build_witness_sequence",
    "certify_witness",
    "check_dominated",
    "check_perfect_two_player",
    "conditional_best_reply_test",
    "epsilon_perfection_oracle",
    "verify_certificate",
]

__version__ = "0.1.0"
