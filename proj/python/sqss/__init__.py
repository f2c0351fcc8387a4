"""Semi-quantum secret sharing simulator.

Thin package around the compiled `_core` extension: entangled-triplet
state algebra, the two protocol variants with their attacks and
countermeasures, and the exact outcome-distribution oracle.
"""

from sqss._core import (
    RandomSource,
    StateVector3,
    TripletRegister,
    __version__,
    apply_hadamard,
    make_ghz,
    make_ghz_like,
    measure_bell,
    measure_joint,
    measure_z,
    outcome_distribution,
    run_claim_suite,
    run_experiment,
)

__all__ = [
    "RandomSource",
    "StateVector3",
    "TripletRegister",
    "__version__",
    "apply_hadamard",
    "make_ghz",
    "make_ghz_like",
    "measure_bell",
    "measure_joint",
    "measure_z",
    "outcome_distribution",
    "run_claim_suite",
    "run_experiment",
]
