"""Quantum dot in a Kerr-nonlinear cavity: closed-form dynamics and observables."""

__version__ = "0.1.0"

from .dynamics import (  # noqa: E402
    FRAMES,
    JointState,
    ModelParams,
    Trajectory,
    evolve,
    evolve_many,
    excitation_probability,
    kerr_propagate,
    quasienergies,
)
from .states import (  # noqa: E402
    FieldState,
    ParameterError,
    StateSpec,
    TruncationError,
    TruncationPolicy,
    coherent_state,
    fock_state,
    from_spec,
    squeezed_vacuum_state,
)

__all__ = [
    "FRAMES", "JointState", "ModelParams", "Trajectory", "evolve", "evolve_many",
    "excitation_probability", "kerr_propagate", "quasienergies", "FieldState", "ParameterError",
    "StateSpec", "TruncationError", "TruncationPolicy", "coherent_state", "fock_state", "from_spec",
    "squeezed_vacuum_state",
]
