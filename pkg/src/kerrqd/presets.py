"""Named scenarios reproducing the published figures.

Frequencies are in units of the dot-field coupling for the coupled
figures (``coupling = 1``) and of the mode frequency for the pure Kerr
figures (``omega = 1, coupling = 0``).  Parameters a figure leaves open
are filled in conservatively and flagged in the ``description``.
"""
from __future__ import annotations

import copy

_COUPLED_G = [0.0, 0.01, 0.05, 0.1]


def _scan_g(values):
    return {"param": "model.g", "values": list(values)}


PRESETS = {
    "fig1a": {
        "description": "P(t) for a coherent input, alpha = 4, several g/Omega (omega/Omega = 100 assumed)",
        "model": {"omega": 100.0, "coupling": 1.0},
        "initial": {"kind": "coherent", "alpha": 4.0},
        "time": {"start": 0.0, "stop": 8.0, "steps": 2001, "unit": "rabi_periods"},
        "scan": _scan_g(_COUPLED_G),
        "outputs": [{"observable": "excitation_probability", "path": "fig1a_P.csv"}],
    },
    "fig1b": {
        "description": "P(t) for a squeezed-vacuum input, R = 6, several g/Omega (omega/Omega = 100 assumed)",
        "model": {"omega": 100.0, "coupling": 1.0},
        "initial": {"kind": "squeezed_vacuum", "R": 6.0},
        "time": {"start": 0.0, "stop": 8.0, "steps": 2001, "unit": "rabi_periods"},
        "scan": _scan_g(_COUPLED_G),
        "outputs": [{"observable": "excitation_probability", "path": "fig1b_P.csv"}],
    },
    "fig2a": {
        "description": "Var[x] over (g, t/T) for a coherent input alpha = 2 in the Kerr medium alone",
        "model": {"omega": 1.0, "coupling": 0.0},
        "initial": {"kind": "coherent", "alpha": 2.0},
        "time": {"start": 0.0, "stop": 1.0, "steps": 201, "unit": "kerr_periods"},
        "scan": _scan_g([round(0.01 * k, 2) for k in range(1, 51)]),
        "outputs": [{"observable": "variance_x", "path": "fig2a_var.csv"}],
    },
    "fig2b": {
        "description": "Var[x] over (g, t/T) for a squeezed-vacuum input R = 4 in the Kerr medium alone",
        "model": {"omega": 1.0, "coupling": 0.0},
        "initial": {"kind": "squeezed_vacuum", "R": 4.0},
        "time": {"start": 0.0, "stop": 1.0, "steps": 201, "unit": "kerr_periods"},
        "scan": _scan_g([round(0.01 * k, 2) for k in range(1, 51)]),
        "outputs": [{"observable": "variance_x", "path": "fig2b_var.csv"}],
    },
    "fig3": {
        "description": "Quantum carpets of a coherent input alpha = 2, g/omega = 0 and 0.1",
        "model": {"omega": 1.0, "coupling": 0.0},
        "initial": {"kind": "coherent", "alpha": 2.0},
        "time": {"start": 0.0, "stop": 1.0, "steps": 401, "unit": "kerr_periods", "kerr_g": 0.1},
        "grid": {"x_min": -8.0, "x_max": 8.0, "x_points": 321},
        "scan": _scan_g([0.0, 0.1]),
        "outputs": [{"observable": "carpet", "path": "fig3_carpet.csv"}],
    },
    "fig4": {
        "description": "Quantum carpets of a squeezed-vacuum input R = 4, g/omega = 0 and 0.125",
        "model": {"omega": 1.0, "coupling": 0.0},
        "initial": {"kind": "squeezed_vacuum", "R": 4.0},
        "time": {"start": 0.0, "stop": 1.0, "steps": 401, "unit": "kerr_periods", "kerr_g": 0.125},
        "grid": {"x_min": -14.0, "x_max": 14.0, "x_points": 561},
        "scan": _scan_g([0.0, 0.125]),
        "outputs": [{"observable": "carpet", "path": "fig4_carpet.csv"}],
    },
    "fig5": {
        "description": "Wigner functions of a squeezed-vacuum input R = 4, g/omega = 0.12, at t/T = 0, 1/64, 3/32, 1/8",
        "model": {"omega": 1.0, "coupling": 0.0, "g": 0.12},
        "initial": {"kind": "squeezed_vacuum", "R": 4.0},
        "time": {"values": [0.0, 1 / 64, 3 / 32, 1 / 8], "unit": "kerr_periods"},
        "grid": {"x_min": -8.0, "x_max": 8.0, "x_points": 161},
        "outputs": [{"observable": "wigner", "path": "fig5_wigner.csv"}],
    },
    "fig6": {
        "description": "Schmidt parameter K(t), coherent alpha = 4, g/Omega = 0, 0.01, 0.1 (omega/Omega = 100 assumed)",
        "model": {"omega": 100.0, "coupling": 1.0},
        "initial": {"kind": "coherent", "alpha": 4.0},
        "time": {"start": 0.0, "stop": 8.0, "steps": 2001, "unit": "rabi_periods"},
        "scan": _scan_g([0.0, 0.01, 0.1]),
        "outputs": [{"observable": "schmidt_parameter", "path": "fig6_K.csv"}],
    },
    "fig7": {
        "description": "Carpets with the dot coupled: (a) alpha = 2, g = 0; (b) alpha = 4, g = 0; "
                       "(c) alpha = 4, g/Omega = 0.1 (omega/Omega = 10 assumed so the lab-frame "
                       "oscillation is resolved)",
        "model": {"omega": 10.0, "coupling": 1.0},
        "initial": {"kind": "coherent", "alpha": 2.0},
        "time": {"start": 0.0, "stop": 4.0, "steps": 1025, "unit": "rabi_periods"},
        "grid": {"x_min": -10.0, "x_max": 10.0, "x_points": 321},
        "cases": [
            {"label": "a", "overrides": {"initial.alpha": 2.0, "model.g": 0.0}},
            {"label": "b", "overrides": {"initial.alpha": 4.0, "model.g": 0.0}},
            {"label": "c", "overrides": {"initial.alpha": 4.0, "model.g": 0.1}},
        ],
        "outputs": [{"observable": "carpet", "path": "fig7_carpet.csv"}],
    },
    "fig8": {
        "description": "Wigner function of the field at Omega t / 2 pi = 2, alpha = 4, g/Omega = 0 and 0.1 "
                       "(omega/Omega = 100 assumed)",
        "model": {"omega": 100.0, "coupling": 1.0},
        "initial": {"kind": "coherent", "alpha": 4.0},
        "time": {"values": [2.0], "unit": "rabi_periods"},
        "grid": {"x_min": -8.0, "x_max": 8.0, "x_points": 161},
        "scan": _scan_g([0.0, 0.1]),
        "outputs": [{"observable": "wigner", "path": "fig8_wigner.csv"}],
    },
    "fig9": {
        "description": "Normalized Var[x](t)/0.5, coherent alpha = 4, omega/Omega = 100, g/Omega = 0, 0.01, 0.1",
        "model": {"omega": 100.0, "coupling": 1.0},
        "initial": {"kind": "coherent", "alpha": 4.0},
        "time": {"start": 0.0, "stop": 2.0, "steps": 20001, "unit": "rabi_periods"},
        "scan": _scan_g([0.0, 0.01, 0.1]),
        "outputs": [{"observable": "variance_normalized", "path": "fig9_var.csv"}],
    },
}

# Suites for the ``verify`` subcommand.  Coupled dynamics are compared
# with the oracle at a few times; the Kerr-only suite has coupling 0.
VERIFY_PRESETS = {
    "verify-default": {
        "description": "closed form vs oracle: Fock, coherent and squeezed inputs with the dot coupled",
        "model": {"omega": 1.0, "coupling": 1.0},
        "initial": {"kind": "coherent", "alpha": 2.0},
        "time": {"start": 0.0, "stop": 50.0, "steps": 6, "unit": "absolute"},
        "cases": [
            {"label": "fock1-g0", "overrides": {"initial": {"kind": "fock", "n": 1}, "model.g": 0.0,
                                                 "truncation.dim": 4}},
            {"label": "coherent2-g0.1", "overrides": {"model.g": 0.1}},
            {"label": "coherent4-g0.01", "overrides": {"initial.alpha": 4.0, "model.g": 0.01}},
            {"label": "squeezed2-g0.1", "overrides": {"initial": {"kind": "squeezed_vacuum", "R": 2.0},
                                                       "model.g": 0.1}},
        ],
    },
    "verify-kerr": {
        "description": "closed form vs oracle with the coupling switched off",
        "model": {"omega": 1.0, "coupling": 0.0},
        "initial": {"kind": "coherent", "alpha": 2.0},
        "time": {"start": 0.0, "stop": 1.0, "steps": 5, "unit": "kerr_periods"},
        "cases": [
            {"label": "coherent2-g0.1", "overrides": {"model.g": 0.1}},
            {"label": "squeezed4-g0.125", "overrides": {"initial": {"kind": "squeezed_vacuum", "R": 4.0},
                                                         "model.g": 0.125}},
        ],
    },
}

FIGURE_PRESETS = tuple(PRESETS)


def list_presets(include_verify: bool = False) -> list:
    names = list(PRESETS)
    return names + list(VERIFY_PRESETS) if include_verify else names


def get_preset(name: str) -> dict:
    """Deep copy of the named scenario mapping (with ``name`` filled in)."""
    table = {**PRESETS, **VERIFY_PRESETS}
    if name not in table:
        raise KeyError(name)
    d = copy.deepcopy(table[name])
    d["name"] = name
    return d
