"""Single-mode field states in a truncated Fock basis.

Amplitudes are generated by ratio recurrences so no factorials are formed;
after truncation the vector is renormalized and the discarded probability
mass is kept on the state as ``tail_eps``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import cosh, isfinite, log, sqrt, tanh

import numpy as np
from scipy.special import gammaln

DEFAULT_TAIL_EPS = 1e-12
DEFAULT_MAX_DIM = 4096

# How far past max_dim auto_dim keeps looking, only to report the required dim.
_SEARCH_FACTOR = 16


class ParameterError(ValueError):
    """Invalid physical parameter (negative squeezing factor, bad index, ...)."""


class TruncationError(ValueError):
    """The requested tail bound cannot be met within the dimension cap."""

    def __init__(self, required, max_dim, tail_eps):
        self.required = required
        self.max_dim = max_dim
        self.tail_eps = tail_eps
        req = f"{required}" if required is not None else f"more than {max_dim * _SEARCH_FACTOR}"
        super().__init__(
            f"truncation needs dim={req} to reach tail_eps={tail_eps:g} but max_dim={max_dim}; "
            f"raise max_dim or loosen tail_eps"
        )


@dataclass(frozen=True)
class TruncationPolicy:
    """How to cut the Fock basis.

    ``dim`` forces a fixed basis size and bypasses the tail bound; the
    achieved tail is still recorded on the constructed state.
    """

    tail_eps: float = DEFAULT_TAIL_EPS
    max_dim: int = DEFAULT_MAX_DIM
    dim: int | None = None

    def __post_init__(self):
        if not 0.0 < self.tail_eps < 1.0:
            raise ParameterError(f"tail_eps must lie in (0, 1), got {self.tail_eps}")
        if self.max_dim < 1:
            raise ParameterError(f"max_dim must be >= 1, got {self.max_dim}")
        if self.dim is not None and not 1 <= self.dim <= self.max_dim:
            raise ParameterError(f"dim must lie in [1, max_dim={self.max_dim}], got {self.dim}")


@dataclass(frozen=True, eq=False)
class FieldState:
    """Pure field state ``sum_n amps[n] |n>``."""

    amps: np.ndarray
    tail_eps: float = 0.0

    def __post_init__(self):
        amps = np.array(self.amps, dtype=complex).ravel()
        if amps.size < 1:
            raise ParameterError("a field state needs at least one amplitude")
        amps.flags.writeable = False
        object.__setattr__(self, "amps", amps)

    @property
    def dim(self) -> int:
        return self.amps.size

    @property
    def populations(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.populations)))

    def padded(self, dim: int) -> np.ndarray:
        """Amplitudes zero-padded (never cut) to ``dim``."""
        if dim < self.dim:
            raise ParameterError(f"cannot pad a dim-{self.dim} state down to {dim}")
        out = np.zeros(dim, dtype=complex)
        out[: self.dim] = self.amps
        return out


@dataclass(frozen=True)
class StateSpec:
    """Declarative description of an initial field state."""

    kind: str
    n: int | None = None
    alpha: complex | None = None
    R: float | None = None
    r: float | None = None
    custom_amps: tuple = field(default=())

    KINDS = ("fock", "coherent", "squeezed_vacuum", "custom")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ParameterError(f"unknown state kind {self.kind!r}; expected one of {self.KINDS}")
        given = {
            "n": self.n is not None,
            "alpha": self.alpha is not None,
            "R": self.R is not None,
            "r": self.r is not None,
            "custom_amps": len(self.custom_amps) > 0,
        }
        allowed = {
            "fock": {"n"},
            "coherent": {"alpha"},
            "squeezed_vacuum": {"R", "r"},
            "custom": {"custom_amps"},
        }[self.kind]
        extra = [k for k, v in given.items() if v and k not in allowed]
        if extra:
            raise ParameterError(f"{self.kind} state does not take {extra}")
        if self.kind == "fock" and (self.n is None or self.n < 0):
            raise ParameterError("fock state needs n >= 0")
        if self.kind == "coherent" and self.alpha is None:
            raise ParameterError("coherent state needs alpha")
        if self.kind == "squeezed_vacuum":
            if given["R"] == given["r"]:
                raise ParameterError("squeezed_vacuum needs exactly one of R or r")
            if self.R is not None and not self.R > 0:
                raise ParameterError(f"squeezing factor R must be > 0, got {self.R}")
        if self.kind == "custom" and not given["custom_amps"]:
            raise ParameterError("custom state needs custom_amps")

    @property
    def squeezing_factor(self) -> float:
        if self.kind != "squeezed_vacuum":
            raise ParameterError("not a squeezed state")
        return float(self.R) if self.R is not None else float(np.exp(self.r))


# --- exact per-term probabilities -------------------------------------------

def _coherent_log_pmf(alpha: complex, count: int) -> np.ndarray:
    mu = abs(alpha) ** 2
    k = np.arange(count)
    if mu == 0.0:
        out = np.full(count, -np.inf)
        out[0] = 0.0
        return out
    # log of e^{-mu} mu^k / k!, lgamma keeps this finite for any k
    return -mu + k * log(mu) - gammaln(k + 1.0)


def _squeezed_log_pmf(R: float, count: int) -> np.ndarray:
    """Log-probability of Fock level n (odd levels -> -inf)."""
    r = log(R)
    t2 = tanh(r) ** 2
    out = np.full(count, -np.inf)
    if t2 == 0.0:
        out[0] = 0.0
        return out
    kmax = (count - 1) // 2
    k = np.arange(kmax + 1)
    # (2k)!/(4^k k!^2) via lgamma
    lg = gammaln(2 * k + 1.0) - 2 * gammaln(k + 1.0) - k * log(4.0)
    out[2 * k] = -log(cosh(r)) + k * log(t2) + lg
    return out


def _tail_after(log_p: np.ndarray, tail_ratio: float) -> np.ndarray:
    """tail[D] = excluded mass when keeping levels 0..D-1, for D = 0..len."""
    p = np.exp(log_p)
    # mass beyond the computed window, bounded geometrically from the last populated term
    last = p[np.nonzero(p)[0][-1]] if np.any(p) else 0.0
    beyond = last * tail_ratio / (1.0 - tail_ratio) if tail_ratio < 1.0 else np.inf
    rev = np.cumsum(p[::-1])[::-1]
    return np.concatenate([rev + beyond, [beyond]])


def _log_pmf_and_ratio(spec: StateSpec, count: int):
    if spec.kind == "coherent":
        mu = abs(spec.alpha) ** 2
        ratio = mu / count if count > 0 else 1.0
        return _coherent_log_pmf(spec.alpha, count), ratio
    R = spec.squeezing_factor
    return _squeezed_log_pmf(R, count), tanh(log(R)) ** 2


def auto_dim(spec: StateSpec, tail_eps: float = DEFAULT_TAIL_EPS, max_dim: int = DEFAULT_MAX_DIM) -> int:
    """Smallest basis size whose excluded probability mass is below ``tail_eps``.

    The tail is summed from the exact (untruncated) per-level probabilities.
    Raises :class:`TruncationError` naming the required size when it exceeds
    ``max_dim``.
    """
    if not 0.0 < tail_eps < 1.0:
        raise ParameterError(f"tail_eps must lie in (0, 1), got {tail_eps}")
    if spec.kind == "fock":
        need = spec.n + 1
    elif spec.kind == "custom":
        amps = np.asarray(spec.custom_amps, dtype=complex)
        nz = np.nonzero(amps)[0]
        need = int(nz[-1]) + 1 if nz.size else 1
    else:
        count = max_dim * _SEARCH_FACTOR
        log_p, ratio = _log_pmf_and_ratio(spec, count)
        tail = _tail_after(log_p, ratio)
        ok = np.nonzero(tail < tail_eps)[0]
        if ok.size == 0:
            raise TruncationError(None, max_dim, tail_eps)
        need = max(int(ok[0]), 1)
    if need > max_dim:
        raise TruncationError(need, max_dim, tail_eps)
    return need


def _resolve_dim(spec: StateSpec, trunc: TruncationPolicy) -> int:
    if trunc.dim is not None:
        return trunc.dim
    return auto_dim(spec, trunc.tail_eps, trunc.max_dim)


def _finish(amps: np.ndarray, spec: StateSpec, dim: int) -> FieldState:
    if spec.kind in ("coherent", "squeezed_vacuum"):
        log_p, ratio = _log_pmf_and_ratio(spec, 2 * dim + 64)
        excluded = float(_tail_after(log_p, ratio)[dim])
    else:
        excluded = 0.0
    peak = np.max(np.abs(amps))
    if not peak > 0 or not isfinite(peak):
        raise ParameterError("state has no weight inside the truncated basis")
    amps = amps / peak
    norm = np.linalg.norm(amps)
    return FieldState(amps / norm, tail_eps=excluded)


def coherent_state(alpha: complex, trunc: TruncationPolicy = TruncationPolicy()) -> FieldState:
    """Coherent state ``|alpha>`` renormalized on the truncated basis."""
    alpha = complex(alpha)
    spec = StateSpec("coherent", alpha=alpha)
    dim = _resolve_dim(spec, trunc)
    amps = np.empty(dim, dtype=complex)
    # start from e^{-|a|^2/2} in a scaled form to survive large |alpha|
    amps[0] = 1.0
    for k in range(dim - 1):
        amps[k + 1] = amps[k] * alpha / sqrt(k + 1)
        if abs(amps[k + 1]) > 1e250:
            amps[: k + 2] *= 1e-250
    return _finish(amps, spec, dim)


def squeezed_vacuum_state(R: float, trunc: TruncationPolicy = TruncationPolicy()) -> FieldState:
    """Squeezed vacuum with squeezing factor ``R = exp(r)``.

    Coefficients carry the ``(-tanh r)^k`` sign on level ``2k``, which
    squeezes the x quadrature for ``R > 1``.
    """
    if not R > 0:
        raise ParameterError(f"squeezing factor R must be > 0, got {R}")
    spec = StateSpec("squeezed_vacuum", R=float(R))
    dim = _resolve_dim(spec, trunc)
    th = tanh(log(R))
    amps = np.zeros(dim, dtype=complex)
    amps[0] = 1.0 / sqrt(cosh(log(R)))
    for k in range(0, dim - 2, 2):
        amps[k + 2] = -th * amps[k] * sqrt((k + 1) / (k + 2))
    return _finish(amps, spec, dim)


def fock_state(n: int, trunc: TruncationPolicy = TruncationPolicy()) -> FieldState:
    if n < 0:
        raise ParameterError(f"Fock index must be >= 0, got {n}")
    dim = trunc.dim if trunc.dim is not None else n + 1
    if n >= dim or n >= trunc.max_dim:
        raise ParameterError(f"Fock index {n} out of range for dim={min(dim, trunc.max_dim)}")
    amps = np.zeros(dim, dtype=complex)
    amps[n] = 1.0
    return FieldState(amps)


def custom_state(amps, trunc: TruncationPolicy = TruncationPolicy()) -> FieldState:
    amps = np.asarray(amps, dtype=complex).ravel()
    if trunc.dim is not None:
        if np.any(amps[trunc.dim:] != 0):
            raise ParameterError("custom amplitudes populate levels beyond the fixed dim")
        amps = np.concatenate([amps, np.zeros(max(trunc.dim - amps.size, 0))])[: trunc.dim]
    if amps.size > trunc.max_dim:
        raise TruncationError(amps.size, trunc.max_dim, trunc.tail_eps)
    norm = np.linalg.norm(amps)
    if not norm > 0:
        raise ParameterError("custom amplitudes are all zero")
    return FieldState(amps / norm)


def from_spec(spec: StateSpec, trunc: TruncationPolicy = TruncationPolicy()) -> FieldState:
    if spec.kind == "fock":
        return fock_state(spec.n, trunc)
    if spec.kind == "coherent":
        return coherent_state(spec.alpha, trunc)
    if spec.kind == "squeezed_vacuum":
        return squeezed_vacuum_state(spec.squeezing_factor, trunc)
    return custom_state(spec.custom_amps, trunc)


def mean_photon_number(state: FieldState) -> float:
    n = np.arange(state.dim)
    return float(np.sum(n * state.populations))
