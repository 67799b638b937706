"""Two qubits decaying into independent zero-temperature bosonic reservoirs.

Each qubit evolves under the amplitude-damping map fixed by a complex
decoherence function ``p(t)`` with ``p(0) = 1``:

    rho_11 -> |p|^2 rho_11,   rho_10 -> p rho_10,   rho_00 -> 1 - |p|^2 rho_11

(single-qubit basis ``{|1>, |0>}``). ``p`` comes either from the closed
form for a Lorentzian spectral density (time in units of ``1/gamma0``,
interaction picture) or from the memory-kernel equation for the
Ohmic-class family (time in units of ``1/omega0``, lab frame).
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import bisect

from . import volterra
from ._validation import DomainError, check_in_range
from .states import concurrence, ewl_state
from .uncertainty import (
    ESTIMATORS,
    SX,
    SZ,
    WITNESS_MARGIN,
    UncertaintyReport,
    berta_bound,
    fano_estimate,
    measurement_estimate,
    report_table,
    tomographic_estimate,
)

TRAJECTORY_COLUMNS = ("t", "re_p", "im_p", "abs_p", "te", "me", "fe", "bb", "concurrence", "chsh")


@dataclass(frozen=True)
class OhmicClass:
    """``J(w) = eta w^s omega_c^(1-s) exp(-w/omega_c)``, frequencies in units of ``omega0``."""

    s: float
    eta: float
    omega_c: float

    def __post_init__(self):
        if self.eta <= 0 or self.omega_c <= 0:
            raise DomainError("eta and omega_c must be positive")
        if not (self.s == 0.5 or (self.s > 0 and float(self.s).is_integer())):
            raise DomainError(f"closed-form kernel needs s = 1/2 or a positive integer, got s={self.s}")

    def to_dict(self):
        return {"model": "ohmic", "s": self.s, "eta": self.eta, "omega_c": self.omega_c}


@dataclass(frozen=True)
class Lorentzian:
    """Lorentzian density of width ``lam`` detuned by ``delta``; rates in units of ``gamma0``."""

    lam: float
    delta: float = 0.0
    gamma0: float = 1.0

    def __post_init__(self):
        if self.lam <= 0 or self.gamma0 <= 0:
            raise DomainError("lam and gamma0 must be positive")

    def to_dict(self):
        return {"model": "lorentzian", "lambda": self.lam, "delta": self.delta, "gamma0": self.gamma0}


# --------------------------------------------------------------------------
# decoherence functions
# --------------------------------------------------------------------------


def _sinhc(z):
    small = np.abs(z) < 1e-4
    safe = np.where(small, 1.0, z)
    z2 = z * z
    return np.where(small, 1 + z2 / 6 + z2 * z2 / 120, np.sinh(safe) / safe)


def lorentzian_p(model, t):
    """Closed-form decoherence function of the Lorentzian reservoir.

    ``p = exp(-a t/2) [cosh(d t/2) + (a/d) sinh(d t/2)]`` with
    ``a = lam - i delta`` and ``d = sqrt(a^2 - 2 gamma0 lam)`` (principal
    root). Written as ``cosh z + a (t/2) sinh(z)/z`` the expression is even
    in ``d`` and regular at ``d = 0``.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("time must be non-negative")
    a = model.lam - 1j * model.delta
    d = np.sqrt(complex(a * a - 2 * model.gamma0 * model.lam))
    z = d * t / 2
    out = np.exp(-a * t / 2) * (np.cosh(z) + a * (t / 2) * _sinhc(z))
    return out[()] if out.ndim == 0 else out


def ohmic_kernel(model, x):
    """Memory kernel ``f(x) = int J(w) exp(-i w x) dw`` in closed form."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("time lag must be non-negative")
    wc = model.omega_c
    if model.s == 0.5:
        phase = 1.5 * np.arctan(wc * x)
        return model.eta * wc**2 * np.sqrt(np.pi) * np.exp(-1j * phase) / (2 * (1 + (wc * x) ** 2) ** 0.75)
    s = int(model.s)
    return model.eta * math.factorial(s) * wc**2 / (1 + 1j * wc * x) ** (s + 1)


@dataclass
class PTrajectory:
    """Samples of ``p`` on an ascending uniform grid.

    ``frame`` is ``"lab"`` when the free ``exp(-i omega0 t)`` rotation is
    included (Ohmic-class solutions) and ``"rotating"`` for the Lorentzian
    closed form. Between grid points :meth:`at` uses the closed form when
    one exists and otherwise a cubic spline of the frame-removed samples.
    """

    times: np.ndarray
    p: np.ndarray
    frame: str
    step: float
    model: object
    omega0: float = 0.0
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.p = np.asarray(self.p, dtype=complex)
        if self.p[0] != 1:
            raise DomainError("trajectory must start at p(0) = 1")
        if np.any(np.abs(self.p) > 1 + 1e-6):
            raise DomainError("|p| exceeds 1")
        self._spline = None

    def at(self, t):
        if isinstance(self.model, Lorentzian):
            return lorentzian_p(self.model, t)
        if self._spline is None:
            q = self.p * np.exp(1j * self.omega0 * self.times)
            self._spline = CubicSpline(self.times, q)
        return self._spline(t) * np.exp(-1j * self.omega0 * np.asarray(t))


def lorentzian_trajectory(model, t_max, step=0.002):
    n = int(round(t_max / step))
    times = np.arange(n + 1) * (t_max / n)
    p = lorentzian_p(model, times)
    p[0] = 1.0
    return PTrajectory(times, p, frame="rotating", step=t_max / n, model=model)


def solve_volterra_p(model, t_max, step=0.005, tol=1e-6, max_refinements=6, omega0=1.0):
    """Decoherence function of an Ohmic-class reservoir, lab frame.

    Solves ``p' + i omega0 p + int_0^t p(u) f(t-u) du = 0`` with the kernel
    of :func:`ohmic_kernel`, halving ``step`` until successive solutions
    agree to ``tol``.

    Raises
    ------
    ConvergenceError
        When the refinement budget is exhausted.
    """
    times, p, info = volterra.solve(
        lambda x: ohmic_kernel(model, x), t_max, step, omega0=omega0, tol=tol, max_refinements=max_refinements
    )
    return PTrajectory(times, p, frame="lab", step=info["step"], model=model, omega0=omega0, info=info)


# --------------------------------------------------------------------------
# two-qubit channel
# --------------------------------------------------------------------------


def _kraus(p):
    p = np.asarray(p, dtype=complex)
    K0 = np.zeros(p.shape + (2, 2), dtype=complex)
    K0[..., 0, 0] = p
    K0[..., 1, 1] = 1.0
    K1 = np.zeros_like(K0)
    K1[..., 1, 0] = np.sqrt(np.clip(1.0 - np.abs(p) ** 2, 0.0, None))
    return K0, K1


def apply_channel(rho0, p):
    """Apply the same damping map, fixed by ``p``, to both qubits.

    ``p`` may be an array; the result then has shape ``p.shape + (4, 4)``.
    """
    p = np.asarray(p, dtype=complex)
    if np.any(np.abs(p) > 1 + 1e-12):
        raise DomainError("|p| must not exceed 1")
    rho0 = np.asarray(rho0, dtype=complex)
    out = 0
    for Ka in _kraus(p):
        for Kb in _kraus(p):
            K = np.einsum("...ij,...kl->...ikjl", Ka, Kb).reshape(p.shape + (4, 4))
            out = out + K @ rho0 @ np.conj(np.swapaxes(K, -1, -2))
    return out


# --------------------------------------------------------------------------
# witness along a trajectory
# --------------------------------------------------------------------------

_ESTIMATOR_FUNCS = {
    "te": tomographic_estimate,
    "me": measurement_estimate,
    "fe": fano_estimate,
    "bb": berta_bound,
}


def _estimator(name):
    key = name.lower()
    if key not in _ESTIMATOR_FUNCS:
        raise DomainError(f"unknown estimator {name!r}; expected one of {ESTIMATORS}")
    return key, _ESTIMATOR_FUNCS[key]


@dataclass
class WitnessTrajectory:
    times: np.ndarray
    p: np.ndarray
    table: dict
    initial: object
    trajectory: PTrajectory

    @property
    def reports(self):
        out = []
        for i in range(len(self.times)):
            values = {k: float(v[i]) for k, v in self.table.items()}
            witnessed = {k: bool(values[k] < 1.0 - WITNESS_MARGIN) for k in ESTIMATORS}
            out.append(UncertaintyReport(**values, witnessed=witnessed))
        return out

    def rows(self):
        cols = [
            self.times,
            self.p.real,
            self.p.imag,
            np.abs(self.p),
            *(self.table[k] for k in ("te", "me", "fe", "bb", "concurrence", "chsh")),
        ]
        return np.column_stack(cols)


def evolve(initial, trajectory):
    """Report quantities at every grid point of ``trajectory`` for the EWL state ``initial``."""
    rho0 = ewl_state(initial)
    states = apply_channel(rho0, trajectory.p)
    return WitnessTrajectory(
        times=trajectory.times,
        p=trajectory.p,
        table=report_table(states),
        initial=initial,
        trajectory=trajectory,
    )


@dataclass(frozen=True)
class WitnessInterval:
    t_start: float
    t_end: float
    c_min: float
    c_max: float


def _refine(fn, a, b, xtol):
    fa = fn(a)
    fb = fn(b)
    if np.sign(fa) == np.sign(fb):
        return 0.5 * (a + b)
    return bisect(fn, a, b, xtol=xtol)


def witness_intervals(wtraj, estimator, xtol=1e-7):
    """Maximal time intervals on which ``estimator`` stays below 1.

    Crossing times are located by bisection on the estimate re-evaluated
    from :meth:`PTrajectory.at`; each interval carries the concurrence range
    attained on it.
    """
    key, func = _estimator(estimator)
    rho0 = ewl_state(wtraj.initial)
    traj = wtraj.trajectory
    level = 1.0 - WITNESS_MARGIN

    def excess(t):
        return float(func(apply_channel(rho0, traj.at(t)))) - level

    def conc_at(t):
        return float(concurrence(apply_channel(rho0, traj.at(t))))

    times = wtraj.times
    inside = wtraj.table[key] < level
    conc = wtraj.table["concurrence"]
    out = []
    idx = np.flatnonzero(np.diff(inside.astype(np.int8)) != 0)
    starts = list(idx[~inside[idx]] + 1)
    ends = list(idx[inside[idx]])
    if inside[0]:
        starts.insert(0, 0)
    if inside[-1]:
        ends.append(len(times) - 1)
    for i0, i1 in zip(starts, ends):
        t0 = times[i0] if i0 == 0 else _refine(excess, times[i0 - 1], times[i0], xtol)
        t1 = times[i1] if i1 == len(times) - 1 else _refine(excess, times[i1], times[i1 + 1], xtol)
        cs = list(conc[i0 : i1 + 1])
        if i0 > 0:
            cs.append(conc_at(t0))
        if i1 < len(times) - 1:
            cs.append(conc_at(t1))
        out.append(WitnessInterval(float(t0), float(t1), float(min(cs)), float(max(cs))))
    return out


def witnessed_region(intervals):
    """Smallest concurrence interval covering every witnessed interval, or None."""
    if not intervals:
        return None
    return min(iv.c_min for iv in intervals), max(iv.c_max for iv in intervals)


def critical_time(wtraj, estimator, xtol=1e-7):
    """Last time the estimate rises through 1.

    Returns ``None`` when entanglement is never witnessed on the trajectory
    and ``math.inf`` when it is still witnessed at the final sample.
    """
    intervals = witness_intervals(wtraj, estimator, xtol)
    if not intervals:
        return None
    last = intervals[-1]
    if last.t_end >= wtraj.times[-1]:
        return math.inf
    return last.t_end


@dataclass(frozen=True)
class CriticalPoint:
    """Threshold ``|p|_c`` above which ``estimator`` witnesses entanglement for real ``p``.

    ``status`` is ``"crossing"``, ``"always"`` (witnessed on all of [0, 1])
    or ``"never"`` (not witnessed even at ``p = 1``).
    """

    estimator: str
    status: str
    p_c: float = None
    c_low: float = None
    c_high: float = None

    def to_dict(self):
        return {
            "estimator": self.estimator.upper(),
            "status": self.status,
            "p_c": self.p_c,
            "c_low": self.c_low,
            "c_high": self.c_high,
        }


def critical_p(initial, estimator, n_grid=2001, xtol=1e-12):
    """Critical ``|p|`` for real ``p`` in [0, 1] and the concurrence range witnessed above it."""
    key, func = _estimator(estimator)
    rho0 = ewl_state(initial)
    level = 1.0 - WITNESS_MARGIN
    grid = np.linspace(0.0, 1.0, n_grid)
    values = func(apply_channel(rho0, grid), SX, SZ)
    inside = values < level
    if not inside[-1]:
        return CriticalPoint(key, "never")
    c_high = float(concurrence(apply_channel(rho0, 1.0)))
    if inside.all():
        return CriticalPoint(key, "always", 0.0, float(concurrence(apply_channel(rho0, 0.0))), c_high)
    k = np.flatnonzero(~inside)[-1]
    p_c = bisect(lambda x: float(func(apply_channel(rho0, x))) - level, grid[k], grid[k + 1], xtol=xtol)
    return CriticalPoint(key, "crossing", float(p_c), float(concurrence(apply_channel(rho0, p_c))), c_high)
