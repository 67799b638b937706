"""Product-integration solver for linear Volterra integro-differential equations.

Solves ``y'(t) + i w0 y(t) + int_0^t y(u) f(t - u) du = 0`` with ``y(0) = y0``.

The free rotation is factored out exactly: ``q = exp(i w0 t) y`` obeys the
same equation with ``w0 = 0`` and kernel ``g(x) = exp(i w0 x) f(x)``. The
memory integral is evaluated by product integration, i.e. ``g`` is
integrated exactly (Gauss-Legendre on each cell) against the piecewise
linear interpolant of ``q``, and the time derivative by the trapezoidal
rule. Both pieces are second order, and the rapidly varying kernel never
has to be resolved by the time grid. The history sum costs O(n) per step.
"""

import numpy as np

from ._validation import ConvergenceError, DomainError

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(12)
_GL_NODES = (_GL_NODES + 1) / 2
_GL_WEIGHTS = _GL_WEIGHTS / 2


def _cell_moments(kernel, n, h, omega0):
    """``A_k = int_0^h g(kh+u) du`` and ``B_k = int_0^h g(kh+u) u/h du`` for k < n."""
    x = (np.arange(n)[:, None] + _GL_NODES[None, :]) * h
    g = np.exp(1j * omega0 * x) * kernel(x)
    A = h * (g @ _GL_WEIGHTS)
    B = h * (g @ (_GL_WEIGHTS * _GL_NODES))
    return A, B


def solve_fixed_step(kernel, t_max, step, omega0=0.0, y0=1.0):
    """One pass on the uniform grid ``0, h, ..., t_max``.

    Returns ``(times, y)``; ``y`` is complex and ``y[0] == y0`` exactly.
    """
    if step <= 0 or t_max <= 0:
        raise DomainError("step and t_max must be positive")
    n = int(round(t_max / step))
    if n < 1 or not np.isclose(n * step, t_max, rtol=1e-9, atol=1e-12):
        raise DomainError(f"t_max={t_max} is not an integer multiple of step={step}")
    h = t_max / n
    times = np.arange(n + 1) * h
    A, B = _cell_moments(kernel, n, h, omega0)

    # I_n = W0 q_n + sum_{m=1}^{n-1} W_m q_{n-m} + B_{n-1} q_0
    W = np.empty(n, dtype=complex)
    W[0] = A[0] - B[0]
    W[1:] = A[1:] - B[1:] + B[:-1]

    q = np.empty(n + 1, dtype=complex)
    q[0] = y0
    hist = 0.0
    denom = 1.0 + 0.5 * h * W[0]
    for k in range(1, n + 1):
        known = np.dot(W[1:k], q[k - 1 : 0 : -1]) + B[k - 1] * q[0]
        q[k] = (q[k - 1] - 0.5 * h * (hist + known)) / denom
        hist = W[0] * q[k] + known
    return times, np.exp(-1j * omega0 * times) * q


def solve(kernel, t_max, step, omega0=0.0, y0=1.0, tol=1e-6, max_refinements=6):
    """Solve with automatic step halving.

    The step is halved until two successive solutions differ by less than
    ``tol`` in max norm on the coarse grid.

    Returns
    -------
    times, y : ndarray
        Grid and solution of the finest pass.
    info : dict
        ``step`` used, ``change`` (last max-norm difference) and
        ``refinements`` performed.

    Raises
    ------
    ConvergenceError
        If ``max_refinements`` halvings do not reach ``tol``.
    """
    times, y = solve_fixed_step(kernel, t_max, step, omega0, y0)
    history = []
    h = step
    for level in range(1, max_refinements + 1):
        h = h / 2
        fine_t, fine_y = solve_fixed_step(kernel, t_max, h, omega0, y0)
        change = float(np.max(np.abs(fine_y[::2] - y)))
        history.append((h, change))
        times, y = fine_t, fine_y
        if change < tol:
            return times, y, {"step": h, "change": change, "refinements": level}
    raise ConvergenceError(
        f"no convergence to {tol:g} after {max_refinements} halvings (last change {history[-1][1]:.3e})",
        {"tol": tol, "history": history},
    )
