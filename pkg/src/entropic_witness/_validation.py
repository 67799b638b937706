"""Input checks shared across the package."""

import numpy as np

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10


class DomainError(ValueError):
    """Raised when an input lies outside the domain of an operation."""


class ConvergenceError(RuntimeError):
    """Raised when a numerical procedure fails to reach its tolerance.

    The ``diagnostics`` mapping carries whatever the failing routine knows
    about the last attempt (step sizes, residuals, ...).
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


def check_square(rho, dim=None):
    """Return ``rho`` as a complex array of shape (..., d, d)."""
    arr = np.asarray(rho, dtype=complex)
    if arr.ndim < 2 or arr.shape[-1] != arr.shape[-2]:
        raise DomainError(f"expected square matrices, got shape {arr.shape}")
    if dim is not None and arr.shape[-1] != dim:
        raise DomainError(f"expected {dim}x{dim} matrices, got shape {arr.shape}")
    return arr


def check_hermitian(rho, dim=None, tol=HERMITIAN_TOL):
    arr = check_square(rho, dim)
    dev = np.abs(arr - np.conj(np.swapaxes(arr, -1, -2)))
    if dev.size and dev.max() > tol:
        raise DomainError(f"matrix is not Hermitian (max deviation {dev.max():.3e})")
    return arr


def check_density_matrix(rho, dim=None, trace_tol=TRACE_TOL):
    """Hermitian, unit-trace check. Positivity is left to the caller."""
    arr = check_hermitian(rho, dim)
    tr = np.trace(arr, axis1=-2, axis2=-1).real
    if np.any(np.abs(tr - 1.0) > trace_tol):
        raise DomainError(f"trace deviates from 1 (max |tr-1| = {np.max(np.abs(tr - 1.0)):.3e})")
    return arr


def check_vector3(v, name="vector", bound=None):
    arr = np.asarray(v, dtype=float)
    if arr.shape[-1:] != (3,):
        raise DomainError(f"{name} must have 3 components, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} has non-finite components")
    if bound is not None and np.any(np.abs(arr) > bound):
        raise DomainError(f"{name} components must lie in [-{bound}, {bound}]")
    return arr


def check_in_range(value, name, low, high):
    value = float(value)
    if not (low <= value <= high):
        raise DomainError(f"{name}={value} outside [{low}, {high}]")
    return value
