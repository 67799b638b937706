"""Two-qubit density-matrix algebra.

Basis convention
----------------
Single-qubit matrices are written in the ordered basis ``{|1>, |0>}`` where
``|1>`` is the excited level, so index 0 is ``|1>`` and index 1 is ``|0>``.
Two-qubit matrices use the product ordering ``{|11>, |10>, |01>, |00>}``
(index ``2*a + b`` for qubit A in index ``a`` and qubit B in index ``b``).
The Pauli matrices are the textbook ones *in index space*, so
``sigma_z |1> = +|1>``.

Every function that takes a state also accepts a stack of states with shape
``(..., 4, 4)`` and then returns an array over the leading axes.
"""

from dataclasses import dataclass

import numpy as np

from ._validation import (
    PSD_TOL,
    DomainError,
    check_density_matrix,
    check_hermitian,
    check_in_range,
    check_square,
    check_vector3,
)

BASIS_LABELS = ("11", "10", "01", "00")

IDENTITY2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = np.stack([SIGMA_X, SIGMA_Y, SIGMA_Z])

KET1 = np.array([1, 0], dtype=complex)
KET0 = np.array([0, 1], dtype=complex)

_LOCAL_A = np.stack([np.kron(s, IDENTITY2) for s in PAULIS])
_LOCAL_B = np.stack([np.kron(IDENTITY2, s) for s in PAULIS])
_CORR = np.stack([np.stack([np.kron(si, sj) for sj in PAULIS]) for si in PAULIS])
_SPIN_FLIP = np.kron(SIGMA_Y, SIGMA_Y)


def ket(label):
    """Computational basis ket for a bit string such as ``"10"``."""
    vec = np.array([1], dtype=complex)
    for bit in label:
        vec = np.kron(vec, KET1 if bit == "1" else KET0)
    return vec


@dataclass(frozen=True)
class BlochDecomposition:
    """Local Bloch vectors ``x`` (qubit A), ``y`` (qubit B) and correlation tensor ``T``."""

    x: np.ndarray
    y: np.ndarray
    T: np.ndarray

    def to_matrix(self):
        return bloch_reconstruct(self.x, self.y, self.T)


@dataclass(frozen=True)
class CanonicalBloch:
    """State with diagonal correlation tensor ``diag(v)`` and local vectors ``r``, ``s``.

    The induced matrix need not be positive; see :func:`is_physical`.
    """

    r: tuple
    s: tuple
    v: tuple

    def __post_init__(self):
        for name in ("r", "s", "v"):
            vec = check_vector3(getattr(self, name), name, bound=1.0)
            object.__setattr__(self, name, tuple(float(c) for c in vec))

    def to_dict(self):
        return {"r": list(self.r), "s": list(self.s), "v": list(self.v)}

    @classmethod
    def from_dict(cls, data):
        try:
            return cls(r=data["r"], s=data["s"], v=data["v"])
        except KeyError as exc:
            raise DomainError(f"canonical Bloch record is missing key {exc}") from None


@dataclass(frozen=True)
class EwlSpec:
    """Extended Werner-like state ``r |X><X| + (1 - r) I / 4``.

    ``family`` selects ``|psi> = alpha|00> + e^{i theta} sqrt(1-alpha^2)|11>``
    or ``|phi> = alpha|10> + e^{i theta} sqrt(1-alpha^2)|01>``; ``purity`` is
    the weight ``r``.
    """

    family: str = "psi"
    purity: float = 1.0
    alpha: float = 1 / np.sqrt(2)
    theta: float = 0.0

    def __post_init__(self):
        if self.family not in ("psi", "phi"):
            raise DomainError(f"unknown EWL family {self.family!r}; expected 'psi' or 'phi'")
        check_in_range(self.purity, "purity", 0.0, 1.0)
        check_in_range(self.alpha, "alpha", 0.0, 1.0)
        if not np.isfinite(self.theta):
            raise DomainError("theta must be finite")

    def to_dict(self):
        return {"family": self.family, "purity": self.purity, "alpha": self.alpha, "theta": self.theta}


# --------------------------------------------------------------------------
# construction
# --------------------------------------------------------------------------


def bloch_reconstruct(x, y, T):
    """Build ``(I + x.sigma (x) I + I (x) y.sigma + sum_ij T_ij sigma_i (x) sigma_j) / 4``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    T = np.asarray(T, dtype=float)
    out = np.eye(4, dtype=complex) + np.einsum("...k,kab->...ab", x, _LOCAL_A)
    out = out + np.einsum("...k,kab->...ab", y, _LOCAL_B)
    out = out + np.einsum("...ij,ijab->...ab", T, _CORR)
    return out / 4


def canonical_matrix(r, s, v):
    """Matrix of the canonical form; broadcasts over leading axes of ``r``, ``s``, ``v``."""
    r = np.asarray(r, dtype=float)
    s = np.asarray(s, dtype=float)
    v = np.asarray(v, dtype=float)
    diag = np.einsum("...k,kab->...ab", v, np.stack([_CORR[k, k] for k in range(3)]))
    out = np.eye(4, dtype=complex) + np.einsum("...k,kab->...ab", r, _LOCAL_A)
    out = out + np.einsum("...k,kab->...ab", s, _LOCAL_B) + diag
    return out / 4


def from_canonical(c):
    """Density matrix of a :class:`CanonicalBloch` record (no positivity guarantee)."""
    if not isinstance(c, CanonicalBloch):
        c = CanonicalBloch(*c)
    return canonical_matrix(c.r, c.s, c.v)


def bloch_decompose(rho):
    rho = check_density_matrix(rho, 4)
    x = np.einsum("kab,...ba->...k", _LOCAL_A, rho).real
    y = np.einsum("kab,...ba->...k", _LOCAL_B, rho).real
    T = np.einsum("ijab,...ba->...ij", _CORR, rho).real
    return BlochDecomposition(x=x, y=y, T=T)


def correlation_tensor(rho):
    rho = check_square(rho, 4)
    return np.einsum("ijab,...ba->...ij", _CORR, rho).real


def ewl_state(spec):
    """Extended Werner-like density matrix for an :class:`EwlSpec`."""
    a = spec.alpha
    b = np.exp(1j * spec.theta) * np.sqrt(max(0.0, 1.0 - a * a))
    if spec.family == "psi":
        vec = a * ket("00") + b * ket("11")
    else:
        vec = a * ket("10") + b * ket("01")
    r = spec.purity
    return r * np.outer(vec, vec.conj()) + (1 - r) / 4 * np.eye(4, dtype=complex)


_VERTEX_LOCALS = {
    (1, 0, 0): (0, 1),
    (-1, 0, 0): (0, -1),
    (0, 1, 0): (1, 1),
    (0, -1, 0): (1, -1),
}


def octahedron_vertex_state(vertex, free_param=0.0):
    """Physical state whose correlation vector sits at a vertex of the octahedron.

    At ``v = (+-1, 0, 0)`` the local vectors are ``r = (a, 0, 0)`` and
    ``s = (+-a, 0, 0)``; likewise along the second axis. At ``v = (0, 0, +-1)``
    positivity forces ``r = s = 0`` and ``free_param`` is ignored.
    """
    key = tuple(int(round(c)) for c in np.asarray(vertex, dtype=float))
    if sorted(abs(c) for c in key) != [0, 0, 1] or not np.allclose(vertex, key):
        raise DomainError(f"{vertex!r} is not a vertex of the octahedron")
    a = check_in_range(free_param, "free_param", -1.0, 1.0)
    r = np.zeros(3)
    s = np.zeros(3)
    if key in _VERTEX_LOCALS:
        axis, sign = _VERTEX_LOCALS[key]
        r[axis] = a
        s[axis] = sign * a
    return canonical_matrix(r, s, np.array(key, dtype=float))


# --------------------------------------------------------------------------
# spectra and entropies
# --------------------------------------------------------------------------


def is_physical(rho, tol=PSD_TOL):
    """True iff the smallest eigenvalue is at least ``-tol``."""
    rho = check_hermitian(rho)
    return np.linalg.eigvalsh(rho)[..., 0] >= -tol


def min_eigenvalue(rho):
    return np.linalg.eigvalsh(check_hermitian(rho))[..., 0]


def partial_trace(rho, keep="A"):
    """Reduced 2x2 state of qubit ``keep`` (``"A"`` or ``"B"``)."""
    rho = check_square(rho, 4)
    r = rho.reshape(rho.shape[:-2] + (2, 2, 2, 2))
    if keep == "A":
        return np.einsum("...ajbj->...ab", r)
    if keep == "B":
        return np.einsum("...jajb->...ab", r)
    raise DomainError(f"keep must be 'A' or 'B', got {keep!r}")


def entropy_from_eigenvalues(w, tol=PSD_TOL):
    w = np.asarray(w, dtype=float)
    if w.size and w.min() < -tol:
        raise DomainError(f"negative eigenvalue {w.min():.3e} below tolerance -{tol:g}")
    w = np.clip(w, 0.0, 1.0)
    logs = np.log2(np.where(w > 0, w, 1.0))
    return -np.sum(w * logs, axis=-1)


def von_neumann_entropy(rho, tol=PSD_TOL):
    """Entropy in bits, ``-sum l log2 l`` with ``0 log 0 = 0``.

    Raises
    ------
    DomainError
        If any eigenvalue is below ``-tol``.
    """
    rho = check_hermitian(rho)
    return entropy_from_eigenvalues(np.linalg.eigvalsh(rho), tol)


def shannon_entropy(probs, axis=-1):
    p = np.clip(np.asarray(probs, dtype=float), 0.0, 1.0)
    return -np.sum(p * np.log2(np.where(p > 0, p, 1.0)), axis=axis)


def binary_entropy(p):
    p = np.asarray(p, dtype=float)
    return shannon_entropy(np.stack([p, 1.0 - p], axis=-1))


def conditional_entropy(rho):
    """``H(AB) - H(B)`` in bits; negative values certify entanglement."""
    rho = check_density_matrix(rho, 4)
    return von_neumann_entropy(rho) - von_neumann_entropy(partial_trace(rho, "B"))


def distillable_lower_bound(rho):
    return np.maximum(0.0, -conditional_entropy(rho))


def _psd_sqrt(rho):
    w, u = np.linalg.eigh(rho)
    w = np.sqrt(np.clip(w, 0.0, None))
    return (u * w[..., None, :]) @ np.conj(np.swapaxes(u, -1, -2))


def concurrence(rho):
    """Wootters concurrence.

    The square roots of the eigenvalues of ``rho (sy x sy) rho* (sy x sy)``
    are obtained as singular values of ``sqrt(rho) sqrt(rho~)``, which is the
    same spectrum computed without a non-Hermitian eigensolver.
    """
    rho = check_density_matrix(rho, 4)
    flipped = _SPIN_FLIP @ np.conj(rho) @ _SPIN_FLIP
    sv = np.linalg.svd(_psd_sqrt(rho) @ _psd_sqrt(flipped), compute_uv=False)
    return np.maximum(0.0, sv[..., 0] - sv[..., 1] - sv[..., 2] - sv[..., 3])


# --------------------------------------------------------------------------
# teleportation and Bell nonlocality
# --------------------------------------------------------------------------


def teleportation_N(rho):
    """Trace norm of the correlation tensor, ``tr sqrt(T^T T)``."""
    T = correlation_tensor(check_density_matrix(rho, 4))
    return np.linalg.svd(T, compute_uv=False).sum(axis=-1)


def average_fidelity(rho):
    """Optimal average fidelity of the standard teleportation scheme, ``1/2 + N/6``."""
    return 0.5 + teleportation_N(rho) / 6


def chsh_parameter(rho):
    """Sum of the two largest eigenvalues of ``T^T T``; above 1 means CHSH violation."""
    T = correlation_tensor(check_density_matrix(rho, 4))
    w = np.linalg.eigvalsh(np.swapaxes(T, -1, -2) @ T)
    return w[..., 1] + w[..., 2]


# --------------------------------------------------------------------------
# serialization
# --------------------------------------------------------------------------


def state_to_dict(rho):
    rho = check_square(rho, 4)
    return {"re": rho.real.tolist(), "im": rho.imag.tolist()}


def state_from_dict(data):
    try:
        re = np.asarray(data["re"], dtype=float)
        im = np.asarray(data.get("im", np.zeros_like(re)), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed state record: {exc}") from None
    if re.shape != (4, 4) or im.shape != (4, 4):
        raise DomainError("state record must hold 4x4 're' and 'im' arrays")
    return check_density_matrix(re + 1j * im, 4)
