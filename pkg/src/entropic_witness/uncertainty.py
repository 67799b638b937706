"""Uncertainty estimates for a pair of qubit observables with a quantum memory.

Four quantities are provided: the lower bound ``log2(1/c) + H(A|B)`` (BB),
the tomographic estimate ``H(R|B) + H(S|B)`` (TE), the measurement estimate
obtained by measuring the same observable on both qubits (ME), and the
Fano estimate ``h(p_R) + h(p_S)`` built from disagreement probabilities
(FE). For any state ``FE >= ME >= TE >= BB``.
"""

from dataclasses import asdict, dataclass, field

import numpy as np

from ._validation import DomainError, check_density_matrix, check_hermitian
from .states import (
    IDENTITY2,
    SIGMA_X,
    SIGMA_Z,
    average_fidelity,
    binary_entropy,
    chsh_parameter,
    concurrence,
    conditional_entropy,
    partial_trace,
    shannon_entropy,
    teleportation_N,
    von_neumann_entropy,
)

ESTIMATORS = ("te", "me", "fe", "bb")
# estimates within this distance of the threshold count as not witnessed
WITNESS_MARGIN = 1e-9


def _fix_phase(vec):
    k = np.flatnonzero(np.abs(vec) > 1e-12)[0]
    return vec * np.exp(-1j * np.angle(vec[k]))


@dataclass(frozen=True)
class Observable:
    """Nondegenerate qubit observable with a cached, phase-fixed eigenbasis.

    Eigenvectors are stored as columns in ascending eigenvalue order, each
    rescaled so that its first nonzero component is real and positive.
    """

    matrix: np.ndarray
    eigenvalues: np.ndarray = field(repr=False)
    eigenvectors: np.ndarray = field(repr=False)

    @classmethod
    def from_matrix(cls, matrix):
        m = check_hermitian(matrix, 2)
        w, u = np.linalg.eigh(m)
        if abs(w[1] - w[0]) < 1e-12:
            raise DomainError("observable is degenerate")
        u = np.stack([_fix_phase(u[:, k]) for k in range(2)], axis=1)
        return cls(matrix=m, eigenvalues=w, eigenvectors=u)

    @property
    def projectors(self):
        u = self.eigenvectors
        return np.stack([np.outer(u[:, k], u[:, k].conj()) for k in range(2)])


SX = Observable.from_matrix(SIGMA_X)
SZ = Observable.from_matrix(SIGMA_Z)


def _as_observable(obs):
    return obs if isinstance(obs, Observable) else Observable.from_matrix(obs)


def complementarity(R, S):
    """Largest squared overlap between eigenvectors of ``R`` and ``S``."""
    R, S = _as_observable(R), _as_observable(S)
    overlaps = np.abs(R.eigenvectors.conj().T @ S.eigenvectors) ** 2
    return float(overlaps.max())


def postmeasure_cq(rho, X):
    """Dephase qubit A in the eigenbasis of ``X``: ``sum_k (P_k x I) rho (P_k x I)``."""
    rho = check_density_matrix(rho, 4)
    X = _as_observable(X)
    out = np.zeros_like(rho)
    for P in X.projectors:
        big = np.kron(P, IDENTITY2)
        out = out + big @ rho @ big
    return out


def conditional_on_memory(rho, X):
    """``H(X|B)`` of the classical-quantum state left after measuring ``X`` on A."""
    rho = check_density_matrix(rho, 4)
    return von_neumann_entropy(postmeasure_cq(rho, X)) - von_neumann_entropy(partial_trace(rho, "B"))


def tomographic_estimate(rho, R=SX, S=SZ):
    return conditional_on_memory(rho, R) + conditional_on_memory(rho, S)


def berta_bound(rho, R=SX, S=SZ):
    return np.log2(1.0 / complementarity(R, S)) + conditional_entropy(rho)


def joint_outcome_distribution(rho, X):
    """Table ``p[a, b] = tr[(P_a x P_b) rho]`` for the same observable on both qubits.

    Rows index A's outcome, columns B's, both in ascending eigenvalue order.
    """
    rho = check_density_matrix(rho, 4)
    P = _as_observable(X).projectors
    ops = np.einsum("aij,bkl->abikjl", P, P).reshape(2, 2, 4, 4)
    table = np.einsum("abij,...ji->...ab", ops, rho).real
    return np.clip(table, 0.0, 1.0)


def measurement_estimate(rho, R=SX, S=SZ):
    """Sum over ``X in {R, S}`` of the classical conditional entropy of A's outcome given B's."""
    total = 0.0
    for X in (R, S):
        table = joint_outcome_distribution(rho, X)
        flat = table.reshape(table.shape[:-2] + (4,))
        total = total + shannon_entropy(flat) - shannon_entropy(table.sum(axis=-2))
    return total


def disagreement_probability(rho, X):
    table = joint_outcome_distribution(rho, X)
    return table[..., 0, 1] + table[..., 1, 0]


def fano_estimate(rho, R=SX, S=SZ):
    # qubits: the p_X log2(d - 1) term of Fano's inequality vanishes
    return binary_entropy(disagreement_probability(rho, R)) + binary_entropy(disagreement_probability(rho, S))


@dataclass
class UncertaintyReport:
    te: float
    me: float
    fe: float
    bb: float
    cond_entropy: float
    concurrence: float
    tele_N: float
    avg_fidelity: float
    chsh: float
    witnessed: dict

    def to_dict(self):
        return asdict(self)


def report_table(rho, R=SX, S=SZ):
    """All report quantities for a stack of states, as a dict of arrays.

    An estimate witnesses entanglement when it is strictly below
    ``log2(1/c)``; see :func:`witness_report`.
    """
    rho = check_density_matrix(rho, 4)
    R, S = _as_observable(R), _as_observable(S)
    return {
        "te": tomographic_estimate(rho, R, S),
        "me": measurement_estimate(rho, R, S),
        "fe": fano_estimate(rho, R, S),
        "bb": berta_bound(rho, R, S),
        "cond_entropy": conditional_entropy(rho),
        "concurrence": concurrence(rho),
        "tele_N": teleportation_N(rho),
        "avg_fidelity": average_fidelity(rho),
        "chsh": chsh_parameter(rho),
    }


def witness_report(rho, R=SX, S=SZ):
    rho = check_density_matrix(rho, 4)
    if rho.ndim != 2:
        raise DomainError("witness_report takes a single state; use report_table for stacks")
    threshold = np.log2(1.0 / complementarity(R, S))
    values = {k: float(v) for k, v in report_table(rho, R, S).items()}
    witnessed = {k: bool(values[k] < threshold - WITNESS_MARGIN) for k in ESTIMATORS}
    return UncertaintyReport(**values, witnessed=witnessed)
