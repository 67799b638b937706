"""scikit-learn compatible wrappers.

States are passed as ``X`` of shape ``(n_samples, 4, 4)`` or flattened to
``(n_samples, 16)``; correlation vectors as ``(n_samples, 3)``. All
estimators are stateless apart from validated parameters, so ``fit`` only
checks its input and records ``n_features_in_``.
"""

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import DomainError, check_density_matrix
from .geometry import _LABELS, _classify_codes, sample_fractions
from .reservoir import apply_channel
from .states import SIGMA_X, SIGMA_Y, SIGMA_Z, is_physical
from .uncertainty import ESTIMATORS, WITNESS_MARGIN, Observable, complementarity, report_table

REPORT_FEATURES = ("te", "me", "fe", "bb", "cond_entropy", "concurrence", "tele_N", "avg_fidelity", "chsh")

_NAMED_OBSERVABLES = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}


def check_states(X, require_physical=True):
    """Validate a batch of two-qubit density matrices and return it as ``(n, 4, 4)`` complex."""
    arr = np.asarray(X)
    if arr.ndim == 2 and arr.shape[1] == 16:
        arr = arr.reshape(-1, 4, 4)
    elif arr.ndim == 2 and arr.shape == (4, 4):
        arr = arr[None]
    if arr.ndim != 3 or arr.shape[1:] != (4, 4):
        raise DomainError(f"expected states of shape (n, 4, 4) or (n, 16), got {np.shape(X)}")
    if len(arr) == 0:
        raise DomainError("found array with 0 samples")
    arr = check_density_matrix(arr, 4)
    if require_physical and not np.all(is_physical(arr)):
        raise DomainError("input contains states that are not positive semidefinite")
    return arr


def check_vectors3(V):
    arr = np.asarray(V, dtype=float)
    if arr.ndim == 1:
        arr = arr[None]
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise DomainError(f"expected correlation vectors of shape (n, 3), got {np.shape(V)}")
    if not np.all(np.isfinite(arr)) or np.any(np.abs(arr) > 1):
        raise DomainError("correlation vector components must be finite and lie in [-1, 1]")
    return arr


def _observable(obs):
    if isinstance(obs, str):
        try:
            return Observable.from_matrix(_NAMED_OBSERVABLES[obs.lower()])
        except KeyError:
            raise DomainError(f"unknown observable name {obs!r}") from None
    return obs if isinstance(obs, Observable) else Observable.from_matrix(obs)


class UncertaintyWitness(TransformerMixin, ClassifierMixin, BaseEstimator):
    """Map states to uncertainty features and flag witnessed entanglement.

    Parameters
    ----------
    R, S : {"x", "y", "z"} or 2x2 array, default "x", "z"
        The measured observable pair.
    estimator : {"te", "me", "fe", "bb"}, default "te"
        Quantity used by :meth:`predict`.

    Attributes
    ----------
    complementarity_ : float
    threshold_ : float
        ``log2(1 / complementarity_)``.
    """

    def __init__(self, R="x", S="z", estimator="te"):
        self.R = R
        self.S = S
        self.estimator = estimator

    def fit(self, X=None, y=None):
        if self.estimator not in ESTIMATORS:
            raise DomainError(f"estimator must be one of {ESTIMATORS}")
        self.R_ = _observable(self.R)
        self.S_ = _observable(self.S)
        self.complementarity_ = complementarity(self.R_, self.S_)
        self.threshold_ = float(np.log2(1.0 / self.complementarity_))
        self.n_features_in_ = 16
        if X is not None:
            check_states(X)
        return self

    def _table(self, X):
        check_is_fitted(self, "threshold_")
        return report_table(check_states(X), self.R_, self.S_)

    def transform(self, X):
        """Feature matrix with columns ``REPORT_FEATURES``."""
        table = self._table(X)
        return np.column_stack([table[k] for k in REPORT_FEATURES])

    def predict(self, X):
        return self._table(X)[self.estimator] < self.threshold_ - WITNESS_MARGIN

    def get_feature_names_out(self, input_features=None):
        return np.array(REPORT_FEATURES, dtype=object)


class AmplitudeDampingChannel(TransformerMixin, BaseEstimator):
    """Apply independent, identical amplitude damping with decoherence value ``p`` to both qubits."""

    def __init__(self, p=1.0):
        self.p = p

    def fit(self, X=None, y=None):
        if np.ndim(self.p) or abs(self.p) > 1:
            raise DomainError("p must be a scalar with |p| <= 1")
        self.n_features_in_ = 16
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        return apply_channel(check_states(X), self.p)


class CorrelationRegionClassifier(ClassifierMixin, BaseEstimator):
    """Label correlation vectors ``v`` of the canonical form with fixed local vectors ``r``, ``s``."""

    def __init__(self, r=(0.0, 0.0, 0.0), s=(0.0, 0.0, 0.0)):
        self.r = r
        self.s = s

    def fit(self, X=None, y=None):
        self.r_ = check_vectors3(self.r)[0]
        self.s_ = check_vectors3(self.s)[0]
        self.classes_ = np.array([label.value for label in _LABELS], dtype=object)
        self.n_features_in_ = 3
        return self

    def predict(self, X):
        check_is_fitted(self, "classes_")
        codes = _classify_codes(check_vectors3(X), self.r_, self.s_)
        return self.classes_[codes]


class VolumeFractionEstimator(BaseEstimator):
    """Monte Carlo fractions of the correlation-vector cube; see :func:`sample_fractions`."""

    def __init__(self, r=(0.0, 0.0, 0.0), s=(0.0, 0.0, 0.0), n_samples=10_000_000, seed=42, n_jobs=1):
        self.r = r
        self.s = s
        self.n_samples = n_samples
        self.seed = seed
        self.n_jobs = n_jobs

    def fit(self, X=None, y=None):
        self.report_ = sample_fractions(self.r, self.s, self.n_samples, self.seed, n_jobs=self.n_jobs)
        self.fractions_ = {
            k: getattr(self.report_, k)
            for k in ("frac_physical", "frac_useful_of_physical", "frac_negH_of_physical", "frac_negH_of_useful")
        }
        return self
