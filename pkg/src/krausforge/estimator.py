"""Scikit-learn style front end: fit a channel once, apply it to many states.

``KrausChannel`` treats channel construction as the fitting step (the
expensive eigendecomposition, exponentials and quadrature synthesis happen
once) and state evolution as ``transform``: density matrices go in,
evolved density matrices come out. Because the estimator follows the
``get_params``/``set_params`` contract, channels can be cloned, composed
in pipelines (sequential evolution windows) and grid-searched over the
quadrature size with the usual tooling.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import kraus as _kraus
from . import liouville as _liouville
from .linalg import l2_distance
from .model import QuantumSystem, load_model, load_model_file, require_valid

METHODS = ("exact", "dphi", "first_order", "kraus")


def as_quantum_system(source) -> QuantumSystem:
    """Coerce a fit input into a validated :class:`QuantumSystem`.

    Accepts a ``QuantumSystem``, a JSON document string, or a path to a
    model file.
    """
    if isinstance(source, QuantumSystem):
        return require_valid(source)
    if isinstance(source, str):
        stripped = source.lstrip()
        if stripped.startswith("{"):
            return load_model(source)
        return load_model_file(source)
    if hasattr(source, "read_text") or hasattr(source, "__fspath__"):
        return load_model_file(source)
    raise TypeError(f"cannot interpret {type(source).__name__} as a quantum system")


class KrausChannel(TransformerMixin, BaseEstimator):
    """Quantum channel for one evolution window, as a transformer on states.

    Parameters
    ----------
    tau:
        Evolution time in the model's time unit.
    method:
        Map construction: ``"exact"`` (superoperator exponential),
        ``"dphi"`` (first order in time), ``"first_order"`` (closed form,
        first order in noise), or ``"kraus"`` (quadrature-factorized
        operator set; the default).
    n_quadrature:
        Nodes per channel for ``method="kraus"``; ``None`` keeps each
        channel's configured count.
    quadrature:
        Sampling rule for ``method="kraus"``: ``"midpoint"`` or
        ``"trapezoid-interior"``.
    system:
        Optional problem definition. When given, :meth:`fit` ignores its
        ``X`` argument, which lets channels participate in pipelines whose
        data stream is the density matrices themselves; otherwise the
        system is passed to :meth:`fit`.
    """

    def __init__(
        self,
        tau: float = 1.0,
        method: str = "kraus",
        n_quadrature: int | None = None,
        quadrature: str = _kraus.MIDPOINT,
        system=None,
    ):
        self.tau = tau
        self.method = method
        self.n_quadrature = n_quadrature
        self.quadrature = quadrature
        self.system = system

    def fit(self, X=None, y=None):
        """Synthesize the channel for a system given as object, JSON, or path."""
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        source = self.system if self.system is not None else X
        if source is None:
            raise TypeError("no system to fit: pass one to fit() or the constructor")
        system = as_quantum_system(source)
        self.system_ = system
        self.dim_ = system.dimension
        self.n_features_in_ = system.dimension ** 2
        self.kraus_set_ = None
        if self.method == "exact":
            self.superoperator_ = _liouville.exact_map(system, self.tau)
        elif self.method == "dphi":
            self.superoperator_ = _liouville.infinitesimal_map(system, self.tau)
        elif self.method == "first_order":
            self.superoperator_ = _liouville.first_order_map(system, self.tau)
        else:
            self.kraus_set_ = _kraus.synthesize(
                system, self.tau, n=self.n_quadrature, quadrature=self.quadrature
            )
            self.superoperator_ = _kraus.assemble(self.kraus_set_)
        return self

    def transform(self, X) -> np.ndarray:
        """Evolve density matrices through the fitted channel.

        Accepts a single ``(d, d)`` matrix, a stack ``(n, d, d)``, a single
        column-stacked vector ``(d**2,)``, or a batch ``(n, d**2)``; the
        output matches the input layout.
        """
        check_is_fitted(self, "superoperator_")
        states = np.asarray(X, dtype=np.complex128)
        d = self.dim_
        sup = self.superoperator_.matrix
        if states.shape == (d, d):
            return self.superoperator_.apply(states)
        if states.ndim == 3 and states.shape[1:] == (d, d):
            # Column-stack each matrix in the batch: vec(M) = M.T flattened.
            stacked = states.transpose(0, 2, 1).reshape(states.shape[0], d * d)
            evolved = stacked @ sup.T
            return evolved.reshape(states.shape[0], d, d).transpose(0, 2, 1)
        if states.shape == (d * d,):
            return sup @ states
        if states.ndim == 2 and states.shape[1] == d * d:
            return states @ sup.T
        raise ValueError(
            f"expected states of shape ({d}, {d}), (n, {d}, {d}), ({d * d},) or (n, {d * d}); "
            f"got {states.shape}"
        )

    def predict(self, X) -> np.ndarray:
        """Alias for :meth:`transform`."""
        return self.transform(X)

    def distance_to_exact(self) -> float:
        """Frobenius distance between this channel and the exact map."""
        check_is_fitted(self, "superoperator_")
        exact = _liouville.exact_map(self.system_, self.tau)
        return l2_distance(self.superoperator_.matrix, exact.matrix)

    def score(self, X=None, y=None) -> float:
        """Negative distance to the exact map (higher is better)."""
        return -self.distance_to_exact()
