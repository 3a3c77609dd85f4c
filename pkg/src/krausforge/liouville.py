"""Superoperator-level objects: the Liouvillian, its generator split, and maps.

All superoperators act on column-stacked density matrices, so a map
``rho -> A rho B`` is the matrix ``kron(B.T, A)``. The evolution window
``tau`` is always folded into the generators before anything is built; a
system enters this module only through its dimensionless ``H*tau`` and
``gamma*tau``.

The generator of the master equation splits as ``tau*L = C + D`` where

* ``C`` exponentiates in closed form to ``kron(K0.conj(), K0)`` with
  ``K0 = expm(-i*H*tau - sum_l eps_l L_l^dag L_l / 2)``, and
* ``D = sum_l eps_l kron(L_l.conj(), L_l)`` is the jump part whose
  interplay with the coherent dynamics is captured, to first order in the
  noise strengths, by an entry-wise dressing in the Hamiltonian eigenbasis
  (:func:`interaction_matrix`, :func:`first_order_map`).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import SpectralDecomposition, expm, herm_eig, kron_sum, unvec, vec
from .model import QuantumSystem, rescale, require_valid

COLUMN_STACKING = "column-stacking"

#: Below this phase difference the interaction factor switches to a cubic
#: series to avoid cancellation in ``1 - exp(-i x)``; the truncation error
#: at the threshold is ~1e-26.
SMALL_PHASE_THRESHOLD = 1e-6


@dataclass
class SuperOperator:
    """A ``d**2 x d**2`` matrix acting on column-stacked density matrices."""

    matrix: np.ndarray
    dim: int
    convention: str = COLUMN_STACKING

    def __post_init__(self):
        expected = (self.dim * self.dim, self.dim * self.dim)
        if self.matrix.shape != expected:
            raise ValueError(f"expected shape {expected}, got {self.matrix.shape}")
        if self.convention != COLUMN_STACKING:
            raise ValueError(f"unsupported vectorization convention {self.convention!r}")

    def apply(self, rho: np.ndarray) -> np.ndarray:
        """Evolve a single density matrix through the map."""
        return unvec(self.matrix @ vec(rho), self.dim)

    def trace_defect(self) -> float:
        """Norm of ``vec(1)^dag S - vec(1)^dag``; zero for trace-preserving maps."""
        tvec = vec(np.eye(self.dim)).conj()
        return float(np.linalg.norm(tvec @ self.matrix - tvec))


@dataclass
class InteractionMatrix:
    """Entry-wise dressing factors between pairs of Hamiltonian eigenmodes.

    Index ``i = i_a * d + i_b`` labels the mode pair ``(i_a, i_b)`` with
    transition frequency ``mu[i] = lam[i_a] - lam[i_b]``; entry ``(i, j)``
    is the time-averaged phase ``(1 - exp(-i dmu)) / (i dmu)`` accumulated
    between the frequencies ``dmu = mu[i] - mu[j]``.
    """

    entries: np.ndarray
    mu: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return int(round(np.sqrt(self.mu.shape[0])))


def _scaled(system: QuantumSystem, tau: float):
    require_valid(system)
    return rescale(system, tau)


def build_liouvillian(system: QuantumSystem, tau: float) -> SuperOperator:
    """The dimensionless generator ``tau*L`` of the master equation."""
    scaled = _scaled(system, tau)
    d = system.dimension
    eye = np.eye(d)
    h = scaled.h_tilde
    # (-i h).conj() == i h.T up to the allowed Hermiticity slack of h; the
    # conjugate form is used in the generator split too, keeping the
    # identity C + D == tau*L exact to rounding.
    gen = np.kron((-1j * h).conj(), eye) + np.kron(eye, -1j * h)
    for channel, eps in zip(system.channels, scaled.epsilons):
        L = channel.collapse
        LdL = L.conj().T @ L
        gen += eps * (
            np.kron(L.conj(), L) - 0.5 * (np.kron(LdL.conj(), eye) + np.kron(eye, LdL))
        )
    return SuperOperator(gen, d)


def exact_map(system: QuantumSystem, tau: float) -> SuperOperator:
    """Ground-truth evolution ``expm(tau*L)``; the oracle for every comparison."""
    gen = build_liouvillian(system, tau)
    return SuperOperator(expm(gen.matrix), system.dimension)


def infinitesimal_map(system: QuantumSystem, tau: float) -> SuperOperator:
    """First-order-in-time baseline ``1 + tau*L``."""
    gen = build_liouvillian(system, tau)
    return SuperOperator(np.eye(gen.matrix.shape[0]) + gen.matrix, system.dimension)


def build_generators(
    system: QuantumSystem, tau: float
) -> tuple[SuperOperator, SuperOperator, SuperOperator]:
    """Split ``tau*L`` into ``(C, D, D_plus)`` with ``C + D = tau*L``.

    ``C`` collects the coherent part minus the anticommutator piece
    ``D_plus`` (both Kronecker sums, hence exponentiating in factored
    form); ``D`` is the jump term.
    """
    scaled = _scaled(system, tau)
    d = system.dimension
    dd = d * d
    coherent = kron_sum((-1j * scaled.h_tilde).conj(), -1j * scaled.h_tilde)
    d_plus = np.zeros((dd, dd), dtype=np.complex128)
    jumps = np.zeros((dd, dd), dtype=np.complex128)
    for channel, eps in zip(system.channels, scaled.epsilons):
        L = channel.collapse
        LdL = eps * (L.conj().T @ L)
        d_plus += 0.5 * kron_sum(LdL.conj(), LdL)
        jumps += eps * np.kron(L.conj(), L)
    return (
        SuperOperator(coherent - d_plus, d),
        SuperOperator(jumps, d),
        SuperOperator(d_plus, d),
    )


def contracted_frame(system: QuantumSystem, tau: float) -> np.ndarray:
    """The closed-form ``expm(C)`` factor ``K0 = expm(-i H tau - sum eps L^dag L / 2)``."""
    scaled = _scaled(system, tau)
    damping = np.zeros_like(scaled.h_tilde)
    for channel, eps in zip(system.channels, scaled.epsilons):
        L = channel.collapse
        damping += 0.5 * eps * (L.conj().T @ L)
    return expm(-1j * scaled.h_tilde - damping)


def interaction_factor(dmu: np.ndarray) -> np.ndarray:
    """Elementwise ``(1 - exp(-i x)) / (i x)`` with a series below the threshold.

    The numerator is evaluated through ``expm1`` so the quotient stays
    accurate down to the series handover.
    """
    dmu = np.asarray(dmu, dtype=float)
    out = np.empty(dmu.shape, dtype=np.complex128)
    small = np.abs(dmu) < SMALL_PHASE_THRESHOLD
    x = dmu[~small]
    out[~small] = -np.expm1(-1j * x) / (1j * x)
    s = dmu[small]
    out[small] = 1.0 - 0.5j * s - s**2 / 6.0 + 1j * s**3 / 24.0
    return out


def interaction_matrix(spec: SpectralDecomposition) -> InteractionMatrix:
    """Dressing factors for all mode pairs of a diagonalized ``H*tau``."""
    lam = spec.eigenvalues
    mu = np.subtract.outer(lam, lam).reshape(-1)
    dmu = np.subtract.outer(mu, mu)
    return InteractionMatrix(interaction_factor(dmu), mu)


def first_order_map(system: QuantumSystem, tau: float) -> SuperOperator:
    """Closed-form map, exact in the drive and first order in the noise.

    Built as ``expm(C) @ (1 + W (D_coh * R) W^dag)`` where ``W = kron(V.conj(), V)``
    rotates to the Hamiltonian eigenbasis, ``D_coh`` is the jump generator in
    that basis and ``R`` the interaction factors; ``*`` is entry-wise. The
    ``expm(C)`` factor is evaluated in its exact factored form
    ``kron(K0.conj(), K0)``.
    """
    scaled = _scaled(system, tau)
    d = system.dimension
    spec = herm_eig(scaled.h_tilde)
    v = spec.eigenvectors
    w = np.kron(v.conj(), v)
    _, jumps, _ = build_generators(system, tau)
    d_coh = w.conj().T @ jumps.matrix @ w
    dressing = interaction_matrix(spec)
    k0 = contracted_frame(system, tau)
    correction = w @ (d_coh * dressing.entries) @ w.conj().T
    matrix = np.kron(k0.conj(), k0) @ (np.eye(d * d) + correction)
    return SuperOperator(matrix, d)
