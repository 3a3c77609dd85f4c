"""Kraus-set synthesis by quadrature factorization, plus the Choi oracle route.

The first-order map's correction couples jump operators to the coherent
dynamics through the interaction factors ``R_ij``, which do not factor into
``kron(K.conj(), K)`` terms directly. Writing each factor as the integral
``R_ij = int_0^1 exp(-i dmu_ij t) dt`` and sampling the integral on a
quadrature grid restores the factorization: every sample contributes one
correction operator per channel, built from the collapse operator dressed
entry-wise by sampled phases in the Hamiltonian eigenbasis.

The synthesized set is checked two independent ways: reassembly into a
superoperator (compared against the closed-form first-order map) and
Choi-matrix diagonalization, which recovers canonical operators for any
map, including the non-trace-preserving linearized one (negative Choi
weights are kept as signed terms).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .linalg import SpectralDecomposition, herm_eig, unvec
from .liouville import SuperOperator, contracted_frame
from .model import QuantumSystem, rescale, require_valid

MIDPOINT = "midpoint"
TRAPEZOID_INTERIOR = "trapezoid-interior"
CUSTOM = "custom"

#: Default eigenvalue magnitude below which Choi components are dropped.
EXTRACTION_CUTOFF = 1e-10

_WEIGHT_SUM_TOL = 1e-14


@dataclass(frozen=True)
class QuadratureScheme:
    """Nodes and weights sampling the unit interval with total weight one."""

    nodes: np.ndarray
    weights: np.ndarray
    kind: str = CUSTOM

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        if nodes.shape != weights.shape or nodes.ndim != 1 or nodes.size == 0:
            raise ValueError("nodes and weights must be equal-length nonempty vectors")
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("nodes must be strictly increasing")
        if np.any(nodes < 0) or np.any(nodes > 1):
            raise ValueError("nodes must lie in [0, 1]")
        if self.kind == MIDPOINT and (nodes[0] <= 0 or nodes[-1] >= 1):
            raise ValueError("midpoint nodes must lie strictly inside (0, 1)")
        if np.any(weights <= 0):
            raise ValueError("weights must be positive")
        if abs(float(weights.sum()) - 1.0) > _WEIGHT_SUM_TOL:
            raise ValueError(f"weights must sum to 1, got {weights.sum()!r}")

    def __len__(self) -> int:
        return self.nodes.size


def midpoint_nodes(n: int) -> QuadratureScheme:
    """Uniform midpoint rule: ``n`` panels of width ``1/n`` sampled centrally."""
    if n < 1:
        raise ValueError(f"need at least one node, got {n}")
    k = np.arange(1, n + 1)
    return QuadratureScheme((2 * k - 1) / (2 * n), np.full(n, 1.0 / n), MIDPOINT)


def trapezoid_interior_nodes(n: int) -> QuadratureScheme:
    """Open trapezoid rule on ``n`` interior points ``k/(n+1)``.

    The boundary strips are covered by extending the end panels, giving the
    end nodes weight ``3/(2(n+1))``. Only the midpoint rule carries the
    second-order guarantee exercised in the tests; this rule is provided as
    an accepted alternative sampling design.
    """
    if n < 1:
        raise ValueError(f"need at least one node, got {n}")
    if n == 1:
        return QuadratureScheme([0.5], [1.0], TRAPEZOID_INTERIOR)
    h = 1.0 / (n + 1)
    weights = np.full(n, h)
    weights[0] = weights[-1] = 1.5 * h
    return QuadratureScheme(np.arange(1, n + 1) * h, weights, TRAPEZOID_INTERIOR)


def make_scheme(kind: str, n: int) -> QuadratureScheme:
    if kind == MIDPOINT:
        return midpoint_nodes(n)
    if kind == TRAPEZOID_INTERIOR:
        return trapezoid_interior_nodes(n)
    raise ValueError(f"unknown quadrature kind {kind!r}")


@dataclass
class KrausSet:
    """Synthesized operators: a frame factor and per-channel corrections.

    ``corrections[l][k]`` is the operator for channel ``l`` at quadrature
    node ``k`` of that channel's scheme. ``epsilons`` records the
    dimensionless noise strengths the set was built at.
    """

    k0: np.ndarray
    corrections: list[list[np.ndarray]]
    dim: int
    epsilons: np.ndarray
    schemes: list[QuadratureScheme] = field(default_factory=list)

    def operators(self):
        """All operators in deterministic (channel, node) order, frame first."""
        yield self.k0
        for channel_ops in self.corrections:
            yield from channel_ops


@dataclass
class ChoiMatrix:
    """State representation of a map; Hermitian whenever the map preserves Hermiticity."""

    matrix: np.ndarray
    dim: int


def dressed_phase_matrix(
    spec: SpectralDecomposition, node: float, weight: float
) -> np.ndarray:
    """Sampled phase dressing at one quadrature node, in the eigenbasis.

    Entry ``(m, n)`` is ``sqrt(weight) * exp(i (lam_m - lam_n) * node)``:
    conjugate-pairing two copies of this matrix across the bra and ket
    Kronecker slots reproduces the interaction-factor integrand
    ``exp(-i dmu t)`` at ``t = node``.
    """
    lam = spec.eigenvalues
    return np.sqrt(weight) * np.exp(1j * np.subtract.outer(lam, lam) * node)


def synthesize(
    system: QuantumSystem,
    tau: float,
    n: int | None = None,
    quadrature: str = MIDPOINT,
    schemes: list[QuadratureScheme] | None = None,
) -> KrausSet:
    """Build the Kraus set for one evolution window.

    Per-channel quadrature sizes default to each channel's configured
    count; ``n`` overrides all of them, and ``schemes`` (one per channel)
    overrides everything else.
    """
    require_valid(system)
    scaled = rescale(system, tau)
    if schemes is None:
        schemes = [
            make_scheme(quadrature, n if n is not None else ch.quadrature_count)
            for ch in system.channels
        ]
    elif len(schemes) != len(system.channels):
        raise ValueError(f"need {len(system.channels)} schemes, got {len(schemes)}")

    spec = herm_eig(scaled.h_tilde)
    v = spec.eigenvectors
    k0 = contracted_frame(system, tau)

    corrections: list[list[np.ndarray]] = []
    for channel, eps, scheme in zip(system.channels, scaled.epsilons, schemes):
        collapse_coh = v.conj().T @ channel.collapse @ v
        amplitude = np.sqrt(eps)
        channel_ops = []
        for node, weight in zip(scheme.nodes, scheme.weights):
            phases = dressed_phase_matrix(spec, node, weight)
            channel_ops.append(amplitude * (k0 @ (v @ (collapse_coh * phases) @ v.conj().T)))
        corrections.append(channel_ops)
    return KrausSet(k0, corrections, system.dimension, scaled.epsilons, schemes)


def assemble(ks: KrausSet) -> SuperOperator:
    """Reassemble the set into its natural-representation superoperator."""
    matrix = np.zeros((ks.dim * ks.dim, ks.dim * ks.dim), dtype=np.complex128)
    for op in ks.operators():
        matrix += np.kron(op.conj(), op)
    return SuperOperator(matrix, ks.dim)


def closure_deficit(ks: KrausSet) -> float:
    """Frobenius norm of ``sum_k K_k^dag K_k - 1`` over the whole set."""
    acc = -np.eye(ks.dim, dtype=np.complex128)
    for op in ks.operators():
        acc = acc + op.conj().T @ op
    return float(np.linalg.norm(acc))


def _reshuffle(matrix: np.ndarray, dim: int) -> np.ndarray:
    # Involution exchanging the natural and Choi representations under
    # column stacking: kron(K.conj(), K) <-> outer(vec(K), vec(K).conj()).
    return (
        matrix.reshape(dim, dim, dim, dim).swapaxes(0, 3).reshape(dim * dim, dim * dim)
    )


def choi_reshuffle(sup: SuperOperator) -> ChoiMatrix:
    """Choi matrix of a superoperator given in the natural representation."""
    return ChoiMatrix(_reshuffle(sup.matrix, sup.dim), sup.dim)


def superop_from_choi(choi: ChoiMatrix) -> SuperOperator:
    """Inverse of :func:`choi_reshuffle` (the reshuffle is an involution)."""
    return SuperOperator(_reshuffle(choi.matrix, choi.dim), choi.dim)


def extract_canonical_kraus(
    choi: ChoiMatrix, cutoff: float = EXTRACTION_CUTOFF
) -> list[tuple[float, np.ndarray]]:
    """Diagonalize a Choi matrix into weighted canonical operators.

    Returns ``(weight, operator)`` pairs with ``|weight| > cutoff``, largest
    magnitude first. For completely positive maps all weights are
    nonnegative and the channel is ``sum_m w_m M_m rho M_m^dag``; for
    non-CP maps (such as the linearized approximation) negative weights are
    retained as signed terms so the map reassembles exactly.
    """
    spec = herm_eig(choi.matrix)
    pairs = [
        (float(weight), unvec(spec.eigenvectors[:, m], choi.dim))
        for m, weight in enumerate(spec.eigenvalues)
        if abs(weight) > cutoff
    ]
    pairs.sort(key=lambda item: -abs(item[0]))
    return pairs


def assemble_weighted(
    pairs: list[tuple[float, np.ndarray]], dim: int
) -> SuperOperator:
    """Superoperator ``sum_m w_m kron(M_m.conj(), M_m)`` of weighted operators."""
    matrix = np.zeros((dim * dim, dim * dim), dtype=np.complex128)
    for weight, op in pairs:
        matrix += weight * np.kron(op.conj(), op)
    return SuperOperator(matrix, dim)


# ---------------------------------------------------------------------------
# JSON dump
# ---------------------------------------------------------------------------


def _encode_matrix(matrix: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in matrix]


def kraus_set_to_json(ks: KrausSet) -> str:
    """Serialize a Kraus set; matrices as nested ``[re, im]`` arrays.

    ``channel`` and ``node`` are zero-based indices into the synthesis
    order (``node`` indexes the channel scheme's node list).
    """
    doc = {
        "dim": ks.dim,
        "k0": _encode_matrix(ks.k0),
        "corrections": [
            {"channel": l, "node": k, "matrix": _encode_matrix(op)}
            for l, channel_ops in enumerate(ks.corrections)
            for k, op in enumerate(channel_ops)
        ],
        "epsilons": [float(e) for e in ks.epsilons],
        "quadrature": {
            "kinds": [scheme.kind for scheme in ks.schemes],
            "counts": [len(scheme) for scheme in ks.schemes],
        },
    }
    return json.dumps(doc, indent=2)
