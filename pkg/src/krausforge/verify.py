"""Invariant suite run by the ``verify`` subcommand.

Each check probes one structural identity of the construction on a given
model: trace preservation of the generator, the generator split identity,
the factorized exponential, complete positivity of the exact map,
Hermiticity preservation and closure of the synthesized set, and agreement
between the closed-form route and the Choi-diagonalization oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kraus as _kraus
from .linalg import expm, herm_eig, l2_distance, vec
from .liouville import (
    build_generators,
    build_liouvillian,
    contracted_frame,
    exact_map,
    first_order_map,
)
from .model import QuantumSystem, rescale, validate

#: Numerical floor added to scale-proportional bounds so noise-free models
#: (all rates zero) are judged against expm accuracy rather than zero.
NOISE_FLOOR = 1e-12


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def run_invariant_suite(
    system: QuantumSystem, tau: float, seed: int = 1234
) -> list[CheckResult]:
    """Run every model-level invariant; returns one result per check."""
    results: list[CheckResult] = []

    report = validate(system)
    results.append(
        CheckResult("model validation", report.ok, "ok" if report.ok else str(report))
    )
    if not report.ok:
        return results

    rng = np.random.default_rng(seed)
    d = system.dimension
    scaled = rescale(system, tau)
    eps_total = float(np.sum(scaled.epsilons))

    gen = build_liouvillian(system, tau)
    tvec = vec(np.eye(d)).conj()
    tp_defect = float(np.linalg.norm(tvec @ gen.matrix))
    results.append(
        CheckResult(
            "generator trace-preserving",
            tp_defect <= 1e-12,
            f"|vec(1)^dag tauL| = {tp_defect:.2e} (tol 1e-12)",
        )
    )

    c_part, d_part, _ = build_generators(system, tau)
    split_defect = l2_distance(c_part.matrix + d_part.matrix, gen.matrix)
    results.append(
        CheckResult(
            "generator split C + D = tauL",
            split_defect <= 1e-13,
            f"defect {split_defect:.2e} (tol 1e-13)",
        )
    )

    k0 = contracted_frame(system, tau)
    factor_defect = l2_distance(expm(c_part.matrix), np.kron(k0.conj(), k0))
    results.append(
        CheckResult(
            "expm(C) factorizes through K0",
            factor_defect <= 1e-10,
            f"defect {factor_defect:.2e} (tol 1e-10)",
        )
    )

    exact = exact_map(system, tau)
    exact_tp = exact.trace_defect()
    choi = _kraus.choi_reshuffle(exact)
    min_eig = float(herm_eig(choi.matrix).eigenvalues[0])
    results.append(
        CheckResult(
            "exact map trace-preserving",
            exact_tp <= 1e-10,
            f"defect {exact_tp:.2e} (tol 1e-10)",
        )
    )
    results.append(
        CheckResult(
            "exact map completely positive",
            min_eig >= -1e-10,
            f"Choi min eigenvalue {min_eig:.2e} (tol -1e-10)",
        )
    )

    first = first_order_map(system, tau)
    worst_herm = 0.0
    for _ in range(20):
        a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        rho = (a + a.conj().T) / 2
        evolved = first.apply(rho)
        worst_herm = max(worst_herm, float(np.abs(evolved - evolved.conj().T).max()))
    results.append(
        CheckResult(
            "first-order map preserves Hermiticity",
            worst_herm <= 1e-10,
            f"worst defect {worst_herm:.2e} over 20 random states (tol 1e-10)",
        )
    )

    ks = _kraus.synthesize(system, tau)
    spectral = float(np.linalg.norm(ks.k0, 2))
    results.append(
        CheckResult(
            "frame operator contracts",
            spectral <= 1 + 1e-10,
            f"||K0||_2 = {spectral:.12f} (tol 1+1e-10)",
        )
    )

    norm_ok = True
    norm_detail = "no correction operators"
    for channel, eps, scheme, ops in zip(
        system.channels, scaled.epsilons, ks.schemes, ks.corrections
    ):
        bound_scale = np.linalg.norm(channel.collapse)
        for weight, op in zip(scheme.weights, ops):
            bound = 2.0 * np.sqrt(eps * weight) * bound_scale + NOISE_FLOOR
            value = float(np.linalg.norm(op))
            if value > bound:
                norm_ok = False
            norm_detail = f"last ||K||_F = {value:.2e} vs bound {bound:.2e}"
    results.append(CheckResult("correction norms bounded", norm_ok, norm_detail))

    n_min = min((len(s) for s in ks.schemes), default=1)
    closure_bound = 5.0 * (eps_total / n_min**2 + eps_total**2) + NOISE_FLOOR
    deficit = _kraus.closure_deficit(ks)
    results.append(
        CheckResult(
            "closure deficit within scaling bound",
            deficit <= closure_bound,
            f"deficit {deficit:.2e} vs bound {closure_bound:.2e}",
        )
    )

    assembled = _kraus.assemble(ks)
    quad_gap = l2_distance(assembled.matrix, first.matrix)
    quad_bound = 5.0 * eps_total / n_min**2 + 5.0 * eps_total**2 + NOISE_FLOOR
    results.append(
        CheckResult(
            "assembly tracks closed-form map",
            quad_gap <= quad_bound,
            f"distance {quad_gap:.2e} vs bound {quad_bound:.2e}",
        )
    )

    pairs = _kraus.extract_canonical_kraus(_kraus.choi_reshuffle(assembled), cutoff=1e-12)
    round_trip = l2_distance(_kraus.assemble_weighted(pairs, d).matrix, assembled.matrix)
    results.append(
        CheckResult(
            "Choi extraction round trip",
            round_trip <= 1e-10,
            f"defect {round_trip:.2e} (tol 1e-10)",
        )
    )

    return results
