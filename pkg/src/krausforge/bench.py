"""Deterministic error sweeps over time and quadrature size, with fits.

Every sweep row records the Frobenius distance between one approximate map
and the exact superoperator exponential at the same time. Output ordering
is fixed (time, then method label, then quadrature size) so repeated runs
serialize byte-identically. Sweep points are independent; set the
``KRAUSFORGE_THREADS`` environment variable to evaluate times in parallel
(results are joined in grid order either way).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kraus as _kraus
from .linalg import l2_distance
from .liouville import exact_map, first_order_map, infinitesimal_map
from .model import QuantumSystem

METHOD_EXACT = "exact"
METHOD_DPHI = "dphi"
METHOD_FIRST_ORDER = "first_order"
METHOD_KRAUS = "kraus"

CSV_HEADER = "tau_ns,method,n,error"


class RadiusNotReached(ValueError):
    """The error never crosses the requested threshold inside the grid."""


@dataclass(frozen=True)
class SweepRow:
    tau: float
    method: str
    n: int | None
    error: float


def parse_method(label: str) -> tuple[str, int | None]:
    """Parse a sweep method label; ``kraus:N`` selects N quadrature nodes."""
    name, _, arg = label.partition(":")
    name = name.strip()
    if name == METHOD_KRAUS:
        if not arg:
            raise ValueError("kraus method needs a node count, e.g. 'kraus:10'")
        n = int(arg)
        if n < 1:
            raise ValueError(f"kraus node count must be positive, got {n}")
        return name, n
    if arg:
        raise ValueError(f"method {name!r} takes no argument")
    if name not in (METHOD_EXACT, METHOD_DPHI, METHOD_FIRST_ORDER):
        raise ValueError(f"unknown method {label!r}")
    return name, None


def _evaluate_time_point(
    system: QuantumSystem, tau: float, methods: list[tuple[str, int | None]]
) -> list[SweepRow]:
    exact = exact_map(system, tau).matrix
    rows = []
    for name, n in methods:
        if name == METHOD_EXACT:
            error = 0.0
        elif name == METHOD_DPHI:
            error = l2_distance(infinitesimal_map(system, tau).matrix, exact)
        elif name == METHOD_FIRST_ORDER:
            error = l2_distance(first_order_map(system, tau).matrix, exact)
        else:
            assembled = _kraus.assemble(_kraus.synthesize(system, tau, n=n))
            error = l2_distance(assembled.matrix, exact)
        rows.append(SweepRow(float(tau), name, n, error))
    return rows


def _thread_count() -> int:
    raw = os.environ.get("KRAUSFORGE_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _sort_rows(rows: list[SweepRow]) -> list[SweepRow]:
    return sorted(rows, key=lambda r: (r.tau, r.method, -1 if r.n is None else r.n))


def sweep_time(
    system: QuantumSystem, tau_grid, methods: list[str]
) -> list[SweepRow]:
    """Error of each method against the exact map across a time grid."""
    taus = np.asarray(tau_grid, dtype=float)
    if taus.size == 0 or np.any(taus <= 0) or np.any(np.diff(taus) <= 0):
        raise ValueError("tau grid must be strictly positive and ascending")
    parsed = [parse_method(label) for label in methods]
    workers = _thread_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(lambda t: _evaluate_time_point(system, t, parsed), taus))
    else:
        chunks = [_evaluate_time_point(system, tau, parsed) for tau in taus]
    return _sort_rows([row for chunk in chunks for row in chunk])


def sweep_quadrature(
    system: QuantumSystem, tau_list, n_grid
) -> list[SweepRow]:
    """Error of the quadrature-synthesized map for each (time, node count)."""
    ns = list(n_grid)
    if not ns or any(n < 1 for n in ns) or any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError("n grid must be ascending positive integers")
    rows = []
    for tau in tau_list:
        exact = exact_map(system, tau).matrix
        for n in ns:
            assembled = _kraus.assemble(_kraus.synthesize(system, tau, n=n))
            rows.append(
                SweepRow(float(tau), METHOD_KRAUS, int(n), l2_distance(assembled.matrix, exact))
            )
    return _sort_rows(rows)


def fit_loglog_slope(xs, ys) -> tuple[float, float, float]:
    """Least-squares line through ``(log x, log y)``: slope, intercept, r^2."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.size < 3:
        raise ValueError(f"need at least 3 points, got {xs.size}")
    if np.any(xs <= 0) or np.any(ys <= 0):
        raise ValueError("log-log fit requires strictly positive values")
    lx = np.log(xs)
    ly = np.log(ys)
    slope, intercept = np.polyfit(lx, ly, 1)
    residuals = ly - (slope * lx + intercept)
    total = np.sum((ly - ly.mean()) ** 2)
    r2 = 1.0 if total == 0 else 1.0 - float(np.sum(residuals**2)) / float(total)
    return float(slope), float(intercept), r2


def estimate_radius(rows: list[SweepRow], eps0: float) -> float:
    """First time at which a method's error reaches ``eps0``.

    Expects rows from a single method, ascending in time, in the regime
    where the error grows through the threshold; the crossing is
    interpolated log-linearly between grid points. Raises
    :class:`RadiusNotReached` when the error stays below ``eps0``.
    """
    if eps0 <= 0:
        raise ValueError(f"threshold must be positive, got {eps0}")
    if not rows:
        raise ValueError("no sweep rows given")
    methods = {row.method for row in rows}
    if len(methods) > 1:
        raise ValueError(f"rows mix methods {sorted(methods)}")
    taus = np.array([row.tau for row in rows])
    errors = np.array([row.error for row in rows])
    above = np.nonzero(errors >= eps0)[0]
    if above.size == 0:
        raise RadiusNotReached(f"error stays below {eps0} on the grid")
    idx = int(above[0])
    if idx == 0:
        return float(taus[0])
    t0, t1 = taus[idx - 1], taus[idx]
    e0, e1 = errors[idx - 1], errors[idx]
    if e0 <= 0:
        return float(t1)
    log_tau = np.log(t0) + (np.log(eps0) - np.log(e0)) * (np.log(t1) - np.log(t0)) / (
        np.log(e1) - np.log(e0)
    )
    return float(np.exp(log_tau))


def rows_to_csv(rows: list[SweepRow]) -> str:
    """Serialize sweep rows; floats in shortest round-trip decimal form."""
    lines = [CSV_HEADER]
    for row in rows:
        n_field = "" if row.n is None else str(row.n)
        lines.append(f"{row.tau!r},{row.method},{n_field},{row.error!r}")
    return "\n".join(lines) + "\n"


def default_tau_grid(tau_min: float = 0.01, tau_max: float = 4.0, points: int = 60) -> np.ndarray:
    """Log-spaced time grid covering both figure ranges and the crossing."""
    if tau_min <= 0 or tau_max <= tau_min or points < 1:
        raise ValueError("need 0 < tau_min < tau_max and at least one point")
    if points == 1:
        return np.array([tau_min])
    return np.geomspace(tau_min, tau_max, points)
