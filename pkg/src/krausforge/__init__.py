"""Closed-form Kraus operators for Lindblad dynamics.

The package turns a Hamiltonian plus weak Markovian noise channels into an
explicit operator-sum representation of the evolution over a finite time
window: a single frame operator capturing the damped coherent dynamics and
one correction operator per noise channel and quadrature node, sampling
the time-averaged interaction between drive and dissipation. Accuracy is
second order in the per-channel quadrature sizes and second order in the
dimensionless noise strengths.

Typical use::

    from krausforge import KrausChannel, bundled_model

    channel = KrausChannel(tau=1.0, n_quadrature=10).fit(bundled_model())
    rho_out = channel.transform(rho_in)

or, at the functional layer::

    from krausforge import synthesize, assemble, closure_deficit

    ks = synthesize(system, tau=1.0)
    sup = assemble(ks)
"""

from .bench import (
    RadiusNotReached,
    SweepRow,
    estimate_radius,
    fit_loglog_slope,
    rows_to_csv,
    sweep_quadrature,
    sweep_time,
)
from .estimator import KrausChannel, as_quantum_system
from .kraus import (
    ChoiMatrix,
    KrausSet,
    QuadratureScheme,
    assemble,
    assemble_weighted,
    choi_reshuffle,
    closure_deficit,
    dressed_phase_matrix,
    extract_canonical_kraus,
    kraus_set_to_json,
    midpoint_nodes,
    superop_from_choi,
    synthesize,
    trapezoid_interior_nodes,
)
from .linalg import (
    SpectralDecomposition,
    expm,
    herm_eig,
    kron,
    kron_sum,
    l2_distance,
    unvec,
    vec,
)
from .liouville import (
    InteractionMatrix,
    SuperOperator,
    build_generators,
    build_liouvillian,
    exact_map,
    first_order_map,
    infinitesimal_map,
    interaction_factor,
    interaction_matrix,
)
from .model import (
    ModelError,
    NoiseChannel,
    QuantumSystem,
    ScaledGenerators,
    ValidationReport,
    bundled_model,
    load_model,
    load_model_file,
    rescale,
    save_model,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "ChoiMatrix",
    "InteractionMatrix",
    "KrausChannel",
    "KrausSet",
    "ModelError",
    "NoiseChannel",
    "QuadratureScheme",
    "QuantumSystem",
    "RadiusNotReached",
    "ScaledGenerators",
    "SpectralDecomposition",
    "SuperOperator",
    "SweepRow",
    "ValidationReport",
    "as_quantum_system",
    "assemble",
    "assemble_weighted",
    "bundled_model",
    "build_generators",
    "build_liouvillian",
    "choi_reshuffle",
    "closure_deficit",
    "dressed_phase_matrix",
    "estimate_radius",
    "exact_map",
    "expm",
    "extract_canonical_kraus",
    "first_order_map",
    "fit_loglog_slope",
    "herm_eig",
    "infinitesimal_map",
    "interaction_factor",
    "interaction_matrix",
    "kraus_set_to_json",
    "kron",
    "kron_sum",
    "l2_distance",
    "load_model",
    "load_model_file",
    "midpoint_nodes",
    "rescale",
    "rows_to_csv",
    "save_model",
    "superop_from_choi",
    "sweep_quadrature",
    "sweep_time",
    "synthesize",
    "trapezoid_interior_nodes",
    "unvec",
    "validate",
    "vec",
]
