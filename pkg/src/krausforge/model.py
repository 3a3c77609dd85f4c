"""Problem definition: Hamiltonian plus noise channels, with JSON ingestion.

Units follow the bundled example: the Hamiltonian is in rad/ns, decay rates
in 1/ns, and evolution times in ns. The numerical core only ever sees the
dimensionless products ``H*tau`` and ``gamma*tau`` produced by
:func:`rescale`.

The on-disk model format is JSON with complex entries as ``[re, im]`` pairs:

.. code-block:: json

    {
      "dimension": 3,
      "hamiltonian": [[[re, im], ...], ...],
      "channels": [{"matrix": [[[re, im], ...], ...], "rate": 0.031, "quadrature": 10}],
      "label": "optional string"
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .linalg import as_complex, hermiticity_defect

DEFAULT_QUADRATURE_COUNT = 10

#: Above this total dimensionless noise strength the linearization in the
#: dissipator is leaving its domain of validity.
LINEARIZATION_BUDGET = 0.5


class ModelError(ValueError):
    """Raised when a model document cannot be parsed into a valid system."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


@dataclass
class NoiseChannel:
    """One dissipation channel: a collapse operator acting at a fixed rate."""

    collapse: np.ndarray
    rate: float
    quadrature_count: int = DEFAULT_QUADRATURE_COUNT

    def __post_init__(self):
        self.collapse = as_complex(self.collapse)
        self.rate = float(self.rate)
        self.quadrature_count = int(self.quadrature_count)


@dataclass
class QuantumSystem:
    """A finite-dimensional system with Markovian noise channels."""

    dimension: int
    hamiltonian: np.ndarray
    channels: list[NoiseChannel] = field(default_factory=list)
    label: str | None = None

    def __post_init__(self):
        self.dimension = int(self.dimension)
        self.hamiltonian = as_complex(self.hamiltonian)


@dataclass
class ScaledGenerators:
    """Dimensionless generators for one evolution window of length ``tau``."""

    h_tilde: np.ndarray
    epsilons: np.ndarray
    tau: float

    @property
    def linearization_warning(self) -> bool:
        """True when the summed noise strengths exceed the linearization budget."""
        return float(np.sum(self.epsilons)) > LINEARIZATION_BUDGET


@dataclass(frozen=True)
class ValidationIssue:
    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.path}: {self.message}"


@dataclass
class ValidationReport:
    issues: list[ValidationIssue] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues

    def add(self, path: str, message: str) -> None:
        self.issues.append(ValidationIssue(path, message))

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "\n".join(str(issue) for issue in self.issues)


def validate(system: QuantumSystem, hermiticity_tol: float = 1e-10) -> ValidationReport:
    """Check a system for structural problems; never raises.

    The report lists every violation found: Hermiticity of the Hamiltonian,
    dimension consistency of all operators, rate signs, and quadrature
    counts.
    """
    report = ValidationReport()
    d = system.dimension
    if d < 2:
        report.add("dimension", f"must be at least 2, got {d}")
    if system.hamiltonian.shape != (d, d):
        report.add(
            "hamiltonian",
            f"expected shape ({d}, {d}), got {system.hamiltonian.shape}",
        )
    else:
        defect, (i, j) = hermiticity_defect(system.hamiltonian)
        if defect > hermiticity_tol:
            report.add(
                "hamiltonian",
                f"not Hermitian at ({i},{j}): deviation {defect:.3e} exceeds {hermiticity_tol:.1e}",
            )
    for k, channel in enumerate(system.channels):
        if channel.collapse.shape != (d, d):
            report.add(
                f"channels[{k}].matrix",
                f"expected shape ({d}, {d}), got {channel.collapse.shape}",
            )
        if channel.rate < 0:
            report.add(f"channels[{k}].rate", f"must be nonnegative, got {channel.rate}")
        if channel.quadrature_count < 1:
            report.add(
                f"channels[{k}].quadrature",
                f"must be a positive integer, got {channel.quadrature_count}",
            )
    return report


def require_valid(system: QuantumSystem) -> QuantumSystem:
    """Raise ``ModelError`` on the first validation issue; return the system."""
    report = validate(system)
    if not report.ok:
        issue = report.issues[0]
        raise ModelError(issue.path, issue.message)
    return system


def rescale(system: QuantumSystem, tau: float) -> ScaledGenerators:
    """Fold the evolution time into dimensionless generators.

    Returns ``H*tau`` and the per-channel noise strengths ``gamma*tau``.
    """
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau}")
    epsilons = np.array([ch.rate * tau for ch in system.channels], dtype=float)
    return ScaledGenerators(system.hamiltonian * tau, epsilons, float(tau))


# ---------------------------------------------------------------------------
# JSON ingestion
# ---------------------------------------------------------------------------


def _decode_matrix(node, d: int, path: str) -> np.ndarray:
    if not isinstance(node, list) or len(node) != d:
        raise ModelError(path, f"expected {d} rows")
    out = np.empty((d, d), dtype=np.complex128)
    for i, row in enumerate(node):
        if not isinstance(row, list) or len(row) != d:
            raise ModelError(f"{path}[{i}]", f"expected {d} entries")
        for j, entry in enumerate(row):
            if (
                not isinstance(entry, list)
                or len(entry) != 2
                or not all(isinstance(x, (int, float)) for x in entry)
            ):
                raise ModelError(f"{path}[{i}][{j}]", "expected an [re, im] pair")
            out[i, j] = complex(entry[0], entry[1])
    if not np.all(np.isfinite(out)):
        raise ModelError(path, "matrix contains non-finite entries")
    return out


def _encode_matrix(matrix: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in matrix]


def load_model(text: str) -> QuantumSystem:
    """Parse a JSON model document into a validated :class:`QuantumSystem`.

    Errors carry the JSON path of the offending element.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError("$", f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ModelError("$", "top-level value must be an object")

    if "dimension" not in doc:
        raise ModelError("dimension", "missing required key")
    d = doc["dimension"]
    if not isinstance(d, int) or d < 2:
        raise ModelError("dimension", f"must be an integer >= 2, got {d!r}")

    if "hamiltonian" not in doc:
        raise ModelError("hamiltonian", "missing required key")
    hamiltonian = _decode_matrix(doc["hamiltonian"], d, "hamiltonian")

    channels = []
    for k, node in enumerate(doc.get("channels", [])):
        if not isinstance(node, dict):
            raise ModelError(f"channels[{k}]", "expected an object")
        if "matrix" not in node:
            raise ModelError(f"channels[{k}].matrix", "missing required key")
        matrix = _decode_matrix(node["matrix"], d, f"channels[{k}].matrix")
        rate = node.get("rate", 0.0)
        if isinstance(rate, bool) or not isinstance(rate, (int, float)):
            raise ModelError(f"channels[{k}].rate", f"must be a number, got {rate!r}")
        quadrature = node.get("quadrature", DEFAULT_QUADRATURE_COUNT)
        if isinstance(quadrature, bool) or not isinstance(quadrature, int):
            raise ModelError(f"channels[{k}].quadrature", f"must be an integer, got {quadrature!r}")
        channels.append(NoiseChannel(matrix, float(rate), quadrature))

    label = doc.get("label")
    if label is not None and not isinstance(label, str):
        raise ModelError("label", f"must be a string, got {label!r}")

    system = QuantumSystem(d, hamiltonian, channels, label)
    report = validate(system)
    if not report.ok:
        issue = report.issues[0]
        raise ModelError(issue.path, issue.message)
    return system


def save_model(system: QuantumSystem) -> str:
    """Serialize a system to the JSON model format (round-trips exactly)."""
    doc: dict = {
        "dimension": system.dimension,
        "hamiltonian": _encode_matrix(system.hamiltonian),
        "channels": [
            {
                "matrix": _encode_matrix(ch.collapse),
                "rate": ch.rate,
                "quadrature": ch.quadrature_count,
            }
            for ch in system.channels
        ],
    }
    if system.label is not None:
        doc["label"] = system.label
    return json.dumps(doc, indent=2)


def load_model_file(path) -> QuantumSystem:
    """Read and parse a model JSON file."""
    with open(path, encoding="utf-8") as handle:
        return load_model(handle.read())


def bundled_model() -> QuantumSystem:
    """The packaged three-level leakage model used throughout the test suite."""
    text = resources.files("krausforge").joinpath("data/example_3ls.json").read_text("utf-8")
    return load_model(text)
