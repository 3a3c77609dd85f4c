"""Dense complex linear-algebra kernels shared by the whole package.

Everything here operates on plain ``numpy`` arrays of ``complex128``. Two
conventions are fixed once and inherited by every other module:

* Vectorization is COLUMN-stacking: ``vec(M)[j*d + i] = M[i, j]``. This is
  the convention for which ``vec(A @ rho @ B) == kron(B.T, A) @ vec(rho)``
  holds, so a map ``rho -> K rho K^dag`` becomes ``kron(K.conj(), K)``.
* Hermitian eigendecompositions are canonicalized: eigenvalues ascending,
  and each eigenvector is rephased so that its largest-magnitude entry is
  real and positive (ties broken by lowest row index). This makes
  downstream outputs reproducible run to run.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg


def as_complex(matrix) -> np.ndarray:
    """Coerce input to a 2-D complex128 array without copying when possible."""
    out = np.asarray(matrix, dtype=np.complex128)
    if out.ndim != 2:
        raise ValueError(f"expected a matrix, got array of shape {out.shape}")
    if not np.all(np.isfinite(out)):
        raise ValueError("matrix contains non-finite entries")
    return out


def require_square(matrix: np.ndarray, name: str = "matrix") -> np.ndarray:
    matrix = as_complex(matrix)
    if matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"{name} must be square, got shape {matrix.shape}")
    return matrix


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenpairs of a Hermitian matrix in canonical form.

    ``eigenvalues`` are real and ascending; column ``m`` of ``eigenvectors``
    is the unit eigenvector for ``eigenvalues[m]`` with its largest-magnitude
    entry made real positive.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        """Return ``V diag(lambda) V^dag``."""
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def kron(a, b) -> np.ndarray:
    """Kronecker product; block ``(i, j)`` of the result is ``a[i, j] * b``."""
    return np.kron(as_complex(a), as_complex(b))


def kron_sum(a, b) -> np.ndarray:
    """Kronecker sum ``a (x) 1 + 1 (x) b`` of two square matrices."""
    a = require_square(a, "first operand")
    b = require_square(b, "second operand")
    return np.kron(a, np.eye(b.shape[0])) + np.kron(np.eye(a.shape[0]), b)


def vec(matrix) -> np.ndarray:
    """Column-stack a square matrix into a length ``d**2`` vector."""
    return require_square(matrix).reshape(-1, order="F")


def unvec(vector, dim: int | None = None) -> np.ndarray:
    """Inverse of :func:`vec`; ``dim`` defaults to ``sqrt(len(vector))``."""
    vector = np.asarray(vector, dtype=np.complex128).reshape(-1)
    if dim is None:
        dim = int(round(np.sqrt(vector.size)))
    if dim * dim != vector.size:
        raise ValueError(f"vector of length {vector.size} is not a stacked {dim}x{dim} matrix")
    return vector.reshape((dim, dim), order="F")


def hermiticity_defect(matrix: np.ndarray) -> tuple[float, tuple[int, int]]:
    """Max-entry deviation from Hermiticity and the worst offending index."""
    matrix = require_square(matrix)
    gap = np.abs(matrix - matrix.conj().T)
    idx = np.unravel_index(np.argmax(gap), gap.shape)
    return float(gap[idx]), (int(idx[0]), int(idx[1]))


def herm_eig(matrix, tol: float = 1e-10) -> SpectralDecomposition:
    """Canonical eigendecomposition of a Hermitian matrix.

    Raises ``ValueError`` naming the worst entry if the input deviates from
    Hermiticity by more than ``tol`` in max-entry norm.
    """
    matrix = require_square(matrix)
    defect, (i, j) = hermiticity_defect(matrix)
    if defect > tol:
        raise ValueError(
            f"matrix is not Hermitian: |M[{i},{j}] - conj(M[{j},{i}])| = {defect:.3e} > {tol:.1e}"
        )
    eigenvalues, eigenvectors = np.linalg.eigh(matrix)
    return SpectralDecomposition(eigenvalues, _fix_phases(eigenvectors))


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    """Rephase each column so its largest-magnitude entry is real positive."""
    out = np.array(vectors, copy=True)
    for k in range(out.shape[1]):
        pivot = out[np.argmax(np.abs(out[:, k])), k]
        scale = abs(pivot)
        if scale > 0.0:
            out[:, k] *= scale / pivot
    return out


def expm(matrix) -> np.ndarray:
    """Matrix exponential (Pade approximation with scaling and squaring)."""
    return scipy.linalg.expm(require_square(matrix))


def l2_distance(a, b) -> float:
    """Frobenius distance ``||a - b||_F`` between two equal-shaped matrices."""
    a = as_complex(a)
    b = as_complex(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))
