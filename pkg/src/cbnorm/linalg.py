"""Dense complex linear algebra kernel underlying the norm computations.

Matrices are plain ``numpy.ndarray`` values, promoted to ``complex128`` on
entry and treated as immutable.  Every operation here is pure and
deterministic (LAPACK Hermitian eigensolvers, no randomization), so that
norm certificates are reproducible bit-for-bit on one platform.

The JSON wire format for matrices is::

    {"rows": n, "cols": m, "re": [[...]], "im": [[...]]}

where "im" may be omitted for real matrices.
"""

from __future__ import annotations

from typing import Any

import numpy as np

__all__ = [
    "as_matrix",
    "hermitian_asymmetry",
    "hermitian_eig",
    "operator_norm",
    "trace_norm",
    "singular_values",
    "psd_factor",
    "matrix_to_json",
    "matrix_from_json",
]


def as_matrix(data: Any, name: str = "matrix") -> np.ndarray:
    """Promote ``data`` to a validated 2-D complex128 array."""
    a = np.asarray(data, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {a.shape}")
    if not (np.all(np.isfinite(a.real)) and np.all(np.isfinite(a.imag))):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def hermitian_asymmetry(a: np.ndarray) -> float:
    """Relative deviation of a square matrix from being Hermitian."""
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    scale = max(1.0, float(np.max(np.abs(a))) if a.size else 0.0)
    return float(np.max(np.abs(a - a.conj().T))) / scale if a.size else 0.0


def hermitian_eig(a: np.ndarray, tol: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(w, v)`` with eigenvalues ``w`` real ascending and ``v``
    unitary, so that ``a = v @ diag(w) @ v.conj().T``.  Rejects inputs whose
    asymmetry exceeds ``tol`` (relative to the largest entry).
    """
    a = as_matrix(a)
    asym = hermitian_asymmetry(a)
    if asym > tol:
        raise ValueError(
            f"matrix is not Hermitian: max asymmetry {asym:.3e} exceeds tolerance {tol:.3e}"
        )
    w, v = np.linalg.eigh(0.5 * (a + a.conj().T))
    return w, v


def singular_values(a: np.ndarray) -> np.ndarray:
    """Singular values, descending, via the Hermitian eigenproblem of a*a.

    Eigenvalues below the numerical-rank threshold are zeroed before the
    square root, which would otherwise amplify O(eps) Gram noise to
    O(sqrt(eps)) spurious singular values.
    """
    a = as_matrix(a)
    if a.size == 0:
        return np.zeros(0)
    gram = a.conj().T @ a if a.shape[1] <= a.shape[0] else a @ a.conj().T
    w = np.linalg.eigvalsh(0.5 * (gram + gram.conj().T))
    floor = max(a.shape) * np.finfo(float).eps * (w[-1] if w.size else 0.0)
    w = np.where(w > max(floor, 0.0), w, 0.0)
    return np.sqrt(w[::-1])


def operator_norm(a: np.ndarray) -> float:
    """Largest singular value; 0 for the zero (or empty) matrix."""
    s = singular_values(a)
    return float(s[0]) if s.size else 0.0


def trace_norm(a: np.ndarray) -> float:
    """Sum of singular values."""
    return float(np.sum(singular_values(a)))


def psd_factor(a: np.ndarray, tol: float = 1e-10, rank_tol: float = 0.0) -> np.ndarray:
    """Factor a PSD Hermitian matrix as ``a ~= L @ L.conj().T``.

    Eigenvalues in ``[-tol, 0)`` are clipped to zero; an eigenvalue below
    ``-tol`` is an error.  Columns whose eigenvalue is ``<= rank_tol`` are
    dropped, so the number of columns of ``L`` is the numerical rank at that
    threshold.
    """
    a = as_matrix(a)
    w, v = hermitian_eig(a, tol=max(1e-12, tol))
    if w.size and w[0] < -tol:
        raise ValueError(f"matrix is not PSD: smallest eigenvalue {w[0]:.6e} < -{tol:.1e}")
    w = np.clip(w, 0.0, None)
    keep = w > max(rank_tol, 0.0)
    return v[:, keep] * np.sqrt(w[keep])


def matrix_to_json(a: np.ndarray) -> dict:
    """Encode a matrix in the JSON wire format (``im`` omitted when zero)."""
    a = as_matrix(a)
    doc: dict = {
        "rows": int(a.shape[0]),
        "cols": int(a.shape[1]),
        "re": [[float(x) for x in row] for row in a.real],
    }
    if np.any(a.imag != 0.0):
        doc["im"] = [[float(x) for x in row] for row in a.imag]
    return doc


def matrix_from_json(doc: Any) -> np.ndarray:
    """Decode the JSON wire format; accepts a bare nested list as shorthand."""
    if isinstance(doc, list):
        return as_matrix(doc)
    if not isinstance(doc, dict):
        raise ValueError(f"cannot decode matrix from {type(doc).__name__}")
    try:
        rows, cols = int(doc["rows"]), int(doc["cols"])
        re = np.asarray(doc["re"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed matrix document: {exc}") from exc
    im = np.asarray(doc.get("im", np.zeros_like(re)), dtype=float)
    if re.shape != (rows, cols) or im.shape != (rows, cols):
        raise ValueError(
            f"matrix document shape mismatch: declared {rows}x{cols}, "
            f"re {re.shape}, im {im.shape}"
        )
    return as_matrix(re + 1j * im)
