"""Dense complex linear algebra kernels.

Matrices are plain ``numpy.ndarray`` of dtype complex128. Everything here is
a pure function; no routine mutates its arguments. The Hermitian eigensolver
is a cyclic complex Jacobi iteration, deterministic and dependency-free,
which is plenty for the dimensions this package works at (<= 256).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NoConvergence, NotHermitian

DEFAULT_ATOL = 1e-10
DEFAULT_RTOL = 1e-9

MAX_DIM = 256

PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)


def tolerance(scale: float, atol: float = DEFAULT_ATOL, rtol: float = DEFAULT_RTOL) -> float:
    """Absolute-plus-relative comparison threshold max(atol, rtol*scale)."""
    return max(atol, rtol * scale)


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def frob(a: np.ndarray) -> float:
    return float(np.linalg.norm(a))


def as_matrix(a) -> np.ndarray:
    """Coerce to a square complex matrix with finite entries."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.view(float))):
        raise ValueError("matrix entries must be finite")
    return m


def is_hermitian(a: np.ndarray, tol: float = DEFAULT_RTOL) -> bool:
    return frob(a - dagger(a)) <= tol * max(1.0, frob(a))


def _require_hermitian(a: np.ndarray, tol: float) -> np.ndarray:
    m = as_matrix(a)
    if frob(m - dagger(m)) > tol * max(1.0, frob(m)):
        raise NotHermitian(f"matrix is not Hermitian within tol={tol}")
    return m


@dataclass(frozen=True)
class HermitianEig:
    """Eigenvalues ascending; eigenvectors as the columns of a unitary matrix."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def hermitian_eig(a: np.ndarray, tol: float = DEFAULT_RTOL) -> HermitianEig:
    """Diagonalize a Hermitian matrix by cyclic complex Jacobi rotations.

    Sweeps over all off-diagonal pairs, annihilating each with a complex
    Givens rotation, until every off-diagonal magnitude is below
    1e-13 * ||A||_F or 100 sweeps have run.

    Parameters
    ----------
    a : square complex ndarray, Hermitian within ``tol`` (relative Frobenius).
    tol : tolerance for the Hermiticity precondition.

    Raises
    ------
    NotHermitian : precondition violated.
    NoConvergence : sweep cap reached before the off-diagonal drained.
    """
    m = _require_hermitian(a, tol)
    n = m.shape[0]
    if n > MAX_DIM:
        raise DimensionMismatch(f"dimension {n} exceeds supported maximum {MAX_DIM}")
    # Work on the exactly-Hermitian part so diagonals stay real.
    w = (m + dagger(m)) / 2.0
    v = np.eye(n, dtype=complex)
    scale = frob(w)
    if scale == 0.0 or n == 1:
        return HermitianEig(w.diagonal().real.copy(), v)
    thresh = 1e-13 * scale

    converged = False
    for _ in range(100):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = w[p, q]
                mag = abs(apq)
                if mag <= thresh:
                    continue
                rotated = True
                phase = apq / mag
                tau = (w[q, q].real - w[p, p].real) / (2.0 * mag)
                if tau == 0.0:
                    t = 1.0
                else:
                    t = np.sign(tau) / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                rot = np.array(
                    [[c, s * phase], [-s * np.conjugate(phase), c]], dtype=complex
                )
                w[:, [p, q]] = w[:, [p, q]] @ rot
                w[[p, q], :] = dagger(rot) @ w[[p, q], :]
                v[:, [p, q]] = v[:, [p, q]] @ rot
        if not rotated:
            converged = True
            break
    if not converged:
        raise NoConvergence("Jacobi sweep cap (100) reached")

    eigvals = w.diagonal().real.copy()
    order = np.argsort(eigvals, kind="stable")
    return HermitianEig(eigvals[order], v[:, order])


def unitary_from_generator(a: np.ndarray, angle: float, tol: float = DEFAULT_RTOL) -> np.ndarray:
    """exp(1j * angle * A) for Hermitian A, via the spectral decomposition."""
    eig = hermitian_eig(a, tol)
    phases = np.exp(1j * angle * eig.eigenvalues)
    return (eig.eigenvectors * phases) @ dagger(eig.eigenvectors)


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; composite row index of rows (i, j) is i*dim(b) + j."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_trace(m: np.ndarray, dims: tuple[int, int], keep: str) -> np.ndarray:
    """Trace out one tensor factor of a matrix on a (d1*d2)-dimensional space.

    ``keep`` selects the surviving factor, "first" or "second"; the index
    convention matches :func:`kron`.
    """
    d1, d2 = dims
    mat = as_matrix(m)
    if mat.shape[0] != d1 * d2:
        raise DimensionMismatch(
            f"matrix dim {mat.shape[0]} does not factor as {d1}*{d2}"
        )
    r = mat.reshape(d1, d2, d1, d2)
    if keep == "first":
        return np.einsum("abcb->ac", r)
    if keep == "second":
        return np.einsum("abad->bd", r)
    raise ValueError(f"keep must be 'first' or 'second', got {keep!r}")


def rank_tol(a: np.ndarray, tol: float | None = None) -> int:
    """Number of eigenvalues of a Hermitian matrix with magnitude above tol."""
    m = _require_hermitian(a, DEFAULT_RTOL)
    if tol is None:
        tol = 1e-9 * max(1.0, frob(m))
    eig = hermitian_eig(m)
    return int(np.count_nonzero(np.abs(eig.eigenvalues) > tol))


def operator_norm(a: np.ndarray) -> float:
    """Largest eigenvalue magnitude of a Hermitian matrix."""
    eig = hermitian_eig(a)
    return float(np.max(np.abs(eig.eigenvalues))) if eig.eigenvalues.size else 0.0


def min_eigenvalue(a: np.ndarray) -> float:
    return float(hermitian_eig(a).eigenvalues[0])


def random_density_matrix(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Wishart-distributed full-rank density matrix."""
    x = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = x @ dagger(x)
    return rho / np.trace(rho).real


# ---------------------------------------------------------------------------
# JSON wire format: {"dim": d, "entries": [[re, im], ...]} row-major.

def matrix_to_json(a: np.ndarray) -> dict:
    m = as_matrix(a)
    return {
        "dim": int(m.shape[0]),
        "entries": [[float(z.real), float(z.imag)] for z in m.ravel()],
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    dim = int(obj["dim"])
    entries = obj["entries"]
    if len(entries) != dim * dim:
        raise DimensionMismatch(
            f"expected {dim * dim} entries for dim {dim}, got {len(entries)}"
        )
    flat = np.array([complex(re, im) for re, im in entries], dtype=complex)
    return as_matrix(flat.reshape(dim, dim))


def matrix_rect_to_json(a: np.ndarray) -> dict:
    m = np.asarray(a, dtype=complex)
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "entries": [[float(z.real), float(z.imag)] for z in m.ravel()],
    }


def matrix_rect_from_json(obj: dict) -> np.ndarray:
    rows, cols = int(obj["rows"]), int(obj["cols"])
    entries = obj["entries"]
    if len(entries) != rows * cols:
        raise DimensionMismatch(
            f"expected {rows * cols} entries for {rows}x{cols}, got {len(entries)}"
        )
    flat = np.array([complex(re, im) for re, im in entries], dtype=complex)
    return flat.reshape(rows, cols)


def vector_to_json(v: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=complex)]


def vector_from_json(obj: list) -> np.ndarray:
    return np.array([complex(re, im) for re, im in obj], dtype=complex)
