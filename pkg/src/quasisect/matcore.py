"""Dense complex-matrix kernels.

Every operator in the package is modelled by a square ``numpy`` array of dtype
``complex128``.  The kernels here are the only places that touch LAPACK
directly; everything else composes them.

Most functions accept a single matrix.  :func:`herm_eig` and :func:`op_norm`
also accept stacks of shape ``(..., d, d)`` so that the rotation sweep of the
numerical-range boundary can run as one batched call.
"""

from __future__ import annotations

import math
import os
import tempfile
import warnings
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .errors import NoConvergence, NotHermitian, Overflow, Singular

__all__ = [
    "HermEig",
    "as_matrix",
    "hermitian_part",
    "herm_eig",
    "jacobi_eigh",
    "solve",
    "op_norm",
    "matrix_exp",
    "resolvent",
    "read_matrix",
    "write_matrix",
    "format_matrix",
    "parse_matrix",
]

HERMITIAN_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
JACOBI_OFFDIAG_TOL = 1e-13
PIVOT_TOL = 1e-14
EXPM_SCALED_NORM = 0.5

# [13/13] diagonal Pade coefficients for exp.
_PADE13 = (
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0, 129060195264000.0, 10559470521600.0,
    670442572800.0, 33522128640.0, 1323241920.0, 40840800.0,
    960960.0, 16380.0, 182.0, 1.0,
)


class HermEig(NamedTuple):
    """Eigenvalues (ascending) and orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(A, *, stacked: bool = False) -> np.ndarray:
    """Validate ``A`` and return it as a complex ndarray.

    Raises ``ValueError`` for non-square, empty, or non-finite input.
    """
    M = np.asarray(A, dtype=complex)
    if M.ndim == 0:
        M = M.reshape(1, 1)
    if M.ndim < 2 or (M.ndim > 2 and not stacked):
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if M.shape[-1] != M.shape[-2] or M.shape[-1] < 1:
        raise ValueError(f"matrix must be square with dim >= 1, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    return M


def _adjoint(M: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(M, -1, -2))


def hermitian_part(A) -> np.ndarray:
    """Return ``(A + A*) / 2``."""
    M = as_matrix(A, stacked=True)
    H = 0.5 * (M + _adjoint(M))
    # kill the rounding residue on the diagonal so H is exactly Hermitian
    d = np.arange(M.shape[-1])
    H[..., d, d] = H[..., d, d].real
    return H


def herm_eig(H, method: str = "lapack") -> HermEig:
    """Eigendecomposition of a Hermitian matrix (or stack of them).

    Parameters
    ----------
    H : array_like, shape (..., d, d)
        Hermitian to within ``1e-12 * (1 + ||H||_2)``.
    method : {"lapack", "jacobi"}
        ``"lapack"`` dispatches to ``numpy.linalg.eigh`` and supports stacks;
        ``"jacobi"`` runs the cyclic Jacobi sweep of :func:`jacobi_eigh` on a
        single matrix.

    Returns
    -------
    HermEig
        Ascending eigenvalues and unitary eigenvector columns.

    Raises
    ------
    NotHermitian
        If the skew-Hermitian part is too large.
    NoConvergence
        If the Jacobi sweep cap is exhausted.
    """
    M = as_matrix(H, stacked=True)
    Hh = hermitian_part(M)
    S = M - Hh
    if method == "jacobi":
        if M.ndim != 2:
            raise ValueError("the Jacobi eigensolver handles one matrix at a time")
        w, V = jacobi_eigh(Hh)
    elif method == "lapack":
        w, V = np.linalg.eigh(Hh)
    else:
        raise ValueError(f"unknown eigensolver {method!r}")

    scale = 1.0 + np.max(np.abs(w), axis=-1)
    skew = np.linalg.norm(S, axis=(-2, -1))
    if np.any(skew > HERMITIAN_TOL * scale):
        # Frobenius overestimates; settle it with the exact spectral norm.
        skew = np.max(np.abs(np.linalg.eigvalsh(-1j * S)), axis=-1)
        if np.any(skew > HERMITIAN_TOL * scale):
            raise NotHermitian(
                f"skew-Hermitian part has norm {np.max(skew):.3e}, "
                f"above {HERMITIAN_TOL:g} * (1 + ||H||)"
            )
    return HermEig(w, V)


def jacobi_eigh(H, max_sweeps: int = JACOBI_MAX_SWEEPS, tol: float = JACOBI_OFFDIAG_TOL):
    """Cyclic Jacobi eigensolver for a complex Hermitian matrix.

    Each rotation first removes the phase of the pivot ``h_pq`` with a
    diagonal unitary, then applies the real symmetric Jacobi rotation.  Sweeps
    stop once the off-diagonal Frobenius norm falls below ``tol * ||H||_F``.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues ascending.
    """
    A = np.array(H, dtype=complex)
    n = A.shape[0]
    V = np.eye(n, dtype=complex)
    target = tol * np.linalg.norm(A)
    for _ in range(max_sweeps + 1):
        off = np.linalg.norm(A - np.diag(np.diag(A)))
        if off <= target:
            w = np.diag(A).real
            order = np.argsort(w, kind="stable")
            return w[order], V[:, order]
        for p in range(n - 1):
            for q in range(p + 1, n):
                h = A[p, q]
                g = abs(h)
                if g == 0.0:
                    continue
                phase = h / g
                theta = (A[q, q].real - A[p, p].real) / (2.0 * g)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.hypot(t, 1.0)
                s = t * c
                # U = D J with D_qq = conj(phase); columns then rows
                cp, cq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * cp - s * np.conj(phase) * cq
                A[:, q] = s * cp + c * np.conj(phase) * cq
                rp, rq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * rp - s * phase * rq
                A[q, :] = s * rp + c * phase * rq
                A[p, q] = A[q, p] = 0.0
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vp - s * np.conj(phase) * vq
                V[:, q] = s * vp + c * np.conj(phase) * vq
    raise NoConvergence(f"Jacobi eigensolver did not converge in {max_sweeps} sweeps")


def op_norm(A) -> float | np.ndarray:
    """Operator 2-norm (largest singular value) via the eigenvalues of ``A* A``."""
    M = as_matrix(A, stacked=True)
    w, _ = herm_eig(_adjoint(M) @ M)
    top = np.sqrt(np.clip(w[..., -1], 0.0, None))
    return float(top) if np.ndim(top) == 0 else top


def solve(A, B) -> np.ndarray:
    """Solve ``A X = B`` by LU with partial pivoting.

    Raises :class:`Singular` when a pivot of ``U`` is below ``1e-14 * ||A||_2``.
    """
    M = as_matrix(A)
    rhs = np.asarray(B, dtype=complex)
    if rhs.shape[0] != M.shape[0]:
        raise ValueError(f"right-hand side has {rhs.shape[0]} rows, matrix has dim {M.shape[0]}")
    norm = op_norm(M)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(M, check_finite=False)
    pivot = np.min(np.abs(np.diag(lu)))
    if norm == 0.0 or pivot < PIVOT_TOL * norm:
        raise Singular(f"pivot {pivot:.3e} below {PIVOT_TOL:g} * ||A|| = {PIVOT_TOL * norm:.3e}")
    return scipy.linalg.lu_solve((lu, piv), rhs, check_finite=False)


def resolvent(A, z: complex) -> np.ndarray:
    """Return ``(A - z I)^{-1}``; :class:`Singular` if ``z`` is numerically in the spectrum."""
    M = as_matrix(A)
    eye = np.eye(M.shape[0], dtype=complex)
    return solve(M - z * eye, eye)


def _pade13(X: np.ndarray):
    b = _PADE13
    eye = np.eye(X.shape[0], dtype=complex)
    X2 = X @ X
    X4 = X2 @ X2
    X6 = X4 @ X2
    U = X @ (X6 @ (b[13] * X6 + b[11] * X4 + b[9] * X2)
             + b[7] * X6 + b[5] * X4 + b[3] * X2 + b[1] * eye)
    V = (X6 @ (b[12] * X6 + b[10] * X4 + b[8] * X2)
         + b[6] * X6 + b[4] * X4 + b[2] * X2 + b[0] * eye)
    return U, V


def matrix_exp(A) -> np.ndarray:
    """Matrix exponential by scaling and squaring with the [13/13] Pade approximant.

    The scaling exponent ``s`` is the smallest with ``||A / 2^s||_2 <= 0.5``.
    Callers wanting ``e^{-tA}`` pass ``-t * A``.
    """
    M = as_matrix(A)
    norm = op_norm(M)
    if not math.isfinite(norm):
        raise Overflow("matrix norm is not finite")
    if norm == 0.0:
        return np.eye(M.shape[0], dtype=complex)
    s = 0 if norm <= EXPM_SCALED_NORM else math.ceil(math.log2(norm / EXPM_SCALED_NORM))
    U, V = _pade13(M / 2.0**s)
    E = solve(V - U, V + U)
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(s):
            E = E @ E
    if not np.all(np.isfinite(E)):
        raise Overflow(f"exponential overflowed after {s} squarings")
    return E


# -- matrix text format ------------------------------------------------------

def format_matrix(A) -> str:
    """Serialize to the text format: ``dim <d>`` then d rows of ``re,im`` tokens."""
    M = as_matrix(A)
    lines = [f"dim {M.shape[0]}"]
    for row in M:
        lines.append(" ".join(f"{x.real:.16e},{x.imag:.16e}" for x in row))
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> np.ndarray:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "dim":
        raise ValueError(f"bad header line {lines[0]!r}")
    d = int(head[1])
    if d < 1:
        raise ValueError(f"dimension must be positive, got {d}")
    rows = lines[1:]
    if len(rows) != d:
        raise ValueError(f"expected {d} rows, found {len(rows)}")
    M = np.empty((d, d), dtype=complex)
    for i, row in enumerate(rows):
        tokens = row.split()
        if len(tokens) != d:
            raise ValueError(f"row {i} has {len(tokens)} entries, expected {d}")
        for j, tok in enumerate(tokens):
            re, sep, im = tok.partition(",")
            if not sep:
                raise ValueError(f"entry {tok!r} is not of the form re,im")
            M[i, j] = complex(float(re), float(im))
    return as_matrix(M)


def write_matrix(path, A) -> None:
    """Write ``A`` to ``path`` atomically (temp file + rename)."""
    atomic_write_text(path, format_matrix(A))


def read_matrix(path) -> np.ndarray:
    with open(path, encoding="ascii") as fh:
        return parse_matrix(fh.read())


def atomic_write_text(path, text: str) -> None:
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
