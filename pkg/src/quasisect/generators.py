"""Reproducible m-sectorial test matrices and the contractions built from them.

Random matrices use numpy's Philox-4x64-10 counter-based bit generator
(``numpy.random.Philox``) seeded with the 64-bit ``seed`` of a ``MatrixGenSpec``, so a
spec always reproduces the same matrix bit for bit.

The construction ``A = R + i R^{1/2} W R^{1/2}`` with ``R >= 0`` and
``||W|| <= tan(alpha)`` gives, for every unit ``u``,

    |Im (u, A u)| = |(R^{1/2} u, W R^{1/2} u)| <= tan(alpha) (u, R u) = tan(alpha) Re (u, A u),

so ``N(A)`` lies in the sector ``|arg z| <= alpha``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .matcore import as_matrix, herm_eig, matrix_exp, op_norm, solve

__all__ = [
    "MatrixGenSpec",
    "gen_msectorial",
    "sectorial_from_parts",
    "laplacian_potential",
    "euler_resolvent",
    "semigroup_value",
    "rng_from_seed",
]

KINDS = ("random", "laplacian")


@dataclass(frozen=True)
class MatrixGenSpec:
    """Recipe for an m-sectorial matrix with vertex 0.

    ``kind="laplacian"`` selects the deterministic 1-D Dirichlet Laplacian
    with an imaginary potential (``seed`` is then unused).  ``pin_vertex``
    shifts the spectrum of ``R`` so its smallest eigenvalue is 0, which makes
    the numerical range touch the sector vertex.
    """

    dim: int
    alpha_target: float
    seed: int = 0
    scale: float = 1.0
    kind: str = "random"
    pin_vertex: bool = False

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValueError(f"dim must be a positive integer, got {self.dim}")
        if not 0.0 <= self.alpha_target < math.pi / 2:
            raise ValueError(f"alpha_target must lie in [0, pi/2), got {self.alpha_target}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if not self.scale > 0:
            raise ValueError(f"scale must be positive, got {self.scale}")
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")

    def to_json(self) -> str:
        record = asdict(self)
        if record["kind"] == "random":
            del record["kind"]
        if not record["pin_vertex"]:
            del record["pin_vertex"]
        return json.dumps(record, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "MatrixGenSpec":
        return cls(**json.loads(text))


def rng_from_seed(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(int(seed)))


def _sqrt_psd(R: np.ndarray) -> np.ndarray:
    w, V = herm_eig(R)
    return (V * np.sqrt(np.clip(w, 0.0, None))) @ V.conj().T


def _hermitian(M: np.ndarray) -> np.ndarray:
    return 0.5 * (M + M.conj().T)


def sectorial_from_parts(R, W) -> np.ndarray:
    """Return ``R + i R^{1/2} W R^{1/2}`` for PSD ``R`` and Hermitian ``W``."""
    R = as_matrix(R)
    W = as_matrix(W)
    Rh = _sqrt_psd(R)
    return R + 1j * (_hermitian(Rh @ W @ Rh))


def gen_msectorial(spec: MatrixGenSpec) -> np.ndarray:
    """Build the matrix described by ``spec``; ``N(A)`` lies in ``S_alpha_target``.

    ``R = G* G / dim`` from a complex Gaussian ``G`` and rescaled to
    ``||R|| = scale``; ``W`` is a Hermitian Gaussian rescaled to
    ``||W|| = tan(alpha_target)`` exactly, which saturates the sector.
    """
    if spec.kind == "laplacian":
        return laplacian_potential(spec.dim, spec.alpha_target, spec.scale, pin_vertex=spec.pin_vertex)

    d = spec.dim
    rng = rng_from_seed(spec.seed)
    G = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / math.sqrt(2.0)
    H = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / math.sqrt(2.0)

    R = _hermitian(G.conj().T @ G / d)
    if spec.pin_vertex:
        w, V = herm_eig(R)
        R = _hermitian((V * (w - w[0])) @ V.conj().T)
    R = R * (spec.scale / op_norm(R))

    W = _hermitian(H)
    tan = math.tan(spec.alpha_target)
    if tan == 0.0:
        W = np.zeros_like(W)
    else:
        W = W * (tan / op_norm(W))
    return sectorial_from_parts(R, W)


def laplacian_potential(dim: int, alpha_target: float, scale: float = 1.0, *, pin_vertex: bool = False) -> np.ndarray:
    """Dirichlet Laplacian on ``dim`` interior nodes plus ``i`` times a bump potential.

    The Laplacian ``L`` is scaled to ``||L|| = scale``.  The potential
    ``V(x) = c sin(pi x)`` has ``c = tan(alpha_target) * lambda_min(L)``, so
    ``|Im (u, A u)| <= tan(alpha) lambda_min(L) <= tan(alpha) Re (u, A u)``.
    With ``pin_vertex`` the Laplacian is shifted by ``-lambda_min`` and the
    potential enters as ``R^{1/2} diag(tan(alpha) sin(pi x)) R^{1/2}``, which
    keeps the sector bound with the spectrum of ``R`` touching 0.
    """
    if dim < 1:
        raise ValueError("dim must be positive")
    L = 2.0 * np.eye(dim) - np.eye(dim, k=1) - np.eye(dim, k=-1)
    lam = 2.0 - 2.0 * np.cos(np.pi * np.arange(1, dim + 1) / (dim + 1))
    L = L * (scale / lam[-1])
    lam_min = lam[0] * scale / lam[-1]
    x = np.arange(1, dim + 1) / (dim + 1)
    if pin_vertex:
        return sectorial_from_parts(L - lam_min * np.eye(dim), np.diag(math.tan(alpha_target) * np.sin(np.pi * x)))
    V = math.tan(alpha_target) * lam_min * np.sin(np.pi * x)
    return as_matrix(L + 1j * np.diag(V))


def euler_resolvent(A, t: float) -> np.ndarray:
    """``F(t) = (I + t A)^{-1}``, a contraction for m-sectorial ``A``."""
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    M = as_matrix(A)
    eye = np.eye(M.shape[0], dtype=complex)
    if t == 0:
        return eye
    return solve(eye + t * M, eye)


def semigroup_value(A, t: float) -> np.ndarray:
    """``exp(-t A)``."""
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    return matrix_exp(-t * as_matrix(A))
