"""Numerical range (field of values) of a dense matrix.

The boundary is traced by the support-function method.  For a direction
angle ``theta`` the point of ``N(A)`` maximizing ``Re(exp(-i theta) w)`` is
``(u, A u)`` where ``u`` is a top eigenvector of the Hermitian matrix
``(exp(-i theta) A + exp(i theta) A*) / 2``.  With this convention the
support point for ``theta`` lies in the outward direction ``exp(i theta)``,
so increasing ``theta`` walks the boundary counterclockwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import NotSectorial
from .matcore import as_matrix, herm_eig, hermitian_part, op_norm, resolvent

__all__ = [
    "NumRangeBoundary",
    "SectorSpec",
    "ResolventCheck",
    "nr_boundary",
    "hull_contains",
    "hull_distance",
    "measured_semiangle",
    "check_resolvent_estimate",
    "convex_hull",
]

DEFAULT_M = 512
COLLINEAR_TOL = 1e-10
ORIGIN_TOL = 1e-12
_CHUNK_ELEMENTS = 2_000_000


@dataclass(frozen=True)
class NumRangeBoundary:
    """Support points of ``N(A)`` for ``m`` equally spaced direction angles.

    ``vectors[k]`` is the unit vector generating ``points[k]``.
    """

    angles: np.ndarray
    points: np.ndarray
    vectors: np.ndarray
    _hull: np.ndarray = field(default=None, repr=False, compare=False)

    @property
    def scale(self) -> float:
        return float(np.max(np.abs(self.points))) if len(self.points) else 0.0

    def hull(self) -> np.ndarray:
        """Counterclockwise hull vertices (1 entry: point, 2 entries: segment)."""
        if self._hull is None:
            object.__setattr__(self, "_hull", convex_hull(self.points, COLLINEAR_TOL * self.scale))
        return self._hull

    def area(self) -> float:
        v = self.hull()
        if len(v) < 3:
            return 0.0
        return 0.5 * float(np.sum((np.conj(v) * np.roll(v, -1)).imag))


@dataclass(frozen=True)
class SectorSpec:
    """The closed sector ``{z : |arg(z - vertex)| <= semi_angle}``."""

    semi_angle: float
    vertex: complex = 0.0

    def __post_init__(self):
        if not 0.0 <= self.semi_angle < math.pi / 2:
            raise ValueError(f"semi-angle must lie in [0, pi/2), got {self.semi_angle}")

    def contains(self, z, tol: float = 0.0):
        """Angular membership test; the vertex itself is a member."""
        w = np.asarray(z, dtype=complex) - self.vertex
        ang = np.where(w == 0, 0.0, np.abs(np.angle(w)))
        return ang <= self.semi_angle + tol


class ResolventCheck(NamedTuple):
    lhs: float
    rhs: float
    ok: bool


def nr_boundary(A, m: int = DEFAULT_M) -> NumRangeBoundary:
    """Trace ``m`` support points of the numerical range of ``A``.

    Direction angles are ``2 pi k / m``.  When the top eigenvalue is
    repeated any maximizing eigenvector is used; the point is still a
    support point.
    """
    if m < 8:
        raise ValueError(f"need at least 8 directions, got m={m}")
    M = as_matrix(A)
    d = M.shape[0]
    angles = 2.0 * np.pi * np.arange(m) / m
    rot = np.exp(-1j * angles)
    vectors = np.empty((m, d), dtype=complex)
    chunk = max(1, _CHUNK_ELEMENTS // (d * d))
    for lo in range(0, m, chunk):
        hi = min(m, lo + chunk)
        H = hermitian_part(rot[lo:hi, None, None] * M)
        _, V = herm_eig(H)
        vectors[lo:hi] = V[..., -1]
    points = np.einsum("ki,ij,kj->k", np.conj(vectors), M, vectors)
    return NumRangeBoundary(angles, points, vectors)


def _cross(o, a, b) -> float:
    return (a.real - o.real) * (b.imag - o.imag) - (a.imag - o.imag) * (b.real - o.real)


def convex_hull(points, tol: float = 0.0) -> np.ndarray:
    """Monotone-chain convex hull of complex points, counterclockwise.

    A vertex is dropped when it lies within ``tol`` of the chord joining its
    neighbours, so near-collinear input collapses to a segment and
    near-coincident input to a point.
    """
    pts = np.unique(np.asarray(points, dtype=complex).ravel())  # sorts by (re, im)
    if len(pts) <= 1:
        return pts
    if np.max(np.abs(pts - pts[0])) <= tol:
        return pts[:1]

    def chain(seq):
        out: list[complex] = []
        for p in seq:
            while len(out) >= 2 and _cross(out[-2], out[-1], p) <= tol * abs(p - out[-2]):
                out.pop()
            out.append(p)
        return out

    lower = chain(pts)
    upper = chain(pts[::-1])
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and abs(hull[0] - hull[1]) <= tol:
        hull = hull[:1]
    return np.array(hull, dtype=complex)


def _segment_distance(z, a, b):
    d = b - a
    L2 = abs(d) ** 2
    if L2 == 0.0:
        return np.abs(z - a)
    s = np.clip(((z - a) * np.conj(d)).real / L2, 0.0, 1.0)
    return np.abs(z - (a + s * d))


def _polygon_distance(z, verts):
    if len(verts) == 1:
        return np.abs(z - verts[0])
    if len(verts) == 2:
        return _segment_distance(z, verts[0], verts[1])
    inside = np.ones(np.shape(z), dtype=bool)
    dist = np.full(np.shape(z), np.inf)
    for a, b in zip(verts, np.roll(verts, -1)):
        inside &= _cross(a, b, z) >= 0.0
        dist = np.minimum(dist, _segment_distance(z, a, b))
    return np.where(inside, 0.0, dist)


def hull_distance(B: NumRangeBoundary, z):
    """Euclidean distance from ``z`` to the convex hull of ``B.points`` (0 inside)."""
    zz = np.asarray(z, dtype=complex)
    out = _polygon_distance(zz, B.hull())
    return float(out) if out.ndim == 0 else out


def hull_contains(B: NumRangeBoundary, z, tol: float = 0.0):
    """True iff ``z`` lies within ``tol`` of the hull of ``B.points``."""
    return hull_distance(B, z) <= tol


def measured_semiangle(B: NumRangeBoundary) -> float:
    """Smallest ``alpha`` with every support point inside the sector ``S_alpha``.

    Points with ``|z| <= 1e-12 * scale`` count as the vertex (argument 0).
    Raises :class:`NotSectorial` if a point has real part below
    ``-1e-12 * scale``.
    """
    z = B.points
    scale = B.scale
    if scale == 0.0:
        return 0.0
    if np.any(z.real < -ORIGIN_TOL * scale):
        worst = float(np.min(z.real))
        raise NotSectorial(f"numerical range reaches Re z = {worst:.3e} < 0")
    far = np.abs(z) > ORIGIN_TOL * scale
    if not np.any(far):
        return 0.0
    return float(np.max(np.abs(np.angle(z[far]))))


def check_resolvent_estimate(A, z: complex, m: int = DEFAULT_M) -> ResolventCheck:
    """Compare ``||(A - zI)^{-1}||`` with ``1 / dist(z, N(A))``."""
    dist = hull_distance(nr_boundary(A, m), z)
    if dist <= 0.0:
        raise ValueError(f"z = {z} lies in the sampled numerical range")
    lhs = op_norm(resolvent(A, z))
    rhs = 1.0 / dist
    return ResolventCheck(lhs, rhs, bool(lhs <= rhs * (1 + 1e-8) + 1e-12))
