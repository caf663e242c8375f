"""Plane geometry of the quasi-sectorial domain ``D_alpha`` and the power maps ``z -> z**n``.

``D_alpha`` is the union of the disc ``|z| <= sin(alpha)`` and the circular
sector with vertex 1, half-opening ``alpha`` about the negative real
direction and radius ``cos(alpha)``.  Its boundary consists of the two
tangent segments

    zeta_pm(t) = 1 + t * exp(i (pi -+ alpha)),   0 <= t <= cos(alpha),

joining the vertex 1 to the tangency points on the circle of radius
``sin(alpha)``, and the arc of that circle between them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import OutOfRange

__all__ = [
    "DAlphaDomain",
    "GAlphaSubdomain",
    "ContainmentReport",
    "dalpha_distance",
    "dalpha_contains",
    "dalpha_boundary",
    "zeta",
    "phi_of_t",
    "t_of_phi",
    "sup_im_f2",
    "im_sup_bound_fn",
    "asymptotic_limits",
    "scaled_limit_extrema",
    "segment_power_extrema",
    "verify_power_containment",
]

_HALF_PI = 0.5 * math.pi
_PARAM_SLACK = 1e-14
_GOLDEN = 0.5 * (math.sqrt(5.0) - 1.0)


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 <= alpha < _HALF_PI:
        raise ValueError(f"semi-angle must lie in [0, pi/2), got {alpha}")
    return alpha


@dataclass(frozen=True)
class DAlphaDomain:
    semi_angle: float
    sin: float = field(init=False, repr=False)
    cos: float = field(init=False, repr=False)

    def __post_init__(self):
        a = _check_alpha(self.semi_angle)
        object.__setattr__(self, "semi_angle", a)
        object.__setattr__(self, "sin", math.sin(a))
        object.__setattr__(self, "cos", math.cos(a))

    @property
    def tangency_point(self) -> complex:
        """Upper tangency point ``zeta_+(cos alpha) = sin^2 + i sin cos``."""
        return complex(self.sin * self.sin, self.sin * self.cos)

    def distance(self, z):
        return dalpha_distance(self, z)

    def contains(self, z, tol: float = 0.0):
        return dalpha_contains(self, z, tol)

    def boundary(self, k: int) -> np.ndarray:
        return dalpha_boundary(self, k)


@dataclass(frozen=True)
class GAlphaSubdomain:
    """Open kite ``{|arg z| < pi/2 - alpha} & {|arg(1 - z)| < alpha}`` inside ``D_alpha``.

    Its vertices are 0, 1 and the two tangency points.
    """

    semi_angle: float

    def __post_init__(self):
        _check_alpha(self.semi_angle)

    def contains(self, z):
        z = np.asarray(z, dtype=complex)
        a = self.semi_angle
        return (np.abs(np.angle(z)) < _HALF_PI - a) & (np.abs(np.angle(1.0 - z)) < a) & (z != 0)


def _domain(D) -> DAlphaDomain:
    return D if isinstance(D, DAlphaDomain) else DAlphaDomain(float(D))


def _segment_distance(w, a: complex, b: complex):
    d = b - a
    L2 = abs(d) ** 2
    if L2 == 0.0:
        return np.abs(w - a)
    s = np.clip(((w - a) * np.conj(d)).real / L2, 0.0, 1.0)
    return np.abs(w - (a + s * d))


def dalpha_distance(D, z):
    """Euclidean distance from ``z`` to ``D_alpha`` (0 for members).

    Computed as the smaller of the distance to the disc and the distance to
    the vertex-1 circular sector, the latter in the shifted variable
    ``w = 1 - z``.
    """
    D = _domain(D)
    a, s, c = D.semi_angle, D.sin, D.cos
    z = np.asarray(z, dtype=complex)
    to_disc = np.maximum(np.abs(z) - s, 0.0)

    w = 1.0 - z
    r = np.abs(w)
    ang = np.where(r == 0.0, 0.0, np.abs(np.angle(w)))
    in_cone = ang <= a
    to_arc = np.where(in_cone, np.maximum(r - c, 0.0), np.inf)
    edge = c * complex(math.cos(a), math.sin(a))
    to_edges = np.minimum(_segment_distance(w, 0j, edge), _segment_distance(w, 0j, edge.conjugate()))
    to_sector = np.where(in_cone & (r <= c), 0.0, np.minimum(to_arc, to_edges))

    out = np.minimum(to_disc, to_sector)
    return float(out) if out.ndim == 0 else out


def dalpha_contains(D, z, tol: float = 0.0):
    """True iff ``z`` is within distance ``tol`` of ``D_alpha``.

    ``D`` may be a :class:`DAlphaDomain` or a bare semi-angle.  The vertex
    ``z = 1`` is a member for every ``alpha``.
    """
    if tol < 0:
        raise ValueError("tol must be non-negative")
    out = dalpha_distance(D, z) <= tol
    return bool(out) if np.ndim(out) == 0 else out


def _allocate(total: int, lengths) -> list[int]:
    """Split ``total`` points proportionally to ``lengths`` (largest remainder)."""
    L = sum(lengths)
    if L == 0.0:
        base = [total // len(lengths)] * len(lengths)
        for i in range(total - sum(base)):
            base[i] += 1
        return base
    quotas = [total * x / L for x in lengths]
    base = [math.floor(q) for q in quotas]
    order = sorted(range(len(lengths)), key=lambda i: (-(quotas[i] - base[i]), i))
    for i in order[: total - sum(base)]:
        base[i] += 1
    return base


def dalpha_boundary(D, k: int) -> np.ndarray:
    """``k`` points on the boundary of ``D_alpha`` in counterclockwise order.

    The three corners (vertex 1 and both tangency points) are always
    included; the remaining ``k - 3`` points go to the upper segment, the
    arc and the lower segment in proportion to their lengths.  For
    ``alpha = 0`` the result traces the segment ``[0, 1]`` out and back.
    """
    D = _domain(D)
    if k < 3:
        raise ValueError(f"need at least the 3 corner points, got k={k}")
    a, s, c = D.semi_angle, D.sin, D.cos
    n_up, n_arc, n_low = _allocate(k - 3, [c, s * (math.pi + 2 * a), c])

    def interior(j):
        return np.arange(1, j + 1) / (j + 1)

    t_up = c * interior(n_up)
    upper = 1.0 + t_up * np.exp(1j * (math.pi - a))
    theta = (_HALF_PI - a) + (math.pi + 2 * a) * interior(n_arc)
    arc = s * np.exp(1j * theta)
    t_low = c * interior(n_low)[::-1]
    lower = 1.0 + t_low * np.exp(-1j * (math.pi - a))
    top = D.tangency_point
    return np.concatenate([[1.0 + 0j], upper, [top], arc, [top.conjugate()], lower])


def _sign(sign) -> int:
    if sign in ("+", 1, +1):
        return 1
    if sign in ("-", "−", -1):
        return -1
    raise ValueError(f"sign must be '+' or '-', got {sign!r}")


def zeta(t, sign="+", alpha: float = math.pi / 4):
    """Tangent-segment point ``1 + t exp(i (pi -+ alpha))`` for ``0 <= t <= cos(alpha)``.

    Vectorized over ``t``.  Raises :class:`OutOfRange` for ``t`` outside the segment.
    """
    alpha = _check_alpha(alpha)
    sg = _sign(sign)
    t = np.asarray(t, dtype=float)
    c = math.cos(alpha)
    if np.any(t < -_PARAM_SLACK) or np.any(t > c + _PARAM_SLACK):
        raise OutOfRange(f"t must lie in [0, cos(alpha)] = [0, {c!r}]")
    z = 1.0 + t * np.exp(1j * sg * (math.pi - alpha))
    return complex(z) if z.ndim == 0 else z


def phi_of_t(t, alpha: float):
    """Argument of ``zeta_+(t)``, from ``cot(alpha + phi) = (cos(alpha) - t) / sin(alpha)``."""
    alpha = _check_alpha(alpha)
    t = np.asarray(t, dtype=float)
    c = math.cos(alpha)
    if np.any(t < -_PARAM_SLACK) or np.any(t > c + _PARAM_SLACK):
        raise OutOfRange(f"t must lie in [0, cos(alpha)] = [0, {c!r}]")
    phi = np.arctan2(math.sin(alpha), c - t) - alpha
    return float(phi) if phi.ndim == 0 else phi


def t_of_phi(phi, alpha: float):
    """Inverse of :func:`phi_of_t`: ``t = sin(phi) / sin(alpha + phi)``."""
    alpha = _check_alpha(alpha)
    phi = np.asarray(phi, dtype=float)
    top = _HALF_PI - alpha
    if np.any(phi < -_PARAM_SLACK) or np.any(phi > top + _PARAM_SLACK):
        raise OutOfRange(f"phi must lie in [0, pi/2 - alpha] = [0, {top!r}]")
    denom = np.sin(alpha + phi)
    t = np.where(denom == 0.0, 0.0, np.sin(phi) / np.where(denom == 0.0, 1.0, denom))
    return float(t) if t.ndim == 0 else t


class SupIm(NamedTuple):
    value: float
    t_star: float


def sup_im_f2(alpha: float) -> SupIm:
    """Supremum of ``Im(zeta_+(t)**2)`` over the upper tangent segment.

    ``Im(zeta_+(t)**2) = 2 t sin(alpha) (1 - t cos(alpha))`` peaks at
    ``t = 1 / (2 cos alpha)`` with value ``tan(alpha) / 2``.  The peak lies on
    the segment only for ``alpha <= pi/4``; beyond that the maximizer is
    clamped to the segment end ``t = cos(alpha)``.
    """
    alpha = _check_alpha(alpha)
    if alpha == 0.0:
        raise ValueError("alpha must be positive")
    c = math.cos(alpha)
    t_star = 1.0 / (2.0 * c)
    if t_star <= c:
        return SupIm(0.5 * math.tan(alpha), t_star)
    return SupIm(2.0 * c * math.sin(alpha) * (1.0 - c * c), c)


def im_sup_bound_fn(alpha: float, n: int) -> float:
    """Stationary-phase estimate ``|zeta_+(t_n*)|**n`` with ``sin(n phi(t_n*)) = 1``.

    ``t_n*`` solves ``phi(t) = pi / (2n)``; when that angle is beyond the
    segment (small ``n``) it is clamped to ``pi/2 - alpha``.

    This is the modulus of ``zeta_+**n`` at the point where its argument
    first reaches ``pi/2``.  It tends to ``exp(-(pi/2) cot alpha)`` but does
    not bound the supremum of ``Im(zeta_+**n)`` from above in general; see
    :func:`scaled_limit_extrema` for the true limit.
    """
    alpha = _check_alpha(alpha)
    if alpha == 0.0:
        raise ValueError("alpha must be positive")
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    phi = min(math.pi / (2 * n), _HALF_PI - alpha)
    t = t_of_phi(phi, alpha)
    return (1.0 - 2.0 * t * math.cos(alpha) + t * t) ** (n / 2)


class AsymptoticLimits(NamedTuple):
    im_limit: float
    re_limit: float


def asymptotic_limits(alpha: float) -> AsymptoticLimits:
    """Closed forms ``exp(-(pi/2) cot alpha)`` and ``-exp(-pi cot alpha)``."""
    alpha = _check_alpha(alpha)
    if alpha == 0.0:
        raise ValueError("alpha must be positive")
    cot = 1.0 / math.tan(alpha)
    im_limit = math.exp(-_HALF_PI * cot)
    re_limit = -math.exp(-math.pi * cot)
    if alpha <= math.pi / 4:
        assert -re_limit < math.sin(alpha), "exp(-pi cot alpha) < sin alpha must hold for alpha <= pi/4"
    return AsymptoticLimits(im_limit, re_limit)


class LimitExtrema(NamedTuple):
    sup_im: float
    min_re: float


def scaled_limit_extrema(alpha: float) -> LimitExtrema:
    """Exact ``n -> inf`` limits of ``sup Im`` and ``min Re`` of ``zeta_+(t)**n``.

    With ``t = s / n`` the powers converge to ``exp(s exp(i (pi - alpha)))``;
    extremizing over ``s`` gives ``sin(alpha) exp(-alpha cot alpha)`` and
    ``-sin(alpha) exp(-(alpha + pi/2) cot alpha)``.
    """
    alpha = _check_alpha(alpha)
    if alpha == 0.0:
        raise ValueError("alpha must be positive")
    s, cot = math.sin(alpha), 1.0 / math.tan(alpha)
    return LimitExtrema(s * math.exp(-alpha * cot), -s * math.exp(-(alpha + _HALF_PI) * cot))


def segment_power_extrema(alpha: float, n: int, points: int = 100_001) -> LimitExtrema:
    """Brute-force ``max Im`` and ``min Re`` of ``zeta_+(t)**n`` on a uniform t-grid."""
    alpha = _check_alpha(alpha)
    t = np.linspace(0.0, math.cos(alpha), points)
    w = (1.0 + t * np.exp(1j * (math.pi - alpha))) ** n
    return LimitExtrema(float(np.max(w.imag)), float(np.min(w.real)))


class ContainmentReport(NamedTuple):
    ok: bool
    worst_violation: float


def verify_power_containment(alpha: float, n_max: int, k: int, tol: float = 1e-9) -> ContainmentReport:
    """Check ``z**n in D_alpha`` for ``n = 1..n_max`` on ``k`` boundary and ``k`` interior samples.

    Interior samples are boundary points pulled toward the origin (a member)
    by golden-ratio fractions, so they are members by convexity.
    """
    D = DAlphaDomain(alpha)
    b = dalpha_boundary(D, k)
    frac = np.mod(_GOLDEN * np.arange(1, k + 1), 1.0)
    z = np.concatenate([b, frac * b])
    w = np.ones_like(z)
    worst = 0.0
    for _ in range(n_max):
        w = w * z
        worst = max(worst, float(np.max(dalpha_distance(D, w))))
    return ContainmentReport(worst <= tol, worst)
