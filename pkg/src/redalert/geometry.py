"""High-dimensional Euclidean geometry primitives.

Balls, spheres, cones and solid angles, all evaluated in natural-log domain
so that blocklengths up to 1e6 stay finite. The exact solid angle is the
oracle the rest of the package tests its asymptotics against, so it targets
1e-10 relative accuracy.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import betainc, gammaln

from .errors import InvalidArgumentError
from .special import log_betainc


@dataclass(frozen=True, eq=False)
class ConeSpec:
    """Cone with apex `apex`, axis toward `axis_point`, half-angle in (0, pi/2]."""

    apex: np.ndarray
    axis_point: np.ndarray
    half_angle: float

    def __post_init__(self):
        apex = np.asarray(self.apex, dtype=float)
        axis_point = np.asarray(self.axis_point, dtype=float)
        object.__setattr__(self, "apex", apex)
        object.__setattr__(self, "axis_point", axis_point)
        if apex.ndim != 1 or axis_point.shape != apex.shape:
            raise InvalidArgumentError("apex and axis_point must be 1-D vectors of equal length")
        if not 0.0 < self.half_angle <= math.pi / 2:
            raise InvalidArgumentError(f"half_angle must lie in (0, pi/2], got {self.half_angle}")
        if np.array_equal(apex, axis_point):
            raise InvalidArgumentError("apex and axis_point must differ")

    @property
    def dim(self) -> int:
        return self.apex.shape[0]


@dataclass(frozen=True, eq=False)
class ShellSpec:
    """Spherical shell centered at `center` between radii r_inner and r_outer."""

    center: np.ndarray
    r_inner: float
    r_outer: float

    def __post_init__(self):
        center = np.asarray(self.center, dtype=float)
        object.__setattr__(self, "center", center)
        if center.ndim != 1:
            raise InvalidArgumentError("center must be a 1-D vector")
        if not 0.0 <= self.r_inner <= self.r_outer:
            raise InvalidArgumentError(
                f"need 0 <= r_inner <= r_outer, got ({self.r_inner}, {self.r_outer})"
            )

    def contains(self, point) -> bool:
        point = np.asarray(point, dtype=float)
        if point.shape != self.center.shape:
            raise InvalidArgumentError("point dimension does not match shell")
        dist = float(np.linalg.norm(point - self.center))
        return self.r_inner <= dist <= self.r_outer


def log_ball_volume(n: int, r: float) -> float:
    """ln Vol of the n-ball of radius r: ln(r^n pi^{n/2} / Gamma(n/2 + 1))."""
    if n < 1:
        raise InvalidArgumentError(f"dimension must be >= 1, got {n}")
    if r <= 0:
        raise InvalidArgumentError(f"radius must be positive, got {r}")
    return n * math.log(r) + (n / 2.0) * math.log(math.pi) - gammaln(n / 2.0 + 1.0)


def log_sphere_surface(n: int, r: float) -> float:
    """ln of the (n-1)-dimensional surface area: ln(n r^{n-1} pi^{n/2} / Gamma(n/2 + 1))."""
    if n < 1:
        raise InvalidArgumentError(f"dimension must be >= 1, got {n}")
    if r <= 0:
        raise InvalidArgumentError(f"radius must be positive, got {r}")
    return (
        math.log(n)
        + (n - 1) * math.log(r)
        + (n / 2.0) * math.log(math.pi)
        - gammaln(n / 2.0 + 1.0)
    )


def angle_between(a, b) -> float:
    """Angle in [0, pi] between two nonzero vectors of equal length."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise InvalidArgumentError("vectors must be 1-D and of equal length")
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise InvalidArgumentError("angle is undefined for the zero vector")
    # dot products can exceed +-1 by a few ulps
    cosine = float(np.clip(a @ b / (na * nb), -1.0, 1.0))
    return math.acos(cosine)


def region_contains(point, cone: ConeSpec, shell_min_distance: float) -> bool:
    """Membership in the closed conical shell {angle <= half_angle, dist >= L}."""
    point = np.asarray(point, dtype=float)
    if point.shape != cone.apex.shape:
        raise InvalidArgumentError("point dimension does not match cone")
    if shell_min_distance < 0:
        raise InvalidArgumentError("shell_min_distance must be nonnegative")
    rel = point - cone.apex
    dist = float(np.linalg.norm(rel))
    if dist < shell_min_distance:
        return False
    if dist == 0.0:
        # point at the apex: inside the cone, and only admissible when L = 0
        return True
    angle = angle_between(cone.axis_point - cone.apex, rel)
    return angle <= cone.half_angle


def _check_theta(n: int, theta: float, allow_right_angle: bool) -> None:
    if n < 2:
        raise InvalidArgumentError(f"dimension must be >= 2, got {n}")
    upper_ok = theta <= math.pi / 2 if allow_right_angle else theta < math.pi / 2
    if not (0.0 < theta and upper_ok):
        raise InvalidArgumentError(f"half-angle {theta} outside the admissible range")


def solid_angle_exact(n: int, theta: float) -> float:
    """Fraction of the sphere's surface carved out by a cone of half-angle theta.

    Equals P(angle between a uniform direction and a fixed axis <= theta),
    i.e. (1/2) I_{sin^2 theta}((n-1)/2, 1/2).
    """
    _check_theta(n, theta, allow_right_angle=True)
    if theta == math.pi / 2:
        return 0.5
    s2 = math.sin(theta) ** 2
    return 0.5 * float(betainc((n - 1) / 2.0, 0.5, s2))


def log_solid_angle_exact(n: int, theta: float) -> float:
    """ln of solid_angle_exact, stable when the cone fraction underflows a double."""
    _check_theta(n, theta, allow_right_angle=True)
    if theta == math.pi / 2:
        return math.log(0.5)
    s2 = math.sin(theta) ** 2
    return math.log(0.5) + log_betainc((n - 1) / 2.0, 0.5, s2)


def log_solid_angle_asymptotic(n: int, theta: float) -> float:
    """Leading term of the large-n solid angle: ln(sin^n t / (sqrt(2 pi n) sin t cos t))."""
    _check_theta(n, theta, allow_right_angle=False)
    sin_t = math.sin(theta)
    cos_t = math.cos(theta)
    return n * math.log(sin_t) - math.log(math.sqrt(2.0 * math.pi * n) * sin_t * cos_t)
