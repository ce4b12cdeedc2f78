"""Spherical geometry primitives and the renormalized-angle kernel family.

The kernel is built from the geodesic distance rho on the unit sphere via

    lambda0(t) = (2/pi) * min(t, pi - t),

so lambda0(rho(x, y)) is 1 when the lines through +-x and +-y are
perpendicular and 0 when they coincide.  Raising it to a power alpha >= 1
interpolates between the raw renormalized angle (alpha = 1) and the
orthogonality indicator (alpha = infinity).
"""

from __future__ import annotations

import math
import numbers

import numpy as np

from .errors import DimensionMismatchError, DomainError

__all__ = [
    "ALPHA_INFINITY",
    "DEFAULT_ORTH_TOL",
    "UnitVector",
    "check_alpha",
    "geodesic_distance",
    "kernel",
    "kernel_matrix",
    "lambda0",
]

#: Distinguished value selecting the orthogonality-indicator kernel.
ALPHA_INFINITY = math.inf

#: Default |x.y| threshold below which the limit kernel counts a pair as
#: perpendicular.
DEFAULT_ORTH_TOL = 1e-9

# |x.y| within this of 1 is treated as exactly parallel; covers the few-ulp
# residue of normalized dot products of identical or antipodal vectors.
_PARALLEL_SNAP = 1e-14

# Angle arguments may overshoot [0, pi] by at most this before we reject them.
_ANGLE_SLACK = 1e-9


def check_alpha(alpha, *, finite: bool = False) -> float:
    """Validate a kernel exponent and return it as a float.

    Accepts any real number >= 1, plus ``math.inf`` unless ``finite`` is set.
    """
    if isinstance(alpha, bool) or not isinstance(alpha, numbers.Real):
        raise DomainError(f"alpha must be a real number, got {alpha!r}")
    a = float(alpha)
    if math.isnan(a):
        raise DomainError("alpha must not be NaN")
    if a < 1.0:
        raise DomainError(f"alpha must be >= 1, got {alpha!r}")
    if finite and math.isinf(a):
        raise DomainError("alpha must be finite here")
    return a


class UnitVector:
    """A point on the unit sphere S^d, stored as d+1 normalized coordinates.

    Instances are immutable; the coordinate array is read-only.  A unit
    vector represents the unoriented line through +-x wherever a kernel or
    energy consumes it, since every kernel in this package is invariant
    under x -> -x.
    """

    __slots__ = ("coords",)

    def __init__(self, coords):
        arr = np.array(coords, dtype=float)
        if arr.ndim != 1 or arr.size < 2:
            raise DomainError("a unit vector needs at least 2 coordinates (sphere dimension >= 1)")
        if not np.all(np.isfinite(arr)):
            raise DomainError("coordinates must be finite")
        norm = float(np.linalg.norm(arr))
        if norm < 1e-12:
            raise DomainError("the zero vector does not determine a direction")
        arr /= norm
        arr.flags.writeable = False
        self.coords = arr

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "UnitVector":
        # Trusted constructor: arr is already unit length; skips the
        # renormalization so negation and folding are bitwise exact.
        self = object.__new__(cls)
        arr = np.asarray(arr, dtype=float)
        if arr.flags.writeable:
            arr = arr.copy()
            arr.flags.writeable = False
        object.__setattr__(self, "coords", arr)
        return self

    @property
    def ambient_dim(self) -> int:
        return self.coords.size

    @property
    def sphere_dim(self) -> int:
        """The d of S^d."""
        return self.coords.size - 1

    def dot(self, other: "UnitVector") -> float:
        _check_same_ambient(self, other)
        return float(np.dot(self.coords, other.coords))

    def __neg__(self) -> "UnitVector":
        return UnitVector._wrap(-self.coords)

    def __repr__(self) -> str:
        body = ", ".join(repr(float(c)) for c in self.coords)
        return f"UnitVector([{body}])"


def _check_same_ambient(x: UnitVector, y: UnitVector) -> None:
    if x.ambient_dim != y.ambient_dim:
        raise DimensionMismatchError(
            f"vectors live in different ambient dimensions: {x.ambient_dim} vs {y.ambient_dim}"
        )


def _snap_cos(u: float) -> float:
    """Clamp a cosine to [-1, 1] and collapse near-parallel values exactly."""
    if u > 1.0:
        u = 1.0
    elif u < -1.0:
        u = -1.0
    if u >= 1.0 - _PARALLEL_SNAP:
        return 1.0
    if u <= -1.0 + _PARALLEL_SNAP:
        return -1.0
    return u


def geodesic_distance(x: UnitVector, y: UnitVector) -> float:
    """Great-circle distance rho(x, y) = arccos(x . y) in [0, pi]."""
    _check_same_ambient(x, y)
    return math.acos(_snap_cos(float(np.dot(x.coords, y.coords))))


def lambda0(t):
    """Renormalized acute angle (2/pi) * min(t, pi - t) for t in [0, pi].

    Accepts scalars or numpy arrays; values outside [0, pi] by more than a
    small slack raise ``DomainError``, the rest are clipped.
    """
    arr = np.asarray(t, dtype=float)
    if np.any(arr < -_ANGLE_SLACK) or np.any(arr > math.pi + _ANGLE_SLACK):
        raise DomainError(f"angle out of range [0, pi]: {t!r}")
    clipped = np.clip(arr, 0.0, math.pi)
    # Multiply before dividing: at t = pi/2 this yields exactly 1.0.
    out = 2.0 * np.minimum(clipped, math.pi - clipped) / math.pi
    if np.isscalar(t) or arr.ndim == 0:
        return float(out)
    return out


def kernel(x: UnitVector, y: UnitVector, alpha, orth_tol: float = DEFAULT_ORTH_TOL) -> float:
    """Pair kernel lambda0(rho(x, y))**alpha, or the orthogonality indicator.

    For alpha = ALPHA_INFINITY the kernel is 1 when |x . y| <= orth_tol and
    0 otherwise; for finite alpha it is computed through arccos(|x . y|),
    which makes it bitwise invariant under negating either argument.
    """
    a = check_alpha(alpha)
    if not (isinstance(orth_tol, numbers.Real) and orth_tol >= 0.0):
        raise DomainError(f"orth_tol must be a nonnegative real, got {orth_tol!r}")
    _check_same_ambient(x, y)
    u = float(np.dot(x.coords, y.coords))
    if math.isinf(a):
        return 1.0 if abs(u) <= orth_tol else 0.0
    # min(rho, pi - rho) == arccos(|cos rho|), so the absolute value folds
    # the min into a single arccos.
    base = 2.0 * math.acos(abs(_snap_cos(u))) / math.pi
    return base**a


def kernel_matrix(
    points: np.ndarray,
    other: np.ndarray | None = None,
    *,
    alpha,
    orth_tol: float = DEFAULT_ORTH_TOL,
) -> np.ndarray:
    """Kernel values for all pairs between two stacks of unit row vectors.

    ``points`` is (m, k); ``other`` defaults to ``points``.  Row vectors are
    assumed normalized.  Returns an (m, n) float matrix.
    """
    a = check_alpha(alpha)
    X = np.asarray(points, dtype=float)
    Y = X if other is None else np.asarray(other, dtype=float)
    if X.ndim != 2 or Y.ndim != 2 or X.shape[1] != Y.shape[1]:
        raise DimensionMismatchError("point stacks must be 2-D with matching ambient dimension")
    G = X @ Y.T
    absg = np.abs(G)
    if math.isinf(a):
        return (absg <= orth_tol).astype(float)
    absg = np.minimum(absg, 1.0)
    absg[absg >= 1.0 - _PARALLEL_SNAP] = 1.0
    base = 2.0 * np.arccos(absg) / math.pi
    return base**a
