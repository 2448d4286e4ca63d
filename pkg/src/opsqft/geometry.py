"""4D maps built from quaternion sandwiches: half-turns, double rotations,
line/hyperplane reflections and rotary reflections q -> d conj(q) t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import AxisUndefinedError, ValidationError
from .quaternion import (
    I,
    PureUnit,
    Quaternion,
    commutator,
    conj,
    exp_pure,
    inner,
    mu,
    mul,
    norm,
    scalar_part,
    vector_part,
)

DEGENERATE_TOL = 1e-9
TWO_PI = 2.0 * math.pi


def half_turn(f: Quaternion, g: Quaternion, q: Quaternion) -> Quaternion:
    """f q g: rotation by pi in the q_- plane, q_+ plane fixed pointwise."""
    return mul(mul(f, q), g)


def double_rotation(alpha: float, beta: float, f: Quaternion, g: Quaternion, q: Quaternion) -> Quaternion:
    """e^{alpha f} q e^{beta g}: angle alpha+beta in the q_- plane, alpha-beta in q_+."""
    return mul(mul(exp_pure(f, alpha), q), exp_pure(g, beta))


def _check_unit(a: Quaternion, name: str):
    if abs(norm(a) - 1.0) > DEGENERATE_TOL:
        raise ValidationError(f"{name} must be a unit quaternion, |{name}| = {norm(a)!r}")


def reflect_line(a: Quaternion, q: Quaternion) -> Quaternion:
    """Reflection at the line through the origin with direction a."""
    _check_unit(a, "a")
    return mul(mul(a, conj(q)), a)


def reflect_hyperplane(a: Quaternion, q: Quaternion) -> Quaternion:
    """Reflection at the 3D hyperplane orthogonal to a."""
    _check_unit(a, "a")
    return -mul(mul(a, conj(q)), a)


@dataclass(frozen=True)
class RotaryReflection:
    """Geometry of q -> d conj(q) t.

    ``plane_basis`` is an orthonormal, oriented pair (e1, e2) with
    map(e1) = cos(angle) e1 + sin(angle) e2; ``ratio`` is |v1|/|v2| of the
    un-normalized pair [d,t](1 +- conj(d) t).  In the degenerate case d and t
    share the axis ``common_axis`` and ``plane_basis`` is None: the rotation
    plane is any plane of pure quaternions orthogonal to {1, common_axis},
    oriented as (p, p * common_axis).
    """

    d: Quaternion
    t: Quaternion
    invariant_line: Quaternion
    axis: Quaternion
    plane_basis: Optional[tuple]
    ratio: Optional[float]
    angle: float
    degenerate: bool
    common_axis: Optional[PureUnit] = None

    def __call__(self, q: Quaternion) -> Quaternion:
        return apply_rotary_reflection(self, q)


def _orthonormalize(v: Quaternion, against) -> Quaternion:
    for _ in range(2):
        for u in against:
            v = v - u * inner(v, u)
    return v.normalized()


def _signed_angle(q: Quaternion, axis: Quaternion) -> float:
    return math.atan2(inner(q, axis), q.r)


def make_rotary_reflection(d: Quaternion, t: Quaternion, axis_hint: Optional[Quaternion] = None) -> RotaryReflection:
    """Invariant line, axis, rotation plane and angle of q -> d conj(q) t.

    ``axis_hint`` picks the sign of the shared axis when [d, t] vanishes
    (the angle is measured against it); otherwise it is ignored.
    """
    _check_unit(d, "d")
    _check_unit(t, "t")
    c = commutator(d, t)
    line = d + t
    ax = d - t
    if norm(c) > DEGENERATE_TOL:
        dt = mul(conj(d), t)
        v1 = mul(c, 1 + dt)
        v2 = mul(c, 1 - dt)
        gamma = math.acos(max(-1.0, min(1.0, scalar_part(dt))))
        line, ax = line.normalized(), ax.normalized()
        e1 = _orthonormalize(v1, (line, ax))
        e2 = _orthonormalize(v2, (line, ax, e1))
        return RotaryReflection(d, t, line, ax, (e1, e2), norm(v1) / norm(v2), math.pi - gamma, False)

    if axis_hint is not None:
        f = PureUnit.of(axis_hint)
    else:
        # the longer vector part fixes the shared axis best
        big = t if norm(vector_part(t)) >= norm(vector_part(d)) else d
        try:
            f = mu(big, 1e-9)
        except AxisUndefinedError:
            f = PureUnit.of(I)
    alpha = _signed_angle(d, f)
    beta = _signed_angle(t, f)
    # d + t and d - t are orthogonal in the {1, f} plane; at most one can vanish
    if norm(line) >= norm(ax):
        line = line.normalized()
        ax = ax.normalized() if norm(ax) > DEGENERATE_TOL else mul(f, line)
    else:
        ax = ax.normalized()
        line = -mul(f, ax)
    gamma_angle = (math.pi - alpha + beta) % TWO_PI
    return RotaryReflection(d, t, line, ax, None, None, gamma_angle, True, f)


def apply_rotary_reflection(rr: RotaryReflection, q: Quaternion) -> Quaternion:
    return mul(mul(rr.d, conj(q)), rr.t)


def measure_rotation_angle(d: Quaternion, t: Quaternion, e1: Quaternion, e2: Quaternion) -> float:
    """Rotation angle of q -> d conj(q) t in the oriented orthonormal plane (e1, e2),
    read off with atan2 from the image of e1.  Result in [0, 2 pi)."""
    img = mul(mul(d, conj(e1)), t)
    return math.atan2(inner(img, e2), inner(img, e1)) % TWO_PI


def rotary_probe_plane(rr: RotaryReflection) -> tuple:
    """An oriented orthonormal pair spanning the rotation plane."""
    if rr.plane_basis is not None:
        return rr.plane_basis
    f = rr.common_axis
    # any pure unit orthogonal to f
    seed = min((Quaternion(0, 1), Quaternion(0, 0, 1), Quaternion(0, 0, 0, 1)), key=lambda e: abs(inner(e, f)))
    p = (seed - f * inner(seed, f)).normalized()
    return p, mul(p, f)


@dataclass(frozen=True)
class PhaseRotations:
    """Local action of e^{-f a} (.) e^{-g b}: rotation angles in each split plane."""

    minus_plane: float
    plus_plane: float


def integrand_geometry(f: Quaternion, g: Quaternion, x1w1: float, x2w2: float, variant: str = "standard"):
    """Local geometric action of a transform integrand at phases (x1w1, x2w2).

    ``"standard"`` returns the two phase-rotation angles in the q_- and q_+
    planes.  ``"conjugated"`` returns the rotary reflection with
    d = e^{-g x1w1}, t = e^{-f x2w2}.
    """
    f, g = PureUnit.of(f), PureUnit.of(g)
    if variant == "standard":
        return PhaseRotations(-(x1w1 + x2w2), -(x1w1 - x2w2))
    if variant != "conjugated":
        raise ValidationError(f"unknown variant {variant!r}")
    d = exp_pure(g, -x1w1)
    t = exp_pure(f, -x2w2)
    if abs(math.sin(x2w2)) <= DEGENERATE_TOL:
        hint = g
    else:
        hint = f
    return make_rotary_reflection(d, t, axis_hint=hint)


__all__ = [
    "half_turn",
    "double_rotation",
    "reflect_line",
    "reflect_hyperplane",
    "RotaryReflection",
    "make_rotary_reflection",
    "apply_rotary_reflection",
    "measure_rotation_angle",
    "rotary_probe_plane",
    "PhaseRotations",
    "integrand_geometry",
]
