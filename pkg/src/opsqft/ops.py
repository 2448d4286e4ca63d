"""General orthogonal 2D planes split q = q_+ + q_-, q_+- = (q +- f q g) / 2.

Every pair of pure unit quaternions (f, g) splits H = R^4 into two completely
orthogonal planes.  Three cases are told apart because the generic plane
bases {f-g, 1+fg} and {f+g, 1-fg} collapse when g = f or g = -f:

    generic     q_+ plane {f-g, 1+fg},  q_- plane {f+g, 1-fg}
    g = f       q_+ plane {j', k'},     q_- plane {1, f}
    g = -f      q_+ plane {1, f},       q_- plane {j', k'}

with j', k' the images of j, k under the rotation carrying i onto f.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import BranchError, DegenerateError, ValidationError
from .quaternion import (
    I,
    J,
    K,
    ONE,
    PureUnit,
    Quaternion,
    conj,
    exp_pure,
    inner,
    inverse,
    mu,
    mul,
    norm,
    qarray,
    qmul,
    scalar_part,
)

DEGENERATE_TOL = 1e-9
ILL_CONDITIONED_TOL = 1e-6


class Branch(enum.Enum):
    GENERIC = "generic"
    G_EQUALS_F = "g=f"
    G_EQUALS_MINUS_F = "g=-f"


@dataclass(frozen=True)
class OpsContext:
    """Validated (f, g) pair with its orthonormal split basis.

    ``basis`` holds four unit quaternions: ``basis[:2]`` span the q_+ plane,
    ``basis[2:]`` the q_- plane.  ``frame`` is the same 4D basis in the order
    used for labelled projections, {c, d, b, a} in the generic case and
    {1, f, j', k'} otherwise.  ``anchors`` are (A_+, A_-) such that every
    element of a plane factors as (x + y f) * A.
    """

    f: PureUnit
    g: PureUnit
    branch: Branch
    basis: tuple
    frame: tuple
    frame_labels: tuple
    anchors: tuple
    ill_conditioned: bool = False

    @property
    def plus_basis(self):
        return self.basis[0], self.basis[1]

    @property
    def minus_basis(self):
        return self.basis[2], self.basis[3]

    @property
    def anchor_plus(self) -> Quaternion:
        return self.anchors[0]

    @property
    def anchor_minus(self) -> Quaternion:
        return self.anchors[1]

    def to_dict(self) -> dict:
        return {
            "f": list(self.f),
            "g": list(self.g),
            "branch": self.branch.value,
            "basis": [list(b) for b in self.basis],
            "ill_conditioned": self.ill_conditioned,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "OpsContext":
        ctx = make_context(Quaternion(*d["f"]), Quaternion(*d["g"]))
        if "branch" in d and d["branch"] != ctx.branch.value:
            raise ValidationError(f"branch {d['branch']!r} does not match f, g ({ctx.branch.value})")
        return ctx


@dataclass(frozen=True)
class SplitPair:
    plus: Quaternion
    minus: Quaternion


@dataclass(frozen=True)
class OpsCoefficients:
    """Coefficients of q = c1 (1+fg) + c2 (f-g) + c3 (1-fg) + c4 (f+g)."""

    c1: float
    c2: float
    c3: float
    c4: float

    def __iter__(self):
        return iter((self.c1, self.c2, self.c3, self.c4))


@dataclass(frozen=True)
class FactorForms:
    plus_left: Quaternion
    plus_right: Quaternion
    minus_left: Quaternion
    minus_right: Quaternion


@dataclass(frozen=True)
class Steering:
    f: PureUnit
    g: PureUnit
    c: Quaternion
    d: Quaternion
    target: str
    context: OpsContext


def _sandwich(p: Quaternion, q: Quaternion) -> Quaternion:
    return mul(mul(inverse(p), q), p)


def rotation_to_axis(f: Quaternion) -> Quaternion:
    """R = i (i + f), which satisfies R^-1 i R = f.

    Raises DegenerateError when f is (numerically) -i.
    """
    f = PureUnit.of(f)
    s = I + f
    if norm(s) <= DEGENERATE_TOL:
        raise DegenerateError("f is antipodal to i, R = i(i+f) vanishes")
    return mul(I, s)


def axis_frame(f: Quaternion):
    """Orthonormal (1, f, j', k') with f j' = k' = -j' f."""
    f = PureUnit.of(f)
    try:
        R = rotation_to_axis(f)
        jp = _sandwich(R, J)
    except DegenerateError:
        # reference axis j instead of i; (j, k, i) has the same orientation as (i, j, k)
        jp = _sandwich(mul(J, J + f), K)
    # R loses accuracy as f approaches -i; restore j' _|_ {1, f} and k' = f j'
    jp = _complement_unit(jp, ONE, f)
    return ONE, f, jp, mul(f, jp)


def _branch(f: Quaternion, g: Quaternion):
    dm, dp = norm(f - g), norm(f + g)
    if dm <= DEGENERATE_TOL:
        return Branch.G_EQUALS_F, False
    if dp <= DEGENERATE_TOL:
        return Branch.G_EQUALS_MINUS_F, False
    return Branch.GENERIC, min(dm, dp) <= ILL_CONDITIONED_TOL


def _complement_unit(v: Quaternion, *us: Quaternion) -> Quaternion:
    """v made orthogonal to the orthonormal us (two Gram-Schmidt passes), normalized."""
    for _ in range(2):
        for u in us:
            v = v - u * inner(v, u)
    return v.normalized()


def make_context(f: Quaternion, g: Quaternion) -> OpsContext:
    """Split context for (f, g).  Within 1e-9 of g = +-f the degenerate branch
    is used and the stored g is exactly +-f."""
    f, g = PureUnit.of(f), PureUnit.of(g)
    branch, ill = _branch(f, g)
    if branch is Branch.GENERIC:
        # d = -f c and a = -f b since f(f-g) = -(1+fg), f(f+g) = -(1-fg).
        # The plane whose generic elements are short is taken as the
        # orthogonal complement of the other one, so it stays accurate near g = +-f.
        if norm(f - g) < norm(f + g):
            b = (f + g).normalized()
            a = -mul(f, b)
            c = _complement_unit(f - g, b, a)
            d = -mul(f, c)
        else:
            c = (f - g).normalized()
            d = -mul(f, c)
            b = _complement_unit(f + g, c, d)
            a = -mul(f, b)
        basis = (c, d, b, a)
        return OpsContext(f, g, branch, basis, basis, ("c", "d", "b", "a"), (d, a), ill)
    e, fp, jp, kp = axis_frame(f)
    frame = (e, fp, jp, kp)
    labels = ("e", "i'", "j'", "k'")
    # g is snapped onto +-f so the context's own split is exact in its planes
    if branch is Branch.G_EQUALS_F:
        return OpsContext(f, f, branch, (jp, kp, e, fp), frame, labels, (jp, e), False)
    return OpsContext(f, PureUnit.of(-f), branch, (e, fp, jp, kp), frame, labels, (e, jp), False)


def split(ctx: OpsContext, q: Quaternion) -> SplitPair:
    fqg = mul(mul(ctx.f, q), ctx.g)
    return SplitPair((q + fqg) * 0.5, (q - fqg) * 0.5)


def split_field(ctx: OpsContext, h) -> tuple:
    """Vectorized split of an (..., 4) array."""
    h = qarray(h)
    fhg = qmul(qmul(ctx.f, h), ctx.g)
    return 0.5 * (h + fhg), 0.5 * (h - fhg)


def _generic_elements(ctx: OpsContext):
    if ctx.branch is not Branch.GENERIC:
        raise BranchError(
            f"coefficient formulas need f != +-g (branch {ctx.branch.value}); "
            "use frame_coordinates for the branch basis projection"
        )
    fg = mul(ctx.f, ctx.g)
    return 1 + fg, ctx.f - ctx.g, 1 - fg, ctx.f + ctx.g


def coefficients(ctx: OpsContext, q: Quaternion) -> OpsCoefficients:
    e1, e2, e3, e4 = _generic_elements(ctx)
    return OpsCoefficients(*(scalar_part(mul(q, inverse(e))) for e in (e1, e2, e3, e4)))


def reconstruct(ctx: OpsContext, c: OpsCoefficients) -> Quaternion:
    e1, e2, e3, e4 = _generic_elements(ctx)
    return e1 * c.c1 + e2 * c.c2 + e3 * c.c3 + e4 * c.c4


def frame_coordinates(ctx: OpsContext, q: Quaternion) -> tuple:
    """Inner products of q with the orthonormal ``ctx.frame`` (any branch)."""
    return tuple(inner(q, b) for b in ctx.frame)


def factor_forms(ctx: OpsContext, q: Quaternion) -> FactorForms:
    c1, c2, c3, c4 = coefficients(ctx, q)
    f, g = ctx.f, ctx.g
    fg = mul(f, g)
    return FactorForms(
        plus_left=mul(c1 + f * c2, 1 + fg),
        plus_right=mul(1 + fg, c1 - g * c2),
        minus_left=mul(c3 + f * c4, 1 - fg),
        minus_right=mul(1 - fg, c3 + g * c4),
    )


def exp_sandwich(alpha: float, beta: float, ctx: OpsContext, q: Quaternion) -> Quaternion:
    """e^{alpha f} q e^{beta g}."""
    return mul(mul(exp_pure(ctx.f, alpha), q), exp_pure(ctx.g, beta))


def detfg_from_plane(a: Quaternion, b: Quaternion, target: str = "minus", tol: float = DEGENERATE_TOL) -> Steering:
    """Choose f, g so that the plane spanned by unit a and pure unit b becomes the
    q_- plane (``target="minus"``) or the q_+ plane (``target="plus"``).

    c, d span the complementary plane: mu(a) b and -mu(a) a when a has both a
    scalar and a vector part, otherwise the complementary basis of the context.
    """
    if target not in ("plus", "minus"):
        raise ValidationError(f"target must be 'plus' or 'minus', got {target!r}")
    if abs(norm(a) - 1.0) > tol:
        raise ValidationError(f"a must be a unit quaternion, |a| = {norm(a)!r}")
    b = PureUnit.of(b)
    if abs(inner(a, b)) > tol:
        raise ValidationError(f"a and b must be orthogonal, <a,b> = {inner(a, b)!r}")
    f = mul(a, b)
    g = mul(conj(a), b)
    if target == "plus":
        g = -g
    # f, g are pure units up to rounding; project before validating
    f = PureUnit.from_vector(f.i, f.j, f.k) if abs(f.r) <= tol else PureUnit.of(f)
    g = PureUnit.from_vector(g.i, g.j, g.k) if abs(g.r) <= tol else PureUnit.of(g)
    ctx = make_context(f, g)
    if ctx.branch is Branch.GENERIC:
        m = mu(a)
        c, d = mul(m, b), -mul(m, a)
    else:
        c, d = ctx.plus_basis if target == "minus" else ctx.minus_basis
    # mu(a) is ill-conditioned for nearly real a, and a snapped context is only
    # within 1e-9 of the input plane; make c, d exactly complementary to (a, b)
    an = a.normalized()
    bn = _complement_unit(b, an)
    c = _complement_unit(c, an, bn)
    d = _complement_unit(d, an, bn, c)
    return Steering(f, g, c, d, target, ctx)


def plane_residual(q: Quaternion, plane) -> float:
    """Norm of the part of q orthogonal to the plane spanned by an orthonormal pair."""
    u, v = plane
    return norm(q - u * inner(q, u) - v * inner(q, v))


__all__ = [
    "Branch",
    "OpsContext",
    "SplitPair",
    "OpsCoefficients",
    "FactorForms",
    "Steering",
    "make_context",
    "split",
    "split_field",
    "coefficients",
    "reconstruct",
    "frame_coordinates",
    "factor_forms",
    "exp_sandwich",
    "rotation_to_axis",
    "axis_frame",
    "detfg_from_plane",
    "plane_residual",
]
