import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from opsqft.errors import BranchError, DegenerateError, ValidationError
from opsqft.ops import (
    Branch,
    OpsContext,
    axis_frame,
    coefficients,
    detfg_from_plane,
    exp_sandwich,
    factor_forms,
    frame_coordinates,
    make_context,
    plane_residual,
    reconstruct,
    rotation_to_axis,
    split,
    split_field,
)
from opsqft.quaternion import I, J, K, ONE, PureUnit, Quaternion, exp_pure, inner, inverse, mul, norm
from opsqft.quaternion import parse_quaternion as parse

from conftest import angles, fg_pairs, pure_units, qclose, quaternions, unit_quaternions

S3 = PureUnit.from_vector(1, 1, 1)


def _assert_basis_invariants(ctx):
    b = ctx.basis
    for x in range(4):
        assert abs(norm(b[x]) - 1.0) <= 1e-12
        for y in range(x + 1, 4):
            assert abs(inner(b[x], b[y])) <= 1e-12
    for k, sign in zip(range(4), (1, 1, -1, -1)):
        assert qclose(mul(mul(ctx.f, b[k]), ctx.g), b[k] * sign)


# --- make_context ---------------------------------------------------------

def test_context_i_j():
    ctx = make_context(I, J)
    assert ctx.branch is Branch.GENERIC
    s = 1 / math.sqrt(2)
    assert qclose(ctx.basis[0], (I - J) * s)
    assert qclose(ctx.basis[1], (1 + K) * s)
    assert qclose(ctx.basis[2], (I + J) * s)
    assert qclose(ctx.basis[3], (1 - K) * s)
    assert ctx.frame_labels == ("c", "d", "b", "a")


def test_context_i_i():
    ctx = make_context(I, I)
    assert ctx.branch is Branch.G_EQUALS_F
    assert ctx.minus_basis == (ONE, I)
    assert qclose(ctx.plus_basis[0], J) and qclose(ctx.plus_basis[1], K)


def test_context_i_minus_i():
    ctx = make_context(I, -I)
    assert ctx.branch is Branch.G_EQUALS_MINUS_F
    assert ctx.plus_basis == (ONE, I)
    assert qclose(ctx.minus_basis[0], J) and qclose(ctx.minus_basis[1], K)


def test_context_rejects_non_pure_units():
    with pytest.raises(ValidationError):
        make_context(Quaternion(0.1, 1), J)
    with pytest.raises(ValidationError):
        make_context(I, J * 2)


def test_branch_thresholds():
    f = PureUnit.from_vector(0, 0, 1)
    near = PureUnit.from_vector(5e-10, 0, 1)
    assert make_context(f, near).branch is Branch.G_EQUALS_F
    assert make_context(f, -near).branch is Branch.G_EQUALS_MINUS_F
    mid = PureUnit.from_vector(1e-7, 0, 1)
    ctx = make_context(f, mid)
    assert ctx.branch is Branch.GENERIC and ctx.ill_conditioned
    assert not make_context(I, J).ill_conditioned
    _assert_basis_invariants(ctx)


@given(fg_pairs())
def test_basis_invariants(fg):
    _assert_basis_invariants(make_context(*fg))


def test_context_dict_round_trip():
    ctx = make_context(S3, J)
    d = ctx.to_dict()
    assert OpsContext.from_dict(d) == ctx
    d["branch"] = "g=f"
    with pytest.raises(ValidationError):
        OpsContext.from_dict(d)


# --- split ----------------------------------------------------------------

def test_split_values():
    ctx = make_context(I, J)
    sp = split(ctx, ONE)
    assert qclose(sp.plus, (1 + K) * 0.5) and qclose(sp.minus, (1 - K) * 0.5)
    sp = split(ctx, I)
    assert qclose(sp.plus, (I - J) * 0.5) and qclose(sp.minus, (I + J) * 0.5)
    sp = split(ctx, Quaternion())
    assert sp.plus == Quaternion() and sp.minus == Quaternion()


@given(fg_pairs(), quaternions())
def test_split_properties(fg, q):
    ctx = make_context(*fg)
    f, g = ctx.f, ctx.g
    sp = split(ctx, q)
    scale = max(1.0, norm(q))
    assert qclose(sp.plus + sp.minus, q)
    assert abs(norm(q) ** 2 - norm(sp.plus) ** 2 - norm(sp.minus) ** 2) <= 1e-12 * scale**2
    assert qclose(mul(mul(f, sp.plus), g), sp.plus, 1e-12 * scale)
    assert qclose(mul(mul(f, sp.minus), g), -sp.minus, 1e-12 * scale)
    assert qclose(mul(mul(f, mul(mul(f, q), g)), g), q)
    assert plane_residual(sp.plus, ctx.plus_basis) <= 1e-12 * scale
    assert plane_residual(sp.minus, ctx.minus_basis) <= 1e-12 * scale


@given(fg_pairs(), quaternions(), quaternions())
def test_split_parts_orthogonal(fg, p, q):
    ctx = make_context(*fg)
    assert abs(inner(split(ctx, p).plus, split(ctx, q).minus)) <= 1e-12 * max(1.0, norm(p) * norm(q))


def test_split_field_matches_scalar():
    rng = np.random.default_rng(3)
    ctx = make_context(S3, PureUnit.from_vector(1, -2, 0.5))
    h = rng.standard_normal((3, 5, 4))
    plus, minus = split_field(ctx, h)
    sp = split(ctx, Quaternion(*h[2, 4]))
    assert np.allclose(plus[2, 4], sp.plus.as_array(), atol=1e-15)
    assert np.allclose(minus[2, 4], sp.minus.as_array(), atol=1e-15)


# --- coefficients / factor forms -----------------------------------------

def test_coefficients_i_j():
    q = Quaternion(0.3, -1.2, 2.0, 0.7)
    c = coefficients(make_context(I, J), q)
    expected = (0.5 * (q.r + q.k), 0.5 * (q.i - q.j), 0.5 * (q.r - q.k), 0.5 * (q.i + q.j))
    assert np.allclose(tuple(c), expected, atol=1e-15)


def test_coefficients_basis_element():
    f, g = S3, PureUnit.from_vector(1, -2, 0.5)
    c = coefficients(make_context(f, g), 1 + mul(f, g))
    assert np.allclose(tuple(c), (1, 0, 0, 0), atol=1e-12)


def test_coefficients_degenerate_branch_signals():
    ctx = make_context(I, I)
    with pytest.raises(BranchError):
        coefficients(ctx, ONE)
    with pytest.raises(BranchError):
        factor_forms(ctx, ONE)
    # the branch basis projection is the documented alternative
    q = Quaternion(1, 2, 3, 4)
    coords = frame_coordinates(ctx, q)
    assert qclose(sum((b * c for b, c in zip(ctx.frame, coords)), Quaternion()), q)


@given(fg_pairs(), quaternions())
def test_coefficients_reconstruct(fg, q):
    ctx = make_context(*fg)
    if ctx.branch is not Branch.GENERIC or ctx.ill_conditioned:
        return
    # conditioning of the un-normalized basis degrades as g -> +-f
    cond = 1.0 / min(norm(fg[0] - fg[1]), norm(fg[0] + fg[1])) ** 2
    assert qclose(reconstruct(ctx, coefficients(ctx, q)), q, 1e-12 * cond)


def test_factor_forms_examples():
    f, g = S3, PureUnit.from_vector(1, -2, 0.5)
    ctx = make_context(f, g)
    fg = mul(f, g)
    ff = factor_forms(ctx, f - g)
    assert qclose(ff.plus_left, mul(f, 1 + fg))
    assert qclose(ff.plus_left, f - g)
    ff = factor_forms(ctx, f + g)
    assert qclose(ff.minus_left, mul(f, 1 - fg))
    assert qclose(ff.minus_right, mul(1 - fg, g))
    ff = factor_forms(ctx, Quaternion())
    assert all(x.norm() == 0 for x in (ff.plus_left, ff.plus_right, ff.minus_left, ff.minus_right))


@given(fg_pairs(), quaternions())
def test_factor_forms_reproduce_split(fg, q):
    ctx = make_context(*fg)
    if ctx.branch is not Branch.GENERIC or ctx.ill_conditioned:
        return
    cond = 1.0 / min(norm(fg[0] - fg[1]), norm(fg[0] + fg[1])) ** 2
    sp = split(ctx, q)
    ff = factor_forms(ctx, q)
    tol = 1e-12 * cond
    assert qclose(ff.plus_left, sp.plus, tol) and qclose(ff.plus_right, sp.plus, tol)
    assert qclose(ff.minus_left, sp.minus, tol) and qclose(ff.minus_right, sp.minus, tol)


# --- exponential factors --------------------------------------------------

def test_exp_sandwich_special_angles():
    ctx = make_context(S3, J)
    q = Quaternion(1, -2, 0.5, 3)
    assert qclose(exp_sandwich(0, 0, ctx, q), q)
    assert qclose(exp_sandwich(math.pi / 2, math.pi / 2, ctx, q), mul(mul(S3, q), J))


@given(fg_pairs(), quaternions(), angles, angles)
def test_exponential_factors(fg, q, a, b):
    ctx = make_context(*fg)
    f, g = ctx.f, ctx.g
    sp = split(ctx, q)
    tol = 1e-12 * max(1.0, norm(q))
    for part, s in ((sp.plus, 1), (sp.minus, -1)):
        lhs = mul(mul(exp_pure(f, a), part), exp_pure(g, b))
        assert qclose(lhs, mul(part, exp_pure(g, b - s * a)), tol)
        assert qclose(lhs, mul(exp_pure(f, a - s * b), part), tol)
    assert qclose(exp_sandwich(a, b, ctx, q), mul(mul(exp_pure(f, a), q), exp_pure(g, b)), tol)


# --- rotation to axis -----------------------------------------------------

def test_rotation_to_axis_values():
    R = rotation_to_axis(I)
    assert R == Quaternion(-2)
    R = rotation_to_axis(S3)
    assert qclose(mul(mul(inverse(R), I), R), S3)
    with pytest.raises(DegenerateError):
        rotation_to_axis(-I)


@given(pure_units())
def test_axis_frame(f):
    e, fp, jp, kp = axis_frame(f)
    assert e == ONE and fp == f
    assert qclose(mul(f, jp), kp)
    assert qclose(mul(jp, f), -kp)
    for x, y in ((jp, kp), (f, jp), (f, kp)):
        assert abs(inner(x, y)) <= 1e-12
    assert abs(jp.r) <= 1e-12


def test_axis_frame_fallback_for_minus_i():
    e, fp, jp, kp = axis_frame(-I)
    assert qclose(mul(-I, jp), kp)
    assert abs(inner(jp, I)) <= 1e-12 and abs(inner(kp, I)) <= 1e-12
    _assert_basis_invariants(make_context(-I, -I))


# --- steering -------------------------------------------------------------

def test_detfg_reference_values():
    a = parse("1/sqrt(2)+0.5i-0.5j")
    b = parse("(i+j+k)/sqrt(3)")
    st_ = detfg_from_plane(a, b, "minus")
    ctx = make_context(st_.f, st_.g)
    assert ctx.branch is Branch.GENERIC
    assert plane_residual(a, ctx.minus_basis) <= 1e-12
    assert plane_residual(b, ctx.minus_basis) <= 1e-12
    assert plane_residual(st_.c, ctx.plus_basis) <= 1e-12
    assert plane_residual(st_.d, ctx.plus_basis) <= 1e-12


def test_detfg_real_a():
    b = S3
    st_ = detfg_from_plane(ONE, b, "minus")
    assert st_.f == b and st_.g == b
    assert st_.context.branch is Branch.G_EQUALS_F
    assert st_.context.minus_basis == (ONE, b)


def test_detfg_pure_a():
    a = PureUnit.from_vector(1, -1, 0)
    st_ = detfg_from_plane(a, S3, "minus")
    assert qclose(st_.g, -st_.f)
    assert st_.context.branch is Branch.G_EQUALS_MINUS_F
    assert plane_residual(a, st_.context.minus_basis) <= 1e-12
    assert plane_residual(S3, st_.context.minus_basis) <= 1e-12
    assert {st_.c, st_.d} == {ONE, st_.f}


def test_detfg_validation():
    with pytest.raises(ValidationError):
        detfg_from_plane(Quaternion(2), I)
    with pytest.raises(ValidationError):
        detfg_from_plane(ONE, Quaternion(0.5, 1))
    with pytest.raises(ValidationError):
        detfg_from_plane((ONE + I).normalized(), I)
    with pytest.raises(ValidationError):
        detfg_from_plane(ONE, I, "sideways")


@st.composite
def orthogonal_pairs(draw):
    a = draw(unit_quaternions())
    b = draw(pure_units())
    # make b orthogonal to a within pure quaternions
    av = Quaternion(0, a.i, a.j, a.k)
    b2 = b - av * (inner(b, av) / norm(av) ** 2) if norm(av) > 0 else b
    if norm(b2) < 1e-3:
        return ONE, b
    return a, PureUnit.from_vector(b2.i, b2.j, b2.k)


@given(orthogonal_pairs(), st.sampled_from(["plus", "minus"]))
def test_detfg_round_trip(ab, target):
    a, b = ab
    s = detfg_from_plane(a, b, target)
    ctx = s.context
    own, other = (ctx.minus_basis, ctx.plus_basis) if target == "minus" else (ctx.plus_basis, ctx.minus_basis)
    # within the degenerate threshold g is snapped onto +-f, moving the planes by up to |g -+ f|
    tol = 1e-11 + (norm(s.g - ctx.g) if ctx.branch is not Branch.GENERIC else 0.0)
    for x in (a, b):
        assert plane_residual(x, own) <= tol
        assert abs(inner(x, other[0])) <= tol and abs(inner(x, other[1])) <= tol
    for x in (s.c, s.d):
        assert abs(norm(x) - 1) <= 1e-11
        assert abs(inner(x, a)) <= 1e-11 and abs(inner(x, b)) <= 1e-11
    assert abs(inner(s.c, s.d)) <= 1e-11
