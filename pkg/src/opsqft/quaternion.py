"""Quaternion values, array helpers and the textual literal format.

Scalar work goes through the immutable :class:`Quaternion`; grids and clouds
are plain ``(..., 4)`` float arrays ordered ``(r, i, j, k)`` and handled by
the ``q*`` array functions below.
"""

from __future__ import annotations

import math
import re
from numbers import Real
from dataclasses import dataclass

import numpy as np

from .errors import AxisUndefinedError, QuaternionDomainError, QuaternionParseError, ValidationError

TOL = 1e-12


@dataclass(frozen=True, slots=True, eq=False)
class Quaternion:
    """q = r + i*i + j*j + k*k, Hamilton product with ijk = -1."""

    r: float = 0.0
    i: float = 0.0
    j: float = 0.0
    k: float = 0.0

    def __eq__(self, other):
        if isinstance(other, Quaternion):
            return (self.r, self.i, self.j, self.k) == (other.r, other.i, other.j, other.k)
        if isinstance(other, Real):
            return (self.r, self.i, self.j, self.k) == (other, 0.0, 0.0, 0.0)
        return NotImplemented

    def __hash__(self):
        return hash((self.r, self.i, self.j, self.k))

    @classmethod
    def from_array(cls, a) -> "Quaternion":
        a = np.asarray(a, dtype=float)
        if a.shape != (4,):
            raise ValidationError(f"expected 4 components, got shape {a.shape}")
        return cls(float(a[0]), float(a[1]), float(a[2]), float(a[3]))

    @classmethod
    def parse(cls, text: str) -> "Quaternion":
        return parse_quaternion(text)

    def __iter__(self):
        yield self.r
        yield self.i
        yield self.j
        yield self.k

    def as_array(self) -> np.ndarray:
        return np.array([self.r, self.i, self.j, self.k])

    def __add__(self, other):
        if isinstance(other, Quaternion):
            return Quaternion(self.r + other.r, self.i + other.i, self.j + other.j, self.k + other.k)
        if isinstance(other, Real):
            return Quaternion(self.r + other, self.i, self.j, self.k)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Quaternion):
            return Quaternion(self.r - other.r, self.i - other.i, self.j - other.j, self.k - other.k)
        if isinstance(other, Real):
            return Quaternion(self.r - other, self.i, self.j, self.k)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, Real):
            return Quaternion(other - self.r, -self.i, -self.j, -self.k)
        return NotImplemented

    def __neg__(self):
        return Quaternion(-self.r, -self.i, -self.j, -self.k)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return mul(self, other)
        if isinstance(other, Real):
            return Quaternion(self.r * other, self.i * other, self.j * other, self.k * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Real):
            return Quaternion(self.r * other, self.i * other, self.j * other, self.k * other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, Quaternion):
            return mul(self, inverse(other))
        if isinstance(other, Real):
            return Quaternion(self.r / other, self.i / other, self.j / other, self.k / other)
        return NotImplemented

    def __abs__(self):
        return norm(self)

    def __str__(self):
        return format_quaternion(self)

    def conj(self) -> "Quaternion":
        return conj(self)

    def norm(self) -> float:
        return norm(self)

    def normalized(self) -> "Quaternion":
        n = norm(self)
        if n == 0.0:
            raise QuaternionDomainError("cannot normalize the zero quaternion")
        return self / n

    def isclose(self, other: "Quaternion", tol: float = TOL) -> bool:
        return distance(self, other) <= tol * max(1.0, norm(self), norm(other))


@dataclass(frozen=True, slots=True, eq=False)
class PureUnit(Quaternion):
    """A pure unit quaternion, i.e. a square root of -1."""

    def __post_init__(self):
        if abs(self.r) > TOL:
            raise ValidationError(f"not pure: scalar part {self.r!r}")
        n2 = self.i * self.i + self.j * self.j + self.k * self.k
        if abs(n2 - 1.0) > 2 * TOL:
            raise ValidationError(f"not unit: norm {math.sqrt(n2)!r}")

    @classmethod
    def of(cls, q: Quaternion) -> "PureUnit":
        if isinstance(q, PureUnit):
            return q
        return cls(q.r, q.i, q.j, q.k)

    @classmethod
    def from_vector(cls, x: float, y: float, z: float) -> "PureUnit":
        n = math.sqrt(x * x + y * y + z * z)
        if n == 0.0:
            raise ValidationError("zero vector has no direction")
        return cls(0.0, x / n, y / n, z / n)


@dataclass(frozen=True, slots=True)
class AxisAngle:
    alpha: float
    axis: PureUnit

    def to_quaternion(self) -> Quaternion:
        return exp_pure(self.axis, self.alpha)


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


def mul(p: Quaternion, q: Quaternion) -> Quaternion:
    return Quaternion(
        p.r * q.r - p.i * q.i - p.j * q.j - p.k * q.k,
        p.r * q.i + p.i * q.r + p.j * q.k - p.k * q.j,
        p.r * q.j - p.i * q.k + p.j * q.r + p.k * q.i,
        p.r * q.k + p.i * q.j - p.j * q.i + p.k * q.r,
    )


def conj(q: Quaternion) -> Quaternion:
    return Quaternion(q.r, -q.i, -q.j, -q.k)


def norm(q: Quaternion) -> float:
    return math.sqrt(q.r * q.r + q.i * q.i + q.j * q.j + q.k * q.k)


def scalar_part(q: Quaternion) -> float:
    return q.r


def vector_part(q: Quaternion) -> Quaternion:
    return Quaternion(0.0, q.i, q.j, q.k)


def inverse(q: Quaternion) -> Quaternion:
    n2 = q.r * q.r + q.i * q.i + q.j * q.j + q.k * q.k
    if n2 == 0.0:
        raise QuaternionDomainError("the zero quaternion has no inverse")
    return Quaternion(q.r / n2, -q.i / n2, -q.j / n2, -q.k / n2)


def inner(p: Quaternion, q: Quaternion) -> float:
    """R^4 inner product, equal to the scalar part of p * conj(q)."""
    return p.r * q.r + p.i * q.i + p.j * q.j + p.k * q.k


def distance(p: Quaternion, q: Quaternion) -> float:
    return norm(p - q)


def is_orthogonal(p: Quaternion, q: Quaternion, tol: float = TOL) -> bool:
    if tol < 0:
        raise ValueError("tol must be non-negative")
    return abs(inner(p, q)) <= tol * max(1.0, norm(p) * norm(q))


def commutator(p: Quaternion, q: Quaternion) -> Quaternion:
    """pq - qp, evaluated as twice the cross product of the vector parts
    (no cancellation when the commutator is small)."""
    return Quaternion(
        0.0,
        2.0 * (p.j * q.k - p.k * q.j),
        2.0 * (p.k * q.i - p.i * q.k),
        2.0 * (p.i * q.j - p.j * q.i),
    )


def mu(q: Quaternion, tol: float = TOL) -> PureUnit:
    """Unit direction of the vector part."""
    v = math.sqrt(q.i * q.i + q.j * q.j + q.k * q.k)
    if v <= tol * max(1.0, norm(q)):
        raise AxisUndefinedError("axis undefined: vector part vanishes")
    return PureUnit(0.0, q.i / v, q.j / v, q.k / v)


def axis_angle(q: Quaternion, tol: float = 1e-9) -> AxisAngle:
    """Write a unit quaternion as cos(alpha) + axis*sin(alpha), alpha in [0, pi].

    Raises AxisUndefinedError for (numerically) real q; callers pick their own
    conventional axis there.
    """
    n = norm(q)
    if abs(n - 1.0) > tol:
        raise ValidationError(f"axis_angle needs a unit quaternion, |q| = {n!r}")
    axis = mu(q)
    s = math.sqrt(q.i * q.i + q.j * q.j + q.k * q.k)
    return AxisAngle(math.atan2(s, q.r), axis)


def exp_pure(f: Quaternion, alpha: float) -> Quaternion:
    """e^{alpha f} for a pure unit f."""
    c, s = math.cos(alpha), math.sin(alpha)
    return Quaternion(c, f.i * s, f.j * s, f.k * s)


# ---------------------------------------------------------------------------
# array helpers, components along the last axis

def qarray(q) -> np.ndarray:
    if isinstance(q, Quaternion):
        return q.as_array()
    return np.asarray(q, dtype=float)


def qmul(p, q) -> np.ndarray:
    """Broadcasting Hamilton product of (..., 4) arrays."""
    p = qarray(p)
    q = qarray(q)
    pr, pi, pj, pk = p[..., 0], p[..., 1], p[..., 2], p[..., 3]
    qr, qi, qj, qk = q[..., 0], q[..., 1], q[..., 2], q[..., 3]
    return np.stack(
        [
            pr * qr - pi * qi - pj * qj - pk * qk,
            pr * qi + pi * qr + pj * qk - pk * qj,
            pr * qj - pi * qk + pj * qr + pk * qi,
            pr * qk + pi * qj - pj * qi + pk * qr,
        ],
        axis=-1,
    )


def qconj(q) -> np.ndarray:
    q = qarray(q)
    return q * np.array([1.0, -1.0, -1.0, -1.0])


def qnorm(q) -> np.ndarray:
    return np.sqrt(np.sum(qarray(q) ** 2, axis=-1))


def qinner(p, q) -> np.ndarray:
    return np.sum(qarray(p) * qarray(q), axis=-1)


def qexp(f, theta) -> np.ndarray:
    """e^{theta f} for every entry of ``theta``; returns theta.shape + (4,)."""
    f = qarray(f)
    theta = np.asarray(theta, dtype=float)
    out = np.empty(theta.shape + (4,))
    out[..., 0] = np.cos(theta)
    s = np.sin(theta)
    out[..., 1] = s * f[1]
    out[..., 2] = s * f[2]
    out[..., 3] = s * f[3]
    return out


# ---------------------------------------------------------------------------
# literal format: "a+bi+cj+dk", plus small expressions such as "(i+j+k)/sqrt(3)"

def format_quaternion(q: Quaternion) -> str:
    r, i, j, k = (x + 0.0 for x in q)  # drops negative zeros
    return f"{r:.17g}{i:+.17g}i{j:+.17g}j{k:+.17g}k"


_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]+)|(?P<op>[-+*/()]))"
)
_UNITS = {"i": I, "j": J, "k": K}
_CONSTS = {"pi": math.pi}
_FUNCS = {"sqrt": math.sqrt, "cos": math.cos, "sin": math.sin}


def _tokenize(text: str):
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise QuaternionParseError(f"unexpected character at {pos} in {text!r}")
        pos = m.end()
        if m.group("num") is not None:
            out.append(("num", float(m.group("num"))))
        elif m.group("name") is not None:
            name = m.group("name")
            # "2ij" style concatenations are not accepted, "ij" would be ambiguous
            if name not in _UNITS and name not in _CONSTS and name not in _FUNCS:
                raise QuaternionParseError(f"unknown name {name!r} in {text!r}")
            out.append(("name", name))
        else:
            out.append(("op", m.group("op")))
    return out


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, op):
        if self.take() != ("op", op):
            raise QuaternionParseError(f"expected {op!r} in {self.text!r}")

    def parse(self) -> Quaternion:
        if not self.toks:
            raise QuaternionParseError("empty quaternion literal")
        q = self.expr()
        if self.pos != len(self.toks):
            raise QuaternionParseError(f"trailing input in {self.text!r}")
        return q

    def expr(self):
        q = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            q = q + rhs if op == "+" else q - rhs
        return q

    def term(self):
        q = self.unary()
        while True:
            kind, val = self.peek()
            if (kind, val) == ("op", "*"):
                self.take()
                q = q * self.unary()
            elif (kind, val) == ("op", "/"):
                self.take()
                d = self.unary()
                if norm(d) == 0.0:
                    raise QuaternionParseError(f"division by zero in {self.text!r}")
                q = q / d
            elif kind in ("num", "name") or (kind, val) == ("op", "("):
                q = q * self.atom()
            else:
                return q

    def unary(self):
        kind, val = self.peek()
        if (kind, val) == ("op", "-"):
            self.take()
            return -self.unary()
        if (kind, val) == ("op", "+"):
            self.take()
            return self.unary()
        return self.atom()

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return Quaternion(val)
        if kind == "name":
            if val in _UNITS:
                return _UNITS[val]
            if val in _CONSTS:
                return Quaternion(_CONSTS[val])
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            if norm(vector_part(arg)) != 0.0:
                raise QuaternionParseError(f"{val}() takes a real argument")
            try:
                return Quaternion(_FUNCS[val](arg.r))
            except ValueError as exc:
                raise QuaternionParseError(f"{val}({arg.r}) undefined") from exc
        if (kind, val) == ("op", "("):
            q = self.expr()
            self.expect(")")
            return q
        raise QuaternionParseError(f"unexpected token {val!r} in {self.text!r}")


def parse_quaternion(text: str) -> Quaternion:
    """Parse ``"a+bi+cj+dk"`` or a small arithmetic expression over 1, i, j, k.

    >>> parse_quaternion("1-2i+0.5j+3k")
    Quaternion(r=1.0, i=-2.0, j=0.5, k=3.0)
    """
    return _Parser(text).parse()
