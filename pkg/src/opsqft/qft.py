"""Discrete steerable quaternion Fourier transforms.

Four variants, with discrete phases a = 2 pi m u / M and b = 2 pi n v / N:

    standard                 sum e^{-f a} h e^{-g b}
    phase-angle              sum e^{-f (a+b)/2} h e^{-g (a-b)/2}
    conjugated               sum e^{-g b} conj(h) e^{-f a}   = conj(F_standard(-w))
    conjugated-phase-angle   sum e^{-g (a+b)/2} conj(h) e^{-f (a-b)/2}
                                                   = conj(F_phase-angle(-w1, w2))

``qft_naive`` evaluates the double sum literally.  ``qft_fast`` splits h into
h_+ and h_- with respect to (f, g); each part factors as (x + y f) * A with a
fixed anchor A, and the exponentials act on x + y f like complex phases, so
each part costs one ordinary complex 2D FFT.  Forward transforms are
unnormalized; inverses carry 1/(MN).
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass

import numpy as np
import scipy.fft

from .errors import ValidationError
from .ops import OpsContext, make_context, split_field
from .quaternion import PureUnit, Quaternion, qarray, qconj, qexp, qinner, qmul

# elements per chunk of the brute-force sum, bounds its working memory
_NAIVE_CHUNK = 1 << 18


class Variant(enum.Enum):
    STANDARD = "standard"
    PHASE_ANGLE = "phase-angle"
    CONJUGATED = "conjugated"
    CONJUGATED_PHASE_ANGLE = "conjugated-phase-angle"

    @classmethod
    def of(cls, v) -> "Variant":
        if isinstance(v, cls):
            return v
        try:
            return cls(str(v).lower().replace("_", "-"))
        except ValueError:
            raise ValidationError(f"unknown QFT variant {v!r}; choose from {[x.value for x in cls]}") from None

    @property
    def conjugating(self) -> bool:
        return self in (Variant.CONJUGATED, Variant.CONJUGATED_PHASE_ANGLE)

    @property
    def phase_angle(self) -> bool:
        return self in (Variant.PHASE_ANGLE, Variant.CONJUGATED_PHASE_ANGLE)


@dataclass(frozen=True)
class QField2D:
    """M x N grid of quaternions, ``data[m, n]`` is the sample at x = (m, n)."""

    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data, dtype=float)
        if data.ndim != 3 or data.shape[2] != 4 or data.shape[0] < 1 or data.shape[1] < 1:
            raise ValidationError(f"field data must have shape (M, N, 4), got {data.shape}")
        if not np.all(np.isfinite(data)):
            raise ValidationError("field contains non-finite entries")
        object.__setattr__(self, "data", data)

    @property
    def M(self) -> int:
        return self.data.shape[0]

    @property
    def N(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self):
        return self.data.shape[:2]


@dataclass(frozen=True)
class QSpectrum2D:
    """Transform output; ``data[u, v]`` is the value at frequency (u, v)."""

    data: np.ndarray
    variant: Variant
    f: PureUnit
    g: PureUnit

    @property
    def M(self) -> int:
        return self.data.shape[0]

    @property
    def N(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self):
        return self.data.shape[:2]


def _as_field(h) -> QField2D:
    return h if isinstance(h, QField2D) else QField2D(np.asarray(h, dtype=float))


def _workers():
    n = os.environ.get("OPSQFT_THREADS")
    return int(n) if n else 1


def neg_freq(H: np.ndarray, axes=(0, 1)) -> np.ndarray:
    """H evaluated at -omega on the periodic grid, index u -> (-u) mod M."""
    out = H
    for ax in axes:
        out = np.roll(np.flip(out, axis=ax), 1, axis=ax)
    return out


# ---------------------------------------------------------------------------
# brute force

def _kernels(variant: Variant, f, g):
    """(left axis, right axis, left angle coeffs, right angle coeffs).

    Angles are ca * a + cb * b for (ca, cb) as given.
    """
    if variant is Variant.STANDARD:
        return f, g, (-1.0, 0.0), (0.0, -1.0)
    if variant is Variant.PHASE_ANGLE:
        return f, g, (-0.5, -0.5), (-0.5, 0.5)
    if variant is Variant.CONJUGATED:
        # conj(F(-w)) puts the x2 phase on the left and the x1 phase on the right
        return g, f, (0.0, -1.0), (-1.0, 0.0)
    return g, f, (-0.5, -0.5), (-0.5, 0.5)


def qft_naive(h, f: Quaternion, g: Quaternion, variant="standard") -> QSpectrum2D:
    """Literal O((MN)^2) double sum; the oracle for every fast path."""
    h = _as_field(h)
    variant = Variant.of(variant)
    # same pair as the fast path: g within 1e-9 of +-f is taken as exactly +-f
    ctx = make_context(f, g)
    f, g = ctx.f, ctx.g
    M, N = h.shape
    data = qconj(h.data) if variant.conjugating else h.data
    lax, rax, (la, lb), (ra, rb) = _kernels(variant, qarray(f), qarray(g))

    m = np.arange(M)
    n = np.arange(N)
    # phases reduced mod 2M (2N) keep the half-angle kernels exact
    a_all = 2.0 * np.pi * (np.outer(np.arange(M), m) % (2 * M)) / M  # [u, m]
    b_all = 2.0 * np.pi * (np.outer(np.arange(N), n) % (2 * N)) / N  # [v, n]

    out = np.empty((M, N, 4))
    rows = max(1, _NAIVE_CHUNK // (N * M * N))
    for u0 in range(0, M, rows):
        us = slice(u0, min(M, u0 + rows))
        a = a_all[us][:, None, :, None]  # [u, ., m, .]
        b = b_all[None, :, None, :]  # [., v, ., n]
        left = qexp(lax, la * a + lb * b)
        right = qexp(rax, ra * a + rb * b)
        terms = qmul(qmul(left, data[None, None]), right)
        out[us] = terms.sum(axis=(2, 3))
    return QSpectrum2D(out, variant, f, g)


# ---------------------------------------------------------------------------
# fast path

def _to_complex(part: np.ndarray, anchor: Quaternion, f: Quaternion) -> np.ndarray:
    """Coordinates z = x + iy of part = (x + y f) * anchor."""
    w = qmul(part, qconj(anchor))
    return w[..., 0] + 1j * qinner(w, qarray(f))


def _from_complex(z: np.ndarray, anchor: Quaternion, f: Quaternion) -> np.ndarray:
    fa = qarray(f)
    w = np.zeros(z.shape + (4,))
    w[..., 0] = z.real
    w[..., 1:] = z.imag[..., None] * fa[1:]
    return qmul(w, anchor)


def _quasi_complex(z_plus, z_minus, phase_angle: bool):
    """Complex spectra of the two split coordinates under
    sum e^{-i (a -+ b)} z (standard) or sum e^{-i b} z_+, sum e^{-i a} z_- (phase angle)."""
    w = _workers()
    Fp = scipy.fft.fft2(z_plus, workers=w)
    Fm = scipy.fft.fft2(z_minus, workers=w)
    if phase_angle:
        M, N = z_plus.shape
        Zp = np.broadcast_to(Fp[0:1, :], (M, N)).copy()
        Zm = np.broadcast_to(Fm[:, 0:1], (M, N)).copy()
        return Zp, Zm
    # e^{+i b} on the second axis: index reversal of the forward FFT
    return neg_freq(Fp, axes=(1,)), Fm


def split_transform(h, ctx: OpsContext, variant="standard"):
    """Transforms of h_+ and h_- separately; they sum to the full transform."""
    h = _as_field(h)
    variant = Variant.of(variant)
    f = ctx.f
    hp, hm = split_field(ctx, h.data)
    zp = _to_complex(hp, ctx.anchor_plus, f)
    zm = _to_complex(hm, ctx.anchor_minus, f)
    if variant.conjugating:
        # F_c(u, v) = conj(F(-u, -v)),  F_cD(u, v) = conj(F_D(-u, v))
        axes = (0,) if variant.phase_angle else (0, 1)
        Zp, Zm = _quasi_complex(zp, zm, variant.phase_angle)
        Hp = qconj(neg_freq(_from_complex(Zp, ctx.anchor_plus, f), axes))
        Hm = qconj(neg_freq(_from_complex(Zm, ctx.anchor_minus, f), axes))
        return Hp, Hm
    Zp, Zm = _quasi_complex(zp, zm, variant.phase_angle)
    return _from_complex(Zp, ctx.anchor_plus, f), _from_complex(Zm, ctx.anchor_minus, f)


def qft_fast(h, f: Quaternion, g: Quaternion, variant="standard", ctx: OpsContext = None) -> QSpectrum2D:
    variant = Variant.of(variant)
    if ctx is None:
        ctx = make_context(f, g)
    Hp, Hm = split_transform(h, ctx, variant)
    return QSpectrum2D(Hp + Hm, variant, ctx.f, ctx.g)


def qft(h, f, g, variant="standard", method: str = "fast") -> QSpectrum2D:
    if method == "fast":
        return qft_fast(h, f, g, variant)
    if method == "naive":
        return qft_naive(h, f, g, variant)
    raise ValidationError(f"unknown method {method!r}")


def iqft(H: QSpectrum2D, ctx: OpsContext = None) -> QField2D:
    """Inverse of :func:`qft_fast` with 1/(MN) normalization.

    Standard and conjugated variants are inverted exactly.  The phase-angle
    variants collapse one axis per split part (h_+ only sees the x2 phase,
    h_- only the x1 phase), so no exact inverse exists; here the least-squares
    (Moore-Penrose) inverse is returned, which reproduces h whenever h_+ is
    constant along m and h_- constant along n, and otherwise gives the
    field with h_+ averaged over m and h_- averaged over n.
    """
    variant = H.variant
    if ctx is None:
        ctx = make_context(H.f, H.g)
    data = H.data
    if variant.conjugating:
        axes = (0,) if variant.phase_angle else (0, 1)
        data = qconj(neg_freq(data, axes))
    f = ctx.f
    # split in the spectral domain: transform and split commute
    Hp, Hm = split_field(ctx, data)
    Zp = _to_complex(Hp, ctx.anchor_plus, f)
    Zm = _to_complex(Hm, ctx.anchor_minus, f)
    w = _workers()
    M, N = data.shape[:2]
    if variant.phase_angle:
        row = Zp.mean(axis=0)  # depends on v only
        col = Zm.mean(axis=1)  # depends on u only
        zp = np.broadcast_to(scipy.fft.ifft(row, workers=w)[None, :] / M, (M, N))
        zm = np.broadcast_to(scipy.fft.ifft(col, workers=w)[:, None] / N, (M, N))
    else:
        zp = scipy.fft.ifft2(neg_freq(Zp, axes=(1,)), workers=w)
        zm = scipy.fft.ifft2(Zm, workers=w)
    h = _from_complex(zp, ctx.anchor_plus, f) + _from_complex(zm, ctx.anchor_minus, f)
    return QField2D(h)


def parseval_check(h, ctx: OpsContext, variant="standard"):
    """(sum |H|^2, MN sum |h|^2) for the fast transform of h."""
    h = _as_field(h)
    H = qft_fast(h, ctx.f, ctx.g, variant, ctx=ctx)
    lhs = float(np.sum(H.data ** 2))
    rhs = float(h.M * h.N * np.sum(h.data ** 2))
    return lhs, rhs


def relative_error(a, b) -> float:
    """max |a - b| / max |b| over the grid (absolute when b vanishes)."""
    a = a.data if isinstance(a, (QField2D, QSpectrum2D)) else np.asarray(a)
    b = b.data if isinstance(b, (QField2D, QSpectrum2D)) else np.asarray(b)
    diff = float(np.max(np.sqrt(np.sum((a - b) ** 2, axis=-1)), initial=0.0))
    scale = float(np.max(np.sqrt(np.sum(b ** 2, axis=-1)), initial=0.0))
    return diff / scale if scale > 0 else diff


__all__ = [
    "Variant",
    "QField2D",
    "QSpectrum2D",
    "qft_naive",
    "qft_fast",
    "qft",
    "split_transform",
    "iqft",
    "parseval_check",
    "relative_error",
    "neg_freq",
]
