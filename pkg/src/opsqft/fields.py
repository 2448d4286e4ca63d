"""Quaternion signals in and out: PPM colour images, random unit clouds,
scatter projections, and JSON/CSV field and spectrum files."""

from __future__ import annotations

import csv
import json
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import FormatError, ValidationError
from .ops import OpsContext, split_field
from .qft import QField2D, QSpectrum2D, Variant
from .quaternion import PureUnit, Quaternion, qarray, qinner


# ---------------------------------------------------------------------------
# PPM (P6, 8 bit)

def _read_header_tokens(buf: bytes, count: int):
    tokens, pos = [], 0
    while len(tokens) < count:
        while pos < len(buf) and buf[pos:pos + 1].isspace():
            pos += 1
        if pos < len(buf) and buf[pos:pos + 1] == b"#":
            while pos < len(buf) and buf[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(buf) and not buf[pos:pos + 1].isspace() and buf[pos:pos + 1] != b"#":
            pos += 1
        if start == pos:
            raise FormatError("truncated PPM header")
        tokens.append(buf[start:pos])
    # exactly one whitespace byte separates the header from the raster
    if pos >= len(buf) or not buf[pos:pos + 1].isspace():
        raise FormatError("malformed PPM header")
    return tokens, pos + 1


def read_ppm(path) -> np.ndarray:
    """Read a binary P6 pixmap with maxval 255 as a (height, width, 3) uint8 array."""
    buf = Path(path).read_bytes()
    tokens, offset = _read_header_tokens(buf, 4)
    if tokens[0] != b"P6":
        raise FormatError(f"not a binary PPM (magic {tokens[0]!r})")
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise FormatError("non-numeric PPM header field") from None
    if width < 1 or height < 1:
        raise FormatError("PPM dimensions must be positive")
    if maxval != 255:
        raise FormatError(f"only 8-bit PPM (maxval 255) is supported, got {maxval}")
    raster = buf[offset:offset + width * height * 3]
    if len(raster) != width * height * 3:
        raise FormatError("PPM raster is truncated")
    return np.frombuffer(raster, dtype=np.uint8).reshape(height, width, 3).copy()


def write_ppm(path, pixels: np.ndarray):
    pixels = np.asarray(pixels, dtype=np.uint8)
    height, width, _ = pixels.shape
    with open(path, "wb") as fh:
        fh.write(b"P6\n%d %d\n255\n" % (width, height))
        fh.write(pixels.tobytes())


def load_image(path) -> QField2D:
    """Pixel (r, g, b) -> pure quaternion (r i + g j + b k) / 255.

    The field is indexed [row, column]: m runs down the image, n across.
    """
    px = read_ppm(path).astype(float) / 255.0
    data = np.zeros(px.shape[:2] + (4,))
    data[..., 1:] = px
    return QField2D(data)


def save_image(field, path):
    data = field.data if isinstance(field, QField2D) else np.asarray(field, dtype=float)
    if np.max(np.abs(data[..., 0]), initial=0.0) > 1e-6:
        warnings.warn("dropping non-zero scalar part when writing an RGB image", stacklevel=2)
    px = np.rint(np.clip(data[..., 1:], 0.0, 1.0) * 255.0).astype(np.uint8)
    write_ppm(path, px)


# ---------------------------------------------------------------------------
# random clouds and scatter projections

@dataclass(frozen=True)
class QCloud:
    points: np.ndarray  # (n, 4), unit rows
    seed: int

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class ScatterProjection:
    labels: tuple
    coords: np.ndarray  # (n, 2)

    @property
    def name(self) -> str:
        return f"{{{self.labels[0]},{self.labels[1]}}}"


def random_cloud(n: int, seed: int = 0) -> QCloud:
    """n points uniform on the unit 3-sphere.

    Four standard normals per point from numpy's PCG64 generator seeded with
    ``seed``, then normalized; identical output for identical (n, seed).
    """
    if n < 1:
        raise ValidationError("n must be at least 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    pts = rng.standard_normal((n, 4))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    return QCloud(pts, seed)


# {c,d} {c,b} {c,a} {d,b} {b,a} {a,d}  resp.  {e,i'} {e,j'} {e,k'} {i',j'} {j',k'} {k',i'}
PROJECTION_PLANES = [(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 1)]


def scatter_projections(cloud, ctx: OpsContext, part: str = "plus"):
    """Split every cloud point and project the chosen part onto the six
    coordinate planes of the orthonormal frame."""
    if part not in ("plus", "minus"):
        raise ValidationError(f"part must be 'plus' or 'minus', got {part!r}")
    pts = cloud.points if isinstance(cloud, QCloud) else np.asarray(cloud, dtype=float).reshape(-1, 4)
    plus, minus = split_field(ctx, pts)
    chosen = plus if part == "plus" else minus
    frame = np.array([qarray(b) for b in ctx.frame])
    coords = chosen @ frame.T if len(chosen) else np.zeros((0, 4))
    out = []
    for a, b in PROJECTION_PLANES:
        out.append(ScatterProjection((ctx.frame_labels[a], ctx.frame_labels[b]), coords[:, [a, b]]))
    return out


def write_scatter_csv(path, projections):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["plane", "x", "y"])
        for p in projections:
            for x, y in p.coords:
                w.writerow([p.name, repr(float(x)), repr(float(y))])


# ---------------------------------------------------------------------------
# JSON / CSV fields and spectra

def field_to_dict(field: QField2D) -> dict:
    return {"kind": "field", "M": field.M, "N": field.N, "data": field.data.tolist()}


def spectrum_to_dict(spectrum: QSpectrum2D) -> dict:
    return {
        "kind": "spectrum",
        "M": spectrum.M,
        "N": spectrum.N,
        "f": list(spectrum.f),
        "g": list(spectrum.g),
        "variant": spectrum.variant.value,
        "normalization": "forward-1",
        "data": spectrum.data.tolist(),
    }


def _from_dict(d: dict):
    try:
        try:
            data = np.asarray(d["data"], dtype=float)
        except ValueError:
            raise FormatError("grid data is not a rectangular array of numbers") from None
        kind = d.get("kind", "field")
        if data.shape[:2] != (d.get("M", data.shape[0]), d.get("N", data.shape[1])):
            raise FormatError("declared M, N do not match data")
        if kind == "field":
            return QField2D(data)
        if kind == "spectrum":
            return QSpectrum2D(
                data, Variant.of(d["variant"]), PureUnit.of(Quaternion(*d["f"])), PureUnit.of(Quaternion(*d["g"]))
            )
    except (KeyError, TypeError, IndexError) as exc:
        raise FormatError(f"malformed quaternion grid document: {exc}") from None
    raise FormatError(f"unknown document kind {kind!r}")


def _write_csv(path, obj):
    meta = spectrum_to_dict(obj) if isinstance(obj, QSpectrum2D) else field_to_dict(obj)
    del meta["data"]
    idx = ("u", "v") if isinstance(obj, QSpectrum2D) else ("m", "n")
    with open(path, "w", newline="") as fh:
        fh.write("# " + json.dumps(meta) + "\n")
        w = csv.writer(fh)
        w.writerow([*idx, "r", "i", "j", "k"])
        for (a, b), q in zip(np.ndindex(obj.shape), obj.data.reshape(-1, 4)):
            w.writerow([a, b, *(repr(float(x)) for x in q)])


def _read_csv(path):
    with open(path, newline="") as fh:
        first = fh.readline()
        if not first.startswith("#"):
            raise FormatError("CSV grid needs a leading '# {metadata}' line")
        rows = list(csv.DictReader(fh))
    try:
        meta = json.loads(first[1:])
        M, N = int(meta["M"]), int(meta["N"])
        data = np.zeros((M, N, 4))
        seen = np.zeros((M, N), dtype=bool)
        ia, ib = ("u", "v") if meta.get("kind") == "spectrum" else ("m", "n")
        for row in rows:
            a, b = int(row[ia]), int(row[ib])
            data[a, b] = [float(row[c]) for c in ("r", "i", "j", "k")]
            seen[a, b] = True
    except (KeyError, ValueError, TypeError, IndexError) as exc:
        raise FormatError(f"malformed CSV grid: {exc}") from None
    if not seen.all():
        raise FormatError("CSV grid is missing entries")
    meta["data"] = data
    return _from_dict(meta)


def write_grid(path, obj):
    """Write a QField2D or QSpectrum2D as .json, .csv, or (fields only) .ppm."""
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".json":
        d = spectrum_to_dict(obj) if isinstance(obj, QSpectrum2D) else field_to_dict(obj)
        path.write_text(json.dumps(d))
    elif suffix == ".csv":
        _write_csv(path, obj)
    elif suffix in (".ppm", ".pnm"):
        if isinstance(obj, QSpectrum2D):
            raise FormatError("spectra cannot be written as images")
        save_image(obj, path)
    else:
        raise FormatError(f"unsupported output format {suffix!r}")


def read_grid(path):
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".json":
        try:
            d = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON: {exc}") from None
        return _from_dict(d)
    if suffix == ".csv":
        return _read_csv(path)
    if suffix in (".ppm", ".pnm"):
        return load_image(path)
    raise FormatError(f"unsupported input format {suffix!r}")


def max_off_plane(points: np.ndarray, plane) -> float:
    """Largest distance of the (n, 4) points from the plane spanned by an orthonormal pair."""
    if len(points) == 0:
        return 0.0
    u, v = qarray(plane[0]), qarray(plane[1])
    res = points - np.outer(qinner(points, u), u) - np.outer(qinner(points, v), v)
    return float(np.max(np.linalg.norm(res, axis=1)))
