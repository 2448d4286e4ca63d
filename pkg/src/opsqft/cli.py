"""Command line interface: ``opsqft <subcommand> ...``.

Diagnostics go to stdout as JSON lines, data only to the ``--out`` paths.
Exit status: 0 success, 1 validation error, 2 I/O or format error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import fields, geometry, ops, qft
from .errors import FormatError, OpsQftError
from .quaternion import PureUnit, Quaternion, format_quaternion, parse_quaternion

EXIT_OK, EXIT_VALIDATION, EXIT_IO = 0, 1, 2
NAIVE_LIMIT = 64 * 64


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _q(text: str) -> Quaternion:
    return parse_quaternion(text)


def _qs(q) -> str:
    return format_quaternion(q)


def _emit(**payload):
    print(json.dumps(payload), flush=True)


def cmd_split(args):
    ctx = ops.make_context(_q(args.f), _q(args.g))
    field = fields.read_grid(args.inp)
    if not isinstance(field, qft.QField2D):
        raise OpsQftError("split expects a field, not a spectrum")
    plus, minus = ops.split_field(ctx, field.data)
    fields.write_grid(args.out_plus, qft.QField2D(plus))
    fields.write_grid(args.out_minus, qft.QField2D(minus))
    n2 = np.sum(field.data ** 2, axis=-1)
    resid = np.abs(n2 - np.sum(plus ** 2, axis=-1) - np.sum(minus ** 2, axis=-1))
    _emit(
        command="split",
        branch=ctx.branch.value,
        ill_conditioned=ctx.ill_conditioned,
        shape=list(field.shape),
        modulus_residual_max=float(resid.max()),
        modulus_residual_rel=float(resid.max() / max(1.0, n2.max())),
    )


def cmd_detfg(args):
    st = ops.detfg_from_plane(_q(args.a), _q(args.b), args.target)
    _emit(
        command="detfg",
        target=st.target,
        f=_qs(st.f),
        g=_qs(st.g),
        c=_qs(st.c),
        d=_qs(st.d),
        context=st.context.to_dict(),
    )


def cmd_geom(args):
    hint = _q(args.axis) if args.axis else None
    rr = geometry.make_rotary_reflection(_q(args.d), _q(args.t), axis_hint=hint)
    _emit(
        command="geom",
        invariant_line=_qs(rr.invariant_line),
        axis=_qs(rr.axis),
        plane_basis=None if rr.plane_basis is None else [_qs(v) for v in rr.plane_basis],
        r=rr.ratio,
        angle=rr.angle,
        degenerate=rr.degenerate,
        common_axis=None if rr.common_axis is None else _qs(rr.common_axis),
    )


def cmd_qft(args):
    variant = qft.Variant.of(args.variant)
    f, g = PureUnit.of(_q(args.f)), PureUnit.of(_q(args.g))
    field = fields.read_grid(args.inp)
    if not isinstance(field, qft.QField2D):
        raise OpsQftError("qft expects a field, not a spectrum")
    method = "naive" if args.naive else "fast"
    if method == "naive" and field.M * field.N > NAIVE_LIMIT and not args.force:
        raise OpsQftError(f"naive transform above 64x64 refused without --force ({field.M}x{field.N})")
    t0 = time.perf_counter()
    H = qft.qft(field, f, g, variant, method)
    elapsed = time.perf_counter() - t0
    fields.write_grid(args.out, H)
    info = dict(command="qft", variant=variant.value, method=method, shape=list(field.shape), seconds=elapsed)
    if args.check:
        other = qft.qft(field, f, g, variant, "fast" if method == "naive" else "naive")
        info["cross_path_rel_error"] = qft.relative_error(H, other)
    _emit(**info)


def cmd_iqft(args):
    H = fields.read_grid(args.inp)
    if not isinstance(H, qft.QSpectrum2D):
        raise OpsQftError("iqft expects a spectrum document")
    h = qft.iqft(H)
    fields.write_grid(args.out, h)
    _emit(command="iqft", variant=H.variant.value, shape=list(h.shape), exact=not H.variant.phase_angle)


def _scatter_context(args):
    if args.a is not None or args.b is not None:
        if args.a is None or args.b is None:
            raise OpsQftError("--a and --b must be given together")
        st = ops.detfg_from_plane(_q(args.a), _q(args.b), args.target)
        return st.context, {"f": _qs(st.f), "g": _qs(st.g), "c": _qs(st.c), "d": _qs(st.d)}
    if args.f is None or args.g is None:
        raise OpsQftError("give either --f/--g or --a/--b")
    ctx = ops.make_context(_q(args.f), _q(args.g))
    return ctx, {"f": _qs(ctx.f), "g": _qs(ctx.g)}


def cmd_scatter(args):
    ctx, extra = _scatter_context(args)
    cloud = fields.random_cloud(args.n, args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    plus, minus = ops.split_field(ctx, cloud.points)
    summary = {}
    for part, pts, plane in (("plus", plus, ctx.plus_basis), ("minus", minus, ctx.minus_basis)):
        fields.write_scatter_csv(out / f"{part}.csv", fields.scatter_projections(cloud, ctx, part))
        summary[part] = {
            "plane": [_qs(b) for b in plane],
            "max_off_plane": fields.max_off_plane(pts, plane),
        }
    _emit(
        command="scatter",
        n=args.n,
        seed=args.seed,
        branch=ctx.branch.value,
        frame=list(ctx.frame_labels),
        split_residual_max=float(np.max(np.linalg.norm(cloud.points - plus - minus, axis=1))),
        parts=summary,
        **extra,
    )


def _best_time(fn, repeat):
    best = math.inf
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def cmd_bench(args):
    sizes = []
    for tok in args.sizes.split(","):
        tok = tok.strip().lower()
        if "x" in tok:
            m, n = tok.split("x")
            sizes.append((int(m), int(n)))
        else:
            sizes.append((int(tok), int(tok)))
    if any(m < 1 or n < 1 for m, n in sizes):
        raise OpsQftError("sizes must be positive")
    if not args.force:
        big = [f"{m}x{n}" for m, n in sizes if m * n > NAIVE_LIMIT]
        if big:
            raise OpsQftError(f"naive transform above 64x64 refused without --force: {', '.join(big)}")
    rng = np.random.default_rng(args.seed)
    f = PureUnit.from_vector(*rng.standard_normal(3))
    g = PureUnit.from_vector(*rng.standard_normal(3))
    variant = qft.Variant.of(args.variant)
    prev = None
    for m, n in sizes:
        h = rng.standard_normal((m, n, 4))
        t_naive, Hn = _best_time(lambda: qft.qft_naive(h, f, g, variant), args.repeat)
        t_fast, Hf = _best_time(lambda: qft.qft_fast(h, f, g, variant), args.repeat)
        row = dict(
            command="bench",
            size=f"{m}x{n}",
            variant=variant.value,
            naive_seconds=t_naive,
            fast_seconds=t_fast,
            max_rel_error=qft.relative_error(Hf, Hn),
        )
        if prev is not None:
            row["naive_ratio_to_previous"] = t_naive / prev
        prev = t_naive
        _emit(**row)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="opsqft", description="Orthogonal planes split and steerable quaternion Fourier transforms")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("split", help="split a field into q+ and q- parts")
    s.add_argument("--f", required=True)
    s.add_argument("--g", required=True)
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--out-plus", required=True)
    s.add_argument("--out-minus", required=True)
    s.set_defaults(func=cmd_split)

    s = sub.add_parser("detfg", help="f, g making the (a, b) plane a split plane")
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)
    s.add_argument("--target", choices=("plus", "minus"), default="minus")
    s.set_defaults(func=cmd_detfg)

    s = sub.add_parser("geom", help="geometry of the rotary reflection q -> d conj(q) t")
    s.add_argument("--d", required=True)
    s.add_argument("--t", required=True)
    s.add_argument("--axis", help="orientation axis for the degenerate case")
    s.set_defaults(func=cmd_geom)

    s = sub.add_parser("qft", help="forward transform of a field")
    s.add_argument("--variant", default="standard", choices=[v.value for v in qft.Variant])
    s.add_argument("--f", required=True)
    s.add_argument("--g", required=True)
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--fast", action="store_true")
    mode.add_argument("--naive", action="store_true")
    s.add_argument("--check", action="store_true", help="also run the other path and report the difference")
    s.add_argument("--force", action="store_true")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_qft)

    s = sub.add_parser("iqft", help="inverse transform of a spectrum document")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_iqft)

    s = sub.add_parser("scatter", help="split a random unit cloud and export projections")
    s.add_argument("--n", type=int, default=300)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--f")
    s.add_argument("--g")
    s.add_argument("--a")
    s.add_argument("--b")
    s.add_argument("--target", choices=("plus", "minus"), default="minus")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_scatter)

    s = sub.add_parser("bench", help="naive vs fast timings")
    s.add_argument("--sizes", default="8,16,32")
    s.add_argument("--variant", default="standard", choices=[v.value for v in qft.Variant])
    s.add_argument("--repeat", type=int, default=3)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--force", action="store_true")
    s.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.func(args)
    except _UsageError as exc:
        _emit(error="usage", message=str(exc))
        return EXIT_VALIDATION
    except (FormatError, OSError) as exc:
        _emit(error="io", message=str(exc))
        return EXIT_IO
    except (OpsQftError, ValueError) as exc:
        _emit(error="validation", message=str(exc))
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
