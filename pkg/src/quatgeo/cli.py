"""Command-line front end.

Exit codes: 0 ok, 1 parse or usage error, 2 mathematical finding (a group
that is not free up to L, a set that is not a recognizable subgroup), 3 a
resource cap was hit.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

from . import groups, heisenberg, s3
from .errors import (BackendMismatch, ClosureError, ExplosionCap, ImageNotFinite, NotAGroup,
                     ParseError, QuatGeoError, StepCapExceeded, Unrecognized)
from .fileformat import (generator_file_from_group, parse_quaternion_list, read_generator_file,
                         render_generator_file)
from .qmatrix import dieudonne_det_squared, right_eigenvalues
from .quaternion import EXACT, FLOAT, Quaternion, format_quaternion, parse_quaternion, rational

OK, PARSE, FINDING, CAPS = 0, 1, 2, 3
DIGITS = 10


def _fmt(q):
    if isinstance(q, complex):
        q = Quaternion(q.real, q.imag)
    return format_quaternion(q, None if q.exact else DIGITS)


# -- reports -------------------------------------------------------------------

def render_kv(d):
    return "".join(f"{k} = {json.dumps(v)}\n" for k, v in d.items())


def render_report_text(r):
    lines = [
        f"generators: {', '.join(r.labels) if r.labels else '(none)'}",
        f"elements found (word length <= {r.max_word_length}): {r.elements_found}"
        + (" [closed: whole group]" if r.closed else ""),
        f"freeness: {r.freeness['statement']}",
        f"all elements unipotent: {'yes' if r.unipotent_all else 'no'}"
        + (f" (witness {r.non_unipotent_witness})" if r.non_unipotent_witness else ""),
    ]
    if isinstance(r.phi_image, dict):
        lines.append(f"phi image: undefined ({r.phi_image['failure']}: {r.phi_image['witness']})")
    else:
        lines.append(f"phi image: {{{', '.join(r.phi_image)}}} (order {r.quotient_order}, "
                     f"class {r.quotient_class})")
        lines.append(f"kernel generators: {', '.join(r.kernel_generators) or '(none)'}")
        lines.append(f"kernel generators unipotent: {'yes' if r.kernel_unipotent_all else 'no'}")
    lines.append(f"translation rank: {r.translation_rank} (pure translations: "
                 f"{r.pure_translation_rank})")
    for w, v in zip(r.translation_witnesses, r.translation_basis):
        lines.append(f"  {w}: ({', '.join(v)})")
    lines.append(f"compactness: {r.compactness}")
    return "\n".join(lines) + "\n"


def _emit(args, text, kv):
    if args.report_format == "kv":
        sys.stdout.write(render_kv(kv))
    else:
        sys.stdout.write(text)


# -- commands ----------------------------------------------------------------------

def _load(args):
    return read_generator_file(args.file, args.backend)


def cmd_analyze(args):
    gf = _load(args)
    if gf.backend != EXACT:
        raise BackendMismatch("analyze needs the exact backend")
    maps = gf.affine_maps()
    group = groups.GeneratedGroup(list(maps.values()), list(maps), n=2)
    report = groups.analyze(group, args.max_word_length, args.element_cap)
    _emit(args, render_report_text(report), report.as_dict())
    if not report.free:
        return FINDING
    if report.quotient_class and report.quotient_class.startswith(("unrecognized", "not in S3")):
        return FINDING
    return OK


def _square(name, m):
    if m.shape[0] != m.shape[1]:
        raise ParseError(f"matrix {name!r} is not square")
    return m


def cmd_eig(args):
    gf = _load(args)
    out, kv = [], {}
    for name, m in gf.matrices.items():
        vals = right_eigenvalues(_square(name, m))
        text = ", ".join(_fmt(q) for q in vals)
        out.append(text if len(gf.matrices) == 1 else f"{name}: {text}")
        kv[name] = [_fmt(q) for q in vals]
    _emit(args, "\n".join(out) + "\n", kv)
    return OK


def _det_text(m):
    d2 = dieudonne_det_squared(m)
    if m.exact:
        d2 = rational(d2)
        num, den = math.isqrt(int(d2.numerator)), math.isqrt(int(d2.denominator))
        if num * num == d2.numerator and den * den == d2.denominator:
            return str(num) if den == 1 else f"{num}/{den}"
    return f"{math.sqrt(float(d2)):.{DIGITS}g}"


def cmd_det(args):
    gf = _load(args)
    out, kv = [], {}
    for name, m in gf.matrices.items():
        text = _det_text(_square(name, m))
        out.append(text if len(gf.matrices) == 1 else f"{name}: {text}")
        kv[name] = text
    _emit(args, "\n".join(out) + "\n", kv)
    return OK


def _parse_point(text):
    return tuple(parse_quaternion(p, FLOAT) for p in text.split(","))


def cmd_orbit(args):
    gf = _load(args)
    maps = gf.affine_maps()
    names = [args.a or None, args.b or None]
    keys = list(maps)
    if names[0] is None or names[1] is None:
        if len(keys) < 2:
            raise ParseError("orbit needs two matrices (A and B)")
        names = keys[:2]
    a, b = maps[names[0]], maps[names[1]]
    probe = groups.orbit_accumulation_probe(a, b, _parse_point(args.point), args.iterations)
    if args.report_format == "kv":
        sys.stdout.write(render_kv({
            "points": [[_fmt(q) for q in p] for p in probe.points],
            "distances": probe.distances,
            "start_record": probe.start_record,
            "pairwise_record": probe.pairwise_record,
        }))
        return OK
    rows = ["n\tpoint\tdistance_to_start"]
    for n, (p, d) in enumerate(zip(probe.points, probe.distances), start=1):
        rows.append(f"{n}\t({', '.join(_fmt(q) for q in p)})\t{d:.{DIGITS}g}")
    rows.append("")
    rows.append("# running minimum of distance to start (n, value)")
    rows += [f"{n}\t{v:.{DIGITS}g}" for n, v in probe.start_record]
    rows.append("# running minimum pairwise distance (n, value)")
    rows += [f"{n}\t{v:.{DIGITS}g}" for n, v in probe.pairwise_record]
    sys.stdout.write("\n".join(rows) + "\n")
    return OK


def cmd_s3_build(args):
    try:
        cls = s3.parse_class(args.cls)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    elements = s3.build(cls)
    if args.report_format == "kv":
        sys.stdout.write(render_kv({"class": str(cls), "order": len(elements),
                                    "elements": [_fmt(q) for q in elements]}))
    else:
        sys.stdout.write(f"# {cls}: order {len(elements)}\n")
        sys.stdout.write("".join(_fmt(q) + "\n" for q in elements))
    return OK


def cmd_s3_recognize(args):
    with open(args.file, encoding="utf-8") as fh:
        elements = parse_quaternion_list(fh.read(), args.backend)
    cls = s3.recognize(elements)
    _emit(args, f"{cls}\n", {"class": str(cls), "order": cls.order})
    return OK


# -- heisenberg ----------------------------------------------------------------------

def _parse_params(family, text):
    """``top | right | center`` (Real, H2) or ``top | center`` (H1, H3); blocks are
    comma-separated quaternions.  For H1 the center is the real ``t`` with Im w = t i."""
    blocks = [b.strip() for b in text.split("|")]
    want = 2 if family in ("H1", "H3") else 3
    if len(blocks) != want:
        raise ParseError(f"{family} parameters need {want} '|'-separated blocks")
    vec = lambda s: [parse_quaternion(p, EXACT, column=1) for p in s.split(",")]
    if family == "H1":
        return heisenberg.HeisenbergElement.h1(vec(blocks[0]), parse_quaternion(blocks[1], EXACT))
    if family == "H3":
        return heisenberg.HeisenbergElement.h3(vec(blocks[0]), parse_quaternion(blocks[1], EXACT))
    return heisenberg.HeisenbergElement(family, vec(blocks[0]), vec(blocks[1]),
                                        parse_quaternion(blocks[2], EXACT))


def _format_params(g):
    top = ", ".join(_fmt(q) for q in g.top)
    if g.family == "H1":
        return f"{top} | {_fmt(Quaternion(g.center.x))}"
    if g.family == "H3":
        return f"{top} | {_fmt(g.center)}"
    return f"{top} | {', '.join(_fmt(q) for q in g.right)} | {_fmt(g.center)}"


def _parse_lattice(text):
    t = text.replace(" ", "")
    try:
        if t.startswith("Lambda_r(") and t.endswith(")"):
            return heisenberg.LambdaR(tuple(int(x) for x in t[9:-1].split(",")))
        if t.startswith("Lambda(1,") and t.endswith(")"):
            return heisenberg.Lambda1n(int(t[9:-1]))
        if t.startswith("Delta(1,") and t.endswith(")"):
            n, m = t[8:-1].split(";")
            return heisenberg.Delta(int(n), int(m))
    except ValueError as exc:
        raise ParseError(f"bad lattice {text!r}: {exc}") from None
    raise ParseError(f"lattice must be Lambda_r(r1,...), Lambda(1,n) or Delta(1,n;m), not {text!r}")


def cmd_heis_mul(args):
    g = _parse_params(args.family, args.g)
    h = _parse_params(args.family, args.h)
    p = g @ h
    text = _format_params(p) + "\n" + "\n".join(
        "  [" + ", ".join(_fmt(q) for q in row) + "]" for row in p.matrix.rows) + "\n"
    _emit(args, text, {"product": _format_params(p)})
    return OK


def cmd_heis_member(args):
    spec = _parse_lattice(args.lattice)
    g = _parse_params(args.family, args.element)
    inside = heisenberg.lattice_contains(spec, g)
    _emit(args, f"{'true' if inside else 'false'}\n# {heisenberg.LATTICE_NOTE}\n",
          {"member": inside, "lattice": str(spec), "note": heisenberg.LATTICE_NOTE})
    return OK


def cmd_heis_step(args):
    step = heisenberg.nilpotency_step(heisenberg.standard_generators(args.family, args.n), args.cap)
    _emit(args, f"{step}\n", {"family": args.family, "n": args.n, "step": step})
    return OK


def cmd_heis_center(args):
    dim = heisenberg.center_dimension_probe(args.family, args.n)
    _emit(args, f"{dim}\n", {"family": args.family, "n": args.n, "center_dimension": dim})
    return OK


def cmd_heis_cover(args):
    deg = heisenberg.covering_degree(args.n, args.m, args.realization)
    _emit(args, f"{deg}\n# {heisenberg.LATTICE_NOTE}\n", {"n": args.n, "m": args.m, "degree": deg})
    return OK


# -- fixtures ----------------------------------------------------------------------

def cmd_fixtures(args):
    from . import fixtures

    if args.which == "example":
        group = fixtures.example_group()
    elif args.which == "gamma0-n1":
        r = tuple(int(x) for x in args.r.split(",")) if args.r else (1, 1)
        group = fixtures.gamma0_n1(r)
    else:
        group = fixtures.gamma0_n3(args.m)
    text = render_generator_file(generator_file_from_group(group))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return OK


# -- argument parsing -----------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-word-length", type=int, default=groups.DEFAULT_MAX_WORD_LENGTH)
    common.add_argument("--element-cap", type=int, default=groups.DEFAULT_ELEMENT_CAP)
    common.add_argument("--backend", choices=[EXACT, FLOAT], default=None,
                        help="override the backend directive of input files")
    common.add_argument("--report-format", choices=["text", "kv"], default="text")

    p = argparse.ArgumentParser(prog="quatgeo",
                                description="Quaternionic affine groups at desk scale.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="explore a generated group")
    a.add_argument("file")
    a.set_defaults(func=cmd_analyze)

    e = sub.add_parser("eig", parents=[common], help="right eigenvalue representatives")
    e.add_argument("file")
    e.set_defaults(func=cmd_eig)

    d = sub.add_parser("det", parents=[common], help="Dieudonne determinant")
    d.add_argument("file")
    d.set_defaults(func=cmd_det)

    o = sub.add_parser("orbit", parents=[common], help="orbit of C_n = A^-n B A^n B^-1")
    o.add_argument("file")
    o.add_argument("--point", default="0,1", help="comma-separated quaternions")
    o.add_argument("--iterations", type=int, default=200)
    o.add_argument("--a", default=None, help="name of A in the file")
    o.add_argument("--b", default=None, help="name of B in the file")
    o.set_defaults(func=cmd_orbit)

    s = sub.add_parser("s3", help="finite subgroups of S^3")
    ssub = s.add_subparsers(dest="s3_command", required=True)
    sb = ssub.add_parser("build", parents=[common])
    sb.add_argument("cls", help="2I, 2O, 2T, 2D(n), 2C(n) or 1C(n)")
    sb.set_defaults(func=cmd_s3_build)
    sr = ssub.add_parser("recognize", parents=[common])
    sr.add_argument("file", help="one quaternion per line")
    sr.set_defaults(func=cmd_s3_recognize)

    h = sub.add_parser("heis", help="Heisenberg groups and lattices")
    hsub = h.add_subparsers(dest="heis_command", required=True)
    fam = dict(choices=list(heisenberg.FAMILIES))
    hm = hsub.add_parser("mul", parents=[common])
    hm.add_argument("family", **fam)
    hm.add_argument("g")
    hm.add_argument("h")
    hm.set_defaults(func=cmd_heis_mul)
    hb = hsub.add_parser("member", parents=[common])
    hb.add_argument("lattice", help="Lambda_r(1,2), Lambda(1,3) or Delta(1,3;5)")
    hb.add_argument("family", **fam)
    hb.add_argument("element")
    hb.set_defaults(func=cmd_heis_member)
    hs = hsub.add_parser("step", parents=[common])
    hs.add_argument("family", **fam)
    hs.add_argument("n", type=int)
    hs.add_argument("--cap", type=int, default=6)
    hs.set_defaults(func=cmd_heis_step)
    hc = hsub.add_parser("center", parents=[common])
    hc.add_argument("family", **fam)
    hc.add_argument("n", type=int)
    hc.set_defaults(func=cmd_heis_center)
    hv = hsub.add_parser("cover", parents=[common])
    hv.add_argument("n", type=int)
    hv.add_argument("m", type=int)
    hv.add_argument("--realization", choices=["Real", "H1", "H3"], default="Real")
    hv.set_defaults(func=cmd_heis_cover)

    f = sub.add_parser("fixtures", parents=[common], help="emit generator files")
    f.add_argument("which", choices=["example", "gamma0-n1", "gamma0-n3"])
    f.add_argument("--r", default=None, help="Lambda_r vector for gamma0-n1, e.g. 1,2")
    f.add_argument("--m", type=int, default=None, help="use Delta(1,3;m) in gamma0-n3")
    f.add_argument("-o", "--output", default=None)
    f.set_defaults(func=cmd_fixtures)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return PARSE if exc.code else OK
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return PARSE
    except (ExplosionCap, ImageNotFinite, ClosureError, StepCapExceeded) as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return CAPS
    except (Unrecognized, NotAGroup) as exc:
        print(f"finding: {exc}", file=sys.stderr)
        return FINDING
    except (QuatGeoError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return PARSE


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
