"""Command-line interface: ``python -m polytiles <command> ...``.

Exit status: 0 success, 1 a value outside its tolerance, 2 usage, parse or
validation error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from polytiles import bounds, candidates, combinatorics, io, mesh, optimize, prisms
from polytiles.lp import LPError

OK, TOLERANCE, USAGE, NUMERICAL = 0, 1, 2, 3

_USAGE_ERRORS = (
    io.ParseError,
    mesh.InvalidPolyhedronError,
    mesh.DegenerateInputError,
    mesh.CutTooDeepError,
    combinatorics.InvalidTypeError,
    candidates.UnknownNameError,
    candidates.UnsupportedNameError,
    OSError,
    ValueError,
)
_NUMERICAL_ERRORS = (
    candidates.OptimizerFailureError,
    optimize.CombinatoricsBrokenError,
    optimize.NoConvergenceError,
    mesh.NonConvexError,
    LPError,
    FloatingPointError,
)


class _Out:
    def __init__(self, quiet):
        self.quiet = quiet

    def info(self, text=""):
        if not self.quiet:
            print(text)

    def note(self, text):
        if not self.quiet:
            print(text, file=sys.stderr)

    def data(self, text):
        sys.stdout.write(text if text.endswith("\n") else text + "\n")

    @staticmethod
    def warn(text):
        print(f"warning: {text}", file=sys.stderr)


def _read_polyhedron(path):
    with open(path) as fh:
        p = io.read_off(fh.read(), name=path)
    report = mesh.validate(p)
    if report:
        raise mesh.InvalidPolyhedronError(report)
    return p


def _write(path, p):
    with open(path, "w") as fh:
        fh.write(io.write_off(p))


# ---------------------------------------------------------------------------
# commands


def _table(names, out, fmt, type_files):
    rows, status = [], OK
    for name in names:
        s = candidates.spec(name)
        if s.construction == "type-file" and name not in type_files:
            out.note(f"{name} skipped (supply --type-file {name}=PATH)")
            continue
        try:
            area = float(candidates.build(name, type_files.get(name)).face_areas().sum())
            note = s.provenance
        except _NUMERICAL_ERRORS as exc:
            out.warn(str(exc))
            area, note = float("nan"), f"failed: {exc}"
            status = NUMERICAL
        rows.append(io.TableRow(name, s.n, area, s.expected_area, s.tolerance, note))
    rows.sort(key=lambda r: (r.n, r.name))
    out.data(io.format_table(rows, fmt))
    if status == OK and not all(r.ok for r in rows):
        status = TOLERANCE
    return status


def cmd_table1(a, out):
    return _table(candidates.TABLE1, out, a.format, {})


def cmd_table2(a, out):
    files = {}
    for item in a.type_file or ():
        name, sep, path = item.partition("=")
        if not sep:
            raise ValueError(f"--type-file expects NAME=PATH, got {item!r}")
        files[name] = path
    return _table(candidates.TABLE2, out, a.format, files)


def cmd_build(a, out):
    p = candidates.build(a.name, a.type_file)
    _write(a.out, p)
    out.info(f"{a.name}: {p.n_faces} faces, area {p.face_areas().sum():.6f} -> {a.out}")
    return OK


def cmd_sommerville(a, out):
    p = candidates.build_sommerville(a.k)
    _write(a.out, p)
    out.info(f"sommerville-{a.k}: area {p.face_areas().sum():.6f} -> {a.out}")
    return OK


def cmd_check(a, out):
    p = _read_polyhedron(a.path)
    m = mesh.measures(p)
    unit = mesh.scale_to_unit_volume(p)
    area1 = float(unit.face_areas().sum())
    angles = np.array(list(mesh.dihedral_angles(p).values()))
    bound = bounds.goldberg_bound(p.n_faces).bound_value
    dcap = bounds.diameter_bound(area1)
    out.data(
        "\n".join(
            [
                "valid: yes",
                f"convex: {'yes' if mesh.is_convex(p) else 'no'}",
                f"vertices {p.n_vertices}  edges {p.n_edges}  faces {p.n_faces}",
                f"surface area {m.surface_area:.10g}",
                f"volume {m.volume:.10g}",
                f"cost {m.cost:.10g}",
                f"unit-volume area {area1:.6f}",
                f"dihedral angles: min {angles.min():.4f}  max {angles.max():.4f}  sum {angles.sum():.4f} deg",
                f"face-count bound {bound:.6f}  margin {area1 - bound:.6f}",
                f"diameter {unit.diameter():.6f} <= {dcap:.6f}: {'yes' if unit.diameter() <= dcap else 'no'}",
            ]
        )
    )
    if a.lindelof:
        rep = optimize.lindelof_check(p)
        out.data(
            f"insphere radius {rep.insphere.radius:.10g}\n"
            f"lindelof max residual {rep.max_residual:.4f}\n"
            f"lindelof max deficit {rep.max_deficit:.4f}"
        )
    return OK


def cmd_optimize(a, out):
    with open(a.type) as fh:
        t = io.read_type(fh.read())
    if a.seed:
        seed = _read_polyhedron(a.seed)
        if not combinatorics.equivalent(t, combinatorics.CombinatorialType(seed.faces)):
            raise ValueError("seed mesh does not have the requested combinatorial type")
        seed = candidates.relabel_to(seed, t)
    else:
        seed = candidates.seed_from_type(t)
    N, D = seed.face_planes()
    if a.symmetry in (None, "C1"):
        sym = None
    elif a.symmetry == "aut":
        sym = optimize.Symmetry.from_automorphisms(combinatorics.automorphisms(t), N)
    else:
        sym = optimize.Symmetry.from_seed(a.symmetry, N, D)
    r = optimize.minimize_within_type(t, seed, sym, restarts=a.restarts, seed_offset=a.seed_index)
    stride = max(1, len(r.trace) // 20)
    out.info("iteration,area")
    for i in list(range(0, len(r.trace), stride)) + [len(r.trace) - 1]:
        out.info(f"{i},{r.trace[i] ** (1 / 3):.10f}")
    out.data(
        f"area {r.area:.10f}  iterations {r.iterations}  "
        f"lindelof residual {r.lindelof.max_residual:.2e}  restart {r.seed_index}"
    )
    _write(a.out, r.polyhedron)
    return OK


def _read_polygon(path):
    with open(path) as fh:
        text = fh.read()
    rows = [tok for _, tok in io._content_lines(text)]
    if rows and rows[0] == ["OFF"]:
        p = io.read_off(text)
        if np.abs(p.vertices[:, 2]).max() > 0 or p.n_faces != 1:
            raise io.ParseError(0, "a 2-D OFF base needs z = 0 and exactly one face")
        return p.vertices[list(p.faces[0]), :2]
    try:
        return np.array([[float(x) for x in tok] for tok in rows])
    except ValueError as exc:
        raise io.ParseError(0, f"bad polygon file: {exc}") from None


def cmd_prism(a, out):
    base = prisms.regular_polygon(a.ngon) if a.ngon else _read_polygon(a.base)
    ps = prisms.optimal_prism(base)
    out.data(f"h {ps.h:.12g}\nS {ps.surface_area:.12g}")
    if a.out:
        _write(a.out, ps.polyhedron("prism"))
    return OK


def cmd_truncate(a, out):
    p = _read_polyhedron(a.path)
    if not 0 <= a.vertex < p.n_vertices:
        raise ValueError(f"vertex must be in 0..{p.n_vertices - 1}")
    rows, slope, base = optimize.truncation_experiment(p, a.vertex, a.steps)
    lines = ["t,cost", f"0,{base:.15g}"] + [f"{t:.6e},{c:.15g}" for t, c in rows]
    out.data("\n".join(lines))
    out.info(f"# derivative estimate at 0+: {slope:.6g}")
    return OK


def cmd_facevectors(a, out):
    fvs = combinatorics.enumerate_face_vectors(a.n)
    header = ",".join(f"x{i}" for i in range(3, a.n)) + ",parity_ok"
    lines = [header] + [",".join(map(str, fv.counts)) + f",{fv.parity_ok}" for fv in fvs]
    out.data("\n".join(lines))
    out.info(f"# count {len(fvs)} = C({2 * a.n - 4}, {a.n}) = {combinatorics.face_vector_count(a.n)}")
    return OK


# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE)


def build_parser():
    ap = _Parser(prog="polytiles", description="Least-area polyhedral tiles.")
    ap.add_argument("--quiet", action="store_true", help="suppress informational output")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    fmt = dict(choices=("text", "csv", "json"), default="text")
    p = sub.add_parser("table1", help="conjectured tiles against reference areas")
    p.add_argument("--format", **fmt)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("table2", help="competing solids against reference areas")
    p.add_argument("--format", **fmt)
    p.add_argument("--type-file", action="append", metavar="NAME=PATH")
    p.set_defaults(func=cmd_table2)

    p = sub.add_parser("build", help="write a named solid at unit volume")
    p.add_argument("name")
    p.add_argument("--out", required=True)
    p.add_argument("--type-file")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("check", help="validate and measure an OFF mesh")
    p.add_argument("path")
    p.add_argument("--lindelof", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("optimize", help="minimize area within a combinatorial type")
    p.add_argument("--type", required=True, help="combinatorial-type file")
    p.add_argument("--symmetry", help="point group (e.g. D3, D2d), 'aut' or C1")
    p.add_argument("--seed", help="OFF mesh realizing the type (default: automatic)")
    p.add_argument("--seed-index", type=int, default=0)
    p.add_argument("--restarts", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("prism", help="least-area right prism over a base shape")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--ngon", type=int)
    g.add_argument("--base", help="2-D polygon: 'x y' lines or a one-face OFF in z = 0")
    p.add_argument("--out")
    p.set_defaults(func=cmd_prism)

    p = sub.add_parser("sommerville", help="write a Sommerville tetrahedron")
    p.add_argument("k", type=int, choices=(1, 2, 3, 4))
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sommerville)

    p = sub.add_parser("truncate-exp", help="cost under shrinking vertex truncations")
    p.add_argument("path")
    p.add_argument("--vertex", type=int, required=True)
    p.add_argument("--steps", type=int, default=8)
    p.set_defaults(func=cmd_truncate)

    p = sub.add_parser("facevectors", help="enumerate face vectors of n-hedra")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_facevectors)
    return ap


def main(argv=None):
    try:
        a = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE
    out = _Out(a.quiet)
    try:
        return a.func(a, out)
    except _NUMERICAL_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return NUMERICAL
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
