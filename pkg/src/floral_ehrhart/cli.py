"""Command-line entry point: ``floral-ehrhart <subcommand> ...``.

Exit codes: 0 success, 1 usage / input / configuration error, 2 input is not
a generic orthotope, 3 the lattice-point oracle disagrees with the formulas.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from typing import Sequence

from . import ehrhart_engine as ee
from . import orthotope_model as om
from . import sp_core
from .errors import FloralError, NotGeneric
from .lattice_oracle import verify_against_formula
from .report import FORMATS, Section, render

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NOT_GENERIC = 2
EXIT_MISMATCH = 3

GLYPHS = (
    ("(empty)", "1"),
    ("arx", "x"),
    ("arxx", "x*x"),
    ("arxxn", "x+x"),
    ("arxxx", "x*x*x"),
    ("arxxnx", "(x+x)*x"),
    ("arxxnxn", "x*x+x"),
    ("arxxxn", "x+x+x"),
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with status 2
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    max_dim: int = sp_core.MAX_DIM
    format: str = "text"
    t_max: int = 4
    seed: int = 0
    multivariable: bool = False
    out: str | None = None
    dim: int | None = None
    voxels: int | None = None
    corrupt_census: bool = False


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="text", help="output format (default: text)")
    common.add_argument("--out", metavar="PATH", help="write output to PATH instead of stdout")
    common.add_argument(
        "--max-dim", type=int, default=sp_core.MAX_DIM, metavar="N",
        help=f"class table cap (default: {sp_core.MAX_DIM})",
    )

    parser = _Parser(prog="floral-ehrhart", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("tables", parents=[common], help="print the h and h^-1 tables of all classes")

    for name, text in (
        ("analyze", "census, Ehrhart coefficients, Euler vector and valuations"),
        ("ehrhart", "class-refined Ehrhart coefficients only"),
        ("euler", "Euler vector and Euler characteristic"),
    ):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("input", help="voxel file (text or JSON)")
        p.add_argument("--multivariable", action="store_true", help="include per-direction tables")

    p = sub.add_parser("verify", parents=[common], help="compare formulas with brute-force lattice counts")
    p.add_argument("input", help="voxel file (text or JSON)")
    p.add_argument("--t-max", type=int, default=4, metavar="N", help="largest dilation factor (default: 4)")
    p.add_argument("--seed", type=int, default=0, metavar="N", help="seed for sampled dilation vectors")
    p.add_argument("--corrupt-census", action="store_true", help=argparse.SUPPRESS)

    p = sub.add_parser("random", parents=[common], help="generate a random generic orthotope")
    p.add_argument("dim", type=int, help="dimension")
    p.add_argument("voxels", type=int, help="number of voxels")
    p.add_argument("--seed", type=int, default=0, metavar="N", help="random seed (default: 0)")
    return parser


def parse_config(argv: Sequence[str]) -> RunConfig:
    ns = build_parser().parse_args(argv)
    return RunConfig(**{k.replace("-", "_"): v for k, v in vars(ns).items()})


# ---------------------------------------------------------------------------
# section builders


def _pairs(table: sp_core.ClassTable, row: dict[int, int]) -> list[list]:
    return [[table.encoding(b), c] for b, c in sorted(row.items())]


def _dirs_label(subset: Sequence[int]) -> str:
    return "{" + ",".join(map(str, subset)) + "}"


def tables_sections(max_dim: int) -> list[Section]:
    table = sp_core.build_class_table(max_dim)
    classes = Section(
        f"floral classes up to dimension {max_dim}",
        ["id", "encoding", "dim", "mu", "rho", "sigma", "complement", "h", "h^-1"],
    )
    for cid, enc in enumerate(map(table.encoding, range(len(table)))):
        comp = table.complements[cid]
        classes.add(
            cid, enc, table.dim(cid), table.mus[cid], table.rhos[cid], table.sigmas[cid],
            None if comp is None else table.encoding(comp),
            _pairs(table, table.m_rows[cid]), _pairs(table, table.s_rows[cid]),
        )
    legend = Section("glyph legend", ["glyph", "encoding"])
    for glyph, enc in GLYPHS:
        if sp_core.parse(enc).dim <= max_dim:
            legend.add(glyph, enc)
    return [classes, legend]


def _census_sections(census: om.CellCensus, multivariable: bool) -> list[Section]:
    d = census.dim
    table = census.table
    sec = Section("cube counts C[class,k]", ["class"] + [f"k={k}" for k in range(d + 1)])
    for cid in census.classes():
        sec.add(table.encoding(cid), *[census.count(cid, k) for k in range(d + 1)])
    out = [sec]
    if multivariable:
        cols = ee.subsets(d)
        sec = Section("cube counts C[class,I]", ["class"] + [_dirs_label(s) for s in cols])
        for cid in census.classes():
            sec.add(table.encoding(cid), *[census.count_dirs(cid, s) for s in cols])
        out.append(sec)
    return out


def _poly_sections(census: om.CellCensus, cp: ee.ClassPolynomial, multivariable: bool) -> list[Section]:
    d = cp.dim
    table = cp.table
    powers = [f"t^{k}" for k in range(d + 1)]
    sec = Section("Ehrhart coefficients L[class,k]", ["class"] + powers)
    for cid in sorted(cp.coeffs):
        sec.add(table.encoding(cid), *[cp.coefficient(cid, k) for k in range(d + 1)])
    total = ee.total_ehrhart(cp) + [0] * (d + 1)
    tot = Section("Ehrhart polynomial L(tP)", powers)
    tot.add(*total[: d + 1])
    out = [sec, tot]
    if multivariable:
        mp = ee.multivariable_ehrhart(census)
        cols = ee.subsets(d)
        sec = Section("multivariable coefficients L[class,I]", ["class"] + [_dirs_label(s) for s in cols])
        for cid in mp.coeffs:
            sec.add(table.encoding(cid), *[mp.coefficient(cid, s) for s in cols])
        out.append(sec)
    return out


def _euler_sections(census: om.CellCensus, cp: ee.ClassPolynomial) -> list[Section]:
    phi = ee.euler_vector(cp, census)
    sec = Section("Euler vector", ["class", "coefficient"])
    for cid, c in phi.to_int_dict().items():
        sec.add(cp.table.encoding(cid), c)
    summary = Section("Euler summary", ["quantity", "value"])
    summary.add("euler characteristic", ee.euler_characteristic(cp))
    summary.add("bouquet sign average", str(ee.bouquet_sign_sum(census)))
    return [sec, summary]


def _load(cfg: RunConfig) -> tuple[om.VoxelSet, om.CellCensus]:
    P = om.read_file(cfg.input)
    table = sp_core.build_class_table(cfg.max_dim)
    return P, om.classify(P, table)


def analyze_sections(cfg: RunConfig) -> list[Section]:
    P, census = _load(cfg)
    cp = ee.class_ehrhart(census)
    if cfg.command == "ehrhart":
        return _poly_sections(census, cp, cfg.multivariable)
    if cfg.command == "euler":
        return _euler_sections(census, cp)
    vals = ee.special_valuations(cp)
    rec = ee.reciprocity_check(cp)
    theorem = ee.verify_main_theorem(census, cp)
    summary = Section("summary", ["quantity", "value"])
    summary.add("dimension", P.dim)
    summary.add("voxels", len(P))
    summary.add("lattice points L(P)", sum(ee.total_ehrhart(cp)))
    summary.add("vertices", vals.vertices)
    summary.add("edges", vals.edges)
    summary.add("boundary measure", vals.boundary_measure)
    summary.add("volume", vals.volume)
    summary.add("reciprocity", rec.ok)
    for k, ok in theorem.results.items():
        summary.add(f"census identity k={k}", ok)
    return (
        _census_sections(census, cfg.multivariable)
        + _poly_sections(census, cp, cfg.multivariable)
        + _euler_sections(census, cp)
        + [summary]
    )


def verify_sections(cfg: RunConfig) -> tuple[list[Section], bool]:
    P, census = _load(cfg)
    if cfg.corrupt_census:
        census.by_k[0, P.dim] += 1
    report = verify_against_formula(P, census.table, cfg.t_max, census=census, seed=cfg.seed)
    sec = Section("oracle comparison", ["dilation", "source", "class", "oracle", "formula", "status"])
    for r in report.records:
        sec.add(list(r.dilation), r.source, r.encoding, r.oracle, r.formula, r.ok)
    summary = Section("oracle summary", ["comparisons", "mismatches", "status"])
    summary.add(len(report.records), len(report.mismatches), report.ok)
    return [sec, summary], report.ok


def random_output(cfg: RunConfig) -> tuple[str, list[Section]]:
    P = om.random_generic(cfg.dim, cfg.voxels, cfg.seed)
    census = om.classify(P, sp_core.build_class_table(min(cfg.max_dim, sp_core.MAX_DIM)))
    header = f"random generic orthotope: dim {cfg.dim}, {cfg.voxels} voxels, seed {cfg.seed}"
    return om.dumps_text(P, header), _census_sections(census, False)


# ---------------------------------------------------------------------------


def _write(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def run(cfg: RunConfig) -> int:
    if cfg.command == "tables":
        _write(render(tables_sections(cfg.max_dim), cfg.format), cfg.out)
        return EXIT_OK
    if cfg.command in ("analyze", "ehrhart", "euler"):
        _write(render(analyze_sections(cfg), cfg.format), cfg.out)
        return EXIT_OK
    if cfg.command == "verify":
        sections, ok = verify_sections(cfg)
        _write(render(sections, cfg.format), cfg.out)
        return EXIT_OK if ok else EXIT_MISMATCH
    if cfg.command == "random":
        voxel_text, sections = random_output(cfg)
        if cfg.out is None:
            sys.stdout.write(voxel_text)
        else:
            _write(voxel_text, cfg.out)
            sys.stdout.write(render(sections, cfg.format))
        return EXIT_OK
    raise UsageError(f"unknown command {cfg.command!r}")


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
        return run(cfg)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except NotGeneric as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_GENERIC
    except (FloralError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
