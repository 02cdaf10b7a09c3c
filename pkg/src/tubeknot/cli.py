"""Command-line front end.

Every subcommand writes its outputs atomically (temporary file then
rename) together with a JSON run manifest recording the parameters, the
seed, the tool version, timestamps and SHA-256 digests of the outputs.

Exit codes: 0 on success, 1 on a domain error (the error class name is
printed on standard error), 2 on a usage error.
"""
from __future__ import annotations

import argparse
import csv
import datetime as _dt
import gzip
import hashlib
import io
import json
import os
import sys
from collections import defaultdict
from pathlib import Path

from . import __version__
from .errors import SchemaMismatch, TubeKnotError

ENSEMBLES = ("fixed-span", "fixed-edge", "hamiltonian")


class UsageError(Exception):
    """Bad command-line input (exit code 2)."""


# ------------------------------------------------------------------ output


class RunOutputs:
    """Collects output files and writes them with a manifest."""

    def __init__(self, command: str, params: dict, seed: int | None = None):
        self.command = command
        self.params = params
        self.seed = seed
        self.started = _dt.datetime.now(_dt.timezone.utc).isoformat()
        self.files: dict[str, str] = {}

    def write(self, path: str | Path, data: str | bytes) -> None:
        path = Path(path)
        if path.parent and not path.parent.exists():
            path.parent.mkdir(parents=True, exist_ok=True)
        raw = data.encode() if isinstance(data, str) else data
        tmp = path.with_name(path.name + ".tmp")
        with open(tmp, "wb") as fh:
            fh.write(raw)
        os.replace(tmp, path)
        self.files[str(path)] = hashlib.sha256(raw).hexdigest()

    def emit(self, path: str | None, data: str) -> None:
        """Write to ``path``, or to standard output when it is ``None`` or ``-``."""
        if path is None or path == "-":
            sys.stdout.write(data)
        else:
            self.write(path, data)

    def finish(self, manifest_path: str | None) -> None:
        if manifest_path is None:
            outs = [p for p in self.files]
            if not outs:
                return
            manifest_path = outs[0] + ".manifest.json"
        man = {
            "command": self.command,
            "parameters": self.params,
            "seed": self.seed,
            "version": __version__,
            "started": self.started,
            "finished": _dt.datetime.now(_dt.timezone.utc).isoformat(),
            "outputs": dict(self.files),
        }
        raw = json.dumps(man, indent=2, sort_keys=True) + "\n"
        tmp = manifest_path + ".tmp"
        with open(tmp, "w") as fh:
            fh.write(raw)
        os.replace(tmp, manifest_path)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# --------------------------------------------------------------- parsing


def _tube(text: str):
    from .lattice import Tube

    try:
        return Tube.parse(text)
    except (ValueError, TypeError):
        raise UsageError(f"--tube: expected LxM, got {text!r}")


def _grid(text: str) -> list[float]:
    """``lo:hi:step`` or a comma separated list."""
    try:
        if ":" in text:
            lo, hi, step = (float(t) for t in text.split(":"))
            if step <= 0:
                raise ValueError
            n = int(round((hi - lo) / step))
            return [round(lo + i * step, 12) for i in range(n + 1)]
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"--grid: cannot parse {text!r}")


def _ints(text: str, flag: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"{flag}: expected comma separated integers")


_CLASS_ALIASES = {"nonlocal": "NonLocal", "nl": "NonLocal", "local": "Local", "l": "Local"}


def _classes(text: str | None):
    from .patterns import LOCAL, NONLOCAL

    if text is None:
        return (NONLOCAL, LOCAL)
    out = []
    for t in text.split(","):
        key = t.strip().lower()
        if key not in _CLASS_ALIASES:
            raise UsageError(f"--class: unknown class {t!r}")
        out.append(_CLASS_ALIASES[key])
    return tuple(out)


# ------------------------------------------------------------ subcommands


def cmd_enumerate(a, run: RunOutputs) -> None:
    from .enumeration import count_hamiltonian, count_polygons, dfs_count_polygons

    tube = _tube(a.tube)
    if a.max_n < 4 or a.max_n % 2:
        raise UsageError("--max-n: n must be even and at least 4")
    if a.hamiltonian:
        rows = []
        for s in range(0, a.max_n // tube.W):
            n = (s + 1) * tube.W
            if n <= a.max_n:
                rows.append([tube.label, n, s, count_hamiltonian(tube, s)])
        run.emit(a.out, _csv(["tube", "n", "s", "count"], rows))
        return
    if a.method == "dfs":
        table = dfs_count_polygons(tube, a.max_n, node_limit=a.node_limit,
                                   checkpoint=a.checkpoint, resume=a.resume)
    else:
        table = count_polygons(tube, a.max_n)
    rows = [[tube.label, n, s, c] for (n, s), c in sorted(table.entries.items()) if c]
    run.emit(a.out, _csv(["tube", "n", "s", "count"], rows))


def cmd_smallest_patterns(a, run: RunOutputs) -> None:
    from .enumeration import census_rows, knot_census, write_census_csv
    from .knots import parse_knot

    tube = _tube(a.tube)
    try:
        knot = parse_knot(a.knot)
    except (KeyError, ValueError):
        raise UsageError(f"--knot: unknown knot {a.knot!r}")
    if a.max_span < 2 or a.min_span < 2 or a.min_span > a.max_span:
        raise UsageError("--max-span: spans must satisfy 2 <= min-span <= max-span")
    modes = {"all": [False], "hamiltonian": [True], "both": [False, True]}[a.polygons]
    rows = []
    for ham in modes:
        censuses = knot_census(tube, knot, ham, a.min_span, a.max_span)
        rows.extend(census_rows(tube, knot, ham, censuses, _classes(a.cls)))
    run.emit(a.out, write_census_csv(rows))


CLASSIFY_HEADER = ["polygon_id", "knot", "dc", "nc1", "nc2", "class", "pattern_span", "pattern_edges"]


def _infer_tube(text: str):
    from .lattice import Tube, parse_directions, parse_vertices

    body = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    verts = parse_directions(text) if body and body[0].lstrip().startswith("@") else parse_vertices(text)
    return Tube(max(v[1] for v in verts), max(v[2] for v in verts))


def cmd_classify(a, run: RunOutputs) -> None:
    from .lattice import read_polygon
    from .patterns import NOT_KNOT, classify, decompose, polygon_knot

    rows = []
    for path in a.inp:
        text = Path(path).read_text()
        tube = _tube(a.tube) if a.tube else _infer_tube(text)
        poly = read_polygon(text, tube)
        pid = Path(path).stem
        knot = polygon_knot(poly)
        props = [p for p in decompose(poly) if p.kind == "Proper"]
        wrote = False
        for pat in props:
            d = classify(pat)
            if d.classification == NOT_KNOT and not a.all_patterns:
                continue
            rows.append([pid, knot.name, d.dc.name, d.nc1.name, d.nc2.name, d.classification,
                         pat.span, pat.n_edges])
            wrote = True
        if not wrote:
            cls = NOT_KNOT if knot.is_unknot else "Unpatterned"
            rows.append([pid, knot.name, "", "", "", cls, "", ""])
    run.emit(a.out, _csv(CLASSIFY_HEADER, rows))


def cmd_free_energy(a, run: RunOutputs) -> None:
    from .transfer import build, dominant, free_energy_per_edge, g_star, hamiltonian_rate

    tube = _tube(a.tube)
    grid = _grid(a.grid)
    rows, diag = [], []
    if a.ensemble == "hamiltonian":
        sysH = build(tube, hamiltonian=True)
        k = hamiltonian_rate(sysH)
        e = dominant(sysH, 0.0)
        rows.append([tube.label, "hamiltonian", 0.0, repr(k)])
        diag.append({"param": 0.0, "lambda": e.lam, "residual": e.residual, "iterations": e.iterations,
                     "method": e.method})
    else:
        system = build(tube)
        for p in grid:
            if a.ensemble == "fixed-edge":
                g = g_star(system, p)
                val = -g
            else:
                g = p
                val = dominant(system, g).log_lam
            e = dominant(system, g)
            rows.append([tube.label, a.ensemble, p, repr(val)])
            diag.append({"param": p, "g": g, "lambda": e.lam, "residual": e.residual,
                         "iterations": e.iterations, "method": e.method})
    run.emit(a.out, _csv(["tube", "ensemble", "param", "value"], rows))
    if a.out and a.out != "-":
        run.write(a.out + ".eigen.json", json.dumps({"tube": tube.label, "ensemble": a.ensemble,
                                                      "diagnostics": diag}, indent=2) + "\n")


LIMIT_HEADER = ["tube", "ensemble", "axis", "param", "knot", "class", "span", "patterns", "probability"]


def smallest_families(tube, knot, hamiltonian: bool, max_span: int):
    """Smallest-span pattern families per class as ``{cls: (span, [ColumnPattern])}``."""
    from .enumeration.census import span_census
    from .enumeration.api import HAM_BOUNDARY_COLUMNS, _prime_for
    from .patterns import LOCAL, NONLOCAL
    from .transfer import ColumnPattern

    prime = _prime_for(knot)
    found: dict = {}
    for s in range(2, max_span + 1):
        c = span_census(tube, s, hamiltonian, prime, keep_records=True,
                        boundary_columns=HAM_BOUNDARY_COLUMNS if hamiltonian else None)
        for cls in (NONLOCAL, LOCAL):
            if cls in found:
                continue
            pats = [ColumnPattern(r.start, r.masks) for r in c.records
                    if r.dc.name == knot.name and r.classification == cls]
            if pats:
                found[cls] = (s, pats)
        if len(found) == 2:
            break
    return found


def cmd_limit_prob(a, run: RunOutputs) -> None:
    from .errors import NotFoundWithinLimit
    from .knots import parse_knot
    from .transfer import PatternFamily, build, check_primitive, dominant, family_probability, g_star

    tube = _tube(a.tube)
    knot = parse_knot(a.knot)
    grid = _grid(a.grid)
    ens = ["fixed-edge", "fixed-span"] if a.ensemble == "both" else [a.ensemble]
    ham = a.ensemble == "hamiltonian"
    system = build(tube, hamiltonian=ham)
    check_primitive(system)
    fams = smallest_families(tube, knot, ham, a.max_span)
    if not fams:
        raise NotFoundWithinLimit(f"no {knot.name} pattern up to span {a.max_span}")
    pf = {cls: (span, PatternFamily.from_patterns(system, pats)) for cls, (span, pats) in fams.items()}
    rows = []
    for e in ens:
        points = [0.0] if e == "hamiltonian" else grid
        for p in points:
            g = g_star(system, p) if e == "fixed-edge" else p
            eig = dominant(system, g)
            axis = "f" if e == "fixed-edge" else "g"
            for cls, (span, fam) in sorted(pf.items()):
                rows.append([tube.label, e, axis, p, knot.name, cls, span, len(fam),
                             repr(family_probability(fam, eig))])
    run.emit(a.out, _csv(LIMIT_HEADER, rows))


def cmd_sample(a, run: RunOutputs) -> None:
    from .lattice import format_directions
    from .sampling import RNG_NAME, build_sampler, draw

    tube = _tube(a.tube)
    if a.span < 1 or a.n < 1:
        raise UsageError("--span and --n must be positive")
    tab = build_sampler(tube, a.span, a.g, a.hamiltonian)
    batch = draw(tab, a.seed, a.n, a.replica)
    run.params["rng"] = RNG_NAME
    lines = "".join(format_directions(p).replace("\n", " ").strip() + "\n" for p in batch)
    if a.out is None or a.out == "-":
        sys.stdout.write(lines)
    else:
        data = gzip.compress(lines.encode(), mtime=0) if a.out.endswith(".gz") else lines.encode()
        run.write(a.out, data)


def _read_archive(path: str, tube):
    from .lattice import read_polygon

    raw = Path(path).read_bytes()
    if path.endswith(".gz"):
        raw = gzip.decompress(raw)
    for line in raw.decode().splitlines():
        if line.strip():
            head, _, body = line.partition(" ")
            rest = body.split(" ", 3)
            text = f"{head} {' '.join(rest[:3])}\n{rest[3] if len(rest) > 3 else ''}\n"
            yield read_polygon(text, tube)


def cmd_estimate(a, run: RunOutputs) -> None:
    from .sampling import ESTIMATE_HEADER, PatternClassifier, RNG_NAME, build_sampler, draw, estimate
    from .sampling.estimate import summarise

    tube = _tube(a.tube)
    knots = [k.strip() for k in a.knots.split(",") if k.strip()]
    ensemble = "hamiltonian" if a.hamiltonian else "fixed-span"
    clf = PatternClassifier()
    rows = []
    if a.inp:
        summ = summarise(_read_archive(a.inp, tube), clf)
        for r in estimate(summ, knots, s=a.span if a.span else -1, g=a.g, ensemble=ensemble,
                          tube=tube.label):
            rows.append(r.row())
    else:
        spans = _ints(a.spans, "--spans")
        if not spans or min(spans) < 1 or a.n < 1:
            raise UsageError("--spans and --n must be positive")
        run.params["rng"] = RNG_NAME
        for s in spans:
            tab = build_sampler(tube, s, a.g, a.hamiltonian)
            batch = draw(tab, a.seed, a.n, a.replica)
            summ = summarise(batch, clf)
            for r in estimate(summ, knots, s=s, g=a.g, ensemble=ensemble, tube=tube.label):
                rows.append(r.row())
    run.emit(a.out, _csv(ESTIMATE_HEADER, rows))


# ------------------------------------------------------------------ report

SCHEMAS = {
    "census": ["tube", "knot", "class", "hamiltonian", "span", "count"],
    "estimates": ["tube", "s", "g", "ensemble", "knot", "class", "estimate", "ci_lo", "ci_hi", "n"],
    "limit": LIMIT_HEADER,
    "free-energy": ["tube", "ensemble", "param", "value"],
    "classify": CLASSIFY_HEADER,
}

REPORTS = {
    "table1_census.csv": ["tube", "knot", "hamiltonian", "span", "NonLocal", "Local"],
    "fig4_limit_probabilities.csv": ["tube", "ensemble", "axis", "param", "knot", "NonLocal", "Local"],
    "fig5_class_probabilities.csv": ["tube", "ensemble", "knot", "s", "NonLocal", "NonLocal_lo",
                                     "NonLocal_hi", "Local", "Local_lo", "Local_hi"],
    "fig7_nonlocal_fraction.csv": ["tube", "ensemble", "knot", "s", "fraction", "ci_lo", "ci_hi", "n"],
    "fig8_mean_spans.csv": ["tube", "ensemble", "knot", "s", "NonLocal", "NonLocal_lo", "NonLocal_hi",
                            "Local", "Local_lo", "Local_hi"],
}


def _schema_of(path: str, header: list[str]) -> str:
    for name, cols in SCHEMAS.items():
        if header == cols:
            return name
    # name the first offending column against the closest schema
    best = max(SCHEMAS.values(), key=lambda cols: len(set(cols) & set(header)))
    for i, col in enumerate(best):
        if i >= len(header) or header[i] != col:
            raise SchemaMismatch(col, path)
    raise SchemaMismatch(header[len(best)], path)


def build_reports(paths: list[str]) -> dict[str, str]:
    """Pivot result CSVs into one table per figure analogue."""
    data = defaultdict(list)
    for p in paths:
        with open(p, newline="") as fh:
            rd = csv.reader(fh)
            header = next(rd, None)
            if header is None:
                raise SchemaMismatch("<header>", p)
            kind = _schema_of(p, header)
            for row in rd:
                if len(row) != len(header):
                    raise SchemaMismatch(header[min(len(row), len(header) - 1)], p)
                data[kind].append(dict(zip(header, row)))
    out: dict[str, list] = {k: [] for k in REPORTS}
    cen = defaultdict(dict)
    for r in data["census"]:
        cen[(r["tube"], r["knot"], r["hamiltonian"], int(r["span"]))][r["class"]] = r["count"]
    for k, v in sorted(cen.items()):
        out["table1_census.csv"].append([*k, v.get("NonLocal", ""), v.get("Local", "")])
    lim = defaultdict(dict)
    for r in data["limit"]:
        lim[(r["tube"], r["ensemble"], r["axis"], float(r["param"]), r["knot"])][r["class"]] = r["probability"]
    for k, v in sorted(lim.items()):
        out["fig4_limit_probabilities.csv"].append([*k, v.get("NonLocal", ""), v.get("Local", "")])
    est = defaultdict(dict)
    for r in data["estimates"]:
        est[(r["tube"], r["ensemble"], r["knot"], int(r["s"]))][r["class"]] = (r["estimate"], r["ci_lo"],
                                                                           r["ci_hi"], r["n"])
    blank = ("", "", "", "")
    for k, v in sorted(est.items()):
        nl, lo = v.get("NonLocal", blank), v.get("Local", blank)
        if "NonLocal" in v or "Local" in v:
            out["fig5_class_probabilities.csv"].append([*k, *nl[:3], *lo[:3]])
        if "NonLocalFraction" in v:
            out["fig7_nonlocal_fraction.csv"].append([*k, *v["NonLocalFraction"]])
        ms_nl, ms_l = v.get("MeanSpan:NonLocal", blank), v.get("MeanSpan:Local", blank)
        if "MeanSpan:NonLocal" in v or "MeanSpan:Local" in v:
            out["fig8_mean_spans.csv"].append([*k, *ms_nl[:3], *ms_l[:3]])
    return {name: _csv(REPORTS[name], rows) for name, rows in out.items()}


def cmd_report(a, run: RunOutputs) -> None:
    tables = build_reports(a.inp or [])
    out_dir = Path(a.out_dir)
    for name, text in tables.items():
        run.write(out_dir / name, text)


# ------------------------------------------------------------------ parser


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tubeknot", description="Knotted polygons in lattice tubes.")
    ap.add_argument("--version", action="version", version=f"tubeknot {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, out=True):
        if out:
            p.add_argument("--out", help="output file (default: standard output)")
        p.add_argument("--manifest", help="manifest path (default: <first output>.manifest.json)")

    p = sub.add_parser("enumerate", help="exact polygon counts p_n(s)")
    p.add_argument("--tube", required=True)
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--hamiltonian", action="store_true")
    p.add_argument("--method", choices=("transfer", "dfs"), default="transfer")
    p.add_argument("--node-limit", type=int)
    p.add_argument("--checkpoint")
    p.add_argument("--resume")
    common(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("smallest-patterns", help="census of knot patterns by span")
    p.add_argument("--tube", required=True)
    p.add_argument("--knot", default="3_1")
    p.add_argument("--max-span", type=int, required=True)
    p.add_argument("--min-span", type=int, default=2)
    p.add_argument("--polygons", choices=("all", "hamiltonian", "both"), default="both")
    p.add_argument("--class", dest="cls")
    common(p)
    p.set_defaults(func=cmd_smallest_patterns)

    p = sub.add_parser("classify", help="classify the proper patterns of polygon files")
    p.add_argument("--in", dest="inp", nargs="+", required=True)
    p.add_argument("--tube")
    p.add_argument("--all-patterns", action="store_true", help="also list unknotted patterns")
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("free-energy", help="free energies on a parameter grid")
    p.add_argument("--tube", required=True)
    p.add_argument("--ensemble", choices=ENSEMBLES, default="fixed-edge")
    p.add_argument("--grid", default="-5:5:0.5")
    common(p)
    p.set_defaults(func=cmd_free_energy)

    p = sub.add_parser("limit-prob", help="limiting probabilities of smallest knot patterns")
    p.add_argument("--tube", required=True)
    p.add_argument("--knot", default="3_1")
    p.add_argument("--ensemble", choices=ENSEMBLES + ("both",), default="both")
    p.add_argument("--grid", default="-5:5:0.5")
    p.add_argument("--max-span", type=int, default=8)
    common(p)
    p.set_defaults(func=cmd_limit_prob)

    p = sub.add_parser("sample", help="draw fixed-span polygons")
    p.add_argument("--tube", required=True)
    p.add_argument("--span", type=int, required=True)
    p.add_argument("--g", type=float, default=0.0)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--replica", type=int, default=0)
    p.add_argument("--hamiltonian", action="store_true")
    common(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("estimate", help="knot-pattern statistics from samples")
    p.add_argument("--tube", required=True)
    p.add_argument("--spans", default="20")
    p.add_argument("--span", type=int, help="span of the polygons in --in")
    p.add_argument("--g", type=float, default=0.0)
    p.add_argument("--n", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--replica", type=int, default=0)
    p.add_argument("--hamiltonian", action="store_true")
    p.add_argument("--knots", default="3_1")
    p.add_argument("--in", dest="inp", help="sample archive written by 'sample'")
    common(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("report", help="pivot result CSVs into figure tables")
    p.add_argument("--in", dest="inp", nargs="*", default=[])
    p.add_argument("--out-dir", required=True)
    p.add_argument("--manifest")
    p.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    ap = make_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    params = {k: v for k, v in vars(a).items() if k not in ("func",)}
    run = RunOutputs(a.command, params, getattr(a, "seed", None))
    try:
        a.func(a, run)
        run.finish(getattr(a, "manifest", None))
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except TubeKnotError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    return 0


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
