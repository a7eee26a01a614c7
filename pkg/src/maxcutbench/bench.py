"""Benchmark harness: manifests, external results, comparison and reports.

Objectives are held internally as cut values (larger is better). Values
read from or written to tables follow the published sign convention: the
be and bqp sets print ``-cut`` (their files encode a minimization), the G
set and custom instances print the cut itself.
"""
from __future__ import annotations

import csv
import io
import json
import os
import re
import time
from collections import OrderedDict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from . import formats
from .anneal import PRESETS, SaRunConfig, sa_solve
from .exact import branch_and_bound, brute_force
from .graph import Graph, cut_value

DATASETS = ("be", "bqp", "G", "custom")
NEGATED = ("be", "bqp")


class BenchError(ValueError):
    pass


def to_reported(cut: int, dataset: str) -> int:
    return -int(cut) if dataset in NEGATED else int(cut)


def from_reported(value: int, dataset: str) -> int:
    return -int(value) if dataset in NEGATED else int(value)


def infer_dataset(name: str) -> str:
    if name.startswith("bqp"):
        return "bqp"
    if name.startswith("be"):
        return "be"
    if re.fullmatch(r"G\d+", name):
        return "G"
    return "custom"


@dataclass
class InstanceRecord:
    name: str
    path: Path | None = None
    dataset: str = "custom"
    n: int | None = None
    best_known: int | None = None  # published sign convention
    optimum_certified: bool = False
    format: str = "edge-list"

    def __post_init__(self):
        if self.dataset not in DATASETS:
            raise BenchError(f"{self.name}: unknown dataset {self.dataset!r}")
        if self.optimum_certified and self.best_known is None:
            raise BenchError(f"{self.name}: certified optimum needs best_known")
        if self.path is not None:
            self.path = Path(self.path)

    @property
    def best_known_cut(self) -> int | None:
        if self.best_known is None:
            return None
        return from_reported(self.best_known, self.dataset)

    def load(self) -> Graph:
        if self.path is None:
            raise BenchError(f"{self.name}: no instance file configured")
        if not self.path.exists():
            raise BenchError(f"{self.name}: instance file {self.path} not found")
        if self.format == "edge-list":
            g = formats.read_edge_list(self.path)
        elif self.format == "laplacian":
            scale = "quarter-L" if self.dataset in NEGATED else "L"
            g = formats.graph_from_laplacian(formats.read_laplacian(self.path), scale)
        elif self.format == "coupling-dict":
            conv = "be-bqp" if self.dataset in NEGATED else "gset"
            d = formats.read_coupling_dict(self.path, conv)
            g = formats.graph_from_coupling_dict(d, conv, self.n)
        else:
            raise BenchError(f"{self.name}: unknown instance format {self.format!r}")
        if self.n is not None and g.n != self.n:
            raise BenchError(f"{self.name}: file has n={g.n}, manifest says {self.n}")
        return g


@dataclass(frozen=True)
class SolverConfig:
    """A local solver run: ``kind`` is ``exact``, ``bb`` or ``sa``."""

    id: str
    kind: str
    preset: str = "sa2"
    seed: int = 0
    restarts: int = 1
    time_limit: float | None = None
    polish: bool = False
    schedule: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("exact", "bb", "sa"):
            raise BenchError(f"solver {self.id}: unknown kind {self.kind!r}")
        if self.kind == "sa" and self.preset not in PRESETS:
            raise BenchError(f"solver {self.id}: unknown preset {self.preset!r}")

    def run_config(self, seed: int) -> SaRunConfig:
        schedule = PRESETS[self.preset](**dict(self.schedule))
        return SaRunConfig(schedule, seed=seed, restarts=self.restarts, polish=self.polish)


@dataclass
class ExternalResult:
    instance: str
    solver_id: str
    value: int  # published sign convention
    time_s: float | None = None
    cut_vector: Path | None = None


@dataclass
class Counts:
    best: int = 0
    only: int = 0
    worst: int = 0

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.best, self.only, self.worst)


@dataclass
class BenchRow:
    instance: str
    dataset: str
    solver: str
    cut: int
    time_s: float | None
    best_known_cut: int | None
    source: str

    @property
    def reported(self) -> int:
        return to_reported(self.cut, self.dataset)

    @property
    def gap(self) -> int | None:
        if self.best_known_cut is None:
            return None
        return self.best_known_cut - self.cut


@dataclass
class BenchReport:
    rows: list[BenchRow]
    summary: dict[str, dict[str, Counts]]  # dataset -> solver -> counts

    def values(self) -> dict[str, dict[str, int]]:
        out: dict[str, dict[str, int]] = OrderedDict()
        for r in self.rows:
            out.setdefault(r.instance, OrderedDict())[r.solver] = r.cut
        return out

    def to_csv(self, timings: bool = False) -> str:
        return report_csv(self, timings)

    def to_markdown(self, timings: bool = False) -> str:
        return report_markdown(self, timings)


# -- summary ------------------------------------------------------------------

def summarize(values: Mapping[str, Mapping[str, int]]) -> dict[str, Counts]:
    """Best/only/worst tallies per solver.

    For every instance, among the solvers that reported a value: *best* goes
    to each solver reaching the maximum, *only* to a sole maximizer, and
    *worst* to each solver at the minimum when that minimum is strictly below
    the maximum. Values must be oriented so that larger is better.
    """
    if not values:
        raise BenchError("nothing to summarize")
    counts: dict[str, Counts] = {}
    for per_solver in values.values():
        for s in per_solver:
            counts.setdefault(s, Counts())
    for per_solver in values.values():
        if not per_solver:
            continue
        top = max(per_solver.values())
        low = min(per_solver.values())
        winners = [s for s, v in per_solver.items() if v == top]
        for s in winners:
            counts[s].best += 1
        if len(winners) == 1:
            counts[winners[0]].only += 1
        if low < top:
            for s, v in per_solver.items():
                if v == low:
                    counts[s].worst += 1
    return dict(sorted(counts.items()))


# -- loading ------------------------------------------------------------------

def load_manifest(path: str | os.PathLike) -> tuple[list[InstanceRecord], list[SolverConfig]]:
    """Read a JSON manifest with ``instances`` and optional ``solvers`` lists.

    Relative instance paths resolve against the manifest's directory.
    """
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise BenchError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    base = path.parent
    instances = []
    for entry in doc.get("instances", []):
        entry = dict(entry)
        if "dataset" not in entry:
            entry["dataset"] = infer_dataset(entry["name"])
        if entry.get("path") is not None:
            entry["path"] = base / entry["path"]
        instances.append(InstanceRecord(**entry))
    solvers = [SolverConfig(**s) for s in doc.get("solvers", [])]
    names = [r.name for r in instances]
    if len(set(names)) != len(names):
        raise BenchError(f"{path}: duplicate instance names")
    return instances, solvers


def parse_external(text: str, source: str = "<string>", base: Path | None = None
                   ) -> list[ExternalResult]:
    """JSON Lines with keys ``instance``, ``solver``, ``value`` and optional
    ``time_s`` and ``cut_vector`` (a path)."""
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise BenchError(f"{source}:{lineno}:{exc.colno}: {exc.msg}") from None
        missing = {"instance", "solver", "value"} - rec.keys()
        if missing:
            raise BenchError(f"{source}:{lineno}: missing fields {sorted(missing)}")
        if not isinstance(rec["value"], int):
            raise BenchError(f"{source}:{lineno}: value must be an integer")
        vec = rec.get("cut_vector")
        if vec is not None:
            vec = Path(vec) if base is None else base / vec
        out.append(ExternalResult(rec["instance"], rec["solver"], rec["value"],
                                  rec.get("time_s"), vec))
    return out


def load_external(path: str | os.PathLike) -> list[ExternalResult]:
    path = Path(path)
    return parse_external(path.read_text(encoding="utf-8"), str(path), path.parent)


# -- running ------------------------------------------------------------------

def solve_graph(g: Graph, solver: SolverConfig, seed: int):
    if solver.kind == "exact":
        return brute_force(g)
    if solver.kind == "bb":
        return branch_and_bound(g, solver.time_limit)
    return sa_solve(g, solver.run_config(seed), solver_id=solver.id)


def _run_job(job):
    record, solver, seed = job
    g = record.load()
    t0 = time.perf_counter()
    res = solve_graph(g, solver, seed)
    elapsed = time.perf_counter() - t0
    value = cut_value(g, res.best_assignment)
    if value != res.best_value:
        raise BenchError(f"{record.name}/{solver.id}: witness cut {value} != {res.best_value}")
    return record.name, solver.id, int(value), elapsed


def job_seed(solver: SolverConfig, index: int) -> int:
    """Seed for the ``index``-th manifest instance."""
    return solver.seed + index


def run_bench(
    instances: Sequence[InstanceRecord],
    solvers: Sequence[SolverConfig] = (),
    external: Iterable[ExternalResult] = (),
    workers: int = 1,
) -> BenchReport:
    by_name = {r.name: r for r in instances}
    external = list(external)
    for e in external:
        if e.instance not in by_name:
            raise BenchError(f"external result for unknown instance {e.instance!r}")

    jobs = []
    if solvers:
        for idx, rec in enumerate(instances):
            if rec.path is None or not rec.path.exists():
                raise BenchError(f"{rec.name}: instance file {rec.path} not found")
            for s in solvers:
                jobs.append((rec, s, job_seed(s, idx)))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_job, jobs))
    else:
        results = [_run_job(j) for j in jobs]
    local = {(name, sid): (value, t) for name, sid, value, t in results}

    graphs: dict[str, Graph] = {}
    ext = {}
    for e in external:
        rec = by_name[e.instance]
        cut = from_reported(e.value, rec.dataset)
        if e.cut_vector is not None:
            if e.instance not in graphs:
                graphs[e.instance] = rec.load()
            g = graphs[e.instance]
            x = formats.read_cut_vector(e.cut_vector, g.n)
            actual = cut_value(g, x)
            if actual != cut:
                raise BenchError(
                    f"{e.instance}/{e.solver_id}: cut vector gives {actual}, value "
                    f"{e.value} means {cut} under the {rec.dataset} sign convention")
        key = (e.instance, e.solver_id)
        if key in ext or key in local:
            raise BenchError(f"duplicate result for {key}")
        ext[key] = (cut, e.time_s)

    solver_order = [s.id for s in solvers]
    for _, sid in ext:
        if sid not in solver_order:
            solver_order.append(sid)

    rows = []
    for rec in instances:
        for sid in solver_order:
            key = (rec.name, sid)
            if key in local:
                cut, t = local[key]
                source = "local"
            elif key in ext:
                cut, t = ext[key]
                source = "external"
            else:
                continue
            rows.append(BenchRow(rec.name, rec.dataset, sid, cut, t, rec.best_known_cut, source))

    grouped: dict[str, dict[str, dict[str, int]]] = OrderedDict()
    for r in rows:
        grouped.setdefault(r.dataset, OrderedDict()).setdefault(r.instance, {})[r.solver] = r.cut
    summary = {ds: summarize(vals) for ds, vals in grouped.items()}
    return BenchReport(rows, summary)


# -- reports ------------------------------------------------------------------

def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.2f}"
    return str(v)


def _row_fields(timings: bool) -> list[str]:
    cols = ["instance", "dataset", "solver", "value", "best_known", "gap"]
    return cols + ["time_s"] if timings else cols


def _row_values(r: BenchRow, timings: bool) -> list[str]:
    best = None if r.best_known_cut is None else to_reported(r.best_known_cut, r.dataset)
    vals = [r.instance, r.dataset, r.solver, r.reported, best, r.gap]
    if timings:
        vals.append(r.time_s)
    return [_fmt(v) for v in vals]


def report_csv(report: BenchReport, timings: bool = False) -> str:
    """Per-run rows; wall times are only included on request since they vary
    between otherwise identical runs."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(_row_fields(timings))
    for r in report.rows:
        w.writerow(_row_values(r, timings))
    return buf.getvalue()


def summary_csv(report: BenchReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(["dataset", "set_size", "solver", "best", "only", "worst"])
    for ds, per in report.summary.items():
        size = len({r.instance for r in report.rows if r.dataset == ds})
        for sid, c in per.items():
            w.writerow([ds, size, sid, c.best, c.only, c.worst])
    return buf.getvalue()


def _md_table(header: list[str], rows: list[list[str]]) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    lines += ["| " + " | ".join(r) + " |" for r in rows]
    return "\n".join(lines) + "\n"


def report_markdown(report: BenchReport, timings: bool = False) -> str:
    parts = ["## Results\n", _md_table(_row_fields(timings),
                                       [_row_values(r, timings) for r in report.rows])]
    parts.append("\n## Summary\n")
    srows = []
    for ds, per in report.summary.items():
        for sid, c in per.items():
            srows.append([ds, sid, str(c.best), str(c.only), str(c.worst)])
    parts.append(_md_table(["dataset", "solver", "best", "only", "worst"], srows))
    return "".join(parts)


# -- dataset validation -------------------------------------------------------

_CUT_SUFFIXES = ("_opt_cut.txt", "_best_cut.txt", "_cut.txt")
_VALUE_SUFFIXES = ("_opt_value.txt", "_best_value.txt", "_value.txt")


@dataclass
class ValidationEntry:
    name: str
    ok: bool
    cut: int | None = None
    value: int | None = None
    message: str = ""


@dataclass
class ValidationReport:
    entries: list[ValidationEntry]

    @property
    def ok(self) -> bool:
        return bool(self.entries) and all(e.ok for e in self.entries)

    @property
    def failures(self) -> list[ValidationEntry]:
        return [e for e in self.entries if not e.ok]


def _find_instance(directory: Path, stem: str, dataset: str) -> Graph:
    for suffix in (".sparse.mc", ".mc", ".txt", ""):
        p = directory / f"{stem}{suffix}"
        if p.is_file():
            return formats.read_edge_list(p)
    p = directory / f"{stem}_L.txt"
    if p.is_file():
        scale = "quarter-L" if dataset in NEGATED else "L"
        return formats.graph_from_laplacian(formats.read_laplacian(p), scale)
    raise FileNotFoundError(f"no instance file for {stem} in {directory}")


def validate_dataset(directory: str | os.PathLike, strict_sign: bool = False,
                     weight_divisor: int = 1) -> ValidationReport:
    """Check every (instance, cut vector, value) triple in ``directory``.

    By default the value file is compared by magnitude; with ``strict_sign``
    it must also follow the dataset's published sign convention.
    ``weight_divisor`` divides the cut of the instance file before comparing
    (for instance files stored with scaled weights). Per-triple errors are
    collected, not raised.
    """
    directory = Path(directory)
    stems = []
    for p in sorted(directory.iterdir()):
        for suf in _CUT_SUFFIXES:
            if p.name.endswith(suf):
                stems.append((p.name[: -len(suf)], p))
                break
    entries = []
    for stem, cut_path in stems:
        dataset = infer_dataset(stem)
        try:
            value_path = next((directory / f"{stem}{s}" for s in _VALUE_SUFFIXES
                               if (directory / f"{stem}{s}").is_file()), None)
            if value_path is None:
                raise FileNotFoundError(f"no value file for {stem}")
            g = _find_instance(directory, stem, dataset)
            x = formats.read_cut_vector(cut_path, g.n)
            value = formats.read_opt_value(value_path)
            raw = cut_value(g, x)
            if raw % weight_divisor:
                raise BenchError(f"cut {raw} not divisible by {weight_divisor}")
            cut = raw // weight_divisor
            if strict_sign:
                ok = value == to_reported(cut, dataset)
            else:
                ok = abs(value) == cut
            msg = "" if ok else f"cut vector gives {cut}, value file says {value}"
            entries.append(ValidationEntry(stem, ok, cut, value, msg))
        except (OSError, ValueError) as exc:
            entries.append(ValidationEntry(stem, False, message=str(exc)))
    return ValidationReport(entries)


# -- conversion ---------------------------------------------------------------

FORMATS = ("edge-list", "laplacian", "coupling-dict", "qubo-sparse")


def convert(src: str | os.PathLike, dst: str | os.PathLike, from_format: str,
            to_format: str, scale: str = "L", convention: str = "gset",
            qubo_scale: int = 1, n: int | None = None) -> dict:
    """Read ``src`` in one format and write ``dst`` in another.

    QUBO inputs become graphs through the gauge-vertex construction and
    graphs become QUBOs by pinning vertex 0; the returned dict records the
    objective identity of that step, if any.
    """
    from .transforms import maxcut_to_qubo, qubo_to_maxcut

    info: dict = {}
    if from_format == "edge-list":
        g = formats.read_edge_list(src)
    elif from_format == "laplacian":
        g = formats.graph_from_laplacian(formats.read_laplacian(src), scale)
    elif from_format == "coupling-dict":
        g = formats.graph_from_coupling_dict(formats.read_coupling_dict(src, convention),
                                             convention, n)
    elif from_format == "qubo-sparse":
        t = qubo_to_maxcut(formats.read_qubo_sparse(src), scale=qubo_scale)
        g = t.instance
        info = {"transform": "qubo->maxcut", "offset": t.offset, "factor": t.factor,
                "scale": t.scale}
    else:
        raise BenchError(f"unknown input format {from_format!r}")

    if to_format == "edge-list":
        formats.write_edge_list(g, dst)
    elif to_format == "laplacian":
        formats.write_laplacian(g, dst, scale)
    elif to_format == "coupling-dict":
        formats.write_coupling_dict(g, dst, convention)
    elif to_format == "qubo-sparse":
        t = maxcut_to_qubo(g)
        formats.write_qubo_sparse(t.instance, dst)
        info = {"transform": "maxcut->qubo", "offset": t.offset, "factor": t.factor,
                "scale": t.scale}
    else:
        raise BenchError(f"unknown output format {to_format!r}")
    return info
