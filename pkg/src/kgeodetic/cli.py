"""``kgeo`` command line: threshold graphs, clusterings, structure reports,
variable selection and regression from CSV or edge-list input.

Exit status: 0 success, 1 usage error, 2 data error, 3 exact-search cap exceeded.
Errors go to stderr as one line of JSON; stdout carries only the report.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import cover as cv
from . import graph as gr
from . import regression as rg
from .errors import CapExceeded, DataError, MissingValues, NonSimpleGraph
from .matrices import (
    CorrelationMatrix,
    DistanceMatrix,
    ThresholdConfig,
    distance_matrix,
    read_matrix,
    read_observations,
    threshold_correlation,
    threshold_distance,
)

INPUT_KINDS = ("observations", "distance-matrix", "correlation-matrix", "graph")
EDGE_CAP_ENV = "GEO_EXACT_EDGE_CAP"
SIG_DIGITS = 12


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    input_path: str
    input_kind: str = "observations"
    delta: float | None = None
    metric: str = "euclidean"
    weight: str = "unit"
    mode: str = "edge-disjoint"
    alpha: float | None = None
    response_column: str | None = None
    exact_edge_cap: int = cv.DEFAULT_EDGE_CAP
    clique_cap: int = cv.DEFAULT_CLIQUE_CAP
    output: str = "json"
    significance: bool = False
    seed: int | None = None


@dataclass
class AnalysisReport:
    config: dict
    results: dict
    warnings: list = field(default_factory=list)
    dot: str | None = None

    def to_json(self) -> str:
        payload = {"command": self.config["command"], "config": self.config,
                   "results": self.results, "warnings": self.warnings}
        return json.dumps(_clean(payload), indent=2, ensure_ascii=False) + "\n"


def _clean(obj: Any) -> Any:
    """JSON-safe copy with floats cut to 12 significant digits."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return str(x)
        x = float(f"{x:.{SIG_DIGITS}g}")
        return 0.0 if x == 0 else x
    return obj


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kgeo", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def common(p, kinds, default_kind):
        p.add_argument("input_path", metavar="INPUT")
        p.add_argument("--input-kind", choices=kinds, default=default_kind)
        p.add_argument("--output", choices=("json", "dot"), default="json")
        p.add_argument("--exact-edge-cap", type=int, default=None)
        p.add_argument("--clique-cap", type=int, default=cv.DEFAULT_CLIQUE_CAP)
        p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("cluster", help="base cluster system of a distance threshold graph")
    common(p, ("observations", "distance-matrix"), "observations")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--metric", choices=("euclidean", "manhattan"), default="euclidean")
    p.add_argument("--weight", choices=("unit", "similarity"), default="unit")

    p = sub.add_parser("structure", help="clique cover and geodetic profile of a threshold graph")
    common(p, INPUT_KINDS, "observations")
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--metric", choices=("euclidean", "manhattan"), default="euclidean")
    p.add_argument("--weight", choices=("unit", "similarity"), default="unit")
    p.add_argument("--mode", choices=("edge-disjoint", "vertex-disjoint"), default="edge-disjoint")

    p = sub.add_parser("select-vars", help="representative variables of correlated groups")
    common(p, ("observations",), "observations")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--weight", choices=("unit", "similarity"), default="unit")
    p.add_argument("--response", dest="response_column", default=None)

    p = sub.add_parser("regress", help="OLS, or ridge when --alpha is given")
    common(p, ("observations",), "observations")
    p.add_argument("--response", dest="response_column", required=True)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--significance", action="store_true")

    p = sub.add_parser("graph-props", help="geodetic, Moore and homeomorphism properties of a graph")
    common(p, ("graph",), "graph")
    return parser


def parse_args(argv: Sequence[str]) -> RunConfig:
    ns = vars(_build_parser().parse_args(list(argv)))
    cap = ns.pop("exact_edge_cap")
    if cap is None:
        env = os.environ.get(EDGE_CAP_ENV)
        try:
            cap = int(env) if env else cv.DEFAULT_EDGE_CAP
        except ValueError:
            raise UsageError(f"{EDGE_CAP_ENV} must be an integer, got {env!r}") from None
    cfg = RunConfig(exact_edge_cap=cap, **ns)
    if cfg.command in ("cluster", "select-vars"):
        cfg.mode = "vertex-disjoint"
    if cfg.exact_edge_cap < 0 or cfg.clique_cap < 1:
        raise UsageError("argument --exact-edge-cap/--clique-cap: must be nonnegative/positive")
    if cfg.delta is not None and not cfg.delta > 0:
        raise UsageError("argument --delta: must be > 0")
    if cfg.command == "structure" and cfg.input_kind != "graph" and cfg.delta is None:
        raise UsageError("argument --delta: required unless --input-kind graph")
    if cfg.command == "structure" and cfg.input_kind == "graph" and cfg.weight == "similarity":
        raise UsageError("argument --weight: similarity weights need a matrix input")
    if cfg.input_kind == "correlation-matrix" and cfg.delta is not None and cfg.delta >= 1:
        raise UsageError("argument --delta: correlation thresholds must be below 1")
    if cfg.alpha is not None and not cfg.alpha > 0:
        raise UsageError("argument --alpha: must be > 0")
    if cfg.command == "regress" and cfg.output == "dot":
        raise UsageError("argument --output: regress has no graph to draw")
    return cfg


# -- pipelines ----------------------------------------------------------------


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_distance(cfg: RunConfig) -> DistanceMatrix:
    text = _read(cfg.input_path)
    if cfg.input_kind == "distance-matrix":
        labels, a = read_matrix(text)
        return DistanceMatrix(a, tuple(labels))
    _, table = read_observations(text)
    return distance_matrix(table, cfg.metric)


def _cover_json(cover: cv.Cover, g: gr.Graph) -> dict:
    lab = g.labels
    return {
        "mode": cover.disjointness,
        "method": cover.method,
        "J": cover.value,
        "cliques": [[lab[v] for v in c] for c in cover.cliques],
        "uncovered_edges": [[lab[u], lab[v]] for u, v in cover.uncovered_edges],
    }


def _cover_warning(g: gr.Graph, cap: int) -> list[str]:
    if g.m > cap:
        return [f"threshold graph has {g.m} edges > exact cap {cap}; greedy cover used"]
    return []


def _run_cluster(cfg: RunConfig, report: AnalysisReport) -> None:
    d = _load_distance(cfg)
    tcfg = ThresholdConfig(cfg.delta, "distance")
    system = cv.base_cluster_system(d, tcfg, cv.WeightFunction(cfg.weight), cfg.exact_edge_cap)
    g = system.graph
    clusters = []
    for members, center in zip(system.clusters, system.centers):
        clusters.append({
            "members": [g.labels[v] for v in members],
            "center": g.labels[center],
            "structure": cv.classify_cluster_structure(members, g).to_json(),
        })
    report.results = {
        "level": system.level,
        "mode": "vertex-disjoint",
        "J": system.cover.value,
        "cover_method": system.cover.method,
        "clusters": clusters,
        "inter_cluster_edges": [[g.labels[u], g.labels[v]] for u, v in system.cover.uncovered_edges],
    }
    report.warnings += _cover_warning(g, cfg.exact_edge_cap)
    groups = {v: i for i, c in enumerate(system.clusters) for v in c}
    report.dot = g.to_dot(groups)


def _run_structure(cfg: RunConfig, report: AnalysisReport) -> None:
    w = cv.WeightFunction(cfg.weight)
    if cfg.input_kind == "graph":
        g = gr.parse_edge_list(_read(cfg.input_path))
        if not g.simple:
            raise NonSimpleGraph("structure analysis needs a simple graph")
    elif cfg.input_kind == "correlation-matrix":
        labels, a = read_matrix(_read(cfg.input_path))
        r = CorrelationMatrix(a, tuple(labels))
        tcfg = ThresholdConfig(cfg.delta, "correlation")
        g = threshold_correlation(r, tcfg)
        w = w.bind(r, tcfg)
    else:
        d = _load_distance(cfg)
        tcfg = ThresholdConfig(cfg.delta, "distance")
        g = threshold_distance(d, tcfg)
        w = w.bind(d, tcfg)
    cover = cv.best_cover(g, w, cfg.mode, cfg.exact_edge_cap)
    components = []
    for comp in g.components():
        components.append({
            "members": [g.labels[v] for v in comp],
            "structure": cv.classify_cluster_structure(comp, g).to_json(),
        })
    report.results = {
        "vertices": g.n,
        "edges": g.m,
        "maximal_cliques": [[g.labels[v] for v in c] for c in cv.maximal_cliques(g, cfg.clique_cap)],
        "cover": _cover_json(cover, g),
        "components": components,
    }
    report.warnings += _cover_warning(g, cfg.exact_edge_cap)
    groups = {v: i for i, comp in enumerate(g.components()) for v in comp}
    report.dot = g.to_dot(groups)


def _load_dataset(cfg: RunConfig) -> rg.Dataset:
    header, table = read_observations(_read(cfg.input_path))
    if np.isnan(table).any():
        rows, cols = np.nonzero(np.isnan(table))
        raise MissingValues(f"missing value at data row {rows[0] + 1}, column {header[cols[0]]!r}")
    return rg.Dataset.from_table(header, table, cfg.response_column)


def _run_select_vars(cfg: RunConfig, report: AnalysisReport) -> None:
    ds = _load_dataset(cfg)
    reps = rg.select_representatives(ds, cfg.delta, cv.WeightFunction(cfg.weight), cfg.exact_edge_cap)
    results = {"delta": cfg.delta, "selection": reps.to_json(),
               "full_diagnostics": rg.multicollinearity_check(ds).to_json()}
    if cfg.response_column is not None:
        model = rg.reduced_fit(ds, reps)
        results["reduced_model"] = model.to_json()
        report.warnings += [f"reduced model flag: {f}" for f in model.flags]
    report.results = results
    report.warnings += _cover_warning(reps.graph, cfg.exact_edge_cap)
    groups = {v: i for i, grp in enumerate(reps.groups) for v in grp}
    report.dot = reps.graph.to_dot(groups)


def _run_regress(cfg: RunConfig, report: AnalysisReport) -> None:
    ds = _load_dataset(cfg)
    model = rg.ridge_fit(ds, cfg.alpha) if cfg.alpha is not None else rg.ols_fit(ds)
    results = {"model": model.to_json(), "diagnostics": rg.multicollinearity_check(ds).to_json()}
    if cfg.significance:
        sig = rg.significance_scores(ds, cfg.alpha)
        results["significance"] = sig.to_json()
        if sig.fallbacks:
            report.warnings.append(f"ridge fallback used for: {', '.join(map(str, sig.fallbacks))}")
    report.warnings += [f"model flag: {f}" for f in model.flags]
    report.results = results


def _run_graph_props(cfg: RunConfig, report: AnalysisReport) -> None:
    g = gr.parse_edge_list(_read(cfg.input_path))
    moore = gr.moore_certificate(g)
    hm = gr.homeomorphic_to_moore(g)
    report.results = {
        "vertices": g.n,
        "edges": g.m,
        "geodetic_index": gr.geodetic_index(g),
        "is_geodetic": gr.is_geodetic(g),
        "diameter": gr.diameter(g),
        "girth": gr.girth(g),
        "moore": moore.to_json() if moore else None,
        "homeomorphic_to_complete": gr.homeomorphic_to_complete(g),
        "homeomorphic_to_moore": hm.to_json() if hm else None,
        "degenerate_reduction": gr.is_degenerate_reduction(g),
    }
    report.dot = g.to_dot()


_DISPATCH = {
    "cluster": _run_cluster,
    "structure": _run_structure,
    "select-vars": _run_select_vars,
    "regress": _run_regress,
    "graph-props": _run_graph_props,
}


def execute(cfg: RunConfig) -> AnalysisReport:
    """Run a pipeline; library exceptions propagate."""
    report = AnalysisReport(config=asdict(cfg), results={})
    _DISPATCH[cfg.command](cfg, report)
    return report


def _error_line(kind: str, exc: BaseException) -> str:
    return json.dumps({"error": kind, "type": type(exc).__name__, "message": str(exc)})


def run(cfg: RunConfig) -> tuple[AnalysisReport | None, int]:
    """Execute and map failures to exit codes, reporting them on stderr."""
    try:
        report = execute(cfg)
    except CapExceeded as exc:
        print(_error_line("cap-exceeded", exc), file=sys.stderr)
        return None, 3
    except (DataError, ValueError, OSError) as exc:
        print(_error_line("data", exc), file=sys.stderr)
        return None, 2
    if cfg.output == "dot":
        sys.stdout.write(report.dot)
    else:
        sys.stdout.write(report.to_json())
    return report, 0


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_args(argv)
    except UsageError as exc:
        print(_error_line("usage", exc), file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    return run(cfg)[1]


if __name__ == "__main__":
    sys.exit(main())
