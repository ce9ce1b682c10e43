"""Regenerate the CLI input fixtures and golden outputs under tests/fixtures/.

    python3 scripts/make_cli_fixtures.py            # inputs + goldens
    python3 scripts/make_cli_fixtures.py --inputs   # inputs only
"""

import argparse
import contextlib
import io
import json
from pathlib import Path

import numpy as np

from kgeodetic.cli import main
from kgeodetic.graph import petersen_graph, subdivide_edges
from kgeodetic.synthetic import correlated_groups

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

# name -> argv with {dir} standing for the fixture directory
CASES = {
    "cluster_points": ["cluster", "{dir}/points.csv", "--delta", "0.5"],
    "cluster_points_similarity": ["cluster", "{dir}/points.csv", "--delta", "0.5", "--weight", "similarity"],
    "cluster_points_dot": ["cluster", "{dir}/points.csv", "--delta", "0.5", "--output", "dot"],
    "structure_points": ["structure", "{dir}/points.csv", "--delta", "0.5"],
    "structure_corr": ["structure", "{dir}/corr.csv", "--input-kind", "correlation-matrix", "--delta", "0.5"],
    "structure_graph": ["structure", "{dir}/bowtie.txt", "--input-kind", "graph"],
    "graph_props_petersen": ["graph-props", "{dir}/petersen.txt"],
    "graph_props_subdivided": ["graph-props", "{dir}/petersen_subdivided.txt"],
    "select_vars_groups": ["select-vars", "{dir}/groups.csv", "--delta", "0.9", "--response", "y"],
    "select_vars_dot": ["select-vars", "{dir}/groups.csv", "--delta", "0.9", "--output", "dot"],
    "regress_plain": ["regress", "{dir}/plain.csv", "--response", "y", "--significance"],
    "regress_ridge_groups": ["regress", "{dir}/groups.csv", "--response", "y", "--alpha", "0.1"],
}


def write_csv(path, header, rows):
    lines = [",".join(header)] + [",".join(repr(float(v)) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_edges(path, g, comment):
    lines = [f"# {comment}"] + [f"v{u} v{v}" for u, v in g.edges]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_inputs():
    FIXTURES.mkdir(parents=True, exist_ok=True)
    write_csv(FIXTURES / "points.csv", ["x", "y"], [[0.0, 0.0], [0.1, 0.0], [0.0, 0.1], [5.0, 5.0]])

    r = np.array([[1.0, 0.8, 0.1, 0.0], [0.8, 1.0, 0.2, 0.1], [0.1, 0.2, 1.0, 0.7], [0.0, 0.1, 0.7, 1.0]])
    write_csv(FIXTURES / "corr.csv", ["p", "q", "r", "s"], r)

    (FIXTURES / "bowtie.txt").write_text("# two triangles sharing vertex c\na b\na c\nb c\nc d\nc e\nd e\n",
                                         encoding="utf-8")
    write_edges(FIXTURES / "petersen.txt", petersen_graph(), "Petersen graph")
    sub = subdivide_edges(petersen_graph(), [1, 0, 2] + [0] * 12)
    write_edges(FIXTURES / "petersen_subdivided.txt", sub, "Petersen graph with three subdivision vertices")

    ds = correlated_groups(seed=0)
    write_csv(FIXTURES / "groups.csv", list(ds.labels) + ["y"], np.column_stack([ds.X, ds.y]))

    rng = np.random.default_rng(42)
    X = rng.standard_normal((40, 3))
    y = X @ [1.5, 0.0, -0.5] + 0.1 * rng.standard_normal(40)
    write_csv(FIXTURES / "plain.csv", ["u", "v", "w", "y"], np.column_stack([X, y]))
    (FIXTURES / "cases.json").write_text(json.dumps(CASES, indent=2) + "\n", encoding="utf-8")


def invoke(argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


def write_goldens():
    for name, argv in CASES.items():
        # goldens are produced from relative paths so the config echo is machine independent
        code, out, err = invoke([a.replace("{dir}", "tests/fixtures") for a in argv])
        if code != 0:
            raise SystemExit(f"{name}: exit {code}: {err}")
        (FIXTURES / f"{name}.golden").write_text(out, encoding="utf-8")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--inputs", action="store_true", help="skip golden outputs")
    args = ap.parse_args()
    write_inputs()
    if not args.inputs:
        write_goldens()
