"""Batch benchmark: solve seeded corpora, tabulate, plot, and cross-check.

The corpus spec is a JSON file:

    {"rows": [{"name": "small", "count": 50, "n": 12, "m": 18,
               "seed": 1000, "neg_prob": 0.25, "cap": null}, ...]}

Outputs into the chosen directory: ``summary.csv`` (one line per row),
``instances.csv`` (one line per instance), and two PNG figures.  Any
solver/oracle disagreement writes the instance next to them and aborts.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

from .analysis import EPSILON, WORST_CASE_LAMBDA
from .branch import SolverConfig, solve
from .formula import evaluate_exact, serialize
from .generate import gen_random
from .oracle import brute_force

ORACLE_VARS = 25


def _check_against_oracle(f, res, name, idx, out_dir: Path) -> None:
    if f.n > ORACLE_VARS:
        return
    want = brute_force(f)
    ok = want.sat == res.sat and (not res.sat or evaluate_exact(f, res.model))
    if ok:
        return
    repro = out_dir / f"disagreement_{name}_{idx}.x3s"
    repro.write_text(serialize(f))
    raise RuntimeError(
        f"solver disagrees with oracle on row {name!r} instance {idx} "
        f"(solver={res.sat}, oracle={want.sat}); instance written to {repro}")


def run_bench(spec_path: str | Path, out_dir: str | Path,
              config: SolverConfig | None = None) -> list[dict]:
    spec = json.loads(Path(spec_path).read_text())
    rows = spec.get("rows")
    if not isinstance(rows, list) or not rows:
        raise ValueError(f"{spec_path}: no 'rows' array")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    limit = math.log(WORST_CASE_LAMBDA) + EPSILON
    summaries = []
    per_instance = []
    for row in rows:
        name = str(row["name"])
        count = int(row["count"])
        n, m = int(row["n"]), int(row["m"])
        seed = int(row.get("seed", 0))
        neg_prob = float(row.get("neg_prob", 0.25))
        cap = row.get("cap")
        sat = 0
        nodes = []
        rates = []
        for i in range(count):
            f = gen_random(n, m, seed + i, neg_prob,
                           None if cap is None else int(cap))
            res = solve(f, config)
            _check_against_oracle(f, res, name, i, out)
            sat += int(res.sat)
            nodes.append(res.stats.nodes)
            rate = math.log(res.stats.nodes + 1) / m
            rates.append(rate)
            per_instance.append({
                "row": name, "index": i, "seed": seed + i, "n": n, "m": m,
                "sat": int(res.sat), "nodes": res.stats.nodes,
                "depth": res.stats.max_depth, "rate": rate,
            })
        summaries.append({
            "row": name, "count": count, "n": n, "m": m,
            "sat_fraction": sat / count,
            "mean_nodes": sum(nodes) / count,
            "max_nodes": max(nodes),
            "max_rate": max(rates),
            "bound_ok": int(max(rates) <= limit),
        })
    _write_csv(out / "summary.csv", summaries)
    _write_csv(out / "instances.csv", per_instance)
    _figures(out, per_instance, limit)
    return summaries


def _write_csv(path: Path, rows: list[dict]) -> None:
    with path.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]))
        w.writeheader()
        for r in rows:
            w.writerow({k: (f"{v:.6f}" if isinstance(v, float) else v)
                        for k, v in r.items()})


def _figures(out: Path, per_instance: list[dict], limit: float) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    counts = [r["nodes"] for r in per_instance]
    ax.hist(counts, bins=max(10, min(40, max(counts) + 1)), color="#4878d0")
    ax.set_xlabel("branch nodes")
    ax.set_ylabel("instances")
    ax.set_title("Search tree sizes")
    fig.tight_layout()
    fig.savefig(out / "nodes_hist.png", metadata={"Date": None})
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.scatter([r["m"] for r in per_instance],
               [r["rate"] for r in per_instance],
               s=12, alpha=0.6, color="#4878d0")
    ax.axhline(limit, color="#d65f5f", linestyle="--",
               label=f"bound {limit:.4f}")
    ax.set_xlabel("clauses (m)")
    ax.set_ylabel("log(nodes+1) / m")
    ax.set_title("Observed growth rate vs. worst-case bound")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out / "rate_scatter.png", metadata={"Date": None})
    plt.close(fig)


def format_table(summaries: list[dict]) -> str:
    """Human-readable companion to summary.csv."""
    cols = ["row", "count", "n", "m", "sat_fraction", "mean_nodes",
            "max_nodes", "max_rate", "bound_ok"]
    lines = []
    rows = [[(f"{s[c]:.4f}" if isinstance(s[c], float) else str(s[c]))
             for c in cols] for s in summaries]
    widths = [max(len(c), *(len(r[i]) for r in rows)) for i, c in enumerate(cols)]
    lines.append("  ".join(c.rjust(w) for c, w in zip(cols, widths)))
    for r in rows:
        lines.append("  ".join(v.rjust(w) for v, w in zip(r, widths)))
    return "\n".join(lines)
