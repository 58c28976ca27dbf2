"""Timing harness: per-stage wall times over a size ladder, CSV + figure.

Each ladder cell generates a fresh feasible instance (seed varies per
repetition), solves it with the requested backends and records one row
per pipeline stage.  The companion figure plots median total time
against instance size on log-log axes, the natural view for checking
near-linear scaling.
"""

from __future__ import annotations

import csv
import gc
import io
import os
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .instance import atomic_write
from .oracle import GenParams, gen_instance
from .reduce import SolveOptions, resolve_prune_mode, solve

CSV_HEADER = ["variant", "n", "m", "sigma", "prune", "stage", "millis", "size", "seed"]


@dataclass
class BenchRecord:
    variant: str
    n: int
    m: int
    sigma: str
    prune: str
    stage: str
    millis: float
    size: int
    seed: int


def default_span(n: int, radius: float) -> float:
    """Span keeping the average local disk overlap constant as n grows."""
    return max(10.0, n * radius / 10.0)


def run_bench(variant: str, sizes: Sequence[Tuple[int, int]], reps: int = 5,
              seed: int = 1, sigma_backend: str = "cascade",
              prune_mode: Optional[str] = None, radius: float = 2.0,
              span: Optional[float] = None) -> List[BenchRecord]:
    records: List[BenchRecord] = []
    options = SolveOptions(sigma_backend=sigma_backend, prune_mode=prune_mode)
    for n, m in sizes:
        for rep in range(reps):
            cell_seed = seed + 1_000_003 * rep
            gp = GenParams(variant, n, m, seed=cell_seed, radius=radius,
                           span=span if span is not None else default_span(n, radius))
            inst = gen_instance(gp)
            gc.collect()       # keep allocator noise out of the timings
            sol = solve(inst, options)
            mode = options.prune_mode or resolve_prune_mode(variant, options)
            for stage, secs in sol.timings.items():
                records.append(BenchRecord(variant, n, m, sigma_backend, mode,
                                           stage, secs * 1000.0, sol.size, cell_seed))
    return records


def records_to_csv(records: Sequence[BenchRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow([r.variant, r.n, r.m, r.sigma, r.prune, r.stage,
                    f"{r.millis:.3f}", r.size, r.seed])
    return buf.getvalue()


def write_csv(records: Sequence[BenchRecord], path) -> None:
    atomic_write(path, records_to_csv(records))


def median(values: Sequence[float]) -> float:
    vs = sorted(values)
    k = len(vs)
    if k == 0:
        raise ValueError("median of nothing")
    return vs[k // 2] if k % 2 else 0.5 * (vs[k // 2 - 1] + vs[k // 2])


def write_plot(records: Sequence[BenchRecord], path) -> None:
    """Median wall time per stage vs n, log-log, one line per stage."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    stages = sorted({r.stage for r in records})
    fig, ax = plt.subplots(figsize=(7, 5))
    for stage in stages:
        pts = {}
        for r in records:
            if r.stage == stage:
                pts.setdefault(r.n, []).append(r.millis)
        ns = sorted(pts)
        ax.plot(ns, [median(pts[n]) for n in ns], marker="o",
                linewidth=2 if stage == "total" else 1, label=stage)
    ax.set_xscale("log", base=2)
    ax.set_yscale("log")
    ax.set_xlabel("points = disks (n)")
    ax.set_ylabel("median wall time (ms)")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fmt = str(path).rsplit(".", 1)[-1].lower() if "." in str(path) else "png"
    tmp = f"{path}.tmp.{os.getpid()}"
    fig.savefig(tmp, dpi=110, format=fmt)
    plt.close(fig)
    os.replace(tmp, path)
