"""Monte-Carlo fragmentation of a printed box by random Voronoi cells.

The box is ``width x depth`` in plan and ``n * pitch`` tall, one slab per
codeword bit.  Each slab is sampled on a ``grid x grid`` lattice of voxel
centres; every voxel goes to its nearest site, and a cell's fragment is the
run of slabs it touches.  Trial seeds come from
``numpy.random.SeedSequence([master, alpha, beta, rho_ppm, trial])`` so any
single trial can be replayed and parallel runs match serial ones.
"""

from __future__ import annotations

import csv
import io
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np
from scipy.spatial import cKDTree

from .codec import DecodeError, Fragment, decode, encode
from .params import BrcParams, search_params, smallest_feasible_k

CSV_HEADER = ["alpha", "beta", "rho", "trials", "successes", "rate"]


@dataclass(frozen=True)
class SimConfig:
    alpha: int = 8
    k: int = 128
    beta: int = 100
    rho: float = 0.0
    trials: int = 256
    width: float = 35.0
    depth: float = 35.0
    pitch: float = 0.215
    grid: int = 16
    seed: int = 2024

    def __post_init__(self):
        if self.beta < 1:
            raise ValueError("beta must be at least 1")
        if not 0 <= self.rho < 1:
            raise ValueError("rho must lie in [0, 1)")
        if self.grid < 1 or self.trials < 0:
            raise ValueError("grid must be positive and trials non-negative")
        if min(self.width, self.depth, self.pitch) <= 0:
            raise ValueError("box dimensions and pitch must be positive")

    @property
    def params(self) -> BrcParams:
        """Parameters for k padded up to the nearest feasible size."""
        return search_params(smallest_feasible_k(self.k, self.alpha), self.alpha)

    @property
    def height(self) -> float:
        return self.params.n * self.pitch


@dataclass
class SimResult:
    rows: list[dict] = field(default_factory=list)
    seed: int = 0
    runtime: float = 0.0

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in self.rows:
            rate = r["successes"] / r["trials"] if r["trials"] else 0.0
            w.writerow([r["alpha"], r["beta"], f"{r['rho']:g}", r["trials"], r["successes"], f"{rate:.6f}"])
        return buf.getvalue()


def trial_seed(master: int, alpha: int, beta: int, rho: float, trial: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([master, alpha, beta, int(round(rho * 1_000_000)), trial])


def voronoi_fragment(config: SimConfig, seed, n: Optional[int] = None,
                     sites: Optional[np.ndarray] = None) -> list[tuple[int, int]]:
    """Slab intervals ``[lo, hi)`` of the non-empty Voronoi cells.

    ``sites`` overrides the random draw (used to build analytic cases).
    """
    n = config.params.n if n is None else n
    height = n * config.pitch
    if sites is None:
        rng = np.random.default_rng(seed)
        sites = rng.uniform(0, 1, size=(config.beta, 3)) * [config.width, config.depth, height]
    g = config.grid
    xs = (np.arange(g) + 0.5) * config.width / g
    ys = (np.arange(g) + 0.5) * config.depth / g
    plan = np.stack(np.meshgrid(xs, ys, indexing="ij"), axis=-1).reshape(-1, 2)
    zs = (np.arange(n) + 0.5) * config.pitch
    pts = np.empty((n * len(plan), 3))
    pts[:, :2] = np.tile(plan, (n, 1))
    pts[:, 2] = np.repeat(zs, len(plan))
    _, owner = cKDTree(sites).query(pts)
    slab = np.repeat(np.arange(n), len(plan))
    lo = np.full(len(sites), n, dtype=np.int64)
    hi = np.full(len(sites), -1, dtype=np.int64)
    np.minimum.at(lo, owner, slab)
    np.maximum.at(hi, owner, slab)
    keep = hi >= 0
    return sorted(zip(lo[keep].tolist(), (hi[keep] + 1).tolist()))


def run_trial(config: SimConfig, seed) -> bool:
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    geo, data, hide = ss.spawn(3)
    params = config.params
    rng = np.random.default_rng(data)
    w = "".join(rng.choice(["0", "1"], size=params.k))
    cw = encode(w, params)
    intervals = voronoi_fragment(config, geo, params.n)
    hrng = np.random.default_rng(hide)
    n_hide = math.ceil(config.rho * len(intervals))
    hidden = set(hrng.choice(len(intervals), size=n_hide, replace=False).tolist()) if n_hide else set()
    frags = [Fragment(cw[lo:hi], lo, hi) for i, (lo, hi) in enumerate(intervals) if i not in hidden]
    order = hrng.permutation(len(frags))
    try:
        return decode([frags[i] for i in order], params) == w
    except DecodeError:
        return False


def _cell_job(args) -> tuple[int, int, float, int]:
    config, trials = args
    wins = sum(
        run_trial(config, trial_seed(config.seed, config.alpha, config.beta, config.rho, t))
        for t in trials
    )
    return config.alpha, config.beta, config.rho, wins


def run_experiment(base: SimConfig, alphas: Iterable[int], betas: Iterable[int],
                   rhos: Iterable[float], workers: int = 1, progress=None) -> SimResult:
    """Sweep the (alpha, beta, rho) grid; identical output for any ``workers``."""
    t0 = time.time()
    cells = [
        SimConfig(a, base.k, b, r, base.trials, base.width, base.depth, base.pitch, base.grid, base.seed)
        for a in alphas for b in betas for r in rhos
    ]
    chunk = 16
    jobs = [(c, range(s, min(s + chunk, c.trials))) for c in cells for s in range(0, c.trials, chunk)]
    wins: dict[tuple, int] = {(c.alpha, c.beta, c.rho): 0 for c in cells}
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = pool.map(_cell_job, jobs)
            for done, (a, b, r, s) in enumerate(results, 1):
                wins[(a, b, r)] += s
                if progress:
                    progress(done, len(jobs))
    else:
        for done, job in enumerate(jobs, 1):
            a, b, r, s = _cell_job(job)
            wins[(a, b, r)] += s
            if progress:
                progress(done, len(jobs))
    rows = [
        {"alpha": c.alpha, "beta": c.beta, "rho": c.rho, "trials": c.trials,
         "successes": wins[(c.alpha, c.beta, c.rho)]}
        for c in cells
    ]
    return SimResult(rows, base.seed, time.time() - t0)


def stderr_progress(done: int, total: int) -> None:
    print(f"\r{done}/{total} batches", end="\n" if done == total else "", file=sys.stderr, flush=True)
