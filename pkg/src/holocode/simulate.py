"""Monte-Carlo recovery curves, binomial mixing and threshold crossings."""

from __future__ import annotations

import csv
import io
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy import stats

from . import _kernels
from .code_builder import HolographicCode, build_code
from .erasure import TYPES, BatchDecoder
from .pauli import SIDES

log = logging.getLogger(__name__)

DECODERS = ("optimal", "greedy")
CSV_COLUMNS = ("n_sides", "R", "decoder", "a", "n", "trials", "successes", "p_rec_hat", "ci_low", "ci_high", "exact")
CONFIDENCE = 0.95
BISECT_TOL = 1e-4
ZERO_DIFF = 1e-12


@dataclass(frozen=True)
class SimulationConfig:
    seed: str = "steane"
    radius: int = 1
    decoder: str = "optimal"
    trials: int = 10_000  # per weight, when sampling
    rng_seed: int = 0
    exact_cutoff: int = 1_000_000  # enumerate every pattern when C(n, a) is at most this
    types: str = "both"
    tile: int = 0
    workers: int = 1
    chunk: int = 2_000  # trials per task; fixed so results do not depend on workers
    weights: tuple[int, ...] | None = None  # None runs every a in 0..n

    def validate(self) -> None:
        if self.seed not in SIDES:
            raise ValueError(f"unknown seed {self.seed!r}")
        if self.radius < 1:
            raise ValueError("radius must be at least 1")
        if self.decoder not in DECODERS:
            raise ValueError(f"decoder must be one of {DECODERS}")
        if self.types not in TYPES:
            raise ValueError(f"types must be one of {TYPES}")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.exact_cutoff < 0:
            raise ValueError("exact_cutoff must be non-negative")
        if self.workers < 1 or self.chunk < 1:
            raise ValueError("workers and chunk must be positive")

    @property
    def n_sides(self) -> int:
        return SIDES[self.seed]


def wilson_interval(successes: int, trials: int, confidence: float = CONFIDENCE) -> tuple[float, float]:
    if trials == 0:
        return 0.0, 1.0
    z = stats.norm.ppf(0.5 + confidence / 2)
    phat = successes / trials
    denom = 1 + z * z / trials
    centre = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


@dataclass(frozen=True)
class CurveEntry:
    a: int
    trials: int
    successes: int
    exact: bool

    @property
    def p_hat(self) -> float:
        return self.successes / self.trials

    @property
    def interval(self) -> tuple[float, float]:
        # exhaustive entries carry no sampling error
        if self.exact:
            return self.p_hat, self.p_hat
        return wilson_interval(self.successes, self.trials)


@dataclass(frozen=True)
class RecoveryCurve:
    n_sides: int
    radius: int
    decoder: str
    n: int
    entries: tuple[CurveEntry, ...]
    meta: dict[str, str] = field(default_factory=dict, compare=False)

    def table(self) -> np.ndarray:
        """``P_rec(a)`` for ``a = 0..n``; raises if a weight is missing."""
        out = np.full(self.n + 1, np.nan)
        for e in self.entries:
            out[e.a] = e.p_hat
        if np.isnan(out).any():
            missing = np.flatnonzero(np.isnan(out))
            raise ValueError(f"curve lacks weights {missing[:5].tolist()}{'...' if len(missing) > 5 else ''}")
        return out

    def entry(self, a: int) -> CurveEntry:
        for e in self.entries:
            if e.a == a:
                return e
        raise KeyError(a)


# ---- pattern streams


def _stream_key(master: int, n_sides: int, radius: int, a: int) -> np.ndarray:
    return np.random.SeedSequence([master, n_sides, radius, a]).generate_state(2, np.uint64)


def sampled_patterns(master: int, n_sides: int, radius: int, n: int, a: int, start: int, stop: int) -> np.ndarray:
    """Uniform weight-``a`` subsets for trials ``start..stop-1``.

    Trial ``t`` owns Philox blocks ``[t*B, (t+1)*B)`` (four words each,
    ``B = ceil(a/4)``) under a key derived from ``(master, n_sides, radius, a)``, so
    every pattern is fixed by its trial index whatever the batching.
    """
    if a == 0:
        return np.zeros((stop - start, 0), dtype=np.int64)
    blocks = -(-a // 4)
    bg = np.random.Philox(key=_stream_key(master, n_sides, radius, a))
    bg.advance(start * blocks)
    raw = bg.random_raw((stop - start) * 4 * blocks).reshape(stop - start, 4 * blocks)[:, :a]
    return _kernels.fisher_yates_prefixes(np.ascontiguousarray(raw), n)


def exact_patterns(n: int, a: int) -> np.ndarray:
    return _kernels.all_combinations(n, a, math.comb(n, a))


# ---- tasks


@dataclass(frozen=True)
class _Task:
    a: int
    start: int
    stop: int
    exact: bool


def _plan(cfg: SimulationConfig, n: int) -> list[_Task]:
    weights = range(n + 1) if cfg.weights is None else sorted(set(cfg.weights))
    tasks = []
    for a in weights:
        if not 0 <= a <= n:
            raise ValueError(f"weight {a} outside 0..{n}")
        total = math.comb(n, a)
        if total <= cfg.exact_cutoff:
            tasks.append(_Task(a, 0, total, True))
        else:
            for s in range(0, cfg.trials, cfg.chunk):
                tasks.append(_Task(a, s, min(cfg.trials, s + cfg.chunk), False))
    return tasks


_WORKER: dict = {}


def _init_worker(decoder: BatchDecoder, cfg: SimulationConfig, n: int) -> None:
    _WORKER.update(decoder=decoder, cfg=cfg, n=n)


def _run_task(task: _Task) -> tuple[int, int, int]:
    decoder, cfg, n = _WORKER["decoder"], _WORKER["cfg"], _WORKER["n"]
    if task.exact:
        patterns = exact_patterns(n, task.a)
    else:
        patterns = sampled_patterns(cfg.rng_seed, cfg.n_sides, cfg.radius, n, task.a, task.start, task.stop)
    ok = decoder(patterns)
    return task.a, int(np.count_nonzero(ok)), task.stop - task.start


def estimate_Prec(code: HolographicCode, tile: int, decoder: str, cfg: SimulationConfig) -> RecoveryCurve:  # noqa: N802
    """Recovery probability of ``tile`` for each erasure weight ``a``.

    Weights with at most ``cfg.exact_cutoff`` patterns are enumerated; the others
    get ``cfg.trials`` uniform samples.
    """
    cfg = SimulationConfig(**{**asdict(cfg), "decoder": decoder, "tile": tile})
    cfg.validate()
    if code.seed_name != cfg.seed or code.radius != cfg.radius:
        raise ValueError("configuration does not describe this code")
    batch = BatchDecoder(code, tile=tile, decoder=decoder, types=cfg.types)
    tasks = _plan(cfg, code.n)
    totals: dict[int, list[int]] = {}
    if cfg.workers == 1:
        _init_worker(batch, cfg, code.n)
        results: Iterable = map(_run_task, tasks)
    else:
        pool = ProcessPoolExecutor(cfg.workers, initializer=_init_worker, initargs=(batch, cfg, code.n))
        results = pool.map(_run_task, tasks, chunksize=1)
    try:
        for a, succ, tried in results:
            acc = totals.setdefault(a, [0, 0])
            acc[0] += succ
            acc[1] += tried
    finally:
        if cfg.workers > 1:
            pool.shutdown()
    exact = {t.a for t in tasks if t.exact}
    entries = tuple(CurveEntry(a, totals[a][1], totals[a][0], a in exact) for a in sorted(totals))
    meta = {
        "seed": cfg.seed,
        "types": cfg.types,
        "tile": str(tile),
        "trials": str(cfg.trials),
        "rng_seed": str(cfg.rng_seed),
        "exact_cutoff": str(cfg.exact_cutoff),
        "confidence": str(CONFIDENCE),
    }
    log.info("%s R=%d %s: %d weights", cfg.seed, cfg.radius, decoder, len(entries))
    return RecoveryCurve(cfg.n_sides, cfg.radius, decoder, code.n, entries, meta)


def simulate(cfg: SimulationConfig, code: HolographicCode | None = None) -> RecoveryCurve:
    if code is None:
        code = build_code(cfg.seed, cfg.radius)
    return estimate_Prec(code, cfg.tile, cfg.decoder, cfg)


# ---- mixing and thresholds


def binomial_mix(curve: RecoveryCurve, p) -> np.ndarray | float:
    """``sum_a C(n,a) p^a (1-p)^(n-a) P_rec(a)``, for scalar or array ``p``."""
    ps = np.atleast_1d(np.asarray(p, dtype=float))
    if ((ps < 0) | (ps > 1)).any():
        raise ValueError("p must lie in [0, 1]")
    table = curve.table()
    a = np.arange(curve.n + 1)
    # the binomial pmf is evaluated in log space by scipy
    weights = stats.binom.pmf(a[None, :], curve.n, ps[:, None])
    out = np.clip(weights @ table, 0.0, 1.0)
    return float(out[0]) if np.ndim(p) == 0 else out


@dataclass(frozen=True)
class PairCrossing:
    r_low: int
    r_high: int
    crossing: float | None  # None: no sign change on (0, 1)
    sign_changes: int


@dataclass(frozen=True)
class ThresholdReport:
    pairs: tuple[PairCrossing, ...]

    @property
    def crossings(self) -> list[float]:
        return [p.crossing for p in self.pairs if p.crossing is not None]

    @property
    def complete(self) -> bool:
        return all(p.crossing is not None for p in self.pairs)

    @property
    def mean(self) -> float | None:
        c = self.crossings
        return float(np.mean(c)) if c else None

    @property
    def spread(self) -> float | None:
        """Half the range of the per-pair crossings."""
        c = self.crossings
        return (max(c) - min(c)) / 2 if c else None

    def stable(self, tol: float) -> bool:
        return self.complete and self.spread is not None and 2 * self.spread <= tol

    def summary(self) -> str:
        lines = []
        for p in self.pairs:
            where = "no crossing" if p.crossing is None else f"{p.crossing:.4f}"
            extra = f" ({p.sign_changes} sign changes)" if p.sign_changes > 1 else ""
            lines.append(f"R={p.r_low} vs R={p.r_high}: {where}{extra}")
        if self.crossings:
            lines.append(f"threshold {self.mean:.4f} +/- {self.spread:.4f}")
        else:
            lines.append("threshold: none")
        return "\n".join(lines)


def _sign(x: float) -> int:
    return 0 if abs(x) < ZERO_DIFF else (1 if x > 0 else -1)


def pair_crossing(low: RecoveryCurve, high: RecoveryCurve, grid: int = 2000, tol: float = BISECT_TOL) -> PairCrossing:
    """Where the larger code stops beating the smaller one, by grid scan then bisection."""

    def diff(p: float) -> float:
        return float(binomial_mix(high, p) - binomial_mix(low, p))

    ps = np.linspace(0, 1, grid + 1)[1:-1]
    d = binomial_mix(high, ps) - binomial_mix(low, ps)
    signs = [s for s in (_sign(x) for x in d) if s != 0]
    changes = [i for i in range(1, len(signs)) if signs[i] != signs[i - 1]]
    if not changes:
        return PairCrossing(low.radius, high.radius, None, 0)
    nz = [i for i, x in enumerate(d) if _sign(x) != 0]
    lo, hi = ps[nz[changes[0] - 1]], ps[nz[changes[0]]]
    s_lo = _sign(diff(lo))
    while hi - lo > tol:
        mid = (lo + hi) / 2
        s = _sign(diff(mid))
        if s == 0:
            lo = hi = mid
            break
        if s == s_lo:
            lo = mid
        else:
            hi = mid
    return PairCrossing(low.radius, high.radius, (lo + hi) / 2, len(changes))


def find_threshold(curves: Sequence[RecoveryCurve]) -> ThresholdReport:
    if len(curves) < 2:
        raise ValueError("need at least two curves")
    ordered = sorted(curves, key=lambda c: c.radius)
    radii = [c.radius for c in ordered]
    if len(set(radii)) != len(radii):
        raise ValueError(f"radii must be distinct, got {radii}")
    return ThresholdReport(tuple(pair_crossing(a, b) for a, b in zip(ordered, ordered[1:])))


# ---- files


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def format_curve_csv(curve: RecoveryCurve) -> str:
    buf = io.StringIO()
    buf.write("# holocode recovery curve\n")
    for k in sorted(curve.meta):
        buf.write(f"# {k}={curve.meta[k]}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for e in curve.entries:
        lo, hi = e.interval
        w.writerow([curve.n_sides, curve.radius, curve.decoder, e.a, curve.n, e.trials, e.successes,
                    _fmt(e.p_hat), _fmt(lo), _fmt(hi), int(e.exact)])
    return buf.getvalue()


def write_curve_csv(curve: RecoveryCurve, path) -> None:
    Path(path).write_text(format_curve_csv(curve), encoding="ascii")


def parse_curve_csv(text: str) -> RecoveryCurve:
    meta = {}
    body = []
    for line in text.splitlines():
        if line.startswith("#"):
            key, sep, val = line[1:].strip().partition("=")
            if sep:
                meta[key] = val
        elif line.strip():
            body.append(line)
    rows = list(csv.DictReader(body))
    if not rows:
        raise ValueError("curve file has no data rows")
    if tuple(csv.reader(body[:1]).__next__()) != CSV_COLUMNS:
        raise ValueError(f"curve columns must be {','.join(CSV_COLUMNS)}")
    first = rows[0]
    entries = []
    for r in rows:
        if (r["n_sides"], r["R"], r["decoder"], r["n"]) != (first["n_sides"], first["R"], first["decoder"], first["n"]):
            raise ValueError("curve file mixes several codes or decoders")
        entries.append(CurveEntry(int(r["a"]), int(r["trials"]), int(r["successes"]), r["exact"] == "1"))
    return RecoveryCurve(int(first["n_sides"]), int(first["R"]), first["decoder"], int(first["n"]), tuple(entries), meta)


def read_curve_csv(path) -> RecoveryCurve:
    return parse_curve_csv(Path(path).read_text(encoding="ascii"))


def format_mixed_csv(curves: Sequence[RecoveryCurve], ps: Sequence[float]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("R", "p", "p_rec"))
    for c in sorted(curves, key=lambda c: c.radius):
        for p, v in zip(ps, np.atleast_1d(binomial_mix(c, np.asarray(ps)))):
            w.writerow((c.radius, _fmt(p), _fmt(v)))
    return buf.getvalue()


def plot_curves(curves: Sequence[RecoveryCurve], path, points: Sequence[RecoveryCurve] = (), grid: int = 201) -> None:
    """Line plot of mixed recovery probability against erasure rate, one line per radius.

    ``points`` (for instance greedy curves) are drawn as markers at ``p = a / n``.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    matplotlib.rcParams["svg.hashsalt"] = "holocode"
    ps = np.linspace(0, 1, grid)
    fig, ax = plt.subplots(figsize=(5, 3.6))
    for c in sorted(curves, key=lambda c: c.radius):
        ax.plot(ps, binomial_mix(c, ps), label=f"R={c.radius} {c.decoder}")
    for c in sorted(points, key=lambda c: c.radius):
        ax.plot(ps, binomial_mix(c, ps), "o", markevery=10, ms=3, label=f"R={c.radius} {c.decoder}")
    ax.set_xlabel("erasure probability p")
    ax.set_ylabel("recovery probability")
    ax.set_xlim(0, 1)
    ax.set_ylim(-0.02, 1.02)
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
