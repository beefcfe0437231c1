"""Experiment driver, summary statistics, and deterministic reports.

``run_experiment`` executes independent seeding trials (optionally across
worker processes) and returns per-trial records; for a fixed master seed
the records are identical whatever the worker count, because every trial's
randomness is a pure function of (master_seed, trial_index) and trials are
partitioned on a fixed grid.  ``summarize``/``report`` turn records into a
byte-stable text or CSV document comparing empirical tails against the
closed-form bounds.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import bounds, rng
from .errors import ConfigError
from .extfloat import ExtScalar
from .instances import gen_kmeans_bad, gen_kmedian_bad, reference_costs
from .seeding import TrialArrays, run_trials

__all__ = [
    "ExperimentConfig",
    "TrialRecord",
    "TRIAL_COLUMNS",
    "SummaryStats",
    "run_experiment",
    "summarize",
    "report",
    "write_trials_csv",
    "read_trials_csv",
    "wilson_interval",
]

QUANTILES = (0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99)

# Fixed trial-partition grid; independent of the worker count so that
# chunked execution cannot influence results.
_BLOCK_ELEMS = 1 << 21

TRIAL_COLUMNS = (
    "trial_index", "k", "variant", "ell", "coverage_count",
    "coverage_fraction", "final_cost", "ratio_discrete",
    "ratio_continuous", "early_miss",
)


def _fmt(x: float) -> str:
    return f"{x:.15g}"


@dataclass(frozen=True)
class ExperimentConfig:
    variant: str = "kmeans"
    k: int = 200
    m: float = 4.0
    r: float = 1.0
    ell: int | None = None
    trials: int = 1000
    master_seed: int = 0
    alpha: float = 0.1
    beta: float = 0.1
    eta: float = 0.999
    workers: int = 1
    out: str | None = None

    def resolved_ell(self) -> int:
        if self.ell is not None:
            return self.ell
        return 2 if self.variant == "kmeans" else 1

    def validate(self) -> None:
        if self.variant not in ("kmeans", "kmedian"):
            raise ConfigError(f"variant must be kmeans or kmedian, got {self.variant!r}")
        if self.k < 1:
            raise ConfigError(f"k must be >= 1, got {self.k}")
        if not (self.m >= 1.0):
            raise ConfigError(f"m must be >= 1, got {self.m}")
        if not (self.r > 0.0):
            raise ConfigError(f"r must be > 0, got {self.r}")
        if self.resolved_ell() not in (1, 2):
            raise ConfigError(f"ell must be 1 or 2, got {self.ell}")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if not (0.0 < self.alpha <= 1.0 and 0.0 < self.beta <= 1.0):
            raise ConfigError("alpha and beta must lie in (0, 1]")
        if not (0.0 < self.eta < 1.0):
            raise ConfigError(f"eta must lie in (0, 1), got {self.eta}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")

    def echo(self) -> str:
        """Semantic parameters only: worker count and paths never alter results."""
        return (f"variant={self.variant} k={self.k} m={_fmt(self.m)} r={_fmt(self.r)}"
                f" ell={self.resolved_ell()} trials={self.trials}"
                f" master_seed={self.master_seed} alpha={_fmt(self.alpha)}"
                f" beta={_fmt(self.beta)} eta={_fmt(self.eta)}")


@dataclass(frozen=True)
class TrialRecord:
    trial_index: int
    k: int
    variant: str
    ell: int
    coverage_count: int
    coverage_fraction: float
    final_cost: ExtScalar
    ratio_discrete: float
    ratio_continuous: float
    early_miss: bool


def _instance_for(cfg: ExperimentConfig):
    gen = gen_kmeans_bad if cfg.variant == "kmeans" else gen_kmedian_bad
    return gen(cfg.k, cfg.m, cfg.r)


def _run_block(cfg: ExperimentConfig, first_trial: int, trials: int) -> TrialArrays:
    inst = _instance_for(cfg)
    return run_trials(inst, trials, cfg.master_seed, n_centers=cfg.k,
                      ell=cfg.resolved_ell(), alpha=cfg.alpha, beta=cfg.beta,
                      first_trial=first_trial)


def run_experiment(cfg: ExperimentConfig) -> list[TrialRecord]:
    """Run cfg.trials independent seeding trials; records sorted by trial index."""
    cfg.validate()
    block = max(1, _BLOCK_ELEMS // (2 * cfg.k))
    blocks = [(lo, min(block, cfg.trials - lo)) for lo in range(0, cfg.trials, block)]
    if cfg.workers > 1 and len(blocks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            parts = list(pool.map(_run_block, [cfg] * len(blocks),
                                  [b[0] for b in blocks], [b[1] for b in blocks]))
    else:
        parts = [_run_block(cfg, lo, n) for lo, n in blocks]

    inst = _instance_for(cfg)
    opt = reference_costs(inst)
    ell = cfg.resolved_ell()
    records = []
    for part in parts:
        for i in range(len(part.trial_indices)):
            final = ExtScalar(float(part.final_m[i]), int(part.final_e[i]))
            records.append(TrialRecord(
                trial_index=int(part.trial_indices[i]),
                k=cfg.k,
                variant=cfg.variant,
                ell=ell,
                coverage_count=int(part.coverage[i]),
                coverage_fraction=int(part.coverage[i]) / cfg.k,
                final_cost=final,
                ratio_discrete=final.ratio(opt.discrete),
                ratio_continuous=final.ratio(opt.continuous),
                early_miss=bool(part.early_miss[i]),
            ))
    records.sort(key=lambda rec: rec.trial_index)
    return records


# ---------------------------------------------------------------------------
# trials.csv
# ---------------------------------------------------------------------------

def write_trials_csv(records: list[TrialRecord], cfg: ExperimentConfig, path) -> None:
    lines = [
        "# seedbounds trials v1",
        f"# config {cfg.echo()}",
        f"# rng {rng.ALGORITHM}",
        ",".join(TRIAL_COLUMNS),
    ]
    for rec in records:
        lines.append(",".join([
            str(rec.trial_index),
            str(rec.k),
            rec.variant,
            str(rec.ell),
            str(rec.coverage_count),
            _fmt(rec.coverage_fraction),
            rec.final_cost.format_sci(),
            _fmt(rec.ratio_discrete),
            _fmt(rec.ratio_continuous),
            "1" if rec.early_miss else "0",
        ]))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def read_trials_csv(path):
    """Returns (records, metadata dict parsed from the comment header)."""
    meta: dict[str, str] = {}
    records: list[TrialRecord] = []
    with open(path, newline="") as fh:
        header = None
        for raw in fh:
            line = raw.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("config "):
                    for part in body[len("config "):].split():
                        key, _, val = part.partition("=")
                        meta[key] = val
                elif body.startswith("rng "):
                    meta["rng"] = body[len("rng "):]
                continue
            if header is None:
                header = tuple(line.split(","))
                if header != TRIAL_COLUMNS:
                    raise ConfigError(f"unexpected trials.csv columns: {header}")
                continue
            f = line.split(",")
            records.append(TrialRecord(
                trial_index=int(f[0]),
                k=int(f[1]),
                variant=f[2],
                ell=int(f[3]),
                coverage_count=int(f[4]),
                coverage_fraction=float(f[5]),
                final_cost=ExtScalar.parse(f[6]),
                ratio_discrete=float(f[7]),
                ratio_continuous=float(f[8]),
                early_miss=f[9] == "1",
            ))
    if header is None:
        raise ConfigError(f"{path} contains no trial rows")
    return records, meta


# ---------------------------------------------------------------------------
# statistics
# ---------------------------------------------------------------------------

_WILSON_Z = 1.959963984540054  # two-sided 95%


def wilson_interval(count: int, n: int, z: float = _WILSON_Z):
    """(p_hat, low, high) Wilson score interval for a binomial proportion."""
    if n < 1:
        raise ConfigError("wilson_interval needs n >= 1")
    p = count / n
    denom = 1.0 + z * z / n
    center = (p + z * z / (2 * n)) / denom
    half = (z / denom) * math.sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n))
    low = 0.0 if count == 0 else max(0.0, center - half)
    high = 1.0 if count == n else min(1.0, center + half)
    return p, low, high


@dataclass(frozen=True)
class MetricStats:
    mean: float
    minimum: float
    maximum: float
    quantiles: tuple[tuple[float, float], ...]


@dataclass(frozen=True)
class BinomialStat:
    label: str
    count: int
    n: int
    p: float
    low: float
    high: float


@dataclass(frozen=True)
class BoundRow:
    name: str
    value: float
    vacuous: bool
    empirical: float


@dataclass(frozen=True)
class SummaryStats:
    n_trials: int
    k: int
    variant: str
    ell: int
    eta: float
    alpha: float
    beta: float
    metrics: tuple[tuple[str, MetricStats], ...]
    ratio_tails: tuple[BinomialStat, ...]
    early_miss: BinomialStat
    high_coverage: BinomialStat
    bounds: tuple[BoundRow, ...]


def _metric(values: np.ndarray) -> MetricStats:
    qs = np.quantile(values, QUANTILES)
    return MetricStats(
        mean=float(values.mean()),
        minimum=float(values.min()),
        maximum=float(values.max()),
        quantiles=tuple((q, float(v)) for q, v in zip(QUANTILES, qs)),
    )


def _binomial(label: str, count: int, n: int) -> BinomialStat:
    p, lo, hi = wilson_interval(count, n)
    return BinomialStat(label=label, count=count, n=n, p=p, low=lo, high=hi)


def summarize(records: list[TrialRecord], eta: float = 0.999,
              alpha: float = 0.1, beta: float = 0.1) -> SummaryStats:
    """Aggregate records (sorted first, so aggregation is order-independent)."""
    if not records:
        raise ConfigError("summarize needs at least one record")
    records = sorted(records, key=lambda rec: rec.trial_index)
    n = len(records)
    k = records[0].k
    cov_frac = np.array([rec.coverage_fraction for rec in records])
    ratio_d = np.array([rec.ratio_discrete for rec in records])
    ratio_c = np.array([rec.ratio_continuous for rec in records])
    miss = np.array([rec.early_miss for rec in records])

    thresholds = (
        (f"ratio_discrete<(9-eta)/8={_fmt((9.0 - eta) / 8.0)}", (9.0 - eta) / 8.0),
        ("ratio_discrete<17/16", 17.0 / 16.0),
        ("ratio_discrete<9/8", 9.0 / 8.0),
    )
    tails = tuple(_binomial(label, int((ratio_d < t).sum()), n)
                  for label, t in thresholds)
    early = _binomial("early_miss", int(miss.sum()), n)
    high = _binomial(f"coverage_fraction>eta={_fmt(eta)}",
                     int((cov_frac > eta).sum()), n)

    bound_rows = []
    for name, empirical in (("early_miss", early.p), ("high_coverage", high.p)):
        value = bounds.evaluate(name, k, alpha=alpha, beta=beta)
        bound_rows.append(BoundRow(name=name, value=value,
                                   vacuous=bounds.is_vacuous(value),
                                   empirical=empirical))

    return SummaryStats(
        n_trials=n,
        k=k,
        variant=records[0].variant,
        ell=records[0].ell,
        eta=eta,
        alpha=alpha,
        beta=beta,
        metrics=(
            ("coverage_fraction", _metric(cov_frac)),
            ("ratio_discrete", _metric(ratio_d)),
            ("ratio_continuous", _metric(ratio_c)),
        ),
        ratio_tails=tails,
        early_miss=early,
        high_coverage=high,
        bounds=tuple(bound_rows),
    )


def report(summary: SummaryStats, fmt: str = "text") -> str:
    """Render a summary as a deterministic document (text or CSV)."""
    if fmt == "text":
        return _report_text(summary)
    if fmt == "csv":
        return _report_csv(summary)
    raise ConfigError(f"format must be text or csv, got {fmt!r}")


def _report_text(s: SummaryStats) -> str:
    lines = [
        "seedbounds experiment summary",
        "=============================",
        (f"variant={s.variant} k={s.k} ell={s.ell} trials={s.n_trials}"
         f" eta={_fmt(s.eta)} alpha={_fmt(s.alpha)} beta={_fmt(s.beta)}"),
        f"rng={rng.ALGORITHM}",
        "",
        "metric,mean,min," + ",".join(f"p{int(q * 100):02d}" for q in QUANTILES) + ",max",
    ]
    for name, m in s.metrics:
        cells = [name, _fmt(m.mean), _fmt(m.minimum)]
        cells += [_fmt(v) for _, v in m.quantiles]
        cells.append(_fmt(m.maximum))
        lines.append(",".join(cells))
    lines.append("")
    lines.append("tail probabilities (Wilson 95%)")
    for b in (*s.ratio_tails, s.early_miss, s.high_coverage):
        lines.append(f"P[{b.label}] = {b.count}/{b.n} -> p={_fmt(b.p)}"
                     f" interval=[{_fmt(b.low)},{_fmt(b.high)}]")
    lines.append("")
    lines.append(f"closed-form bounds at k={s.k}")
    vacuous = []
    for row in s.bounds:
        flag = " VACUOUS(>1)" if row.vacuous else ""
        lines.append(f"{row.name}: bound={_fmt(row.value)}"
                     f" empirical={_fmt(row.empirical)}{flag}")
        if row.vacuous:
            vacuous.append(row.name)
    lines.append("vacuous bounds: " + (",".join(vacuous) if vacuous else "none"))
    return "\n".join(lines) + "\n"


def _report_csv(s: SummaryStats) -> str:
    rows = [("section", "key", "value")]
    for key, val in (("variant", s.variant), ("k", str(s.k)), ("ell", str(s.ell)),
                     ("trials", str(s.n_trials)), ("eta", _fmt(s.eta)),
                     ("alpha", _fmt(s.alpha)), ("beta", _fmt(s.beta)),
                     ("rng", rng.ALGORITHM)):
        rows.append(("config", key, val))
    for name, m in s.metrics:
        rows.append(("metric", f"{name}.mean", _fmt(m.mean)))
        rows.append(("metric", f"{name}.min", _fmt(m.minimum)))
        for q, v in m.quantiles:
            rows.append(("metric", f"{name}.p{int(q * 100):02d}", _fmt(v)))
        rows.append(("metric", f"{name}.max", _fmt(m.maximum)))
    for b in (*s.ratio_tails, s.early_miss, s.high_coverage):
        rows.append(("tail", f"{b.label}.count", str(b.count)))
        rows.append(("tail", f"{b.label}.p", _fmt(b.p)))
        rows.append(("tail", f"{b.label}.wilson_low", _fmt(b.low)))
        rows.append(("tail", f"{b.label}.wilson_high", _fmt(b.high)))
    for row in s.bounds:
        rows.append(("bound", f"{row.name}.value", _fmt(row.value)))
        rows.append(("bound", f"{row.name}.vacuous", "1" if row.vacuous else "0"))
        rows.append(("bound", f"{row.name}.empirical", _fmt(row.empirical)))
    return "\n".join(",".join(r) for r in rows) + "\n"
