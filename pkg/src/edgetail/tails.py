"""Tail-probability estimators: exact enumeration for tiny vertex counts,
direct Monte Carlo, product-measure tilting, and a planted-star mixture
proposal for degree-driven upper tails, plus exponent fitting and two
self-check harnesses (a correlation inequality and the tilt decomposition).

Determinism: every estimator is a pure function of its arguments; trial
randomness is derived from the master seed in fixed-size blocks so runs
can be partitioned and merged reproducibly.
"""

from __future__ import annotations

import dataclasses
import math
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import stats as _scipy_stats

from .errors import DomainError, InsufficientDataError, SizeError
from .graphs import Graph, pair_count
from .rates import RegimeParams, TailSpec, relative_entropy
from . import sampler
from . import spectral

__all__ = [
    "Estimate",
    "EventPredicate",
    "FitResult",
    "enumerate_exact",
    "estimate_record",
    "event_predicate",
    "fit_exponent",
    "is_estimate_planted",
    "is_estimate_tilted",
    "mc_estimate",
    "parse_event",
    "verify_fkg_degree",
    "verify_tilt_bound",
]

_BLOCK = 8192
# batched mask evaluation only pays off while a dense pair array is small
_BATCH_N_MAX = 64
_ENUM_N_MAX = 7
_ESS_FLAG = 30.0


@dataclass(frozen=True)
class Estimate:
    """One tail-probability estimate.

    log_prob is the natural log of the estimated probability (-inf for a
    zero-hit sample); std_error is on the probability scale; hits_or_ess
    holds the raw hit count for unweighted methods and the effective sample
    size for weighted ones.  Estimates whose effective count falls below 30
    arrive flagged rather than silently.
    """

    log_prob: float
    std_error: float
    trials: int
    hits_or_ess: float
    method: str
    flagged: bool = False
    note: str = ""

    @property
    def prob(self) -> float:
        return math.exp(self.log_prob)

    @property
    def log_std_error(self) -> float:
        if self.log_prob == -math.inf:
            return math.inf
        return self.std_error * math.exp(-self.log_prob)

    @property
    def summary_log_prob(self) -> float:
        """log_prob for summary tables: a zero-hit sampling run reports the
        one-sided 95% bound log(3/trials) instead of -inf.  Enumeration is
        exact, so its -inf stands for true probability zero."""
        if self.method != "enumerate" and self.log_prob == -math.inf:
            return math.log(3.0 / self.trials)
        return self.log_prob


def estimate_record(est: Estimate, n: int, p: float, seed: int, spec: str,
                    elapsed_ms: float, constants: dict | None = None) -> dict:
    return {
        "n": n, "p": p, "seed": seed, "spec": spec, "method": est.method,
        "trials": est.trials, "log_prob": est.log_prob,
        "std_error": est.std_error, "ess": est.hits_or_ess,
        "flagged": est.flagged, "elapsed_ms": elapsed_ms,
        "constants": dict(constants or {}),
    }


_OPS = {
    "<=": np.less_equal, ">=": np.greater_equal,
    "<": np.less, ">": np.greater, "==": np.isclose,
}


@dataclass(frozen=True)
class _Check:
    kind: str   # 'deg' (a-th largest degree), 'eig' (a-th eigenvalue), 'm'
    index: int  # 1-based order statistic; ignored for 'm'
    op: str
    value: float


class EventPredicate:
    """Graph event given by order-statistic threshold checks, conjunctively.

    Callable on a Graph; also evaluates whole blocks of pair masks at once
    (batch_eval) so small-n sampling loops stay vectorized.
    """

    def __init__(self, checks, description: str = ""):
        self.checks = tuple(checks)
        self.description = description
        self.max_eig = max((c.index for c in self.checks if c.kind == "eig"),
                           default=0)
        self.max_deg = max((c.index for c in self.checks if c.kind == "deg"),
                           default=0)

    def __repr__(self):
        return f"EventPredicate({self.description or self.checks})"

    def __call__(self, g: Graph) -> bool:
        degs = eigs = None
        if self.max_deg:
            degs = g.degree_sequence()
        if self.max_eig:
            if g.n <= 1024:
                eigs = np.sort(np.linalg.eigvalsh(g.to_dense()))[::-1]
            else:
                eigs = spectral.top_r_eigenvalues(g, self.max_eig).eigenvalues
        for c in self.checks:
            if c.kind == "m":
                got = g.m
            elif c.kind == "deg":
                got = degs[c.index - 1] if c.index <= g.n else 0.0
            else:
                got = eigs[c.index - 1] if c.index <= g.n else 0.0
            if not bool(_OPS[c.op](got, c.value)):
                return False
        return True

    def batch_eval(self, masks: np.ndarray, n: int) -> np.ndarray:
        t = masks.shape[0]
        degs = eigs = None
        if self.max_deg:
            inc = _pair_incidence(n)
            degs = masks @ inc                      # (t, n) unsorted degrees
            degs = -np.sort(-degs, axis=1)
        if self.max_eig:
            adj = _masks_to_adjacency(masks, n)
            eigs = np.linalg.eigvalsh(adj)[:, ::-1]  # descending
        ok = np.ones(t, dtype=bool)
        for c in self.checks:
            if c.kind == "m":
                got = masks.sum(axis=1)
            elif c.kind == "deg":
                got = degs[:, c.index - 1] if c.index <= n else np.zeros(t)
            else:
                got = eigs[:, c.index - 1] if c.index <= n else np.zeros(t)
            ok &= _OPS[c.op](got, c.value)
        return ok


@lru_cache(maxsize=32)
def _pair_incidence(n: int) -> np.ndarray:
    iu, iv = np.triu_indices(n, k=1)
    inc = np.zeros((pair_count(n), n), dtype=np.int64)
    inc[np.arange(iu.size), iu] = 1
    inc[np.arange(iv.size), iv] = 1
    return inc


def _masks_to_adjacency(masks: np.ndarray, n: int) -> np.ndarray:
    iu, iv = np.triu_indices(n, k=1)
    adj = np.zeros((masks.shape[0], n, n))
    adj[:, iu, iv] = masks
    adj[:, iv, iu] = masks
    return adj


def event_predicate(spec: TailSpec, rp: RegimeParams) -> EventPredicate:
    """Threshold event for a tail specification: each listed order statistic
    is compared against its offset-scaled typical value, all jointly."""
    checks = []
    if spec.target == "eigenvalue":
        base = math.sqrt(rp.lp)
        kind = "eig"
    else:
        base = rp.lp
        kind = "deg"
    for a, d in enumerate(spec.deltas, start=1):
        if spec.side == "upper":
            checks.append(_Check(kind, a, ">=", (1.0 + d) * base))
        else:
            checks.append(_Check(kind, a, "<=", (1.0 - d) * base))
    label = f"{spec.target}-{spec.side}{spec.deltas}@(n={rp.n},p={rp.p})"
    return EventPredicate(checks, label)


_EVENT_RE = re.compile(
    r"^\s*(dmax|dmin|d(\d+)|lambda(\d+)|m|edges)\s*(<=|>=|==|<|>)\s*"
    r"([-+0-9.eE]+)\s*$")


def parse_event(text: str) -> EventPredicate:
    """Tiny event language: `dmax<=1`, `d2>=2`, `lambda1>=2`, `m==3`.

    `d<a>` is the a-th largest degree, `dmax` = `d1`; `dmin` compares the
    minimum degree; `lambda<a>` the a-th largest adjacency eigenvalue;
    `m`/`edges` the edge count.  Conjunctions join with `&`.
    """
    checks = []
    for part in text.split("&"):
        mt = _EVENT_RE.match(part)
        if not mt:
            raise DomainError(f"cannot parse event clause {part!r}")
        name, da, la, op, val = mt.groups()
        value = float(val)
        if name in ("m", "edges"):
            checks.append(_Check("m", 0, op, value))
        elif name == "dmax":
            checks.append(_Check("deg", 1, op, value))
        elif name == "dmin":
            checks.append(_Check("degmin", 0, op, value))
        elif da is not None:
            checks.append(_Check("deg", int(da), op, value))
        else:
            checks.append(_Check("eig", int(la), op, value))
    return _MinAwarePredicate(checks, text.strip())


class _MinAwarePredicate(EventPredicate):
    # extends the order-statistic checks with a minimum-degree clause

    def __call__(self, g: Graph) -> bool:
        for c in self.checks:
            if c.kind == "degmin":
                if not bool(_OPS[c.op](g.degrees.min() if g.n else 0, c.value)):
                    return False
        plain = [c for c in self.checks if c.kind != "degmin"]
        return EventPredicate(plain)(g)

    def batch_eval(self, masks, n):
        ok = EventPredicate([c for c in self.checks if c.kind != "degmin"]
                            ).batch_eval(masks, n)
        mins = [c for c in self.checks if c.kind == "degmin"]
        if mins:
            inc = _pair_incidence(n)
            dmin = (masks @ inc).min(axis=1)
            for c in mins:
                ok &= _OPS[c.op](dmin, c.value)
        return ok


def _resolve(spec_or_pred, n: int, p: float):
    if isinstance(spec_or_pred, TailSpec):
        return event_predicate(spec_or_pred, RegimeParams.compute(n, p))
    if not callable(spec_or_pred):
        raise DomainError("event must be a TailSpec or a graph predicate")
    return spec_or_pred


def _can_batch(pred, n: int) -> bool:
    return n <= _BATCH_N_MAX and hasattr(pred, "batch_eval")


def _validate_np(n: int, p: float) -> None:
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    if not (0.0 <= p <= 1.0):
        raise DomainError(f"need p in [0, 1], got {p}")


def enumerate_exact(n: int, p: float, spec_or_pred) -> Estimate:
    """Exact probability by enumerating all graphs on n vertices (n <= 7).

    Satisfying graphs are tallied as integer counts per edge count, and the
    probability is a compensated sum of count * p^m (1-p)^(N-m) terms, so
    no precision is lost to accumulation order.
    """
    _validate_np(n, p)
    if n > _ENUM_N_MAX:
        raise SizeError(f"enumeration is limited to n <= {_ENUM_N_MAX}, got {n}")
    pred = _resolve(spec_or_pred, n, p)
    npairs = pair_count(n)
    counts = np.zeros(npairs + 1, dtype=np.int64)
    batched = hasattr(pred, "batch_eval")
    block = 1 << 16
    bits = np.arange(npairs, dtype=np.uint64)
    for start in range(0, 1 << npairs, block):
        stop = min(start + block, 1 << npairs)
        codes = np.arange(start, stop, dtype=np.uint64)
        masks = (codes[:, None] >> bits) & 1
        masks = masks.astype(bool)
        nedges = masks.sum(axis=1)
        if batched:
            hit = pred.batch_eval(masks, n)
        else:
            hit = np.array([pred(Graph.from_pair_mask(n, row))
                            for row in masks])
        np.add.at(counts, nedges[hit], 1)
    terms = [int(counts[m]) * p ** m * (1.0 - p) ** (npairs - m)
             for m in range(npairs + 1) if counts[m]]
    prob = math.fsum(terms)
    log_prob = math.log(prob) if prob > 0 else -math.inf
    return Estimate(log_prob=log_prob, std_error=0.0, trials=1 << npairs,
                    hits_or_ess=float(counts.sum()), method="enumerate")


def _direct_core(pred, n, p, trials, master_seed, stream):
    hits = 0
    if _can_batch(pred, n):
        npairs = pair_count(n)
        done = 0
        block_no = 0
        while done < trials:
            cnt = min(_BLOCK, trials - done)
            rng = sampler.derived_rng(master_seed, (stream, block_no))
            masks = rng.random((cnt, npairs)) < p
            hits += int(pred.batch_eval(masks, n).sum())
            done += cnt
            block_no += 1
    else:
        for t in range(trials):
            g = sampler.sample_gnp(n, p, sampler.derived_seed(master_seed,
                                                              (stream, t)))
            hits += bool(pred(g))
    return hits


def mc_estimate(spec_or_pred, n: int, p: float, trials: int,
                master_seed: int) -> Estimate:
    """Direct Monte Carlo: frequency of the event over independent G(n, p)
    samples; std_error = sqrt(phat (1-phat) / trials)."""
    _validate_np(n, p)
    if trials < 1:
        raise DomainError(f"need trials >= 1, got {trials}")
    pred = _resolve(spec_or_pred, n, p)
    hits = _direct_core(pred, n, p, trials, master_seed, stream=0)
    phat = hits / trials
    se = math.sqrt(phat * (1.0 - phat) / trials)
    flagged = hits < _ESS_FLAG
    note = "" if not flagged else (
        "zero hits; summary_log_prob carries the one-sided bound"
        if hits == 0 else f"only {hits} hits")
    return Estimate(log_prob=math.log(phat) if hits else -math.inf,
                    std_error=se, trials=trials, hits_or_ess=float(hits),
                    method="direct", flagged=flagged, note=note)


def _weighted_estimate(s1: float, s2: float, trials: int,
                       method: str) -> Estimate:
    phat = s1 / trials
    if trials > 1:
        var = max(s2 - trials * phat * phat, 0.0) / (trials - 1)
    else:
        var = 0.0
    se = math.sqrt(var / trials)
    ess = (s1 * s1 / s2) if s2 > 0 else 0.0
    flagged = ess < _ESS_FLAG
    note = "" if not flagged else (
        "zero effective hits; summary_log_prob carries the one-sided bound"
        if ess == 0 else f"effective sample size {ess:.1f} below {int(_ESS_FLAG)}")
    return Estimate(log_prob=math.log(phat) if phat > 0 else -math.inf,
                    std_error=se, trials=trials, hits_or_ess=ess,
                    method=method, flagged=flagged, note=note)


def is_estimate_tilted(spec_or_pred, n: int, p: float, q_prime: float,
                       trials: int, master_seed: int) -> Estimate:
    """Importance sampling from the product measure at density q_prime with
    exact per-sample likelihood ratios.  q_prime == p reduces to direct
    sampling with unit weights."""
    _validate_np(n, p)
    if trials < 1:
        raise DomainError(f"need trials >= 1, got {trials}")
    if not (0.0 < q_prime <= p < 1.0):
        raise DomainError(
            f"tilt density must satisfy 0 < q_prime <= p < 1, got "
            f"q_prime={q_prime!r}, p={p!r}")
    pred = _resolve(spec_or_pred, n, p)
    npairs = pair_count(n)
    # log weight of a graph with m edges under the tilt
    la = math.log(p) - math.log(q_prime)
    lb = math.log1p(-p) - math.log1p(-q_prime)
    s1 = s2 = 0.0
    if _can_batch(pred, n):
        done = 0
        block_no = 0
        while done < trials:
            cnt = min(_BLOCK, trials - done)
            rng = sampler.derived_rng(master_seed, (0, block_no))
            masks = rng.random((cnt, npairs)) < q_prime
            hit = pred.batch_eval(masks, n)
            m = masks.sum(axis=1)
            u = hit * np.exp(m * la + (npairs - m) * lb)
            s1 += float(u.sum())
            s2 += float((u * u).sum())
            done += cnt
            block_no += 1
    else:
        for t in range(trials):
            g = sampler.sample_gnp(n, q_prime,
                                   sampler.derived_seed(master_seed, (0, t)))
            if pred(g):
                u = math.exp(g.m * la + (npairs - g.m) * lb)
                s1 += u
                s2 += u * u
    return _weighted_estimate(s1, s2, trials, "tilted")


def _planting_size(spec_or_s, n: int, p: float) -> int:
    if isinstance(spec_or_s, (int, np.integer)):
        s = int(spec_or_s)
        if s < 0:
            raise DomainError(f"planting size must be >= 0, got {s}")
        return s
    if isinstance(spec_or_s, TailSpec):
        if spec_or_s.side == "lower":
            return 0
        rp = RegimeParams.compute(n, p)
        if spec_or_s.target == "degree":
            thr = (1.0 + spec_or_s.deltas[0]) * rp.lp
        else:
            # lambda_1 >= T forces max degree >= T, since lambda_1 is at
            # most the maximum degree
            thr = (1.0 + spec_or_s.deltas[0]) * math.sqrt(rp.lp)
        return min(n - 1, math.ceil(thr - 1e-12))
    raise DomainError("expected a TailSpec or an integer planting size")


def is_estimate_planted(spec_or_pred, n: int, p: float, spec_or_s,
                        trials: int, master_seed: int) -> Estimate:
    """Importance sampling from a planted-star mixture: each trial plants a
    star of size s at a uniformly random center, and the weight divides by
    the mixture density ratio, computed from how many vertices sit at or
    above degree s.  Unbiased for events that force a degree-s vertex.
    Planting size 0 reduces to direct sampling.
    """
    _validate_np(n, p)
    if trials < 1:
        raise DomainError(f"need trials >= 1, got {trials}")
    if not (0.0 < p < 1.0):
        raise DomainError(f"planting needs 0 < p < 1, got {p}")
    s = _planting_size(spec_or_s, n, p)
    if s > n - 1:
        raise DomainError(f"planting size {s} exceeds the maximum degree {n - 1}")
    pred = _resolve(spec_or_pred, n, p)
    if s == 0:
        est = mc_estimate(pred, n, p, trials, master_seed)
        return dataclasses.replace(
            est, note=(est.note + "; " if est.note else "")
            + "planting size 0 reduces to direct sampling")
    log_r = sampler.log_planted_density_ratio(n, s, p)
    log_n = math.log(n)
    npairs = pair_count(n)
    s1 = s2 = 0.0
    if _can_batch(pred, n):
        inc = _pair_incidence(n)
        pair_rows = _center_pair_rows(n)
        done = 0
        block_no = 0
        while done < trials:
            cnt = min(_BLOCK, trials - done)
            rng = sampler.derived_rng(master_seed, (0, block_no))
            masks = rng.random((cnt, npairs)) < p
            centers = rng.integers(n, size=cnt)
            for i in range(cnt):
                rows = pair_rows[centers[i]]
                have = masks[i, rows]
                deficit = s - int(have.sum())
                if deficit > 0:
                    absent = rows[~have]
                    add = rng.choice(absent, size=deficit, replace=False)
                    masks[i, add] = True
            degs = masks @ inc
            c_gt = (degs > s).sum(axis=1)
            c_eq = (degs == s).sum(axis=1)
            with np.errstate(divide="ignore"):
                log_den = np.logaddexp(np.log(c_gt), np.log(c_eq) + log_r)
            u = pred.batch_eval(masks, n) * np.exp(log_n - log_den)
            s1 += float(u.sum())
            s2 += float((u * u).sum())
            done += cnt
            block_no += 1
    else:
        for t in range(trials):
            rng = sampler.derived_rng(master_seed, (0, t))
            g = sampler.sample_gnp(n, p, sampler.derived_seed(master_seed,
                                                              (1, t)))
            center = int(rng.integers(n))
            g2, _ = sampler.plant_star(g, center, s, p,
                                       sampler.derived_seed(master_seed, (2, t)))
            if pred(g2):
                degs = g2.degrees
                c_gt = int((degs > s).sum())
                c_eq = int((degs == s).sum())
                log_den = np.logaddexp(
                    math.log(c_gt) if c_gt else -math.inf,
                    (math.log(c_eq) if c_eq else -math.inf) + log_r)
                u = math.exp(log_n - float(log_den))
                s1 += u
                s2 += u * u
    return _weighted_estimate(s1, s2, trials, "planted")


@lru_cache(maxsize=32)
def _center_pair_rows(n: int) -> tuple:
    # pair-array rows touching each vertex, for in-place mask planting
    iu, iv = np.triu_indices(n, k=1)
    return tuple(np.flatnonzero((iu == c) | (iv == c)) for c in range(n))


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    slope_stderr: float
    scale: str
    used: int
    note: str = ""


def fit_exponent(points, scale: str) -> FitResult:
    """Least-squares slope of the tail exponent against log n.

    scale 'log_n' regresses -log_prob on log n; 'log_log_over_log_n'
    regresses log(-log_prob) on log n.  Estimate standard errors propagate
    into the slope standard error; exact inputs give a zero error bar.
    Zero-hit and probability-one points cannot be placed on either scale
    and are dropped with a note.
    """
    if scale not in ("log_n", "log_log_over_log_n"):
        raise DomainError(f"unknown scale {scale!r}")
    xs, ys, sig = [], [], []
    dropped = 0
    for n, est in points:
        lp_est = est.log_prob if isinstance(est, Estimate) else float(est)
        se_log = (est.log_std_error if isinstance(est, Estimate) else 0.0)
        if not (lp_est < 0) or math.isinf(lp_est):
            dropped += 1
            continue
        if scale == "log_n":
            ys.append(-lp_est)
            sig.append(se_log)
        else:
            ys.append(math.log(-lp_est))
            sig.append(se_log / (-lp_est))
        xs.append(math.log(n))
    if len(xs) < 3:
        raise InsufficientDataError(
            f"need at least 3 usable points, got {len(xs)}"
            + (f" ({dropped} dropped)" if dropped else ""))
    x = np.array(xs)
    y = np.array(ys)
    sg = np.array(sig)
    xbar = x.mean()
    sxx = float(((x - xbar) ** 2).sum())
    if sxx == 0:
        raise InsufficientDataError("all points share one n; no slope")
    coef = (x - xbar) / sxx
    slope = float(coef @ y)
    intercept = float(y.mean() - slope * xbar)
    stderr = math.sqrt(float((coef ** 2 * sg ** 2).sum()))
    note = f"{dropped} point(s) dropped (unusable log_prob)" if dropped else ""
    return FitResult(slope=slope, intercept=intercept, slope_stderr=stderr,
                     scale=scale, used=len(xs), note=note)


def verify_fkg_degree(n: int, p: float, k: int) -> dict:
    """Exact check that degrees are positively associated: the probability
    that every degree is at most k dominates the product of the per-vertex
    marginals.  Enumerates all graphs, so n is capped at 6."""
    if n > 6:
        raise SizeError(f"exact check is limited to n <= 6, got {n}")
    _validate_np(n, p)
    if not 1 <= k:
        raise DomainError(f"need k >= 1, got {k}")
    pred = EventPredicate([_Check("deg", 1, "<=", float(k))],
                          f"dmax<={k}")
    lhs = enumerate_exact(n, p, pred).prob
    rhs = float(_scipy_stats.binom.cdf(k, n - 1, p)) ** n
    assert lhs >= rhs - 1e-12, (lhs, rhs)
    return {"n": n, "p": p, "k": k, "joint": lhs, "product": rhs,
            "holds": True}


def verify_tilt_bound(n: int, p: float, q: float, eps: float, samples: int,
                      master_seed: int, proxy_k: float = 10.0) -> dict:
    """Samples the tilted measure at q' = (1-eps) q and checks, per sample:
    the exact decomposition of the log likelihood ratio into the entropy
    term plus kappa times the edge-count deviation; the Cauchy-Schwarz step
    bounding that deviation by n/2 times the centered spectral norm; and
    the fraction of samples whose centered norm stays within proxy_k *
    sqrt(log n / log log n)."""
    _validate_np(n, p)
    if not (0.0 < q <= p < 1.0):
        raise DomainError(f"need 0 < q <= p < 1, got q={q!r}, p={p!r}")
    if not (0.0 <= eps < 1.0):
        raise DomainError(f"need 0 <= eps < 1, got {eps!r}")
    if samples < 1:
        raise DomainError(f"need samples >= 1, got {samples}")
    q_prime = (1.0 - eps) * q
    npairs = pair_count(n)
    kappa = (math.log1p(-q_prime) - math.log1p(-p)
             + math.log(p) - math.log(q_prime))
    entropy_term = npairs * relative_entropy(q_prime, p)
    proxy_bound = proxy_k * math.sqrt(math.log(n) / math.log(math.log(n)))
    max_gap = 0.0
    cs_failures = 0
    within = 0
    for i in range(samples):
        g = sampler.sample_gnp(n, q_prime,
                               sampler.derived_seed(master_seed, i))
        deviation = q_prime * npairs - g.m
        log_lr = sampler.tilt_log_lr(n, g.m, p, q_prime)
        gap = abs(log_lr - (entropy_term + kappa * deviation))
        rel = gap / max(1.0, abs(log_lr))
        max_gap = max(max_gap, rel)
        if rel > 1e-10:
            raise AssertionError(
                f"tilt decomposition off by relative {rel:.3e} at sample {i}")
        norm = spectral.centered_norm(g, q_prime)
        if deviation > n * norm / 2.0 + 1e-9:
            cs_failures += 1
        within += norm <= proxy_bound
    return {"n": n, "p": p, "q": q, "eps": eps, "q_prime": q_prime,
            "kappa": kappa, "samples": samples, "max_identity_gap": max_gap,
            "cs_failures": cs_failures,
            "fraction_within_proxy": within / samples,
            "proxy_bound": proxy_bound, "proxy_k": proxy_k}
