"""Random graph samplers: plain G(n, p), split labelings, planted stars,
and exponentially tilted samples with exact likelihood ratios.

Determinism contract: every sampler is a pure function of its arguments.
Per-trial randomness anywhere in the package is derived from a master seed
and a trial index through ``SeedSequence((master, index))``, so trials can be
evaluated in any order (or in parallel) and merged deterministically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SizeError
from .graphs import Graph, index_to_pair, pair_count

__all__ = [
    "SplitLabels",
    "TiltRecord",
    "derived_rng",
    "derived_seed",
    "log_planted_density_ratio",
    "plant_star",
    "sample_gnp",
    "sample_split",
    "sample_tilted",
    "tilt_log_lr",
]

# above this estimated edge count the dense all-pairs path is never attempted
_DENSE_PAIR_LIMIT = 1 << 24


def _entropy(master_seed: int, index) -> tuple:
    tail = index if isinstance(index, tuple) else (index,)
    return (int(master_seed) & (2**64 - 1),) + tuple(int(i) for i in tail)


def derived_seed(master_seed: int, index) -> int:
    """Stable 64-bit sub-seed for trial `index` (an int, or a tuple of ints
    for nested streams) under `master_seed`."""
    ss = np.random.SeedSequence(_entropy(master_seed, index))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def derived_rng(master_seed: int, index) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(
        np.random.SeedSequence(_entropy(master_seed, index))))


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(
        np.random.SeedSequence(int(seed) & (2**64 - 1))))


def sample_gnp(n: int, p: float, seed: int) -> Graph:
    """G(n, p) sample, deterministic in (n, p, seed).

    Sparse p walks the C(n, 2) lexicographic pair sequence with geometric
    gaps, so the cost is O(m) draws; moderately dense p on small vertex sets
    uses one Bernoulli vector over all pairs.
    """
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    if not (0.0 <= p <= 1.0):
        raise DomainError(f"p must lie in [0, 1], got {p!r}")
    total = pair_count(n)
    if p <= 0.0 or total == 0:
        return Graph.empty(n)
    if p >= 1.0:
        return Graph.complete(n)
    rng = _rng(seed)
    if p >= 0.25 and total <= _DENSE_PAIR_LIMIT:
        mask = rng.random(total) < p
        return Graph.from_pair_mask(n, mask)
    picked = []
    pos = -1  # last selected pair index
    while pos < total:
        remaining = total - pos - 1
        batch = int(remaining * p * 1.2) + 16
        gaps = rng.geometric(p, size=batch)
        idx = pos + np.cumsum(gaps)
        inside = idx[idx < total]
        picked.append(inside)
        if len(inside) < len(idx):
            break
        pos = int(idx[-1])
    idx = np.concatenate(picked) if picked else np.empty(0, dtype=np.int64)
    u, v = index_to_pair(n, idx)
    return Graph(n, np.stack([u, v], axis=1), _validated=True)


@dataclass(frozen=True)
class SplitLabels:
    """Vertex labeling for the two-part construction: V1 split into
    near-equal blocks, V2 the reserved remainder."""

    blocks: tuple
    v2: tuple


def sample_split(n: int, kappa: float, r: int, p: float, seed: int):
    """G(n, p) together with the split labeling: |V2| = ceil(kappa*n) and
    V1 = the remaining vertices in r blocks, the first r-1 of size
    ceil(|V1|/r)."""
    if not (0.0 < kappa < 1.0):
        raise DomainError(f"kappa must lie in (0, 1), got {kappa!r}")
    if int(r) != r or r < 1:
        raise DomainError(f"r must be a positive integer, got {r!r}")
    n2 = math.ceil(kappa * n)
    n1 = n - n2
    if n1 < 1:
        raise SizeError(f"split leaves V1 empty (|V2| = {n2})")
    block = -(-n1 // r)
    sizes = [block] * (r - 1) + [n1 - block * (r - 1)]
    if sizes[-1] < 1:
        raise SizeError(f"split leaves an empty block (sizes {sizes})")
    g = sample_gnp(n, p, seed)
    out, start = [], 0
    for s in sizes:
        out.append(tuple(range(start, start + s)))
        start += s
    return g, SplitLabels(blocks=tuple(out), v2=tuple(range(n1, n)))


def log_planted_density_ratio(n: int, s: int, p: float) -> float:
    """log of (planted-law density / G(n,p) density) on graphs whose center
    degree came out exactly s.

    Plant at a fixed center: sample G(n,p), and if the center degree d is
    below s, add s-d uniformly chosen missing center edges.  A graph H with
    center degree exactly s arises from any pre-image obtained by deleting a
    k-subset of its center edges, k = 0..s, each with selection probability
    1/C(n-1-s+k, k), so with x = (1-p)/p:

        Q(H)/P(H) = sum_k C(s, k) * x^k / C(n-1-s+k, k).

    Center degree above s is untouched, ratio 1.  The sum is evaluated by
    log-sum-exp; for s = n-1 it collapses to (1/p)^s.
    """
    if not (0.0 < p < 1.0):
        raise DomainError(f"p must lie in (0, 1), got {p!r}")
    if s < 0 or s > n - 1:
        raise SizeError(f"star size {s} infeasible on {n} vertices")
    if s == 0:
        return 0.0
    x = math.log1p(-p) - math.log(p)
    terms = []
    for k in range(s + 1):
        t = (math.lgamma(s + 1) - math.lgamma(k + 1) - math.lgamma(s - k + 1)
             + k * x
             - (math.lgamma(n - s + k) - math.lgamma(k + 1)
                - math.lgamma(n - s)))
        terms.append(t)
    top = max(terms)
    return top + math.log(math.fsum(math.exp(t - top) for t in terms))


def plant_star(g: Graph, center: int, s: int, p: float, seed: int):
    """Force the center's degree up to at least s by adding uniformly chosen
    missing edges at the center (never removing any).

    Returns (planted graph, log-density ratio of the planted law against
    G(n, p) evaluated at the output).  The ratio is 0 when the output degree
    exceeds s and log_planted_density_ratio(n, s, p) when it is exactly s;
    it depends on the output only, as a density ratio must.
    """
    n = g.n
    if not (0 <= center < n):
        raise DomainError(f"center {center} out of range")
    if s > n - 1 or s < 0:
        raise SizeError(f"star size {s} infeasible on {n} vertices")
    nbrs = g.neighbors(center)
    d = len(nbrs)
    if d > s:
        return g, 0.0
    if d == s:
        return g, log_planted_density_ratio(n, s, p)
    absent = np.setdiff1d(np.arange(n, dtype=np.int64),
                          np.append(nbrs, center), assume_unique=False)
    rng = _rng(seed)
    chosen = rng.choice(absent, size=s - d, replace=False)
    lo = np.minimum(chosen, center)
    hi = np.maximum(chosen, center)
    new_edges = np.concatenate([g.edge_array, np.stack([lo, hi], axis=1)])
    return Graph(n, new_edges), log_planted_density_ratio(n, s, p)


@dataclass(frozen=True)
class TiltRecord:
    """Bookkeeping for one exponentially tilted sample."""

    base_p: float
    tilt_q: float
    kappa: float    # log((1-q')/(1-p)) + log(p/q')
    log_lr: float   # realized log(dQ/dP) of the sample


def tilt_log_lr(n: int, m: int, p: float, q_prime: float) -> float:
    """log(dQ/dP) for a graph with m edges, Q = G(n, q'), P = G(n, p)."""
    total = pair_count(n)
    return (m * (math.log(q_prime) - math.log(p))
            + (total - m) * (math.log1p(-q_prime) - math.log1p(-p)))


def sample_tilted(n: int, p: float, q_prime: float, seed: int):
    """Sample from the tilted law G(n, q') and record the exact likelihood
    ratio against G(n, p); weighting by exp(-log_lr) makes importance
    estimators unbiased for P-probabilities."""
    if not (0.0 < q_prime < p < 1.0):
        raise DomainError(
            f"tilt requires 0 < q' < p < 1, got q'={q_prime!r}, p={p!r}")
    g = sample_gnp(n, q_prime, seed)
    kappa = (math.log1p(-q_prime) - math.log1p(-p)
             + math.log(p) - math.log(q_prime))
    return g, TiltRecord(base_p=p, tilt_q=q_prime, kappa=kappa,
                         log_lr=tilt_log_lr(n, g.m, p, q_prime))
