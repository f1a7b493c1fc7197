"""Certificate pipeline for the lower-tail implication: from degree
hypotheses to an eigenvalue certificate via overlap analysis, independent
set or clique extraction, and explicit Rayleigh test vectors.

The auxiliary "sparse pair" graph F puts an edge between two high-degree
vertices when their neighborhoods interact weakly.  A clique in F yields
near-disjoint stars certifying the r-th eigenvalue; an independent set in
F yields a cross-edge-rich union certifying the top eigenvalue.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ConfigError, NotFoundError, SizeError
from .graphs import Graph
from .rates import RegimeParams, TailSpec
from .spectral import rayleigh_quotient
from .structure import degree_ranked_vertices

__all__ = [
    "OverlapConfig",
    "Verdict",
    "build_test_vector_independent",
    "build_test_vector_overlap",
    "build_test_vectors_clique",
    "greedy_independent_set",
    "overlap_graph",
    "ramsey_find",
    "sparse_pair_graph",
    "verdict_record",
    "verify_lt_implication",
]


@dataclass(frozen=True)
class OverlapConfig:
    """Constants for the certificate pipeline.

    Strict mode enforces the proof's constraints, under which K and L are
    astronomically large; relaxed mode takes user-sized K and L and records
    whether the proof-scale bound K >= (4/eps1^4 + 1) * L holds.
    """

    r: int
    delta_r: float
    eps: float
    eps1: float
    K: int
    L: int
    relaxed: bool
    eps2: float
    r_prime: int
    strict_k_bound_ok: bool

    @classmethod
    def make(cls, r: int, delta_r: float, eps: float, eps1: float, K: int,
             L: int | None = None, relaxed: bool = True) -> "OverlapConfig":
        if r < 1:
            raise ConfigError(f"r must be at least 1, got {r}")
        if not (0.0 < delta_r < 1.0):
            raise ConfigError(f"delta_r must lie in (0, 1), got {delta_r!r}")
        if eps <= 0 or eps1 <= 0:
            raise ConfigError("eps and eps1 must be positive")
        if K < 1:
            raise ConfigError(f"K must be at least 1, got {K}")
        eps2 = eps * eps
        r_prime = math.ceil(1.0 / eps2 ** 2)
        if not relaxed:
            cap = min((1 - delta_r) ** 2 / (8 * r), r ** -0.25, 0.25)
            if not eps < cap:
                raise ConfigError(f"strict mode needs eps < {cap}, got {eps}")
            if not eps1 <= min(eps2 / r, 0.25):
                raise ConfigError(
                    f"strict mode needs eps1 <= {min(eps2 / r, 0.25)}, got {eps1}")
            # compare via logs: K and 4^(1/eps^4) overflow floats
            need = math.log(4.0 / eps1 ** 4 + 1.0, 4) + 1.0 / eps ** 4
            if math.log(K, 4) < need - 1e-9:
                raise ConfigError(
                    f"strict mode needs log4(K) >= {need:.4g}, got {math.log(K, 4):.4g}")
            forced_l = 4 ** r_prime
            if L is not None and L != forced_l:
                raise ConfigError("strict mode forces L = 4^r_prime")
            L = forced_l
        elif L is None:
            raise ConfigError("relaxed mode requires an explicit L")
        bound_ok = math.log(K, 4) >= math.log(4.0 / eps1 ** 4 + 1.0, 4) + math.log(L, 4) - 1e-9
        return cls(r=r, delta_r=delta_r, eps=eps, eps1=eps1, K=K, L=L,
                   relaxed=relaxed, eps2=eps2, r_prime=r_prime,
                   strict_k_bound_ok=bound_ok)


@dataclass(frozen=True)
class Verdict:
    """Pipeline outcome: one of hypothesis_fails, lambda1_certified,
    lambda_r_certified, counterexample.  Certified outcomes carry their test
    vector(s) in sparse index->value form plus the claimed bound."""

    outcome: str
    certificate: dict


def _sparse_form(phi: np.ndarray) -> dict:
    nz = np.flatnonzero(phi)
    return {int(i): float(phi[i]) for i in nz}


def verdict_record(v: Verdict) -> dict:
    return {"outcome": v.outcome, "certificate": v.certificate}


def _overlap_count(g: Graph, u: int, v: int) -> int:
    # sorted-array intersection of the two neighbor lists
    return int(np.intersect1d(g.neighbors(u), g.neighbors(v),
                              assume_unique=True).size)


def top_k_centers(g: Graph, k: int) -> np.ndarray:
    if g.n < k:
        raise SizeError(f"need at least {k} vertices, got {g.n}")
    return degree_ranked_vertices(g)[:k]


def overlap_graph(g: Graph, cfg: OverlapConfig, rp: RegimeParams) -> Graph:
    """Auxiliary graph on the K highest-degree vertices: index i stands for
    the i-th ranked vertex, and an edge joins two indices when their
    neighborhoods share at least eps1*L_p vertices."""
    centers = top_k_centers(g, cfg.K)
    thr = cfg.eps1 * rp.lp
    edges = []
    for i in range(cfg.K):
        for j in range(i + 1, cfg.K):
            if _overlap_count(g, int(centers[i]), int(centers[j])) >= thr:
                edges.append((i, j))
    return Graph(cfg.K, np.array(edges, dtype=np.int64).reshape(-1, 2))


def greedy_independent_set(h: Graph, target: int) -> tuple:
    """Minimum-degree-first greedy independent set, ties by label; always
    of size at least ceil(|V|/(max_degree+1)).  `target` is the caller's
    goal; extraction runs to exhaustion regardless."""
    alive = np.ones(h.n, dtype=bool)
    deg = h.degrees.astype(np.int64).copy()
    chosen = []
    while alive.any():
        cand = np.flatnonzero(alive)
        v = int(cand[np.argmin(deg[cand])])
        chosen.append(v)
        killed = [v] + [int(u) for u in h.neighbors(v) if alive[u]]
        for u in killed:
            alive[u] = False
        for u in killed:
            for w in h.neighbors(u):
                if alive[w]:
                    deg[w] -= 1
    return tuple(sorted(chosen))


def _cross_edge_count(g: Graph, a_set: set, b_set: set) -> int:
    count = 0
    for u in a_set:
        for w in g.neighbors(u):
            if int(w) in b_set:
                count += 1
    return count


def sparse_pair_graph(g: Graph, v_l_prime, cfg: OverlapConfig,
                      rp: RegimeParams) -> Graph:
    """Pair graph F on the given vertices: edge (a, b) when the number of
    edges between the non-shared parts of their neighborhoods is at most
    eps2 * L_p^(3/2)."""
    verts = [int(v) for v in v_l_prime]
    thr = cfg.eps2 * rp.lp ** 1.5
    nbrs = [set(map(int, g.neighbors(v))) for v in verts]
    edges = []
    for a in range(len(verts)):
        for b in range(a + 1, len(verts)):
            common = nbrs[a] & nbrs[b]
            cross = _cross_edge_count(g, nbrs[a] - common, nbrs[b] - common)
            if cross <= thr:
                edges.append((a, b))
    return Graph(len(verts), np.array(edges, dtype=np.int64).reshape(-1, 2))


def _find_homogeneous(adj: np.ndarray, target: int, want_edges: bool):
    # lexicographically first clique (want_edges) or independent set
    n = adj.shape[0]

    def extend(chosen, cand):
        if len(chosen) == target:
            return chosen
        for i, v in enumerate(cand):
            if len(chosen) + len(cand) - i < target:
                return None
            rest = [u for u in cand[i + 1:] if adj[v, u] == want_edges]
            got = extend(chosen + [v], rest)
            if got is not None:
                return got
        return None

    if target == 0:
        return []
    return extend([], list(range(n)))


def ramsey_find(f: Graph, target: int):
    """Exhaustive search with pruning for a clique of size `target`, then an
    independent set of size `target`; deterministic lexicographic order.
    When |V(F)| >= 4^target one of the two must exist; on smaller vertex
    sets NotFoundError is possible."""
    adj = f.to_dense().astype(bool)
    clique = _find_homogeneous(adj, target, True)
    if clique is not None:
        return "clique", tuple(clique)
    indep = _find_homogeneous(adj, target, False)
    if indep is not None:
        return "independent", tuple(indep)
    assert f.n < 4 ** target  # guaranteed by Ramsey's theorem above this size
    raise NotFoundError(
        f"no clique or independent set of size {target} on {f.n} vertices")


def _tilde_vk(g: Graph, v: int, centers: np.ndarray, cfg: OverlapConfig,
              rp: RegimeParams) -> list:
    thr = cfg.eps1 * rp.lp
    out = []
    for c in centers:
        c = int(c)
        if c != v and _overlap_count(g, v, c) >= thr:
            out.append(c)
    return out


def build_test_vector_overlap(g: Graph, v: int, cfg: OverlapConfig,
                              rp: RegimeParams) -> np.ndarray:
    """Test vector seeded at one high-overlap vertex: sqrt(L_p) at v,
    eps1^2*sqrt(L_p) on the other top-K vertices overlapping v, 1 on the
    rest of v's neighborhood."""
    centers = top_k_centers(g, min(cfg.K, g.n))
    tilde = _tilde_vk(g, int(v), centers, cfg, rp)
    phi = np.zeros(g.n)
    root = math.sqrt(rp.lp)
    phi[list(map(int, g.neighbors(v)))] = 1.0
    phi[tilde] = cfg.eps1 ** 2 * root
    phi[int(v)] = root
    return phi


def build_test_vector_independent(g: Graph, x, cfg: OverlapConfig,
                                  rp: RegimeParams):
    """Prune the host graph so the chosen centers' neighborhoods become
    disjoint (drop edges among the centers and every center edge into a
    pairwise-shared neighbor), then load sqrt(L_p) on the centers and 1 on
    the union of the surviving neighborhoods.  Edge deletion only lowers
    eigenvalues, so a Rayleigh bound on the pruned graph holds for g."""
    xs = sorted(int(u) for u in x)
    x_set = set(xs)
    shared = set()
    for i, u in enumerate(xs):
        nu = set(map(int, g.neighbors(u)))
        for w in xs[i + 1:]:
            shared |= nu & set(map(int, g.neighbors(w)))
    e = g.edge_array
    drop = np.zeros(g.m, dtype=bool)
    for idx, (a, b) in enumerate(map(tuple, e.tolist())):
        if a in x_set and b in x_set:
            drop[idx] = True
        elif (a in x_set and b in shared) or (b in x_set and a in shared):
            drop[idx] = True
    pruned = Graph(g.n, e[~drop], _validated=True)
    phi = np.zeros(g.n)
    for u in xs:
        phi[list(map(int, pruned.neighbors(u)))] = 1.0
    phi[xs] = math.sqrt(rp.lp)
    return pruned, phi


def build_test_vectors_clique(g: Graph, x, cfg: OverlapConfig,
                              rp: RegimeParams) -> list:
    """One vector per chosen center: sqrt(degree) at the center, 1 on the
    part of its neighborhood shared with no other chosen center.  Center
    vertices are excluded from every neighborhood part, which makes the
    supports pairwise disjoint; this is asserted."""
    xs = [int(u) for u in x]
    x_set = set(xs)
    nbrs = {u: set(map(int, g.neighbors(u))) for u in xs}
    vectors = []
    for u in xs:
        exclusive = nbrs[u] - x_set
        for w in xs:
            if w != u:
                exclusive -= nbrs[w]
        phi = np.zeros(g.n)
        phi[sorted(exclusive)] = 1.0
        phi[u] = math.sqrt(g.degrees[u])
        vectors.append(phi)
    support = np.zeros(g.n, dtype=int)
    for phi in vectors:
        support += phi > 0
    assert support.max() <= 1, "clique test vectors must have disjoint supports"
    return vectors


def _subspace_lower_bound(g: Graph, vectors: list) -> float:
    # smallest eigenvalue of the r x r generalized problem <phi_a, A phi_b>
    # against the Gram matrix: an exact lower bound on lambda_r over the span
    a = g.to_sparse()
    images = [a @ phi for phi in vectors]
    r = len(vectors)
    m = np.empty((r, r))
    gram = np.empty((r, r))
    for i in range(r):
        for j in range(r):
            m[i, j] = float(vectors[i] @ images[j])
            gram[i, j] = float(vectors[i] @ vectors[j])
    vals = scipy.linalg.eigh(m, gram, eigvals_only=True)
    return float(vals[0])


def _chain_diagnostic(g: Graph, vectors: list) -> float:
    # the proof-style bound replayed: per-vector quotient minus the total
    # normalized interaction with the other vectors (Gershgorin on the
    # normalized interaction matrix)
    a = g.to_sparse()
    norms = [math.sqrt(float(phi @ phi)) for phi in vectors]
    images = [a @ phi for phi in vectors]
    worst = math.inf
    for i, phi in enumerate(vectors):
        diag = float(phi @ images[i]) / norms[i] ** 2
        off = sum(abs(float(phi @ images[j])) / (norms[i] * norms[j])
                  for j in range(len(vectors)) if j != i)
        worst = min(worst, diag - off)
    return worst


def verify_lt_implication(g: Graph, cfg: OverlapConfig, rp: RegimeParams,
                          tailspec: TailSpec | None = None) -> Verdict:
    """End-to-end certificate pipeline.

    Checks the two degree hypotheses, then walks overlap graph ->
    high-overlap test vector -> independent set -> pair graph -> clique or
    independent set -> Case 1/2 test vectors.  Returns the first verdict
    whose certificate meets its bound; otherwise a counterexample verdict
    naming every inequality that failed at this finite size.
    """
    if not isinstance(cfg, OverlapConfig):
        raise ConfigError("cfg must be an OverlapConfig")
    if tailspec is not None:
        if tailspec.target != "eigenvalue" or tailspec.side != "lower":
            raise ConfigError("tailspec must describe an eigenvalue lower tail")
        if tailspec.r != cfg.r:
            raise ConfigError(
                f"tailspec r={tailspec.r} disagrees with cfg r={cfg.r}")
    lp = rp.lp
    root = math.sqrt(lp)
    deg_sorted = g.degree_sequence()
    hyp_k = (cfg.delta_r, cfg.eps)
    need_dk = (1 - cfg.delta_r + cfg.eps) ** 2 * lp
    base = {"n": g.n, "K": cfg.K, "L": cfg.L, "r": cfg.r,
            "delta_r": cfg.delta_r, "eps": cfg.eps, "eps1": cfg.eps1,
            "eps2": cfg.eps2, "relaxed": cfg.relaxed,
            "strict_k_bound_ok": cfg.strict_k_bound_ok, "lp": lp}
    if g.n < cfg.K or deg_sorted[cfg.K - 1] < need_dk:
        got = float(deg_sorted[cfg.K - 1]) if g.n >= cfg.K else None
        return Verdict("hypothesis_fails", {
            **base, "failed": "d_(K) >= (1-delta_r+eps)^2 * L_p",
            "required": need_dk, "observed": got})
    if deg_sorted[0] > lp:
        return Verdict("hypothesis_fails", {
            **base, "failed": "d_(1) <= L_p",
            "required": lp, "observed": float(deg_sorted[0])})

    diagnostics = []
    centers = top_k_centers(g, cfg.K)
    h = overlap_graph(g, cfg, rp)
    trigger = 4.0 / cfg.eps1 ** 4

    # high-overlap route: any top-K vertex whose overlap neighborhood is
    # large enough gets the dedicated test vector
    h_deg = h.degrees
    order = np.lexsort((np.arange(cfg.K), -h_deg))
    for i in map(int, order):
        if h_deg[i] < trigger:
            break
        v = int(centers[i])
        phi = build_test_vector_overlap(g, v, cfg, rp)
        quot = rayleigh_quotient(g, phi)
        if quot >= 2 * root:
            return Verdict("lambda1_certified", {
                **base, "route": "high_overlap", "vertex": v,
                "quotient": quot, "bound": 2 * root,
                "vector": _sparse_form(phi)})
        diagnostics.append(
            f"high-overlap vector at vertex {v}: quotient {quot:.6g} "
            f"< 2*sqrt(L_p) = {2 * root:.6g}")

    indep_h = greedy_independent_set(h, cfg.L)
    v_l_prime = [int(centers[i]) for i in indep_h[:cfg.L]]
    f = sparse_pair_graph(g, v_l_prime, cfg, rp)
    target = cfg.r_prime if not cfg.relaxed else cfg.r
    try:
        kind, found = ramsey_find(f, target)
    except NotFoundError as exc:
        diagnostics.append(str(exc))
        return Verdict("counterexample", {**base, "diagnostics": diagnostics})

    if kind == "clique":
        xs = [v_l_prime[i] for i in found[:cfg.r]]
        vectors = build_test_vectors_clique(g, xs, cfg, rp)
        bound = _subspace_lower_bound(g, vectors)
        chain = _chain_diagnostic(g, vectors)
        need = (1 - cfg.delta_r + cfg.eps / 2) * root
        if bound >= need:
            return Verdict("lambda_r_certified", {
                **base, "route": "clique", "centers": xs, "bound": bound,
                "required": need, "chain_diagnostic": chain,
                "vectors": [_sparse_form(v) for v in vectors]})
        diagnostics.append(
            f"clique subspace bound {bound:.6g} < (1-delta_r+eps/2)*sqrt(L_p)"
            f" = {need:.6g} (chain diagnostic {chain:.6g})")
    else:
        cap = max(cfg.r, math.ceil(8.0 / cfg.eps2))
        xs_idx = list(found)
        adj = f.to_dense().astype(bool)
        for v in range(f.n):
            if len(xs_idx) >= cap:
                break
            if v in xs_idx:
                continue
            if not any(adj[v, u] for u in xs_idx):
                xs_idx.append(v)
        xs = sorted(v_l_prime[i] for i in xs_idx)
        if len(xs_idx) < math.ceil(8.0 / cfg.eps2):
            diagnostics.append(
                f"independent set has {len(xs_idx)} vertices, below the "
                f"proof's 8/eps2 = {math.ceil(8.0 / cfg.eps2)}")
        pruned, phi = build_test_vector_independent(g, xs, cfg, rp)
        quot = rayleigh_quotient(pruned, phi)
        if quot >= 2 * root:
            return Verdict("lambda1_certified", {
                **base, "route": "independent", "centers": xs,
                "quotient": quot, "bound": 2 * root,
                "vector": _sparse_form(phi)})
        diagnostics.append(
            f"independent-set vector: quotient {quot:.6g} < 2*sqrt(L_p) = "
            f"{2 * root:.6g}")
    return Verdict("counterexample", {**base, "diagnostics": diagnostics})
