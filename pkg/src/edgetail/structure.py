"""Structural machinery behind the tail analysis: degree partitions,
iterative cycle removal, the star-forest decomposition, and checkers with
witnesses for the named event families.

Checkers return an EventReport whose `params_used` records every finite-n
constant that stood in for an asymptotic threshold; `holds` is True/False,
or None for the one budgeted search that can come back undecided.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import spectral
from .errors import DomainError
from .graphs import Graph, write_graph_text
from .rates import RegimeParams, compute_lp
from .sampler import derived_rng

__all__ = [
    "DegreePartition",
    "Decomposition",
    "EventReport",
    "check_event_A1",
    "check_event_A2",
    "check_event_B",
    "check_event_C",
    "check_event_D",
    "check_event_T",
    "check_trees_event",
    "degree_order_stats",
    "degree_partition",
    "degree_ranked_vertices",
    "expected_tree_count_bound",
    "log_expected_tree_count",
    "prune_and_center",
    "remove_cycles",
    "star_decompose",
    "star_forest_ok",
    "test_decreasing",
    "write_decomposition_bundle",
]


@dataclass(frozen=True)
class DegreePartition:
    """Vertex classes by degree: x1 at or above the high cutoff, x2 in the
    moderate band, y the rest; t1 holds the y-vertices whose degree into x1
    is exactly 1 after the cross graph is pruned of cycles, t2 = y minus t1."""

    x1: tuple
    x2: tuple
    y: tuple
    t1: tuple
    t2: tuple
    high_cut: float
    moderate_cut: float


@dataclass(frozen=True)
class Decomposition:
    """Two-part edge partition of a graph: f1 a disjoint union of stars,
    f2 everything else.  Edges of the removed cycles stay inside f2; the
    cycles themselves are kept as an ordered list, and every edge carries a
    provenance tag naming the pipeline stage that placed it."""

    f1: Graph
    f2: Graph
    h: Graph
    cycles: tuple
    provenance: dict


@dataclass(frozen=True)
class EventReport:
    holds: object  # True, False, or None when a search budget ran out
    witness: object
    params_used: dict


def degree_order_stats(g: Graph) -> np.ndarray:
    """Degrees in non-increasing order, d_(1) first."""
    return g.degree_sequence()


def degree_ranked_vertices(g: Graph) -> np.ndarray:
    """Vertices by descending degree, ties by ascending label."""
    return np.lexsort((np.arange(g.n), -g.degrees))


# ---------------------------------------------------------------------------
# cycle removal


def _adjacency_sets(g: Graph) -> list:
    return [set(map(int, g.neighbors(v))) for v in range(g.n)]


def _dfs_find_cycle(n: int, adj: list):
    # lowest-label-first DFS; a back edge closes the reported cycle
    color = [0] * n  # 0 unseen, 1 on stack, 2 done
    parent = [-1] * n
    for root in range(n):
        if color[root] or not adj[root]:
            continue
        color[root] = 1
        stack = [(root, iter(sorted(adj[root])))]
        while stack:
            u, it = stack[-1]
            advanced = False
            for v in it:
                if v == parent[u]:
                    continue
                if color[v] == 1:
                    cyc = [u]
                    while cyc[-1] != v:
                        cyc.append(parent[cyc[-1]])
                    cyc.reverse()
                    return cyc
                if color[v] == 0:
                    color[v] = 1
                    parent[v] = u
                    stack.append((v, iter(sorted(adj[v]))))
                    advanced = True
                    break
            if not advanced:
                color[u] = 2
                stack.pop()
    return None


def _bfs_short_cycles_from(root: int, adj: list, cap: int):
    # breadth-first to depth ceil(cap/2); every non-tree closure yields a
    # candidate simple cycle by walking both parent chains to their meet
    limit = (cap + 1) // 2
    dist = {root: 0}
    parent = {root: -1}
    frontier = [root]
    best = None
    while frontier:
        nxt = []
        for u in frontier:
            for v in sorted(adj[u]):
                if v == parent[u]:
                    continue
                if v not in dist:
                    if dist[u] < limit:
                        dist[v] = dist[u] + 1
                        parent[v] = u
                        nxt.append(v)
                    continue
                chain_u, chain_v = [u], [v]
                while dist[chain_u[-1]] > dist[chain_v[-1]]:
                    chain_u.append(parent[chain_u[-1]])
                while dist[chain_v[-1]] > dist[chain_u[-1]]:
                    chain_v.append(parent[chain_v[-1]])
                while chain_u[-1] != chain_v[-1]:
                    chain_u.append(parent[chain_u[-1]])
                    chain_v.append(parent[chain_v[-1]])
                if len(set(chain_u) | set(chain_v)) != len(chain_u) + len(chain_v) - 1:
                    continue  # chains touch before the meet: not simple here
                cyc = chain_u[::-1] + chain_v[:-1]
                if len(cyc) <= cap and (best is None or len(cyc) < len(best)):
                    best = cyc
        frontier = nxt
    return best


def _delete_cycle(adj: list, cyc: list) -> None:
    for i, u in enumerate(cyc):
        v = cyc[(i + 1) % len(cyc)]
        adj[u].discard(v)
        adj[v].discard(u)


def _graph_from_adj(n: int, adj: list) -> Graph:
    edges = sorted((u, v) for u in range(n) for v in adj[u] if u < v)
    arr = np.array(edges, dtype=np.int64).reshape(-1, 2)
    return Graph(n, arr, _validated=True)


def remove_cycles(g: Graph, length_cap: int | None = None):
    """Greedily delete edge-disjoint cycles, lowest-label cycle first, until
    none remains (none of length <= length_cap, when given).

    Returns (reduced graph, removed cycles as vertex tuples, per-vertex
    counts of removed cycles).  The greedy count is a certified lower bound
    on the maximum edge-disjoint cycle packing, never an upper bound.
    """
    adj = _adjacency_sets(g)
    removed = []
    counts = np.zeros(g.n, dtype=np.int64)
    if length_cap is None:
        while True:
            cyc = _dfs_find_cycle(g.n, adj)
            if cyc is None:
                break
            _delete_cycle(adj, cyc)
            removed.append(tuple(cyc))
            counts[list(cyc)] += 1
    elif length_cap >= 3:
        for root in range(g.n):
            while True:
                cyc = _bfs_short_cycles_from(root, adj, length_cap)
                if cyc is None:
                    break
                _delete_cycle(adj, cyc)
                removed.append(tuple(cyc))
                counts[list(cyc)] += 1
    return _graph_from_adj(g.n, adj), removed, counts


# ---------------------------------------------------------------------------
# partition and decomposition


def _partition_bools(g: Graph, rp: RegimeParams):
    d = g.degrees
    x1 = d >= rp.high_cut
    x2 = (d >= rp.moderate_cut) & ~x1
    return x1, x2


def _prune_cross(g: Graph, x1: np.ndarray, y: np.ndarray):
    # pruned bipartite graph between x1 and y, plus its removed cycles
    e = g.edge_array
    cross = (x1[e[:, 0]] & y[e[:, 1]]) | (y[e[:, 0]] & x1[e[:, 1]])
    g3 = Graph(g.n, e[cross], _validated=True)
    pruned, cycles, _ = remove_cycles(g3)
    t1 = y & (pruned.degrees == 1)
    return pruned, cycles, t1


def degree_partition(g: Graph, rp: RegimeParams) -> DegreePartition:
    """Split vertices at the two degree cutoffs, then mark the low-degree
    vertices that keep exactly one edge into the high class once the cross
    graph is pruned of cycles."""
    x1, x2 = _partition_bools(g, rp)
    y = ~(x1 | x2)
    _, _, t1 = _prune_cross(g, x1, y)
    t2 = y & ~t1
    as_tuple = lambda mask: tuple(np.flatnonzero(mask).tolist())
    return DegreePartition(x1=as_tuple(x1), x2=as_tuple(x2), y=as_tuple(y),
                           t1=as_tuple(t1), t2=as_tuple(t2),
                           high_cut=rp.high_cut, moderate_cut=rp.moderate_cut)


def star_decompose(g: Graph, rp: RegimeParams) -> Decomposition:
    """Run the decomposition pipeline: partition the vertices, prune cycles
    inside the high class, then across the moderate band, then across the
    high/low cut, and keep as f1 exactly the pruned high-to-low edges whose
    low endpoint retains degree 1.  Everything else, removed cycles
    included, lands in f2 with a stage tag."""
    x1, x2 = _partition_bools(g, rp)
    in_x = x1 | x2
    y = ~in_x
    e = g.edge_array
    m_g1 = in_x[e[:, 0]] & in_x[e[:, 1]]
    m_g2 = y[e[:, 0]] & y[e[:, 1]]
    cross = ~m_g1 & ~m_g2
    m_g3 = cross & (x1[e[:, 0]] | x1[e[:, 1]])
    m_g4 = cross & ~(x1[e[:, 0]] | x1[e[:, 1]])

    r1, cyc1, _ = remove_cycles(Graph(g.n, e[m_g1], _validated=True))
    r4, cyc4, _ = remove_cycles(Graph(g.n, e[m_g4], _validated=True))
    r3, cyc3, _ = remove_cycles(Graph(g.n, e[m_g3], _validated=True))
    t1 = y & (r3.degrees == 1)

    e3 = r3.edge_array
    leaf_end = np.where(y[e3[:, 0]], e3[:, 0], e3[:, 1])
    m_f1 = t1[leaf_end]

    provenance = {}

    def tag(edge_arr, label):
        for u, v in map(tuple, edge_arr.tolist()):
            provenance[(u, v)] = label

    tag(e3[m_f1], "F1")
    tag(r1.edge_array, "F2-G1")
    tag(e[m_g2], "F2-G2")
    tag(r4.edge_array, "F2-G4")
    tag(e3[~m_f1], "F2-G32")
    h_edges = []
    for cycles, label in ((cyc1, "H1"), (cyc3, "H3"), (cyc4, "H4")):
        for cyc in cycles:
            for i, u in enumerate(cyc):
                v = cyc[(i + 1) % len(cyc)]
                edge = (min(u, v), max(u, v))
                provenance[edge] = label
                h_edges.append(edge)

    f1 = Graph(g.n, e3[m_f1], _validated=True)
    f2_edges = sorted(set(map(tuple, e.tolist())) - set(map(tuple, e3[m_f1].tolist())))
    f2 = Graph(g.n, np.array(f2_edges, dtype=np.int64).reshape(-1, 2),
               _validated=True)
    h = Graph(g.n, np.array(sorted(set(h_edges)), dtype=np.int64).reshape(-1, 2),
              _validated=True)
    return Decomposition(f1=f1, f2=f2, h=h,
                         cycles=tuple(tuple(c) for c in cyc1 + cyc4 + cyc3),
                         provenance=provenance)


def star_forest_ok(f1: Graph) -> bool:
    """True iff every component is a single star: one center, all other
    vertices degree 1 (isolated vertices allowed)."""
    for comp in f1.components():
        k = len(comp)
        if k == 1:
            continue
        degs = f1.degrees[comp]
        if int(degs.sum()) != 2 * (k - 1) or int(degs.max()) != k - 1:
            return False
    return True


def write_decomposition_bundle(d: Decomposition, directory) -> None:
    """Serialize a decomposition: f1/f2 in the edge-list text format, one
    cycle per line, and a per-edge provenance CSV."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    write_graph_text(d.f1, out / "f1.edges")
    write_graph_text(d.f2, out / "f2.edges")
    with open(out / "cycles.txt", "w") as fh:
        for cyc in d.cycles:
            fh.write(" ".join(map(str, cyc)) + "\n")
    with open(out / "provenance.csv", "w") as fh:
        fh.write("u,v,tag\n")
        for (u, v), label in sorted(d.provenance.items()):
            fh.write(f"{u},{v},{label}\n")


# ---------------------------------------------------------------------------
# event checkers


def _x_bool(g: Graph, rp: RegimeParams) -> np.ndarray:
    x1, x2 = _partition_bools(g, rp)
    return x1 | x2


def check_event_A1(g: Graph, rp: RegimeParams, *, min_length: int | None = None,
                   budget: int = 10_000) -> EventReport:
    """Searches for a long cycle with at least half its vertices in the
    high-or-moderate degree class.  Enumerates simple cycles up to `budget`
    of them; holds is None when the budget runs out without a witness."""
    import networkx as nx

    min_len = rp.long_cycle_len if min_length is None else min_length
    x = _x_bool(g, rp)
    params = {"min_length": min_len, "budget": budget,
              "high_cut": rp.high_cut, "moderate_cut": rp.moderate_cut}
    seen = 0
    for cyc in nx.simple_cycles(_to_networkx(g)):
        seen += 1
        if len(cyc) >= min_len and sum(bool(x[v]) for v in cyc) >= len(cyc) / 2:
            return EventReport(True, tuple(cyc), params)
        if seen >= budget:
            return EventReport(None, None, params)
    return EventReport(False, None, params)


def _to_networkx(g: Graph):
    import networkx as nx

    gx = nx.Graph()
    gx.add_nodes_from(range(g.n))
    gx.add_edges_from(map(tuple, g.edge_array.tolist()))
    return gx


def check_event_A2(g: Graph, rp: RegimeParams, *,
                   threshold: float | None = None) -> EventReport:
    """True iff some vertex has strictly more neighbors inside the
    high-or-moderate class than the threshold (default delta_p^(7/8))."""
    thr = rp.delta_p ** 0.875 if threshold is None else threshold
    x = _x_bool(g, rp)
    params = {"threshold": thr, "high_cut": rp.high_cut,
              "moderate_cut": rp.moderate_cut}
    for v in range(g.n):
        count = int(x[g.neighbors(v)].sum())
        if count > thr:
            return EventReport(True, v, params)
    return EventReport(False, None, params)


def check_event_B(g: Graph, rp: RegimeParams, use_m0: bool = False) -> EventReport:
    """True iff greedy cycle removal pushes some vertex's edge-disjoint
    cycle count strictly above the budget.  Short cycles only (length at
    most the long-cycle threshold) for the capped variant; any length for
    the uncapped one.  Greedy undercounts, so True is certain and False
    only means not witnessed."""
    if use_m0:
        budget, cap = rp.cycle_budget_m0, None
    else:
        budget, cap = rp.cycle_budget_m, rp.long_cycle_len
    _, removed, counts = remove_cycles(g, length_cap=cap)
    params = {"budget": budget, "length_cap": cap, "use_m0": use_m0}
    if counts.size and counts.max() > budget:
        v = int(counts.argmax())
        through = tuple(c for c in removed if v in c)
        return EventReport(True, (v, through), params)
    return EventReport(False, None, params)


def check_event_C(g: Graph, rp: RegimeParams, *,
                  count_threshold: float | None = None,
                  degree_threshold: float | None = None) -> EventReport:
    """True iff some vertex sees at least count_threshold other vertices of
    degree strictly above degree_threshold within graph distance two."""
    need = rp.delta_p ** (1 / 3) if count_threshold is None else count_threshold
    deg_thr = rp.delta_p ** 0.75 if degree_threshold is None else degree_threshold
    high = g.degrees > deg_thr
    params = {"count_threshold": need, "degree_threshold": deg_thr}
    for v in range(g.n):
        ball = set(map(int, g.neighbors(v)))
        for u in list(ball):
            ball.update(map(int, g.neighbors(u)))
        ball.discard(v)
        found = tuple(u for u in sorted(ball) if high[u])
        if len(found) >= need:
            return EventReport(True, (v, found), params)
    return EventReport(False, None, params)


def check_event_D(g: Graph, rp: RegimeParams, tau: float) -> EventReport:
    """Decomposability: the star part must be a genuine star forest and the
    remainder must be spectrally small (norm at most tau*sqrt(L_p)) with
    max degree at most tau*L_p."""
    d = star_decompose(g, rp)
    stars = star_forest_ok(d.f1)
    norm = spectral.spectral_norm(d.f2)
    dmax = int(d.f2.degrees.max()) if d.f2.n else 0
    params = {"tau": tau, "lp": rp.lp, "f2_norm": norm, "f2_max_degree": dmax,
              "norm_bound": tau * math.sqrt(rp.lp), "degree_bound": tau * rp.lp,
              "f1_is_star_forest": stars}
    holds = stars and norm <= tau * math.sqrt(rp.lp) and dmax <= tau * rp.lp
    return EventReport(holds, d, params)


def check_event_T(g: Graph, rp: RegimeParams, tau: float) -> EventReport:
    """True iff the graph is a forest whose components all have at most
    (1+tau)*delta_p vertices."""
    bound = (1 + tau) * rp.delta_p
    params = {"tau": tau, "delta_p": rp.delta_p, "component_bound": bound}
    for comp in g.components():
        edges = int(g.degrees[comp].sum()) // 2
        if edges >= len(comp):
            return EventReport(False, ("cycle_in_component", comp[0]), params)
        if len(comp) > bound:
            return EventReport(False, ("oversized_component", comp[0], len(comp)),
                               params)
    return EventReport(True, None, params)


def check_trees_event(g: Graph, rp: RegimeParams, thetas) -> EventReport:
    """Feasibility of vertex-disjoint trees of sizes ceil(theta*L_p)+1, one
    per theta, hosted in distinct components: sorted targets against sorted
    component sizes.  Splitting one component into several trees is not
    attempted, so False means not witnessed this way."""
    targets = sorted((math.ceil(t * rp.lp) + 1 for t in thetas), reverse=True)
    comps = sorted(g.components(), key=len, reverse=True)
    params = {"targets": tuple(targets), "lp": rp.lp,
              "note": "single-component splitting not attempted"}
    if len(comps) < len(targets):
        return EventReport(False, None, params)
    assignment = []
    for t, comp in zip(targets, comps):
        if len(comp) < t:
            return EventReport(False, None, params)
        assignment.append((comp[0], len(comp), t))
    return EventReport(True, tuple(assignment), params)


def log_expected_tree_count(n: int, p: float, t: int) -> float:
    """log of C(n,t) * t^(t-2) * p^(t-1): expected count of labelled trees
    on t vertices appearing in G(n, p).  -inf when t > n."""
    if t < 1:
        raise DomainError(f"tree size must be at least 1, got {t}")
    if t > n:
        return -math.inf
    log_choose = (math.lgamma(n + 1) - math.lgamma(t + 1)
                  - math.lgamma(n - t + 1))
    return log_choose + (t - 2) * math.log(t) + (t - 1) * math.log(p)


def expected_tree_count_bound(n: int, p: float, theta: float) -> float:
    """First-moment bound for trees of size ceil(theta*L_p)+1 in G(n, p)."""
    t = math.ceil(theta * compute_lp(n, p)) + 1
    log_val = log_expected_tree_count(n, p, t)
    if log_val == -math.inf:
        return 0.0
    return math.exp(log_val) if log_val < 700 else math.inf


def prune_and_center(g: Graph, rp: RegimeParams, q: float, budget: int):
    """Remove the `budget` highest-degree vertices (ties by label) and
    return the pruned graph with the norm of its adjacency matrix centered
    by q on the surviving vertex set."""
    cap = math.ceil(10 / rp.p)
    if budget < 0 or budget > cap:
        raise DomainError(f"budget must lie in [0, {cap}], got {budget}")
    victims = degree_ranked_vertices(g)[:budget]
    pruned, _ = g.without_vertices(victims)
    return pruned, spectral.centered_norm(pruned, q)


def test_decreasing(event, g: Graph, trials: int, seed: int, *,
                    keep: float = 0.5) -> EventReport:
    """Random-subgraph probe for the decreasing property.  holds=True means
    a violation was found: the event holds on g but fails on some sampled
    edge-deletion subgraph (returned as the witness)."""
    params = {"trials": trials, "keep": keep, "seed": seed}
    if not event(g):
        return EventReport(False, None, {**params, "note": "event false on g"})
    for t in range(trials):
        rng = derived_rng(seed, t)
        mask = rng.random(g.m) < keep
        sub = Graph(g.n, g.edge_array[mask], _validated=True)
        if not event(sub):
            return EventReport(True, sub, params)
    return EventReport(False, None, params)
