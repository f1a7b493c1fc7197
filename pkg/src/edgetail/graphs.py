"""Simple undirected graphs on vertex set {0, ..., n-1}.

The canonical in-memory form is a read-only (m, 2) int64 array of edges with
u < v, sorted lexicographically.  Adjacency lists and degree vectors are built
lazily and cached.  Instances are treated as immutable; all derived graphs are
new objects.
"""

from __future__ import annotations

import hashlib

import numpy as np

from .errors import FormatError

__all__ = [
    "Graph",
    "pair_count",
    "pair_to_index",
    "index_to_pair",
    "read_graph_text",
    "write_graph_text",
]


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


def pair_to_index(n: int, u, v):
    """Linear index of the pair (u, v), u < v, in lexicographic order."""
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    return u * (2 * n - u - 1) // 2 + (v - u - 1)


def index_to_pair(n: int, t):
    """Inverse of pair_to_index, vectorized; exact for n beyond 2**26."""
    t = np.asarray(t, dtype=np.int64)
    # float solve of the row quadratic, then an integer fix-up pass
    u = np.floor(n - 0.5 - np.sqrt((n - 0.5) ** 2 - 2.0 * t)).astype(np.int64)
    u = np.clip(u, 0, n - 2)
    off = u * (2 * n - u - 1) // 2
    too_low = off > t
    while np.any(too_low):
        u = np.where(too_low, u - 1, u)
        off = u * (2 * n - u - 1) // 2
        too_low = off > t
    nxt = (u + 1) * (2 * n - u - 2) // 2
    too_high = t >= nxt
    while np.any(too_high):
        u = np.where(too_high, u + 1, u)
        nxt = (u + 1) * (2 * n - u - 2) // 2
        too_high = t >= nxt
    off = u * (2 * n - u - 1) // 2
    v = t - off + u + 1
    return u, v


class Graph:
    __slots__ = ("n", "m", "_edges", "_adj", "_degrees", "_hash")

    def __init__(self, n: int, edges=None, _validated: bool = False):
        if n < 0:
            raise FormatError("vertex count must be nonnegative")
        self.n = int(n)
        if edges is None:
            arr = np.empty((0, 2), dtype=np.int64)
        else:
            arr = np.asarray(edges, dtype=np.int64)
            if arr.size == 0:
                arr = np.empty((0, 2), dtype=np.int64)
            if arr.ndim != 2 or arr.shape[1] != 2:
                raise FormatError("edges must be an (m, 2) array")
        if not _validated and arr.shape[0]:
            lo = np.minimum(arr[:, 0], arr[:, 1])
            hi = np.maximum(arr[:, 0], arr[:, 1])
            if np.any(lo == hi):
                raise FormatError("self-loops are not allowed")
            if lo.min() < 0 or hi.max() >= n:
                raise FormatError("edge endpoint out of range")
            arr = np.stack([lo, hi], axis=1)
            order = np.lexsort((arr[:, 1], arr[:, 0]))
            arr = arr[order]
            dup = np.all(arr[1:] == arr[:-1], axis=1)
            if np.any(dup):
                raise FormatError("duplicate edge")
        arr.flags.writeable = False
        self._edges = arr
        self.m = int(arr.shape[0])
        self._adj = None
        self._degrees = None
        self._hash = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, None)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        u, v = np.triu_indices(n, k=1)
        return cls(n, np.stack([u, v], axis=1), _validated=True)

    @classmethod
    def star(cls, leaves: int) -> "Graph":
        """K_{1,s} with center 0."""
        e = np.stack([np.zeros(leaves, dtype=np.int64),
                      np.arange(1, leaves + 1, dtype=np.int64)], axis=1)
        return cls(leaves + 1, e, _validated=True)

    @classmethod
    def path(cls, n: int) -> "Graph":
        i = np.arange(n - 1, dtype=np.int64)
        return cls(n, np.stack([i, i + 1], axis=1), _validated=True)

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        if n < 3:
            raise FormatError("cycle needs at least 3 vertices")
        i = np.arange(n, dtype=np.int64)
        e = np.stack([i, (i + 1) % n], axis=1)
        return cls(n, e)

    @classmethod
    def from_pair_mask(cls, n: int, mask) -> "Graph":
        """Graph whose edge set is {pairs[t] : mask[t]}, lexicographic pairs."""
        idx = np.flatnonzero(np.asarray(mask))
        u, v = index_to_pair(n, idx)
        return cls(n, np.stack([u, v], axis=1), _validated=True)

    # -- basic queries -----------------------------------------------------

    @property
    def edge_array(self) -> np.ndarray:
        return self._edges

    def edges(self):
        return [tuple(e) for e in self._edges.tolist()]

    @property
    def degrees(self) -> np.ndarray:
        if self._degrees is None:
            d = np.bincount(self._edges.ravel(), minlength=self.n)
            d.flags.writeable = False
            self._degrees = d
        return self._degrees

    def degree_sequence(self) -> np.ndarray:
        """Degrees sorted in nonincreasing order (d_(1) first)."""
        return np.sort(self.degrees)[::-1]

    @property
    def adjacency(self):
        """List of sorted neighbor arrays, one per vertex."""
        if self._adj is None:
            ends = np.concatenate([self._edges[:, 1], self._edges[:, 0]])
            starts = np.concatenate([self._edges[:, 0], self._edges[:, 1]])
            order = np.lexsort((ends, starts))
            starts = starts[order]
            ends = ends[order]
            bounds = np.searchsorted(starts, np.arange(self.n + 1))
            self._adj = [ends[bounds[i]:bounds[i + 1]] for i in range(self.n)]
        return self._adj

    def neighbors(self, v: int) -> np.ndarray:
        return self.adjacency[v]

    def has_edge(self, u: int, v: int) -> bool:
        if u == v:
            return False
        a = self.adjacency[u]
        i = np.searchsorted(a, v)
        return bool(i < len(a) and a[i] == v)

    def edge_set(self) -> set:
        return set(map(tuple, self._edges.tolist()))

    # -- matrix views ------------------------------------------------------

    def to_sparse(self):
        import scipy.sparse as sp

        e = self._edges
        data = np.ones(2 * self.m)
        rows = np.concatenate([e[:, 0], e[:, 1]])
        cols = np.concatenate([e[:, 1], e[:, 0]])
        return sp.csr_matrix((data, (rows, cols)), shape=(self.n, self.n))

    def to_dense(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        e = self._edges
        a[e[:, 0], e[:, 1]] = 1.0
        a[e[:, 1], e[:, 0]] = 1.0
        return a

    # -- derived graphs ----------------------------------------------------

    def induced(self, vertices) -> "Graph":
        """Subgraph induced on a vertex subset, keeping original labels."""
        keep = np.zeros(self.n, dtype=bool)
        keep[np.fromiter(vertices, dtype=np.int64, count=-1)] = True
        e = self._edges
        sel = keep[e[:, 0]] & keep[e[:, 1]]
        return Graph(self.n, e[sel], _validated=True)

    def without_vertices(self, vertices) -> tuple["Graph", np.ndarray]:
        """Delete vertices and relabel survivors compactly.

        Returns (graph on n - |deleted| vertices, survivor labels in old
        numbering, ascending).
        """
        drop = np.zeros(self.n, dtype=bool)
        idx = np.fromiter(vertices, dtype=np.int64, count=-1)
        drop[idx] = True
        survivors = np.flatnonzero(~drop)
        relabel = -np.ones(self.n, dtype=np.int64)
        relabel[survivors] = np.arange(len(survivors))
        e = self._edges
        sel = ~(drop[e[:, 0]] | drop[e[:, 1]])
        e2 = relabel[e[sel]]
        return Graph(len(survivors), e2, _validated=True), survivors

    def components(self) -> list:
        """Connected components as sorted label lists, ordered by their
        smallest vertex."""
        seen = np.zeros(self.n, dtype=bool)
        out = []
        for start in range(self.n):
            if seen[start]:
                continue
            seen[start] = True
            stack, comp = [start], [start]
            while stack:
                u = stack.pop()
                for v in self.adjacency[u]:
                    if not seen[v]:
                        seen[v] = True
                        stack.append(int(v))
                        comp.append(int(v))
            comp.sort()
            out.append(comp)
        return out

    # -- identity ----------------------------------------------------------

    def content_hash(self) -> int:
        if self._hash is None:
            h = hashlib.blake2b(digest_size=8)
            h.update(str(self.n).encode())
            h.update(self._edges.tobytes())
            self._hash = int.from_bytes(h.digest(), "little")
        return self._hash

    def __eq__(self, other):
        return (isinstance(other, Graph) and self.n == other.n
                and np.array_equal(self._edges, other._edges))

    def __hash__(self):
        return self.content_hash()

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def write_graph_text(g: Graph, path) -> None:
    """Write the documented text format: 'n m' then one 'u v' line per edge."""
    with open(path, "w") as fh:
        fh.write(f"{g.n} {g.m}\n")
        for u, v in g._edges.tolist():
            fh.write(f"{u} {v}\n")


def read_graph_text(path) -> Graph:
    """Parse the text format, rejecting malformed headers, duplicate edges,
    self-loops, out-of-range endpoints, and out-of-order rows."""
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise FormatError("empty graph file")
    head = lines[0].split()
    if len(head) != 2:
        raise FormatError("header must be 'n m'")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError as exc:
        raise FormatError("non-integer header") from exc
    if len(lines) - 1 != m:
        raise FormatError(f"expected {m} edge lines, found {len(lines) - 1}")
    edges = np.empty((m, 2), dtype=np.int64)
    prev = (-1, -1)
    for i, ln in enumerate(lines[1:]):
        parts = ln.split()
        if len(parts) != 2:
            raise FormatError(f"bad edge line: {ln!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise FormatError(f"non-integer edge line: {ln!r}") from exc
        if not (0 <= u < v < n):
            raise FormatError(f"edge ({u}, {v}) violates 0 <= u < v < n")
        if (u, v) <= prev:
            raise FormatError("edges must be strictly ascending lexicographic")
        prev = (u, v)
        edges[i] = (u, v)
    return Graph(n, edges, _validated=True)
