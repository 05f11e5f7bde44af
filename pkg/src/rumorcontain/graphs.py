"""Directed networks over which rumor and truth spread.

Graphs are stored as dense 0/1 adjacency matrices, ``adj[i, j] == 1`` meaning
person ``i`` can deliver a message to person ``j``.  The node counts of interest
are small (tens to a few hundred), so dense storage costs nothing and keeps
the bookkeeping obvious.  The integrator works from the in-neighbour lists
exposed by :meth:`DirectedGraph.in_neighbors`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path

import numpy as np

from rumorcontain.errors import DomainError, ParseError

__all__ = [
    "DirectedGraph",
    "named_small_graph",
    "watts_strogatz",
    "barabasi_albert",
    "load_edge_list",
    "write_edge_list",
    "realistic_standin",
    "graph_to_json",
    "graph_from_json",
]


@dataclass(frozen=True, eq=False)
class DirectedGraph:
    n: int
    adj: np.ndarray
    label: str = field(default="")

    def __post_init__(self):
        adj = np.array(self.adj, dtype=np.uint8, copy=True)
        if self.n < 1:
            raise DomainError(f"node count must be positive, got {self.n}")
        if adj.shape != (self.n, self.n):
            raise DomainError(f"adjacency must be {self.n}x{self.n}, got {adj.shape}")
        if np.any(adj > 1):
            raise DomainError("adjacency entries must be 0 or 1")
        if np.any(np.diagonal(adj)):
            raise DomainError("self-loops are not allowed")
        adj.setflags(write=False)
        object.__setattr__(self, "adj", adj)

    @classmethod
    def from_edges(cls, n, edges, label="", symmetric=False):
        adj = np.zeros((n, n), dtype=np.uint8)
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise DomainError(f"edge ({u}, {v}) out of range for n={n}")
            adj[u, v] = 1
            if symmetric:
                adj[v, u] = 1
        return cls(n, adj, label)

    def __eq__(self, other):
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.adj, other.adj)

    def __hash__(self):
        return hash((self.n, self.adj.tobytes()))

    def __repr__(self):
        return f"DirectedGraph(n={self.n}, arcs={self.num_arcs}, label={self.label!r})"

    @property
    def num_arcs(self):
        return int(self.adj.sum())

    @property
    def is_symmetric(self):
        return bool(np.array_equal(self.adj, self.adj.T))

    def arcs(self):
        """Arcs ``(u, v)`` in row-major order."""
        rows, cols = np.nonzero(self.adj)
        return [(int(u), int(v)) for u, v in zip(rows, cols)]

    def undirected_edges(self):
        """Edges ``(u, v)`` with ``u < v`` present in either direction."""
        both = np.triu(self.adj | self.adj.T, k=1)
        rows, cols = np.nonzero(both)
        return [(int(u), int(v)) for u, v in zip(rows, cols)]

    @cached_property
    def in_neighbors(self):
        """CSR-style ``(indptr, indices)``: sources ``j`` of arcs ``j -> i``, ascending in ``j``."""
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        indptr[1:] = np.cumsum(self.adj.sum(axis=0, dtype=np.int64))
        indices = np.empty(indptr[-1], dtype=np.int64)
        for i in range(self.n):
            indices[indptr[i]:indptr[i + 1]] = np.flatnonzero(self.adj[:, i])
        indptr.setflags(write=False)
        indices.setflags(write=False)
        return indptr, indices

    def with_label(self, label):
        return DirectedGraph(self.n, self.adj, label)


# Connected graphs on 2-4 nodes up to isomorphism, ordered by node count,
# edge count, then descending degree sequence.
_SMALL_GRAPHS = {
    1: ("K2", 2, [(0, 1)]),
    2: ("P3", 3, [(0, 1), (1, 2)]),
    3: ("C3", 3, [(0, 1), (1, 2), (0, 2)]),
    4: ("P4", 4, [(0, 1), (1, 2), (2, 3)]),
    5: ("K1,3", 4, [(0, 1), (0, 2), (0, 3)]),
    6: ("C4", 4, [(0, 1), (1, 2), (2, 3), (0, 3)]),
    7: ("paw", 4, [(0, 1), (1, 2), (0, 2), (2, 3)]),
    8: ("diamond", 4, [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)]),
    9: ("K4", 4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
}


def named_small_graph(index):
    """Return ``G_index`` from the fixed catalog of the nine connected graphs on 2-4 nodes.

    The catalog is ``K2, P3, C3, P4, K1,3, C4, paw, diamond, K4``; every edge
    is present in both directions.
    """
    if isinstance(index, bool) or int(index) != index or index not in _SMALL_GRAPHS:
        raise DomainError(f"small graph index must be in 1..9, got {index!r}")
    name, n, edges = _SMALL_GRAPHS[int(index)]
    return DirectedGraph.from_edges(n, edges, label=f"G{index} ({name})", symmetric=True)


def watts_strogatz(n, k, p, seed):
    """Small-world graph: a ring lattice of degree ``k`` with each edge rewired w.p. ``p``.

    Rewiring keeps one endpoint and moves the other to a uniformly chosen node
    that is neither the kept endpoint nor already adjacent to it, so the
    undirected edge count stays at ``n*k/2``.
    """
    if int(k) != k or k < 2 or k % 2:
        raise DomainError(f"k must be an even integer >= 2, got {k!r}")
    if int(n) != n or n <= k:
        raise DomainError(f"n must be an integer greater than k, got n={n!r}, k={k!r}")
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"rewiring probability must lie in [0, 1], got {p!r}")
    n, k = int(n), int(k)
    rng = np.random.default_rng(seed)
    adj = np.zeros((n, n), dtype=np.uint8)
    for j in range(1, k // 2 + 1):
        for u in range(n):
            v = (u + j) % n
            adj[u, v] = adj[v, u] = 1
    for j in range(1, k // 2 + 1):
        for u in range(n):
            v = (u + j) % n
            if rng.random() >= p:
                continue
            candidates = np.flatnonzero(adj[u] == 0)
            candidates = candidates[candidates != u]
            if candidates.size == 0:
                continue
            w = int(candidates[rng.integers(candidates.size)])
            adj[u, v] = adj[v, u] = 0
            adj[u, w] = adj[w, u] = 1
    return DirectedGraph(n, adj, f"WS(n={n}, k={k}, p={p}, seed={seed})")


def barabasi_albert(n, m, seed):
    """Preferential-attachment graph grown from an ``m``-clique.

    Each arriving node links to ``m`` distinct existing nodes drawn with
    probability proportional to their current degree.
    """
    if int(m) != m or m < 1:
        raise DomainError(f"m must be a positive integer, got {m!r}")
    if int(n) != n or n <= m:
        raise DomainError(f"n must be an integer greater than m, got n={n!r}, m={m!r}")
    n, m = int(n), int(m)
    rng = np.random.default_rng(seed)
    adj = np.zeros((n, n), dtype=np.uint8)
    adj[:m, :m] = 1
    np.fill_diagonal(adj, 0)
    degree = adj.sum(axis=1).astype(np.float64)
    for v in range(m, n):
        weights = degree[:v]
        total = weights.sum()
        if total == 0.0:
            targets = rng.choice(v, size=m, replace=False)
        else:
            targets = rng.choice(v, size=m, replace=False, p=weights / total)
        for t in sorted(int(x) for x in targets):
            adj[v, t] = adj[t, v] = 1
            degree[t] += 1
        degree[v] += m
    return DirectedGraph(n, adj, f"BA(n={n}, m={m}, seed={seed})")


def _parse_int(token, path, lineno):
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"expected an integer node index, got {token!r}", path, lineno) from None


def parse_edge_list(text, symmetric=False, path=None, label=None):
    """Parse edge-list text; see :func:`load_edge_list` for the format."""
    n = None
    arcs = []
    seen_data = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if tokens[0] == "nodes":
            if seen_data or n is not None:
                raise ParseError("'nodes' directive must precede all edges", path, lineno)
            if len(tokens) != 2:
                raise ParseError("expected 'nodes N'", path, lineno)
            n = _parse_int(tokens[1], path, lineno)
            if n < 1:
                raise ParseError(f"node count must be positive, got {n}", path, lineno)
            continue
        seen_data = True
        if len(tokens) != 2:
            raise ParseError(f"expected two node indices, got {line!r}", path, lineno)
        u = _parse_int(tokens[0], path, lineno)
        v = _parse_int(tokens[1], path, lineno)
        if u < 0 or v < 0 or (n is not None and (u >= n or v >= n)):
            raise ParseError(f"node index out of bounds in {line!r}", path, lineno)
        if u == v:
            raise ParseError(f"self-loop on node {u}", path, lineno)
        arcs.append((u, v))
    if n is None:
        if not arcs:
            raise ParseError("no edges and no 'nodes' directive", path)
        n = 1 + max(max(a) for a in arcs)
    if label is None:
        label = Path(path).stem if path is not None else ""
    return DirectedGraph.from_edges(n, arcs, label=label, symmetric=symmetric)


def load_edge_list(path, symmetric=False):
    """Read a whitespace-separated edge list of 0-indexed node pairs.

    Lines starting with ``#`` are ignored.  An optional ``nodes N`` directive
    before the first edge fixes the node count; otherwise it is one more than
    the largest index seen.  With ``symmetric=True`` every arc also gets its
    reverse.
    """
    path = Path(path)
    return parse_edge_list(path.read_text(), symmetric=symmetric, path=str(path))


def write_edge_list(graph, path, comments=()):
    lines = [f"# {c}" for c in comments]
    lines.append(f"nodes {graph.n}")
    lines.extend(f"{u} {v}" for u, v in graph.arcs())
    Path(path).write_text("\n".join(lines) + "\n")


def graph_to_json(graph):
    return {"n": graph.n, "edges": [[u, v] for u, v in graph.arcs()], "label": graph.label}


def graph_from_json(doc):
    try:
        return DirectedGraph.from_edges(int(doc["n"]), [tuple(e) for e in doc["edges"]],
                                        label=doc.get("label", ""))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"malformed graph document: {exc}") from exc


def save_graph(graph, path, comments=()):
    """Write ``graph`` as JSON when ``path`` ends in ``.json``, else as an edge list."""
    path = Path(path)
    if path.suffix == ".json":
        path.write_text(json.dumps(graph_to_json(graph), indent=1) + "\n")
    else:
        write_edge_list(graph, path, comments)


def load_graph(path, symmetric=False):
    path = Path(path)
    if path.suffix == ".json":
        try:
            doc = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, str(path), exc.lineno) from exc
        graph = graph_from_json(doc)
        if symmetric:
            graph = DirectedGraph(graph.n, graph.adj | graph.adj.T, graph.label)
        return graph
    return load_edge_list(path, symmetric=symmetric)


REALISTIC_STANDIN = "realistic49.edges"


def realistic_standin():
    """The bundled 49-node stand-in for the unidentified realistic network.

    It is a synthetic clustered scale-free graph, not real data; pass your own
    edge list to :func:`load_edge_list` for a genuine network.
    """
    text = resources.files("rumorcontain.data").joinpath(REALISTIC_STANDIN).read_text()
    return parse_edge_list(text, symmetric=True, label="RE (49-node stand-in)")
