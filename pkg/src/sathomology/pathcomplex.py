"""From configuration graphs to chain complexes.

Two complex models are exposed because the face maps of walk-generated
complexes are delicate:

* ``step``: degree-n generators are walks of n single-step edges.  The
  faces obtained by removing an *interior* configuration are generally
  not single-step walks; such faces contribute zero to the boundary.
* ``reachability`` (default): degree-n generators are strictly
  time-increasing configuration sequences whose consecutive pairs are
  connected by at least one step (transitive closure).  Every face of a
  generator is then itself a generator, so the alternating-sign face map
  is total.

Both models produce valid complexes (d.d = 0); they simply disagree on
which sequences count as generators, and downstream conformance reports
state which model reproduces which claimed value.

This module also builds the trace-decorated complex used by the
verification-order constructions: degree-1 generators are edges labelled
with the clause order verified along them, and degree-2 generators are
triangles whose long edge's trace is exactly the concatenation of the two
short edges' traces.
"""

from __future__ import annotations

from dataclasses import dataclass

from .chaincomplex import ChainComplex
from .cnf import CapExceededError, evaluate
from .intlinalg import IntMatrix
from . import chaincomplex

MODEL_STEP = "step"
MODEL_REACHABILITY = "reachability"
DEFAULT_GENERATOR_CAP = 50_000


class NotSatisfyingError(ValueError):
    """Raised when a trace complex is requested for a falsifying assignment."""


@dataclass(frozen=True)
class ComputationPath:
    """Strictly ordered sequence of configuration ids; degree = length - 1."""

    config_ids: tuple

    @property
    def length(self):
        return len(self.config_ids) - 1

    def face(self, i):
        ids = self.config_ids
        return ComputationPath(ids[:i] + ids[i + 1:])

    def label(self):
        return "-".join(str(c) for c in self.config_ids)


@dataclass(frozen=True)
class TraceDecoratedEdge:
    """Degree-1 generator: an edge decorated with its clause-verification order."""

    src: int
    dst: int
    trace: tuple

    def __post_init__(self):
        if self.src == self.dst:
            raise ValueError("trace edge endpoints must differ")
        if len(set(self.trace)) != len(self.trace):
            raise ValueError("trace entries must be distinct")

    def label(self):
        return f"{self.src}>{self.dst}:" + ",".join(str(c) for c in self.trace)


@dataclass(frozen=True)
class PathBasis:
    degree: int
    generators: tuple

    def index(self):
        return {g: i for i, g in enumerate(self.generators)}


def _adjacency(graph, model):
    step = {}
    for src, dst, _ in graph.edges:
        step.setdefault(src, set()).add(dst)
    if model == MODEL_STEP:
        return step
    if model != MODEL_REACHABILITY:
        raise ValueError(f"unknown model {model!r}")
    # transitive closure; edges strictly increase time, so process nodes
    # in decreasing time order and union successor reach sets
    order = sorted(range(len(graph.nodes)), key=lambda i: -graph.times[i])
    reach = {}
    for node in order:
        acc = set(step.get(node, ()))
        for nxt in step.get(node, ()):
            acc |= reach.get(nxt, set())
        reach[node] = acc
    return reach


def enumerate_paths(graph, max_degree, model=MODEL_REACHABILITY,
                    generator_cap=DEFAULT_GENERATOR_CAP):
    """Per-degree path bases for the chosen model, deduplicated and sorted.

    Refuses (never truncates) when any degree would exceed ``generator_cap``.
    """
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    adjacency = _adjacency(graph, model)
    bases = []
    current = [ComputationPath((node,)) for node in range(len(graph.nodes))]
    current.sort(key=lambda p: p.config_ids)
    for degree in range(max_degree + 1):
        if len(current) > generator_cap:
            raise CapExceededError(
                f"{len(current)} degree-{degree} generators exceed cap {generator_cap}")
        bases.append(PathBasis(degree, tuple(current)))
        extended = []
        for path in current:
            last = path.config_ids[-1]
            for nxt in adjacency.get(last, ()):
                extended.append(ComputationPath(path.config_ids + (nxt,)))
        extended.sort(key=lambda p: p.config_ids)
        current = extended
    return bases


def boundary_matrix(basis_n, basis_prev):
    """Alternating-sign face matrix; faces absent from the lower basis are zero."""
    if basis_n.degree != basis_prev.degree + 1:
        raise ValueError("bases must be in consecutive degrees")
    prev_index = basis_prev.index()
    entries = {}
    for col, path in enumerate(basis_n.generators):
        for i in range(len(path.config_ids)):
            row = prev_index.get(path.face(i))
            if row is not None:
                key = (row, col)
                entries[key] = entries.get(key, 0) + (-1) ** i
    return IntMatrix(len(basis_prev.generators), len(basis_n.generators), entries)


def build_complex(graph, max_degree, model=MODEL_REACHABILITY,
                  generator_cap=DEFAULT_GENERATOR_CAP):
    """Chain complex of the configuration graph under the chosen path model."""
    bases = enumerate_paths(graph, max_degree, model, generator_cap)
    labels = [[p.label() for p in basis.generators] for basis in bases]
    boundaries = {
        n: boundary_matrix(bases[n], bases[n - 1])
        for n in range(1, max_degree + 1)
    }
    return ChainComplex(labels, boundaries)


def load_fixture_complex(path):
    """Load a serialized complex from a single JSON fixture file."""
    with open(path, "r", encoding="utf-8") as handle:
        return chaincomplex.deserialize_complex(handle.read())


@dataclass(frozen=True)
class TraceTriangle:
    """2-simplex over trace edges: long trace = concatenation of the short traces."""

    nodes: tuple          # (a, b, c) node indices
    edge_ab: int
    edge_bc: int
    edge_ac: int


@dataclass
class TraceComplex:
    """Trace-decorated complex plus the generator objects behind its bases."""

    complex: ChainComplex
    node_labels: list
    edges: list       # degree-1 generators, TraceDecoratedEdge
    triangles: list   # degree-2 generators, TraceTriangle


def _trace_node_label(checked, num_clauses):
    if not checked:
        return "init"
    if len(checked) == num_clauses:
        return "term"
    return "mid{" + ",".join(str(c) for c in sorted(checked)) + "}"


def build_trace_complex(formula, assignment, orders, include_splits=False):
    """Trace-decorated complex for one satisfying assignment.

    Degree 0 is {initial, terminal} plus, with ``include_splits``, the
    intermediate checkpoints reached after each prefix of each order.
    Degree 1 holds one trace-decorated edge per order (and, with splits,
    one per contiguous segment of each order).  Degree 2 holds every
    composable triangle whose traces concatenate exactly.

    Node identity is the *set* of clauses checked so far, so orders with
    a common prefix-set share checkpoints, and all orders share the
    initial and terminal nodes.
    """
    orders = [tuple(order) for order in orders]
    if not orders:
        raise ValueError("at least one clause order is required")
    m = formula.num_clauses
    for order in orders:
        if sorted(order) != list(range(m)):
            raise ValueError(f"order {order} is not a permutation of 0..{m - 1}")
    if not evaluate(formula, assignment):
        raise NotSatisfyingError("assignment does not satisfy the formula")

    node_sets = {frozenset(), frozenset(range(m))}
    edge_set = set()
    for order in orders:
        splits = range(m + 1) if include_splits else (0, m)
        splits = list(splits)
        for idx_i in splits:
            node_sets.add(frozenset(order[:idx_i]))
        for a_pos in range(len(splits)):
            for b_pos in range(a_pos + 1, len(splits)):
                i, j = splits[a_pos], splits[b_pos]
                if i == j:
                    continue
                edge_set.add((frozenset(order[:i]), frozenset(order[:j]), order[i:j]))

    nodes = sorted(node_sets, key=lambda s: (len(s), tuple(sorted(s))))
    node_index = {s: k for k, s in enumerate(nodes)}
    node_labels = [_trace_node_label(s, m) for s in nodes]

    edges = sorted(
        (TraceDecoratedEdge(node_index[src], node_index[dst], trace)
         for src, dst, trace in edge_set),
        key=lambda e: (e.src, e.dst, e.trace))
    edge_index = {e: k for k, e in enumerate(edges)}

    # triangles: exact trace concatenation, no ambiguity by construction
    by_src = {}
    for e in edges:
        by_src.setdefault(e.src, []).append(e)
    triangles = []
    for e_ab in edges:
        for e_bc in by_src.get(e_ab.dst, ()):
            long_edge = TraceDecoratedEdge(e_ab.src, e_bc.dst, e_ab.trace + e_bc.trace)
            k = edge_index.get(long_edge)
            if k is not None:
                triangles.append(TraceTriangle(
                    (e_ab.src, e_ab.dst, e_bc.dst),
                    edge_index[e_ab], edge_index[e_bc], k))
    triangles.sort(key=lambda t: (t.nodes, t.edge_ab, t.edge_bc))

    d1 = IntMatrix(len(nodes), len(edges), _edge_boundary_entries(edges))
    d2_entries = {}
    for col, tri in enumerate(triangles):
        for row, sign in ((tri.edge_bc, 1), (tri.edge_ac, -1), (tri.edge_ab, 1)):
            d2_entries[(row, col)] = d2_entries.get((row, col), 0) + sign
    d2 = IntMatrix(len(edges), len(triangles), d2_entries)

    labels = [node_labels, [e.label() for e in edges],
              [f"tri({t.nodes[0]},{t.nodes[1]},{t.nodes[2]}):{t.edge_ab},{t.edge_bc}"
               for t in triangles]]
    complex_ = ChainComplex(labels, {1: d1, 2: d2})
    return TraceComplex(complex_, node_labels, list(edges), triangles)


def _edge_boundary_entries(edges):
    entries = {}
    for col, e in enumerate(edges):
        entries[(e.dst, col)] = entries.get((e.dst, col), 0) + 1
        entries[(e.src, col)] = entries.get((e.src, col), 0) - 1
    return {k: v for k, v in entries.items() if v}
