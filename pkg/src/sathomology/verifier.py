"""The small-step clause-checking SAT verifier and its configuration graph.

The verifier takes a total assignment and checks clauses one at a time in
a caller-supplied order, ending in an accepting configuration (all clauses
satisfied) or rejecting at the first violated clause.

Configuration identity deliberately excludes the clause order taken so
far: two configurations are equal when they agree on the assignment, the
verification progress, and the phase.  This makes traces that check the
same assignment under different clause orders share their initial and
terminal configurations, and keeps the merged graph acyclic in time.
(Keying progress by the *identity* of the next clause instead would merge
configurations reached at different times and can create directed
2-cycles between traces, breaking the time ordering.)
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .cnf import (
    CapExceededError,
    clause_satisfied,
    evaluate,
    satisfying_assignments,
)

PHASE_INITIAL = "initial"
PHASE_CHECKING = "checking"
PHASE_ACCEPTING = "accepting"
PHASE_REJECTING = "rejecting"

STEP_NONE = "none"
STEP_CLAUSE_CHECK = "clause-check"
STEP_DECISION = "decision"
STEP_UNIT_PROPAGATION = "unit-propagation"
STEP_BACKTRACK = "backtrack"

DEFAULT_GRAPH_VAR_CAP = 12


@dataclass(frozen=True)
class VerifierConfig:
    """One verifier machine state.

    ``next_clause`` is the progress position: how many clauses have been
    verified, i.e. the 0-based position of the next scheduled check under
    whatever order the run follows; None once checking is exhausted or
    the run has terminated.  ``step_kind`` records how the configuration
    was entered and does not participate in equality.
    """

    assignment: tuple
    next_clause: object  # Optional[int]
    phase: str
    step_kind: str = field(default=STEP_NONE, compare=False)

    def is_terminal(self):
        return self.phase in (PHASE_ACCEPTING, PHASE_REJECTING)


def verification_trace(formula, assignment, order=None):
    """Deterministic clause-check trace of ``assignment`` under ``order``.

    The trace is: initial configuration, one configuration per clause
    checked, then an accepting terminal (if the assignment satisfies the
    formula) or a rejecting terminal at the first violated clause.
    """
    if len(assignment) != formula.num_vars:
        raise ValueError(f"assignment length {len(assignment)} != {formula.num_vars} variables")
    m = formula.num_clauses
    if order is None:
        order = tuple(range(m))
    else:
        order = tuple(order)
        if sorted(order) != list(range(m)):
            raise ValueError(f"order {order} is not a permutation of 0..{m - 1}")
    assignment = tuple(assignment)

    configs = [VerifierConfig(assignment, 0 if m else None, PHASE_INITIAL, STEP_NONE)]
    for position, clause_index in enumerate(order):
        if not clause_satisfied(formula.clauses[clause_index], assignment):
            configs.append(VerifierConfig(assignment, None, PHASE_REJECTING, STEP_CLAUSE_CHECK))
            return configs
        remaining = position + 1 if position + 1 < m else None
        configs.append(VerifierConfig(assignment, remaining, PHASE_CHECKING, STEP_CLAUSE_CHECK))
    configs.append(VerifierConfig(
        assignment, None, PHASE_ACCEPTING, STEP_CLAUSE_CHECK if m else STEP_NONE))
    return configs


class ConfigGraph:
    """Directed graph of verifier configurations, acyclic in time.

    Nodes carry an explicit time coordinate (position within a trace);
    deduplication by structural config equality is consistent with time
    because progress is part of config identity.
    """

    def __init__(self, time_bound):
        self.nodes = []
        self.times = []
        self.edges = []
        self.time_bound = time_bound
        self._index = {}
        self._edge_set = set()

    def add_node(self, config, time):
        existing = self._index.get(config)
        if existing is not None:
            if config.is_terminal():
                # terminal configs have no successors, so taking the latest
                # arrival time keeps every edge strictly time-increasing
                self.times[existing] = max(self.times[existing], time)
            elif self.times[existing] != time:
                raise ValueError("config deduplication would merge distinct times")
            return existing
        self.nodes.append(config)
        self.times.append(time)
        self._index[config] = len(self.nodes) - 1
        return len(self.nodes) - 1

    def add_edge(self, src, dst, kind):
        key = (src, dst, kind)
        if key not in self._edge_set:
            self._edge_set.add(key)
            self.edges.append(key)

    def add_trace(self, configs, label=""):
        if len(configs) - 1 > self.time_bound:
            raise CapExceededError(
                f"trace {label or 'unnamed'} has {len(configs) - 1} steps, "
                f"exceeding time bound {self.time_bound}")
        previous = None
        for time, config in enumerate(configs):
            node = self.add_node(config, time)
            if previous is not None:
                self.add_edge(previous, node, config.step_kind)
            previous = node

    def successors(self, node):
        return sorted({dst for src, dst, _ in self.edges if src == node})

    def component_count(self):
        parent = list(range(len(self.nodes)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for src, dst, _ in self.edges:
            a, b = find(src), find(dst)
            if a != b:
                parent[a] = b
        return len({find(i) for i in range(len(self.nodes))})

    def to_json(self):
        payload = {
            "nodes": [
                {"id": i, "phase": cfg.phase, "next_clause": cfg.next_clause}
                for i, cfg in enumerate(self.nodes)
            ],
            "edges": [
                {"from": src, "to": dst, "kind": kind}
                for src, dst, kind in self.edges
            ],
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def build_config_graph(formula, assignment=None, orders=None, time_bound=None,
                       var_cap=DEFAULT_GRAPH_VAR_CAP):
    """Union of verification traces as a deduplicated configuration graph.

    With ``assignment`` given, traces that single assignment under every
    order in ``orders``; otherwise traces every satisfying assignment
    (brute force, capped at ``var_cap`` variables).  ``orders`` defaults
    to the canonical clause order alone.
    """
    if orders is None:
        orders = [tuple(range(formula.num_clauses))]
    if time_bound is None:
        time_bound = formula.num_clauses + 1
    if assignment is not None:
        assignments = [tuple(assignment)]
    else:
        assignments = satisfying_assignments(formula, var_cap=var_cap)
    graph = ConfigGraph(time_bound)
    for alpha in assignments:
        for order in orders:
            trace = verification_trace(formula, alpha, order)
            graph.add_trace(trace, label=f"assignment={alpha} order={tuple(order)}")
    return graph
