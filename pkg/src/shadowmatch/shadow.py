"""One-pass weighted matching that keeps evicted edges as "shadows".

The matcher holds a matching M and, per matched vertex, one optional
shadow slot.  When edges are thrown out of M to make room for better
ones they are not always gone for good: each removed edge is parked in
the slots of the vertices it shares with the newly inserted edges.  A
later input edge can then be combined with up to two parked shadow
edges into a set of two or three disjoint insertions, which is what
lets the matcher undo part of an earlier eviction.

Processing one input edge looks at a bounded local neighborhood only:

* the input edge itself,
* the matching edges at its two endpoints,
* the shadow slot at each matched partner vertex,
* and the matching edges covering the far ends of those shadows.

That is at most seven edges, so each step costs constant time and the
whole pass stores at most 3 * floor(n/2) edges.

An insertion candidate A (a set of one to three pairwise disjoint
non-matching edges from the neighborhood) is scored by

    r(A) = w(A) - k * w(M(A))

where M(A) is the set of matching edges sharing a vertex with A and
k > 1 is the replacement threshold.  The best-scoring A is inserted
iff r(A) > 0; M(A) is removed and parked in shadow slots.

Ties on r(A) are broken deterministically: larger w(A) first, then
fewer edges, then the lexicographically smallest sorted edge list.
All weight comparisons are exact float comparisons; no epsilon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

from .graph import Edge, EdgeStream


@dataclass(frozen=True, slots=True)
class SideView:
    """What the matcher can see from one endpoint of the input edge.

    `anchor` is the input edge's endpoint.  If the matching covers it,
    `matched` is that matching edge and `partner` the far endpoint.
    If the slot at `partner` is occupied, `shadow` is the parked edge,
    `shadow_far` its endpoint away from `partner`, and `far_cover` the
    matching edge covering `shadow_far` (if any).
    """

    anchor: int
    matched: Edge | None = None
    partner: int | None = None
    shadow: Edge | None = None
    shadow_far: int | None = None
    far_cover: Edge | None = None


@dataclass(frozen=True, slots=True)
class Neighborhood:
    """The bounded local view used to decide one step.

    Role names follow the two sides of the input edge: side 1 hangs off
    the smaller endpoint, side 2 off the larger one.  The same edge may
    appear under several roles (the two shadows can coincide on a
    4-cycle, and a far cover can equal the other side's matching edge);
    `distinct_edges` collapses those.
    """

    input_edge: Edge
    side1: SideView
    side2: SideView

    def roles(self) -> dict[str, Edge | None]:
        """Map role label -> edge (or None) for tracing and tests."""
        return {
            "y1y2": self.input_edge,
            "g1y1": self.side1.matched,
            "a1g1": self.side1.shadow,
            "a1c1": self.side1.far_cover,
            "g2y2": self.side2.matched,
            "a2g2": self.side2.shadow,
            "a2c2": self.side2.far_cover,
        }

    def distinct_edges(self) -> tuple[Edge, ...]:
        """All distinct edges in view, canonically sorted."""
        out = {}
        for e in self.roles().values():
            if e is not None:
                out[e.key] = e
        return tuple(sorted(out.values()))

    def candidates(self) -> tuple[Edge, ...]:
        """The distinct non-matching edges available for insertion.

        These are the input edge and the two shadows; the four other
        roles are matching edges and can only ever be removed.
        """
        out = {self.input_edge.key: self.input_edge}
        for side in (self.side1, self.side2):
            if side.shadow is not None:
                out[side.shadow.key] = side.shadow
        return tuple(sorted(out.values()))


@dataclass(frozen=True, slots=True)
class InsertionDecision:
    """Outcome of one step: the best candidate set and what it did.

    `chosen` is the argmax candidate set A (present even when it was
    rejected), `removed` the matching edges adjacent to it, `gain` the
    score r(A), and `inserted` says whether the step mutated the state
    (exactly when gain > 0).
    """

    chosen: tuple[Edge, ...]
    removed: tuple[Edge, ...]
    gain: float
    inserted: bool


@dataclass(frozen=True, slots=True)
class TraceEvent:
    """One step of a traced run: the view, all scored sets, the decision."""

    index: int
    neighborhood: Neighborhood
    candidates: tuple[tuple[tuple[Edge, ...], float], ...]
    decision: InsertionDecision


def _pairwise_disjoint(edges: tuple[Edge, ...]) -> bool:
    if len(edges) == 1:
        return True
    seen: set[int] = set()
    for e in edges:
        if e.u in seen or e.v in seen:
            return False
        seen.add(e.u)
        seen.add(e.v)
    return True


def enumerate_augmenting_sets(nb: Neighborhood) -> list[tuple[Edge, ...]]:
    """All non-empty pairwise-disjoint subsets of the candidate edges.

    Enumeration order is the subset bitmask over the canonically
    sorted candidates, so replays are bit-identical.  At most three
    candidates exist, hence at most seven subsets.
    """
    cands = nb.candidates()
    out = []
    for mask in range(1, 1 << len(cands)):
        subset = tuple(c for i, c in enumerate(cands) if mask >> i & 1)
        if _pairwise_disjoint(subset):
            out.append(subset)
    return out


class ShadowMatcher:
    """Streaming matcher state: the matching plus per-vertex shadow slots.

    Parameters
    ----------
    k : float
        Replacement threshold, must be finite and > 1.  A candidate
        set is inserted only when its weight exceeds k times the
        weight it displaces.

    Attributes
    ----------
    matching : dict[int, Edge]
        Vertex -> covering matching edge; every edge appears under
        both endpoints.
    shadow_slots : dict[int, Edge]
        Vertex -> parked edge.  A slot exists only at a matched
        vertex, and the parked edge contains that vertex.  No edge is
        ever in the matching and in a slot at the same time.
    """

    def __init__(self, k: float):
        if not isinstance(k, (int, float)) or isinstance(k, bool):
            raise ValueError(f"k must be a real number, got {k!r}")
        k = float(k)
        if not math.isfinite(k) or k <= 1.0:
            raise ValueError(f"k must be finite and > 1, got {k!r}")
        self.k = k
        self.matching: dict[int, Edge] = {}
        self.shadow_slots: dict[int, Edge] = {}
        self.matched_edge_count = 0
        self.insertions = 0
        # Per-step work counters, refreshed by process_edge.
        self.last_candidate_sets = 0
        self.last_touched_edges = 0

    # -- inspection ---------------------------------------------------

    def matching_edges(self) -> tuple[Edge, ...]:
        """The current matching as a sorted edge tuple."""
        return tuple(sorted(set(self.matching.values())))

    def matching_weight(self) -> float:
        return math.fsum(e.w for e in set(self.matching.values()))

    def stored_edge_count(self) -> int:
        """Distinct edges held right now (matching plus parked shadows)."""
        return self.matched_edge_count + len(set(self.shadow_slots.values()))

    # -- the step -----------------------------------------------------

    def neighborhood(self, e: Edge) -> Neighborhood:
        """Assemble the bounded local view for input edge `e`."""
        return Neighborhood(e, self._side(e.u), self._side(e.v))

    def _side(self, anchor: int) -> SideView:
        matched = self.matching.get(anchor)
        if matched is None:
            return SideView(anchor)
        partner = matched.other(anchor)
        shadow = self.shadow_slots.get(partner)
        if shadow is None:
            return SideView(anchor, matched, partner)
        far = shadow.other(partner)
        return SideView(anchor, matched, partner, shadow, far,
                        self.matching.get(far))

    def gain_of(self, candidate_set: Iterable[Edge]) -> tuple[float, tuple[Edge, ...]]:
        """Score a candidate set against the current state.

        Returns (r, removed) where removed is the sorted tuple of
        matching edges sharing a vertex with the set and
        r = w(set) - k * w(removed).
        """
        chosen = tuple(candidate_set)
        removed_by_key = {}
        for f in chosen:
            m = self.matching.get(f.u)
            if m is not None:
                removed_by_key[m.key] = m
            m = self.matching.get(f.v)
            if m is not None:
                removed_by_key[m.key] = m
        removed = tuple(sorted(removed_by_key.values()))
        r = (sum(f.w for f in chosen)
             - self.k * sum(d.w for d in removed))
        return r, removed

    def process_edge(self, e: Edge) -> InsertionDecision:
        """Process one input edge and return what was decided.

        Preconditions: `e` has positive weight and its endpoint pair is
        not already in the matching (streams never repeat an edge).
        Violations raise ValueError.
        """
        decision, _, _ = self._step(e)
        return decision

    def process_edge_traced(self, e: Edge, index: int) -> TraceEvent:
        """Like process_edge, but capture the full step for tracing."""
        decision, nb, scored = self._step(e)
        return TraceEvent(index, nb, tuple(scored), decision)

    def _step(self, e: Edge):
        if not e.w > 0 or not math.isfinite(e.w):
            raise ValueError(f"input edge weight must be positive and finite: {e}")
        cov = self.matching.get(e.u)
        if cov is not None and cov.key == e.key:
            raise ValueError(f"edge {e.u} {e.v} is already in the matching")

        nb = self.neighborhood(e)
        self.last_touched_edges = len(nb.distinct_edges())

        best: tuple[float, float, tuple[Edge, ...], tuple[Edge, ...]] | None = None
        scored: list[tuple[tuple[Edge, ...], float]] = []
        examined = 0
        cands = nb.candidates()
        for mask in range(1, 1 << len(cands)):
            subset = tuple(c for i, c in enumerate(cands) if mask >> i & 1)
            if not _pairwise_disjoint(subset):
                continue
            examined += 1
            r, removed = self.gain_of(subset)
            scored.append((subset, r))
            w_subset = sum(f.w for f in subset)
            if best is None or _better(r, w_subset, subset,
                                       best[0], best[1], best[2]):
                best = (r, w_subset, subset, removed)
        self.last_candidate_sets = examined

        assert best is not None  # the input edge itself is always a candidate
        r, w_subset, chosen, removed = best
        decision = InsertionDecision(chosen, removed, r, r > 0.0)
        if decision.inserted:
            self._apply(chosen, removed)
        return decision, nb, scored

    def _apply(self, chosen: tuple[Edge, ...], removed: tuple[Edge, ...]) -> None:
        # Mutation order matters for the slot bookkeeping: first forget
        # everything hanging off the removed edges, then insert, then
        # park the removed edges next to their replacements.
        matching = self.matching
        slots = self.shadow_slots
        for d in removed:
            slots.pop(d.u, None)
            slots.pop(d.v, None)
            del matching[d.u]
            del matching[d.v]
        for f in chosen:
            matching[f.u] = f
            matching[f.v] = f
        for d in removed:
            # matching[v] exists here iff an inserted edge covers v,
            # because every old edge at v would have been removed.
            if d.u in matching:
                slots[d.u] = d
            if d.v in matching:
                slots[d.v] = d
        self.matched_edge_count += len(chosen) - len(removed)
        self.insertions += 1


def _better(r: float, w: float, subset: tuple[Edge, ...],
            best_r: float, best_w: float, best_subset: tuple[Edge, ...]) -> bool:
    """Strict preference order on scored candidate sets."""
    if r != best_r:
        return r > best_r
    if w != best_w:
        return w > best_w
    if len(subset) != len(best_subset):
        return len(subset) < len(best_subset)
    return subset < best_subset


@dataclass(slots=True)
class RunMetrics:
    """Counters accumulated over one streamed run."""

    edges_processed: int = 0
    insertions: int = 0
    max_stored_edges: int = 0
    max_candidate_sets: int = 0
    max_touched_edges: int = 0


@dataclass(slots=True)
class RunResult:
    """Final matching of a run, with optional trace and work counters."""

    matching: tuple[Edge, ...]
    weight: float
    events: tuple[TraceEvent, ...] | None
    metrics: RunMetrics


DecisionHook = Callable[[int, InsertionDecision, "ShadowMatcher"], None]


def run_stream(stream: EdgeStream | Iterable[Edge], k: float, *,
               trace: bool = False,
               on_decision: DecisionHook | None = None) -> RunResult:
    """Feed a whole stream through a fresh matcher.

    Parameters
    ----------
    stream
        EdgeStream or any iterable of canonical edges (consumed once).
    k
        Replacement threshold, > 1.
    trace
        Record a TraceEvent per input edge.  Off by default; traces
        cost memory proportional to the stream.
    on_decision
        Optional hook called after every step with (index, decision,
        matcher); the matcher is already mutated.  Used for invariant
        checking and verification without paying for a full trace.
    """
    matcher = ShadowMatcher(k)
    metrics = RunMetrics()
    events: list[TraceEvent] | None = [] if trace else None
    for i, e in enumerate(stream):
        if trace:
            event = matcher.process_edge_traced(e, i)
            events.append(event)
            decision = event.decision
        else:
            decision = matcher.process_edge(e)
        metrics.edges_processed += 1
        metrics.max_candidate_sets = max(metrics.max_candidate_sets,
                                         matcher.last_candidate_sets)
        metrics.max_touched_edges = max(metrics.max_touched_edges,
                                        matcher.last_touched_edges)
        stored = matcher.stored_edge_count()
        if stored > metrics.max_stored_edges:
            metrics.max_stored_edges = stored
        if on_decision is not None:
            on_decision(i, decision, matcher)
    metrics.insertions = matcher.insertions
    return RunResult(matcher.matching_edges(), matcher.matching_weight(),
                     tuple(events) if events is not None else None, metrics)


def trace_to_dict(event: TraceEvent) -> dict:
    """Render one TraceEvent as a JSON-ready dict.

    Edges serialize as [u, v, w] triples; role names key the local
    view.  Extra findings (for example verifier verdicts) can be added
    to the returned dict before dumping.
    """
    def enc(e: Edge | None):
        return None if e is None else [e.u, e.v, e.w]

    return {
        "index": event.index,
        "input": enc(event.neighborhood.input_edge),
        "S": {role: enc(e) for role, e in event.neighborhood.roles().items()},
        "candidates": [
            {"edges": [enc(e) for e in subset], "r": r}
            for subset, r in event.candidates
        ],
        "decision": {
            "A": [enc(e) for e in event.decision.chosen],
            "removed": [enc(e) for e in event.decision.removed],
            "r": event.decision.gain,
            "inserted": event.decision.inserted,
        },
    }
