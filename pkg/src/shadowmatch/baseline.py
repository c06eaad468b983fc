"""Irrevocable one-pass matcher used as a comparison point.

The rule is the classic one: keep a matching, and when an input edge
weighs more than (1 + gamma) times the total weight of the matching
edges it conflicts with, swap it in.  Evicted edges are gone for good;
there are no shadow slots.

The two stock thresholds are reconstructions of the usual analysis:
gamma = 1 gives a worst-case ratio of 6, and gamma = 1/sqrt(2) tightens
it to 3 + 2*sqrt(2) (about 5.828).
"""

from __future__ import annotations

import math
from typing import Callable, Iterable

from .graph import Edge, EdgeStream
from .shadow import InsertionDecision, RunMetrics, RunResult

GAMMA_RATIO_SIX = 1.0
GAMMA_RATIO_5_828 = 0.7071067811865476  # 1/sqrt(2)


class BaselineMatcher:
    """Matching-only state for the (1 + gamma) replacement rule."""

    def __init__(self, gamma: float):
        if not isinstance(gamma, (int, float)) or isinstance(gamma, bool):
            raise ValueError(f"gamma must be a real number, got {gamma!r}")
        gamma = float(gamma)
        if not math.isfinite(gamma) or gamma < 0.0:
            raise ValueError(f"gamma must be finite and >= 0, got {gamma!r}")
        self.gamma = gamma
        self.matching: dict[int, Edge] = {}
        self.matched_edge_count = 0
        self.insertions = 0
        self.last_touched_edges = 0

    def matching_edges(self) -> tuple[Edge, ...]:
        return tuple(sorted(set(self.matching.values())))

    def matching_weight(self) -> float:
        return math.fsum(e.w for e in set(self.matching.values()))

    def process_edge(self, e: Edge) -> InsertionDecision:
        """Insert `e` iff it is (1 + gamma)-heavier than what it displaces.

        With gamma = 0 this degenerates to "strictly heavier wins".
        """
        if not e.w > 0 or not math.isfinite(e.w):
            raise ValueError(f"input edge weight must be positive and finite: {e}")
        cov = self.matching.get(e.u)
        if cov is not None and cov.key == e.key:
            raise ValueError(f"edge {e.u} {e.v} is already in the matching")

        conflicts = {}
        m = self.matching.get(e.u)
        if m is not None:
            conflicts[m.key] = m
        m = self.matching.get(e.v)
        if m is not None:
            conflicts[m.key] = m
        removed = tuple(sorted(conflicts.values()))
        self.last_touched_edges = 1 + len(removed)
        margin = e.w - (1.0 + self.gamma) * sum(d.w for d in removed)
        decision = InsertionDecision((e,), removed, margin, margin > 0.0)
        if decision.inserted:
            for d in removed:
                del self.matching[d.u]
                del self.matching[d.v]
            self.matching[e.u] = e
            self.matching[e.v] = e
            self.matched_edge_count += 1 - len(removed)
            self.insertions += 1
        return decision


def run_baseline(stream: EdgeStream | Iterable[Edge], gamma: float, *,
                 on_decision: Callable[[int, InsertionDecision, BaselineMatcher], None] | None = None,
                 ) -> RunResult:
    """Feed a whole stream through a fresh baseline matcher."""
    matcher = BaselineMatcher(gamma)
    metrics = RunMetrics()
    for i, e in enumerate(stream):
        decision = matcher.process_edge(e)
        metrics.edges_processed += 1
        metrics.max_candidate_sets = max(metrics.max_candidate_sets, 1)
        metrics.max_touched_edges = max(metrics.max_touched_edges,
                                        matcher.last_touched_edges)
        if matcher.matched_edge_count > metrics.max_stored_edges:
            metrics.max_stored_edges = matcher.matched_edge_count
        if on_decision is not None:
            on_decision(i, decision, matcher)
    metrics.insertions = matcher.insertions
    return RunResult(matcher.matching_edges(), matcher.matching_weight(),
                     None, metrics)
