"""Shared test utilities: independent reference implementations.

Everything here is deliberately written the dumb way (exhaustive
enumeration, no pruning, no shared code with the package internals)
so it can serve as an oracle for the clever versions.
"""

from __future__ import annotations

import math
import random
from itertools import combinations

from shadowmatch.graph import Edge, edge


def naive_max_matching_weight(edges: list[Edge]) -> float:
    """Maximum weight matching by trying every subset of edges."""
    m = len(edges)
    assert m <= 16, "naive checker is exponential, keep it small"
    best = 0.0
    for size in range(1, m + 1):
        for subset in combinations(edges, size):
            seen = set()
            ok = True
            for e in subset:
                if e.u in seen or e.v in seen:
                    ok = False
                    break
                seen.add(e.u)
                seen.add(e.v)
            if ok:
                w = math.fsum(e.w for e in subset)
                if w > best:
                    best = w
    return best


def brute_force_disjoint(edges: tuple[Edge, ...]) -> bool:
    """Quadratic pairwise-disjointness check."""
    for a, b in combinations(edges, 2):
        if a.u in (b.u, b.v) or a.v in (b.u, b.v):
            return False
    return True


def random_edge_list(rng: random.Random, max_n: int = 10,
                     integer_weights: bool = False) -> list[Edge]:
    """A duplicate-free random edge list in random stream order."""
    n = rng.randint(2, max_n)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)
             if rng.random() < 0.5]
    rng.shuffle(pairs)
    out = []
    for u, v in pairs:
        if integer_weights:
            w = float(rng.randint(1, 10))
        else:
            w = rng.uniform(0.05, 20.0)
        out.append(edge(u, v, w))
    return out


def check_matcher_invariants(matcher, n: int) -> None:
    """Assert the structural invariants of a ShadowMatcher state."""
    matching = matcher.matching
    slots = matcher.shadow_slots
    # every matching edge is keyed under exactly its two endpoints
    for v, e in matching.items():
        assert e.covers(v)
        assert matching[e.u] is e and matching[e.v] is e
    edges = set(matching.values())
    # it is a matching: 2 keys per edge
    assert len(matching) == 2 * len(edges)
    assert matcher.matched_edge_count == len(edges)
    # slot hygiene: host vertex matched, slot edge contains the vertex,
    # and no edge is both matched and parked
    for v, s in slots.items():
        assert v in matching, f"slot at unmatched vertex {v}"
        assert s.covers(v)
        assert s.key != matching[v].key
    slot_edges = {s.key for s in slots.values()}
    assert not (slot_edges & {e.key for e in edges}), \
        "edge is in the matching and in a slot at once"
    # memory bound
    assert matcher.stored_edge_count() <= 3 * (n // 2)
