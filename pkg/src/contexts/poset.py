"""
The refinement poset of definite causal contexts.

Context c is below d when d commits to at least the order relations of c.
Names are identities: two contexts carrying the same relation stay
incomparable points and are listed in `duplicate_relations`.
"""
from dataclasses import dataclass
from typing import FrozenSet, Tuple

import networkx as nx

from ..utils.errors import DuplicateNameError, UnknownContextError, UnknownPartyError
from .order import CausalOrder


@dataclass(frozen=True)
class OrderContextPoset:
    contexts: Tuple[Tuple[str, CausalOrder], ...]
    leq_pairs: FrozenSet[Tuple[str, str]]
    duplicate_relations: Tuple[Tuple[str, str], ...] = ()

    @property
    def names(self):
        return tuple(name for name, _ in self.contexts)

    @property
    def parties(self):
        return self.contexts[0][1].parties if self.contexts else ()

    def __contains__(self, name):
        return name in self.names

    def __len__(self):
        return len(self.contexts)

    def order(self, name):
        for n, order in self.contexts:
            if n == name:
                return order
        raise UnknownContextError(f"unknown context {name!r}")

    def require(self, name):
        if name not in self.names:
            raise UnknownContextError(f"unknown context {name!r}")
        return name

    def leq(self, c, d):
        self.require(c)
        self.require(d)
        return (c, d) in self.leq_pairs

    def maximal_contexts(self):
        return tuple(c for c in self.names
                     if not any((c, d) in self.leq_pairs for d in self.names if d != c))

    def hasse_edges(self):
        """Covering pairs (c, d) of the strict order, in context order."""
        graph = nx.DiGraph()
        graph.add_nodes_from(self.names)
        graph.add_edges_from((c, d) for c, d in self.leq_pairs if c != d)
        reduced = nx.transitive_reduction(graph)
        rank = {name: i for i, name in enumerate(self.names)}
        return sorted(reduced.edges, key=lambda e: (rank[e[0]], rank[e[1]]))


def build_context_poset(contexts):
    """
    Order named contexts by inclusion of their relations.

    Args:
        contexts: list of (name, CausalOrder) over one shared party list

    Returns:
        OrderContextPoset whose leq is reflexive, transitive and antisymmetric
    """
    names = [name for name, _ in contexts]
    if len(set(names)) != len(names):
        dup = next(n for n in names if names.count(n) > 1)
        raise DuplicateNameError(f"context name {dup!r} repeated")
    if contexts:
        parties = contexts[0][1].parties
        for name, order in contexts:
            if order.parties != parties:
                raise UnknownPartyError(f"context {name!r} uses a different party list")

    leq = set()
    duplicates = []
    for c, rc in contexts:
        for d, rd in contexts:
            if c == d:
                leq.add((c, d))
            elif rc.relation == rd.relation:
                if names.index(c) < names.index(d):
                    duplicates.append((c, d))
            elif rc.relation <= rd.relation:
                leq.add((c, d))
    return OrderContextPoset(tuple(contexts), frozenset(leq), tuple(duplicates))


def upset(poset, c):
    """All contexts d with c <= d (always contains c)."""
    poset.require(c)
    return frozenset(d for d in poset.names if (c, d) in poset.leq_pairs)


def downset(poset, c):
    poset.require(c)
    return frozenset(d for d in poset.names if (d, c) in poset.leq_pairs)
