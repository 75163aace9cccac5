"""
Definite causal structures: parties and strict partial orders on them.
"""
import itertools
from dataclasses import dataclass
from typing import FrozenSet, Tuple

import networkx as nx

from ..utils.errors import CycleError, DuplicatePartyError, SizeError, UnknownPartyError

MAX_ENUMERATED_PARTIES = 6


@dataclass(frozen=True)
class Party:
    id: str
    index: int

    def __str__(self):
        return self.id


def make_parties(ids):
    """Build the party list for a scenario from a sequence of ids."""
    seen = set()
    for pid in ids:
        if pid in seen:
            raise DuplicatePartyError(f"party id {pid!r} repeated")
        seen.add(pid)
    return tuple(Party(pid, i) for i, pid in enumerate(ids))


def _check_parties(parties):
    ids = [p.id for p in parties]
    if len(set(ids)) != len(ids):
        dup = next(pid for pid in ids if ids.count(pid) > 1)
        raise DuplicatePartyError(f"party id {dup!r} repeated")
    if sorted(p.index for p in parties) != list(range(len(parties))):
        raise UnknownPartyError("party indices must be contiguous from 0")
    return tuple(sorted(parties, key=lambda p: p.index))


@dataclass(frozen=True)
class CausalOrder:
    """A strict partial order on parties; (i, j) in relation means i precedes j."""
    parties: Tuple[Party, ...]
    relation: FrozenSet[Tuple[int, int]]

    def party(self, key):
        return resolve_party(self.parties, key)

    def precedes(self, a, b):
        return (self.party(a).index, self.party(b).index) in self.relation

    def is_total(self):
        n = len(self.parties)
        return len(self.relation) == n * (n - 1) // 2

    def chain(self):
        """Parties of a total order listed from earliest to latest."""
        if not self.is_total():
            raise ValueError("chain() is only defined for total orders")
        # In a total order the number of predecessors is the position
        position = {p.index: 0 for p in self.parties}
        for _, j in self.relation:
            position[j] += 1
        return tuple(sorted(self.parties, key=lambda p: position[p.index]))

    def pairs_by_id(self):
        return sorted((self.parties[i].id, self.parties[j].id) for i, j in self.relation)

    def render(self):
        if not self.relation:
            return "-"
        return ", ".join(f"{a}<{b}" for a, b in self.pairs_by_id())

    def __str__(self):
        return self.render()


def resolve_party(parties, key):
    """Look a party up by Party, id or index."""
    if isinstance(key, Party):
        key = key.index
    if isinstance(key, int):
        if 0 <= key < len(parties):
            return parties[key]
        raise UnknownPartyError(f"party index {key} out of range")
    for p in parties:
        if p.id == key:
            return p
    raise UnknownPartyError(f"unknown party {key!r}")


def make_partial_order(parties, pairs):
    """
    Build the transitive closure of `pairs` as a CausalOrder.

    Args:
        parties: list of Party
        pairs: iterable of (a, b) with a, b given as Party, id or index

    Raises:
        CycleError if the closure contains a loop (i, i)
        DuplicatePartyError on repeated ids
    """
    parties = _check_parties(parties)
    graph = nx.DiGraph()
    graph.add_nodes_from(p.index for p in parties)
    for a, b in pairs:
        i, j = resolve_party(parties, a).index, resolve_party(parties, b).index
        if i == j:
            raise CycleError(f"party {parties[i].id} cannot precede itself")
        graph.add_edge(i, j)
    # With reflexive=False, non-trivial cycles show up as self-loops
    closure = nx.transitive_closure(graph, reflexive=False)
    loops = sorted(u for u, v in closure.edges if u == v)
    if loops:
        raise CycleError(f"order has a cycle through {parties[loops[0]].id}")
    return CausalOrder(parties, frozenset(closure.edges))


def total_order(parties, sequence):
    """The chain sequence[0] < sequence[1] < ... as a CausalOrder."""
    seq = [resolve_party(parties, key) for key in sequence]
    return make_partial_order(parties, itertools.combinations(seq, 2))


def enumerate_total_orders(parties):
    """All |parties|! chains, in lexicographic order of the party sequence."""
    parties = _check_parties(parties)
    if not 1 <= len(parties) <= MAX_ENUMERATED_PARTIES:
        raise SizeError(
            f"total-order enumeration supports 1..{MAX_ENUMERATED_PARTIES} parties, got {len(parties)}")
    orders = []
    for perm in itertools.permutations(parties):
        relation = frozenset((a.index, b.index) for a, b in itertools.combinations(perm, 2))
        orders.append(CausalOrder(parties, relation))
    return orders


def linear_extensions(order):
    """All total orders containing the given partial order."""
    if len(order.parties) > MAX_ENUMERATED_PARTIES:
        raise SizeError(f"linear extensions capped at {MAX_ENUMERATED_PARTIES} parties")
    graph = nx.DiGraph()
    graph.add_nodes_from(p.index for p in order.parties)
    graph.add_edges_from(order.relation)
    extensions = []
    for sort in nx.all_topological_sorts(graph):
        relation = frozenset(itertools.combinations(sort, 2))
        extensions.append(CausalOrder(order.parties, relation))
    extensions.sort(key=lambda o: [p.index for p in o.chain()])
    return extensions
