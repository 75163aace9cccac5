"""
Trivalent spin-network configurations and their local moves.

Spins are stored doubled (twice_spin = 2j) so half-integers stay exact.
Edges are named, and parallel edges are allowed (the theta graph has three
edges between the same two vertices).
"""
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, Optional, Tuple

import networkx as nx

SPIN_STEP = "SpinStep"
HELICITY_FLIP = "HelicityFlip"
RECOUPLE = "Recouple"
MOVE_KINDS = (SPIN_STEP, HELICITY_FLIP, RECOUPLE)


@dataclass(frozen=True)
class SpinNetworkConfig:
    """
    Labelled graph state.

    edges holds (name, u, v) in a fixed order; twice_spin and helicity are
    aligned with it. Intertwiners on trivalent vertices are one-dimensional,
    so the labels are kept only as zeros.
    """
    vertices: Tuple[str, ...]
    edges: Tuple[Tuple[str, str, str], ...]
    twice_spin: Tuple[int, ...]
    helicity: Tuple[int, ...]
    intertwiner: Tuple[int, ...] = ()

    def __post_init__(self):
        if not self.intertwiner:
            object.__setattr__(self, "intertwiner", tuple(0 for _ in self.vertices))
        if len(self.twice_spin) != len(self.edges) or len(self.helicity) != len(self.edges):
            raise ValueError("twice_spin and helicity must have one entry per edge")

    @property
    def edge_names(self):
        return tuple(name for name, _, _ in self.edges)

    def edge_index(self, name):
        for i, (n, _, _) in enumerate(self.edges):
            if n == name:
                return i
        raise KeyError(name)

    def spin(self, name):
        return self.twice_spin[self.edge_index(name)]

    def helicity_of(self, name):
        return self.helicity[self.edge_index(name)]

    def incident(self, vertex):
        """Indices of edges touching `vertex`, a loop counted twice."""
        out = []
        for i, (_, u, v) in enumerate(self.edges):
            if u == vertex:
                out.append(i)
            if v == vertex:
                out.append(i)
        return out

    def key(self):
        return (self.edges, self.twice_spin, self.helicity)

    def graph(self):
        g = nx.MultiGraph()
        g.add_nodes_from(self.vertices)
        for name, u, v in self.edges:
            g.add_edge(u, v, key=name)
        return g

    def cost(self):
        """Area-like cost: sum over edges of sqrt(j (j + 1))."""
        return sum(math.sqrt((s / 2) * (s / 2 + 1)) for s in self.twice_spin)

    def plus_count(self):
        return sum(1 for h in self.helicity if h > 0)

    def describe(self):
        parts = []
        for (name, u, v), s, h in zip(self.edges, self.twice_spin, self.helicity):
            parts.append(f"{name}({u}-{v}):{s}{'+' if h > 0 else '-'}")
        return " ".join(parts)


def triangle_ok(s1, s2, s3):
    return abs(s1 - s2) <= s3 <= s1 + s2 and (s1 + s2 + s3) % 2 == 0


def is_trivalent_connected(config):
    g = config.graph()
    if any(u == v for _, u, v in config.edges):
        return False
    if any(g.degree(v) != 3 for v in config.vertices):
        return False
    return len(config.vertices) > 0 and nx.is_connected(g)


def admissible(config):
    """Triangle and parity conditions at every vertex of a connected trivalent graph."""
    if any(s < 0 for s in config.twice_spin):
        return False
    if not is_trivalent_connected(config):
        return False
    for vertex in config.vertices:
        s1, s2, s3 = (config.twice_spin[i] for i in config.incident(vertex))
        if not triangle_ok(s1, s2, s3):
            return False
    return True


@dataclass(frozen=True)
class MoveCatalogue:
    """
    Enabled local moves and their rate parameters.

    Rates follow r = r0 * w_e * exp(-beta * dC) * gamma ** dh_plus where w_e is
    the weight of the edge the move acts on (weight 0 switches the edge off).
    """
    kinds: Tuple[str, ...] = ()
    r0: Fraction = Fraction(1)
    beta: Fraction = Fraction(0)
    gamma: Fraction = Fraction(1)
    spin_window: Optional[Tuple[int, int]] = None
    spin_step: int = 2
    irreversible_flips: bool = False
    weights: Dict[str, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        unknown = [k for k in self.kinds if k not in MOVE_KINDS]
        if unknown:
            raise ValueError(f"unknown move kind(s) {', '.join(unknown)}")
        if not self.r0 > 0 or not self.gamma > 0 or self.beta < 0:
            raise ValueError("need r0 > 0, gamma > 0 and beta >= 0")
        if self.spin_step < 1:
            raise ValueError("spin_step must be positive")
        if any(w < 0 for w in self.weights.values()):
            raise ValueError("edge weights must be nonnegative")

    def weight(self, edge):
        return Fraction(self.weights.get(edge, 1))

    def in_window(self, twice_spin):
        if twice_spin < 0:
            return False
        if self.spin_window is None:
            return True
        lo, hi = self.spin_window
        return lo <= twice_spin <= hi

    def __hash__(self):
        return hash((self.kinds, self.r0, self.beta, self.gamma, self.spin_window,
                     self.spin_step, self.irreversible_flips, tuple(sorted(self.weights.items()))))


@dataclass(frozen=True)
class Move:
    kind: str
    edge: str
    target: SpinNetworkConfig
    dh_plus: int
    exact_factor: Fraction
    delta_cost: float


def _spin_steps(config, moves):
    for i, name in enumerate(config.edge_names):
        for delta in (-moves.spin_step, moves.spin_step):
            s = config.twice_spin[i] + delta
            if not moves.in_window(s):
                continue
            spins = list(config.twice_spin)
            spins[i] = s
            target = replace(config, twice_spin=tuple(spins))
            if admissible(target):
                yield name, target


def _helicity_flips(config, moves):
    for i, name in enumerate(config.edge_names):
        if moves.irreversible_flips and config.helicity[i] > 0:
            continue
        signs = list(config.helicity)
        signs[i] = -signs[i]
        yield name, replace(config, helicity=tuple(signs))


def _recouplings(config, moves):
    """
    Exchange moves on an internal edge e = (u, v).

    With a, b the other edges at u and c, d the other edges at v, edge b is
    reattached to v and c to u; the spin of e is relabelled over every value
    admissible for the new pairs. Moves between parallel edges are skipped.
    """
    for i, (name, u, v) in enumerate(config.edges):
        at_u = sorted(config.edges[k][0] for k in config.incident(u) if k != i)
        at_v = sorted(config.edges[k][0] for k in config.incident(v) if k != i)
        if len(at_u) != 2 or len(at_v) != 2 or set(at_u) & set(at_v):
            continue
        a, b = at_u
        c, d = at_v
        edges = list(config.edges)
        bi, ci = config.edge_index(b), config.edge_index(c)
        bn, bu, bv = edges[bi]
        edges[bi] = (bn, v if bu == u else bu, v if bv == u else bv)
        cn, cu, cv = edges[ci]
        edges[ci] = (cn, u if cu == v else cu, u if cv == v else cv)
        sa, sb, sc, sd = (config.spin(x) for x in (a, b, c, d))
        lo = max(abs(sa - sc), abs(sb - sd))
        hi = min(sa + sc, sb + sd)
        for s in range(lo, hi + 1):
            if not moves.in_window(s):
                continue
            spins = list(config.twice_spin)
            spins[i] = s
            target = replace(config, edges=tuple(edges), twice_spin=tuple(spins))
            if target.key() != config.key() and admissible(target):
                yield name, target


def moves_from(config, moves):
    """All enabled moves out of `config`, in deterministic order, weight-0 edges dropped."""
    generators = {SPIN_STEP: _spin_steps, HELICITY_FLIP: _helicity_flips, RECOUPLE: _recouplings}
    out = []
    for kind in MOVE_KINDS:
        if kind not in moves.kinds:
            continue
        for edge, target in generators[kind](config, moves):
            w = moves.weight(edge)
            if w == 0:
                continue
            dh_plus = sum(1 for h0, h1 in zip(config.helicity, target.helicity) if h0 < 0 < h1)
            factor = moves.r0 * w * moves.gamma ** dh_plus
            out.append(Move(kind, edge, target, dh_plus, factor, target.cost() - config.cost()))
    return out


def move_rate(move, moves):
    """Float rate of a move; exact Fraction when beta * dC vanishes."""
    if moves.beta == 0 or move.delta_cost == 0:
        return move.exact_factor
    return float(move.exact_factor) * math.exp(-float(moves.beta) * move.delta_cost)


def theta_graph(twice_spins, helicity=None, names=("e1", "e2", "e3")):
    """Two vertices joined by three parallel edges."""
    helicity = tuple(helicity) if helicity is not None else (-1,) * len(names)
    edges = tuple((n, "v1", "v2") for n in names)
    return SpinNetworkConfig(("v1", "v2"), edges, tuple(twice_spins), helicity)
