"""
Kripke-style intuitionistic forcing over the context poset.

A KripkeModel carries, for every atomic proposition (Atom or Prec), the set of
contexts where it is forced and the set where it is appropriately posed.
Implication quantifies over refinements; negation is Implies(phi, Bottom).
"""
import itertools
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, NamedTuple

from ..contexts import build_context_poset, make_parties, make_partial_order, upset
from ..contexts.poset import OrderContextPoset
from ..utils.errors import CycleError, UnknownAtomError, UnknownPartyError
from .propositions import And, Atom, Bottom, Implies, Not, Or, Prec, atoms_of


@dataclass(frozen=True)
class KripkeModel:
    poset: OrderContextPoset
    valuation: Dict[object, FrozenSet[str]] = field(default_factory=dict)
    posed: Dict[object, FrozenSet[str]] = field(default_factory=dict)

    def known(self, atom):
        return atom in self.valuation or atom in self.posed

    def forced_at(self, atom):
        if not self.known(atom):
            raise UnknownAtomError(f"unknown atomic proposition {_label(atom)}")
        return self.valuation.get(atom, frozenset())

    def posed_at(self, atom):
        if not self.known(atom):
            raise UnknownAtomError(f"unknown atomic proposition {_label(atom)}")
        return self.posed.get(atom, frozenset(self.poset.names))

    def with_atom(self, atom, forced, posed=None):
        """Copy of the model with one atom (re)declared."""
        valuation = dict(self.valuation)
        valuation[atom] = frozenset(forced)
        posed_map = dict(self.posed)
        if posed is not None:
            posed_map[atom] = frozenset(posed)
        return KripkeModel(self.poset, valuation, posed_map)


class Violation(NamedTuple):
    atom: object
    lower: str
    upper: str


def _label(atom):
    if isinstance(atom, Prec):
        return f"{atom.a}<{atom.b}"
    if isinstance(atom, Atom):
        return atom.name
    return repr(atom)


def default_order_valuation(poset):
    """Force Prec(a, b) exactly where the context's order puts a before b."""
    valuation = {}
    posed = {}
    everywhere = frozenset(poset.names)
    for a, b in itertools.permutations(poset.parties, 2):
        atom = Prec(a.id, b.id)
        valuation[atom] = frozenset(name for name, order in poset.contexts
                                    if (a.index, b.index) in order.relation)
        posed[atom] = everywhere
    return KripkeModel(poset, valuation, posed)


def _check_prec(model, atom):
    ids = {p.id for p in model.poset.parties}
    for pid in (atom.a, atom.b):
        if pid not in ids:
            raise UnknownPartyError(f"unknown party {pid!r} in {atom.a}<{atom.b}")


def forces(model, c, phi):
    """Decide c ||- phi."""
    model.poset.require(c)
    return _forces(model, c, phi)


def _forces(model, c, phi):
    if isinstance(phi, Bottom):
        return False
    if isinstance(phi, (Atom, Prec)):
        if isinstance(phi, Prec):
            _check_prec(model, phi)
        return c in model.forced_at(phi)
    if isinstance(phi, And):
        return _forces(model, c, phi.left) and _forces(model, c, phi.right)
    if isinstance(phi, Or):
        return _forces(model, c, phi.left) or _forces(model, c, phi.right)
    if isinstance(phi, Implies):
        return all(not _forces(model, d, phi.left) or _forces(model, d, phi.right)
                   for d in sorted(upset(model.poset, c)))
    raise TypeError(f"not a proposition: {phi!r}")


def check_monotone(model):
    """Every (atom, c, d) with c < d where the atom is forced at c but not at d."""
    violations = []
    atoms = sorted(set(model.valuation), key=_label)
    for atom in atoms:
        forced = model.valuation[atom]
        for c in model.poset.names:
            if c not in forced:
                continue
            for d in model.poset.names:
                if d != c and model.poset.leq(c, d) and d not in forced:
                    violations.append(Violation(atom, c, d))
    return violations


def is_posed(model, c, phi):
    """A compound is posed where all of its atoms are; Bottom is posed everywhere."""
    model.poset.require(c)
    for atom in atoms_of(phi):
        if isinstance(atom, Prec):
            _check_prec(model, atom)
        if c not in model.posed_at(atom):
            return False
    return True


def indeterminate_at(model, c, phi):
    if not is_posed(model, c, phi):
        return True
    return not forces(model, c, phi) and not forces(model, c, Not(phi))


def close_upward(model):
    """
    Up-close every valuation and posedness set.

    Returns:
        (closed model, list of (kind, atom, added contexts)) where kind is
        'atoms' or 'posed'; the list is empty when the model was already closed
    """
    repairs = []

    def close(kind, mapping):
        closed = {}
        for atom, ctxs in mapping.items():
            full = frozenset(itertools.chain.from_iterable(upset(model.poset, c) for c in ctxs))
            if full != ctxs:
                repairs.append((kind, atom, sorted(full - ctxs)))
            closed[atom] = full
        return closed

    valuation = close("atoms", model.valuation)
    posed = close("posed", model.posed)
    return KripkeModel(model.poset, valuation, posed), repairs


def restrict_to_posed(model):
    """
    Drop forced contexts that lie outside the atom's posed set.

    Afterwards every forced context is posed. The intersection of two
    up-sets is an up-set, so monotonicity survives.

    Returns:
        (restricted model, list of (atom, removed contexts))
    """
    removed = []
    valuation = {}
    for atom, forced in model.valuation.items():
        posed = model.posed_at(atom)
        outside = forced - posed
        if outside:
            removed.append((atom, sorted(outside, key=model.poset.names.index)))
        valuation[atom] = forced & posed
    return KripkeModel(model.poset, valuation, dict(model.posed)), removed


def random_monotone_model(rng, n_contexts=None, n_atoms=2):
    """
    A random poset of at most six three-party contexts with a monotone valuation.

    Contexts are random acyclic relations on A, B, C with distinct relations;
    atom valuations are up-closures of random context subsets.
    """
    parties = make_parties(["A", "B", "C"])
    candidate_pairs = [("A", "B"), ("B", "C"), ("A", "C"), ("B", "A"), ("C", "B")]
    if n_contexts is None:
        n_contexts = int(rng.integers(1, 7))
    contexts = []
    seen = set()
    attempts = 0
    while len(contexts) < n_contexts and attempts < 200:
        attempts += 1
        chosen = [p for p in candidate_pairs if rng.random() < 0.35]
        try:
            order = make_partial_order(parties, chosen)
        except CycleError:
            continue
        if order.relation in seen:
            continue
        seen.add(order.relation)
        contexts.append((f"c{len(contexts)}", order))
    poset = build_context_poset(contexts)
    model = default_order_valuation(poset)
    valuation = dict(model.valuation)
    posed = dict(model.posed)
    for k in range(n_atoms):
        seeds = [c for c in poset.names if rng.random() < 0.3]
        valuation[Atom(f"p{k}")] = frozenset(
            itertools.chain.from_iterable(upset(poset, c) for c in seeds))
    closed, _ = close_upward(KripkeModel(poset, valuation, posed))
    return closed


def random_proposition(rng, atoms, max_depth=4):
    """Random formula over the given atomic propositions, depth <= max_depth."""
    if max_depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.1:
            return Bottom()
        return atoms[int(rng.integers(len(atoms)))]
    kind = int(rng.integers(4))
    if kind == 3:
        return Not(random_proposition(rng, atoms, max_depth - 1))
    node = (And, Or, Implies)[kind]
    return node(random_proposition(rng, atoms, max_depth - 1),
                random_proposition(rng, atoms, max_depth - 1))


def list_atoms(model) -> List[object]:
    return sorted(set(model.valuation) | set(model.posed), key=_label)
