"""
Scenario files: parties, causal contexts, atom valuations and a behaviour table.

    [scenario]
    parties: A B
    settings: 2 2
    outcomes: 2 2

    [contexts]
    c_AB: A<B
    c_ico: -

    [atoms]
    sep @ c_AB c_BA

    [posed]
    A<B @ c_AB c_BA

    [behavior]
    0 1 ; 1 0 ; 1/4
"""
from dataclasses import dataclass, field
from typing import List, Optional

from ..contexts import build_context_poset, make_parties, make_partial_order
from ..gluing.behavior import BehaviorTable, Scenario
from ..logic.forcing import (
    KripkeModel, close_upward, default_order_valuation, restrict_to_posed,
)
from ..logic.propositions import Atom, Prec, parse_proposition, render_proposition
from ..utils.errors import (
    DuplicateNameError, ParseError, SemanticError, SizeError, UnknownContextError,
    UnknownPartyError, UnposedForcingError, UpClosureError,
)
from ..utils.logging_utils import print_warning
from ..utils.report import format_rational, parse_rational
from .sections import column_of, key_value, parse_int, read_text, split_sections

SCENARIO_SECTIONS = ("scenario", "contexts", "atoms", "posed", "behavior")
MAX_CONTEXTS = 64


@dataclass
class ScenarioFile:
    parties: tuple
    scenario: Optional[Scenario] = None
    poset: Optional[object] = None
    model: Optional[KripkeModel] = None
    behavior: Optional[BehaviorTable] = None
    repairs: List = field(default_factory=list)
    unposed: List = field(default_factory=list)
    dropped_contexts: List = field(default_factory=list)


def parse_scenario_header(lines):
    values = {}
    for line in lines:
        key, value, offset = key_value(line)
        if key not in ("parties", "settings", "outcomes"):
            line.fail(f"unknown key {key!r} in [scenario]")
        if key in values:
            line.fail(f"key {key!r} given twice")
        values[key] = (line, value, offset)
    if "parties" not in values:
        raise ParseError("[scenario] must list the parties")
    line, value, _ = values["parties"]
    ids = value.split()
    if not ids:
        line.fail("empty party list")
    parties = make_parties(ids)
    counts = {}
    for key in ("settings", "outcomes"):
        if key not in values:
            continue
        line, value, offset = values[key]
        tokens = value.split()
        counts[key] = tuple(parse_int(line, t, offset, minimum=1) for t in tokens)
    scenario = None
    if counts:
        if set(counts) != {"settings", "outcomes"}:
            raise ParseError("[scenario] needs both settings and outcomes")
        scenario = Scenario(parties, counts["settings"], counts["outcomes"])
    return parties, scenario


def _parse_relation(line, text, parties):
    """'A<B, B<C' or chains 'A<B<C'; '-' is the empty order."""
    text = text.strip()
    if text == "-" or not text:
        return make_partial_order(parties, [])
    pairs = []
    for chunk in text.split(","):
        names = [n.strip() for n in chunk.split("<")]
        if len(names) < 2 or any(not n for n in names):
            line.fail(f"malformed order relation {chunk.strip()!r}", column_of(line, chunk.strip()))
        pairs.extend(zip(names, names[1:]))
    return make_partial_order(parties, pairs)


def _parse_contexts(lines, parties, strict):
    if len(lines) > MAX_CONTEXTS:
        raise SizeError(f"{len(lines)} contexts declared, cap is {MAX_CONTEXTS}")
    contexts = []
    dropped = []
    seen = {}
    for line in lines:
        name, value, _ = key_value(line, ":")
        order = _parse_relation(line, value, parties)
        if any(n == name for n, _ in contexts):
            raise DuplicateNameError(f"context name {name!r} repeated (line {line.number})")
        if order.relation in seen:
            message = f"context {name} repeats the relation of {seen[order.relation]}"
            if strict:
                raise DuplicateNameError(message)
            print_warning(message + "; dropped")
            dropped.append(name)
            continue
        seen[order.relation] = name
        contexts.append((name, order))
    return build_context_poset(contexts), dropped


def _parse_assignments(lines, poset, parties, dropped):
    out = {}
    ids = {p.id for p in parties}
    for line in lines:
        left, sep, right = line.text.partition("@")
        if not sep:
            line.fail("expected 'atom @ context ...'")
        atom = parse_proposition(left.strip(), line.number)
        if not isinstance(atom, (Atom, Prec)):
            line.fail(f"only atomic propositions can be assigned, got {render_proposition(atom)}")
        if isinstance(atom, Prec):
            for pid in (atom.a, atom.b):
                if pid not in ids:
                    raise UnknownPartyError(f"unknown party {pid!r} (line {line.number})")
        names = right.split()
        for name in names:
            if name not in poset and name not in dropped:
                raise UnknownContextError(f"unknown context {name!r} (line {line.number})")
        if atom in out:
            line.fail(f"{render_proposition(atom)} assigned twice")
        out[atom] = frozenset(n for n in names if n in poset)
    return out


def _parse_behavior(lines, scenario):
    if scenario is None:
        raise ParseError("[behavior] needs settings and outcomes in [scenario]")
    values = {}
    for line in lines:
        parts = line.text.split(";")
        if len(parts) != 3:
            line.fail("expected 'settings ; outcomes ; probability'")
        x = tuple(parse_int(line, t, column_of(line, t)) for t in parts[0].split())
        start = len(parts[0]) + 1
        a = tuple(parse_int(line, t, column_of(line, t, start)) for t in parts[1].split())
        token = parts[2].strip()
        try:
            p = parse_rational(token)
        except (ValueError, ZeroDivisionError):
            line.fail(f"malformed probability {token!r}", column_of(line, token, start))
        if (x, a) in values:
            line.fail(f"entry {' '.join(map(str, x))} ; {' '.join(map(str, a))} given twice")
        values[(x, a)] = p
    return BehaviorTable(scenario, values)


def parse_scenario(text, strict=False):
    """
    Parse scenario text into parties, context poset, Kripke model and behaviour.

    Non-upward-closed atom or posedness sets are closed with a warning, or
    rejected with UpClosureError when strict.
    """
    sections = split_sections(text, SCENARIO_SECTIONS)
    if "scenario" not in sections:
        raise ParseError("missing [scenario] section")
    parties, scenario = parse_scenario_header(sections["scenario"])

    result = ScenarioFile(parties, scenario)
    if "contexts" in sections:
        poset, dropped = _parse_contexts(sections["contexts"], parties, strict)
        result.poset = poset
        result.dropped_contexts = dropped
        model = default_order_valuation(poset)
        valuation = dict(model.valuation)
        posed = dict(model.posed)
        valuation.update(_parse_assignments(sections.get("atoms", []), poset, parties, dropped))
        posed.update(_parse_assignments(sections.get("posed", []), poset, parties, dropped))
        closed, repairs = close_upward(KripkeModel(poset, valuation, posed))
        for kind, atom, added in repairs:
            message = (f"[{kind}] set of {render_proposition(atom)} is not upward closed; "
                       f"adding {' '.join(added)}")
            if strict:
                raise UpClosureError(message)
            print_warning(message)
        restricted, unposed = restrict_to_posed(closed)
        for atom, removed in unposed:
            message = (f"{render_proposition(atom)} is forced at {' '.join(removed)} "
                       f"where it is not posed")
            if strict:
                raise UnposedForcingError(message)
            print_warning(message + "; dropped from [atoms]")
        result.model = restricted
        result.repairs = repairs
        result.unposed = unposed
    elif "atoms" in sections or "posed" in sections:
        raise SemanticError("[atoms] and [posed] need a [contexts] section")

    if "behavior" in sections:
        result.behavior = _parse_behavior(sections["behavior"], scenario)
    return result


def load_scenario(path, strict=False):
    return parse_scenario(read_text(path), strict=strict)


def format_scenario_section(scenario):
    return [
        "[scenario]",
        "parties: " + " ".join(scenario.party_ids),
        "settings: " + " ".join(str(k) for k in scenario.settings),
        "outcomes: " + " ".join(str(k) for k in scenario.outcomes),
    ]


def format_behavior_section(table):
    """Nonzero entries in settings-major order; parses back to the same table."""
    lines = ["[behavior]"]
    for x, a in table.scenario.entries():
        p = table.prob(x, a)
        if p:
            lines.append(f"{' '.join(map(str, x))} ; {' '.join(map(str, a))} ; {format_rational(p)}")
    return lines


def format_behavior_file(table):
    return "\n".join(format_scenario_section(table.scenario) + [""] + format_behavior_section(table)) + "\n"
