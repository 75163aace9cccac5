"""
Spin-network model files.

    [graph]
    e1: v1 v2
    [spins]
    e1: 2
    [helicity]
    e1: -
    [moves]
    kinds: HelicityFlip SpinStep
    r0: 1
    beta: 0
    gamma: 2
    spin_window = 0..8
    spin_step: 2
    irreversible_flips: yes
    weight e1: 3
    [events]
    clock_edge = e3
    A: helicity e1 = + & edge e2 spin in 2..4 & clock in 0..6
    [interventions]
    party A event A features seen:B
    A 0 * -> 1 0
    [scenario]
    parties: A B
    settings: 2 2
    outcomes: 2 2
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional

from ..gluing.behavior import Scenario
from ..spindyn.interventions import WILDCARD, KernelRow, ResponseKernel
from ..spindyn.network import MOVE_KINDS, MoveCatalogue, SpinNetworkConfig
from ..spindyn.trajectories import ClockWindow, EventPredicate, HelicityIs, SpinRange
from ..utils.errors import (
    ParseError, UnknownEdgeError, UnknownEventError, UnknownPartyError,
)
from ..utils.report import parse_rational
from .scenario_file import parse_scenario_header
from .sections import column_of, key_value, parse_int, parse_range, read_text, split_sections

MODEL_SECTIONS = ("graph", "spins", "helicity", "moves", "events", "interventions", "scenario")
FEATURE_KINDS = ("fired", "seen", "helicity", "spin", "clock")
_TRUE = ("yes", "true", "1", "on")
_FALSE = ("no", "false", "0", "off")


@dataclass
class ModelFile:
    seed: SpinNetworkConfig
    moves: MoveCatalogue
    events: Dict[str, EventPredicate] = field(default_factory=dict)
    kernels: List[ResponseKernel] = field(default_factory=list)
    scenario: Optional[Scenario] = None
    clock_edge: Optional[str] = None


def _parse_graph(lines):
    edges = []
    vertices = []
    for line in lines:
        name, value, offset = key_value(line, ":")
        ends = value.split()
        if len(ends) != 2:
            line.fail("an edge needs exactly two end vertices", offset)
        if any(e[0] == name for e in edges):
            line.fail(f"edge {name} declared twice")
        edges.append((name, ends[0], ends[1]))
        for v in ends:
            if v not in vertices:
                vertices.append(v)
    if not edges:
        raise ParseError("[graph] declares no edges")
    return tuple(vertices), tuple(edges)


def _per_edge(lines, names, convert, what):
    out = {}
    for line in lines:
        edge, value, offset = key_value(line, ":")
        if edge not in names:
            raise UnknownEdgeError(f"unknown edge {edge!r} in [{what}] (line {line.number})")
        out[edge] = convert(line, value, offset)
    return out


def _sign(line, value, offset):
    if value not in ("+", "-"):
        line.fail(f"helicity must be + or -, found {value!r}", offset)
    return 1 if value == "+" else -1


def _rational(line, value, offset):
    try:
        return parse_rational(value)
    except (ValueError, ZeroDivisionError):
        line.fail(f"expected a number, found {value!r}", offset)


def _flag(line, value, offset):
    if value.lower() in _TRUE:
        return True
    if value.lower() in _FALSE:
        return False
    line.fail(f"expected yes or no, found {value!r}", offset)


def _parse_moves(lines, names):
    options = {"weights": {}}
    for line in lines:
        key, value, offset = key_value(line)
        if key.startswith("weight "):
            edge = key.split(None, 1)[1].strip()
            if edge not in names:
                raise UnknownEdgeError(f"unknown edge {edge!r} in [moves] (line {line.number})")
            options["weights"][edge] = _rational(line, value, offset)
        elif key == "kinds":
            kinds = value.split()
            for k in kinds:
                if k not in MOVE_KINDS:
                    line.fail(f"unknown move kind {k!r}", column_of(line, k, offset))
            options["kinds"] = tuple(kinds)
        elif key in ("r0", "beta", "gamma"):
            options[key] = _rational(line, value, offset)
        elif key == "spin_window":
            options[key] = parse_range(line, value, offset)
        elif key == "spin_step":
            options[key] = parse_int(line, value, offset, minimum=1)
        elif key == "irreversible_flips":
            options[key] = _flag(line, value, offset)
        else:
            line.fail(f"unknown key {key!r} in [moves]")
    try:
        return MoveCatalogue(**options)
    except ValueError as e:
        raise ParseError(f"[moves]: {e}") from e


def _parse_test(line, text, names, offset):
    words = text.split()
    if len(words) == 4 and words[0] == "helicity" and words[2] == "=":
        if words[1] not in names:
            raise UnknownEdgeError(f"unknown edge {words[1]!r} (line {line.number})")
        return HelicityIs(words[1], _sign(line, words[3], offset))
    if len(words) == 5 and words[0] == "edge" and words[2:4] == ["spin", "in"]:
        if words[1] not in names:
            raise UnknownEdgeError(f"unknown edge {words[1]!r} (line {line.number})")
        return SpinRange(words[1], *parse_range(line, words[4], offset))
    if len(words) == 3 and words[0] == "clock" and words[1] == "in":
        return ClockWindow(*parse_range(line, words[2], offset))
    line.fail(f"cannot read event test {text.strip()!r}", offset)


def _parse_events(lines, names):
    clock_edge = None
    pending = []
    for line in lines:
        if line.text.startswith("clock_edge"):
            _, value, offset = key_value(line, "=:")
            if value not in names:
                raise UnknownEdgeError(f"unknown clock edge {value!r} (line {line.number})")
            clock_edge = value
            continue
        name, value, offset = key_value(line, ":")
        tests = tuple(_parse_test(line, chunk, names, column_of(line, chunk.strip(), offset))
                      for chunk in value.split("&"))
        pending.append((line, name, tests))
    events = {}
    for line, name, tests in pending:
        if name in events:
            line.fail(f"event {name} defined twice")
        if clock_edge is None and any(isinstance(t, ClockWindow) for t in tests):
            line.fail("clock window used but no clock_edge declared")
        events[name] = EventPredicate(name, tests, clock_edge)
    return events, clock_edge


def _parse_interventions(lines, events, names):
    blocks = []
    for line in lines:
        words = line.text.split()
        if words[0] == "party":
            if len(words) < 6 or words[2] != "event" or words[4] != "features":
                line.fail("expected 'party P event E features f1 f2 ...' ('-' for none)")
            if words[3] not in events:
                raise UnknownEventError(f"unknown event {words[3]!r} (line {line.number})")
            features = () if words[5:] == ["-"] else tuple(words[5:])
            for f in features:
                kind, _, arg = f.partition(":")
                if kind not in FEATURE_KINDS:
                    line.fail(f"unknown feature {f!r}", column_of(line, f))
                if kind == "clock" and events[words[3]].clock_edge is None:
                    line.fail("feature 'clock' needs a clock_edge in [events]", column_of(line, f))
                if kind in ("helicity", "spin") and arg not in names:
                    raise UnknownEdgeError(f"unknown edge {arg!r} in feature {f} (line {line.number})")
            blocks.append((words[1], events[words[3]], features, []))
            continue
        if not blocks:
            line.fail("kernel row before any 'party' line")
        party, event, features, rows = blocks[-1]
        left, arrow, right = line.text.partition("->")
        if not arrow:
            line.fail("kernel row needs '->' before the outcome distribution")
        head = left.split()
        if not head or head[0] != party:
            line.fail(f"kernel row must start with party {party}")
        if len(head) != 2 + len(features):
            line.fail(f"expected a setting and {len(features)} feature value(s)")
        setting = head[1]
        if setting != WILDCARD:
            parse_int(line, setting, column_of(line, setting, len(party)))
        start = len(left) + 2
        distribution = tuple(_rational(line, t, column_of(line, t, start)) for t in right.split())
        if not distribution:
            line.fail("empty outcome distribution")
        rows.append(KernelRow(setting, tuple(head[2:]), distribution))
    return [ResponseKernel(p, e, f, tuple(rows)) for p, e, f, rows in blocks]


def parse_model(text):
    sections = split_sections(text, MODEL_SECTIONS)
    if "graph" not in sections:
        raise ParseError("missing [graph] section")
    vertices, edges = _parse_graph(sections["graph"])
    names = [e[0] for e in edges]
    spins = _per_edge(sections.get("spins", []), names,
                      lambda line, v, o: parse_int(line, v, o, minimum=0), "spins")
    missing = [n for n in names if n not in spins]
    if missing:
        raise ParseError(f"no spin given for edge(s) {', '.join(missing)}")
    helicity = _per_edge(sections.get("helicity", []), names, _sign, "helicity")
    seed = SpinNetworkConfig(vertices, edges, tuple(spins[n] for n in names),
                             tuple(helicity.get(n, -1) for n in names))
    moves = _parse_moves(sections.get("moves", []), names)
    events, clock_edge = _parse_events(sections.get("events", []), names)
    kernels = _parse_interventions(sections.get("interventions", []), events, names)
    scenario = None
    if "scenario" in sections:
        parties, scenario = parse_scenario_header(sections["scenario"])
        ids = {p.id for p in parties}
        for kernel in kernels:
            if kernel.party not in ids:
                raise UnknownPartyError(f"intervention for unknown party {kernel.party!r}")
    return ModelFile(seed, moves, events, kernels, scenario, clock_edge)


def load_model(path):
    return parse_model(read_text(path))


def default_horizon(moves):
    return float(50 / Fraction(moves.r0))
