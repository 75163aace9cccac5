"""
Subcommand implementations. Each cmd_* takes the parsed argparse namespace
and returns (report text, exit code); scripts/causal_glue.py prints the text
and maps exceptions to exit codes.
"""
import math
import os
from fractions import Fraction

from ..contexts import downset, enumerate_total_orders, linear_extensions
from ..data import format_behavior_file, load_model, load_scenario
from ..data.model_file import default_horizon
from ..gluing import causal_fraction, check_global_section, l1_distance_to_gluable
from ..logic import SevenValue, classify_report, parse_proposition
from ..logic.propositions import Atom
from ..spindyn import (
    build_state_space, envelope_overlap, gibbs_density, induced_behavior, stationary_density,
)
from ..spindyn.trajectories import hitting_times, histogram_from_times, order_statistics_from_times
from ..utils.errors import EmptyFamilyError, ParseError, SemanticError
from ..utils.logging_utils import print_status
from ..utils.report import aligned_table, emit_csv, format_probability, format_rational, frame
from ..utils.save_results import save_results

EXIT_OK = 0
EXIT_NOT_GLUABLE = 10
MAX_LISTED_STATES = 32


def _finish(lines, args, command, csv_frame=None, exit_code=EXIT_OK):
    text = "\n".join(lines) + "\n"
    if csv_frame is not None and getattr(args, "emit_csv", None):
        emit_csv(csv_frame, args.emit_csv)
        print_status(f"CSV written to {args.emit_csv}")
    if getattr(args, "save_results", False):
        save_results(text, args, command, csv_frame)
    return text, exit_code


def _entry(x, a):
    return f"{' '.join(map(str, x))} ; {' '.join(map(str, a))}"


def gluing_orders(scenario_file):
    """Linear extensions of the maximal contexts, or every total order when none are declared."""
    poset = scenario_file.poset
    if poset is None or len(poset) == 0:
        return enumerate_total_orders(scenario_file.parties)
    orders = []
    for name in poset.maximal_contexts():
        for ext in linear_extensions(poset.order(name)):
            if ext.relation not in {o.relation for o in orders}:
                orders.append(ext)
    return orders


def _render_orders(orders):
    return " | ".join(" < ".join(p.id for p in o.chain()) for o in orders)


def cmd_contexts(args):
    sf = load_scenario(args.scenario, strict=args.strict)
    if sf.poset is None:
        raise SemanticError("scenario declares no [contexts]")
    poset = sf.poset
    lines = [f"Parties: {' '.join(p.id for p in sf.parties)}", f"Contexts ({len(poset)}):"]
    rows = []
    for name, order in poset.contexts:
        coarser = [c for c in poset.names if c != name and c in downset(poset, name)]
        rows.append([name, order.render(), "yes" if order.is_total() else "no",
                     " ".join(coarser) or "-"])
    table = frame(rows, ["context", "relation", "total", "refines"])
    lines += ["  " + row for row in aligned_table(table)]
    lines.append("Refinement (covering pairs):")
    edges = poset.hasse_edges()
    lines += [f"  {c} < {d}" for c, d in edges] or ["  (none)"]
    lines.append(f"Maximal: {' '.join(poset.maximal_contexts()) or '-'}")
    for name in sf.dropped_contexts:
        lines.append(f"Dropped duplicate context: {name}")
    return _finish(lines, args, "contexts", table)


def _family(args, poset):
    if not args.family:
        return list(poset.names)
    names = []
    for chunk in args.family:
        names += [n for n in chunk.replace(",", " ").split() if n]
    if not names:
        raise EmptyFamilyError("context family must be nonempty")
    return names


def cmd_classify(args):
    sf = load_scenario(args.scenario, strict=args.strict)
    if sf.model is None:
        raise SemanticError("scenario declares no [contexts]")
    model = sf.model
    lines = []
    if args.bind_sep:
        if sf.behavior is None:
            raise SemanticError("--bind-sep needs a [behavior] section")
        verdict = check_global_section(sf.behavior, gluing_orders(sf), with_measures=False)
        forced = model.poset.maximal_contexts() if verdict.gluable else ()
        model = model.with_atom(Atom("sep"), forced, posed=model.poset.names)
        lines.append(f"sep bound: behaviour is {'GLUABLE' if verdict.gluable else 'NOT GLUABLE'}, "
                     f"forced at {' '.join(forced) or '-'}")
    if not args.prop:
        raise ParseError("at least one --prop is required")
    props = [parse_proposition(text) for text in args.prop]
    family = _family(args, model.poset)
    report = classify_report(model, family, props)
    lines.append(f"Family: {' '.join(family)}")
    lines += aligned_table(report)
    lines.append("Values: " + " ".join(v.value for v in SevenValue))
    return _finish(lines, args, "classify", report)


def _glue_lines(table, orders, verdict, show_witness):
    scenario = table.scenario
    lines = [f"Behaviour: parties {' '.join(scenario.party_ids)}; "
             f"settings {' '.join(map(str, scenario.settings))}; "
             f"outcomes {' '.join(map(str, scenario.outcomes))}",
             f"Orders: {_render_orders(orders)}"]
    rows = []
    if verdict.gluable:
        lines.append("Verdict: GLUABLE")
        lines.append("Certificate (one of possibly many decompositions):")
        for order, weight, q in verdict.certificate:
            chain = " < ".join(p.id for p in order.chain())
            lines.append(f"  {chain}: weight {format_probability(weight)}")
            rows.append(["weight", chain, "", "", format_rational(weight)])
            if show_witness:
                for x, a in scenario.entries():
                    p = q.prob(x, a)
                    if p:
                        lines.append(f"    {_entry(x, a)} ; {format_rational(p)}")
                        rows.append(["component", chain, " ".join(map(str, x)),
                                     " ".join(map(str, a)), format_rational(p)])
    else:
        w = verdict.witness
        lines.append("Verdict: NOT GLUABLE")
        lines.append(f"Witness: sum w(x,a) p(a|x) <= {format_rational(w.bound)} on every "
                     f"definite-order mixture{' (tight)' if w.tight else ''}")
        lines.append(f"  value on this behaviour: {format_rational(w.value)} "
                     f"({float(w.value):.6f}), violation {format_rational(w.violation)}")
        lines.append(f"  nonzero coefficients: {len(w.coefficients)}")
        for (x, a), c in sorted(w.coefficients.items()):
            rows.append(["witness", "", " ".join(map(str, x)), " ".join(map(str, a)), str(c)])
            if show_witness:
                lines.append(f"    {_entry(x, a)} : {c}")
        rows.append(["bound", "", "", "", format_rational(w.bound)])
    lines.append(f"Causal fraction: {format_probability(verdict.causal_fraction)}")
    lines.append(f"L1 distance: {format_rational(verdict.l1_distance)} "
                 f"({float(verdict.l1_distance):.6f})")
    return lines, frame(rows, ["kind", "order", "x", "a", "value"])


def cmd_glue(args):
    sf = load_scenario(args.scenario, strict=args.strict)
    if sf.behavior is None:
        raise SemanticError("scenario has no [behavior] section")
    orders = gluing_orders(sf)
    print_status("Checking for a global section", important=True)
    verdict = check_global_section(sf.behavior, orders)
    lines, csv = _glue_lines(sf.behavior, orders, verdict, args.witness)
    return _finish(lines, args, "glue", csv, EXIT_OK if verdict.gluable else EXIT_NOT_GLUABLE)


def cmd_fraction(args):
    sf = load_scenario(args.scenario, strict=args.strict)
    if sf.behavior is None:
        raise SemanticError("scenario has no [behavior] section")
    orders = gluing_orders(sf)
    lines = [f"Orders: {_render_orders(orders)}"]
    rows = []
    if args.measure in ("cf", "both"):
        cf = causal_fraction(sf.behavior, orders)
        lines.append(f"Causal fraction: {format_probability(cf)}")
        rows.append(["causal_fraction", format_rational(cf), f"{float(cf):.6f}"])
    if args.measure in ("l1", "both"):
        l1 = l1_distance_to_gluable(sf.behavior, orders)
        lines.append(f"L1 distance: {format_rational(l1)} ({float(l1):.6f})")
        rows.append(["l1_distance", format_rational(l1), f"{float(l1):.6f}"])
    return _finish(lines, args, "fraction", frame(rows, ["measure", "exact", "float"]))


def _tracked_events(model):
    if model.kernels and model.scenario is not None:
        by_party = {k.party: k.event for k in model.kernels}
        return [by_party[p] for p in model.scenario.party_ids if p in by_party]
    return list(model.events.values())


def _stationary_lines(gen):
    result = stationary_density(gen)
    lines = [f"Stationary density ({result.multiplicity} recurrent class"
             f"{'es' if result.multiplicity != 1 else ''}, residual {result.residual:.3g}):"]
    if gen.n_states > MAX_LISTED_STATES:
        lines.append(f"  ({gen.n_states} states, not listed)")
        return lines
    gibbs = None
    if gen.moves is not None and not gen.moves.irreversible_flips:
        gibbs = gibbs_density(gen)
    for i in range(gen.n_states):
        if result.exact is not None:
            value = format_probability(result.exact[i])
        else:
            value = f"{result.density[i]:.6f}"
        extra = f"  gibbs {gibbs[i]:.6f}" if gibbs is not None else ""
        lines.append(f"  [{i}] {gen.state_label(i)}: {value}{extra}")
    return lines


def cmd_simulate(args):
    model = load_model(args.model)
    if args.samples < 1:
        raise SemanticError("--samples must be at least 1")
    if args.bins < 1:
        raise SemanticError("--bins must be at least 1")
    horizon = args.horizon if args.horizon is not None else default_horizon(model.moves)
    if not (horizon > 0 and math.isfinite(horizon)):
        raise SemanticError(f"--horizon must be a positive finite number, got {horizon:g}")
    print_status("Building state space", important=True)
    gen = build_state_space(model.seed, model.moves, cap=args.state_cap)
    lines = [f"Model: {args.model}",
             f"States: {gen.n_states}{' (truncated)' if gen.truncated else ''}; "
             f"horizon {horizon:g}; samples {args.samples}; seed {args.seed}"]
    lines += _stationary_lines(gen)

    events = _tracked_events(model)
    csv_rows = []
    metrics = {}
    if events:
        taus, _ = hitting_times(gen, events, args.samples, horizon, args.seed,
                                desc="hitting times")
        envelopes = []
        for k, event in enumerate(events):
            env = histogram_from_times(taus[:, k], horizon, args.bins)
            envelopes.append(env)
            lines.append(f"Envelope {event.name} [{event.render()}]: "
                         f"hit fraction {format_probability(env.hit_fraction)}")
            for b in range(args.bins):
                lo, hi = env.edges[b], env.edges[b + 1]
                mass = Fraction(int(env.counts[b]), env.hits) if env.hits else Fraction(0)
                if mass:
                    lines.append(f"  [{lo:.4f}, {hi:.4f}): {format_probability(mass)}")
                csv_rows.append([event.name, f"{lo:.6f}", f"{hi:.6f}", int(env.counts[b]),
                                 f"{float(mass):.6f}"])
        if len(events) >= 2:
            a, b = events[0], events[1]
            stats = order_statistics_from_times(taus[:, 0], taus[:, 1], a.name, b.name)
            probs = (stats.p_a_first, stats.p_b_first, stats.p_tie_or_none)
            lines.append("Order statistics:")
            for label, p, hw in zip((f"P({a.name} before {b.name})", f"P({b.name} before {a.name})",
                                     "P(tie or neither)"), probs, stats.half_widths()):
                lines.append(f"  {label}: {format_probability(p)} +/- {hw:.6f}")
            overlap = envelope_overlap(envelopes[0], envelopes[1])
            lines.append(f"Envelope overlap {a.name}/{b.name}: {overlap:.6f}")
            metrics.update({"p_a_first": float(probs[0]), "p_b_first": float(probs[1]),
                            "p_tie_or_none": float(probs[2]), "overlap": overlap})

    exit_code = EXIT_OK
    if model.kernels:
        if model.scenario is None:
            raise SemanticError("[interventions] need a [scenario] section")
        induced = induced_behavior(gen, model.kernels, model.scenario, args.samples, horizon,
                                   args.seed)
        table = induced.table
        lines.append("Induced behaviour:")
        if induced.no_hit:
            lines.append("  no-hit outcomes: " + ", ".join(
                f"{p}={v} ({induced.misses[p]} runs)" for p, v in sorted(induced.no_hit.items())))
        for x, a in table.scenario.entries():
            p = table.prob(x, a)
            if p:
                lines.append(f"  {_entry(x, a)} ; {format_probability(p)}")
        if args.emit_behavior:
            directory = os.path.dirname(args.emit_behavior)
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(args.emit_behavior, "w", encoding="utf-8") as f:
                f.write(format_behavior_file(table))
            print_status(f"Behaviour written to {args.emit_behavior}")
        if args.then_glue:
            orders = enumerate_total_orders(table.scenario.parties)
            verdict = check_global_section(table, orders)
            glue_lines, _ = _glue_lines(table, orders, verdict, False)
            lines += glue_lines[1:]
            metrics.update({"gluable": int(verdict.gluable),
                            "causal_fraction": float(verdict.causal_fraction),
                            "l1_distance": float(verdict.l1_distance)})
            if not verdict.gluable:
                exit_code = EXIT_NOT_GLUABLE

    if args.use_wandb:
        import wandb
        config = {k: v for k, v in vars(args).items() if k != "handler"}
        wandb.init(project="causal-glue", config=config)
        wandb.log(metrics)
        wandb.finish()
    return _finish(lines, args, "simulate",
                   frame(csv_rows, ["event", "bin_lo", "bin_hi", "count", "mass"]), exit_code)
