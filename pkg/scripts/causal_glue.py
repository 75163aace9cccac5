#!/usr/bin/env python3
import sys
import os
import argparse
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.cli import cmd_classify, cmd_contexts, cmd_fraction, cmd_glue, cmd_simulate
from src.utils.errors import CausalGlueError
from src.utils.logging_utils import print_status, set_verbosity


def _add_common(parser):
    parser.add_argument("--strict", default=False, action="store_true",
                        help="Reject duplicate context relations and non-upward-closed valuations")
    parser.add_argument("--emit-csv", dest="emit_csv", type=str, default=None,
                        help="Write the machine-readable rows of the report to this CSV path")
    parser.add_argument("--quiet", default=False, action="store_true",
                        help="Suppress status lines and progress bars (warnings are still shown)")
    parser.add_argument("--save_results", default=False, action="store_true",
                        help="Save report, CSV and config.json under results/<command>_<timestamp>/")


def parse_args(argv=None):
    parser = argparse.ArgumentParser(
        description="Indefinite causal order as failure of gluing: contexts, classifier, "
                    "exact gluability and spin-network dynamics")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("contexts", help="Print the context poset and its Hasse diagram")
    p.add_argument("--scenario", type=str, required=True, help="Scenario file (.scn)")
    _add_common(p)
    p.set_defaults(handler=cmd_contexts)

    p = sub.add_parser("classify", help="Seven-valued classification of propositions")
    p.add_argument("--scenario", type=str, required=True, help="Scenario file (.scn)")
    p.add_argument("--family", type=str, action="append", default=None,
                   help="Context family, comma separated (default: every context)")
    p.add_argument("--prop", type=str, action="append", default=None,
                   help="Proposition to classify, e.g. \"A<B\" or \"~(A<B | B<A)\" (repeatable)")
    p.add_argument("--bind-sep", dest="bind_sep", default=False, action="store_true",
                   help="Bind atom 'sep' to the gluing verdict of the scenario's behaviour")
    _add_common(p)
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser("glue", help="Decide whether a behaviour glues over definite orders")
    p.add_argument("--scenario", type=str, required=True, help="Scenario file with a [behavior] section")
    p.add_argument("--witness", default=False, action="store_true",
                   help="Print the witness coefficients or the certificate components")
    _add_common(p)
    p.set_defaults(handler=cmd_glue)

    p = sub.add_parser("fraction", help="Causal fraction and L1 distance to the gluable set")
    p.add_argument("--scenario", type=str, required=True, help="Scenario file with a [behavior] section")
    p.add_argument("--measure", type=str, choices=["cf", "l1", "both"], default="both",
                   help="Which measure to compute")
    _add_common(p)
    p.set_defaults(handler=cmd_fraction)

    p = sub.add_parser("simulate", help="Simulate a spin-network model in parametric time")
    p.add_argument("--model", type=str, required=True, help="Model file (.model)")
    p.add_argument("--samples", type=int, default=10000, help="Number of Monte-Carlo runs")
    p.add_argument("--seed", type=int, required=True, help="Master seed (non-negative integer)")
    p.add_argument("--horizon", type=float, default=None,
                   help="Parametric-time horizon (default: 50/r0)")
    p.add_argument("--bins", type=int, default=20, help="Number of envelope histogram bins")
    p.add_argument("--state_cap", type=int, default=10000,
                   help="Maximum number of reachable configurations to explore")
    p.add_argument("--then-glue", dest="then_glue", default=False, action="store_true",
                   help="Check the induced behaviour for gluability")
    p.add_argument("--emit-behavior", dest="emit_behavior", type=str, default=None,
                   help="Write the induced behaviour in scenario-file format to this path")
    p.add_argument("--use_wandb", default=False, action="store_true",
                   help="Log order statistics and gluing measures to Weights & Biases")
    _add_common(p)
    p.set_defaults(handler=cmd_simulate)

    return parser.parse_args(argv)


def main(args):
    set_verbosity(not args.quiet)
    if getattr(args, "seed", None) is not None and args.seed < 0:
        print("error: SemanticError: --seed must be non-negative", file=sys.stderr)
        return 3

    print_status(f"causal_glue {args.command}", important=True)
    print_status("Configuration:")
    for arg, value in vars(args).items():
        if arg not in ("handler", "command"):
            print_status(f"- {arg}: {value}")

    try:
        text, exit_code = args.handler(args)
    except CausalGlueError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return e.exit_code
    sys.stdout.write(text)
    sys.stdout.flush()
    print_status("Done")
    return exit_code


if __name__ == "__main__":
    args = parse_args()
    sys.exit(main(args))
