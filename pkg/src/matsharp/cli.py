"""Command line harness: ``campaign``, ``search``, and ``eval``.

Exit codes: 0 = ran with no violations, 2 = ran and found violations,
1 = error (bad config, unreadable matrix file, ...).
"""

import argparse
import json
import sys

from .campaign import (
    CampaignConfig,
    emit_report,
    render_reports,
    run_campaign,
    run_check,
    search_counterexample,
)
from .errors import MatSharpError
from .linalg import load_matrix
from .norms import NormSpec


def _load_config(args):
    if args.config:
        try:
            with open(args.config) as fh:
                obj = json.load(fh)
        except OSError as exc:
            raise MatSharpError(f"cannot read config {args.config!r}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise MatSharpError(f"config {args.config!r} is not valid JSON: {exc}") from exc
    else:
        obj = {}
    # Flags override file values.
    if args.seed is not None:
        obj["root-seed"] = args.seed
    if args.trials is not None:
        obj["trials"] = args.trials
    if args.dim is not None:
        obj["dims"] = [args.dim]
    if args.out is not None:
        obj["output-path"] = args.out
    if args.format is not None:
        obj["output-format"] = args.format
    if args.printed_form is not None:
        obj["printed-form"] = args.printed_form
    if args.tolerance_rel is not None:
        obj["relTol"] = args.tolerance_rel
    if args.tolerance_abs is not None:
        obj["absTol"] = args.tolerance_abs
    return CampaignConfig.from_obj(obj)


def _add_common_flags(parser):
    parser.add_argument("--config", help="campaign config JSON file")
    parser.add_argument("--seed", type=int, help="override root-seed")
    parser.add_argument("--trials", type=int, help="override trials")
    parser.add_argument("--dim", type=int, help="override dims with a single dimension")
    parser.add_argument("--out", help="override output-path")
    parser.add_argument("--format", choices=("json", "csv"), help="override output-format")
    parser.add_argument("--printed-form", action=argparse.BooleanOptionalAction,
                        default=None, help="override printed-form")
    parser.add_argument("--tolerance-rel", type=float, help="override relTol")
    parser.add_argument("--tolerance-abs", type=float, help="override absTol")


def _cmd_campaign(args):
    config = _load_config(args)
    summary, reports = run_campaign(config)
    if config.output_path:
        emit_report(reports, config.output_format, config.output_path)
        print(summary.to_json())
    else:
        sys.stdout.write(render_reports(reports, config.output_format))
        print(summary.to_json(), file=sys.stderr)
    return 2 if summary.violated else 0


def _cmd_search(args):
    config = _load_config(args)
    report = search_counterexample(config, args.steps)
    text = report.to_json()
    if config.output_path:
        try:
            with open(config.output_path, "w") as fh:
                fh.write(text + "\n")
        except OSError as exc:
            raise MatSharpError(
                f"cannot write search report to {config.output_path!r}: {exc}") from exc
        print(json.dumps({"best-margin": report.best_margin,
                          "violation-found": report.violation_found,
                          "output-path": config.output_path}))
    else:
        print(text)
    return 2 if report.violation_found else 0


def _cmd_eval(args):
    if args.inequality.replace("-", "_").lower() == "bourin_uchiyama":
        if not args.function or not args.direction:
            raise MatSharpError("bourin_uchiyama needs --function and --direction")
    try:
        a_list = [load_matrix(p) for p in args.a]
        b_list = [load_matrix(p) for p in args.b] if args.b else []
    except OSError as exc:
        raise MatSharpError(f"cannot read matrix file: {exc}") from exc
    config = CampaignConfig(
        inequality_id=args.inequality,
        trials=1,
        dims=[a_list[0].shape[0]],
        m_values=[len(a_list)],
        t_grid=[args.t],
        r_grid=[args.r],
        s_grid=[args.s],
        norm_specs=[NormSpec.parse(args.norm)],
        printed_form=bool(args.printed_form) if args.printed_form is not None else True,
        functions=[args.function] if args.function else (),
        direction=args.direction,
        ensemble={"epsilon-scale": args.epsilon_scale} if args.epsilon_scale else None,
    )
    point = {"n": a_list[0].shape[0], "m": len(a_list), "t": args.t, "r": args.r,
             "s": args.s, "norm": config.norm_specs[0]}
    if args.function:
        point["f"] = args.function
    report = run_check(config, point, a_list, b_list)
    print(report.to_json())
    return 0 if report.holds else 2


def build_parser():
    parser = argparse.ArgumentParser(
        prog="matsharp",
        description="Verify matrix-mean norm inequalities on randomized campaigns.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_campaign = sub.add_parser("campaign", help="run a randomized campaign from a config")
    _add_common_flags(p_campaign)
    p_campaign.set_defaults(func=_cmd_campaign)

    p_search = sub.add_parser("search", help="hill-descent counterexample search")
    _add_common_flags(p_search)
    p_search.add_argument("--steps", type=int, default=10000, help="descent steps")
    p_search.set_defaults(func=_cmd_search)

    p_eval = sub.add_parser("eval", help="evaluate one instance from matrix JSON files")
    p_eval.add_argument("--inequality", required=True,
                        help="audenaert | bourin_uchiyama | lemma_chain | main_theorem | proof_steps")
    p_eval.add_argument("--a", action="append", required=True, metavar="FILE",
                        help="A-side matrix file (repeatable)")
    p_eval.add_argument("--b", action="append", metavar="FILE",
                        help="B-side matrix file (repeatable)")
    p_eval.add_argument("--t", type=float, default=0.5)
    p_eval.add_argument("--r", type=float, default=2.0)
    p_eval.add_argument("--s", type=float, default=1.0)
    p_eval.add_argument("--norm", default="schatten:2")
    p_eval.add_argument("--function", help="function id for bourin_uchiyama")
    p_eval.add_argument("--direction", choices=("convex", "concave"))
    p_eval.add_argument("--printed-form", action=argparse.BooleanOptionalAction, default=None)
    p_eval.add_argument("--epsilon-scale", type=float,
                        help="regularized-mean scale for PSD inputs")
    p_eval.set_defaults(func=_cmd_eval)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (MatSharpError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
