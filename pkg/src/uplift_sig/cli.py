"""Command-line front end.

    uplift-sig test --counts 81770,5656,6391,373,85257,6231,6699,443
    uplift-sig test --input campaign.csv --format json-lines
    uplift-sig simulate --scenario fig3 --replicates 1000 --seed 7 --out fig3.csv
    uplift-sig scenarios --format csv

Exit status: 0 on success (whatever the verdicts), 2 on input errors,
3 when a statistic is degenerate for the given counts.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import warnings
from dataclasses import dataclass

from . import __version__
from .domain import CampaignPair
from .errors import DegenerateGroup, InvalidArgument, UpliftError, VarianceDegenerate
from .ingest import read_pair
from .significance import ApplicabilityPolicy, Method, TestOutcome, classical_chi_sq, run_method
from .simulation import PLOT_HEADER, ScenarioParams, builtin_scenarios, run_study, scenario_by_label, summarize

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DEGENERATE = 3

SEED_ENV = "UPLIFT_SIG_SEED"
FORMATS = ("human", "csv", "json-lines")
ALL_METHODS = tuple(m.value for m in Method)
SCENARIO_FIELDS = ("label", "n1", "n2", "k1", "k2", "pT1", "pT2", "pC1", "pC2")


class UsageError(Exception):
    pass


@dataclass
class CliConfig:
    subcommand: str
    methods: tuple[Method, ...] = tuple(Method)
    alpha: float = 0.05
    seed: int = 0
    replicates: int = 100
    out: str | None = None
    fmt: str = "human"


def _parse_methods(values) -> tuple[Method, ...]:
    if not values:
        return tuple(Method)
    chosen = []
    for value in values:
        for name in value.split(","):
            name = name.strip().lower()
            if name == "all":
                return tuple(Method)
            try:
                method = Method(name)
            except ValueError:
                raise UsageError(f"unknown method {name!r}; choose from {', '.join(ALL_METHODS)}") from None
            if method not in chosen:
                chosen.append(method)
    return tuple(chosen)


def _parse_counts(text: str) -> CampaignPair:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 8:
        raise UsageError("--counts needs eight values: n1,aT1,k1,aC1,n2,aT2,k2,aC2")
    try:
        values = [int(p) for p in parts]
    except ValueError:
        raise UsageError(f"--counts values must be whole numbers, got {text!r}") from None
    return CampaignPair.from_counts(*values)


def parse_scenario(text: str) -> ScenarioParams:
    """A built-in label, 8 comma-separated parameters, or a 9-field row with a leading label."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) == 1:
        return scenario_by_label(parts[0])
    label = "custom"
    if len(parts) == 9:
        label, parts = parts[0], parts[1:]
    if len(parts) != 8:
        raise UsageError("custom scenario needs n1,n2,k1,k2,pT1,pT2,pC1,pC2")
    try:
        sizes = [int(p) for p in parts[:4]]
        probs = [float(p[:-1]) / 100 if p.endswith("%") else float(p) for p in parts[4:]]
    except ValueError:
        raise UsageError(f"cannot parse scenario {text!r}") from None
    return ScenarioParams(*sizes, *probs, label=label)


def _resolve_seed(arg) -> int:
    if arg is not None:
        return arg
    env = os.environ.get(SEED_ENV)
    if env is None or not env.strip():
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={env!r} is not an integer") from None


def _verdict(outcome: TestOutcome, alpha: float) -> str:
    level = f"{alpha * 100:g}%"
    return f"significant at {level}" if outcome.significant(alpha) else f"not significant at {level}"


def _test_rows(pair: CampaignPair, methods, policy):
    """Yield ``(name, outcome)``; classical is run once per subgroup."""
    for method in methods:
        if method is Method.CLASSICAL_CHI_SQ:
            for label, sub in zip(pair.labels, (pair.sub1, pair.sub2)):
                yield f"classical[{label}]", classical_chi_sq((sub.a_T, sub.n), (sub.a_C, sub.k))
        else:
            yield method.value, run_method(method, pair, policy)


def _emit(lines, out):
    if out:
        with open(out, "w", newline="", encoding="utf-8") as fh:
            fh.write(lines)
    else:
        sys.stdout.write(lines)


def cmd_test(config: CliConfig, pair: CampaignPair, policy: ApplicabilityPolicy | None = None) -> int:
    policy = policy or ApplicabilityPolicy()
    rows, failure = [], None
    try:
        for name, outcome in _test_rows(pair, config.methods, policy):
            rows.append((name, outcome))
    except (DegenerateGroup, VarianceDegenerate) as exc:
        failure = exc

    buf = io.StringIO()
    if config.fmt == "human":
        buf.write(f"{'method':<14}{'statistic':>12}{'p-value':>9}{'dof':>5}  {'applicable':<11}verdict\n")
        for name, o in rows:
            buf.write(
                f"{name:<14}{o.statistic:>12.6g}{o.p_value:>9.4f}{o.dof:>5}  "
                f"{'yes' if o.applicable else 'NO':<11}{_verdict(o, config.alpha)}\n"
            )
            for note in o.notes:
                buf.write(f"{'':<14}note: {note}\n")
    elif config.fmt == "csv":
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(("method", "statistic", "p_value", "dof", "applicable", "significant", "alpha"))
        for name, o in rows:
            writer.writerow((name, repr(o.statistic), repr(o.p_value), o.dof, o.applicable, o.significant(config.alpha), config.alpha))
    else:
        for name, o in rows:
            buf.write(json.dumps({
                "method": name, "statistic": o.statistic, "p_value": o.p_value, "dof": o.dof,
                "applicable": o.applicable, "significant": o.significant(config.alpha),
                "alpha": config.alpha, "notes": list(o.notes),
            }) + "\n")
    _emit(buf.getvalue(), config.out)
    if failure is not None:
        print(f"error: {failure}", file=sys.stderr)
        return EXIT_DEGENERATE
    return EXIT_OK


def render_study(table, alpha: float) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(PLOT_HEADER)
    for row in table.rows:
        writer.writerow((row[0], repr(row[1]), *("" if p != p else repr(p) for p in row[2:])))
    buf.write(f"# label={table.label} replicates={table.b} seed={table.seed} alpha={alpha!r}\n")
    buf.write("# method,rejection_rate,ks_distance,valid,missing\n")
    for method, s in summarize(table, alpha).items():
        buf.write(f"# {method.value},{s.rejection_rate!r},{s.ks_distance!r},{s.valid},{s.missing}\n")
    return buf.getvalue()


def cmd_simulate(config: CliConfig, scenario: ScenarioParams, workers: int | None = None) -> int:
    table = run_study(scenario, config.replicates, config.seed, workers=workers)
    _emit(render_study(table, config.alpha), config.out)
    return EXIT_OK


def cmd_scenarios(config: CliConfig) -> int:
    buf = io.StringIO()
    scenarios = builtin_scenarios()
    if config.fmt == "human":
        buf.write(f"{'label':<7}{'n1':>9}{'n2':>9}{'k1':>8}{'k2':>8}{'pT1':>6}{'pT2':>6}{'pC1':>6}{'pC2':>6}\n")
        for sc in scenarios:
            probs = "".join(f"{p * 100:>5g}%" for p in (sc.pT1, sc.pT2, sc.pC1, sc.pC2))
            buf.write(f"{sc.label:<7}{sc.n1:>9}{sc.n2:>9}{sc.k1:>8}{sc.k2:>8}{probs}\n")
    elif config.fmt == "csv":
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(SCENARIO_FIELDS)
        for sc in scenarios:
            writer.writerow((sc.label, *sc.as_row()))
    else:
        for sc in scenarios:
            buf.write(json.dumps(dict(zip(SCENARIO_FIELDS, (sc.label, *sc.as_row())))) + "\n")
    _emit(buf.getvalue(), config.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="uplift-sig", description="Compare the uplifts of two campaigns.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", type=float, default=0.05, help="significance level (default 0.05)")
    common.add_argument("--out", help="write output to this file instead of stdout")

    p_test = sub.add_parser("test", parents=[common], help="run the tests on observed counts")
    source = p_test.add_mutually_exclusive_group(required=True)
    source.add_argument("--counts", help="n1,aT1,k1,aC1,n2,aT2,k2,aC2")
    source.add_argument("--input", help="aggregate or individual-level CSV file")
    p_test.add_argument("--method", action="append", help=f"one or more of {', '.join(ALL_METHODS)} (default: all)")
    p_test.add_argument("--format", choices=FORMATS, default="human")
    p_test.add_argument("--max-rate-mismatch", type=float, default=0.05,
                        help="relative tolerance on n1/k1 vs n2/k2 for netchisq1/netchisq2")

    p_sim = sub.add_parser("simulate", parents=[common], help="Monte-Carlo probability-plot study")
    p_sim.add_argument("--scenario", required=True, help="fig1..fig7, or n1,n2,k1,k2,pT1,pT2,pC1,pC2")
    p_sim.add_argument("--replicates", type=int, default=100)
    p_sim.add_argument("--seed", type=int, default=None, help=f"master seed (default ${SEED_ENV} or 0)")
    p_sim.add_argument("--workers", type=int, default=None, help="worker processes (output is identical)")
    p_sim.add_argument("--format", choices=("csv",), default="csv")

    p_sc = sub.add_parser("scenarios", parents=[common], help="list the built-in parameter rows")
    p_sc.add_argument("--format", choices=FORMATS, default="human")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    warnings.simplefilter("default")
    try:
        if not 0 < args.alpha < 1:
            raise UsageError("--alpha must lie in (0, 1)")
        config = CliConfig(subcommand=args.subcommand, alpha=args.alpha, out=args.out, fmt=args.format)
        if args.subcommand == "test":
            config.methods = _parse_methods(args.method)
            pair = _parse_counts(args.counts) if args.counts else read_pair(args.input)
            return cmd_test(config, pair, ApplicabilityPolicy(args.max_rate_mismatch))
        if args.subcommand == "simulate":
            if args.replicates < 1:
                raise UsageError("--replicates must be at least 1")
            config.replicates = args.replicates
            config.seed = _resolve_seed(args.seed)
            return cmd_simulate(config, parse_scenario(args.scenario), workers=args.workers)
        return cmd_scenarios(config)
    except (DegenerateGroup, VarianceDegenerate) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (UsageError, InvalidArgument, UpliftError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
