"""Command-line entry points: verify-tft, decompose, simulate, sweep.

Every command echoes a run manifest sufficient to reproduce it exactly.
JSON outputs embed the manifest; CSV outputs are accompanied by it (a
`.manifest.json` sidecar next to --out, or stderr when writing to stdout).
Seeded invocations are fully deterministic: repeating one produces
byte-identical files.  Exit codes: 0 success / all checks passed,
1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .game import (
    JointState,
    MemoryOneStrategy,
    PayoffMatrix,
    named_strategy,
    parse_strategy,
    payoff_vector,
    transition_matrix,
)
from .markov import cesaro_limit, classify, point_mass, uniform_distribution
from .moments import distributions_equal, mgf, moment, payoff_distribution
from .montecarlo import PRNG_ID, SimulationConfig, simulate
from .pressdyson import (
    BasisSpec,
    decompose,
    format_label,
    press_dyson,
    tft_exponential_identity,
    tft_power_identity,
    wsls_coefficients,
)

__all__ = ["main"]

# Pipeline accuracy for the verification commands: tighter than the module
# defaults because k-th moment checks amplify distribution error by T^k.
CESARO_TOL = 1e-13
CESARO_MAX_STEPS = 10**9

DEFAULT_H_GRID = "-2,-1,-0.5,-0.1,0.1,0.5,1,2"


def _fmt(value) -> str:
    """One CSV cell; floats carry 17 significant digits for round-tripping."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    if value is None:
        return ""
    return str(value)


def _parse_payoffs(text: str, permissive: bool = False) -> PayoffMatrix:
    parts = text.split(",")
    if len(parts) != 4:
        raise ValueError(f"--payoffs expects R,S,T,P, got {text!r}")
    r, s, t, p = (float(x) for x in parts)
    return PayoffMatrix(R=r, S=s, T=t, P=p, permissive=permissive)


def _parse_initial(text: str):
    key = text.strip().lower()
    if key == "uniform":
        return None
    try:
        return JointState[key.upper()]
    except KeyError:
        raise ValueError(
            f"--initial must be one of cc, cd, dc, dd, uniform; got {text!r}"
        ) from None


def _parse_floats(text: str) -> list[float]:
    items = [x for x in text.split(",") if x.strip() != ""]
    return [float(x) for x in items]


def _parse_basis(text: str, m: PayoffMatrix) -> BasisSpec:
    key = text.strip().lower()
    if key == "zd":
        return BasisSpec.zd(m)
    if key == "wsls4":
        return BasisSpec.wsls4(m)
    if key.startswith("monomial:"):
        return BasisSpec.monomial(m, int(key.split(":", 1)[1]))
    if key.startswith("exp:"):
        return BasisSpec.exponential(m, float(key.split(":", 1)[1]))
    raise ValueError(
        f"--basis must be zd, monomial:D, exp:h or wsls4; got {text!r}"
    )


def _payoff_dict(m: PayoffMatrix) -> dict:
    return {"R": m.R, "S": m.S, "T": m.T, "P": m.P}


def _manifest(command: str, args: argparse.Namespace, m: PayoffMatrix | None,
              parameters: dict, prng: str | None) -> dict:
    return {
        "tool": "zdlab",
        "version": __version__,
        "command": command,
        "payoffs": _payoff_dict(m) if m is not None else None,
        "parameters": parameters,
        "prng": prng,
    }


def _write_text(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _emit_json(payload: dict, out: str | None) -> None:
    _write_text(json.dumps(payload, indent=2) + "\n", out)


def _emit_csv(header: list[str], rows: list[list], out: str | None, manifest: dict) -> None:
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(cell) for cell in row])
    _write_text(buffer.getvalue(), out)
    manifest_text = json.dumps(manifest, indent=2) + "\n"
    if out is None:
        sys.stderr.write(manifest_text)
    else:
        Path(out).with_suffix(".manifest.json").write_text(manifest_text)


def cmd_verify_tft(args: argparse.Namespace) -> int:
    m = _parse_payoffs(args.payoffs)
    s1 = payoff_vector(m, 1)
    s2 = payoff_vector(m, 2)
    tft = named_strategy("tft")
    initial = _parse_initial(args.initial)
    pi0 = uniform_distribution() if initial is None else point_mass(initial)
    h_grid = _parse_floats(args.h_grid)
    if not h_grid:
        raise ValueError("--h-grid is empty")
    k_values = list(range(1, args.k_max + 1))

    if args.opponent is not None:
        opponents = [(args.opponent, parse_strategy(args.opponent))]
        prng = None
    else:
        if args.random < 1:
            raise ValueError(f"--random needs at least one opponent, got {args.random}")
        rng = np.random.Generator(np.random.PCG64(args.seed))
        opponents = [
            (f"random[{i}]", MemoryOneStrategy(tuple(rng.random(4))))
            for i in range(args.random)
        ]
        prng = PRNG_ID

    rows = []
    json_rows = []
    all_passed = True
    for label, opponent in opponents:
        M = transition_matrix(tft, opponent)
        limit = cesaro_limit(M, pi0, tol=CESARO_TOL, max_steps=CESARO_MAX_STEPS)
        pi = limit.distribution
        dev_k = [abs(moment(s1, pi, k) - moment(s2, pi, k)) for k in k_values]
        dev_h = [abs(mgf(s1, pi, h) - mgf(s2, pi, h)) for h in h_grid]
        gap = float(pi[JointState.CD] - pi[JointState.DC])
        dist_equal = distributions_equal(
            payoff_distribution(s1, pi), payoff_distribution(s2, pi), args.tol
        )
        passed = (
            limit.converged
            and dist_equal
            and abs(gap) <= args.tol
            and all(d <= args.tol for d in dev_k)
            and all(d <= args.tol for d in dev_h)
        )
        all_passed = all_passed and passed
        p = opponent.p
        rows.append(
            list(p) + list(pi) + [limit.converged, limit.unique] + dev_k + dev_h
            + [gap, dist_equal, passed]
        )
        json_row = {
            "opponent": label,
            "opponent_p": list(p),
            "pi": [float(x) for x in pi],
            "converged": limit.converged,
            "unique": limit.unique,
            "moment_deviations": {str(k): d for k, d in zip(k_values, dev_k)},
            "mgf_deviations": {format(h, "g"): d for h, d in zip(h_grid, dev_h)},
            "pi_cd_minus_pi_dc": gap,
            "distributions_equal": dist_equal,
            "passed": passed,
        }
        if not limit.unique:
            # several invariant measures exist; show which states commune
            structure = classify(M)
            json_row["chain_classes"] = [
                {"states": [JointState(i).name.lower() for i in members],
                 "recurrent": recurrent, "period": period}
                for members, recurrent, period in zip(
                    structure.classes, structure.recurrent, structure.periods
                )
            ]
        json_rows.append(json_row)

    parameters = {
        "opponent": args.opponent,
        "random": args.random,
        "seed": args.seed,
        "k_max": args.k_max,
        "h_grid": h_grid,
        "tol": args.tol,
        "initial": args.initial,
    }
    manifest = _manifest("verify-tft", args, m, parameters, prng)
    if args.format == "json":
        _emit_json({"manifest": manifest, "rows": json_rows, "all_passed": all_passed},
                   args.out)
    else:
        header = (
            ["opp_p_cc", "opp_p_cd", "opp_p_dc", "opp_p_dd",
             "pi_cc", "pi_cd", "pi_dc", "pi_dd", "converged", "unique"]
            + [f"dev_k{k}" for k in k_values]
            + [f"dev_h_{format(h, 'g')}" for h in h_grid]
            + ["pi_cd_minus_pi_dc", "dist_equal", "pass"]
        )
        _emit_csv(header, rows, args.out, manifest)
    passed_count = sum(1 for r in json_rows if r["passed"])
    print(
        f"verify-tft: {passed_count}/{len(json_rows)} opponents passed (tol {args.tol:g})",
        file=sys.stderr,
    )
    return 0 if all_passed else 1


def cmd_decompose(args: argparse.Namespace) -> int:
    m = _parse_payoffs(args.payoffs)
    strategy = parse_strategy(args.strategy)
    basis = _parse_basis(args.basis, m)
    pd = press_dyson(strategy, 1)
    result = decompose(pd, basis)
    labels = [format_label(label) for label in basis.labels]
    parameters = {"strategy": args.strategy, "basis": args.basis}
    manifest = _manifest("decompose", args, m, parameters, None)
    if args.format == "csv":
        header = ["label", "coefficient", "residual_norm", "rank", "exact"]
        rows = [
            [text, result.coefficients[label], result.residual_norm,
             result.rank, result.exact]
            for text, label in zip(labels, basis.labels)
        ]
        _emit_csv(header, rows, args.out, manifest)
    else:
        payload = {
            "manifest": manifest,
            "strategy_p": list(strategy.p),
            "press_dyson": list(pd.values),
            "basis": {"kind": basis.kind, "labels": labels},
            "coefficients": {
                text: result.coefficients[label]
                for text, label in zip(labels, basis.labels)
            },
            "residual": [float(x) for x in result.residual],
            "residual_norm": result.residual_norm,
            "rank": result.rank,
            "exact": result.exact,
        }
        _emit_json(payload, args.out)
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    m = _parse_payoffs(args.payoffs)
    s1 = parse_strategy(args.strategy1)
    s2 = parse_strategy(args.strategy2)
    cfg = SimulationConfig(
        rounds=args.rounds,
        seed=args.seed,
        initial=_parse_initial(args.initial),
        burn_in=args.burn_in,
        noise=args.epsilon,
    )
    report = simulate(s1, s2, cfg, payoffs=m, k_max=args.k_max)
    initial = args.initial.strip().lower()
    parameters = {
        "strategy1": args.strategy1,
        "strategy2": args.strategy2,
        "rounds": args.rounds,
        "seed": args.seed,
        "epsilon": args.epsilon,
        "initial": initial,
        "burn_in": args.burn_in,
        "k_max": args.k_max,
    }
    manifest = _manifest("simulate", args, m, parameters, PRNG_ID)
    payload = {
        "manifest": manifest,
        "report": {
            "state_counts": list(report.state_counts),
            "frequencies": list(report.frequencies),
            "moments": {
                f"player{p}": {str(k): v for k, v in report.moments[p].items()}
                for p in (1, 2)
            },
            "histograms": {
                f"player{p}": [list(point) for point in report.histograms[p].points]
                for p in (1, 2)
            },
            "rounds": report.rounds,
            "counted_rounds": report.counted_rounds,
            "seed": report.seed,
            "prng": report.prng,
        },
    }
    _emit_json(payload, args.out)
    if args.out is not None:
        header = ["state", "count", "frequency"]
        rows = [
            [JointState(i).name.lower(), report.state_counts[i], report.frequencies[i]]
            for i in range(4)
        ]
        buffer = io.StringIO()
        writer = csv.writer(buffer)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(cell) for cell in row])
        Path(args.out).with_suffix(".csv").write_text(buffer.getvalue(), newline="")
    return 0


def _parse_payoff_grid(text: str, base: PayoffMatrix) -> list[PayoffMatrix | str]:
    """Expand a grid spec like 'T=4.5,5.0,5.5;R=3' into payoff matrices.

    Points that cannot form even a permissive payoff matrix are kept as
    error strings so a sweep can report them without aborting.
    """
    axes: list[tuple[str, list[float]]] = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        name, _, values = chunk.partition("=")
        name = name.strip().upper()
        if name not in ("R", "S", "T", "P"):
            raise ValueError(f"unknown payoff symbol {name!r} in --payoff-grid")
        floats = _parse_floats(values)
        if not floats:
            raise ValueError(f"empty value list for {name} in --payoff-grid")
        axes.append((name, floats))
    if not axes:
        raise ValueError("empty --payoff-grid")
    points: list[PayoffMatrix | str] = []
    for combo in itertools.product(*(values for _, values in axes)):
        values = {"R": base.R, "S": base.S, "T": base.T, "P": base.P}
        values.update({name: v for (name, _), v in zip(axes, combo)})
        try:
            points.append(PayoffMatrix(permissive=True, **values))
        except ValueError as exc:
            points.append(f"{values}: {exc}")
    return points


def cmd_sweep(args: argparse.Namespace) -> int:
    modes = [args.wsls_coeffs, args.tft_k_range is not None, args.h_range is not None]
    if sum(modes) != 1:
        raise ValueError(
            "choose exactly one of --wsls-coeffs, --tft-k-range, --h-range"
        )
    base = _parse_payoffs(args.payoffs)

    if args.wsls_coeffs:
        if args.payoff_grid is None:
            raise ValueError("--wsls-coeffs requires --payoff-grid")
        points = _parse_payoff_grid(args.payoff_grid, base)
        header = ["R", "S", "T", "P", "alpha_s1", "alpha_s2", "alpha_s1s2",
                  "gamma", "residual_norm", "rank", "exact", "error"]
        rows: list[list] = []
        for point in points:
            if isinstance(point, str):
                rows.append([None] * 11 + [point])
                continue
            result = wsls_coefficients(point)
            c = result.coefficients
            rows.append(
                [point.R, point.S, point.T, point.P,
                 c[(1, 0)], c[(0, 1)], c[(1, 1)], c[(0, 0)],
                 result.residual_norm, result.rank, result.exact, None]
            )
        parameters = {"mode": "wsls-coeffs", "payoff_grid": args.payoff_grid}
    elif args.tft_k_range is not None:
        lo, _, hi = args.tft_k_range.partition(":")
        k_lo, k_hi = int(lo), int(hi or lo)
        if k_hi < k_lo or k_lo < 1:
            raise ValueError(f"empty or invalid k range {args.tft_k_range!r}")
        header = ["k", "coefficient", "max_abs_error", "error"]
        rows = []
        for k in range(k_lo, k_hi + 1):
            try:
                check = tft_power_identity(base, k)
                rows.append([k, check.coefficient, check.max_abs_error, None])
            except ValueError as exc:
                rows.append([k, None, None, str(exc)])
        parameters = {"mode": "tft-k-range", "k_range": args.tft_k_range}
    else:
        h_values = _parse_floats(args.h_range)
        if not h_values:
            raise ValueError("empty --h-range")
        header = ["h", "coefficient", "max_abs_error", "error"]
        rows = []
        for h in h_values:
            try:
                check = tft_exponential_identity(base, h)
                rows.append([h, check.coefficient, check.max_abs_error, None])
            except (ValueError, OverflowError) as exc:
                rows.append([h, None, None, str(exc)])
        parameters = {"mode": "h-range", "h_range": args.h_range}

    manifest = _manifest("sweep", args, base, parameters, None)
    if args.format == "json":
        json_rows = [
            {name: cell for name, cell in zip(header, row)} for row in rows
        ]
        _emit_json({"manifest": manifest, "rows": json_rows}, args.out)
    else:
        _emit_csv(header, rows, args.out, manifest)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zdlab",
        description="Memory-one strategy laboratory for the repeated prisoner's dilemma.",
    )
    parser.add_argument("--version", action="version", version=f"zdlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, default_format: str) -> None:
        p.add_argument("--payoffs", default="3,0,5,1", metavar="R,S,T,P",
                       help="payoff values (default 3,0,5,1)")
        p.add_argument("--out", default=None, metavar="PATH",
                       help="output file (default: stdout)")
        p.add_argument("--format", choices=("json", "csv"), default=default_format)

    p = sub.add_parser("verify-tft",
                       help="check that TFT equalises the two players' payoff "
                            "moments, MGFs and payoff distributions")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--opponent", default=None, metavar="SPEC",
                       help="a single opponent strategy")
    group.add_argument("--random", type=int, default=None, metavar="N",
                       help="number of random opponents")
    p.add_argument("--seed", type=int, default=0, help="seed for --random")
    p.add_argument("--k-max", type=int, default=6, dest="k_max")
    p.add_argument("--h-grid", default=DEFAULT_H_GRID, dest="h_grid")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--initial", default="uniform",
                   choices=("cc", "cd", "dc", "dd", "uniform"))
    add_common(p, "csv")
    p.set_defaults(func=cmd_verify_tft)

    p = sub.add_parser("decompose",
                       help="decompose a strategy's Press-Dyson vector over a basis")
    p.add_argument("strategy", metavar="STRATEGY")
    p.add_argument("--basis", default="zd",
                   help="zd | monomial:D | exp:h | wsls4 (default zd)")
    add_common(p, "json")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("simulate", help="seeded round-by-round simulation")
    p.add_argument("strategy1", metavar="STRATEGY1")
    p.add_argument("strategy2", metavar="STRATEGY2")
    p.add_argument("--rounds", type=int, default=10**6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epsilon", type=float, default=0.0,
                   help="trembling-hand noise mixed into both strategies")
    p.add_argument("--initial", default="uniform",
                   choices=("cc", "cd", "dc", "dd", "uniform"))
    p.add_argument("--burn-in", type=int, default=0, dest="burn_in",
                   help="simulated rounds discarded from statistics (default 0)")
    p.add_argument("--k-max", type=int, default=6, dest="k_max")
    add_common(p, "json")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="tabulate identities over a grid")
    p.add_argument("--wsls-coeffs", action="store_true", dest="wsls_coeffs",
                   help="WSLS basis coefficients over a payoff grid")
    p.add_argument("--payoff-grid", default=None, dest="payoff_grid",
                   metavar="SPEC", help="e.g. 'T=4.5,5.0,5.5;R=3'")
    p.add_argument("--tft-k-range", default=None, dest="tft_k_range",
                   metavar="A:B", help="power-identity check for k in A..B")
    p.add_argument("--h-range", default=None, dest="h_range", metavar="LIST",
                   help="exponential-identity check on listed h values")
    add_common(p, "csv")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, OverflowError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
