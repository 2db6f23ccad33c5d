"""Command-line front end: ``hardy-forge <command> [options]``.

Every command prints (or writes with ``--output``) a report
``{"config", "results", "summary"}``.  Exit status is 0 when every check
passed, 1 when any failed and 2 for an invalid invocation.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
import time
from fractions import Fraction

from . import combinatorics as comb
from . import trigpoly as tp
from .exact import GaussianRational
from .inequalities import InequalityId, check, random_suite, sharpness_sweep, default_beta_grid, DEFAULT_N_GRID
from .lattice import FinSeq, parseval_bridge, side_condition, side_condition_oracle
from .report import build_report, emit_csv, emit_json, jsonable, write_atomic
from .spectral import DEFAULT_TOL, extrapolate, sweep

DEFAULT_SEED = 20240601
THREADS_ENV = "HARDY_FORGE_THREADS"


class ConfigError(ValueError):
    pass


def resolve_threads(flag: int | None) -> int:
    if flag is not None:
        if flag < 1:
            raise ConfigError("--threads must be >= 1")
        return flag
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {env!r}") from None
        if n < 1:
            raise ConfigError(f"{THREADS_ENV} must be >= 1")
        return n
    return os.cpu_count() or 1


def _int_list(text: str) -> list[int]:
    try:
        return [int(float(x)) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _ident(args) -> InequalityId:
    # flags override parameters embedded in the id string
    text = args.id
    extra = [f"{p}={v}" for p, v in (("k", args.k), ("m", args.m)) if v is not None]
    if extra:
        text += ("," if ":" in text else ":") + ",".join(extra)
    try:
        return InequalityId.parse(text)
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from None


# commands: each returns (config, results, passed, failed[, extra summary])


def cmd_constants(args):
    if args.k < 1:
        raise ConfigError("--k must be >= 1")
    rows = comb.table_rows(args.k)
    for r in rows:
        r["printed_agrees"] = None if r["gamma"] is None else r["gamma"] == r["gamma_printed"]
    return {"k": args.k}, rows, len(rows), 0


def cmd_identity(args):
    if args.k_max < 1:
        raise ConfigError("--k-max must be >= 1")
    rows, ok, bad = [], 0, 0
    for k in range(1, args.k_max + 1):
        rep = comb.verify_identity_61(k)
        row = {
            "k": k,
            "identity": rep.passed,
            "gamma_1_closed_form": comb.gamma(k, 1) == Fraction((2 * k - 1) ** 2, 4),
            "xi_closed_form": comb.xi(k, k - 1) == -k * (k + 1),
            "alpha_kk_zero": comb.alpha(k, k) == 0,
            "counterexamples": [{"i": c.i, "lhs": c.lhs, "rhs": c.rhs} for c in rep.counterexamples],
        }
        row["passed"] = all(row[key] for key in ("identity", "gamma_1_closed_form", "xi_closed_form", "alpha_kk_zero"))
        ok += row["passed"]
        bad += not row["passed"]
        rows.append(row)
    return {"k_max": args.k_max}, rows, ok, bad


_LEMMAS = ("31", "32", "33", "35", "36")


def _lemma_rows(which: str, trials: int, seed: int, k_max: int):
    rows = []
    for t in range(trials):
        rng = random.Random(f"{seed}:{which}:{t}")
        u = tp.random_poly(rng)
        lo_k = 2 if which in ("35", "36") else 1
        k = rng.randint(lo_k, max(lo_k, k_max))
        if which == "31":
            rep = tp.verify_lemma31(u, k)
            rows.append({"lemma": which, "trial": t, "k": k, "passed": rep.equal, "lhs": rep.lhs, "rhs": rep.rhs})
            continue
        if which == "32":
            rep = tp.verify_lemma32(tp.project_zero_average(u))
        elif which == "33":
            rep = tp.verify_lemma33(tp.project_zero_average(u), k)
        elif which == "35":
            rep = tp.verify_lemma35(tp.project_weighted_zero_average(u, k), k)
        else:
            rep = tp.verify_lemma36(tp.project_zero_average(u), k)
        rows.append(
            {"lemma": which, "trial": t, "k": k, "passed": rep.passed, "lhs": rep.lhs, "rhs": rep.rhs, "detail": rep.detail}
        )
    return rows


def _eq_rows(seed: int, random_pairs: int):
    rows = []
    for n in range(-10, 11):
        for m in range(0, 7):
            for k in range(1, 7):
                for rep in tp.verify_eqs_63_65(n, m, k):
                    rows.append({"lemma": rep.name, "trial": None, "k": k, "passed": rep.equal, "lhs": rep.lhs, "rhs": rep.rhs})
    rng = random.Random(f"{seed}:binomial")
    for t in range(random_pairs):
        k, n = rng.randint(1, 15), rng.randint(-50, 50)
        rows.append({"lemma": f"binomial[k={k},n={n}]", "trial": t, "k": k, "passed": comb.verify_binomial_67_68(k, n)})
    return rows


def cmd_lemma(args):
    if args.trials < 1 or args.k_max < 1:
        raise ConfigError("--trials and --k-max must be >= 1")
    names = list(_LEMMAS) + ["eqs"] if args.which == "all" else [args.which]
    rows = []
    for name in names:
        if name == "eqs":
            rows.extend(_eq_rows(args.seed, 100))
        else:
            rows.extend(_lemma_rows(name, args.trials, args.seed, args.k_max))
    ok = sum(bool(r["passed"]) for r in rows)
    config = {"which": args.which, "trials": args.trials, "k_max": args.k_max, "seed": args.seed}
    return config, rows, ok, len(rows) - ok


def random_exact_sequence(rng: random.Random, lo: int = -20, hi: int = 20, height: int = 20) -> FinSeq:
    a = rng.randint(lo, hi)
    b = rng.randint(a, hi)

    def draw():
        return Fraction(rng.randint(-height, height), rng.randint(1, height))

    return FinSeq(a, [GaussianRational(draw(), draw()) for _ in range(a, b + 1)], True)


def cmd_parseval(args):
    if args.trials < 1 or args.k_max < 1 or args.m_max < 1:
        raise ConfigError("--trials, --k-max and --m-max must be >= 1")
    rows = []
    for t in range(args.trials):
        rng = random.Random(f"{args.seed}:parseval:{t}")
        u = random_exact_sequence(rng, -args.support, args.support)
        if rng.random() < 0.5:
            # half of the draws get u(0) = 0 so the negative-power bridges run too
            u = FinSeq(u.lo, [GaussianRational() if n == 0 else v for n, v in u.items()], True)
        k, m = rng.randint(1, args.k_max), rng.randint(1, args.m_max)
        for rep in parseval_bridge(u, k=k, m=m):
            rows.append({"trial": t, "check": rep.name, "passed": rep.equal})
        if not u(0):
            for kk in range(1, 2 * m + 1):
                same = side_condition(u, m, kk) == side_condition_oracle(u, m, kk)
                rows.append({"trial": t, "check": f"side_condition_oracle[m={m},k={kk}]", "passed": same})
        # zero prefix on N0: the side condition has to vanish
        v = FinSeq(u.lo, [v if n >= 2 * m else GaussianRational() for n, v in u.items()], True)
        for kk in range(1, 2 * m + 1):
            rows.append({"trial": t, "check": f"side_condition_zero[m={m},k={kk}]", "passed": side_condition(v, m, kk) == 0})
    ok = sum(r["passed"] for r in rows)
    config = {"trials": args.trials, "k_max": args.k_max, "m_max": args.m_max, "support": args.support, "seed": args.seed}
    return config, rows, ok, len(rows) - ok


def cmd_verify(args, threads):
    ident = _ident(args)
    config = {"id": ident.label(), "seed": args.seed}
    if args.input:
        import json

        try:
            with open(args.input, encoding="utf-8") as fh:
                u = FinSeq.from_json(json.load(fh))
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise ConfigError(f"cannot read {args.input}: {exc}") from None
        rep = check(ident, u)
        row = {
            "id": ident.label(),
            "admissible": rep.admissible,
            "detail": rep.detail,
            "lhs": rep.lhs,
            "rhs": rep.rhs,
            "margin": rep.margin,
            "rhs_terms": [{"label": lab, "coefficient": c, "moment": mom} for lab, c, mom in rep.rhs_terms],
            "passed": rep.passed,
        }
        config["input"] = os.path.basename(args.input)
        return config, [row], int(rep.passed), int(not rep.passed)
    if args.trials < 1:
        raise ConfigError("--trials must be >= 1")
    window = tuple(args.window) if args.window else None
    if window and window[0] > window[1]:
        raise ConfigError("--window needs LO <= HI")
    try:
        suite = random_suite(ident, args.trials, args.seed, window, threads)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    config.update({"trials": args.trials, "window": list(window) if window else None})
    failed = len({f["trial"] for f in suite.failures})
    return config, [suite.to_json()], args.trials - failed, failed


def cmd_sharpness(args):
    if args.id not in ("cor22", "cor24"):
        raise ConfigError("--id must be cor22 or cor24")
    if args.k is None or args.k < 1:
        raise ConfigError("--k must be >= 1")
    betas = args.betas if args.betas else default_beta_grid(args.k, args.beta_depth)
    Ns = args.N if args.N else list(DEFAULT_N_GRID)
    try:
        rows = sharpness_sweep(args.id, args.k, betas, Ns)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    target = (2 * args.k - 1) ** 2 / 4
    out = [r.to_json() for r in rows]
    ok = sum(r.quotient >= target - 1e-9 for r in rows)
    config = {"id": args.id, "k": args.k, "betas": betas, "N": Ns}
    return config, out, ok, len(rows) - ok


def cmd_spectrum(args, threads):
    ident = _ident(args)
    Ns = args.N if args.N else [100, 1000, 10000]
    if args.tol <= 0:
        raise ConfigError("--tol must be positive")
    try:
        rows = sweep(ident, Ns, args.tol, threads, args.method)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    out, ok, bad = [], 0, 0
    prev = None
    for r in rows:
        slack = args.tol * max(1.0, r.paper_constant)
        floor_ok = r.lambda_min >= r.paper_constant - slack
        mono_ok = prev is None or r.lambda_min <= prev * (1 + 1e-8) + slack
        prev = r.lambda_min
        d = r.to_json()
        d.update({"above_floor": floor_ok, "monotone": mono_ok})
        ok += floor_ok and mono_ok
        bad += not (floor_ok and mono_ok)
        out.append(d)
    extra = {"extrapolation": extrapolate(rows)} if args.extrapolate and len(rows) >= 2 else {}
    config = {"id": ident.label(), "N": Ns, "tol": args.tol, "method": args.method}
    return config, out, ok, bad, extra


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--threads", type=int, default=None, help=f"default: ${THREADS_ENV}, else CPU count")
    common.add_argument("--output", "-o", default=None, help="write the report here (atomically) instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--timing", action="store_true", help="record wall_ms (breaks byte-identical reruns)")

    p = argparse.ArgumentParser(prog="hardy-forge", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("constants", parents=[common], help="xi/alpha/beta/gamma table for one k")
    s.add_argument("--k", type=int, required=True)

    s = sub.add_parser("identity", parents=[common], help="combinatorial identity and closed forms up to k-max")
    s.add_argument("--k-max", type=int, default=100)

    s = sub.add_parser("lemma", parents=[common], help="exact Fourier-side lemma checks")
    s.add_argument("--which", choices=_LEMMAS + ("eqs", "all"), default="all")
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--k-max", type=int, default=5)

    s = sub.add_parser("parseval", parents=[common], help="exact lattice/Fourier bridge checks")
    s.add_argument("--trials", type=int, default=200)
    s.add_argument("--k-max", type=int, default=5)
    s.add_argument("--m-max", type=int, default=2)
    s.add_argument("--support", type=int, default=20)

    for name, helptext in (("verify", "margins of one inequality"), ("spectrum", "truncated minimal eigenvalues")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("--id", required=True, help="e.g. cor24 or thm28_even:m=2,k=4")
        s.add_argument("--k", type=int, default=None)
        s.add_argument("--m", type=int, default=None)
        if name == "verify":
            s.add_argument("--trials", type=int, default=1000)
            s.add_argument("--window", type=int, nargs=2, metavar=("LO", "HI"))
            s.add_argument("--input", help="FinSeq JSON file; checks that one sequence instead of random draws")
        else:
            s.add_argument("--N", type=_int_list, default=None, help="comma-separated, increasing")
            s.add_argument("--tol", type=float, default=DEFAULT_TOL)
            s.add_argument("--method", choices=("difference", "banded"), default="difference")
            s.add_argument("--extrapolate", action="store_true", help="fit c0 + c1/log N (an estimate only)")

    s = sub.add_parser("sharpness", parents=[common], help="quotients of the sharpness test family")
    s.add_argument("--id", required=True, choices=("cor22", "cor24"))
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--beta-depth", type=int, default=12, help="beta = (1-2k)/2 - 2^-j, j = 1..depth")
    s.add_argument("--betas", type=_float_list, default=None)
    s.add_argument("--N", type=_int_list, default=None)
    return p


def run(args) -> tuple[int, str]:
    threads = resolve_threads(args.threads)
    t0 = time.perf_counter()
    cmd = args.command
    if cmd == "constants":
        res = cmd_constants(args)
    elif cmd == "identity":
        res = cmd_identity(args)
    elif cmd == "lemma":
        res = cmd_lemma(args)
    elif cmd == "parseval":
        res = cmd_parseval(args)
    elif cmd == "verify":
        res = cmd_verify(args, threads)
    elif cmd == "sharpness":
        res = cmd_sharpness(args)
    else:
        res = cmd_spectrum(args, threads)
    config, results, ok, bad, *extra = res
    wall = round((time.perf_counter() - t0) * 1000, 3) if args.timing else None
    report = build_report({"command": cmd, **config}, results, ok, bad, wall)
    for e in extra:
        report["summary"].update(jsonable(e))
    if args.format == "csv":
        text = emit_csv(report["results"])
    else:
        text = emit_json(report)
    return (1 if bad else 0), text


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        status, text = run(args)
    except ConfigError as exc:
        print(f"hardy-forge: error: {exc}", file=sys.stderr)
        return 2
    if args.output:
        write_atomic(args.output, text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
