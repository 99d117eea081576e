"""Command-line verification driver.

Subcommands
    relations     defining relations / comultiplication of a representation
    invariance    linear | algebraic | bsn invariance of a model's moments
    independence  boolean | factorization | free-after-unitalization |
                  moment-reduction checks
    averaging     finite-size averaging experiment over a sweep of M
    suite         the consolidated verification battery

Exit codes
    0  every requested check passed
    1  a verification failed (residual above tolerance)
    2  configuration or I/O error (bad flags, unloadable model, ...)

Reports are written as JSON: {"version": 1, "config": {...},
"checks": [{"name", "residual", "tolerance", "verdict", "witness"?}],
"verdict": "pass"|"fail"}.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
import time

import numpy as np

from . import coaction, kernels, models, probspace, semigroup
from .kernels import BACKEND
from .partitions import canonical_partition

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2


class ConfigError(Exception):
    pass


def _check_entry(name: str, residual: float, tol: float, witness=None) -> dict:
    entry = {
        "name": name,
        "residual": float(residual),
        "tolerance": float(tol),
        "verdict": "pass" if residual <= tol else "fail",
    }
    if witness is not None:
        entry["witness"] = witness
    return entry


def _emit(config: dict, checks: list[dict], out_path: str | None) -> int:
    verdict = all(c["verdict"] == "pass" for c in checks)
    report = {
        "version": 1,
        "config": config,
        "checks": checks,
        "verdict": "pass" if verdict else "fail",
    }
    text = json.dumps(report, indent=2)
    if out_path:
        try:
            with open(out_path, "w") as fh:
                fh.write(text + "\n")
        except OSError as exc:
            print(f"error: cannot write report: {exc}", file=sys.stderr)
            return EXIT_CONFIG
    print(text)
    for c in checks:
        status = "PASS" if c["verdict"] == "pass" else "FAIL"
        print(f"[{status}] {c['name']}: residual {c['residual']:.3e} (tol {c['tolerance']:.1e})",
              file=sys.stderr)
    return EXIT_PASS if verdict else EXIT_FAIL


def _parse_rep(spec: str, n: int) -> semigroup.SemigroupRep:
    if spec == "standard":
        return semigroup.build_standard_rep(n)
    if spec.startswith("averaging:"):
        try:
            N, M = (int(v) for v in spec.split(":", 1)[1].split(","))
        except ValueError as exc:
            raise ConfigError(f"bad averaging rep spec {spec!r}; use averaging:N,M") from exc
        return semigroup.build_averaging_rep(N, M)
    raise ConfigError(f"unknown rep {spec!r}; use standard or averaging:N,M")


def _load_model(args, need_expectation: bool = False):
    truncation = getattr(args, "truncation", None)
    degree = getattr(args, "degree", None) or getattr(args, "max_len", None) or 4
    if truncation is None:
        truncation = max(degree, args.n) + 1
    try:
        model, E = models.load_model(args.model, n=args.n, truncation=truncation)
    except (ValueError, FileNotFoundError, KeyError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot load model {args.model!r}: {exc}") from exc
    if need_expectation and E is None:
        raise ConfigError(f"model {args.model!r} supplies no conditional expectation, "
                          "required by this check")
    return model, E


# ---------------------------------------------------------------------------
# subcommands


def cmd_relations(args) -> int:
    if args.n < 2:
        raise ConfigError("relations need n >= 2 (the representation is 2n-dimensional)")
    rep = _parse_rep(args.rep, args.n)
    checks = []
    if args.check in ("defining", "both"):
        rel = semigroup.check_relations(rep, args.tol)
        name, worst = rel.worst
        checks.append(_check_entry(f"relations.{rep.label}", rel.max_residual, args.tol,
                                   witness={"relation": name, "residual": worst}))
    if args.check in ("comultiplication", "both"):
        com = semigroup.comultiplication_check(rep, max(args.tol, 1e-10))
        name, worst = com.worst
        checks.append(_check_entry(f"comultiplication.{rep.label}", com.max_residual,
                                   max(args.tol, 1e-10),
                                   witness={"relation": name, "residual": worst}))
    config = {"subcommand": "relations", "n": args.n, "rep": args.rep,
              "check": args.check, "tol": args.tol, "kernel_backend": BACKEND}
    return _emit(config, checks, args.out)


def cmd_invariance(args) -> int:
    model, _ = _load_model(args)
    checks = []
    if args.condition == "linear":
        rep = _parse_rep(args.rep, model.n)
        rpt = coaction.linear_invariance_check(model, rep, args.degree, args.tol, jobs=args.jobs)
    elif args.condition == "algebraic":
        rep = _parse_rep(args.rep, model.n)
        rpt = coaction.algebraic_invariance_check(model, rep, args.degree, args.tol)
    elif args.condition == "bsn":
        rpt = coaction.bsn_invariance_check(model, args.degree, args.tol)
    else:  # pragma: no cover - argparse restricts choices
        raise ConfigError(f"unknown condition {args.condition}")
    checks.append(_check_entry(f"invariance.{args.condition}.{model.label}",
                               rpt.max_residual, args.tol,
                               witness={"worst_word": list(rpt.worst_word)}))
    config = {"subcommand": "invariance", "condition": args.condition, "model": args.model,
              "n": args.n, "degree": args.degree, "tol": args.tol,
              "rep": getattr(args, "rep", None), "kernel_backend": BACKEND}
    return _emit(config, checks, args.out)


def cmd_independence(args) -> int:
    need_e = args.check in ("factorization", "free-after-unitalization")
    model, E = _load_model(args, need_expectation=need_e)
    if args.check == "boolean":
        rpt = probspace.check_boolean_independence(model, E, args.max_len, args.tol)
    elif args.check == "factorization":
        rpt = probspace.check_factorization_property(model, E, args.max_len, args.tol)
    elif args.check == "free-after-unitalization":
        rpt = probspace.check_boolean_implies_free(model, E, args.max_len, args.tol)
    else:  # moment-reduction
        rpt = probspace.check_moment_reduction(model, args.max_len, args.max_power, args.tol)
    checks = [_check_entry(f"independence.{args.check}.{model.label}", rpt.max_residual,
                           args.tol, witness=rpt.worst_case or None)]
    config = {"subcommand": "independence", "check": args.check, "model": args.model,
              "n": args.n, "max_len": args.max_len, "tol": args.tol}
    return _emit(config, checks, args.out)


def cmd_averaging(args) -> int:
    try:
        word = tuple(int(v) for v in args.word.split(","))
        m_list = [int(v) for v in args.M_list.split(",")]
    except ValueError as exc:
        raise ConfigError(f"bad word or M list: {exc}") from exc
    n_vars = args.N + max(m_list)
    model, _ = models.load_model(args.model, n=n_vars, truncation=n_vars + 1)
    table = coaction.averaging_invariance_experiment(model, args.N, m_list, word, args.tol)
    worst_rep = max(r.rep_residual for r in table.rows)
    checks = [_check_entry("averaging.rep_structure", worst_rep, args.tol),
              {"name": "averaging.deviation_decay",
               "residual": table.rows[-1].deviation,
               "tolerance": args.tol,
               "verdict": "pass" if table.verdict else "fail",
               "witness": table.to_dict()["rows"]}]
    config = {"subcommand": "averaging", "model": args.model, "N": args.N,
              "M_list": m_list, "word": list(word), "tol": args.tol}
    return _emit(config, checks, args.out)


def cmd_suite(args) -> int:
    started = time.time()
    n_max = 3 if args.quick else 4
    degree = 4 if args.quick else 5
    tol_rel, tol_inv = 1e-12, 1e-10
    checks: list[dict] = []

    corrupt = getattr(args, "corrupt", None)

    def rep_for(n):
        rep = semigroup.build_standard_rep(n)
        if corrupt == "rep":
            bad = rep.u[0, 0].copy()
            bad[0, 0] += 0.05
            rep = rep.replace_generator(1, 1, bad)
        return rep

    def shift_for(n, unital=False):
        build = models.build_shift_unital if unital else models.build_shift_nonunital
        model, E = build(n, max(degree, n) + 1)
        if corrupt == "model":
            bad = model.x[0].copy()
            bad[1, 1] += 0.1
            model = model.replace_variable(1, bad)
        return model, E

    # semigroup relations, including the comultiplication image
    for n in range(2, n_max + 1):
        rel = semigroup.check_relations(rep_for(n), tol_rel)
        checks.append(_check_entry(f"relations.standard(n={n})", rel.max_residual, tol_rel,
                                   witness={"relation": rel.worst[0]}))
    com = semigroup.comultiplication_check(rep_for(2), tol_inv)
    checks.append(_check_entry("comultiplication.standard(n=2)", com.max_residual, tol_inv))

    # vanishing of corner products across inequivalent tuples
    worst_vanish = 0.0
    k_max = 4 if args.quick else 5
    for n in range(2, n_max + 1):
        rep = rep_for(n)
        for k in range(1, k_max + 1):
            tuples = list(itertools.product(range(1, n + 1), repeat=k))
            classes = [canonical_partition(t) for t in tuples]
            rows, cols = [], []
            for a, ta in enumerate(tuples):
                for b, tb in enumerate(tuples):
                    if classes[a] != classes[b]:
                        rows.append(ta)
                        cols.append(tb)
            if not rows:
                continue
            norms = kernels.chain_maxabs_batch(
                rep.u, rep.P,
                np.asarray(rows, dtype=np.int64) - 1,
                np.asarray(cols, dtype=np.int64) - 1)
            worst_vanish = max(worst_vanish, float(norms.max()))
    checks.append(_check_entry(f"vanishing.inequivalent_tuples(k<={k_max})", worst_vanish, tol_rel))

    # model checks
    for unital in (False, True):
        kind = "shift-unital" if unital else "shift-nonunital"
        for n in range(2, n_max + 1):
            model, E = shift_for(n, unital)
            rep = rep_for(n)
            lin = coaction.linear_invariance_check(model, rep, degree, tol_inv, jobs=args.jobs)
            checks.append(_check_entry(f"invariance.linear.{kind}(n={n})", lin.max_residual,
                                       tol_inv, witness={"worst_word": list(lin.worst_word)}))
        model, E = shift_for(3, unital)
        boo = probspace.check_boolean_independence(model, E, max_len=degree, tol=tol_inv)
        checks.append(_check_entry(f"independence.boolean.{kind}(n=3)", boo.max_residual, tol_inv))
        fac = probspace.check_factorization_property(model, E, max_len=4, tol=tol_inv)
        checks.append(_check_entry(f"independence.factorization.{kind}(n=3)", fac.max_residual, tol_inv))
        fre = probspace.check_boolean_implies_free(model, E, max_len=4, tol=tol_inv)
        checks.append(_check_entry(f"independence.free_after_unitalization.{kind}(n=3)",
                                   fre.max_residual, tol_inv))
        red = probspace.check_moment_reduction(model, max_indices=3, max_power=3, tol=tol_inv)
        checks.append(_check_entry(f"independence.moment_reduction.{kind}(n=3)", red.max_residual, tol_inv))

    # strong conditions: algebraic forces constancy, full-semigroup forces zero
    const = models.build_constant(3)
    alg_const = coaction.algebraic_invariance_check(const, rep_for(3), 4, tol_inv)
    checks.append(_check_entry("invariance.algebraic.constant(n=3)", alg_const.max_residual, tol_inv))
    model_nu, _ = shift_for(3, unital=False)
    alg_shift = coaction.algebraic_invariance_check(model_nu, semigroup.build_standard_rep(3), 2, tol_inv)
    checks.append({"name": "invariance.algebraic.shift_fails(n=3)",
                   "residual": alg_shift.max_residual, "tolerance": 0.1,
                   "verdict": "pass" if alg_shift.max_residual >= 0.1 else "fail",
                   "witness": {"worst_word": list(alg_shift.worst_word),
                               "expects": "residual >= 0.1"}})
    zero = models.build_zero(2, 2)
    bsn_zero = coaction.bsn_invariance_check(zero, 4, tol_inv)
    checks.append(_check_entry("invariance.bsn.zero(n=2)", bsn_zero.max_residual, tol_inv))
    bsn_shift = coaction.bsn_invariance_check(model_nu, 2, tol_inv)
    checks.append({"name": "invariance.bsn.shift_fails(n=3)",
                   "residual": bsn_shift.max_residual, "tolerance": 0.5,
                   "verdict": "pass" if bsn_shift.max_residual >= 0.5 else "fail",
                   "witness": {"worst_word": list(bsn_shift.worst_word)}})

    # negative control: classical coins are not boolean independent.
    # The linear-invariance failure needs the averaging representation:
    # the standard rep is a circulant and cannot separate cyclically
    # exchangeable models, and n = 2 collapses in every rep.
    iid = models.build_classical_iid(2)
    boo_iid = probspace.check_boolean_independence(iid, None, max_len=4, tol=tol_inv)
    checks.append({"name": "negative.classical_iid.boolean_fails",
                   "residual": boo_iid.max_residual, "tolerance": 1e-6,
                   "verdict": "pass" if boo_iid.max_residual > 1e-6 else "fail",
                   "witness": boo_iid.worst_case})
    iid3 = models.build_classical_iid(3)
    lin_iid = coaction.linear_invariance_check(iid3, semigroup.build_averaging_rep(1, 2), 4, tol_inv)
    checks.append({"name": "negative.classical_iid.linear_fails",
                   "residual": lin_iid.max_residual, "tolerance": 1e-6,
                   "verdict": "pass" if lin_iid.max_residual > 1e-6 else "fail",
                   "witness": {"worst_word": list(lin_iid.worst_word),
                               "rep": "averaging(N=1,M=2)"}})

    # averaging experiment
    n_vars = 1 + max((4, 8) if args.quick else (4, 8, 16, 32))
    avg_model, _ = models.build_shift_nonunital(n_vars, n_vars + 1)
    table = coaction.averaging_invariance_experiment(
        avg_model, 1, (4, 8) if args.quick else (4, 8, 16, 32), (2, 2, 1, 1, 2, 2), tol_inv)
    checks.append({"name": "averaging.deviation_decay",
                   "residual": max(r.rep_residual for r in table.rows),
                   "tolerance": tol_inv,
                   "verdict": "pass" if table.verdict else "fail",
                   "witness": table.to_dict()["rows"]})

    elapsed = time.time() - started
    config = {"subcommand": "suite", "mode": "quick" if args.quick else "full",
              "corrupt": corrupt, "elapsed_seconds": round(elapsed, 3),
              "kernel_backend": BACKEND, "jobs": args.jobs}
    return _emit(config, checks, args.out)


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="boolperm", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p, degree_flag=True):
        p.add_argument("--model", default="shift-nonunital",
                       help="builtin kind or path to a model JSON file")
        p.add_argument("--n", type=int, default=3, help="number of variables")
        p.add_argument("--truncation", type=int, default=None,
                       help="shift-model truncation (default: max(degree, n) + 1)")
        p.add_argument("--tol", type=float, default=1e-10)
        p.add_argument("--out", default=None, help="write the JSON report here")

    p_rel = sub.add_parser("relations", help="defining relations of a representation")
    p_rel.add_argument("--n", type=int, default=3)
    p_rel.add_argument("--rep", default="standard", help="standard | averaging:N,M")
    p_rel.add_argument("--check", choices=("defining", "comultiplication", "both"),
                       default="defining")
    p_rel.add_argument("--tol", type=float, default=1e-12)
    p_rel.add_argument("--out", default=None)
    p_rel.set_defaults(func=cmd_relations)

    p_inv = sub.add_parser("invariance", help="invariance of a model's joint distribution")
    p_inv.add_argument("condition", choices=("linear", "algebraic", "bsn"))
    add_common(p_inv)
    p_inv.add_argument("--degree", type=int, default=5, help="maximum word length")
    p_inv.add_argument("--rep", default="standard")
    p_inv.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p_inv.set_defaults(func=cmd_invariance)

    p_ind = sub.add_parser("independence", help="independence-style checks of a model")
    p_ind.add_argument("check", choices=("boolean", "factorization",
                                         "free-after-unitalization", "moment-reduction"))
    add_common(p_ind)
    p_ind.add_argument("--max-len", dest="max_len", type=int, default=5)
    p_ind.add_argument("--max-power", dest="max_power", type=int, default=3)
    p_ind.set_defaults(func=cmd_independence)

    p_avg = sub.add_parser("averaging", help="averaging experiment over a sweep of M")
    p_avg.add_argument("--model", default="shift-nonunital")
    p_avg.add_argument("--N", type=int, default=1, help="frozen prefix size")
    p_avg.add_argument("--M-list", dest="M_list", default="4,8,16,32")
    p_avg.add_argument("--word", default="2,2,1,1,2,2",
                       help="comma-separated word letters, values in [1, N+1]")
    p_avg.add_argument("--tol", type=float, default=1e-10)
    p_avg.add_argument("--out", default=None)
    p_avg.set_defaults(func=cmd_averaging)

    p_suite = sub.add_parser("suite", help="run the consolidated verification battery")
    mode = p_suite.add_mutually_exclusive_group()
    mode.add_argument("--quick", action="store_true", help="n <= 3, degree <= 4")
    mode.add_argument("--full", action="store_true", help="n <= 4, degree <= 5 (default)")
    p_suite.add_argument("--corrupt", choices=("rep", "model"), default=None,
                         help="fault injection: perturb a builtin rep or model first")
    p_suite.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p_suite.add_argument("--out", default=None)
    p_suite.set_defaults(func=cmd_suite)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, IndexError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
