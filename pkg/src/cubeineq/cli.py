"""Batch front door: verifications, ratio searches, sweeps, counterexamples.

Subcommands map 1:1 onto module operations; nothing is computed here that
the library cannot do.  Output is deterministic CSV or JSON (same seed and
version => byte-identical bytes; wall time goes to stderr only).  Exit
codes: 0 = all asserted tolerances met, 1 = usage error, 2 = a verification
exceeded its tolerance.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .cube import random_function
from .inequalities import (
    INEQUALITY_IDS,
    InequalityInstance,
    SearchConfig,
    evaluate,
    random_inputs,
    rows_to_csv,
    rows_to_json,
    search_max_ratio,
    sweep,
)
from .noise import (
    symmetrized_tail_integral,
    verify_derivative_representation,
    verify_heat_representation,
)
from .rng import stream_generator
from . import counterexamples as cx
from . import quantum as qt


@dataclass
class ExperimentRecord:
    """One CLI run: parameters in, result rows out, reproducibly."""

    experiment: str
    params: dict
    seed: int
    rows: list = field(default_factory=list)
    version: str = __version__
    wall_time_s: float = 0.0

    def payload(self) -> dict:
        # wall time deliberately excluded: identical invocations must emit
        # identical bytes
        return {
            "experiment": self.experiment,
            "version": self.version,
            "seed": self.seed,
            "params": self.params,
            "rows": self.rows,
        }


def _emit(record: ExperimentRecord, args, columns=None) -> None:
    fmt = getattr(args, "format", "json")
    if fmt == "csv" and columns:
        text = rows_to_csv(record.rows, columns)
    elif fmt == "csv":
        text = rows_to_csv(record.rows, list(record.rows[0].keys()) if record.rows else [])
    else:
        text = json.dumps(record.payload(), indent=2) + "\n"
    out = getattr(args, "out", None)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"[cubeineq] {record.experiment}: {len(record.rows)} row(s), "
          f"{record.wall_time_s:.2f}s", file=sys.stderr)


def _fail(status: int, message: str) -> int:
    print(f"[cubeineq] {message}", file=sys.stderr)
    return status


# -- verify ---------------------------------------------------------------------

_VERIFY_TOL = {"heat": 1e-12, "derivative": 1e-12, "tail-integral": 1e-12,
               "qa": 1e-6, "elpf": 1e-6}


def _cmd_verify(args) -> int:
    which = args.which
    tol = args.tol if args.tol is not None else _VERIFY_TOL[which]
    rng = stream_generator(args.seed)
    rows = []
    worst = 0.0
    if which in ("heat", "derivative"):
        for k in range(args.count):
            f = random_function(args.n, rng)
            if which == "heat":
                gap = verify_heat_representation(f, args.t)
            else:
                gap = verify_derivative_representation(f, k % args.n, args.t)
            rows.append({"case": k, "n": args.n, "t": args.t, "max_discrepancy": gap})
            worst = max(worst, gap)
    elif which == "tail-integral":
        closed = symmetrized_tail_integral(args.t, args.r)
        numeric = symmetrized_tail_integral(args.t, args.r, numeric=True)
        worst = abs(closed - numeric)
        rows.append({"t": args.t, "r": args.r, "closed": closed,
                     "numeric": numeric, "max_discrepancy": worst})
    else:
        quad = qt.QuadratureRule.build(args.quad_accuracy)
        for k in range(args.count):
            f = random_function(args.n, rng, mean_zero=(which == "elpf"))
            if which == "qa":
                gap = max(qt.verify_qa_formula(f, j, quad) for j in range(args.n))
            else:
                gap = qt.verify_elpF(f, quad)
            rows.append({"case": k, "n": args.n, "max_discrepancy": gap})
            worst = max(worst, gap)
    record = ExperimentRecord("verify-" + which,
                              {"n": args.n, "t": args.t, "count": args.count, "tol": tol},
                              args.seed, rows)
    record.wall_time_s = time.perf_counter() - args._t0
    _emit(record, args)
    if worst > tol:
        return _fail(2, f"verify {which}: max discrepancy {worst:.3e} exceeds {tol:.1e}")
    return 0


# -- ratio / sweep ----------------------------------------------------------------


def _instance_from_args(args, n=None, p=None, q=None) -> InequalityInstance:
    return InequalityInstance(
        args.ineq, n=n if n is not None else args.n,
        p=p if p is not None else args.p,
        q=q if q is not None else args.q,
        a=args.a, gamma=args.gamma, t=args.t, inner=args.inner, R=args.r_components)


def _cmd_ratio(args) -> int:
    instance = _instance_from_args(args)
    if args.search == "none":
        rng = stream_generator(args.seed)
        report = evaluate(instance, random_inputs(instance, rng))
    else:
        cfg = SearchConfig(trials=args.trials,
                           ascent_steps=0 if args.search == "random" else args.ascent_steps,
                           seed=args.seed)
        report, _ = search_max_ratio(instance, cfg)
    row = {"inequality_id": instance.ineq_id, "n": instance.n, "p": instance.p,
           "q": instance.q if instance.q is not None else "",
           "a_or_gamma": args.a if args.a is not None else (args.gamma or ""),
           "t": args.t if args.t is not None else "",
           "lhs": report.lhs, "rhs": report.rhs, "ratio": report.ratio,
           "mode": report.mode, "seed": args.seed}
    record = ExperimentRecord("ratio", {"ineq": instance.ineq_id}, args.seed, [row])
    record.wall_time_s = time.perf_counter() - args._t0
    _emit(record, args)
    return 0


def _cmd_sweep(args) -> int:
    search = None
    if args.search != "none":
        search = SearchConfig(trials=args.trials,
                              ascent_steps=0 if args.search == "random" else args.ascent_steps)
    rows = sweep(args.ineq, args.n_list, args.p_list, q_list=args.q_list,
                 a=args.a, gamma=args.gamma, t=args.t, inner=args.inner,
                 R=args.r_components, search=search, seed=args.seed)
    record = ExperimentRecord("sweep", {"ineq": args.ineq}, args.seed, rows)
    record.wall_time_s = time.perf_counter() - args._t0
    from .inequalities import SWEEP_COLUMNS

    _emit(record, args, columns=SWEEP_COLUMNS)
    return 0


# -- counterexamples ----------------------------------------------------------------


def _cmd_counterexample(args) -> int:
    rows = []
    name = args.construction
    if name == "talagrand":
        for rep in cx.talagrand_sweep(args.n_list, args.p):
            rows.append({"n": "", "lhs": rep.lhs, "rhs": rep.rhs, "ratio": rep.ratio})
        for row, n in zip(rows, args.n_list):
            row["n"] = n
        curve = cx.GrowthCurve.fit(args.n_list, [r["lhs"] for r in rows])
        extra = {"lhs_fit": curve.fit_record()}
    elif name == "lamberton":
        for n in args.n_list:
            rep = cx.lamberton_ratio(n, args.s)
            rows.append({"n": n, "lhs": rep.lhs, "rhs": rep.rhs, "ratio": rep.ratio})
        extra = {}
    elif name == "riesz-above":
        for n in args.n_list:
            rep = cx.riesz_above_vector_check(n, args.p, args.s)
            rows.append({"n": n, "lhs": rep.lhs, "rhs": rep.rhs, "ratio": rep.ratio})
        extra = {}
    else:  # pisier-constant
        for n in args.n_list:
            pm = cx.pisier_min_constant(n)
            rows.append({"n": n, "minimum": pm.value, "argmin": pm.argmin})
        extra = {}
    record = ExperimentRecord("counterexample-" + name,
                              {"p": args.p, "s": args.s, **extra}, args.seed, rows)
    record.wall_time_s = time.perf_counter() - args._t0
    _emit(record, args)
    return 0


# -- quantum ----------------------------------------------------------------


def _cmd_quantum(args) -> int:
    rng = stream_generator(args.seed)
    check = args.check
    rows = []
    status = 0
    if check == "projection":
        m = 1 << args.n
        worst = 0.0
        for k in range(20):
            M = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
            PM = qt.project_Q(M)  # raises if the two implementations disagree
            idem = float(np.max(np.abs(qt.project_Q(PM.mat).mat - PM.mat)))
            worst = max(worst, idem)
            for p in (1.0, 1.5, 2.0, 3.0, np.inf):
                excess = qt.schatten_norm(PM, p) - qt.schatten_norm(M, p)
                worst = max(worst, excess)
        rows.append({"n": args.n, "max_defect": worst})
        status = 0 if worst <= 1e-10 else 2
    elif check == "rotation":
        worst = 0.0
        for theta in (0.0, 0.3, 1.0, 2.5):
            f = random_function(args.n, rng)
            T = qt.embed(f)
            RT = qt.rotate(T, theta)
            for p in (1.0, 2.0, 3.0, np.inf):
                worst = max(worst, abs(qt.schatten_norm(RT, p) - qt.schatten_norm(T, p)))
        rows.append({"n": args.n, "max_isometry_defect": worst})
        status = 0 if worst <= 1e-10 else 2
    elif check == "pisier-integral":
        quad = qt.QuadratureRule.build(args.quad_accuracy)
        defect = quad.constancy_defect()
        rows.append({"constancy_defect": defect, "c": quad.moment(0),
                     "declared_accuracy": args.quad_accuracy})
        status = 0 if defect <= args.quad_accuracy else 2
    elif check == "isometry":
        from .norms import lp_norm
        from .cube import VectorCubeFunction

        worst = 0.0
        for _ in range(10):
            f = random_function(args.n, rng)
            for p in (1.0, 1.5, 2.0, 3.0, np.inf):
                worst = max(worst, abs(qt.schatten_norm(qt.embed(f), p) - lp_norm(f, p)))
        F = VectorCubeFunction([random_function(args.n, rng) for _ in range(3)])
        from .norms import MixedNormSpec, mixed_norm

        for p in (2.0, 3.0):
            worst = max(worst, abs(qt.block_column_norm(F, p)
                                   - mixed_norm(F, MixedNormSpec.lq(p, 2))))
            worst = max(worst, abs(qt.block_diag_norm(F, p)
                                   - mixed_norm(F, MixedNormSpec.lq(p, p))))
        rows.append({"n": args.n, "max_isometry_defect": worst})
        status = 0 if worst <= 1e-10 else 2
    else:  # epi
        family = [random_function(args.n, rng) for _ in range(args.n)]
        rep = qt.epi_quantum_ratio(family, args.p)
        rows.append({"n": args.n, "p": args.p, "lhs": rep.lhs, "rhs": rep.rhs,
                     "ratio": rep.ratio})
    record = ExperimentRecord("quantum-" + check, {"n": args.n, "p": args.p},
                              args.seed, rows)
    record.wall_time_s = time.perf_counter() - args._t0
    _emit(record, args)
    if status:
        return _fail(status, f"quantum {check}: tolerance exceeded")
    return 0


# -- parser ----------------------------------------------------------------


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.replace(",", " ").split()]


def _float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.replace(",", " ").split()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cubeineq",
        description="verify identities, search inequality ratios, and reproduce "
                    "counterexamples on the Hamming cube")
    parser.add_argument("--version", action="version", version=f"cubeineq {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", default=None, help="output path (default stdout)")
        sp.add_argument("--format", choices=("json", "csv"), default="json")

    sp = sub.add_parser("verify", help="check a representation formula")
    sp.add_argument("kind", choices=("formula",))
    sp.add_argument("--which", required=True,
                    choices=("heat", "derivative", "tail-integral", "qa", "elpf"))
    sp.add_argument("--n", type=int, default=6)
    sp.add_argument("--t", type=float, default=1.0)
    sp.add_argument("--r", type=float, default=2.0, help="tail-integral exponent")
    sp.add_argument("--count", type=int, default=5)
    sp.add_argument("--tol", type=float, default=None)
    sp.add_argument("--quad-accuracy", type=float, default=1e-8)
    common(sp)
    sp.set_defaults(func=_cmd_verify)

    sp = sub.add_parser("ratio", help="evaluate or search one inequality ratio")
    sp.add_argument("--ineq", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--q", type=float, default=None)
    sp.add_argument("--a", type=float, default=None)
    sp.add_argument("--gamma", type=float, default=None)
    sp.add_argument("--t", type=float, default=None)
    sp.add_argument("--inner", choices=("scalar", "lq", "Lq"), default="scalar")
    sp.add_argument("--r-components", type=int, default=2)
    sp.add_argument("--search", choices=("none", "random", "ascent"), default="none")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--ascent-steps", type=int, default=200)
    common(sp)
    sp.set_defaults(func=_cmd_ratio)

    sp = sub.add_parser("sweep", help="grid of ratio reports")
    sp.add_argument("--ineq", required=True)
    sp.add_argument("--n-list", type=_int_list, required=True)
    sp.add_argument("--p-list", type=_float_list, required=True)
    sp.add_argument("--q-list", type=_float_list, default=None)
    sp.add_argument("--a", type=float, default=None)
    sp.add_argument("--gamma", type=float, default=None)
    sp.add_argument("--t", type=float, default=None)
    sp.add_argument("--inner", choices=("scalar", "lq", "Lq"), default="scalar")
    sp.add_argument("--r-components", type=int, default=2)
    sp.add_argument("--search", choices=("none", "random", "ascent"), default="none")
    sp.add_argument("--trials", type=int, default=60)
    sp.add_argument("--ascent-steps", type=int, default=120)
    common(sp)
    sp.set_defaults(func=_cmd_sweep)

    sp = sub.add_parser("counterexample", help="reproduce a failure construction")
    sp.add_argument("construction",
                    choices=("talagrand", "lamberton", "riesz-above", "pisier-constant"))
    sp.add_argument("--n-list", type=_int_list, required=True)
    sp.add_argument("--p", type=float, default=2.0)
    sp.add_argument("--s", type=float, default=1.5)
    common(sp)
    sp.set_defaults(func=_cmd_counterexample)

    sp = sub.add_parser("quantum", help="matrix-side verifications")
    sp.add_argument("check",
                    choices=("projection", "rotation", "pisier-integral", "isometry", "epi"))
    sp.add_argument("--n", type=int, default=4)
    sp.add_argument("--p", type=float, default=2.0)
    sp.add_argument("--quad-accuracy", type=float, default=1e-8)
    common(sp)
    sp.set_defaults(func=_cmd_quantum)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; the toolkit reserves 2 for
        # verification failures
        if exc.code not in (0, None):
            return 1
        return 0
    args._t0 = time.perf_counter()
    try:
        return args.func(args)
    except (ValueError, TypeError) as exc:
        return _fail(1, f"error: {exc}")
    except qt.QuadratureAccuracyError as exc:
        return _fail(2, f"verification failure: {exc}")


if __name__ == "__main__":
    sys.exit(main())
