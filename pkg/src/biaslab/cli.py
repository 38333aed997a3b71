"""Command-line front-end: tables, invariants, presets, certificates.

Every subcommand prints one deterministic JSON document (sorted keys,
two-space indent); `--human` adds a plain-text summary after the JSON.
Exit codes: 0 success, 1 a verification failed, 2 usage error,
3 resource guard tripped.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

from . import grouphom, numfn, obstruction
from .doubling import (FormMismatch, double, double_map, homology_pattern,
                       pi_top_lattice, tate_diagonal_check)
from .forms import evaluation_forms, fixed_and_tate
from .foxbias import (Automorphism, aut_twist, complex_of_presentation,
                      lift_chain_map, polarised_bias, preset_abelian,
                      preset_q8p, q8p_f_maps, q8p_g_maps)
from .units import (TooLarge, class_of, coset_representatives, cyclic_factors,
                    kth_powers, minus_one, product, unit_group_order,
                    units_mod)
from .unitary import lift_square

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3

_GROUP_RE = re.compile(r"^(\d+)(?:\^(\d+))?(?:x(\d+))?$")
_Q8_RE = re.compile(r"^q8x(\d+)\^3$")


class UsageError(Exception):
    pass


def parse_group_spec(text: str) -> dict:
    """`m^d`, `m^d x t`, or `q8 x p^3` into a structured description."""
    compact = text.replace(" ", "").lower()
    m = _Q8_RE.match(compact)
    if m:
        return {"kind": "q8p", "p": int(m.group(1))}
    m = _GROUP_RE.match(compact)
    if not m:
        raise UsageError(f"cannot parse group spec {text!r}")
    base, d, t = int(m.group(1)), int(m.group(2) or 1), m.group(3)
    orders = (base,) * d + ((int(t),) if t else ())
    if any(o < 2 for o in orders):
        raise UsageError("all cyclic orders must be at least 2")
    return {"kind": "abelian", "orders": orders}


def _emit(obj: dict, human: list[str], args) -> None:
    print(json.dumps(obj, sort_keys=True, indent=2))
    if args.human:
        for line in human:
            print(line)


def cmd_obstruction(args) -> int:
    spec = parse_group_spec(args.group)
    n = args.n
    if spec["kind"] == "q8p":
        if n != 2:
            raise UsageError("the q8 family is defined for n = 2")
        p = spec["p"]
        h = grouphom.homology_q8_times_abelian((p, p, p), n)
        m, r = h[0], len(h)
        d = 3
        squares = kth_powers(m, 2)
        B = obstruction.B_group(m, squares)
        BQ = obstruction.B_Q_group(m, d, n, squares)
        chi_min = 2
    else:
        orders = spec["orders"]
        inv = obstruction.invariants_abelian(orders, n)
        m, r, chi_min = inv.modulus, inv.rank, inv.chi_min
        d = len(orders)
        D = obstruction.D_abelian(orders, n)
        B = obstruction.B_group(m, D)
        try:
            BQ = obstruction.B_Q_group(m, d, n, D)
        except obstruction.HypothesisViolation:
            BQ = None
    e = numfn.e_exact(d, n)
    s = numfn.s_exact(d, n)
    obj = {"group": args.group, "n": n, "m": m, "r": r, "chi_min": chi_min,
           "e": e, "s": s, "B_order": B.order,
           "B_Q_order": BQ.order if BQ else None,
           "gamma": B.order}
    if spec["kind"] == "abelian" and d >= 2 and _is_prime(m):
        obj["gamma_prime"] = obstruction.gamma_prime(m, d, n)
    _emit(obj, [f"|B| = {B.order}, |B_Q| = "
                f"{BQ.order if BQ else 'n/a (d < 3)'}"], args)
    return EXIT_OK


def _is_prime(m: int) -> bool:
    if m < 2:
        return False
    k = 2
    while k * k <= m:
        if m % k == 0:
            return False
        k += 1
    return True


def cmd_parity(args) -> int:
    if args.d_max > 256 or args.n_max > 256:
        raise UsageError("ranges are capped at 256")
    report = numfn.parity_table_check(args.d_max, args.n_max)
    witnesses = {str(n): numfn.find_d(n)
                 for n in range(2, args.n_max + 1) if n % 2 == 0}
    obj = {"d_max": args.d_max, "n_max": args.n_max,
           "csv": report.to_csv(), "clean": report.clean,
           "e_mismatches": sorted(report.e_mismatches),
           "s_mismatches": sorted(report.s_mismatches),
           "witnesses": witnesses}
    _emit(obj, [f"clean: {report.clean}; witnesses: {witnesses}"], args)
    return EXIT_OK if report.clean else EXIT_VERIFY


def cmd_bias(args) -> int:
    preset = args.preset
    if preset[0] == "abelian":
        orders = tuple(int(x) for x in preset[1].split(","))
        m = orders[0]
        if len(orders) < 2:
            raise UsageError("the abelian preset needs at least two factors")
        C_r = complex_of_presentation(preset_abelian(orders, args.r))
        C_1 = complex_of_presentation(preset_abelian(orders, 1))
        f = lift_chain_map(C_r, C_1)
        g = lift_chain_map(C_1, C_r)
        D = obstruction.D_abelian(orders, 2)
        d = len(orders)
    elif preset[0] == "q8p":
        p = int(preset[1])
        m, d = p, 3
        C_r = complex_of_presentation(preset_q8p(p, args.r))
        C_1 = complex_of_presentation(preset_q8p(p, 1))
        f = q8p_f_maps(p, args.r, C_r, C_1)
        group = C_1.group
        x, y, a, b, c = group.generators()
        c_r = group.identity()
        for _ in range(args.r):
            c_r = group.mul(c_r, c)
        theta = Automorphism(group, [x, y, a, b, c_r])
        g = q8p_g_maps(p, args.r, C_1, theta)
        D = kth_powers(p, 2)
    else:
        raise UsageError("preset must be `abelian m1,m2,...` or `q8p p`")
    bias = polarised_bias(f, m)
    b_class = class_of(m, bias.rep, product(minus_one(m), D))
    obj = {"preset": preset, "r": args.r, "m": m,
           "bias": bias.rep, "B_class": b_class.rep,
           "B_class_trivial": b_class.is_identity()}
    if d >= 3:
        bq = class_of(m, bias.rep, product(minus_one(m), kth_powers(m, 2), D))
        obj["B_Q_class"] = bq.rep
        obj["B_Q_class_trivial"] = bq.is_identity()
    _emit(obj, [f"bias [{bias.rep}] mod {m}"], args)
    return EXIT_OK


def cmd_lift(args) -> int:
    result = lift_square(args.a, args.m, args.d, args.eps)
    ok = result.membership.is_member
    obj = {"a": args.a, "m": args.m, "d": args.d, "eps": args.eps,
           "word": result.word.to_obj(),
           "target_interleaved": result.target_interleaved,
           "product_is_unitary": ok}
    _emit(obj, [f"reduces to diag{tuple(result.target_interleaved)} "
                f"mod {args.m}; unitary over Z: {ok}"], args)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_double(args) -> int:
    spec = parse_group_spec(args.group)
    if spec["kind"] != "abelian" or len(spec["orders"]) < 2:
        raise UsageError("double presets are the abelian families")
    orders = spec["orders"]
    C_1 = complex_of_presentation(preset_abelian(orders, 1))
    D_1 = double(C_1)
    obj = {"group": args.group, "r": args.r}
    if args.verify:
        pattern = homology_pattern(D_1.complex)
        obj["homology"] = [{"torsion": list(t), "free": fr}
                           for t, fr in pattern]
        ev = evaluation_forms(pi_top_lattice(C_1).lattice, D_1.eps)
        obj["betas"] = sorted(ev.betas)
        obj["tate_invariants"] = sorted(ev.fixed.tate_factors)
    if args.r != 1:
        C_r = complex_of_presentation(preset_abelian(orders, args.r))
        D_r = double(C_r)
        h = double_map(lift_chain_map(C_r, C_1), lift_chain_map(C_1, C_r),
                       D_r, D_1)
        td = tate_diagonal_check(h)
        obj["nu"] = td.nu.data
        obj["nu_invariants"] = list(td.invariants)
    _emit(obj, ["double verified"], args)
    return EXIT_OK


def cmd_homology(args) -> int:
    spec = parse_group_spec(args.group)
    if spec["kind"] == "q8p":
        p = spec["p"]
        hs = [grouphom.homology_q8_times_abelian((p, p, p), i)
              for i in range(args.n + 1)]
    else:
        hs = [grouphom.homology_abelian(spec["orders"], i)
              for i in range(args.n + 1)]
    obj = {"group": args.group, "n": args.n,
           "homology": [list(h) for h in hs]}
    _emit(obj, [f"H_{i} = {h}" for i, h in enumerate(hs)], args)
    return EXIT_OK


def cmd_units(args) -> int:
    m = args.m
    squares = kth_powers(m, 2)
    denom = product(minus_one(m), squares)
    reps = coset_representatives(m, denom)
    obj = {"m": m, "order": unit_group_order(m),
           "cyclic_factors": list(cyclic_factors(m)),
           "squares_order": len({pow(u, 2, m) for u in units_mod(m)}),
           "pm_square_classes": list(reps)}
    _emit(obj, [f"(Z/{m})^x of order {obj['order']}, "
                f"{len(reps)} classes mod +-squares"], args)
    return EXIT_OK


def cmd_table_examples(args) -> int:
    sweep = obstruction.examples_bound_check(args.limit)
    bq65 = obstruction.B_Q_group(
        65, 3, 2, obstruction.D_abelian((65, 65, 65), 2)).order
    obj = {"limit": args.limit, "checked": sweep.checked,
           "failures": [list(f) for f in sweep.failures],
           "B_Q_65_cubed": bq65,
           "gamma_prime_5_3_2": obstruction.gamma_prime(5, 3, 2),
           "gamma_prime_2_3_2": obstruction.gamma_prime(2, 3, 2)}
    ok = not sweep.failures and bq65 == 4
    _emit(obj, [f"sweep checked {sweep.checked} square-free moduli, "
                f"{len(sweep.failures)} bound violations"], args)
    return EXIT_OK if ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    jobs_default = int(os.environ.get("BIASLAB_JOBS", "1"))
    parser = argparse.ArgumentParser(
        prog="biaslab",
        description="Exact bias and quadratic-bias invariants, doubles, "
                    "and unitary lifting certificates.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--human", action="store_true",
                        help="append a plain-text summary after the JSON")
    common.add_argument("--jobs", type=int, default=jobs_default,
                        help="parallelism hint for sweeps "
                             "(default: BIASLAB_JOBS or 1)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_parser(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    p = add_parser("obstruction", help="invariant row for a group")
    p.add_argument("--group", required=True)
    p.add_argument("--n", type=int, default=2)
    p.set_defaults(func=cmd_obstruction)

    p = add_parser("parity", help="parity tables and find_d witnesses")
    p.add_argument("--d-max", type=int, default=16)
    p.add_argument("--n-max", type=int, default=16)
    p.set_defaults(func=cmd_parity)

    p = add_parser("bias", help="polarised bias of a preset pair")
    p.add_argument("--preset", nargs=2, required=True,
                   metavar=("KIND", "ARG"))
    p.add_argument("--r", type=int, required=True)
    p.set_defaults(func=cmd_bias)

    p = add_parser("lift-square", help="integer unitary word for a^2")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--eps", type=int, default=1, choices=(1, -1))
    p.set_defaults(func=cmd_lift)

    p = add_parser("double", help="double a preset complex and verify")
    p.add_argument("--group", required=True)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=cmd_double)

    p = add_parser("homology", help="integral homology of a group")
    p.add_argument("--group", required=True)
    p.add_argument("--n", type=int, default=4)
    p.set_defaults(func=cmd_homology)

    p = add_parser("units", help="unit-group structure mod m")
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=cmd_units)

    p = add_parser("table-examples", help="counting-bound sweeps")
    p.add_argument("--limit", type=int, default=100)
    p.set_defaults(func=cmd_table_examples)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError,) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TooLarge as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except FormMismatch as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
