"""
Command-line front end: one subcommand per verification sweep.

Every run writes a JSON report (see ``REPORT_SCHEMA.md``) and exits with
0 when all assertions pass, 1 when any fails, 2 on a usage error, an
invalid characteristic, or an exceeded enumeration guard.
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
import random
import sys
import time
from fractions import Fraction
from typing import Callable

from . import __version__
from .chow import (E1, E2, H, BlowupModel, ChowClassDeg1, lemend_conclude, mul_deg1,
                   phi_iso_search, projective_bundle_count, projective_space_count)
from .construct import (build_free_tensor, mult_map_matrix, projective_points,
                        shape_separation_check, tau_injectivity_check)
from .gamma import (basis_symbol, dual_number_derivation, derivation_action, gamma_mul,
                    gamma_to_sym_matrix, monomial, pairing, pure_symbol,
                    sym_linear, sym_mul, sym_to_gamma_matrix)
from .linalg import FieldMatrix
from .multiindex import (carry_count, compositions, is_F_disjoint, multinomial,
                         multinomial_mod_p, p_valuation)
from .scalars import FieldSpec, nakayama_verify, truncated_poly_algebra
from .stab import EnumerationGuardError, brute_point_stab_line, lie_stab_line

SCHEMA_VERSION = 1

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class Report:
    def __init__(self, subcommand: str, inputs: dict):
        self.subcommand = subcommand
        self.inputs = inputs
        self.assertions: list[dict] = []
        self.results: dict = {}

    def check(self, name: str, passed: bool, witness=None, **details) -> bool:
        entry = {"name": name, "passed": bool(passed)}
        if details:
            entry["details"] = details
        if not passed:
            # a failure always carries something concrete to replay
            entry["witness"] = witness if witness is not None else details or {"name": name}
        self.assertions.append(entry)
        return passed

    @property
    def passed(self) -> bool:
        return "error" not in self.results and all(a["passed"] for a in self.assertions)

    def to_json(self, seconds: float) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "tool_version": __version__,
            "subcommand": self.subcommand,
            "inputs": self.inputs,
            "assertions": self.assertions,
            "results": self.results,
            "passed": self.passed,
            "timing": {"seconds": round(seconds, 6)},
        }


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------


def _field(p: int) -> FieldSpec:
    try:
        return FieldSpec(p)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _finite_field(p: int) -> FieldSpec:
    F = _field(p)
    if not F.is_finite:
        raise UsageError("this subcommand needs a prime characteristic")
    return F


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_verify_kummer(args, report: Report) -> None:
    for p in args.primes:
        _finite_field(p)
    cases = 0
    for p in args.primes:
        bad_val = bad_mod = None
        for k in range(1, args.max_parts + 1):
            for s in range(args.max_sum + 1):
                for parts in compositions(s, k):
                    cases += 1
                    big = multinomial(parts)
                    if bad_val is None and carry_count(parts, p) != p_valuation(big, p):
                        bad_val = {"parts": list(parts), "carries": carry_count(parts, p),
                                   "valuation": p_valuation(big, p)}
                    if bad_mod is None and multinomial_mod_p(parts, p).value != big % p:
                        bad_mod = {"parts": list(parts), "lucas": multinomial_mod_p(parts, p).value,
                                   "oracle": big % p}
        report.check(f"carry_count equals valuation (p={p})", bad_val is None, bad_val)
        report.check(f"multinomial_mod_p equals reduction (p={p})", bad_mod is None, bad_mod)
    report.results["cases"] = cases


def _random_vec(F: FieldSpec, rng: random.Random, d: int, nonzero: bool = False) -> list:
    while True:
        v = [F.random(rng) for _ in range(d)]
        if not nonzero or any(c != 0 for c in v):
            return v


def cmd_verify_gamma(args, report: Report) -> None:
    rng = random.Random(args.seed)
    for p in args.chars:
        F = _field(p)
        for d in range(1, args.max_dim + 1):
            # relations on pure symbols
            w1 = w2 = w3 = w4 = None
            for _ in range(args.samples):
                v, v2 = _random_vec(F, rng, d), _random_vec(F, rng, d)
                lam = F.random(rng)
                n, m = rng.randint(0, args.max_degree), rng.randint(0, args.max_degree)
                if w1 is None and pure_symbol(F, v, 0) != basis_symbol(F, (0,) * d):
                    w1 = {"v": [F.encode(c) for c in v]}
                vsum = [F.add(a, b) for a, b in zip(v, v2)]
                rhs = None
                for i in range(n + 1):
                    term = gamma_mul(pure_symbol(F, v, i), pure_symbol(F, v2, n - i))
                    rhs = term if rhs is None else rhs + term
                if w2 is None and pure_symbol(F, vsum, n) != rhs:
                    w2 = {"v": [F.encode(c) for c in v], "v2": [F.encode(c) for c in v2], "n": n}
                lv = [F.mul(lam, c) for c in v]
                if w3 is None and pure_symbol(F, lv, n) != pure_symbol(F, v, n).scale(F.pow(lam, n)):
                    w3 = {"v": [F.encode(c) for c in v], "lambda": F.encode(lam), "n": n}
                lhs = gamma_mul(pure_symbol(F, v, n), pure_symbol(F, v, m))
                if w4 is None and lhs != pure_symbol(F, v, n + m).scale(F.from_int(math.comb(n + m, n))):
                    w4 = {"v": [F.encode(c) for c in v], "n": n, "m": m}
            tag = f"(char={p}, d={d})"
            report.check(f"[v]_0 = 1 {tag}", w1 is None, w1)
            report.check(f"[v+v']_n = sum [v]_i [v']_(n-i) {tag}", w2 is None, w2)
            report.check(f"[lambda v]_n = lambda^n [v]_n {tag}", w3 is None, w3)
            report.check(f"[v]_n [v]_m = C(n+m, n) [v]_(n+m) {tag}", w4 is None, w4)

            for n in range(args.max_degree + 1):
                S2G, G2S = sym_to_gamma_matrix(F, n, d), gamma_to_sym_matrix(F, n, d)
                target = FieldMatrix.identity(F, S2G.nrows).scale(F.from_int(math.factorial(n)))
                ok = (G2S @ S2G) == target and (S2G @ G2S) == target
                report.check(f"canonical composites equal n! Id (char={p}, d={d}, n={n})", ok,
                             {"n": n, "d": d})

            wd = None
            for _ in range(max(1, args.samples // 10)):
                n = rng.randint(0, args.max_degree)
                u = FieldMatrix(F, [_random_vec(F, rng, d) for _ in range(d)])
                if derivation_action(u, n) != dual_number_derivation(u, n):
                    wd = {"u": u.to_json(), "n": n}
                    break
            report.check(f"derivation matches dual-number expansion {tag}", wd is None, wd)
    report.results["seed"] = args.seed


def cmd_verify_pairing(args, report: Report) -> None:
    rng = random.Random(args.seed)
    total = 0
    for p in args.chars:
        F = _field(p)
        for d in range(1, args.max_dim + 1):
            for n in range(1, args.max_degree + 1):
                witness = None
                for _ in range(args.samples):
                    phi = _random_vec(F, rng, d)
                    xs = [_random_vec(F, rng, d) for _ in range(n)]
                    prod = sym_linear(F, xs[0])
                    for x in xs[1:]:
                        prod = sym_mul(prod, sym_linear(F, x))
                    lhs = pairing(pure_symbol(F, phi, n), prod)
                    rhs = F.one
                    for x in xs:
                        rhs = F.mul(rhs, sum((F.mul(a, b) for a, b in zip(phi, x)), F.zero))
                    total += 1
                    if lhs != F(rhs):
                        witness = {"phi": [F.encode(c) for c in phi],
                                   "x": [[F.encode(c) for c in x] for x in xs]}
                        break
                report.check(f"<[phi]_n, x_1...x_n> = prod phi(x_i) (char={p}, d={d}, n={n})",
                             witness is None, witness)
                gram_ok = all(
                    pairing(basis_symbol(F, a), monomial(F, b)) == (1 if a == b else 0)
                    for a in compositions(n, d) for b in compositions(n, d))
                report.check(f"monomial bases are dual (char={p}, d={d}, n={n})", gram_ok)
    report.results["samples"] = total
    report.results["seed"] = args.seed


def cmd_verify_free_tensor(args, report: Report) -> None:
    F = _field(args.char)
    try:
        ft = build_free_tensor(args.dim, F, args.a)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report.results["tensor"] = {k: v for k, v in ft.to_json().items() if k != "x"}
    report.results["support_size"] = len(ft.x)
    lie = lie_stab_line(ft.x)
    report.results["lie_dimension"] = lie.dimension
    report.check("Lie stabilizer is the scalar line", lie.pgl_trivial,
                 {"basis": lie.to_json()["basis"]}, dimension=lie.dimension)
    if F.is_finite and not args.skip_points:
        pts = brute_point_stab_line(ft.x, F.characteristic)
        report.results["group_elements_scanned"] = pts.scanned
        report.results["point_stabilizer_order"] = pts.order
        report.check("point stabilizer is trivial mod scalars", pts.trivial,
                     {"elements": [g.to_json() for g in pts.elements]}, scanned=pts.scanned)


def cmd_verify_divprod(args, report: Report) -> None:
    F = _finite_field(args.char)
    checked = 0
    for d in range(1, args.max_dim + 1):
        ys = projective_points(F, d)
        for a in range(1, args.max_sum):
            for b in range(1, args.max_sum - a + 1):
                if not is_F_disjoint([a, b], F.characteristic):
                    continue
                witness = None
                for y in ys:
                    checked += 1
                    try:
                        mm = mult_map_matrix(y, a, b, F)
                    except AssertionError:
                        witness = {"y": list(y), "a": a, "b": b}
                        break
                    if not mm.full_column_rank:
                        witness = {"y": list(y), "a": a, "b": b, "rank": mm.rank}
                        break
                report.check(f"M_y injective (d={d}, a={a}, b={b})", witness is None, witness)
    report.results["maps_checked"] = checked
    if args.tau_a:
        tau = tau_injectivity_check(F, args.tau_dim, args.tau_a)
        report.results["tau"] = {k: v for k, v in tau.items() if k != "collisions"}
        report.check(f"tau injective on projective points (d={args.tau_dim}, a={args.tau_a})",
                     tau["injective"], {"collisions": tau["collisions"][:5]})


def cmd_verify_tannaka_shape(args, report: Report) -> None:
    for p in args.chars:
        _field(p)
    rows = []
    for p in args.chars:
        for m in range(1, args.max_m + 1):
            rep = shape_separation_check(m, p, args.w_dim)
            rows.append(rep.to_json())
            report.check(f"no symbol of both shapes (char={p}, m={m})", rep.certified,
                         rep.to_json(), q=rep.q, n=rep.n)
    report.results["checks"] = rows


def cmd_chow_phi(args, report: Report) -> None:
    try:
        model = BlowupModel(args.N, tuple(args.dims), tuple(args.degs))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    d1, d2 = model.degs
    golden = [
        ("E1.E2 = 0", mul_deg1(model, E1, E2).astuple(), (0, 0, 0, 0, 0)),
        ("E1^2 = -zeta_1", mul_deg1(model, E1, E1).block(1), (0, -1)),
        ("E2^2 = -zeta_2", mul_deg1(model, E2, E2).block(2), (0, -1)),
        ("H.E1 = deg_1 h_1", mul_deg1(model, H, E1).astuple(), (0, d1, 0, 0, 0)),
        ("H.H = H^2", mul_deg1(model, H, H).astuple(), (1, 0, 0, 0, 0)),
    ]
    for a1, c1 in itertools.product(range(1, args.bound + 1), range(args.bound + 1)):
        prod = mul_deg1(model, ChowClassDeg1(a1, 0, -c1), E2)
        golden.append((f"(a H - c E2).E2, a={a1}, c={c1}", prod.block(2), (a1 * d2, c1)))
    for name, got, want in golden:
        report.check(name, tuple(got) == want, {"got": list(got), "expected": list(want)})
    res = phi_iso_search(model, args.bound)
    report.results["search"] = res.to_json(detail=False)
    report.check("no unobstructed mixed candidate", res.all_obstructed,
                 {"unobstructed": res.unobstructed[:5]})


def cmd_count_bundle(args, report: Report) -> None:
    try:
        count = projective_bundle_count(args.a, args.m, args.q)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report.results["count"] = count
    fibred = projective_space_count(args.a - 1, args.q) * projective_space_count(args.m - 1, args.q)
    report.check("count equals |P^(a-1)| * |P^(m-1)|", count == fibred,
                 {"count": count, "product": fibred})
    if args.a != args.m:
        v = lemend_conclude(args.a, args.m, args.m, args.a)
        report.check("swapped exponents give the same count", v.equal and v.swap)


def cmd_verify_nakayama(args, report: Report) -> None:
    F = _finite_field(args.char)
    A = truncated_poly_algebra(F, args.k)
    elems = list(A.elements())
    tally = {"surjective": {}, "injective": {}}
    for rows, cols in itertools.product(range(1, args.size + 1), repeat=2):
        witness = None
        for entries in itertools.product(elems, repeat=rows * cols):
            Phi = [list(entries[i * cols:(i + 1) * cols]) for i in range(rows)]
            for mode in ("surjective", "injective"):
                rep = nakayama_verify(Phi, mode)
                tally[mode][rep.status] = tally[mode].get(rep.status, 0) + 1
                if rep.status == "fail" and witness is None:
                    witness = rep.to_json()
        report.check(f"lift inherits residue property ({rows}x{cols})", witness is None, witness)
    report.results["status_counts"] = tally
    report.results["algebra"] = A.name


# ---------------------------------------------------------------------------
# parser and driver
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=True, help="compact JSON output (default)")
    common.add_argument("--pretty", action="store_true", help="indented JSON")
    common.add_argument("--out", help="write the report to this file instead of stdout")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized sweeps")

    parser = argparse.ArgumentParser(prog="divpow", description=__doc__.strip().splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add(name: str, func: Callable, help_: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    sp = add("verify-kummer", cmd_verify_kummer, "carry count against exact multinomial valuations")
    sp.add_argument("--max-sum", type=int, default=12)
    sp.add_argument("--max-parts", type=int, default=4)
    sp.add_argument("--primes", type=_int_list, default=[2, 3, 5])

    sp = add("verify-gamma", cmd_verify_gamma, "relations, canonical composites, derivation action")
    sp.add_argument("--chars", type=_int_list, default=[0, 2, 3, 5])
    sp.add_argument("--max-dim", type=int, default=3)
    sp.add_argument("--max-degree", type=int, default=6)
    sp.add_argument("--samples", type=int, default=50)

    sp = add("verify-pairing", cmd_verify_pairing, "pure-symbol pairing formula on random samples")
    sp.add_argument("--chars", type=_int_list, default=[0, 2, 3, 5])
    sp.add_argument("--max-dim", type=int, default=3)
    sp.add_argument("--max-degree", type=int, default=4)
    sp.add_argument("--samples", type=int, default=200)

    sp = add("verify-free-tensor", cmd_verify_free_tensor, "stabilizer of the free tensor")
    sp.add_argument("--char", type=int, default=2)
    sp.add_argument("--dim", type=int, default=3)
    sp.add_argument("--a", type=_int_list, default=None, help="exponents a_1..a_(d+1)")
    sp.add_argument("--skip-points", action="store_true", help="skip the GL_d(F_p) enumeration")

    sp = add("verify-divprod", cmd_verify_divprod, "injectivity of multiplication maps and tau")
    sp.add_argument("--char", type=int, default=2)
    sp.add_argument("--max-dim", type=int, default=3)
    sp.add_argument("--max-sum", type=int, default=12)
    sp.add_argument("--tau-dim", type=int, default=2)
    sp.add_argument("--tau-a", type=_int_list, default=None)

    sp = add("verify-tannaka-shape", cmd_verify_tannaka_shape, "shape separation in degree m + q")
    sp.add_argument("--max-m", type=int, default=8)
    sp.add_argument("--chars", type=_int_list, default=[0, 2, 3])
    sp.add_argument("--w-dim", type=int, default=3)

    sp = add("chow-phi", cmd_chow_phi, "degree-2 Chow products and the automorphism obstruction")
    sp.add_argument("--N", type=int, default=10)
    sp.add_argument("--dims", type=_int_list, default=[2, 3])
    sp.add_argument("--degs", type=_int_list, default=[1, 5])
    sp.add_argument("--bound", type=int, default=3)

    sp = add("count-bundle", cmd_count_bundle, "F_q-points of a projective bundle over P^(a-1)")
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)

    sp = add("verify-nakayama", cmd_verify_nakayama, "exhaustive Nakayama check over F_p[t]/t^k")
    sp.add_argument("--char", type=int, default=2)
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--size", type=int, default=2)
    return parser


def _inputs(args) -> dict:
    skip = {"func", "json", "pretty", "out"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def run(argv: list[str] | None = None) -> tuple[int, dict | None, argparse.Namespace | None]:
    """Parse and execute; returns ``(exit_code, report, args)`` without printing the report."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse has already written usage or help to the terminal
        return (EXIT_USAGE if exc.code else EXIT_PASS), None, None
    report = Report(args.subcommand, _inputs(args))
    start = time.perf_counter()
    try:
        args.func(args, report)
    except (UsageError, EnumerationGuardError) as exc:
        report.results["error"] = str(exc)
        return EXIT_USAGE, report.to_json(time.perf_counter() - start), args
    out = report.to_json(time.perf_counter() - start)
    return (EXIT_PASS if report.passed else EXIT_FAIL), out, args


def _default(obj):
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    raise TypeError(f"not serializable: {type(obj).__name__}")


def render(report: dict, pretty: bool = False) -> str:
    if pretty:
        return json.dumps(report, sort_keys=True, indent=2, default=_default) + "\n"
    return json.dumps(report, sort_keys=True, separators=(",", ":"), default=_default) + "\n"


def main(argv: list[str] | None = None) -> int:
    code, report, args = run(argv)
    if report is None:
        return code
    text = render(report, args.pretty)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if code == EXIT_USAGE:
        print(f"error: {report['results']['error']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
