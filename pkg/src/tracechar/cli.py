"""Command-line experiment runner.

Every subcommand writes a CSV table (``--out``, default stdout) whose first
lines are ``#`` comments carrying the version, the full configuration, the
seed and the worker count, and optionally a JSON summary (``--json``) listing
every check with pass/fail and a witness.  The exit code is 0 iff every
check passed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .characters import PrincipalCharacterError, build_lfunction, chi as make_chi
from .ffield import AdditiveCharacter, gf
from .fpoly import BudgetExceeded
from .kexpr import KExprError, eval_k

SUMMARY_SCHEMA = "tracechar.summary/1"


# -- result plumbing ------------------------------------------------------------

@dataclass
class Report:
    name: str
    columns: list[str]
    rows: list[list] = field(default_factory=list)
    checks: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def check(self, label: str, ok: bool, **witness) -> bool:
        entry = {"name": label, "pass": bool(ok)}
        if not ok:
            entry["witness"] = {k: _jsonable(v) for k, v in witness.items()}
        self.checks.append(entry)
        return ok

    @property
    def passed(self) -> bool:
        return all(c["pass"] for c in self.checks)


def _jsonable(v):
    if isinstance(v, (int, float, str, bool)) or v is None:
        return v
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    return str(v)


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, complex):
        return f"{v.real!r}{v.imag:+}j"
    return str(v)


def config_of(args: argparse.Namespace) -> dict:
    skip = {"func", "out", "json"}
    return {k: _jsonable(v) for k, v in sorted(vars(args).items()) if k not in skip}


def render_csv(report: Report, args: argparse.Namespace) -> str:
    buf = io.StringIO()
    cfg = config_of(args)
    buf.write(f"# tracechar {__version__} {report.name}\n")
    buf.write(f"# config: {json.dumps(cfg, sort_keys=True)}\n")
    buf.write(f"# seed: {getattr(args, 'seed', None)}\n")
    buf.write(f"# workers: {getattr(args, 'workers', 1)}\n")
    for note in report.notes:
        buf.write(f"# {note}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(report.columns)
    for row in report.rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def summary_of(report: Report, args: argparse.Namespace) -> dict:
    return {
        "schema": SUMMARY_SCHEMA,
        "version": __version__,
        "experiment": report.name,
        "config": config_of(args),
        "pass": report.passed,
        "checks": report.checks,
        **({"extra": _jsonable(report.extra)} if report.extra else {}),
    }


# -- argument helpers -------------------------------------------------------------

def parse_range(text: str) -> list[int]:
    """"5", "1..14" or "2,4,8"."""
    out: list[int] = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            a, b = part.split("..")
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    if not out:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return out


def parse_ints(text: str) -> list[int]:
    return [int(t) for t in str(text).replace("[", "").replace("]", "").split(",") if t.strip()]


def k_value(text: str, q: int, n: int | None = None, **env) -> int:
    names = {"q": q, **env}
    if n is not None:
        names["n"] = n
    k = eval_k(text, **names)
    return k


def field_of(q: int):
    try:
        return gf(q)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


class UsageError(Exception):
    pass


# -- subcommands ------------------------------------------------------------------

def cmd_charsum(args) -> Report:
    from .sums import char_sum, prop_crit_rhs
    from .gcdsum import gcd_qd

    spec = field_of(args.q)
    q = spec.q
    rep = Report("charsum", ["q", "n", "k", "weight", "psi", "re", "im", "abs", "bound_weil",
                             "bound_cor", "elapsed_ms", "ratio", "prop_rhs"])
    if args.weight == "prime":
        rep.notes.append("exploratory: sum restricted to irreducibles, no bound asserted")
    for n in parse_range(args.n):
        k = k_value(args.k, q, n)
        ch = make_chi(spec, k, args.psi)
        rec = char_sum(ch, n, args.weight, args.workers)
        bw, bc = "", ""
        if args.weight == "lambda":
            bw = k * q ** (n / 2)
            bc = q ** (n / 2) * gcd_qd(k, q, n)
            rep.check(f"weil_bound n={n}", rec.abs <= bw + 1e-9, n=n, value=rec.abs, bound=bw)
            rep.check(f"cor_bound n={n}", rec.abs <= bc + 1e-9, n=n, value=rec.abs, bound=bc)
        elif args.weight == "unit" and k < 10 ** 6:
            bw = math.comb(k, n) * q ** (n / 2) if n <= k else 0.0
            rep.check(f"weil_unit n={n}", rec.abs <= bw + 1e-9, n=n, value=rec.abs, bound=bw)
        rhs = prop_crit_rhs(k, q, n).value if n >= 2 else ""
        elapsed = 0 if args.no_timing else round(rec.elapsed * 1000, 3)
        rep.rows.append([q, n, k, args.weight, args.psi, rec.value.real, rec.value.imag, rec.abs,
                         bw, bc, elapsed, rec.abs / q ** n, rhs])
    return rep


def cmd_primesum(args) -> Report:
    from .sums import prime_sum_field, prime_sum_poly
    from .gcdsum import gcd_qd

    spec = field_of(args.q)
    q = spec.q
    rep = Report("primesum", ["q", "n", "k", "psi", "poly_re", "poly_im", "field_re", "field_im",
                              "abs", "gcd", "bound_cor"])
    for n in parse_range(args.n):
        k = k_value(args.k, q, n)
        ch = make_chi(spec, k, args.psi)
        poly = prime_sum_poly(ch, n)
        fld = prime_sum_field(k, ch.psi, n)
        g = gcd_qd(k, q, n)
        bound = q ** (n / 2) * g
        rep.check(f"field_equals_poly n={n}", poly == fld, n=n, poly=poly, field=fld)
        rep.check(f"cor_bound n={n}", abs(poly) <= bound + 1e-9, n=n, value=abs(poly), bound=bound)
        pv, fv = complex(poly), complex(fld)
        rep.rows.append([q, n, k, args.psi, pv.real, pv.imag, fv.real, fv.imag, abs(pv), g, bound])
    return rep


def random_ks(seed: int, trials: int, bits: int) -> list[int]:
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    out = []
    for _ in range(trials):
        k = int.from_bytes(rng.bytes((bits + 7) // 8), "big") % (1 << bits)
        out.append(max(k, 1))
    return out


def cmd_symcheck(args) -> Report:
    from .sums import prime_sum_field, prime_sum_poly_fast
    from .gcdsum import gcd_qd

    spec = field_of(args.q)
    q = spec.q
    psi = AdditiveCharacter(spec, args.psi)
    rep = Report("symcheck", ["q", "n", "trial", "k", "gcd", "re", "im", "abs", "bound_cor", "pass"])
    ks = random_ks(args.seed, args.trials, args.bits)
    passed = 0
    total = 0
    for n in parse_range(args.n):
        for t, k in enumerate(ks):
            g = gcd_qd(k, q, n)
            a = prime_sum_poly_fast(make_chi(spec, k, args.psi), n)
            b = prime_sum_poly_fast(make_chi(spec, g, args.psi), n)
            c = prime_sum_field(k, psi, n)
            bound = q ** (n / 2) * g
            ok = a == b and a == c and abs(a) <= bound + 1e-9
            total += 1
            passed += ok
            rep.check(f"symmetry n={n} trial={t}", ok, n=n, k=k, gcd=g, poly_k=a, poly_gcd=b, field=c)
            v = complex(a)
            rep.rows.append([q, n, t, k, g, v.real, v.imag, abs(v), bound, ok])
    rep.extra["passed"] = f"{passed}/{total}"
    return rep


def cmd_weilcheck(args) -> Report:
    from .sums import prime_sum_poly

    spec = field_of(args.q)
    q = spec.q
    rep = Report("weilcheck", ["q", "k", "psi", "d_chi", "n", "lambda_sum_re", "lambda_sum_im",
                               "minus_s_n_re", "minus_s_n_im", "abs", "weil_bound"])
    for k in parse_range(args.k):
        for c in range(1, q):
            ch = make_chi(spec, k, c)
            L = build_lfunction(ch)
            d = L.degree
            rep.check(f"degree k={k} psi={c}", d <= k and L.termination_ok, k=k, degree=d)
            for r in L.roots():
                m = abs(r)
                ok = abs(m - 1) <= 1e-6 or abs(m - math.sqrt(q)) <= 1e-6
                rep.check(f"root_modulus k={k} psi={c}", ok, k=k, modulus=m)
            ns = parse_range(args.n)
            s = L.inverse_root_power_sums_exact(max(ns))
            for n in ns:
                v = prime_sum_poly(ch, n)
                bound = q ** (n / 2) * d
                rep.check(f"newton n={n} k={k} psi={c}", v == -s[n - 1], n=n, direct=v, newton=-s[n - 1])
                rep.check(f"weil n={n} k={k} psi={c}", abs(v) <= bound + 1e-9, n=n, value=abs(v), bound=bound)
                cv, sv = complex(v), -complex(s[n - 1])
                rep.rows.append([q, k, c, d, n, cv.real, cv.imag, sv.real, sv.imag, abs(cv), bound])
    return rep


def cmd_lfunc(args) -> Report:
    spec = field_of(args.q)
    k = k_value(args.k, spec.q)
    ch = make_chi(spec, k, args.psi)
    try:
        L = build_lfunction(ch)
    except PrincipalCharacterError as exc:
        raise UsageError(str(exc)) from None
    rep = Report("lfunc", ["n", "re", "im"])
    for n, c in enumerate(L.coeffs):
        rep.rows.append([n, c.real, c.imag])
    coeffs = [str(x) for x in L.exact[: L.degree + 1]]
    rep.notes.append("coefficients: " + ",".join(coeffs))
    rep.notes.append(f"degree: {L.degree}")
    rep.extra.update(degree=L.degree, coefficients=coeffs)
    rep.check("degree_below_modulus", L.degree <= k, degree=L.degree)
    rep.check("vanishes_at_modulus_degree", L.termination_ok)
    return rep


def cmd_sieve(args) -> Report:
    from .sums import DegreeSet, sieve_count

    spec = field_of(args.q)
    rep = Report("sieve", ["q", "n", "S", "dp", "brute", "F_at_1_over_q", "bound"])
    for n in parse_range(args.n):
        S = DegreeSet.of(n, [d for d in parse_ints(args.S) if d <= n])
        res = sieve_count(spec, n, S)
        rep.check(f"dp_equals_brute n={n}", res.dp == res.brute, n=n, dp=res.dp, brute=res.brute)
        rep.check(f"explicit_bound n={n}", res.bound_ok, n=n, dp=res.dp, bound=res.bound)
        rep.rows.append([spec.q, n, " ".join(map(str, S.sorted())), res.dp, res.brute, res.F_at, res.bound])
    return rep


def cmd_mvcheck(args) -> Report:
    from .sums import DegreeSet, exact_sum, mv_bound_terms, mv_decompose

    spec = field_of(args.q)
    q = spec.q
    rep = Report("mvcheck", ["q", "n", "k", "S", "smooth", "rough", "total", "A1", "A2", "remainder",
                             "bound", "rigorous", "kappa"])
    for n in parse_range(args.n):
        k = k_value(args.k, q, n)
        ch = make_chi(spec, k, args.psi)
        S = DegreeSet.of(n, [d for d in parse_ints(args.S) if d <= n])
        sm, ro = mv_decompose(ch, n, S)
        tot = exact_sum(ch, n)
        b = mv_bound_terms(ch, n, S, args.c)
        rep.check(f"partition n={n}", sm + ro == tot, n=n, smooth=sm, rough=ro, total=tot)
        rep.check(f"rough_bound n={n}", abs(ro) <= q ** n * b.rigorous + 1e-9, n=n,
                  rough=abs(ro), bound=q ** n * b.rigorous)
        rep.rows.append([q, n, k, " ".join(map(str, S.sorted())), complex(sm), complex(ro),
                         complex(tot), b.A1, b.A2, b.remainder, b.bound, b.rigorous,
                         b.kappa if S.members else 1.0])
    rep.notes.append(f"remainder constant c={args.c} (configurable); the rigorous column is asserted")
    return rep


def cmd_gcdsum(args) -> Report:
    from .gcdsum import blk_trivial_bound, gcd_terms

    rep = Report("gcdsum", ["d", "gcd", "log_gcd"])
    k = k_value(args.k, args.q, L=args.L)
    rows = gcd_terms(args.L, k, args.q)
    for d, g, lg in rows:
        rep.rows.append([d, g, lg])
    B = math.fsum(r[2] for r in rows)
    triv = blk_trivial_bound(args.L, k, args.q)
    rep.notes.append(f"B_L_k: {B!r}")
    rep.extra.update(B=B, trivial_bound=triv, k=str(k))
    rep.check("trivial_bound", B <= triv + 1e-9, B=B, bound=triv)
    return rep


def cmd_critset(args) -> Report:
    from .sums import crit_set, crit_start, gcd_qd, prop_crit_rhs

    q = args.q
    rep = Report("critset", ["d", "gcd", "member"])
    n = args.n
    k = k_value(args.k, q, n)
    S = crit_set(k, q, n)
    m = crit_start(q, n)
    if args.rows:
        for d in range(m, n + 1):
            rep.rows.append([d, gcd_qd(k, q, d), d in S])
    rhs = prop_crit_rhs(k, q, n) if n >= 2 else None
    rep.extra.update(start=m, size=len(S), members=S.sorted()[:200],
                     prop_rhs=rhs.value if rhs else None, constant="1 (configurable)")
    rep.notes.append(f"start m={m}; |S|={len(S)}; prop_rhs={rhs.value if rhs else ''} (constant=1)")
    return rep


def cmd_tracedist(args) -> Report:
    from .glmatrix import (empirical_trace_distribution,
                           exact_trace_distribution, l1_distance, reduction_rhs)
    from .sums import powersum_distribution

    spec = field_of(args.q)
    q = spec.q
    rep = Report("tracedist", ["measure", "n", "k", "x", "mass", "mass_exact", "l1", "l1_exact",
                               "bound_rhs", "seed"])
    for n in parse_range(args.n):
        k = k_value(args.k, q, n)
        if args.mode == "exact":
            if args.measure == "poly":
                dist = powersum_distribution(spec, n, k)
                rhs = dist.bound_rhs
            else:
                dist = exact_trace_distribution(n, k, spec)
                rhs = reduction_rhs(n, k, spec) if k > 0 else None
            l1e = dist.l1_exact()
            if rhs is not None:
                rep.check(f"l1_bound n={n}", float(l1e) <= rhs + 1e-12, n=n, l1=l1e, bound=rhs)
            for x, m in enumerate(dist.masses):
                rep.rows.append([args.measure, n, k, x, float(m), str(m), float(l1e), str(l1e),
                                 "" if rhs is None else rhs, args.seed])
        else:
            if args.measure != "gl":
                raise UsageError("empirical mode samples matrices (measure gl)")
            dist = empirical_trace_distribution(n, k, spec, args.samples, args.seed + n)
            l1 = l1_distance(dist)
            if q ** n <= 2 ** 16:
                ex = exact_trace_distribution(n, k, spec)
                for x in range(q):
                    p = float(ex.masses[x])
                    sigma = math.sqrt(p * (1 - p) / args.samples)
                    ok = abs(dist.masses[x] - p) <= 3 * sigma + (0 if sigma else 1e-12)
                    rep.check(f"three_sigma n={n} x={x}", ok, n=n, x=x, empirical=dist.masses[x], exact=p)
            if args.expect_point is not None:
                want = spec.from_int(n) if args.expect_point == "n" else int(args.expect_point)
                bad = int(round((1 - dist.masses[want]) * args.samples))
                rep.check(f"point_mass n={n}", bad == 0, n=n, violations=bad)
            for x, m in enumerate(dist.masses):
                rep.rows.append(["gl", n, k, x, m, "", l1, "", "", args.seed + n])
    return rep


def cmd_lincomb(args) -> Report:
    from .glmatrix import (combination_from_product, l1_distance, linear_combination_distribution,
                           product_of_irreducibles)

    spec = field_of(args.q)
    rep = Report("lincomb", ["n", "x", "mass", "l1", "bound_rhs", "seed"])
    for n in parse_range(args.n):
        if args.product_of_irreducibles:
            F = product_of_irreducibles(spec, n, char_safe=args.char_safe)
            a = combination_from_product(F)
            rep.notes.append(f"n={n}: F = {F} (degree {F.degree})")
        else:
            a = parse_ints(args.a)
        dist = linear_combination_distribution(n, a, spec, args.mode, args.samples, args.seed)
        l1 = l1_distance(dist)
        if args.mode == "exact":
            rep.check(f"l1_bound n={n}", l1 <= dist.bound_rhs + 1e-12, n=n, l1=l1, bound=dist.bound_rhs)
        if args.product_of_irreducibles:
            rep.check(f"point_mass_at_zero n={n}", dist.masses[0] == 1, n=n, masses=dist.masses)
        for x, m in enumerate(dist.masses):
            rep.rows.append([n, x, str(m), l1, dist.bound_rhs, args.seed])
    return rep


def cmd_appendix(args) -> Report:
    from .sums import appendix_bound, exact_sum

    spec = field_of(args.q)
    q = spec.q
    rep = Report("appendix", ["q", "k", "psi", "d_chi", "n", "status", "R", "L", "bound_log", "abs_S",
                              "lhs_log"])
    for k in parse_range(args.k):
        for c in range(1, q):
            ch = make_chi(spec, k, c)
            d = build_lfunction(ch).degree
            ns = parse_range(args.n) if args.n else range(3, d + 1)
            for n in ns:
                res = appendix_bound(d, q, n)
                S = abs(exact_sum(ch, n))
                lhs = math.log(S / q ** (n / 2)) if S > 0 else float("-inf")
                if res.valid:
                    rep.check(f"appendix k={k} psi={c} n={n}", lhs <= res.bound_log + 1e-9,
                              k=k, n=n, lhs=lhs, bound=res.bound_log)
                rep.rows.append([q, k, c, d, n, res.status, res.R if res.R is not None else "",
                                 res.L if res.L is not None else "",
                                 res.bound_log if res.bound_log is not None else "", S, lhs])
    return rep


# -- goldens ----------------------------------------------------------------------

GOLDENS = {
    "symcheck_q2": ["symcheck", "--q", "2", "--n", "2..10", "--trials", "50", "--seed", "7"],
    "glorder_q2": ["tracedist", "--q", "2", "--n", "1..8", "--k", "q^(n*(n-1)/2)*prod(q^i-1,i=1..n)",
                   "--mode", "empirical", "--samples", "1000", "--seed", "8", "--expect-point", "n"],
    "glorder_q3": ["tracedist", "--q", "3", "--n", "1..8", "--k", "q^(n*(n-1)/2)*prod(q^i-1,i=1..n)",
                   "--mode", "empirical", "--samples", "1000", "--seed", "8", "--expect-point", "n"],
    "prodirr_q2": ["lincomb", "--q", "2", "--n", "1..4", "--product-of-irreducibles"],
    "trend_poly_q2": ["tracedist", "--q", "2", "--n", "4..14", "--k", "2^64+13", "--mode", "exact",
                      "--measure", "poly"],
    "trend_gl_q2": ["tracedist", "--q", "2", "--n", "4..14", "--k", "2^64+13", "--mode", "exact",
                    "--measure", "gl"],
}


SWEEP = {"seed": 37, "q": 2, "trials": 200, "max_bits": 256, "max_L": 64}


def sweep_text() -> str:
    from .gcdsum import lemma_sweep

    rows = lemma_sweep(**SWEEP)
    worst = max(rows, key=lambda r: r[2])
    data = {**SWEEP, "max_ratio": worst[2], "argmax_bits": worst[0], "argmax_L": worst[1],
            "rows": len(rows), "version": __version__}
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def golden_dir() -> Path:
    return Path(str(resources.files("tracechar") / "goldens"))


def run_to_text(argv: list[str]) -> tuple[str, Report]:
    parser = build_parser()
    args = parser.parse_args(argv)
    report = args.func(args)
    return render_csv(report, args), report


def cmd_goldens(args) -> Report:
    rep = Report("goldens", ["name", "status"])
    gdir = Path(args.dir) if args.dir else golden_dir()
    names = args.only.split(",") if args.only else list(GOLDENS)
    unknown = [n for n in names if n not in GOLDENS and n != "lemma_sweep"]
    if unknown:
        raise UsageError(f"unknown golden {unknown[0]!r}; choose from {sorted(GOLDENS)}")
    for name in (n for n in names if n in GOLDENS):
        argv = GOLDENS[name] + ["--workers", "1"]
        text, sub = run_to_text(argv)
        path = gdir / f"{name}.csv"
        if args.write:
            gdir.mkdir(parents=True, exist_ok=True)
            path.write_text(text)
            status = "written"
            ok = sub.passed
        else:
            ok = path.exists() and path.read_text() == text and sub.passed
            status = "match" if ok else ("missing" if not path.exists() else "differs")
        rep.check(f"golden {name}", ok, golden=name, status=status)
        rep.rows.append([name, status])
    if not args.only or "lemma_sweep" in names:
        path = gdir / "lemma_sweep.json"
        text = sweep_text()
        if args.write:
            path.write_text(text)
            status, ok = "written", True
        else:
            ok = path.exists() and path.read_text() == text
            status = "match" if ok else ("missing" if not path.exists() else "differs")
        rep.check("golden lemma_sweep", ok, golden="lemma_sweep", status=status)
        rep.rows.append(["lemma_sweep", status])
    return rep


# -- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tracechar", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"tracechar {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed=0):
        sp.add_argument("--out", help="CSV output path (default stdout)")
        sp.add_argument("--json", help="JSON summary path")
        sp.add_argument("--seed", type=int, default=seed)
        sp.add_argument("--workers", type=int, default=1)

    sp = sub.add_parser("charsum", help="exact S(n, chi_{k,psi}) table")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--k", required=True)
    sp.add_argument("--n", required=True)
    sp.add_argument("--psi", type=int, default=1)
    sp.add_argument("--weight", choices=["unit", "lambda", "mu", "pgl", "prime"], default="unit")
    sp.add_argument("--no-timing", action="store_true", help="write 0 in elapsed_ms")
    common(sp)
    sp.set_defaults(func=cmd_charsum)

    sp = sub.add_parser("primesum", help="Lambda-weighted sums, polynomial and field side")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--k", required=True)
    sp.add_argument("--n", required=True)
    sp.add_argument("--psi", type=int, default=1)
    common(sp)
    sp.set_defaults(func=cmd_primesum)

    sp = sub.add_parser("symcheck", help="prime sums for k and gcd(k, q^n - 1) agree")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--n", required=True)
    sp.add_argument("--trials", type=int, default=50)
    sp.add_argument("--bits", type=int, default=128)
    sp.add_argument("--psi", type=int, default=1)
    common(sp)
    sp.set_defaults(func=cmd_symcheck)

    sp = sub.add_parser("weilcheck", help="L-functions, root moduli and Weil bounds")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--k", required=True, help="range of k, e.g. 1..8")
    sp.add_argument("--n", default="1..12")
    common(sp)
    sp.set_defaults(func=cmd_weilcheck)

    sp = sub.add_parser("lfunc", help="coefficients of L(u, chi_{k,psi})")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--k", required=True)
    sp.add_argument("--psi", type=int, default=1)
    common(sp)
    sp.set_defaults(func=cmd_lfunc)

    sp = sub.add_parser("sieve", help="sieve recursion against brute force")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--n", required=True)
    sp.add_argument("--S", required=True, help="comma separated degrees")
    common(sp)
    sp.set_defaults(func=cmd_sieve)

    sp = sub.add_parser("mvcheck", help="smooth/rough split and its bound")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--n", required=True)
    sp.add_argument("--k", required=True)
    sp.add_argument("--S", required=True)
    sp.add_argument("--psi", type=int, default=1)
    sp.add_argument("--c", type=float, default=4.0, help="remainder constant")
    common(sp)
    sp.set_defaults(func=cmd_mvcheck)

    sp = sub.add_parser("gcdsum", help="per-d gcd(k, q^d - 1) rows and B_{L,k}")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--k", required=True, help="bigint or expression in q and L")
    sp.add_argument("--L", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_gcdsum)

    sp = sub.add_parser("critset", help="critical degree set and criterion value")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--k", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--rows", action="store_true", help="emit one row per degree")
    common(sp)
    sp.set_defaults(func=cmd_critset)

    sp = sub.add_parser("tracedist", help="law of Tr(g^k) or p_k(f) and its L1 distance")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--n", required=True)
    sp.add_argument("--k", required=True, help="bigint or expression in q and n")
    sp.add_argument("--mode", choices=["exact", "empirical"], default="exact")
    sp.add_argument("--measure", choices=["gl", "poly"], default="gl")
    sp.add_argument("--samples", type=int, default=10000)
    sp.add_argument("--expect-point", default=None, help="'n' or an element code")
    common(sp)
    sp.set_defaults(func=cmd_tracedist)

    sp = sub.add_parser("lincomb", help="law of sum_i a_i Tr(g^i)")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--n", required=True)
    sp.add_argument("--a", default="1")
    sp.add_argument("--product-of-irreducibles", action="store_true")
    sp.add_argument("--char-safe", action="store_true", help="use T*F when char | deg F")
    sp.add_argument("--mode", choices=["exact", "empirical"], default="exact")
    sp.add_argument("--samples", type=int, default=10000)
    common(sp)
    sp.set_defaults(func=cmd_lincomb)

    sp = sub.add_parser("appendix", help="explicit square-root bound against exact sums")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--k", required=True, help="range of k")
    sp.add_argument("--n", default=None, help="range of n (default 3..d)")
    common(sp)
    sp.set_defaults(func=cmd_appendix)

    sp = sub.add_parser("goldens", help="regenerate or verify golden CSVs")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--verify", action="store_true", default=True)
    g.add_argument("--write", action="store_true")
    sp.add_argument("--dir", default=None)
    sp.add_argument("--only", default=None)
    common(sp)
    sp.set_defaults(func=cmd_goldens)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.func(args)
    except (UsageError, KExprError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        err = {"schema": SUMMARY_SCHEMA, "error": "budget", "q": exc.q, "n": exc.n, "message": str(exc)}
        print(json.dumps(err), file=sys.stderr)
        return 3
    text = render_csv(report, args)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.json:
        Path(args.json).write_text(json.dumps(summary_of(report, args), indent=2, sort_keys=True) + "\n")
    return 0 if report.passed else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
