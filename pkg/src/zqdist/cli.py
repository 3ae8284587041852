"""Command-line front end: verification runs and experiment sweeps.

Subcommands
    gauss        evaluate G(a, b, n), or sweep the closed-form-vs-oracle check
    sphere       sphere counts with error terms and bound ratios
    spectrum     two-route sphere spectra and the decay bound
    nu           brute vs spectral pair counts for a point set
    certificate  positivity-certificate sweep for a point set
    construct    emit the explicit zero-distance constructions
    verify-all   the full property suite

One row per instance, CSV by default (JSON mirrors it).  Output is
deterministic for a fixed configuration: fixed seeds, rows in lexicographic
instance order, repr-stable float formatting, '\\n' line endings, no locale
dependence.  Relative --out paths resolve under $ZQDIST_OUT_DIR when set.

Exit codes: 0 all checks passed, 1 a check failed, 2 usage/resource error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from typing import Sequence

import numpy as np

from .arith import as_modulus
from .distset import (
    DEFAULT_PAIR_BUDGET,
    PointSet,
    certificate_check,
    construct_even_weight,
    construct_zero_distance_lattice,
    distance_set,
    nu_histogram,
    nu_spectral_sweep,
    read_pointset,
    sample_random_set,
    theorem_threshold,
    write_pointset,
)
from .errors import BudgetError, DomainError, InconsistencyError
from .fourier import (
    DEFAULT_GRID_BUDGET,
    GridFunction,
    forward,
    inverse,
    orthogonality_max_defect,
    plancherel_defect,
)
from .gauss import gauss_brute, gauss_general
from .sphere import (
    decay_bound_check,
    spectra_max_diff,
    sphere_count_formula,
    sphere_counts_all,
    sphere_size_bound_check,
    sphere_spec,
)

DEFAULT_SEED = 1


# ---------------------------------------------------------------------------
# output plumbing


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".12g")
    return str(v)


def _resolve_out(path: "str | None") -> "str | None":
    if path is None:
        return None
    if not os.path.isabs(path):
        base = os.environ.get("ZQDIST_OUT_DIR")
        if base:
            return os.path.join(base, path)
    return path


def _emit(columns: list[str], rows: list[dict], args) -> None:
    out = _resolve_out(args.out)
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row.get(c)) for c in columns])
        text = buf.getvalue()
    else:
        payload = [{c: _jsonable(row.get(c)) for c in columns} for row in rows]
        text = json.dumps(payload, indent=None, separators=(",", ":")) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        parent = os.path.dirname(out)
        if parent:
            os.makedirs(parent, exist_ok=True)
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _jsonable(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    return v


# ---------------------------------------------------------------------------
# gauss


def _gauss_sweep_row(n: int) -> dict:
    worst = 0.0
    for a in range(n):
        for b in range(n):
            diff = abs(gauss_general(a, b, n).complex_render - gauss_brute(a, b, n))
            if diff > worst:
                worst = diff
    tol = 1e-6 * n
    return {
        "n": n,
        "cases": n * n,
        "max_abs_err": worst,
        "tol": tol,
        "passed": worst < tol,
    }


def _cmd_gauss(args):
    if args.verify:
        cols = ["n", "cases", "max_abs_err", "tol", "passed"]
        rows = [_gauss_sweep_row(n) for n in range(1, args.n_max + 1)]
        return cols, rows
    if args.a is None or args.n is None:
        raise DomainError("provide --a and --n (and optionally --b), or use --verify")
    a, b, n = args.a, args.b, args.n
    val = gauss_general(a, b, n)
    z = val.complex_render
    w = gauss_brute(a, b, n)
    err = abs(z - w)
    cols = [
        "n", "a", "b",
        "closed_re", "closed_im", "brute_re", "brute_im",
        "abs_err", "magnitude_sq", "exact", "passed",
    ]
    rows = [{
        "n": n, "a": a, "b": b,
        "closed_re": z.real, "closed_im": z.imag,
        "brute_re": w.real, "brute_im": w.imag,
        "abs_err": err,
        "magnitude_sq": str(val.magnitude_sq),
        "exact": val.is_exact,
        "passed": err < 1e-6 * n,
    }]
    return cols, rows


# ---------------------------------------------------------------------------
# sphere


def _crt_count_from_enumeration(m, d: int, t: int, max_grid: int) -> int:
    out = 1
    for pm in m.prime_power_moduli():
        out *= int(sphere_counts_all(pm, d, max_grid)[t % pm.q])
    return out


def _cmd_sphere(args):
    cols = [
        "q", "d", "t",
        "count_enum", "count_formula", "count_crt", "main_term",
        "ii_re", "ii_abs", "ii_bound", "bound_ratio_max", "passed",
    ]
    rows = []
    for q in sorted(set(args.q)):
        m = as_modulus(q)
        for d in sorted(set(args.d)):
            counts = sphere_counts_all(m, d, args.max_grid)
            ts = list(range(q)) if args.all_t or not args.t else sorted(set(args.t))
            for t in ts:
                t %= q
                enum = int(counts[t])
                row = {"q": q, "d": d, "t": t, "count_enum": enum, "passed": True}
                if m.is_odd:
                    rep = sphere_count_formula(sphere_spec(m, d, t))
                    crt = _crt_count_from_enumeration(m, d, t, args.max_grid)
                    row.update(
                        count_formula=rep.exact_count,
                        count_crt=crt,
                        main_term=rep.main_term,
                        ii_re=rep.ii_t.real,
                        ii_abs=abs(rep.ii_t),
                        ii_bound=rep.ii_bound,
                    )
                    row["passed"] = enum == rep.exact_count == crt
                    if d > 2:
                        bc = sphere_size_bound_check(sphere_spec(m, d, t))
                        row["bound_ratio_max"] = max(f.ratio for f in bc.factors)
                        row["passed"] = row["passed"] and bc.ok
                rows.append(row)
            rows.append({
                "q": q, "d": d, "t": "all",
                "count_enum": int(counts.sum()),
                "passed": int(counts.sum()) == q**d,
            })
    return cols, rows


# ---------------------------------------------------------------------------
# spectrum


def _cmd_spectrum(args):
    cols = [
        "q", "d", "t",
        "max_route_diff", "route_tol",
        "max_nonzero_coeff", "decay_bound", "ratio_to_bound", "passed",
    ]
    rows = []
    for q in sorted(set(args.q)):
        m = as_modulus(q)
        m.require_odd("spectrum")
        for d in sorted(set(args.d)):
            ts = list(range(q)) if args.all_t or not args.t else sorted(set(args.t))
            for t in ts:
                spec = sphere_spec(m, d, t % q)
                diff = spectra_max_diff(spec, args.max_grid)
                row = {
                    "q": q, "d": d, "t": t % q,
                    "max_route_diff": diff, "route_tol": 1e-8,
                    "passed": diff < 1e-8,
                }
                if d > 2:
                    rep = decay_bound_check(spec, max_grid=args.max_grid)
                    row.update(
                        max_nonzero_coeff=rep.max_nonzero_coeff,
                        decay_bound=rep.bound,
                        ratio_to_bound=rep.ratio,
                    )
                    row["passed"] = row["passed"] and rep.ok
                rows.append(row)
    return cols, rows


# ---------------------------------------------------------------------------
# point-set sources shared by nu and certificate


def _add_set_source_args(sub) -> None:
    sub.add_argument("--set-file", help="read the point set from a file")
    sub.add_argument("--random", type=int, metavar="SIZE", help="seeded uniform sample")
    sub.add_argument("--even-weight", action="store_true", help="even-weight set in Z_2^d")
    sub.add_argument("--lattice", nargs=2, type=int, metavar=("P", "ELL"),
                     help="zero-distance lattice in Z_{p^ell}^d")
    sub.add_argument("--q", type=int, help="modulus (with --random)")
    sub.add_argument("--d", type=int, help="dimension (with --random/--even-weight/--lattice)")


def _load_set(args) -> tuple[PointSet, str]:
    if args.set_file:
        return read_pointset(args.set_file), f"file:{os.path.basename(args.set_file)}"
    if args.random is not None:
        if args.q is None or args.d is None:
            raise DomainError("--random needs --q and --d")
        E = sample_random_set(args.q, args.d, args.random, args.seed)
        return E, f"random(size={args.random},seed={args.seed})"
    if args.even_weight:
        if args.d is None:
            raise DomainError("--even-weight needs --d")
        return construct_even_weight(args.d), "even-weight"
    if args.lattice:
        if args.d is None:
            raise DomainError("--lattice needs --d")
        p, ell = args.lattice
        return construct_zero_distance_lattice(p, ell, args.d), f"lattice(p={p},ell={ell})"
    raise DomainError("no point-set source given (--set-file/--random/--even-weight/--lattice)")


def _cmd_nu(args):
    E, label = _load_set(args)
    q, d = E.q, E.d
    cols = [
        "q", "d", "set", "size", "t",
        "nu_brute", "main_term", "r_t", "r_bound",
        "nu_spectral", "certificate", "match", "passed",
    ]
    hist = None
    if E.size * E.size <= args.max_pairs:
        hist = nu_histogram(E, args.max_pairs)
    reports = None
    if E.modulus.is_odd and q**d <= args.max_grid:
        reports = {r.t: r for r in nu_spectral_sweep(E, None, args.route, args.max_grid)}
    if hist is None and reports is None:
        raise BudgetError(f"set of size {E.size} in Z_{q}^{d} fits neither the pair "
                          f"budget {args.max_pairs} nor the grid budget {args.max_grid}")
    rows = []
    for t in range(q):
        row = {"q": q, "d": d, "set": label, "size": E.size, "t": t, "passed": True}
        if hist is not None:
            row["nu_brute"] = int(hist[t])
        if reports is not None:
            rep = reports[t]
            row.update(
                main_term=rep.main_term,
                r_t=rep.r_t,
                r_bound=rep.r_bound,
                nu_spectral=rep.nu,
                certificate=rep.certificate_positive,
            )
            if hist is not None:
                row["match"] = rep.nu == int(hist[t])
                row["passed"] = bool(row["match"])
        rows.append(row)
    total = int(hist.sum()) if hist is not None else sum(r.nu for r in reports.values())
    rows.append({
        "q": q, "d": d, "set": label, "size": E.size, "t": "all",
        "nu_brute": total, "passed": total == E.size**2,
    })
    return cols, rows


def _cmd_certificate(args):
    E, label = _load_set(args)
    q, d = E.q, E.d
    thr = theorem_threshold(E.modulus, d, args.C)
    cols = [
        "q", "d", "set", "size", "C", "threshold", "meets_threshold",
        "t", "fired", "nu_brute", "margin", "slack", "sound",
    ]
    rows = []
    for row in certificate_check(E, args.route, args.max_grid, args.max_pairs):
        rows.append({
            "q": q, "d": d, "set": label, "size": E.size,
            "C": args.C, "threshold": thr.threshold,
            "meets_threshold": E.size >= thr.threshold,
            "t": row.t, "fired": row.fired, "nu_brute": row.nu,
            "margin": row.margin, "slack": row.slack, "sound": row.sound,
        })
    return cols, rows


# ---------------------------------------------------------------------------
# construct


def _cmd_construct(args):
    if args.kind == "even-weight":
        if args.d is None:
            raise DomainError("construct even-weight needs --d")
        E = construct_even_weight(args.d)
        expected = 2 ** (args.d - 1)
        label = "even-weight"
    else:
        if args.p is None or args.ell is None or args.d is None:
            raise DomainError("construct lattice needs --p, --ell and --d")
        E = construct_zero_distance_lattice(args.p, args.ell, args.d)
        expected = args.p ** ((args.ell // 2) * args.d)
        label = f"lattice(p={args.p},ell={args.ell})"
    if args.out_set:
        write_pointset(E, _resolve_out(args.out_set))
    cols = ["construction", "q", "d", "size", "expected_size", "distances", "passed"]
    row = {
        "construction": label, "q": E.q, "d": E.d,
        "size": E.size, "expected_size": expected,
        "passed": E.size == expected,
    }
    if args.check:
        dists = sorted(distance_set(E, args.max_pairs))
        row["distances"] = ";".join(str(t) for t in dists)
        row["passed"] = row["passed"] and dists == [0]
    return cols, [row]


# ---------------------------------------------------------------------------
# verify-all


def _row(check, instance, metric, value, bound=None, tol=None, ratio=None, passed=True) -> dict:
    return {
        "check": check, "instance": instance, "metric": metric,
        "value": value, "bound": bound, "tol": tol, "ratio": ratio,
        "passed": bool(passed),
    }


def _random_grid(q: int, d: int, seed: int) -> GridFunction:
    rng = np.random.Generator(np.random.PCG64(seed))
    vals = rng.standard_normal(q**d) + 1j * rng.standard_normal(q**d)
    return GridFunction(q, d, vals)


def _verify_gauss(n_max: int) -> list[dict]:
    rows = []
    for n in range(1, n_max + 1):
        r = _gauss_sweep_row(n)
        rows.append(_row(
            "gauss_oracle", f"n={n:03d}", "max_abs_err",
            r["max_abs_err"], tol=r["tol"], passed=r["passed"],
        ))
    return rows


def _verify_fourier(q_max: int, seed: int) -> list[dict]:
    rows = []
    for q in (3, 5, 9, 15):
        if q > q_max:
            continue
        for d in (1, 2, 3):
            defect = orthogonality_max_defect(q, d)
            rows.append(_row(
                "fourier_orthogonality", f"q={q:02d} d={d}", "max_defect",
                defect, tol=1e-9, passed=defect < 1e-9,
            ))
            for k in range(2):
                f = _random_grid(q, d, seed + 100 * q + 10 * d + k)
                g = _random_grid(q, d, seed + 100 * q + 10 * d + k + 5000)
                scale = float(np.abs(f.values).max())
                rt = float(np.abs(inverse(forward(f)).values - f.values).max()) / scale
                rows.append(_row(
                    "fourier_roundtrip", f"q={q:02d} d={d} grid={k}", "rel_defect",
                    rt, tol=1e-9, passed=rt < 1e-9,
                ))
                pscale = float(np.mean(np.abs(f.values) * np.abs(g.values)))
                pd = plancherel_defect(f, g) / pscale
                rows.append(_row(
                    "fourier_plancherel", f"q={q:02d} d={d} grid={k}", "rel_defect",
                    pd, tol=1e-9, passed=pd < 1e-9,
                ))
    return rows


def _verify_sphere(q_max: int, max_grid: int) -> list[dict]:
    rows = []
    for q in (3, 5, 9, 15, 25, 27):
        if q > q_max:
            continue
        m = as_modulus(q)
        for d in (3, 4):
            counts = sphere_counts_all(m, d, max_grid)
            partition_ok = int(counts.sum()) == q**d
            rows.append(_row(
                "sphere_partition", f"q={q:02d} d={d}", "total",
                int(counts.sum()), bound=q**d, passed=partition_ok,
            ))
            for t in range(q):
                rep = sphere_count_formula(sphere_spec(m, d, t))
                crt = _crt_count_from_enumeration(m, d, t, max_grid)
                agree = int(counts[t]) == rep.exact_count == crt
                rows.append(_row(
                    "sphere_count", f"q={q:02d} d={d} t={t:02d}", "count",
                    int(counts[t]), passed=agree,
                ))
                bc = sphere_size_bound_check(sphere_spec(m, d, t))
                ratio = max(f.ratio for f in bc.factors)
                rows.append(_row(
                    "sphere_error_bound", f"q={q:02d} d={d} t={t:02d}", "ratio_max",
                    ratio, bound=1.0, ratio=ratio, passed=bc.ok,
                ))
    return rows


def _verify_spectra(q_max: int, max_grid: int) -> list[dict]:
    rows = []
    for q in (3, 5, 9, 15):
        if q > q_max:
            continue
        for t in range(q):
            spec = sphere_spec(q, 3, t)
            diff = spectra_max_diff(spec, max_grid)
            rows.append(_row(
                "spectrum_two_route", f"q={q:02d} d=3 t={t:02d}", "max_abs_diff",
                diff, tol=1e-8, passed=diff < 1e-8,
            ))
            rep = decay_bound_check(spec, max_grid=max_grid)
            rows.append(_row(
                "spectrum_decay", f"q={q:02d} d=3 t={t:02d}", "max_nonzero_coeff",
                rep.max_nonzero_coeff, bound=rep.bound, ratio=rep.ratio, passed=rep.ok,
            ))
    return rows


def _verify_nu(q_max: int, sets_per_q: int, seed: int, max_grid: int, max_pairs: int) -> list[dict]:
    rows = []
    for q in (3, 5, 9):
        if q > q_max:
            continue
        d = 3
        named: list[tuple[str, PointSet]] = [
            ("full-grid", sample_random_set(q, d, q**d, seed)),
            ("sphere-t1", PointSet(q, d, _sphere_points(q, d, 1))),
            ("singleton", PointSet(q, d, [(0,) * d])),
        ]
        if q == 9:
            named.append(("lattice", construct_zero_distance_lattice(3, 2, d)))
        for k in range(sets_per_q):
            size = 2 + (seed + 7 * k + q) % min(120, q**d - 1)
            named.append((f"random-{k}", sample_random_set(q, d, size, seed + 1000 * q + k)))
        for label, E in named:
            hist = nu_histogram(E, max_pairs)
            reports = nu_spectral_sweep(E, None, "direct", max_grid)
            dev = max(abs(r.main_term + r.r_t - int(hist[r.t])) for r in reports)
            mism = sum(1 for r in reports if r.nu != int(hist[r.t]))
            inst = f"q={q:02d} d={d} set={label}"
            rows.append(_row("nu_decomposition", inst, "max_abs_dev", dev,
                             tol=1e-6, passed=(mism == 0 and dev < 1e-6)))
            fired = [r for r in reports if r.certificate_positive]
            violations = sum(1 for r in fired if int(hist[r.t]) == 0)
            rows.append(_row("certificate_soundness", inst, "violations", violations,
                             bound=0, passed=violations == 0))
    return rows


def _sphere_points(q: int, d: int, t: int):
    from .sphere import sphere_enumerate

    return sphere_enumerate(sphere_spec(q, d, t))


def _verify_constructions(max_pairs: int) -> list[dict]:
    rows = []
    for d in range(1, 11):
        E = construct_even_weight(d)
        dists = sorted(distance_set(E, max_pairs))
        ok = E.size == 2 ** (d - 1) and dists == [0]
        rows.append(_row("construction_even_weight", f"d={d:02d}", "size",
                         E.size, bound=2 ** (d - 1), passed=ok))
    for p, ell, d in ((3, 2, 3), (3, 3, 3), (5, 2, 3)):
        E = construct_zero_distance_lattice(p, ell, d)
        dists = sorted(distance_set(E, max_pairs))
        ok = E.size == p ** ((ell // 2) * d) and dists == [0]
        rows.append(_row("construction_lattice", f"p={p} ell={ell} d={d}", "size",
                         E.size, bound=p ** ((ell // 2) * d), passed=ok))
    return rows


def _cmd_verify_all(args):
    cols = ["check", "instance", "metric", "value", "bound", "tol", "ratio", "passed"]
    rows = []
    rows += _verify_gauss(args.n_max)
    rows += _verify_fourier(args.q_max, args.seed)
    rows += _verify_sphere(args.q_max, args.max_grid)
    rows += _verify_spectra(args.q_max, args.max_grid)
    rows += _verify_nu(args.q_max, args.sets_per_q, args.seed, args.max_grid, args.max_pairs)
    rows += _verify_constructions(args.max_pairs)
    rows.sort(key=lambda r: (r["check"], r["instance"]))
    return cols, rows


# ---------------------------------------------------------------------------
# parser and entry point


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zqdist",
        description="Distance sets, sphere counts and quadratic Gauss sums over Z_q^d.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="output path (stdout when omitted)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--max-grid", type=int, default=DEFAULT_GRID_BUDGET,
                       help="largest q^d any grid operation may touch")
        p.add_argument("--max-pairs", type=int, default=DEFAULT_PAIR_BUDGET,
                       help="largest |E|^2 any pair scan may touch")

    g = sub.add_parser("gauss", help="quadratic Gauss sums")
    common(g)
    g.add_argument("--verify", action="store_true", help="sweep all (a, b, n) up to --n-max")
    g.add_argument("--n-max", type=int, default=99)
    g.add_argument("--a", type=int)
    g.add_argument("--b", type=int, default=0)
    g.add_argument("--n", type=int)
    g.set_defaults(func=_cmd_gauss)

    s = sub.add_parser("sphere", help="sphere counts and error bounds")
    common(s)
    s.add_argument("--q", type=int, nargs="+", required=True)
    s.add_argument("--d", type=int, nargs="+", required=True)
    s.add_argument("--t", type=int, nargs="*")
    s.add_argument("--all-t", action="store_true")
    s.set_defaults(func=_cmd_sphere)

    sp = sub.add_parser("spectrum", help="two-route sphere spectra and decay bound")
    common(sp)
    sp.add_argument("--q", type=int, nargs="+", required=True)
    sp.add_argument("--d", type=int, nargs="+", default=[3])
    sp.add_argument("--t", type=int, nargs="*")
    sp.add_argument("--all-t", action="store_true")
    sp.set_defaults(func=_cmd_spectrum)

    n = sub.add_parser("nu", help="pair counts, brute vs spectral")
    common(n)
    _add_set_source_args(n)
    n.add_argument("--route", choices=("direct", "formula"), default="direct")
    n.set_defaults(func=_cmd_nu)

    c = sub.add_parser("certificate", help="positivity certificate sweep")
    common(c)
    _add_set_source_args(c)
    c.add_argument("--route", choices=("direct", "formula"), default="direct")
    c.add_argument("--C", type=float, default=1.0,
                   help="constant in the largeness threshold (reported, never hard-coded)")
    c.set_defaults(func=_cmd_certificate)

    k = sub.add_parser("construct", help="emit explicit zero-distance constructions")
    common(k)
    k.add_argument("kind", choices=("even-weight", "lattice"))
    k.add_argument("--d", type=int)
    k.add_argument("--p", type=int)
    k.add_argument("--ell", type=int)
    k.add_argument("--out-set", help="write the set in point-set file format")
    k.add_argument("--check", action="store_true", help="also verify the distance set")
    k.set_defaults(func=_cmd_construct)

    v = sub.add_parser("verify-all", help="run the full property suite")
    common(v)
    v.add_argument("--n-max", type=int, default=40, help="Gauss oracle sweep bound")
    v.add_argument("--q-max", type=int, default=27, help="cap on moduli in the sweeps")
    v.add_argument("--sets-per-q", type=int, default=5)
    v.set_defaults(func=_cmd_verify_all)

    return parser


def main(argv: "Sequence[str] | None" = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cols, rows = args.func(args)
    except (DomainError, BudgetError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InconsistencyError as exc:
        print(f"inconsistency: {exc}", file=sys.stderr)
        return 1
    _emit(cols, rows, args)
    ok = all(row.get("passed", True) for row in rows)
    return 0 if ok else 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
