"""Command line entry point: ``ltverify <subcommand> [options]``.

Exit codes: 0 pass, 1 verification failure, 2 usage or I/O error.

Every subcommand also accepts ``--config FILE`` with flat ``key = value``
lines (``#`` starts a comment).  Keys are option names with ``-`` or ``_``;
unknown keys are rejected.  Command line flags win over the file.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import lattice, lt_constants, mu0_sphere, schrodinger_lab, spectral_sums
from . import sphere_harmonics
from .errors import DerivationError, ResourceError, UnsupportedError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _clean(obj):
    """Round floats to 12 significant digits for byte-stable JSON."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        if math.isnan(obj) or math.isinf(obj):
            return str(obj)
        return float(f"{obj:.12g}")
    if hasattr(obj, "item"):  # numpy scalars
        return _clean(obj.item())
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return str(obj)


def to_json(obj) -> str:
    return json.dumps(_clean(obj), indent=2) + "\n"


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.12g}"
    return "" if v is None else str(v)


def _keys(rows):
    return list(dict.fromkeys(k for r in rows for k in r))


def to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        keys = _keys(rows)
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(keys)
        for r in rows:
            w.writerow([_fmt(r.get(k)) for k in keys])
    return buf.getvalue()


def to_text(rows: list[dict]) -> str:
    if not rows:
        return ""
    keys = _keys(rows)
    cells = [[_fmt(r.get(k)) for k in keys] for r in rows]
    widths = [max(len(k), *(len(c[i]) for c in cells)) for i, k in enumerate(keys)]
    lines = ["  ".join(k.ljust(w) for k, w in zip(keys, widths))]
    lines += ["  ".join(c.ljust(w) for c, w in zip(row, widths)) for row in cells]
    return "\n".join(line.rstrip() for line in lines) + "\n"


def render(rows, fmt, extra=None) -> str:
    if fmt == "json":
        return to_json(rows if extra is None else {**extra, "rows": rows})
    if fmt == "csv":
        return to_csv(rows)
    out = to_text(rows)
    if extra:
        out += "".join(f"{k}: {_fmt(v)}\n" for k, v in extra.items())
    return out


def emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc}") from exc


def read_config(path: str) -> dict[str, str]:
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    cfg = {}
    for no, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{no}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        cfg[key.replace("-", "_")] = value
    return cfg


# ---- subcommands ---------------------------------------------------------

def cmd_constants(args) -> int:
    table = lt_constants.constants_table()
    rows = [{"name": e.name, "value": e.value, "paper_value": e.paper_value,
             "tolerance": e.tolerance if e.paper_value is not None else None,
             "match": e.matches, "formula": e.formula_ref} for e in table.entries]
    if args.format == "text":
        lines = []
        for e in table.entries:
            ref = "" if e.paper_value is None else f" (reference {e.paper_value:.6g})"
            lines.append(f"{e.name} = {e.value:.12g}{ref}  [{e.formula_ref}]")
        text = "\n".join(lines) + "\n"
    else:
        text = render(rows, args.format)
    emit(text, args.out)
    return EXIT_OK if table.all_match else EXIT_FAIL


def cmd_sweep(args) -> int:
    try:
        domain = spectral_sums.Domain(args.domain)
    except ValueError:
        raise UsageError(f"unknown domain {args.domain!r}") from None
    k = 2.0 if domain in (spectral_sums.Domain.SPHERE3, spectral_sums.Domain.TORUS3) else args.k
    mu_max = args.mu_max
    if mu_max is None:
        mu_max = {"sphere2": 5.1, "torus2": 1.05, "sphere3": 10.0, "torus3": 3.8}[domain.value]
    rep = spectral_sums.verify_on_interval(domain, k, mu_max, args.step, args.margin_floor,
                                           args.tol)
    rows = [{"mu": mu, "value": v, "tail_bound": t, "limit": lim, "margin": m}
            for mu, v, t, lim, m in rep.csv_rows()]
    extra = {"domain": domain.value, "k": k, "min_margin": rep.min_margin,
             "passed": rep.passed}
    emit(render(rows, args.format, None if args.format == "csv" else extra), args.out)
    return EXIT_OK


def _item(name, passed, **detail):
    return {"item": name, "passed": bool(passed), **detail}


def run_verify(k: float = 1.5, sabotage: bool = False, quick: bool = False) -> list[dict]:
    scale = 0.9 if sabotage else 1.0
    items = []
    # S^2: trapezoid-rule threshold, then grid up to it
    sound_mu0 = None
    for variant in mu0_sphere.Variant:
        try:
            res = mu0_sphere.solve_t0(k, variant, exact_left=True, certify=False)
        except (UnsupportedError, DerivationError) as exc:
            items.append(_item(f"mu0_{variant.value}", True, skipped=str(exc)))
            continue
        items.append(_item(f"mu0_{variant.value}", True, t0=res.t0, mu0=res.mu0,
                           majorants_valid=res.majorants_valid))
        if res.majorants_valid:
            sound_mu0 = max(sound_mu0 or 0.0, res.mu0)
    rep = spectral_sums.verify_on_interval("sphere2", k, sound_mu0 + 0.01, 0.01, 0.0,
                                           limit_scale=scale)
    items.append(_item("sphere2_grid", rep.passed, mu_upper=sound_mu0 + 0.01,
                       min_margin=rep.min_margin))
    # T^2: Poisson threshold, then grid
    if abs(k - 1.5) < 1e-12:
        crude, sharp = lattice.torus2_mu0()
        tail = lattice.exp_tail_2d(sharp + 0.001)
        items.append(_item("torus2_threshold", tail.upper < (sharp + 0.001) ** -2,
                           mu0=sharp, crude=crude))
        mu_t2, step = max(sharp, 1.05), 0.005
    else:
        mu_t2, step = lattice.general_k_mu0(k), 0.01
        items.append(_item("torus2_threshold", math.isfinite(mu_t2), mu0=mu_t2))
    rep = spectral_sums.verify_on_interval("torus2", k, mu_t2, step, 0.0, limit_scale=scale)
    items.append(_item("torus2_grid", rep.passed, mu_upper=mu_t2, min_margin=rep.min_margin))
    # 3D
    mu_star, delta = spectral_sums.find_s3_max()
    items.append(_item("sphere3_max", abs(mu_star - 3.312) <= 0.01 and abs(delta - 1.0139) <= 1e-3,
                       mu_star=mu_star, delta=delta))
    mu_t3 = lattice.torus3_mu0()
    rep = spectral_sums.verify_on_interval("torus3", 2, mu_t3 + 0.01, 0.01, 0.0,
                                           tol=1e-6, limit_scale=scale)
    items.append(_item("torus3_grid", rep.passed, mu_upper=mu_t3 + 0.01,
                       min_margin=rep.min_margin))
    # lattice counting and harmonic identities
    lam = 10 ** 4 if quick else 10 ** 6
    cb = lattice.check_counting_bounds(lattice.enumerate(2, lam))
    items.append(_item("lattice_counting_2d", cb["passed"], lambda_max=lam,
                       max_N_over_lambda=cb["max_ratio_N_over_lambda"]))
    res = sphere_harmonics.max_residuals(12, 20 if quick else 100, seed=0)
    items.append(_item("harmonic_identities", res["addition"] <= 1e-9 and res["gradient"] <= 1e-8,
                       **res))
    return items


def cmd_verify(args) -> int:
    items = run_verify(args.k, args.sabotage, args.quick)
    ok = all(i["passed"] for i in items)
    report = {"k": args.k, "sabotage": args.sabotage, "passed": ok, "items": items}
    if args.format == "json":
        text = to_json(report)
    else:
        rows = [{"item": i["item"], "passed": i["passed"]} for i in items]
        text = render(rows, args.format)
    emit(text, args.out)
    for i in items:
        if not i["passed"]:
            print(f"FAILED: {i['item']}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_mu0(args) -> int:
    variants = list(mu0_sphere.Variant) if args.variant == "all" else [args.variant]
    rows, ok = [], True
    for v in variants:
        try:
            res = mu0_sphere.solve_t0(args.k, v, exact_left=not args.crude_left)
        except (UnsupportedError, DerivationError) as exc:
            print(f"{mu0_sphere.Variant(v).value}: {exc}", file=sys.stderr)
            ok = False
            continue
        c = res.coefficients
        p = c.polynomial
        rows.append({"variant": res.variant.value, "G1": c.G1, "G2": c.G2, "G3": c.G3,
                     "G4": c.G4, "c_t": p[0], "c_t32": p[1], "c_t2": p[2], "c_t52": p[3],
                     "t0": res.t0, "mu0": res.mu0, "majorants_valid": res.majorants_valid,
                     "verified_up_to": res.verified_up_to, "certificate": res.certificate})
        ok = ok and res.certificate
    emit(render(rows, args.format), args.out)
    return EXIT_OK if ok else EXIT_FAIL


def _floats(s: str) -> list[float]:
    return [float(x) for x in s.split(",") if x.strip()]


def _potential_from_args(args):
    if args.setting == "1d":
        return schrodinger_lab.Potential1D(_floats(args.cos or "0"), _floats(args.sin or ""),
                                           args.period)
    terms = {}
    for chunk in (args.terms or "").split(";"):
        if not chunk.strip():
            continue
        p, q, a, b = chunk.split(":")
        terms[(int(p), int(q))] = (float(a), float(b))
    return schrodinger_lab.Potential2D(terms)


def cmd_schrodinger(args) -> int:
    lab = schrodinger_lab
    if args.setting is None:
        rows = lab.run_gallery_1d() + lab.run_gallery_2d()
    else:
        try:
            V = _potential_from_args(args)
        except ValueError as exc:
            raise UsageError(f"bad potential: {exc}") from exc
        cfg = lab.GalerkinConfig(args.cutoff or (64 if args.setting == "1d" else 16), args.l)
        if args.setting == "1d":
            spec = lab.negative_spectrum(lab.assemble_1d(V, cfg))
            margin = lab.check_two_term_1d(spec, V, cfg.l)
            bound = margin + spec.trace + spec.count * lt_constants.two_term_constants(
                cfg.l, V.period)["count_coeff"]
            row = {"setting": "1d", "potential": f"cos={args.cos} sin={args.sin}",
                   "cutoff": cfg.cutoff, "count": spec.count, "trace": spec.trace,
                   "bound": bound, "margin": margin}
        else:
            spec = lab.negative_spectrum(lab.assemble_2d_torus(V, cfg))
            margin = lab.check_trace_bound_2d(spec, V)
            # only eigenvalues <= -r matter, so the negative part suffices
            lhs, rhs = lab.check_counting_2d(V, args.r, args.k, args.t, cfg, spec.eigenvalues)
            row = {"setting": "2d", "potential": args.terms, "cutoff": cfg.cutoff,
                   "count": spec.count, "trace": spec.trace, "bound": margin + spec.trace,
                   "margin": margin, "counting_lhs": lhs, "counting_rhs": rhs,
                   "counting_margin": rhs - lhs}
        rows = [row]
    ok = all(r["margin"] >= -1e-10 and r.get("counting_margin", 0) >= 0 for r in rows)
    if args.format == "json":
        text = to_json({"passed": ok, "results": rows})
    else:
        text = render(rows, args.format)
    emit(text, args.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_harmonics(args) -> int:
    res = sphere_harmonics.max_residuals(args.n, args.samples, args.seed)
    ok = res["addition"] <= 1e-9 and res["gradient"] <= 1e-8
    rows = [{"n_max": args.n, "samples": args.samples, "addition_residual": res["addition"],
             "gradient_residual": res["gradient"], "passed": ok}]
    emit(render(rows, args.format), args.out)
    return EXIT_OK if ok else EXIT_FAIL


# ---- parser --------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ltverify", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, default_format):
        p.add_argument("--format", choices=["csv", "json", "text"], default=default_format)
        p.add_argument("--out", default=None, help="write output here instead of stdout")
        p.add_argument("--config", default=None, help="flat key = value file")

    p = sub.add_parser("constants", help="table of named constants")
    common(p, "text")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("sweep", help="certified sum on a mu grid (figure data)")
    common(p, "csv")
    p.add_argument("--domain", default="sphere2", help="sphere2, torus2, sphere3 or torus3")
    p.add_argument("--k", type=float, default=1.5)
    p.add_argument("--mu-max", type=float, default=None)
    p.add_argument("--step", type=float, default=0.01)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--margin-floor", type=float, default=0.0)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the full certified pipeline")
    common(p, "json")
    p.add_argument("--k", type=float, default=1.5)
    p.add_argument("--sabotage", action="store_true",
                   help="lower every limit by 10%% (negative control)")
    p.add_argument("--quick", action="store_true", help="smaller lattice and sample sizes")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("mu0", help="sphere threshold from the trapezoid-rule bound")
    common(p, "text")
    p.add_argument("--variant", default="all",
                   choices=["all"] + [v.value for v in mu0_sphere.Variant])
    p.add_argument("--k", type=float, default=1.5)
    p.add_argument("--crude-left", action="store_true", help="use t - 2kt^2 as left side")
    p.set_defaults(func=cmd_mu0)

    p = sub.add_parser("schrodinger", help="Galerkin checks (gallery when no potential given)")
    common(p, "json")
    p.add_argument("--setting", choices=["1d", "2d"], default=None)
    p.add_argument("--cos", default=None, help="1d: a0,a1,... cosine coefficients")
    p.add_argument("--sin", default=None, help="1d: b1,b2,... sine coefficients")
    p.add_argument("--period", type=float, default=2 * math.pi)
    p.add_argument("--terms", default=None, help="2d: p:q:a:b;... for a cos(px+qy)+b sin(px+qy)")
    p.add_argument("--cutoff", type=int, default=None)
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--r", type=float, default=0.5)
    p.add_argument("--k", type=float, default=1.5)
    p.add_argument("--t", type=float, default=0.5)
    p.set_defaults(func=cmd_schrodinger)

    p = sub.add_parser("harmonics", help="addition and gradient identity residuals")
    common(p, "text")
    p.add_argument("--n", type=int, default=12)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_harmonics)
    return parser


def _apply_config(parser, argv, args):
    cfg = read_config(args.config)
    sub = parser._subparsers._group_actions[0].choices[args.command]
    known = {a.dest for a in sub._actions if a.dest not in ("help", "config")}
    unknown = sorted(set(cfg) - known)
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(unknown)}")
    defaults = {}
    for action in sub._actions:
        if action.dest in cfg:
            raw = cfg[action.dest]
            if action.const is True:  # store_true
                defaults[action.dest] = raw.lower() in ("1", "true", "yes", "on")
            else:
                val = action.type(raw) if action.type else raw
                if action.choices is not None and val not in action.choices:
                    raise UsageError(f"invalid value {raw!r} for {action.dest}")
                defaults[action.dest] = val
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.config:
            args = _apply_config(parser, argv, args)
        return args.func(args)
    except UsageError as exc:
        print(f"ltverify: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (ValueError, ArithmeticError, ResourceError) as exc:
        print(f"ltverify: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
