"""Batch driver.

Subcommands build series, apply the operators, run verification sweeps, and
emit machine-readable JSON reports; `suite <name>` reproduces one acceptance
criterion end to end.

Exit codes: 0 all checks passed, 1 check failure, 2 usage error,
3 numerical-infrastructure failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import mpmath as mp

from . import acceptance
from .bol_ops import (OperatorError, delta_a, delta0_closed_form,
                      rankin_cohen, selberg_lift)
from .characters import CharacterError, make_character
from .forms import FormError, FormMeta, HalfWeight
from .lseries import (ConvergenceError, InversionError, LSeriesError,
                      QuadratureError, SCParams, bessel_half, fe_residual,
                      lseries_value, make_testfunction, sc_residual)
from .modular_verify import (VerifyError, fricke_residual, sample_pairs,
                             automorphy_residual)
from .qseries import PrecisionError, QSeries, QSeriesError
from .thetas import ThetaError, theta_series

SCHEMA_VERSION = 1

INFRA_ERRORS = (QuadratureError, InversionError, ConvergenceError,
                PrecisionError)
USAGE_ERRORS = (CharacterError, FormError, ThetaError, OperatorError,
                LSeriesError, VerifyError, QSeriesError, ValueError, KeyError,
                OSError)


def _weight(text: str) -> HalfWeight:
    return HalfWeight.of(Fraction(text))


def _parse_meta(text: str) -> FormMeta:
    """'2k,N,charspec,n0' with 2k the doubled weight."""
    parts = text.split(",")
    if len(parts) != 4:
        raise ValueError(f"meta must be '2k,N,charspec,n0', got {text!r}")
    return FormMeta(HalfWeight(int(parts[0])), int(parts[1]),
                    make_character(parts[2]), int(parts[3]))


def _parse_grid(text: str) -> list:
    """'start:stop:count' -> evenly spaced points, or 'a,b,c' literals."""
    if ":" in text:
        a, b, n = text.split(":")
        a, b, n = float(a), float(b), int(n)
        if n < 1:
            raise ValueError("grid count must be positive")
        if n == 1:
            return [a]
        return [a + (b - a) * j / (n - 1) for j in range(n)]
    return [float(x) for x in text.split(",")]


def _parse_h(text: str):
    """h mini-language: 'one', 'poly:c0,c1,...', 'recip:c'."""
    kind, _, rest = text.partition(":")
    if kind == "one":
        return (lambda x: 1), 1.0
    if kind == "poly":
        cs = [float(c) for c in rest.split(",")]
        return (lambda x: sum(c * x ** j for j, c in enumerate(cs))), \
            sum(abs(c) for c in cs)
    if kind == "recip":
        c = float(rest or "1")
        return (lambda x: 1 / (c + x)), 1.0 / abs(c)
    raise ValueError(f"unknown h spec {text!r}")


def _load_config(path: str) -> dict:
    cfg = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, val = line.partition("=")
            cfg[key.strip()] = val.strip()
    return cfg


def _emit(report: dict, args) -> None:
    report["schema_version"] = SCHEMA_VERSION
    report["config"] = {"prec": args.prec, "tol": args.tol, "seed": args.seed,
                        "argv": sys.argv[1:]}
    text = json.dumps(report, indent=1, sort_keys=True, default=str)
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _mpc_pair(z) -> list:
    z = mp.mpc(z)
    return [float(mp.re(z)), float(mp.im(z))]


# ---------------------------------------------------------------------------
# subcommand bodies (return process exit code)
# ---------------------------------------------------------------------------

def _cmd_theta(args) -> int:
    kind = {"theta0": "theta0", "theta1": "theta1", "st": "serre_stark"}[args.kind]
    series, meta = theta_series(kind, make_character(args.char),
                                args.prec, t=args.t)
    series.to_file(args.out)
    _emit({"command": "theta", "kind": args.kind, "out": args.out,
           "weight": str(meta.weight), "level": meta.level,
           "character": str(meta.character), "passed": True}, args)
    return 0


def _cmd_delta(args) -> int:
    from .thetas import ThetaContext
    f = QSeries.from_file(args.infile)
    ctx = ThetaContext(make_character(args.psi0), make_character(args.psi1))
    k = _weight(args.k)
    a = Fraction(args.a)
    if args.closed_form:
        if a != 0:
            raise ValueError("--closed-form requires a = 0")
        out = delta0_closed_form(f, k, ctx)
        meta = None
    else:
        out, meta = delta_a(f, k, a, ctx, args.prec)
    out.to_file(args.out)
    _emit({"command": "delta", "a": str(a), "k": str(k), "out": args.out,
           "precision": str(out.precision),
           "meta": None if meta is None else
           {"weight": str(meta.weight), "level": meta.level,
            "character": str(meta.character)},
           "passed": True}, args)
    return 0


def _cmd_rc(args) -> int:
    f = QSeries.from_file(args.f)
    g = QSeries.from_file(args.g)
    out = rankin_cohen(f, g, args.n, _weight(args.k), _weight(args.l))
    out.to_file(args.out)
    _emit({"command": "rc", "n": args.n, "out": args.out,
           "two_pi_i_pow": out.two_pi_i_pow, "passed": True}, args)
    return 0


def _cmd_selberg(args) -> int:
    f = QSeries.from_file(args.f)
    F, metaF, S, metaS = selberg_lift(f, args.k)
    F.to_file(args.out_f)
    S.to_file(args.out_s)
    _emit({"command": "selberg", "k": args.k,
           "lift": {"out": args.out_f, "weight": str(metaF.weight),
                    "level": metaF.level},
           "image": {"out": args.out_s, "weight": str(metaS.weight),
                     "level": metaS.level},
           "passed": True}, args)
    return 0


def _cmd_verify(args) -> int:
    f = QSeries.from_file(args.infile)
    meta = _parse_meta(args.meta)
    bits = args.prec or 192
    if f.mode == "exact":
        f = f.to_float(bits)
    tol = args.tol if args.tol is not None else 1e-10
    report = {"command": "verify", "meta": args.meta, "tol": tol}
    ok = True
    if args.fricke:
        import random
        rng = random.Random(args.seed or 0)
        zs = [complex(rng.uniform(-0.4, 0.4), rng.uniform(0.7, 1.3))
              for _ in range(args.pairs)]
        g = QSeries.from_file(args.g) if args.g else f
        if g.mode == "exact":
            g = g.to_float(bits)
        const = complex(args.constant) if args.constant else 1
        rep = fricke_residual(f, g, args.fricke, meta.weight, const, zs,
                              prec_bits=bits)
        report["fricke"] = rep
        ok = rep["max_residual"] < tol
    else:
        gam, zs = sample_pairs(meta.level, args.c_max, args.pairs,
                               args.seed or 0)
        rep = automorphy_residual(f, meta, gam, zs, prec_bits=bits)
        report["automorphy"] = rep
        ok = rep["max_residual"] < tol
    report["passed"] = bool(ok)
    _emit(report, args)
    return 0 if ok else 1


def _cmd_lseries(args) -> int:
    f = QSeries.from_file(args.infile)
    chi = make_character(args.chi)
    phi = make_testfunction(args.phi)
    bits = args.prec or 128
    val = lseries_value(f, chi, phi, prec_bits=bits)
    _emit({"command": "lseries", "chi": args.chi, "phi": args.phi,
           "value": _mpc_pair(val), "passed": True}, args)
    return 0


def _cmd_fe(args) -> int:
    f = QSeries.from_file(args.f)
    g = QSeries.from_file(args.g)
    meta = _parse_meta(args.meta)
    chi = make_character(args.chi)
    phi = make_testfunction(args.phi)
    bits = args.prec or 128
    tol = args.tol if args.tol is not None else 1e-6
    rep = fe_residual(f, g, meta, chi, phi, prec_bits=bits)
    ok = rep["residual"] < tol
    _emit({"command": "fe", "meta": args.meta, "chi": args.chi,
           "phi": args.phi, "tol": tol,
           "lhs": _mpc_pair(rep["lhs"]), "rhs": _mpc_pair(rep["rhs"]),
           "constant": _mpc_pair(rep["constant"]),
           "residual": rep["residual"], "passed": bool(ok)}, args)
    return 0 if ok else 1


def _cmd_sc(args) -> int:
    cfg = _load_config(args.params)
    h, h_bound = _parse_h(args.h)
    params = SCParams(
        k=HalfWeight(int(cfg["2k"])),
        N=int(cfg["N"]),
        N_prime=int(cfg["Nprime"]),
        D=int(cfg["D"]),
        chi=make_character(cfg["chi"]),
        psi=make_character(cfg["psi"]),
        psi_prime=make_character(cfg["psiPrime"]),
        lam=complex(cfg.get("lambda", "1")),
        h=h, h_bound=h_bound)
    phi = make_testfunction(cfg.get("phi", "bump:1,2"))
    bits = args.prec or 96
    tol = mp.mpf(args.tol) if args.tol is not None else mp.mpf("1e-8")
    rep = sc_residual(params, phi, _parse_grid(args.p_grid),
                      alpha_mode=cfg.get("alphaMode", "time"),
                      prec_bits=bits, tol=tol)
    _emit({"command": "sc", "params": args.params, "h": args.h,
           "b": _mpc_pair(rep["b"]),
           "samples": [{"p": _mpc_pair(s["p"]), "lhs": _mpc_pair(s["lhs"]),
                        "rhs": _mpc_pair(s["rhs"]),
                        "residual": s["residual"]} for s in rep["samples"]],
           "max_residual": rep["max_residual"], "passed": True}, args)
    return 0


def _cmd_bessel(args) -> int:
    bits = args.prec or 128
    sign = 1 if args.sign in ("+", "+1", "plus") else -1
    rows = []
    with mp.workprec(bits):
        for z in _parse_grid(args.z):
            val = bessel_half(args.n, sign, z, prec_bits=bits)
            rows.append({"z": z, "value": _mpc_pair(val)})
    _emit({"command": "bessel", "n": args.n, "sign": sign, "table": rows,
           "passed": True}, args)
    return 0


def _cmd_suite(args) -> int:
    if args.name == "all":
        names = list(acceptance.SUITES)
    else:
        names = [args.name]
    reports = []
    ok = True
    for name in names:
        kw = {}
        if args.prec is not None:
            kw["prec"] = args.prec
        if args.tol is not None:
            kw["tol"] = args.tol
        if args.seed is not None:
            kw["seed"] = args.seed
        rep = acceptance.run_suite(name, **kw)
        reports.append(rep)
        ok = ok and rep["passed"]
    _emit({"command": "suite", "suites": reports, "passed": bool(ok)}, args)
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _global_flags(parser, suppress: bool) -> None:
    d = argparse.SUPPRESS if suppress else None
    parser.add_argument("--json", metavar="FILE", default=d,
                        help="write the JSON report to FILE instead of stdout")
    parser.add_argument("--prec", type=int, default=d,
                        help="working precision (bits)")
    parser.add_argument("--tol", type=float, default=d,
                        help="default tolerance")
    parser.add_argument("--seed", type=int, default=d, help="sampling seed")
    parser.add_argument("--config", metavar="FILE", default=d,
                        help="key=value defaults for prec/tol/seed")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="bolhalf",
        description="q-series operators, modularity certification, and the "
                    "L-series laboratory")
    _global_flags(p, suppress=False)
    # the same flags are accepted after the subcommand; SUPPRESS keeps the
    # subparser from clobbering values given before it
    shared = argparse.ArgumentParser(add_help=False)
    _global_flags(shared, suppress=True)
    sub = p.add_subparsers(dest="command", parser_class=argparse.ArgumentParser)
    sub_kw = {"parents": [shared]}

    q = sub.add_parser("theta", **sub_kw, help="build a theta series")
    q.add_argument("--kind", required=True, choices=["theta0", "theta1", "st"])
    q.add_argument("--char", required=True)
    q.add_argument("--t", type=int, default=1)
    q.add_argument("--out", required=True)
    q.set_defaults(func=_cmd_theta, needs_prec=True)

    q = sub.add_parser("delta", **sub_kw, help="apply the delta_a operator")
    q.add_argument("--a", required=True)
    q.add_argument("--k", required=True, help="weight, e.g. 5/2")
    q.add_argument("--psi0", required=True)
    q.add_argument("--psi1", required=True)
    q.add_argument("--in", dest="infile", required=True)
    q.add_argument("--out", required=True)
    q.add_argument("--closed-form", action="store_true")
    q.set_defaults(func=_cmd_delta, needs_prec=True)

    q = sub.add_parser("rc", **sub_kw, help="Rankin-Cohen bracket")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--k", required=True)
    q.add_argument("--l", required=True)
    q.add_argument("f")
    q.add_argument("g")
    q.add_argument("--out", required=True)
    q.set_defaults(func=_cmd_rc)

    q = sub.add_parser("selberg", **sub_kw, help="degree-preserving theta lift")
    q.add_argument("--k", type=int, required=True)
    q.add_argument("f")
    q.add_argument("--out-f", required=True)
    q.add_argument("--out-s", required=True)
    q.set_defaults(func=_cmd_selberg)

    q = sub.add_parser("verify", **sub_kw, help="automorphy / Fricke residual sweep")
    q.add_argument("--in", dest="infile", required=True)
    q.add_argument("--meta", required=True, help="'2k,N,charspec,n0'")
    q.add_argument("--fricke", type=int)
    q.add_argument("--g", help="comparison series for --fricke")
    q.add_argument("--constant", help="Fricke constant as a complex literal")
    q.add_argument("--pairs", type=int, default=20)
    q.add_argument("--c-max", type=int, default=3)
    q.set_defaults(func=_cmd_verify)

    q = sub.add_parser("lseries", **sub_kw, help="twisted L-series value")
    q.add_argument("--in", dest="infile", required=True)
    q.add_argument("--chi", required=True)
    q.add_argument("--phi", required=True)
    q.set_defaults(func=_cmd_lseries)

    q = sub.add_parser("fe", **sub_kw, help="functional-equation residual")
    q.add_argument("--f", required=True)
    q.add_argument("--g", required=True)
    q.add_argument("--meta", required=True)
    q.add_argument("--chi", required=True)
    q.add_argument("--phi", required=True)
    q.set_defaults(func=_cmd_fe)

    q = sub.add_parser("sc", **sub_kw, help="sufficient-condition residual landscape")
    q.add_argument("--params", required=True, help="key=value parameter file")
    q.add_argument("--h", required=True, help="'one', 'poly:c0,c1,..', 'recip:c'")
    q.add_argument("--p-grid", required=True, help="'start:stop:count' or 'a,b,c'")
    q.set_defaults(func=_cmd_sc)

    q = sub.add_parser("bessel", **sub_kw, help="half-integer Bessel closed forms")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--sign", default="+", choices=["+", "-", "+1", "-1", "plus", "minus"])
    q.add_argument("--z", required=True, help="'start:stop:count' or 'a,b,c'")
    q.set_defaults(func=_cmd_bessel)

    q = sub.add_parser("suite", **sub_kw, help="run an acceptance suite")
    q.add_argument("name", choices=list(acceptance.SUITES) + ["all"])
    q.set_defaults(func=_cmd_suite)

    q = sub.add_parser("run", **sub_kw, help="show usage")
    q.set_defaults(func=None)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None or args.command == "run":
        parser.print_help()
        return 0
    if args.config:
        cfg = _load_config(args.config)
        if args.prec is None and "prec" in cfg:
            args.prec = int(cfg["prec"])
        if args.tol is None and "tol" in cfg:
            args.tol = float(cfg["tol"])
        if args.seed is None and "seed" in cfg:
            args.seed = int(cfg["seed"])
    if getattr(args, "needs_prec", False) and args.prec is None:
        parser.error(f"{args.command} requires --prec")
    try:
        return args.func(args)
    except INFRA_ERRORS as exc:
        _emit({"command": args.command, "passed": False,
               "error": type(exc).__name__, "message": str(exc)}, args)
        return 3
    except USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
