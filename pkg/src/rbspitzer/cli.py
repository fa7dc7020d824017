"""Command-line front end.

    rbspitzer verify IDENTITY [--model M] [--weight p/q] [--n N] [--trunc T] ...
    rbspitzer renormalize CHARACTER.json [--output FILE]
    rbspitzer magnus [--model M] [--trunc T]
    rbspitzer expand IDENTITY --n N

Exit status: 0 when every check passes, 1 when an identity fails, 2 on usage
or configuration errors.  Reports are deterministic for fixed flags; timings
are only included with ``--timing``.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import os
import random
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

from . import hopf as hopf_mod
from . import identities as ids
from . import renorm
from . import series as ser
from .foundations import (
    as_rational,
    bar_sets,
    enumerate_compositions,
    enumerate_ordered_set_partitions,
    enumerate_permutations,
    omega_composition,
    render_rational,
)
from .rbcore import (
    DoubleAlgebra,
    Gen,
    PreLieL,
    PreLieR,
    Prod,
    RApp,
    RBAlgebra,
    Sum,
    check_rb,
    normal_form,
    rescale,
    tilde_R,
)
from .rbmodels import MODEL_NAMES, make_model

IDENTITIES = (
    "rb", "atkinson", "spitzer", "waring", "bs", "ncbs", "key", "tu-left", "tu-right",
    "ncqsym", "antipode", "dynkin", "magnus", "eulerian", "gamma-dynkin",
)
EXPANDABLE = ("key", "ncbs", "tu-left", "tu-right", "rb")

DEFAULT_MODEL = {
    "rb": "seq", "atkinson": "laurent", "spitzer": "laurent", "waring": "laurent", "bs": "laurent",
    "ncbs": "seq", "key": "seq", "tu-left": "seq", "tu-right": "seq", "magnus": "matrix",
}
DEGREE_CAP = 7


class ConfigError(ValueError):
    pass


@dataclass
class CliConfig:
    command: str
    target: str | None = None
    model: str | None = None
    weight: Fraction | None = None
    n: int = 4
    trunc: int | None = None
    seed: int = 0
    fmt: str = "json"
    output: str | None = None
    workers: int = 1
    unsafe_degree: bool = False
    hopf: str = "ladder"
    timing: bool = False


def parse_weight(text: str) -> Fraction:
    try:
        return as_rational(Fraction(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad weight {text!r}; expected p/q") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rbspitzer", description="Exact Rota-Baxter identity checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_model=True):
        if with_model:
            p.add_argument("--model", choices=MODEL_NAMES)
            p.add_argument("--weight", type=parse_weight, help="rescale R to reach this weight (p/q)")
        p.add_argument("--n", type=int, default=4, help="identity degree")
        p.add_argument("--trunc", type=int, help="series order / sequence length / Hopf degree")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", dest="fmt", choices=("json", "csv", "text"), default="json")
        p.add_argument("--output")
        p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
        p.add_argument("--unsafe-degree", action="store_true", help=f"allow n above {DEGREE_CAP}")
        p.add_argument("--timing", action="store_true", help="include elapsed times in the report")

    p = sub.add_parser("verify", help="check an identity")
    p.add_argument("target", choices=IDENTITIES)
    p.add_argument("--hopf", choices=("ladder", "trees", "ncsf"), default="ladder")
    common(p)

    p = sub.add_parser("renormalize", help="Birkhoff-decompose a character file")
    p.add_argument("target", metavar="CHARACTER_JSON")
    common(p, with_model=False)

    p = sub.add_parser("magnus", help="Magnus coefficient table and route agreement")
    common(p)

    p = sub.add_parser("expand", help="symbolic expansion of both sides in the free RB algebra")
    p.add_argument("target", choices=EXPANDABLE)
    common(p)
    return parser


def config_from_args(args) -> CliConfig:
    cfg = CliConfig(
        command=args.command,
        target=getattr(args, "target", None),
        model=getattr(args, "model", None),
        weight=getattr(args, "weight", None),
        n=args.n,
        trunc=args.trunc,
        seed=args.seed,
        fmt=args.fmt,
        output=args.output,
        workers=max(1, args.workers),
        unsafe_degree=args.unsafe_degree,
        hopf=getattr(args, "hopf", "ladder"),
        timing=args.timing,
    )
    if cfg.n < 1:
        raise ConfigError("--n must be positive")
    if cfg.n > DEGREE_CAP and not cfg.unsafe_degree:
        raise ConfigError(f"--n {cfg.n} exceeds the cap {DEGREE_CAP}; pass --unsafe-degree to override")
    if cfg.trunc is not None and cfg.trunc < 1:
        raise ConfigError("--trunc must be positive")
    return cfg


def resolve_model(cfg: CliConfig, default: str, length: int = 8) -> RBAlgebra:
    name = cfg.model or default
    model = make_model(name, length=length)
    if cfg.weight is None or cfg.weight == model.weight:
        return model
    if model.weight == 0:
        raise ConfigError(f"model {name} has weight 0; rescaling cannot reach weight {cfg.weight}")
    return rescale(model, cfg.weight / model.weight)


# --- verify ---------------------------------------------------------------------


def _summary_report(name, label, params, ok, **details) -> ids.IdentityReport:
    return ids.IdentityReport(name=name, label=label, params=params, lhs_terms=0, rhs_terms=0,
                              residual_zero=ok, details=details)


def _params(model: RBAlgebra, **extra) -> dict:
    return {"model": model.name, "weight": model.weight, **extra}


def verify(cfg: CliConfig) -> list[ids.IdentityReport]:
    rng = random.Random(cfg.seed)
    name, n = cfg.target, cfg.n
    if name == "rb":
        model = resolve_model(cfg, "seq", cfg.trunc or 6)
        pairs = 200
        start = time.perf_counter()
        ok_r = ok_t = ok_d = True
        double = DoubleAlgebra(model)
        for _ in range(pairs):
            x, y = model.random_element(rng), model.random_element(rng)
            ok_r &= check_rb(x, y).is_zero()
            tx, ty = tilde_R(x), tilde_R(y)
            ok_t &= (tx * ty - tilde_R(tilde_R(x) * y + x * tilde_R(y) + model.weight * (x * y))).is_zero()
            dx, dy = double.element(x.value), double.element(y.value)
            ok_d &= check_rb(dx, dy).is_zero()
        rep = _summary_report("rb", "Rota-Baxter relation on random pairs", _params(model, pairs=pairs),
                              ok_r and ok_t and ok_d, R=ok_r, complementary=ok_t, double_product=ok_d)
        rep.elapsed = time.perf_counter() - start
        return [rep]
    if name in ("atkinson", "spitzer"):
        model = resolve_model(cfg, DEFAULT_MODEL[name])
        order = cfg.trunc or 8
        a = model.random_element(rng)
        start = time.perf_counter()
        if name == "atkinson":
            resid = ser.atkinson_residual(a, order).is_zero()
            f_inv, g_inv = ser.atkinson_inverses(a, order)
            F, G = ser.atkinson_F(a, order), ser.atkinson_G(a, order)
            inv_ok = f_inv == ser.series_inverse(F) and g_inv == ser.series_inverse(G)
            rep = _summary_report("atkinson", "Atkinson factorization F(1 + theta a t)G = 1",
                                  _params(model, order=order), resid and inv_ok,
                                  factorization=resid, inverses=inv_ok)
        else:
            ok = ser.classical_spitzer_rhs(a, order) == ser.atkinson_F(a, order)
            rep = _summary_report("spitzer", "classical Spitzer exponential", _params(model, order=order), ok)
        rep.elapsed = time.perf_counter() - start
        return [rep]
    if name == "waring":
        model = resolve_model(cfg, "laurent")
        return [ids.check_waring(ids.default_element(model, rng), n)]
    if name == "bs":
        model = resolve_model(cfg, "laurent")
        return [ids.check_commutative_bs(ids.distinct_arguments(model, n, rng), cfg.workers)]
    if name in ("ncbs", "tu-left", "tu-right", "key"):
        model = resolve_model(cfg, "seq", max(cfg.trunc or 0, n + 2))
        if name == "key":
            return [ids.check_key_identity(n, model, ids.default_element(model, rng))]
        xs = ids.distinct_arguments(model, n, rng)
        if name == "ncbs":
            return [ids.check_ncbs(xs, cfg.workers)]
        return [ids.check_new_identity(xs, name.split("-")[1], cfg.workers)]
    if name == "ncqsym":
        return [ids.check_ncqsym(n, cfg.trunc or 8)]
    if name == "antipode":
        return [ids.check_antipode_spitzer(n)]
    if name == "dynkin":
        return [ids.check_dynkin_generators(n)]
    if name == "magnus":
        return [magnus_routes(cfg)[1]]
    if name in ("eulerian", "gamma-dynkin"):
        return [_hopf_check(cfg, rng)]
    raise ConfigError(f"unknown identity {name!r}")


def _hopf_check(cfg: CliConfig, rng) -> ids.IdentityReport:
    if cfg.hopf == "ncsf":
        raise ConfigError("characters need a commutative Hopf algebra (ladder or trees)")
    degree = cfg.trunc or 6
    start = time.perf_counter()
    gamma = renorm.random_character(cfg.hopf, degree, rng)
    g = gamma.linmap
    if cfg.target == "eulerian":
        lg = hopf_mod.conv_log(g)
        infinitesimal = hopf_mod.is_infinitesimal(lg)
        round_trip = hopf_mod.conv_exp(lg) == g
        rep = _summary_report("eulerian", "convolution log/exp correspondence",
                              {"hopf": cfg.hopf, "degree": degree}, infinitesimal and round_trip,
                              infinitesimal=infinitesimal, round_trip=round_trip)
    else:
        D = hopf_mod.dynkin(g)
        round_trip = hopf_mod.gamma_reconstruct(D) == g
        H = g.hopf
        quasi = all(
            hopf_mod.dynkin_endomorphism(H, hopf_mod.dynkin_endomorphism(H, {b: Fraction(1)}))
            == hopf_mod.grading(H, hopf_mod.dynkin_endomorphism(H, {b: Fraction(1)}))
            for b in H.basis_up_to(min(degree, 5))
        )
        rep = _summary_report("gamma-dynkin", "Dynkin map and its inverse on characters",
                              {"hopf": cfg.hopf, "degree": degree}, round_trip and quasi,
                              reconstruction=round_trip, quasi_idempotent=quasi)
    rep.elapsed = time.perf_counter() - start
    return rep


# --- magnus ---------------------------------------------------------------------


def magnus_routes(cfg: CliConfig) -> tuple[dict, ids.IdentityReport]:
    rng = random.Random(cfg.seed)
    model = resolve_model(cfg, "matrix", cfg.trunc or 8)
    order = cfg.trunc or 6
    start = time.perf_counter()
    a = ids.default_element(model, rng) if model.name.startswith("seq") else model.random_element(rng)
    rec = ser.magnus_omega_recursive(a, order)
    stri = ser.magnus_omega_strichartz(a, order)
    ref = ser.magnus_omega_from_log(a, order)
    exp_ok = ser.series_exp(ref) == ser.atkinson_F(a, order)
    variant_c2 = ser.strichartz_coefficient((2,), leading_factor=True)
    flags = {
        "recursive_matches_log": rec == ref,
        "strichartz_matches_log": stri == ref,
        "exp_omega_matches_F": exp_ok,
    }
    table = [
        {"composition": list(k), "c": render_rational(v)}
        for k, v in sorted(ser.strichartz_table(order).items(), key=lambda kv: (sum(kv[0]), kv[0]))
    ]
    data = {
        "model": model.name,
        "weight": render_rational(model.weight),
        "order": order,
        "coefficients": table,
        "routes": flags,
        "leading_factor_variant": {
            "c(2)": render_rational(variant_c2),
            "passes_order_two_check": variant_c2 == Fraction(1, 2),
        },
    }
    rep = _summary_report("magnus", "three routes to the Magnus exponent", _params(model, order=order),
                          all(flags.values()), **flags)
    rep.elapsed = time.perf_counter() - start
    return data, rep


# --- expand ---------------------------------------------------------------------


def _left_word_term(args):
    t = args[0]
    for a in args[1:]:
        t = PreLieL(t, a)
    return t


def _right_word_term(args):
    t = args[-1]
    for a in reversed(args[:-1]):
        t = PreLieR(a, t)
    return t


def _sum(pairs):
    pairs = [(as_rational(c), t) for c, t in pairs if c]
    if len(pairs) == 1 and pairs[0][0] == 1:
        return pairs[0][1]
    return Sum(tuple(pairs))


def _prod(factors):
    return factors[0] if len(factors) == 1 else Prod(tuple(factors))


def _nested_left_term(order):
    t = RApp(Gen(order[0]))
    for i in order[1:]:
        t = RApp(Prod((t, Gen(i))))
    return t


def _nested_right_term(order):
    t = RApp(Gen(order[-1]))
    for i in reversed(order[:-1]):
        t = RApp(Prod((Gen(i), t)))
    return t


def _packets(sigma, bars):
    packets, cur = [], []
    for pos, v in enumerate(sigma, start=1):
        cur.append(Gen(v))
        if pos in bars:
            packets.append(cur)
            cur = []
    packets.append(cur)
    return packets


def expand_terms(name: str, n: int, theta) -> tuple:
    """(lhs, rhs) as RBTerms over generators Z1..Zn (Z1 alone for the key identity)."""
    if name == "rb":
        x, y = Gen(1), Gen(2)
        lhs = Prod((RApp(x), RApp(y)))
        rhs = RApp(_sum([(1, Prod((RApp(x), y))), (1, Prod((x, RApp(y)))), (theta, Prod((x, y)))]))
        return lhs, rhs
    if name == "key":
        x = Gen(1)
        lhs = RApp(x)
        for _ in range(n - 1):
            lhs = RApp(Prod((lhs, x)))
        rhs = _sum([
            (omega_composition(comp), _prod([RApp(_left_word_term([x] * i)) for i in comp]))
            for comp in enumerate_compositions(n)
        ])
        return lhs, rhs
    perms = list(enumerate_permutations(n))
    if name == "ncbs":
        lhs = _sum([(1, _nested_left_term(p)) for p in perms])

        def block(b):
            return _sum([(1, RApp(_left_word_term([Gen(j) for j in order])))
                         for order in itertools.permutations(b)])

        rhs = _sum([
            (omega_composition([len(b) for b in pi]), _prod([block(b) for b in pi]))
            for pi in enumerate_ordered_set_partitions(n)
        ])
        return lhs, rhs
    if name in ("tu-left", "tu-right"):
        left = name == "tu-left"
        lhs = _sum([(1, (_nested_left_term if left else _nested_right_term)(p)) for p in perms])
        terms = []
        for sigma in perms:
            E, F = bar_sets(sigma)
            packets = _packets(sigma, E if left else F)
            fold = _left_word_term if left else _right_word_term
            # R of a double product of packets is the product of their R's
            terms.append((1, _prod([RApp(fold(p)) for p in packets])))
        return lhs, _sum(terms)
    raise ConfigError(f"cannot expand {name!r}")


def expand(cfg: CliConfig) -> dict:
    theta = cfg.weight if cfg.weight is not None else Fraction(1)
    if cfg.n > 4 and not cfg.unsafe_degree:
        raise ConfigError("symbolic expansion is capped at --n 4; pass --unsafe-degree to override")
    lhs, rhs = expand_terms(cfg.target, cfg.n, theta)
    nl, nr = normal_form(lhs, theta), normal_form(rhs, theta)
    return {
        "identity": cfg.target,
        "n": cfg.n,
        "weight": render_rational(theta),
        "lhs": lhs.render(),
        "rhs": rhs.render(),
        "lhs_normal_form": nl.render(),
        "rhs_normal_form": nr.render(),
        "normal_form_terms": len(nl),
        "equal": dict(nl) == dict(nr),
    }


# --- output ---------------------------------------------------------------------


def _verify_payload(cfg: CliConfig, reports) -> dict:
    return {
        "command": "verify",
        "identity": cfg.target,
        "seed": cfg.seed,
        "passed": all(r.residual_zero for r in reports),
        "reports": [r.to_dict(include_timing=cfg.timing) for r in reports],
    }


def _flatten(prefix, value, rows):
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, rows)
    elif isinstance(value, list):
        for i, v in enumerate(value):
            _flatten(f"{prefix}[{i}]", v, rows)
    else:
        rows.append((prefix, value))


def render_output(data: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(data, indent=2, sort_keys=True) + "\n"
    rows: list = []
    _flatten("", data, rows)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["field", "value"])
        for k, v in rows:
            writer.writerow([k, json.dumps(v) if isinstance(v, bool) else v])
        return buf.getvalue()
    return "".join(f"{k}: {v}\n" for k, v in rows)


def emit(cfg: CliConfig, data: dict):
    text = render_output(data, cfg.fmt)
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        if cfg.command == "verify":
            reports = verify(cfg)
            data = _verify_payload(cfg, reports)
            ok = data["passed"]
        elif cfg.command == "renormalize":
            gamma = renorm.ingest_character(cfg.target)
            if cfg.trunc is not None:
                gamma = renorm.RegCharacter(gamma.hopf, cfg.trunc, gamma.generators, max_pole=gamma.max_pole)
            data, ok = renorm.renormalize(gamma)
            data = {"command": "renormalize", **data, "passed": ok}
        elif cfg.command == "magnus":
            data, rep = magnus_routes(cfg)
            ok = rep.residual_zero
            data = {"command": "magnus", **data, "passed": ok}
        else:
            data = {"command": "expand", **expand(cfg)}
            ok = data["equal"]
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, ids.IdentityError, ser.SeriesError, renorm.CharacterFileError,
            renorm.WindowOverflowError, hopf_mod.HopfError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    emit(cfg, data)
    return 0 if ok else 1


def main_exit():
    sys.exit(main())
