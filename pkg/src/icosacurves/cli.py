"""Command line entry point: ``icosacurves <command> [options]``.

Exit status: 0 when every claim passes, 1 when any claim fails, 2 for usage,
configuration or I/O errors.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
from pathlib import Path

from . import cyclo
from .forms import MUTATIONS, BinaryForm, Form, TernaryForm, is_smooth_standard, tampered
from .generators import GeneratorSet, generator_catalog
from .groups import OrderBoundExceeded, closure
from .verify import (
    VerificationReport,
    cmd_curve_galois,
    cmd_verify_icosahedral,
    cmd_verify_relations,
    cmd_verify_section2,
    cmd_verify_theorem,
    configuration,
    merge,
)

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

DEFAULTS = {
    "sqrt5_sign": 1,
    "conductor_cap": cyclo.CONDUCTOR_CAP,
    "molien_bound": 40,
    "max_d": 8,
    "format": "json",
    "timings": False,
    "out": None,
}
CONFIG_KEYS = {"sqrt5_sign", "conductor_cap", "molien_bound", "max_d"}


class ConfigError(Exception):
    pass


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    s = argparse.SUPPRESS
    p.add_argument("--config", default=s, help="TOML file with conductor_cap, molien_bound, max_d, sqrt5_sign")
    p.add_argument("--sqrt5-sign", type=int, choices=[1, -1], default=s, help="branch of sqrt(5) (default 1)")
    p.add_argument("--conductor-cap", type=int, default=s, help="largest cyclotomic conductor allowed")
    p.add_argument("--format", choices=["json", "text"], default=s)
    p.add_argument("--out", default=s, help="write the report here instead of stdout")
    p.add_argument("--timings", action="store_true", default=s, help="include wall times (not deterministic)")
    p.add_argument("--tamper", action="append", default=s, metavar="FORM:XEXP:VALUE",
                   help="test hook: override one catalog coefficient, e.g. F20:10:495")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    p = argparse.ArgumentParser(prog="icosacurves", parents=[common],
                                description="Exact verification of the C30, C20, C12 constructions.")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("verify-theorem", parents=[common], help="order, exact sequence and structure of Aut(C_d)")
    t.add_argument("--d", default="all", choices=["30", "20", "12", "all"])
    sub.add_parser("verify-relations", parents=[common], help="registered matrix word identities")
    i = sub.add_parser("verify-icosahedral", parents=[common], help="binary icosahedral group and its invariants")
    i.add_argument("--molien-bound", type=int, default=argparse.SUPPRESS)
    s = sub.add_parser("verify-section2", parents=[common], help="cyclic automorphism groups of C(d)")
    s.add_argument("--max-d", type=int, default=argparse.SUPPRESS)
    a = sub.add_parser("verify-all", parents=[common], help="all four verification suites")
    a.add_argument("--molien-bound", type=int, default=argparse.SUPPRESS)
    a.add_argument("--max-d", type=int, default=argparse.SUPPRESS)

    c = sub.add_parser("closure", parents=[common], help="close a generator set and summarise the group")
    src = c.add_mutually_exclusive_group(required=True)
    src.add_argument("--generators", help="generator-set JSON file")
    src.add_argument("--catalog", help="catalog name, e.g. Gtilde(30) or icosahedral_2x2")
    c.add_argument("--mode", choices=["linear", "projective"])
    c.add_argument("--max-order", type=int, default=10_000)

    g = sub.add_parser("galois-check", parents=[common], help="Galois point (0:0:1) of Z^d + F(X, Y)")
    g.add_argument("--curve", required=True, help="form JSON file (binary F or ternary Z^d + F)")
    m = sub.add_parser("smooth-check", parents=[common], help="smoothness of Z^d + F(X, Y)")
    m.add_argument("--curve", required=True)

    r = sub.add_parser("report", parents=[common], help="merge saved JSON report fragments")
    r.add_argument("fragments", nargs="*", help="report JSON files (none gives an empty report)")
    return p


def _settings(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    path = getattr(args, "config", None)
    if path:
        try:
            with open(path, "rb") as fh:
                data = tomllib.load(fh)
        except (OSError, tomllib.TOMLDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        unknown = set(data) - CONFIG_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(data)
    for key in DEFAULTS:
        if hasattr(args, key):
            cfg[key] = getattr(args, key)
    if cfg["sqrt5_sign"] not in (1, -1):
        raise ConfigError("sqrt5_sign must be 1 or -1")
    if int(cfg["conductor_cap"]) < 60:
        raise ConfigError("conductor_cap below 60 cannot hold the catalog (xi = z60)")
    if int(cfg["molien_bound"]) < 0:
        raise ConfigError("molien_bound must be nonnegative")
    if int(cfg["max_d"]) < 5:
        raise ConfigError("max_d must be at least 5")
    cfg["tamper"] = [_parse_tamper(t) for t in getattr(args, "tamper", [])]
    return cfg


def _parse_tamper(text: str) -> tuple[str, int, int]:
    try:
        name, exp, value = text.split(":")
        return name, int(exp), int(value)
    except ValueError as exc:
        raise ConfigError(f"bad --tamper {text!r}; expected FORM:XEXP:VALUE") from exc


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc


def _emit(text: str, out: str | None) -> None:
    if out:
        try:
            Path(out).write_text(text)
        except OSError as exc:
            raise ConfigError(f"cannot write {out}: {exc}") from exc
    else:
        sys.stdout.write(text)


def _run(args, cfg) -> VerificationReport | dict:
    sign = cfg["sqrt5_sign"]
    cmd = args.command
    if cmd == "verify-theorem":
        return cmd_verify_theorem(args.d, sign)
    if cmd == "verify-relations":
        return cmd_verify_relations(sign)
    if cmd == "verify-icosahedral":
        return cmd_verify_icosahedral(int(cfg["molien_bound"]), sign)
    if cmd == "verify-section2":
        return cmd_verify_section2(int(cfg["max_d"]), sign)
    if cmd == "verify-all":
        return merge([
            cmd_verify_theorem("all", sign),
            cmd_verify_relations(sign),
            cmd_verify_icosahedral(int(cfg["molien_bound"]), sign),
            cmd_verify_section2(int(cfg["max_d"]), sign),
        ])
    if cmd == "report":
        return merge([VerificationReport.from_json(_load_json(f)) for f in args.fragments])
    if cmd in ("galois-check", "smooth-check"):
        try:
            form = Form.from_json(_load_json(args.curve))
        except (KeyError, ValueError, TypeError) as exc:
            raise ConfigError(f"bad curve file {args.curve}: {exc}") from exc
        if cmd == "galois-check":
            return cmd_curve_galois(form)
        return _smooth_report(form)
    if cmd == "closure":
        if args.generators:
            try:
                gens = GeneratorSet.from_json(_load_json(args.generators))
            except (KeyError, ValueError, TypeError) as exc:
                raise ConfigError(f"bad generator file {args.generators}: {exc}") from exc
        else:
            try:
                gens = generator_catalog(args.catalog, sqrt5_sign=sign)
            except (KeyError, ValueError) as exc:
                raise ConfigError(str(exc)) from exc
        try:
            g = closure(gens, args.mode, max_order=args.max_order)
        except OrderBoundExceeded as exc:
            raise ConfigError(str(exc)) from exc
        orders: dict[int, int] = {}
        for k in g.orders().tolist():
            orders[k] = orders.get(k, 0) + 1
        return {"generators": gens.name, "labels": list(gens.labels), "mode": g.mode,
                "order": g.order, "element_orders": {str(k): v for k, v in sorted(orders.items())}}
    raise ConfigError(f"unknown command {cmd}")


def _smooth_report(form: Form) -> VerificationReport:
    if isinstance(form, TernaryForm):
        split = form.split_standard()
        if split is None or split[0] != 1:
            raise ConfigError("curve is not of the form Z^d + F(X, Y)")
        form = split[1]
    assert isinstance(form, BinaryForm)
    rep = VerificationReport(configuration())

    def run():
        ok = is_smooth_standard(form.degree, form)
        return ok, {"degree": form.degree, "squarefree": ok}

    rep.add(f"smooth-check/d{form.degree}", "smoothness of the standard form", run)
    return rep


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = _settings(args)
        old_cap = cyclo.set_conductor_cap(int(cfg["conductor_cap"]))
        try:
            with contextlib.ExitStack() as stack:
                for name, exp, value in cfg["tamper"]:
                    stack.enter_context(tampered(name, exp, value))
                result = _run(args, cfg)
        finally:
            cyclo.set_conductor_cap(old_cap)
        if isinstance(result, VerificationReport):
            text = result.to_text(cfg["timings"]) if cfg["format"] == "text" else result.dumps(cfg["timings"])
            _emit(text, cfg["out"])
            return EXIT_OK if result.status == "pass" else EXIT_FAIL
        _emit(json.dumps(result, indent=2, sort_keys=True) + "\n", cfg["out"])
        return EXIT_OK
    except (ConfigError, KeyError, ValueError) as exc:
        print(f"icosacurves: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


__all__ = ["MUTATIONS", "build_parser", "main"]

if __name__ == "__main__":
    sys.exit(main())
