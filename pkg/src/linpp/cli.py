"""Command-line front end: ``linpp <verb> [flags]``.

Exit codes: 0 success, 1 domain error (JSON on stderr), 2 usage error.

Polynomial flags take comma-separated coefficients, constant term first.
Each coefficient is an integer code, or a slash-separated coordinate vector
over the next field down (``"0/1,1"``). A JSON list or ``{"level", "coeffs"}``
object is also accepted.
"""

from __future__ import annotations

import argparse
import json
import struct
import sys

from .cyclo_factor import factor_xn_minus_1, trace_divisor, variant_divisor
from .errors import LinPPError, NotAPP, PreconditionFailed
from .field_tower import FieldTower, build_tower, enumeration_bound
from .oracle import (
    SweepConfig,
    agreement_sweep,
    is_cpp_bruteforce,
    is_permutation_bruteforce,
)
from .pp_engine import (
    BaseConstructInput,
    InverseSpec,
    PPSpec,
    check_cpp_trace,
    check_pp_general,
    check_pp_trace,
    check_pp_variant,
    construct_cpp_from_base,
    construct_from_base_pp,
    construct_variant_from_base_pp,
    evaluate_inverse,
    invert_trace_pp,
    invert_variant_pp,
    iterate_construction,
    value_table,
)
from .polyring import Poly
from .serialize import poly_from_json, poly_to_json


class UsageError(Exception):
    pass


# -- flag parsing -----------------------------------------------------------

def parse_coeff(token: str, field) -> int:
    token = token.strip()
    if "/" in token:
        if field.base is None:
            raise UsageError(f"{token!r}: {field.level} has no coordinate form")
        parts = [int(x) for x in token.split("/")]
        if len(parts) != field.degree or any(not 0 <= x < field.base.size for x in parts):
            raise UsageError(f"{token!r} is not a coordinate vector of {field.level}")
        return field.from_vec(parts)
    c = int(token)
    if not 0 <= c < field.size:
        raise UsageError(f"coefficient {c} is out of range for {field.level}")
    return c


def parse_poly(text: str, tower: FieldTower, level: str) -> Poly:
    text = text.strip()
    try:
        if text.startswith(("[", "{")):
            return poly_from_json(json.loads(text), tower, level)
        if not text:
            return Poly(tower.field(level))
        F = tower.field(level)
        return Poly(F, [parse_coeff(tok, F) for tok in text.split(",")])
    except (ValueError, KeyError, TypeError) as exc:
        if isinstance(exc, LinPPError):
            raise
        raise UsageError(f"cannot parse polynomial {text!r}: {exc}") from None


def parse_elem(text: str, tower: FieldTower, level: str) -> int:
    try:
        return parse_coeff(text, tower.field(level))
    except ValueError:
        raise UsageError(f"cannot parse element {text!r}") from None


def read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def load_map(path: str):
    obj = read_json(path)
    kind = obj.get("kind") if isinstance(obj, dict) else None
    if kind == "PPSpec":
        return PPSpec.from_json(obj)
    if kind == "InverseSpec":
        return InverseSpec.from_json(obj)
    raise UsageError(f"{path} is neither a PPSpec nor an InverseSpec")


def _tower(args) -> FieldTower:
    if args.p is None or args.n is None:
        raise UsageError("--p and --n are required")
    return build_tower(args.p, args.k, args.n)


# -- output -----------------------------------------------------------------

def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def emit(args, payload):
    """Write text or bytes to ``--out`` (stdout by default)."""
    data = payload.encode() if isinstance(payload, str) else payload
    if args.out in (None, "-"):
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        with open(args.out, "wb") as fh:
            fh.write(data)


def format_table(values: list[int], fmt: str):
    if fmt == "json":
        return dumps(values)
    if fmt == "csv":
        return "index,output_index\n" + "".join(f"{i},{v}\n" for i, v in enumerate(values))
    if fmt == "bin":
        return struct.pack(f"<{len(values)}Q", *values)
    raise UsageError(f"unknown table format {fmt!r}")


def map_values(m) -> list[int]:
    if isinstance(m, PPSpec):
        return value_table(m)
    return [evaluate_inverse(m, c) for c in m.tower.fqn.elements()]


# -- verbs ------------------------------------------------------------------

def cmd_tower(args):
    t = _tower(args)
    emit(args, dumps({"kind": "FieldTower", "q": t.q, "size": t.size, **t.to_json()}))


def cmd_factor(args):
    t = _tower(args)
    fs = factor_xn_minus_1(t)
    emit(args, dumps({"kind": "FactorSet", "tower": t.to_json(), "n": t.n,
                      "squarefree": fs.is_squarefree(), "factors": fs.to_json()}))


def cmd_construct(args):
    t = _tower(args)
    b = parse_poly(args.b, t, "Fq")
    h = parse_poly(args.h, t, "Fq")
    k = parse_poly(args.kpoly, t, "Fq")
    _, spec = construct_from_base_pp(BaseConstructInput(b, h, k, t, args.seed))
    emit(args, dumps(spec.to_json()))


def cmd_construct_cpp(args):
    t = _tower(args)
    b = parse_poly(args.b, t, "Fq")
    h = parse_poly(args.h, t, "Fq")
    _, spec = construct_cpp_from_base(b, h, t, args.seed)
    emit(args, dumps(spec.to_json()))


def cmd_construct_variant(args):
    t = _tower(args)
    a = parse_elem(args.a, t, "Fq")
    b = parse_poly(args.b, t, "Fq")
    h = parse_poly(args.h, t, "Fq")
    k = parse_poly(args.kpoly, t, "Fqn")
    _, spec = construct_variant_from_base_pp(b, a, h, k, t, args.seed)
    emit(args, dumps(spec.to_json()))


def _variant_a(spec: PPSpec) -> int | None:
    """``a`` with ``g = (x^n - 1)/(x - a)``, or None."""
    t = spec.tower
    for a in range(1, t.q):
        if t.fq.pow(a, t.n) == 1 and variant_divisor(t, a) == spec.g:
            return a
    return None


def _criterion(spec: PPSpec):
    t = spec.tower
    a = _variant_a(spec)
    if a == 1 and all(c < t.q for c in spec.k.coeffs):
        return "trace", check_pp_trace(spec.f, spec.h, spec.k, t)
    if a is not None:
        return "variant", check_pp_variant(spec.f, a, spec.h, spec.k, t)
    return "general", check_pp_general(spec)


def cmd_verify(args):
    spec = load_map(args.spec)
    if not isinstance(spec, PPSpec):
        raise UsageError("verify expects a PPSpec")
    t = spec.tower
    if args.cpp:
        if spec.g != trace_divisor(t) or spec.k != Poly(t.fq, [1]):
            raise PreconditionFailed("CPP criterion needs g = (x^n-1)/(x-1) and k = 1")
        name, verdict = "cpp_trace", check_cpp_trace(spec.f, spec.h, t)
        truth = is_cpp_bruteforce(spec)
    else:
        name, verdict = _criterion(spec)
        truth = is_permutation_bruteforce(spec)
    report = {"criterion": name, "criterion_verdict": verdict.ok, "failed": verdict.failed,
              "oracle_verdict": truth, "agree": verdict.ok == truth}
    emit(args, dumps(report))
    if not truth:
        raise NotAPP("oracle: not a " + ("CPP" if args.cpp else "permutation"))
    if verdict.ok != truth:
        raise LinPPError("criterion and oracle disagree")


def cmd_invert(args):
    spec = load_map(args.spec)
    if not isinstance(spec, PPSpec):
        raise UsageError("invert expects a PPSpec")
    t = spec.tower
    a = _variant_a(spec)
    if a == 1 and all(c < t.q for c in spec.k.coeffs):
        inv = invert_trace_pp(spec.f, spec.h, spec.k, t)
    elif a is not None:
        inv = invert_variant_pp(spec.f, a, spec.h, spec.k, t)
    else:
        raise PreconditionFailed("closed-form inverses need g = (x^n-1)/(x-a)")
    emit(args, dumps(inv.to_json()))


def cmd_table(args):
    first = load_map(args.spec)
    values = map_values(first)
    if args.then:
        second = load_map(args.then)
        if second.tower != first.tower:
            raise UsageError("--spec and --then live over different towers")
        outer = map_values(second)
        values = [outer[v] for v in values]
    emit(args, format_table(values, args.format))


def cmd_sweep(args):
    if args.p is None or args.n is None:
        raise UsageError("--p and --n are required")
    cfg = SweepConfig(args.p, args.k, args.n, args.trials, seed=args.seed or 0, mode=args.mode,
                      deg_f=args.deg_f, deg_h=args.deg_h, deg_k=args.deg_k)
    if args.mode == "variant":
        cfg.a = parse_elem(args.a, _tower(args), "Fq")
    report = agreement_sweep(cfg).to_json()
    report.pop("elapsed")  # keeps the artifact byte-identical across runs
    emit(args, dumps(report))


def _codes(text: str) -> list[int]:
    try:
        return [int(c) for c in text.split(",")]
    except ValueError:
        raise UsageError(f"{text!r}: iterate takes integer codes only") from None


def cmd_iterate(args):
    t = _tower(args)
    b = parse_poly(args.b, t, "Fq")
    hs, ks = args.h or ["1"], args.kpoly or ["1"]
    if len(hs) not in (1, args.levels) or len(ks) not in (1, args.levels):
        raise UsageError("give --h / --kpoly once or once per level")
    params = []
    for i in range(args.levels):
        h, k = hs[i % len(hs)], ks[i % len(ks)]
        # codes below q are valid at every level; coordinate forms are not
        params.append((_codes(h), _codes(k), None if args.seed is None else args.seed + i))
    levels = iterate_construction(b, args.levels, params, t)
    out = []
    for lv in levels:
        verified = (is_permutation_bruteforce(lv.spec)
                    if lv.tower.size <= enumeration_bound() else None)
        out.append({"size": lv.tower.size, "base": poly_to_json(lv.base, lv.tower),
                    "spec": lv.spec.to_json(), "oracle_verdict": verified})
    emit(args, dumps({"kind": "Iteration", "levels": out}))
    if any(lv["oracle_verdict"] is False for lv in out):
        raise NotAPP("a level failed the oracle")


# -- entry point ------------------------------------------------------------

VERBS = {
    "tower": cmd_tower,
    "factor": cmd_factor,
    "construct": cmd_construct,
    "construct-cpp": cmd_construct_cpp,
    "construct-variant": cmd_construct_variant,
    "verify": cmd_verify,
    "invert": cmd_invert,
    "table": cmd_table,
    "sweep": cmd_sweep,
    "iterate": cmd_iterate,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int)
    common.add_argument("--k", type=int, default=1)
    common.add_argument("--n", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--out")
    common.add_argument("--format", choices=["json", "csv", "bin"], default="json")

    parser = argparse.ArgumentParser(prog="linpp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)
    sub.add_parser("tower", parents=[common])
    sub.add_parser("factor", parents=[common])

    c = sub.add_parser("construct", parents=[common])
    c.add_argument("--b", required=True)
    c.add_argument("--h", required=True)
    c.add_argument("--kpoly", default="1")

    c = sub.add_parser("construct-cpp", parents=[common])
    c.add_argument("--b", required=True)
    c.add_argument("--h", required=True)

    c = sub.add_parser("construct-variant", parents=[common])
    c.add_argument("--a", required=True)
    c.add_argument("--b", required=True)
    c.add_argument("--h", required=True)
    c.add_argument("--kpoly", default="1")

    c = sub.add_parser("verify", parents=[common])
    c.add_argument("--spec", required=True)
    c.add_argument("--cpp", action="store_true", help="test complete permutation instead")

    c = sub.add_parser("invert", parents=[common])
    c.add_argument("--spec", required=True)

    c = sub.add_parser("table", parents=[common])
    c.add_argument("--spec", required=True)
    c.add_argument("--then", help="second map, applied after --spec")

    c = sub.add_parser("sweep", parents=[common])
    c.add_argument("--mode", choices=["general", "trace", "variant", "cpp"], default="general")
    c.add_argument("--trials", type=int, default=100)
    c.add_argument("--a", default="1")
    c.add_argument("--deg-f", type=int)
    c.add_argument("--deg-h", type=int)
    c.add_argument("--deg-k", type=int, default=2)

    c = sub.add_parser("iterate", parents=[common])
    c.add_argument("--b", required=True)
    c.add_argument("--levels", type=int, default=2)
    c.add_argument("--h", action="append", help="integer codes; repeat once per level")
    c.add_argument("--kpoly", action="append", help="integer codes; repeat once per level")
    return parser


def _fail(code: int, tag: str, message: str) -> int:
    sys.stderr.write(json.dumps({"error": tag, "message": message}) + "\n")
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        VERBS[args.verb](args)
    except UsageError as exc:
        return _fail(2, "UsageError", str(exc))
    except LinPPError as exc:
        return _fail(1, exc.tag, str(exc))
    except (KeyError, TypeError) as exc:
        return _fail(2, "UsageError", f"malformed input: {exc}")
    except ValueError as exc:
        return _fail(1, "InvalidInput", str(exc))
    return 0


if __name__ == "__main__":
    sys.exit(main())
