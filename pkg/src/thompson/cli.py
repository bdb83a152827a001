"""Command-line interface.  Output is canonical JSON unless --human is given.

Exit codes: 0 ok, 1 verification failed, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Sequence

from thompson import acceptance, analysis, witness
from thompson.exactnum import format_rat, rat
from thompson.exprlang import EvalError, ExprSyntaxError, bind, eval_expr, eval_tree_pair, format_element
from thompson.plhomeo import (
    CircleMap,
    CarrierMismatch,
    PLMap,
    element_from_json,
    fixed_set,
    germ_at_zero,
    support,
)
from thompson.treepair import random_element

OK, VERIFICATION_FAILED, INPUT_ERROR = 0, 1, 2
STATUS = {OK: "ok", VERIFICATION_FAILED: "verification_failed", INPUT_ERROR: "input_error"}
OUTPUT_DIR_ENV = "THOMPSON_OUTPUT_DIR"


class InputError(Exception):
    pass


class VerificationFailed(Exception):
    def __init__(self, message: str, payload: dict | None = None):
        super().__init__(message)
        self.payload = payload or {}


def dumps(payload) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def human(payload, indent: int = 0) -> str:
    pad = " " * indent
    if isinstance(payload, dict):
        width = max((len(str(k)) for k in payload), default=0)
        lines = []
        for key in sorted(payload):
            value = payload[key]
            if isinstance(value, (dict, list)) and value:
                lines.append(f"{pad}{key}:")
                lines.append(human(value, indent + 2))
            else:
                lines.append(f"{pad}{str(key).ljust(width)}  {json.dumps(value)}")
        return "\n".join(lines)
    if isinstance(payload, list):
        return "\n".join(f"{pad}- {json.dumps(item, sort_keys=True)}" for item in payload)
    return f"{pad}{payload}"


def element(arg: str, env: dict):
    """An expression, or ``@path`` naming a JSON element file."""
    if arg.startswith("@"):
        try:
            return element_from_json(json.loads(Path(arg[1:]).read_text()))
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise InputError(f"cannot read element from {arg[1:]}: {exc}") from None
    return eval_expr(arg, env)


def _interval_map(g):
    if isinstance(g, CircleMap):
        try:
            return g.to_interval()
        except CarrierMismatch:
            raise InputError("this command needs an element fixing 0") from None
    return g


def cmd_eval(args, env):
    g = element(args.expr, env)
    if args.at is not None:
        return {"value": format_rat(g(rat(args.at)))}
    return {"element": g.to_json(), "text": format_element(g)}


def cmd_support(args, env):
    return support(element(args.expr, env)).to_json()


def cmd_fix(args, env):
    return fixed_set(element(args.expr, env)).to_json()


def cmd_orbitals(args, env):
    gens = [element(e, env) for e in args.exprs]
    if len({type(g) for g in gens}) > 1:
        gens = [g.to_circle() if isinstance(g, PLMap) else g for g in gens]
    return {"elements": [[o.to_json() for o in analysis.orbitals(g)] for g in gens],
            "group": [o.to_json() for o in analysis.group_orbitals(gens)]}


def cmd_germ(args, env):
    g = _interval_map(element(args.expr, env))
    germ = germ_at_zero(g)
    return {"n": germ.n, "delta": format_rat(germ.delta)}


def cmd_wp(args, env):
    pl = element(args.word, env)
    tp = eval_tree_pair(args.word, env)
    if pl.is_identity() != tp.is_identity():
        raise VerificationFailed("tree-pair and PL backends disagree",
                                 {"pl": pl.is_identity(), "tree_pair": tp.is_identity()})
    return {"identity": pl.is_identity()}


def _replay_normalish(payload: dict) -> None:
    try:
        witness.verify_certificate(witness.certificate_from_json(payload))
    except witness.NormalishFailure as exc:
        raise VerificationFailed(str(exc), payload) from None


def cmd_witness_f(args, env):
    K = [_interval_map(element(e, env)) for e in args.conjugator]
    try:
        cert = witness.witness_in_F(K)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    payload = {"kind": "normalish", **cert.to_json()}
    _replay_normalish(payload)
    return payload


def cmd_witness_t(args, env):
    K = [element(e, env) for e in args.conjugator]
    try:
        cert = witness.witness_F_in_T(K)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    payload = {"kind": "normalish", **cert.to_json()}
    _replay_normalish(payload)
    return payload


def _ubiquity_payload(gens, result) -> dict:
    return {"kind": "ubiquity", "generators": [g.to_json() for g in gens], **result.to_json()}


def _replay_ubiquity(payload: dict) -> None:
    if payload.get("inconclusive"):
        return
    gens = [element_from_json(g) for g in payload["generators"]]
    lo, hi = (rat(v) for v in payload["orbital"])
    cert = analysis.UbiquityCertificate(tuple(int(x) for x in payload["word"]),
                                        analysis.Orbital(lo, hi, "group"), payload["end"])
    if not analysis.replay_ubiquity(gens, cert):
        raise VerificationFailed("ubiquity certificate does not replay", payload)


def cmd_ubiquity(args, env):
    gens = [_interval_map(element(e, env)) for e in args.exprs]
    if args.depth < 1:
        raise InputError("--depth must be at least 1")
    try:
        result = analysis.ubiquity_search(gens, args.depth)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    payload = _ubiquity_payload(gens, result)
    _replay_ubiquity(payload)
    return payload


def _free_payload(result) -> dict:
    return {"kind": "free", **result.to_json()}


def _replay_free(payload: dict) -> None:
    gens = [element_from_json(g) for g in payload["elements"]]
    fresh = analysis.free_precondition(gens)
    if dumps(_free_payload(fresh)) != dumps(payload):
        raise VerificationFailed("free-subgroup certificate does not replay", payload)


def cmd_free_cert(args, env):
    gens = [element(e, env) for e in args.exprs]
    if len(gens) < 2:
        raise InputError("free-cert needs at least two elements")
    result = analysis.free_precondition(gens)
    if not result:
        return {"kind": "free", "elements": [g.to_json() for g in gens], **result.to_json()}
    payload = _free_payload(result)
    _replay_free(payload)
    return payload


def cmd_random(args, env):
    try:
        pair = random_element(args.leaves, args.seed)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return {"tree_pair": pair.to_json(), "reduced": pair.reduce().to_json(),
            "element": pair.to_plmap().to_json()}


def cmd_verify(args, env):
    try:
        payload = json.loads(Path(args.file).read_text())
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot read certificate: {exc}") from None
    kind = payload.get("kind")
    try:
        if kind == "normalish":
            _replay_normalish(payload)
        elif kind == "ubiquity":
            _replay_ubiquity(payload)
        elif kind == "free":
            if "not_applicable" in payload:
                raise VerificationFailed("not a certificate: " + payload["not_applicable"], payload)
            _replay_free(payload)
        else:
            raise InputError(f"unknown certificate kind {kind!r}")
    except (KeyError, TypeError, ValueError) as exc:
        raise VerificationFailed(f"malformed certificate: {exc}", payload) from None
    return {"kind": kind, "verified": True}


def _determinism(env) -> dict:
    """Run each certificate-producing command twice in-process and compare output bytes."""
    commands = [
        ["witness-f", "--conjugator", "x0", "x1^2", "b*x0^-3"],
        ["witness-t", "--conjugator", "rot(1/2)", "x0*rot(3/8)"],
        ["ubiquity", "--depth", "2", "x0", "transplant(x0,[0,1/2])"],
        ["free-cert", "transplant(x0,[0,3/4])", "transplant(x0,[0,3/4])^(rot(1/2))"],
        ["random", "--leaves", "12", "--seed", "7"],
    ]
    out = {}
    for argv in commands:
        runs = [dumps(_dispatch(build_parser().parse_args(argv), env)) for _ in range(2)]
        out[argv[0]] = runs[0] == runs[1]
    return out


def cmd_selftest(args, env):
    results = acceptance.run_all()
    payload = {"criteria": [r.to_json() for r in results]}
    det = _determinism(env)
    payload["criteria"].append({"criterion": 9, "name": "deterministic certificate output",
                                "passed": all(det.values()), "detail": det})
    payload["passed"] = all(c["passed"] for c in payload["criteria"])
    if not payload["passed"]:
        raise VerificationFailed("acceptance criteria failed", payload)
    return payload


COMMANDS = {
    "eval": cmd_eval, "support": cmd_support, "fix": cmd_fix, "orbitals": cmd_orbitals,
    "germ": cmd_germ, "wp": cmd_wp, "witness-f": cmd_witness_f, "witness-t": cmd_witness_t,
    "ubiquity": cmd_ubiquity, "free-cert": cmd_free_cert, "random": cmd_random,
    "selftest": cmd_selftest, "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="thompson", description=__doc__.splitlines()[0])
    parser.add_argument("--let", action="append", default=[], metavar="NAME=EXPR",
                        help="bind a name for use in later expressions")
    parser.add_argument("--human", action="store_true", help="aligned text instead of JSON")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate an expression")
    p.add_argument("expr")
    p.add_argument("--at", help="evaluate the element at this rational point")
    for name in ("support", "fix", "germ"):
        sub.add_parser(name).add_argument("expr")
    sub.add_parser("orbitals").add_argument("exprs", nargs="+")
    sub.add_parser("wp", help="word problem via tree pairs and PL maps").add_argument("word")
    for name in ("witness-f", "witness-t"):
        sub.add_parser(name).add_argument("--conjugator", nargs="+", required=True)
    p = sub.add_parser("ubiquity")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("exprs", nargs="+")
    sub.add_parser("free-cert").add_argument("exprs", nargs="+")
    p = sub.add_parser("random")
    p.add_argument("--leaves", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    sub.add_parser("selftest")
    sub.add_parser("verify").add_argument("file")
    return parser


def _dispatch(args, env):
    return COMMANDS[args.command](args, env)


def run(argv: Sequence[str]) -> tuple[int, dict]:
    """Execute one command; returns (exit code, payload)."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        return (OK if exc.code == 0 else INPUT_ERROR), {"error": "usage"}
    try:
        env = bind(args.let)
        return OK, _dispatch(args, env)
    except VerificationFailed as exc:
        return VERIFICATION_FAILED, {"error": str(exc), **({"payload": exc.payload} if exc.payload else {})}
    except (InputError, ExprSyntaxError, EvalError, CarrierMismatch, ValueError, ZeroDivisionError) as exc:
        return INPUT_ERROR, {"error": str(exc)}


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    code, payload = run(argv)
    payload = {"status": STATUS[code], **payload} if code != OK else payload
    text = human(payload) if "--human" in argv else dumps(payload)
    print(text)
    out_dir = os.environ.get(OUTPUT_DIR_ENV)
    if out_dir and code == OK and argv:
        command = next((a for a in argv if a in COMMANDS), "output")
        path = Path(out_dir) / f"{command}.json"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(dumps(payload) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
