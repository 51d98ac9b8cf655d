"""``torsionlab`` command line.

Exit codes: 0 trivial / verified / success, 1 nontrivial or a failing
script, 2 unknown, 3 unreadable or invalid input.
"""
from __future__ import annotations

import argparse
import hashlib
import sys
import time
from pathlib import Path

from . import serialize as ser
from .chain import validate
from .lens import LensSpace, classification_table, classify, oracle_classify
from .moves import ScriptError, run
from .torsion import (
    Emptied,
    NotAcyclicError,
    Stuck,
    TwoTerm,
    decision_tolerance,
    greedy_reduce,
    is_trivial_torsion,
    mapping_cone,
    torsion_vector,
)

EXIT_OK, EXIT_NO, EXIT_UNKNOWN, EXIT_INPUT = 0, 1, 2, 3


class InputError(Exception):
    pass


class _Report:
    def __init__(self, command: str):
        self.data = {"command": command, "inputs": {}}
        self._t0 = time.perf_counter()

    def read(self, path: str) -> str:
        try:
            raw = Path(path).read_bytes()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror}") from exc
        self.data["inputs"][path] = hashlib.sha256(raw).hexdigest()
        try:
            return raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise InputError(f"{path} is not UTF-8 text") from exc

    def emit(self, code: int, out) -> int:
        self.data["exit_code"] = code
        self.data["wall_time_s"] = round(time.perf_counter() - self._t0, 6)
        out.write(ser.dumps(self.data))
        return code


def _load(rep: _Report, path: str, loader):
    text = rep.read(path)
    try:
        return loader(ser.loads(text))
    except ser.FormatError as exc:
        raise InputError(f"{path}: {exc}") from exc
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc


def cmd_verify(args, out) -> int:
    rep = _Report("verify")
    script = _load(rep, args.script, ser.script_from_json)
    check = validate(script.initial)
    if not check:
        raise InputError(f"initial complex is invalid: {check.message}")
    rep.data["moves"] = len(script.moves)
    try:
        final = run(script)
    except ScriptError as exc:
        rep.data["verdict"] = "failed"
        rep.data["failing_move"] = exc.index
        rep.data["reason"] = str(exc)
        return rep.emit(EXIT_NO, out)
    if final.is_empty:
        rep.data["verdict"] = "verified"
        return rep.emit(EXIT_OK, out)
    rep.data["verdict"] = "failed"
    rep.data["reason"] = f"script ends with {len(final)} generators left"
    rep.data["residual"] = ser.complex_to_json(final)
    return rep.emit(EXIT_NO, out)


def cmd_decide(args, out) -> int:
    rep = _Report("decide")
    c = _load(rep, args.complex, ser.complex_from_json)
    check = validate(c)
    if not check:
        raise InputError(f"invalid complex: {check.message}")
    try:
        dec = is_trivial_torsion(c, tol=decision_tolerance())
    except NotAcyclicError as exc:
        raise InputError(f"not acyclic: {exc}") from exc
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    rep.data["verdict"] = dec.verdict
    rep.data["detail"] = dec.detail
    rep.data["tolerance"] = decision_tolerance()
    witness: dict = {}
    if dec.verdict == "trivial":
        witness["script"] = ser.script_to_json(dec.script)
    elif dec.verdict == "nontrivial":
        witness["character"] = dec.character
        witness["logabs"] = dec.logabs
    if dec.torsion is not None:
        witness["torsion"] = dec.torsion.to_json()
    rep.data["witness"] = witness
    return rep.emit(dec.exit_code, out)


def cmd_reduce(args, out) -> int:
    rep = _Report("reduce")
    c = _load(rep, args.complex, ser.complex_from_json)
    check = validate(c)
    if not check:
        raise InputError(f"invalid complex: {check.message}")
    outcome = greedy_reduce(c)
    script = outcome.script
    if isinstance(outcome, Emptied):
        rep.data["outcome"] = "emptied"
        code = EXIT_OK
    elif isinstance(outcome, TwoTerm):
        rep.data["outcome"] = "two_term"
        code = EXIT_UNKNOWN
    else:
        assert isinstance(outcome, Stuck)
        rep.data["outcome"] = "stuck"
        rep.data["diagnostic"] = outcome.diagnostic
        code = EXIT_UNKNOWN
    rep.data["moves"] = len(script.moves)
    rep.data["residual"] = ser.complex_to_json(outcome.residual)
    if args.emit_script:
        Path(args.emit_script).write_text(ser.dumps(ser.script_to_json(script)))
        rep.data["script_path"] = args.emit_script
    return rep.emit(code, out)


def cmd_cone(args, out) -> int:
    rep = _Report("cone")
    f = _load(rep, args.map, ser.map_from_json)
    for side, cx in (("source", f.source), ("target", f.target)):
        check = validate(cx)
        if not check:
            raise InputError(f"invalid {side} complex: {check.message}")
    check = f.check()
    if not check:
        raise InputError(f"invalid chain map: {check.message}")
    cone = mapping_cone(f)
    rep.data["cone"] = ser.complex_to_json(cone)
    if cone.group.kind == "cyclic" and cone.group.n > 1:
        try:
            rep.data["torsion"] = torsion_vector(cone).to_json()
        except NotAcyclicError as exc:
            rep.data["torsion"] = None
            rep.data["detail"] = str(exc)
    if args.output:
        Path(args.output).write_text(ser.dumps(ser.complex_to_json(cone)))
        rep.data["output"] = args.output
    return rep.emit(EXIT_OK, out)


def _lens(n: int, q: int) -> LensSpace:
    try:
        return LensSpace(n, q)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def cmd_lens_classify(args, out) -> int:
    rep = _Report("lens classify")
    L1, L2 = _lens(args.n, args.q1), _lens(args.n, args.q2)
    v = classify(L1, L2)
    o = oracle_classify(L1, L2)
    rep.data["spaces"] = [str(L1), str(L2)]
    rep.data["homotopy"] = v.homotopy_equivalent
    rep.data["simple"] = v.simple_equivalent
    rep.data["oracle_simple"] = o.simple_equivalent
    rep.data["witness"] = v.witness
    return rep.emit(EXIT_OK if v.simple_equivalent == o.simple_equivalent else EXIT_NO, out)


def cmd_lens_table(args, out) -> int:
    if args.max_n < 2:
        raise InputError("table bound must be at least 2")
    out.write("n\tq1\tq2\thomotopy\tsimple\toracle_simple\n")
    disagree = 0
    for n, q1, q2, hom, simple, osimple in classification_table(args.max_n):
        disagree += simple != osimple
        out.write(f"{n}\t{q1}\t{q2}\t{str(hom).lower()}\t{str(simple).lower()}\t{str(osimple).lower()}\n")
    return EXIT_OK if not disagree else EXIT_NO


def cmd_selftest(args, out) -> int:
    from .acceptance import run_all

    results = run_all(scale=args.scale)
    for r in results:
        out.write(r.line() + "\n")
    return EXIT_OK if all(r.passed for r in results) else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="torsionlab", description="Whitehead torsion of based complexes over Z[G].")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify", help="check that a move script empties its complex")
    s.add_argument("script")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("decide", help="decide whether an acyclic complex has trivial torsion")
    s.add_argument("complex")
    s.set_defaults(func=cmd_decide)

    s = sub.add_parser("reduce", help="greedy reduction by unit pivots")
    s.add_argument("complex")
    s.add_argument("--emit-script", metavar="PATH")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("cone", help="mapping cone of a chain map")
    s.add_argument("map")
    s.add_argument("--output", metavar="PATH", help="also write the cone complex here")
    s.set_defaults(func=cmd_cone)

    lens = sub.add_parser("lens", help="lens spaces L(n, q)")
    lsub = lens.add_subparsers(dest="lens_command", required=True)
    s = lsub.add_parser("classify")
    s.add_argument("n", type=int)
    s.add_argument("q1", type=int)
    s.add_argument("q2", type=int)
    s.set_defaults(func=cmd_lens_classify)
    s = lsub.add_parser("table")
    s.add_argument("max_n", type=int)
    s.set_defaults(func=cmd_lens_table)

    s = sub.add_parser("selftest", help="run the acceptance suites")
    s.add_argument("--scale", type=float, default=1.0, help="fraction of the random cases to run")
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except InputError as exc:
        print(f"torsionlab: error: {exc}", file=sys.stderr)
        command = args.command if args.command != "lens" else f"lens {args.lens_command}"
        out.write(ser.dumps({"command": command, "error": str(exc), "exit_code": EXIT_INPUT}))
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
