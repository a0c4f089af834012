"""Batch front-end.

Exit codes: 0 found and verified, 1 honest not-found / inconclusive /
failed verification, 2 invalid input, 3 refused as infeasible.

Every artifact carries its inputs so ``verify`` can replay it alone.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
import time
from dataclasses import dataclass, field

from . import classify as cl
from .central import (
    CentralChain,
    CentralConfig,
    CentralWitnessTable,
    SequenceWitness,
    VerificationReport,
    build_commutative_witness,
    build_noncommutative_witness,
    derive_furstenberg,
    derive_phi_form,
    recheck_sequence_witness,
    verify_chain_sums,
)
from .errors import InfeasibleError, InvalidInput, SearchExhausted
from .hj import DEFAULT_BUDGET, Coloring, VariableWord, find_monochromatic_line, find_strong_variable_word, hj_certificate_search, is_monochromatic, line_points
from .jset import (
    JSetConfig,
    JWitness,
    NCWitness,
    SequenceFamily,
    check_jwitness,
    check_ncwitness,
    pws_to_jset_commutative,
    pws_to_jset_noncommutative,
)
from .semigroup import GroundSemigroup
from .sets import intersection, same_set, set_from_json, set_to_json

SCHEMA = 1
EXIT_OK, EXIT_NOT_FOUND, EXIT_INVALID, EXIT_INFEASIBLE = 0, 1, 2, 3

log = logging.getLogger("centralset")


@dataclass
class RunConfig:
    command: str
    window: int = 24
    truncation: int | None = None
    depth: int | None = None
    max_family: int = 3
    budget: int = DEFAULT_BUDGET
    escalation_cap: int = 16
    out: str | None = None
    verbosity: int = 0
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("window", "max_family", "budget", "escalation_cap"):
            if getattr(self, name) < 1:
                raise InvalidInput(f"--{name.replace('_', '-')} must be positive")
        for name in ("truncation", "depth"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise InvalidInput(f"--{name} must be positive")

    def central(self) -> CentralConfig:
        return CentralConfig(max_family=self.max_family, sample_bound=self.window,
                             jset=JSetConfig(escalation_cap=self.escalation_cap))


def load_json(arg: str):
    """A path to a JSON file, or a JSON literal."""
    if arg is None:
        raise InvalidInput("missing required input")
    text = arg
    if not arg.lstrip().startswith(("{", "[")):
        try:
            with open(arg) as fh:
                text = fh.read()
        except OSError as exc:
            raise InvalidInput(f"cannot read {arg}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"bad JSON in {arg[:60]}: {exc}") from None


def _artifact(kind: str, inputs: dict, result, verification: dict, status: str = "verified") -> dict:
    return {
        "schema": SCHEMA,
        "artifact": kind,
        "status": status,
        "inputs": inputs,
        "result": result,
        "verification": verification,
        "created": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }


def _family(sg, args, cfg: RunConfig) -> SequenceFamily:
    return SequenceFamily.from_json(sg, load_json(args.sequences), cfg.truncation)


def _chain(sg, args, cfg: RunConfig) -> CentralChain:
    data = load_json(args.chain)
    if cfg.depth is not None and isinstance(data, dict):
        data = dict(data, depth=cfg.depth)
    return CentralChain.from_json(sg, data, cfg.central())


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _classification(sg, A):
    certs = {
        "syndetic": cl.is_syndetic(sg, A),
        "thick": cl.is_thick(sg, A),
        "pws": cl.is_piecewise_syndetic(sg, A),
    }
    result = {k: c.to_json() for k, c in certs.items()}
    if certs["pws"].holds:
        T, Y = cl.decompose_pws(sg, A, certs["pws"])
        result["decomposition"] = {"thick": set_to_json(T), "syndetic": set_to_json(Y)}
    return result


def _check_classification(sg, A, result) -> dict:
    ver = {}
    for k in ("syndetic", "thick", "pws"):
        ver[k] = cl.replay(sg, A, cl.Certificate.from_json(result[k]))
    if "decomposition" in result:
        T = set_from_json(sg, result["decomposition"]["thick"])
        Y = set_from_json(sg, result["decomposition"]["syndetic"])
        ver["decomposition"] = (
            same_set(sg, intersection(sg, T, Y), A)
            and cl.is_thick(sg, T).holds
            and cl.is_syndetic(sg, Y).holds
        )
    ver["ok"] = all(ver.values())
    return ver


def cmd_classify(args, cfg):
    sg = GroundSemigroup.from_json(load_json(args.semigroup))
    A = set_from_json(sg, load_json(args.set))
    result = _classification(sg, A)
    ver = _check_classification(sg, A, result)
    inconclusive = any(result[k]["verdict"] == cl.INCONCLUSIVE for k in ("syndetic", "thick", "pws"))
    art = _artifact("classification", {"semigroup": sg.to_json(), "set": set_to_json(A)}, result, ver,
                    "inconclusive" if inconclusive else "verified")
    return art, EXIT_OK if ver["ok"] and not inconclusive else EXIT_NOT_FOUND


def cmd_hj_line(args, cfg):
    data = load_json(args.coloring)
    try:
        r, t, N, colors = data["r"], data["t"], data["N"], data["colors"]
    except (KeyError, TypeError):
        raise InvalidInput("coloring needs r, t, N and colors") from None
    coloring = Coloring(r, t, N, table=colors)
    search = find_strong_variable_word if args.strong else find_monochromatic_line
    vw = search(coloring, t, N)
    inputs = {"coloring": {"r": r, "t": t, "N": N, "colors": coloring.to_string()}, "strong": bool(args.strong)}
    if vw is None:
        return _artifact("hj-line", inputs, {"line": None}, {"ok": True}, "not-found"), EXIT_NOT_FOUND
    result = {"line": line_points(vw).to_json(coloring(vw.substitute(1)))}
    return _artifact("hj-line", inputs, result, _check_hj_line(inputs, result)), EXIT_OK


def _check_hj_line(inputs, result) -> dict:
    c = inputs["coloring"]
    coloring = Coloring(c["r"], c["t"], c["N"], table=c["colors"])
    vw = VariableWord.parse(result["line"]["vw"], c["t"])
    ok = len(vw.letters) == c["N"] and is_monochromatic(coloring, vw) and (vw.is_strong or not inputs["strong"])
    return {"ok": ok}


def cmd_hj_certify(args, cfg):
    cert = hj_certificate_search(args.r, args.t, args.nmax, cfg.budget)
    inputs = {"r": args.r, "t": args.t, "nmax": args.nmax, "budget": cfg.budget}
    result = cert.to_json()
    ver = _check_hj_certificate(inputs, result)
    status = "verified" if cert.N is not None else "not-found"
    return _artifact("hj-certificate", inputs, result, ver, status), (EXIT_OK if cert.N is not None and ver["ok"] else EXIT_NOT_FOUND)


def _check_hj_certificate(inputs, result) -> dict:
    r, t = inputs["r"], inputs["t"]
    ok = True
    for n_str, colors in result["counterexamples"].items():
        N = int(n_str)
        ok &= find_monochromatic_line(Coloring(r, t, N, table=colors), t, N) is None
    if result["HJ"] is not None:
        again = hj_certificate_search(r, t, result["HJ"], inputs["budget"])
        ok &= again.N == result["HJ"]
    return {"ok": bool(ok)}


def cmd_jset(args, cfg):
    sg = GroundSemigroup.from_json(load_json(args.semigroup))
    A = set_from_json(sg, load_json(args.set))
    fam = _family(sg, args, cfg)
    jcfg = JSetConfig(escalation_cap=cfg.escalation_cap)
    inputs = {"semigroup": sg.to_json(), "set": set_to_json(A), "sequences": fam.to_json(), "min_index": args.min_index}
    if sg.commutative and not args.noncommutative:
        w = pws_to_jset_commutative(sg, A, fam, args.min_index, cfg=jcfg)
        kind = "jwitness"
    else:
        w = pws_to_jset_noncommutative(sg, A, fam, args.min_index, cfg=jcfg)
        kind = "ncwitness"
    result = w.to_json()
    ver = _check_witness(sg, A, fam, kind, result, args.min_index)
    return _artifact(kind, inputs, result, ver), EXIT_OK if ver["ok"] else EXIT_NOT_FOUND


def _check_witness(sg, A, fam, kind, result, min_index) -> dict:
    if kind == "jwitness":
        w = JWitness.from_json(result)
        ok = check_jwitness(sg, A, fam, w) and min(w.H) > min_index
    else:
        w = NCWitness.from_json(result)
        ok = check_ncwitness(sg, A, fam, w) and w.t[0] > min_index
    return {"ok": bool(ok), "sequences_checked": len(fam)}


def cmd_central(args, cfg):
    sg = GroundSemigroup.from_json(load_json(args.semigroup))
    chain = _chain(sg, args, cfg)
    fam = _family(sg, args, cfg)
    inputs = {"semigroup": sg.to_json(), "chain": chain.to_json(), "sequences": fam.to_json(), "start": args.start}
    if args.central_cmd == "build":
        builder = build_commutative_witness if sg.commutative and not args.noncommutative else build_noncommutative_witness
        table = builder(sg, chain, args.start, fam, cfg.central())
        report = verify_chain_sums(sg, table, chain, args.start)
        return _artifact("central-table", inputs, table.to_json(), report.to_json()), EXIT_OK if report.ok else EXIT_NOT_FOUND
    derive = derive_furstenberg if args.central_cmd == "furstenberg" else derive_phi_form
    inputs["nmax"] = args.nmax
    w = derive(sg, chain, args.start, fam, args.nmax, cfg.central())
    result = w.to_json()
    report = result.pop("verification")
    return _artifact(w.form, inputs, result, report), EXIT_OK if w.report.ok else EXIT_NOT_FOUND


def replay_artifact(art: dict, cfg: RunConfig | None = None) -> dict:
    """Re-run the checks for any artifact this CLI emits."""
    cfg = cfg or RunConfig("verify")
    if not isinstance(art, dict) or art.get("schema") != SCHEMA or "artifact" not in art:
        raise InvalidInput("not a schema-1 artifact")
    kind, inputs, result = art["artifact"], art.get("inputs", {}), art.get("result")
    try:
        if kind == "hj-certificate":
            return _check_hj_certificate(inputs, result)
        if kind == "hj-line":
            if result["line"] is None:
                return {"ok": False, "reason": "no line recorded"}
            return _check_hj_line(inputs, result)
        sg = GroundSemigroup.from_json(inputs["semigroup"])
        if kind == "classification":
            return _check_classification(sg, set_from_json(sg, inputs["set"]), result)
        if kind in ("jwitness", "ncwitness"):
            A = set_from_json(sg, inputs["set"])
            fam = SequenceFamily.from_json(sg, inputs["sequences"])
            return _check_witness(sg, A, fam, kind, result, inputs.get("min_index", 0))
        chain = CentralChain.from_json(sg, inputs["chain"], cfg.central())
        fam = SequenceFamily.from_json(sg, inputs["sequences"])
        N = inputs["start"]
        if kind == "central-table":
            table = CentralWitnessTable.from_json(sg, result)
            if table.family != fam or table.N != N:
                return {"ok": False, "reason": "table family or start index differs from inputs"}
            return verify_chain_sums(sg, table, chain, N).to_json()
        if kind in ("furstenberg", "phi"):
            w = SequenceWitness(kind, list(result["a"]), [tuple(h) for h in result["H"]], result.get("steps", []),
                                VerificationReport())
            if len(w.a) != inputs["nmax"] or len(w.H) != len(w.a):
                return {"ok": False, "reason": "sequence length differs from nmax"}
            return recheck_sequence_witness(sg, chain, N, fam, w).to_json()
    except (KeyError, TypeError, IndexError) as exc:
        raise InvalidInput(f"malformed {kind} artifact: {exc}") from None
    raise InvalidInput(f"unknown artifact kind {kind!r}")


def cmd_verify(args, cfg):
    art = load_json(args.artifact)
    ver = replay_artifact(art, cfg)
    out = _artifact("verification", {"artifact": art.get("artifact")}, None, ver, "verified" if ver.get("ok") else "rejected")
    return out, EXIT_OK if ver.get("ok") else EXIT_NOT_FOUND


# ---------------------------------------------------------------------------
# plumbing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--semigroup", help="semigroup JSON (path or literal)")
    common.add_argument("--set", help="set JSON (path or literal)")
    common.add_argument("--sequences", help="sequence family JSON")
    common.add_argument("--chain", help="central chain JSON")
    common.add_argument("--window", type=int, default=24, help="sampling window for refinement checks")
    common.add_argument("--truncation", type=int, help="truncation T for sequences")
    common.add_argument("--depth", type=int, help="override chain depth")
    common.add_argument("--max-family", type=int, default=3)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="coloring-enumeration budget")
    common.add_argument("--escalation-cap", type=int, default=16, help="largest word length tried")
    common.add_argument("--out", help="write the artifact here (atomically) instead of stdout")
    common.add_argument("-v", "--verbose", action="count", default=0)

    p = argparse.ArgumentParser(prog="centralset", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("classify", parents=[common])

    hj = sub.add_parser("hj").add_subparsers(dest="hj_cmd", required=True)
    line = hj.add_parser("line", parents=[common])
    line.add_argument("--coloring", required=True, help='{"r":..,"t":..,"N":..,"colors":"..."}')
    line.add_argument("--strong", action="store_true")
    cert = hj.add_parser("certify", parents=[common])
    cert.add_argument("--r", type=int, required=True)
    cert.add_argument("--t", type=int, required=True)
    cert.add_argument("--nmax", type=int, required=True)

    js = sub.add_parser("jset").add_subparsers(dest="jset_cmd", required=True)
    wit = js.add_parser("witness", parents=[common])
    wit.add_argument("--min-index", type=int, default=0)
    wit.add_argument("--noncommutative", action="store_true", help="use the ordered-product extractor")

    ce = sub.add_parser("central").add_subparsers(dest="central_cmd", required=True)
    for name in ("build", "furstenberg", "phi"):
        c = ce.add_parser(name, parents=[common])
        c.add_argument("--start", type=int, default=1, help="chain index N")
        if name == "build":
            c.add_argument("--noncommutative", action="store_true")
        else:
            c.add_argument("--nmax", type=int, default=3)

    ver = sub.add_parser("verify", parents=[common])
    ver.add_argument("artifact")
    return p


COMMANDS = {
    "classify": cmd_classify,
    "hj": lambda a, c: (cmd_hj_line if a.hj_cmd == "line" else cmd_hj_certify)(a, c),
    "jset": cmd_jset,
    "central": cmd_central,
    "verify": cmd_verify,
}


def write_atomic(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".artifact-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(message)s")
    try:
        cfg = RunConfig(args.command, window=args.window, truncation=args.truncation, depth=args.depth,
                        max_family=args.max_family, budget=args.budget, escalation_cap=args.escalation_cap,
                        out=args.out, verbosity=args.verbose)
        art, code = COMMANDS[args.command](args, cfg)
    except InvalidInput as exc:
        print(json.dumps({"schema": SCHEMA, "status": "invalid-input", "error": str(exc)}), file=sys.stderr)
        return EXIT_INVALID
    except InfeasibleError as exc:
        print(json.dumps({"schema": SCHEMA, "status": "infeasible", "error": str(exc)}), file=sys.stderr)
        return EXIT_INFEASIBLE
    except SearchExhausted as exc:
        art = {"schema": SCHEMA, "status": "not-found", "reason": str(exc), "bound": exc.bound}
        code = EXIT_NOT_FOUND
    text = json.dumps(art, indent=2, sort_keys=True, default=list) + "\n"
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    log.info("exit %d", code)
    return code


def main() -> None:
    sys.exit(run())
