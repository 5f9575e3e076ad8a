"""``pc4`` command line tool.

Examples::

    pc4 table --kappa '{"x":[0,0,0],"y":[0,0,0],"z":[0,0,0],"d":[1,1,1],"lambda":1}'
    pc4 verify --in kappa.json --samples 500 --seed 3
    pc4 iso --in pair.json          # {"kappa": {...}, "kappa2": {...}}

Exit status: 0 on success, 1 on bad input, 2 when a check fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import classification as cls
from . import core
from .idempotents import global_idempotent_census, has_unique_idempotent
from .quadratic import KTuple, build_pc_algebra, check_dissident, omnipresent_idempotent

COMMANDS = ("build", "verify", "idempotents", "canon", "iso", "aut", "table")

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_VIOLATION = 2


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors, and 2 is reserved for failed checks
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"pc4: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INVALID)


@dataclass
class RunConfig:
    command: str
    kappa: KTuple
    kappa2: KTuple | None = None
    tol: float = 1e-9
    samples: int = 1000
    seed: int = 0
    fmt: str = "json"
    raw_input: dict = field(default_factory=dict)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pc4", description="Four-dimensional power-commutative division algebras.")
    p.add_argument("command", choices=COMMANDS)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--in", dest="infile", help="JSON file: a K-tuple, or {\"kappa\": ..., \"kappa2\": ...}")
    src.add_argument("--kappa", help="K-tuple as inline JSON")
    p.add_argument("--kappa2", help="second K-tuple (iso)")
    p.add_argument("--tol", type=float, default=1e-9, help="identity-check tolerance (default 1e-9)")
    p.add_argument("--samples", type=int, default=1000, help="sample count for sampled checks")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", dest="fmt", choices=("json", "text"), default="json")
    return p


def _load_json(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise core.ValidationError(f"{what} is not valid JSON: {exc}") from exc


def make_config(args) -> RunConfig:
    if not (args.tol > 0):
        raise core.ValidationError("tolerance must be positive")
    if args.samples < 1:
        raise core.ValidationError("samples must be at least 1")
    if args.infile is not None:
        try:
            text = Path(args.infile).read_text()
        except OSError as exc:
            raise core.ValidationError(f"cannot read {args.infile}: {exc}") from exc
        obj = _load_json(text, args.infile)
        if isinstance(obj, dict) and "kappa" in obj:
            raw1, raw2 = obj["kappa"], obj.get("kappa2")
        else:
            raw1, raw2 = obj, None
    else:
        raw1, raw2 = _load_json(args.kappa, "--kappa"), None
    if args.kappa2 is not None:
        raw2 = _load_json(args.kappa2, "--kappa2")
    kappa = KTuple.from_dict(raw1)
    kappa2 = KTuple.from_dict(raw2) if raw2 is not None else None
    if args.command == "iso" and kappa2 is None:
        raise core.ValidationError("iso needs a second K-tuple (--kappa2)")
    raw = {"kappa": kappa.to_dict()}
    if kappa2 is not None:
        raw["kappa2"] = kappa2.to_dict()
    return RunConfig(args.command, kappa, kappa2, args.tol, args.samples, args.seed, args.fmt, raw)


# ---------------------------------------------------------------- commands

def cmd_build(cfg: RunConfig):
    A = build_pc_algebra(cfg.kappa)
    return {"labels": list(A.labels), "structure_tensor": A.c.tolist()}, EXIT_OK


def cmd_verify(cfg: RunConfig):
    A = build_pc_algebra(cfg.kappa)
    e = omnipresent_idempotent()
    n, seed, tol = cfg.samples, cfg.seed, cfg.tol
    reports = [
        core.check_third_power_assoc(A, n, tol, seed),
        core.check_polarized_identity(A, n, tol, seed),
        core.check_idempotent_commutation(A, e, n, tol, seed),
        core.check_omnipresent(A, e, n, tol, seed),
        core.check_centralizer_invariance(A, e, tol),
        core.check_division_sampled(A, n, 1e-10, seed),
        check_dissident(cfg.kappa.y, cfg.kappa.d, n, 1e-6, seed),
    ]
    ok = all(r.passed for r in reports)
    result = {"all_passed": ok, "checks": [r.to_dict() for r in reports]}
    return result, EXIT_OK if ok else EXIT_VIOLATION


def cmd_idempotents(cfg: RunConfig):
    verdict = has_unique_idempotent(cfg.kappa.z, cfg.kappa.lam)
    census = global_idempotent_census(cfg.kappa, sphere_grid=max(cfg.samples, 1), seed=cfg.seed)
    unique_by_census = (not census.newton.curve_flag) and len(census.newton) == 1
    consistent = census.agree and unique_by_census == verdict.unique
    result = {
        "uniqueness": verdict.to_dict(),
        "continuum": census.analytic_continuum,
        "census": census.to_dict(),
        "consistent": consistent,
        "notes": census.notes,
    }
    return result, EXIT_OK if consistent else EXIT_VIOLATION


def cmd_canon(cfg: RunConfig):
    cf = cls.canonicalize(cfg.kappa)
    ok, pid = cls.in_cross_section(cf.kappa)
    result = cf.to_dict()
    result["in_cross_section"] = ok
    return result, EXIT_OK if ok and pid == cf.pattern_id else EXIT_VIOLATION


def cmd_iso(cfg: RunConfig):
    g = cls.are_isomorphic(cfg.kappa, cfg.kappa2)
    if g is None:
        return {"isomorphic": False, "witness": None, "message": "not isomorphic"}, EXIT_OK
    return {"isomorphic": True, "witness": g.tolist()}, EXIT_OK


def cmd_aut(cfg: RunConfig):
    return cls.aut_classification(cfg.kappa).to_dict(), EXIT_OK


def format_table(A: core.AlgebraTable) -> str:
    labels = A.labels
    cells = [[_vec_str(core.multiply(A, A.basis(i), A.basis(j))) for j in range(A.dim)] for i in range(A.dim)]
    width = max(len(c) for row in cells for c in row)
    head = " " * 4 + " ".join(f"{lab:>{width}}" for lab in labels)
    lines = [head]
    for lab, row in zip(labels, cells):
        lines.append(f"{lab:>3} " + " ".join(f"{c:>{width}}" for c in row))
    return "\n".join(lines)


def _vec_str(v) -> str:
    return "(" + ", ".join(f"{x + 0.0:.6g}" for x in np.round(v, 12)) + ")"


def cmd_table(cfg: RunConfig):
    A = build_pc_algebra(cfg.kappa)
    rows = {A.labels[i]: {A.labels[j]: [float(f"{x + 0.0:.6g}") for x in np.round(
        core.multiply(A, A.basis(i), A.basis(j)), 12)] for j in range(A.dim)} for i in range(A.dim)}
    return {"rows": rows, "text": format_table(A)}, EXIT_OK


HANDLERS = {
    "build": cmd_build,
    "verify": cmd_verify,
    "idempotents": cmd_idempotents,
    "canon": cmd_canon,
    "iso": cmd_iso,
    "aut": cmd_aut,
    "table": cmd_table,
}


def _text(result, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(result, dict):
        out = []
        for k, v in result.items():
            if isinstance(v, (dict, list)) and v and not _is_flat(v):
                out.append(f"{pad}{k}:")
                out.append(_text(v, indent + 1))
            else:
                out.append(f"{pad}{k}: {v}")
        return "\n".join(out)
    if isinstance(result, list):
        return "\n".join(_text(v, indent) if isinstance(v, (dict, list)) else f"{pad}- {v}" for v in result)
    return f"{pad}{result}"


def _is_flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def run(argv=None) -> tuple[int, str]:
    """Parse ``argv``, execute, and return ``(exit_code, stdout_text)``."""
    args = build_parser().parse_args(argv)
    try:
        cfg = make_config(args)
        result, code = HANDLERS[cfg.command](cfg)
    except core.ValidationError as exc:
        print(f"pc4: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID, ""
    except cls.CanonicalizationDefect as exc:
        print(f"pc4: {exc}", file=sys.stderr)
        return EXIT_VIOLATION, ""
    if cfg.fmt == "text":
        if cfg.command == "table":
            return code, result["text"] + "\n"
        return code, _text(result) + "\n"
    payload = {
        "command": cfg.command,
        "input": cfg.raw_input,
        "result": result,
        "tolerances": {"identity": cfg.tol, "division": 1e-10, "dissident": 1e-6,
                       "canonical_zero": cls.DEFAULT_TOL},
        "seed": cfg.seed,
    }
    return code, json.dumps(payload, indent=2, sort_keys=True) + "\n"


def main(argv=None) -> int:
    code, text = run(argv)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
