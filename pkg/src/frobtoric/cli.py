"""Command-line entry point: ``frobtoric <subcommand> [options]``.

Exit status: 0 pass, 1 verification failure, 2 input error, 3 capacity exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from dataclasses import asdict, dataclass

from . import cech, linalg
from .cech import ToricDivisor, ample_check, bott_verify, cohomology_dims, degeneration_check, sigma_verify
from .errors import CapacityError, FrobToricError, InternalInconsistency
from .fanfile import parse_fan_file
from .lattice import (
    Cone,
    betti_oracle,
    dual_cone,
    f_vector,
    hilbert_basis,
    is_complete,
    is_simplicial_fan,
    is_smooth_fan,
)
from .monomial import verify_glue_compat
from .oracles import incidence_dual, incidence_nonvanishing, quadric_dual, quadric_nonvanishing
from .witt import WittPair, add_table, check_prime, mul_table, w2_iso_zp2

SCHEMA = 1
PASS, FAIL, INPUT_ERROR, CAPACITY = 0, 1, 2, 3


@dataclass
class SessionConfig:
    prime: int = 2
    box_margin: int | None = None
    max_matrix: int = linalg.DEFAULT_MAX_COLUMNS
    max_grades: int = cech.DEFAULT_MAX_GRADES
    seed: int = 0
    format: str = "json"

    def __post_init__(self):
        check_prime(self.prime)
        if self.box_margin is not None and self.box_margin < 0:
            raise ValueError("box margin must be >= 0")
        if self.max_matrix < 1:
            raise ValueError("matrix limit must be positive")
        if self.format not in ("json", "table"):
            raise ValueError(f"unknown format {self.format!r}")

    def apply(self):
        linalg.set_max_columns(self.max_matrix)
        cech.MAX_GRADES = self.max_grades


def _parse_vectors(text: str) -> list:
    """'1,0;1,2' or '1 0; 1 2' -> [(1, 0), (1, 2)]."""
    out = []
    for chunk in text.split(";"):
        chunk = chunk.replace(",", " ").split()
        if chunk:
            out.append(tuple(int(x) for x in chunk))
    if not out:
        raise ValueError("no vectors given")
    return out


def _load(args):
    spec = parse_fan_file(args.fan)
    D = spec.resolve_divisor(args.divisor) if getattr(args, "divisor", None) else None
    return spec, D


def _cone_arg(args):
    if args.generators:
        gens = _parse_vectors(args.generators)
        return Cone(gens, rank=len(gens[0]), lattice=args.lattice)
    if args.fan and args.cone:
        spec = parse_fan_file(args.fan)
        ids = [t for t in args.cone.replace(",", " ").split() if t]
        try:
            idx = [spec.ray_ids.index(t) for t in ids]
        except ValueError:
            raise ValueError(f"unknown ray id in {args.cone!r}") from None
        return spec.fan.cone(idx)
    raise ValueError("give --generators, or --fan with --cone")


# --- subcommands -------------------------------------------------------------


def cmd_witt_table(args, cfg):
    p = cfg.prime
    elems = [WittPair(i, j, p) for i in range(p) for j in range(p)]
    iso = all(
        w2_iso_zp2(a + b) == (w2_iso_zp2(a) + w2_iso_zp2(b)) % (p * p)
        and w2_iso_zp2(a * b) == w2_iso_zp2(a) * w2_iso_zp2(b) % (p * p)
        for a in elems
        for b in elems
    )
    iso &= len({w2_iso_zp2(a) for a in elems}) == p * p
    res = {
        "elements": [[a.a0, a.a1] for a in elems],
        "add": add_table(p),
        "mul": mul_table(p),
        "isomorphism_to_Z_mod_p2": iso,
    }
    return (PASS if iso else FAIL), res


def cmd_dual(args, cfg):
    c = _cone_arg(args)
    dc = dual_cone(c)
    back = dual_cone(dc)
    return PASS, {"cone": c.to_json(), "dual": dc.to_json(), "double_dual_matches": back.same_set(c)}


def cmd_hilbert(args, cfg):
    c = _cone_arg(args)
    target = c if args.generators else dual_cone(c)
    hb = hilbert_basis(target)
    return PASS, {"cone": target.to_json(), "hilbert_basis": [list(v) for v in hb]}


def cmd_check_fan(args, cfg):
    spec, _ = _load(args)
    f = spec.fan
    complete = is_complete(f, seed=cfg.seed)
    simplicial = is_simplicial_fan(f)
    res = {
        "fan": f.to_json(),
        "normalized_rays": [spec.ray_ids[i] for i in f.normalized_rays],
        "cone_count": len(f.cones),
        "f_vector": f_vector(f),
        "complete": complete,
        "simplicial": simplicial,
        "smooth": is_smooth_fan(f),
        "betti": betti_oracle(f) if complete and simplicial else None,
        "divisors": {k: list(D.coeffs) for k, D in spec.divisors.items()},
    }
    return PASS, res


def cmd_check_ample(args, cfg):
    spec, D = _load(args)
    D = D or spec.divisor
    if D is None:
        raise ValueError("--divisor is required when the fan file names none")
    r = ample_check(spec.fan, D)
    return (PASS if r.ample else FAIL), {"divisor": list(D.coeffs), **r.to_json()}


def cmd_cohomology(args, cfg):
    spec, D = _load(args)
    f = spec.fan
    D = D or ToricDivisor.zero(f)
    forms = [args.p_form] if args.p_form is not None else range(f.rank + 1)
    engine = cech.CechEngine(f, cfg.prime)
    table = None
    for j in forms:
        t = cohomology_dims(f, j, D, p=cfg.prime, margin=cfg.box_margin, engine=engine)
        table = t if table is None else table.merge(t)
    res = {"divisor": list(D.coeffs), **table.to_json()}
    return (PASS if table.sound else FAIL), res


def cmd_bott_verify(args, cfg):
    spec, D = _load(args)
    D = D or spec.divisor
    if D is None:
        raise ValueError("--divisor is required when the fan file names none")
    r = bott_verify(spec.fan, D, p=cfg.prime, margin=cfg.box_margin)
    return (PASS if r["status"] == "PASS" else FAIL), r


def cmd_frobenius_verify(args, cfg):
    spec, _ = _load(args)
    r = verify_glue_compat(spec.fan, cfg.prime, samples=args.samples, seed=cfg.seed)
    return (PASS if r["pass"] else FAIL), r


def cmd_sigma_verify(args, cfg):
    spec, _ = _load(args)
    r = sigma_verify(spec.fan, cfg.prime, samples=args.samples, seed=cfg.seed, margin=cfg.box_margin)
    return (PASS if r["pass"] else FAIL), r


def cmd_degeneration(args, cfg):
    spec, _ = _load(args)
    r = degeneration_check(spec.fan, p=cfg.prime, margin=cfg.box_margin)
    return (PASS if r["status"] == "PASS" else FAIL), r


def _nonvanishing(main, dual, n):
    a, b = main(n), dual(n)
    ok = a["exact"] and a["value"] == 1 and b["exact"] and b["value"] == 1
    return (PASS if ok else FAIL), {"n": n, "value": a["value"], "exact": a["exact"], "main": a, "dual_check": b}


def cmd_quadric(args, cfg):
    return _nonvanishing(quadric_nonvanishing, quadric_dual, args.n)


def cmd_incidence(args, cfg):
    return _nonvanishing(incidence_nonvanishing, incidence_dual, args.n)


COMMANDS = {
    "witt-table": (cmd_witt_table, "addition and multiplication tables of W_2(F_p)"),
    "dual": (cmd_dual, "dual cone generators"),
    "hilbert": (cmd_hilbert, "Hilbert basis of a cone's lattice points (of the dual for a fan cone)"),
    "check-fan": (cmd_check_fan, "validate a fan file and report its invariants"),
    "check-ample": (cmd_check_ample, "decide ampleness of a divisor"),
    "cohomology": (cmd_cohomology, "dimensions h^q of twisted sheaves of forms"),
    "bott-verify": (cmd_bott_verify, "check vanishing of higher cohomology for an ample divisor"),
    "frobenius-verify": (cmd_frobenius_verify, "check that chart Frobenius lifts glue"),
    "sigma-verify": (cmd_sigma_verify, "check the de Rham splitting on every chart"),
    "degeneration": (cmd_degeneration, "compare Hodge sums with de Rham hypercohomology"),
    "quadric": (cmd_quadric, "non-vanishing on a smooth quadric"),
    "incidence": (cmd_incidence, "non-vanishing on the incidence divisor in P^n x P^n"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prime", type=int, default=2)
    common.add_argument("--box-margin", type=int, default=None, help="grade box margin (default: rank + 1)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--max-matrix", type=int, default=linalg.DEFAULT_MAX_COLUMNS, help="largest dense matrix dimension")
    common.add_argument("--max-grades", type=int, default=cech.DEFAULT_MAX_GRADES)

    parser = argparse.ArgumentParser(prog="frobtoric", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, helptext) in COMMANDS.items():
        sp = sub.add_parser(name, parents=[common], help=helptext)
        if name in ("dual", "hilbert"):
            sp.add_argument("--generators", help="cone generators, e.g. '1,0;1,2'")
            sp.add_argument("--lattice", choices=("N", "M"), default="N")
            sp.add_argument("--fan")
            sp.add_argument("--cone", help="ray ids of a cone in --fan")
        elif name in ("quadric", "incidence"):
            sp.add_argument("--n", type=int, required=True)
        elif name != "witt-table":
            sp.add_argument("--fan", required=True)
            if name in ("check-ample", "cohomology", "bott-verify"):
                sp.add_argument("--divisor", help="divisor name from the fan file or coefficients '1,0,0'")
            if name == "cohomology":
                sp.add_argument("--p-form", type=int, default=None)
            if name in ("frobenius-verify", "sigma-verify"):
                sp.add_argument("--samples", type=int, default=5 if name == "frobenius-verify" else 20)
    return parser


def _table_lines(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _table_lines(v, f"{prefix}{k}.")
    elif isinstance(obj, list) and obj and all(isinstance(x, (dict, list)) for x in obj):
        for i, v in enumerate(obj):
            yield from _table_lines(v, f"{prefix}{i}.")
    else:
        yield f"{prefix[:-1]:<48} {json.dumps(obj)}"


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2)
    return "\n".join(_table_lines(report))


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    report = {"schema": SCHEMA, "command": args.command}
    saved = (linalg.MAX_COLUMNS, cech.MAX_GRADES)
    try:
        cfg = SessionConfig(
            prime=args.prime,
            box_margin=args.box_margin,
            max_matrix=args.max_matrix,
            max_grades=args.max_grades,
            seed=args.seed,
            format=args.format,
        )
        report["config"] = asdict(cfg)
        cfg.apply()
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            status, result = COMMANDS[args.command][0](args, cfg)
        if caught:
            report["warnings"] = [str(w.message) for w in caught]
        report["status"] = "pass" if status == PASS else "fail"
        report["result"] = result
    except InternalInconsistency as e:
        status = FAIL
        report.update(status="fail", error=f"InternalInconsistency: {e}")
    except CapacityError as e:
        status = CAPACITY
        report.update(status="capacity", error=str(e))
    except (FrobToricError, ValueError, OSError) as e:
        status = INPUT_ERROR
        report.update(status="input-error", error=f"{type(e).__name__}: {e}")
    finally:
        linalg.set_max_columns(saved[0])
        cech.MAX_GRADES = saved[1]
    report.setdefault("config", None)
    print(render(report, args.format), file=out)
    return status


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
