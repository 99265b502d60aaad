"""Command-line laboratory: every operation as a subcommand with JSON reports.

Reports are canonical JSON (sorted keys, fixed separators, one trailing
newline) so identical invocations are byte-identical.  Integers that can
exceed 64 bits travel as decimal strings.  Exit codes: 0 success, 2
validation error, 3 guard exceeded, 64 unknown subcommand, 65 malformed
JSON input file.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Any, Callable, Optional

from . import __version__, bounds, forms, phigroup, polyalg, repaction
from .errors import GuardExceeded, SchemaError
from .gf2 import BitMatrix, BitVector

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_GUARD = 3
EXIT_UNKNOWN_COMMAND = 64
EXIT_BAD_JSON = 65


class _CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would sys.exit(2) with usage noise
        raise _CliError(message)


@dataclass
class Report:
    command: str
    inputs: dict
    result: dict
    provenance: dict
    version: str = __version__

    def to_json(self) -> str:
        payload = {
            "command": self.command,
            "inputs": self.inputs,
            "result": self.result,
            "provenance": self.provenance,
            "version": self.version,
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _error_json(code: str, message: str, **extra: Any) -> str:
    obj = {"error": {"code": code, "message": message, **extra}}
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


# -- input loading -------------------------------------------------------------


def _load_json(path: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise SchemaError([f"{path}: file not found"]) from exc
    except json.JSONDecodeError as exc:
        raise _BadJson(f"{path}: {exc}") from exc


class _BadJson(Exception):
    pass


def load_family(path: str) -> forms.FormFamily:
    return forms.FormFamily.from_json_dict(_as_dict(_load_json(path), path))


def load_table(path: str) -> repaction.GroupOracle:
    obj = _as_dict(_load_json(path), path)
    failing = [f"missing key {k!r}" for k in ("order", "mul") if k not in obj]
    if failing:
        raise SchemaError(failing)
    if not isinstance(obj["mul"], list) or len(obj["mul"]) != obj["order"]:
        raise SchemaError(["mul: must be an order x order table"])
    try:
        return repaction.GroupOracle.from_table(obj["mul"])
    except ValueError as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError([f"mul: {exc}"]) from exc


def load_ideal(path: str) -> polyalg.IdealGens:
    obj = _as_dict(_load_json(path), path)
    failing = [f"missing key {k!r}" for k in ("nvars", "gens") if k not in obj]
    if failing:
        raise SchemaError(failing)
    gens = []
    for i, g in enumerate(obj["gens"]):
        try:
            gens.append(polyalg.GradedPoly.from_json_dict({"nvars": obj["nvars"], **g}))
        except SchemaError as exc:
            raise SchemaError([f"gens[{i}].{f}" for f in exc.fields]) from exc
    return polyalg.IdealGens(obj["nvars"], tuple(gens))


def load_system(path: str) -> forms.QuadraticSystem:
    return forms.QuadraticSystem.from_json_dict(_as_dict(_load_json(path), path))


def load_action(path: str) -> polyalg.LinearAction:
    obj = _as_dict(_load_json(path), path)
    failing = [f"missing key {k!r}" for k in ("nvars", "generators") if k not in obj]
    if failing:
        raise SchemaError(failing)
    gens = []
    for i, rows in enumerate(obj["generators"]):
        try:
            m = BitMatrix.from_strings(rows)
            if m.rows != obj["nvars"] or m.cols != obj["nvars"]:
                raise ValueError("wrong shape")
            gens.append(m)
        except (ValueError, TypeError) as exc:
            raise SchemaError([f"generators[{i}]: {exc}"]) from exc
    try:
        return polyalg.LinearAction(obj["nvars"], tuple(gens))
    except ValueError as exc:
        raise SchemaError([f"generators: {exc}"]) from exc


def _as_dict(obj: Any, path: str) -> dict:
    if not isinstance(obj, dict):
        raise SchemaError([f"{path}: top-level JSON value must be an object"])
    return obj


def _ids(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok != ""]
    except ValueError as exc:
        raise _CliError(f"expected a comma-separated id list, got {text!r}") from exc


def _load_group_and_reps(args) -> tuple[repaction.GroupOracle, list[repaction.MonomialRep]]:
    oracle = _load_group(args)
    spec = getattr(args, "reps", None)
    if spec:
        data = json.loads(spec) if spec.lstrip().startswith("[") else _load_json(spec)
        if not isinstance(data, list):
            raise SchemaError(["reps: must be a list of {c_gens, chars} objects"])
        reps = []
        for i, item in enumerate(data):
            if "c_gens" not in item or "chars" not in item:
                raise SchemaError([f"reps[{i}]: needs c_gens and chars"])
            reps.append(repaction.build_induced(oracle, item["c_gens"], item["chars"]))
        return oracle, reps
    if getattr(oracle, "phi", None) is None:
        raise SchemaError(["reps: required when the group comes from a Cayley table"])
    G = oracle.phi
    reps = [
        repaction.build_induced(oracle, [G.element_id(G.generator_b(s))], [-1])
        for s in range(G.t)
    ]
    return oracle, reps


def _load_group(args) -> repaction.GroupOracle:
    family, table = getattr(args, "family", None), getattr(args, "table", None)
    if (family is None) == (table is None):
        raise _CliError("exactly one of --family or --table is required")
    if family:
        return repaction.GroupOracle.from_phi_group(phigroup.PhiGroup(load_family(family)))
    return load_table(table)


# -- command handlers ----------------------------------------------------------

_MODES = {"exhaustive": "exhaustive", "bnb": "branch_and_bound"}


def _cmd_forms_gen(args) -> dict:
    fam = forms.random_family(args.n, args.t, args.seed)
    if args.save_family:
        _emit(json.dumps(fam.to_json_dict(), sort_keys=True, separators=(",", ":")) + "\n",
              args.save_family)
    return {"family": fam.to_json_dict()}


def _cmd_forms_czero(args) -> dict:
    system = load_system(args.system)
    zero = forms.common_zero_quadratics(system)
    return {
        "zero": zero.to_string() if zero is not None else None,
        "exhaustive": True,
        "variables": system.v,
    }


def _cmd_group_info(args) -> dict:
    fam = load_family(args.family)
    G = phigroup.PhiGroup(fam)
    radical, rank = phigroup.center(G)
    return {
        "n": G.n,
        "t": G.t,
        "order": str(G.order),
        "center_rank": rank,
        "center_a_radical_dim": radical.dim,
        "center_order4_dim": phigroup.center_order4_dim(G),
    }


def _cmd_group_rank(args) -> dict:
    fam = load_family(args.family)
    res = phigroup.max_isotropic_qzero(fam, mode=_MODES[args.mode])
    return {
        "rank": fam.t + res.dim,
        "isotropic_dim": res.dim,
        "witness": [v.to_string() for v in res.witness.basis],
    }


def _cmd_group_profile(args) -> dict:
    fam = load_family(args.family)
    profile = phigroup.extension_profile(phigroup.PhiGroup(fam), mode=_MODES[args.mode])
    return {
        "T": profile.T,
        "N": profile.N,
        "witness": [v.to_string() for v in profile.v_witness.basis],
    }


def _cmd_search_olshanskii(args) -> dict:
    res = phigroup.search_forms(args.n, args.t, args.k, args.trials, args.seed)
    if res.family is not None and args.save_family:
        _emit(
            json.dumps(res.family.to_json_dict(), sort_keys=True, separators=(",", ":")) + "\n",
            args.save_family,
        )
    return {
        "condition_holds": res.condition_holds,
        "found": res.family is not None,
        "trial_index": res.trial_index,
        "trials_run": res.trials_run,
        "rank_target": args.t + args.k - 1,
        "skipped_guard": res.skipped_guard,
        "family": res.family.to_json_dict() if res.family is not None else None,
    }


def _cmd_rep_free(args) -> dict:
    oracle, reps = _load_group_and_reps(args)
    res = repaction.is_free_on_product(oracle, reps)
    return {"free": res.free, "witness": res.witness, "factors": len(reps)}


def _cmd_rep_isotropy(args) -> dict:
    oracle, reps = _load_group_and_reps(args)
    res = repaction.max_isotropy_rank(oracle, reps)
    return {"rank": res.rank, "witness_gens": list(res.witness_gens), "factors": len(reps)}


def _cmd_rep_twocentral(args) -> dict:
    oracle = _load_group(args)
    return {"two_central": repaction.is_two_central(oracle)}


def _cmd_poly_hilbert(args) -> dict:
    ideal = load_ideal(args.ideal)
    return {"dim": polyalg.hilbert_function(ideal, args.degree), "degree": args.degree}


def _cmd_poly_regseq(args) -> dict:
    ideal = load_ideal(args.ideal)
    regular = polyalg.is_regular_sequence(ideal)
    return {
        "regular": regular,
        "total_dim": polyalg.quotient_total_dim(ideal) if regular else None,
    }


def _cmd_poly_euler(args) -> dict:
    oracle = _load_group(args)
    rep = repaction.build_induced(oracle, _ids(args.c_gens), [int(c) for c in args.chars.split(",")])
    euler = polyalg.euler_class_restriction(rep, _ids(args.e_gens), args.e_rank)
    return {"euler": euler.to_json_dict(), "is_zero": euler.is_zero(), "rep_dim": rep.dim}


def _cmd_poly_powertest(args) -> dict:
    action = load_action(args.action)
    ys_data = json.loads(args.ys) if args.ys.lstrip().startswith("[") else _load_json(args.ys)
    ys = [
        polyalg.GradedPoly.linear(action.nvars, BitVector.from_coords(coords))
        for coords in ys_data
    ]
    res = polyalg.power_span_test(action, ys, args.p)
    return {"stable": res.stable, "permuted": res.permuted}


def _cmd_bounds_rp_rank(args) -> dict:
    return {
        "free_rank": bounds.free_rank_rp(args.m, args.n),
        "caveat_small_m": args.m <= bounds.SMALL_SPHERE_CAVEAT,
    }


def _cmd_bounds_headline(args) -> dict:
    rep = bounds.headline_report(args.n, args.t, args.k)
    return {
        "condition_holds": rep.condition_holds,
        "T_bound": rep.T_bound,
        "N_bound": rep.N_bound,
        "sphere_dim": str(rep.sphere_dim),
        "sphere_dim_digits": len(str(rep.sphere_dim)),
        "browder_min_m": rep.browder_min_m,
        "carlsson_exact": str(rep.carlsson_min_m.exact),
        "carlsson_paper_weak": str(rep.carlsson_min_m.paper_weak),
    }


def _cmd_audit_sn(args) -> dict:
    res = bounds.perm_rank_audit(args.n)
    return {
        "ok": res.ok,
        "worst_rank": res.worst_rank,
        "worst_orbits": res.worst_orbits,
        "subgroups_checked": res.subgroups_checked,
    }


def _cmd_audit_gl(args) -> dict:
    res = bounds.gl_rank_audit(args.n)
    return {
        "ok": res.max_rank_found <= res.bound,
        "max_rank_found": res.max_rank_found,
        "bound": res.bound,
        "subgroups_checked": res.subgroups_checked,
    }


# -- registry ------------------------------------------------------------------


def _add_common(p: _Parser) -> None:
    p.add_argument("--out", default=None)


def _build_parsers() -> dict[str, tuple[_Parser, Callable]]:
    table: dict[str, tuple[_Parser, Callable]] = {}

    def cmd(name: str, handler: Callable, flags: Callable[[_Parser], None]) -> None:
        p = _Parser(prog=f"sphererank {name}", add_help=True, allow_abbrev=False)
        flags(p)
        _add_common(p)
        table[name] = (p, handler)

    cmd("forms gen", _cmd_forms_gen, lambda p: (
        p.add_argument("--n", type=int, required=True),
        p.add_argument("--t", type=int, required=True),
        p.add_argument("--seed", type=int, default=0),
        p.add_argument("--save-family", default=None),
    ))
    cmd("forms czero", _cmd_forms_czero, lambda p: (
        p.add_argument("--system", required=True),
    ))
    cmd("group info", _cmd_group_info, lambda p: (
        p.add_argument("--family", required=True),
    ))
    cmd("group rank", _cmd_group_rank, lambda p: (
        p.add_argument("--family", required=True),
        p.add_argument("--mode", choices=sorted(_MODES), default="bnb"),
    ))
    cmd("group profile", _cmd_group_profile, lambda p: (
        p.add_argument("--family", required=True),
        p.add_argument("--mode", choices=sorted(_MODES), default="bnb"),
    ))
    cmd("search olshanskii", _cmd_search_olshanskii, lambda p: (
        p.add_argument("--n", type=int, required=True),
        p.add_argument("--t", type=int, required=True),
        p.add_argument("--k", type=int, required=True),
        p.add_argument("--trials", type=int, default=1000),
        p.add_argument("--seed", type=int, default=0),
        p.add_argument("--save-family", default=None),
    ))
    cmd("rep free", _cmd_rep_free, lambda p: (
        p.add_argument("--family", default=None),
        p.add_argument("--table", default=None),
        p.add_argument("--reps", default=None),
    ))
    cmd("rep isotropy", _cmd_rep_isotropy, lambda p: (
        p.add_argument("--family", default=None),
        p.add_argument("--table", default=None),
        p.add_argument("--reps", default=None),
    ))
    cmd("rep twocentral", _cmd_rep_twocentral, lambda p: (
        p.add_argument("--family", default=None),
        p.add_argument("--table", default=None),
    ))
    cmd("poly hilbert", _cmd_poly_hilbert, lambda p: (
        p.add_argument("--ideal", required=True),
        p.add_argument("--degree", type=int, required=True),
    ))
    cmd("poly regseq", _cmd_poly_regseq, lambda p: (
        p.add_argument("--ideal", required=True),
    ))
    cmd("poly euler", _cmd_poly_euler, lambda p: (
        p.add_argument("--family", default=None),
        p.add_argument("--table", default=None),
        p.add_argument("--c-gens", dest="c_gens", required=True),
        p.add_argument("--chars", required=True),
        p.add_argument("--e-gens", dest="e_gens", required=True),
        p.add_argument("--e-rank", dest="e_rank", type=int, required=True),
    ))
    cmd("poly powertest", _cmd_poly_powertest, lambda p: (
        p.add_argument("--action", required=True),
        p.add_argument("--ys", required=True),
        p.add_argument("--p", type=int, required=True),
    ))
    cmd("bounds rp-rank", _cmd_bounds_rp_rank, lambda p: (
        p.add_argument("--m", type=int, required=True),
        p.add_argument("--n", type=int, required=True),
    ))
    cmd("bounds headline", _cmd_bounds_headline, lambda p: (
        p.add_argument("--n", type=int, required=True),
        p.add_argument("--t", type=int, required=True),
        p.add_argument("--k", type=int, required=True),
    ))
    cmd("audit sn", _cmd_audit_sn, lambda p: (
        p.add_argument("--n", type=int, required=True),
    ))
    cmd("audit gl", _cmd_audit_gl, lambda p: (
        p.add_argument("--n", type=int, required=True),
    ))
    return table


_PARSERS = _build_parsers()


def dispatch(argv: list[str]) -> int:
    if len(argv) < 2 or " ".join(argv[:2]) not in _PARSERS:
        known = ", ".join(sorted(_PARSERS))
        sys.stdout.write(
            _error_json("unknown_command", f"expected one of: {known}", argv=argv[:2])
        )
        return EXIT_UNKNOWN_COMMAND
    name = " ".join(argv[:2])
    parser, handler = _PARSERS[name]
    try:
        args = parser.parse_args(argv[2:])
    except _CliError as exc:
        sys.stdout.write(_error_json("validation", str(exc)))
        return EXIT_VALIDATION
    try:
        result = handler(args)
    except _BadJson as exc:
        sys.stdout.write(_error_json("malformed_json", str(exc)))
        return EXIT_BAD_JSON
    except GuardExceeded as exc:
        sys.stdout.write(_error_json("guard_exceeded", str(exc), guard=exc.guard))
        return EXIT_GUARD
    except SchemaError as exc:
        sys.stdout.write(_error_json("validation", str(exc), fields=exc.fields))
        return EXIT_VALIDATION
    except (ValueError, TypeError, KeyError, _CliError) as exc:
        sys.stdout.write(_error_json("validation", str(exc)))
        return EXIT_VALIDATION

    guards_hit = []
    if name == "bounds rp-rank" and args.m <= bounds.SMALL_SPHERE_CAVEAT:
        guards_hit.append("small_sphere_caveat")
    if result.get("skipped_guard"):
        guards_hit.append(result["skipped_guard"])
    provenance = {
        "seed": str(getattr(args, "seed", 0)),
        "trials": getattr(args, "trials", None),
        "guards_hit": guards_hit,
    }
    inputs = {
        k: v
        for k, v in sorted(vars(args).items())
        if k not in ("out",) and v is not None
    }
    report = Report(command=name, inputs=inputs, result=result, provenance=provenance)
    _emit(report.to_json(), args.out)
    return EXIT_OK


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
