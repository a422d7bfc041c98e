"""Command line front end.

One subcommand per library entry point, JSON in and JSON out.  Inputs
are files passed with --in (repeatable, order matters for two-input
commands); results go to stdout and, with --out, to a file as the same
bytes.  Output is deterministic: the same inputs always produce the
same bytes.

Exit codes: 0 when the command succeeds and any checked property holds,
1 when a property fails or a construction is refused (precondition,
no inverse, decomposition refused), 2 for malformed input or a
capability the chosen instance does not have.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Optional

from .core import (
    EQ_TOL_DEFAULT,
    CapabilityError,
    DaggerError,
    InputError,
    Tolerance,
    verify_mp,
)
from .decomp import gcsvd_from_mp, gsvd_from_mp, polar_from_mp
from .karoubi import embed, iso_from_mp, mp_from_iso, mp_in_karoubi
from .matrix import (
    ComplexMatrix,
    MatrixInstance,
    dagger_kernel,
    matrix_from_obj,
    matrix_to_obj,
    numeric_rank,
    pinv,
    split_dagger_idempotent,
    svd,
)
from .pinj import PInjInstance, pinj_from_obj, pinj_to_obj, verify_inverse_category_laws
from .rel import (
    RelInstance,
    brute_force_mp,
    gcsvd_rel,
    is_difunctional,
    mp_inverse_rel,
    rel_from_obj,
    rel_to_obj,
)


def _load_json(path: str) -> Any:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: invalid JSON ({exc})") from None


def _expect_inputs(args: argparse.Namespace, n: int) -> list:
    paths = args.inputs or []
    if len(paths) != n:
        raise InputError(f"expected {n} --in file(s), got {len(paths)}")
    return [_load_json(p) for p in paths]


def _tolerance(args: argparse.Namespace) -> Tolerance:
    eq = args.eq_tol if args.eq_tol is not None else EQ_TOL_DEFAULT
    return Tolerance(rank_tol=args.rank_tol, eq_tol=eq)


def _detect(obj: Any):
    """Build (instance, morphism) from a JSON object by its keys."""
    if not isinstance(obj, dict):
        raise InputError("input must be a JSON object")
    if "data" in obj:
        return "matrix", matrix_from_obj(obj)
    if "pairs" in obj:
        return "rel", rel_from_obj(obj)
    if "map" in obj:
        return "pinj", pinj_from_obj(obj)
    raise InputError("cannot tell matrix / relation / partial injection apart")


def _instance_for(kind: str, args: argparse.Namespace):
    if kind == "matrix":
        return MatrixInstance(_tolerance(args))
    if kind == "rel":
        return RelInstance()
    return PInjInstance()


def _to_obj(kind: str, m: Any) -> dict:
    if kind == "matrix":
        return matrix_to_obj(m)
    if kind == "rel":
        return rel_to_obj(m)
    return pinj_to_obj(m)


def cmd_pinv(args) -> tuple[dict, int]:
    (obj,) = _expect_inputs(args, 1)
    a = matrix_from_obj(obj)
    return matrix_to_obj(pinv(a, rank_tol=args.rank_tol)), 0


def cmd_svd(args) -> tuple[dict, int]:
    (obj,) = _expect_inputs(args, 1)
    res = svd(matrix_from_obj(obj), rank_tol=args.rank_tol)
    out = {
        "u": matrix_to_obj(res.u),
        "sigma": list(res.sigma),
        "v": matrix_to_obj(res.v),
        "rank": res.rank,
    }
    return out, 0


def cmd_kernel(args) -> tuple[dict, int]:
    (obj,) = _expect_inputs(args, 1)
    k = dagger_kernel(matrix_from_obj(obj), rank_tol=args.rank_tol)
    return matrix_to_obj(k), 0


def cmd_split_idem(args) -> tuple[dict, int]:
    (obj,) = _expect_inputs(args, 1)
    eq = args.eq_tol if args.eq_tol is not None else EQ_TOL_DEFAULT
    r = split_dagger_idempotent(matrix_from_obj(obj), eq_tol=eq)
    return matrix_to_obj(r), 0


def cmd_rank_transpose(args) -> tuple[dict, int]:
    (obj,) = _expect_inputs(args, 1)
    a = matrix_from_obj(obj)
    at = a.array.T
    r = numeric_rank(a, rank_tol=args.rank_tol)
    r_left = numeric_rank(ComplexMatrix(a.array @ at), rank_tol=args.rank_tol)
    r_right = numeric_rank(ComplexMatrix(at @ a.array), rank_tol=args.rank_tol)
    has = r_left == r == r_right
    out = {"has_mp": has, "rank": r, "rank_a_at": r_left, "rank_at_a": r_right}
    return out, 0 if has else 1


def cmd_verify_mp(args) -> tuple[dict, int]:
    obj_f, obj_g = _expect_inputs(args, 2)
    kind_f, f = _detect(obj_f)
    kind_g, g = _detect(obj_g)
    if kind_f != kind_g:
        raise InputError(f"inputs are different kinds: {kind_f} and {kind_g}")
    inst = _instance_for(kind_f, args)
    report = verify_mp(inst, f, g)
    out = {"instance": kind_f}
    out.update(report.as_dict())
    return out, 0 if report.all_hold else 1


def cmd_gcsvd(args) -> tuple[dict, int]:
    (obj,) = _expect_inputs(args, 1)
    inst = MatrixInstance(_tolerance(args))
    f = matrix_from_obj(obj)
    t = gcsvd_from_mp(inst, f, inst.mp(f))
    out = {
        "r": matrix_to_obj(t.r),
        "d": matrix_to_obj(t.d),
        "s": matrix_to_obj(t.s),
        "residuals": t.residuals,
    }
    return out, 0


def cmd_gsvd(args) -> tuple[dict, int]:
    (obj,) = _expect_inputs(args, 1)
    inst = MatrixInstance(_tolerance(args))
    f = matrix_from_obj(obj)
    t = gsvd_from_mp(inst, f, inst.mp(f))
    out = {
        "u": matrix_to_obj(t.u),
        "d": matrix_to_obj(t.d),
        "v": matrix_to_obj(t.v),
        "v_classical": matrix_to_obj(inst.dagger(t.v)),
        "dims": list(t.dims),
        "residuals": t.residuals,
    }
    return out, 0


def cmd_polar(args) -> tuple[dict, int]:
    (obj,) = _expect_inputs(args, 1)
    inst = MatrixInstance(_tolerance(args))
    f = matrix_from_obj(obj)
    pair = polar_from_mp(inst, f, inst.mp(f))
    out = {
        "u": matrix_to_obj(pair.u),
        "h": matrix_to_obj(pair.h),
        "residuals": pair.residuals,
    }
    return out, 0


def cmd_rel_difunctional(args) -> tuple[dict, int]:
    (obj,) = _expect_inputs(args, 1)
    ok = is_difunctional(rel_from_obj(obj))
    return {"difunctional": ok}, 0 if ok else 1


def cmd_rel_mp(args) -> tuple[dict, int]:
    (obj,) = _expect_inputs(args, 1)
    g = mp_inverse_rel(rel_from_obj(obj))
    if g is None:
        return {"exists": False}, 1
    return rel_to_obj(g), 0


def cmd_rel_oracle(args) -> tuple[dict, int]:
    (obj,) = _expect_inputs(args, 1)
    g = brute_force_mp(rel_from_obj(obj))
    if g is None:
        return {"exists": False}, 1
    return rel_to_obj(g), 0


def cmd_rel_split_per(args) -> tuple[dict, int]:
    (obj,) = _expect_inputs(args, 1)
    inst = RelInstance()
    mem = inst.split_idempotent(rel_from_obj(obj))
    return rel_to_obj(mem), 0


def cmd_rel_gcsvd(args) -> tuple[dict, int]:
    (obj,) = _expect_inputs(args, 1)
    r, d, s = gcsvd_rel(rel_from_obj(obj))
    return {"r": rel_to_obj(r), "d": rel_to_obj(d), "s": rel_to_obj(s)}, 0


def cmd_pinj_verify(args) -> tuple[dict, int]:
    paths = args.inputs or []
    if len(paths) not in (1, 2):
        raise InputError(f"expected 1 or 2 --in file(s), got {len(paths)}")
    objs = [_load_json(p) for p in paths]
    f = pinj_from_obj(objs[0])
    g = pinj_from_obj(objs[1]) if len(objs) == 2 else f
    inst = PInjInstance()
    report = verify_mp(inst, f, f.dagger())
    regular, commute = verify_inverse_category_laws(f, g)
    out = {
        "mp_all_hold": report.all_hold,
        "law_regular": regular,
        "law_projections_commute": commute,
    }
    ok = report.all_hold and regular and commute
    return out, 0 if ok else 1


def cmd_karoubi_check(args) -> tuple[dict, int]:
    (obj,) = _expect_inputs(args, 1)
    kind, f = _detect(obj)
    inst = _instance_for(kind, args)
    f_mp = inst.mp(f)
    report = verify_mp(inst, f, f_mp)
    forward, backward = iso_from_mp(inst, f, f_mp)
    f_back, g_back = mp_from_iso(inst, forward, backward)
    round_trip = inst.equals(f_back, f) and inst.equals(g_back, f_mp)
    housed = mp_in_karoubi(inst, embed(inst, f))
    karoubi_matches = inst.equals(housed.f, f_mp)
    out = {
        "instance": kind,
        "mp_all_hold": report.all_hold,
        "round_trip_matches": round_trip,
        "karoubi_inverse_matches": karoubi_matches,
    }
    ok = report.all_hold and round_trip and karoubi_matches
    return out, 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--in",
        dest="inputs",
        action="append",
        metavar="PATH",
        help="input JSON file; repeat for commands taking two",
    )
    common.add_argument("--out", metavar="PATH", help="also write the output here")
    common.add_argument(
        "--rank-tol",
        type=float,
        default=None,
        help="singular value cutoff (matrix commands; default scales with the input)",
    )
    common.add_argument(
        "--eq-tol",
        type=float,
        default=None,
        help="equality tolerance (matrix commands)",
    )
    common.add_argument(
        "--pretty", action="store_true", help="indent the JSON output"
    )

    parser = argparse.ArgumentParser(
        prog="daggermp",
        description="Moore-Penrose inverses and factorizations for matrices, "
        "relations and partial injections",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler, help_: str):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(handler=handler)
        return p

    add("pinv", cmd_pinv, "Moore-Penrose inverse of a matrix")
    add("svd", cmd_svd, "singular value decomposition of a matrix")
    add("kernel", cmd_kernel, "orthonormal basis of the left null space")
    add("split-idem", cmd_split_idem, "split a dagger idempotent matrix")
    add(
        "rank-transpose",
        cmd_rank_transpose,
        "existence of an inverse for the plain-transpose dagger",
    )
    add("verify-mp", cmd_verify_mp, "check the four inverse identities (two inputs)")
    add("gcsvd", cmd_gcsvd, "compact factorization r . d . s")
    add("gsvd", cmd_gsvd, "full unitary factorization u . (d + 0) . v")
    add("polar", cmd_polar, "polar factorization u . h")

    rel = sub.add_parser("rel", help="finite relation commands")
    rel_sub = rel.add_subparsers(dest="rel_command", required=True)

    def add_rel(name: str, handler, help_: str):
        p = rel_sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(handler=handler)
        return p

    add_rel("difunctional", cmd_rel_difunctional, "test zig-zag closedness")
    add_rel("mp", cmd_rel_mp, "inverse via the difunctionality criterion")
    add_rel("oracle", cmd_rel_oracle, "inverse by exhaustive search (small sizes)")
    add_rel("split-per", cmd_rel_split_per, "classes of a partial equivalence relation")
    add_rel("gcsvd", cmd_rel_gcsvd, "exact compact factorization")

    pinj = sub.add_parser("pinj", help="partial injection commands")
    pinj_sub = pinj.add_subparsers(dest="pinj_command", required=True)
    p_verify = pinj_sub.add_parser(
        "verify",
        parents=[common],
        help="dagger-is-inverse identities (one map, optionally a second "
        "parallel one)",
    )
    p_verify.set_defaults(handler=cmd_pinj_verify)

    kar = sub.add_parser("karoubi", help="formal idempotent splitting commands")
    kar_sub = kar.add_subparsers(dest="karoubi_command", required=True)
    k_check = kar_sub.add_parser(
        "check",
        parents=[common],
        help="round-trip a map through its splitting (matrix, relation or "
        "partial injection)",
    )
    k_check.set_defaults(handler=cmd_karoubi_check)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out, code = args.handler(args)
    except (InputError, CapabilityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DaggerError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 1
    text = json.dumps(out, indent=2 if args.pretty else None) + "\n"
    sys.stdout.write(text)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    return code


if __name__ == "__main__":
    sys.exit(main())
