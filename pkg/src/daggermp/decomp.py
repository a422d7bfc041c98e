"""Three factorizations of a Moore-Penrose invertible morphism.

All of them are assembled from a verified pair (f, f°) using only
instance capabilities, so they work verbatim for matrices and, where the
capabilities exist, for relations.

compact form    f = r . d . s     r coisometry, d invertible, s isometry
full form       f = u . (d + 0) . v   u, v unitary, built from kernels
polar form      f = u . h         u partial isometry, h positive

Each constructor records its defining equations as residuals and
refuses (DecompositionError, carrying the residual) when one fails at
the instance tolerance.  Refusals happen in practice: the equations are
algebraic consequences of the axioms, but at aggressive tolerances or
borderline numerical rank the verification can genuinely miss.  Loosen
the instance's eq_tol to accept more rounding error, or treat the
refusal as the answer.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Optional

from .core import (
    DaggerInstance,
    DecompositionError,
    InputError,
    PreconditionError,
    is_coisometry,
    is_isometry,
    is_self_adjoint,
    is_unitary,
    verify_mp,
)


def _require_verified(inst: DaggerInstance, f: Any, f_mp: Any, what: str) -> None:
    report = verify_mp(inst, f, f_mp)
    if not report.all_hold:
        raise PreconditionError(
            f"{what} needs a verified M-P pair (residuals {report.residuals})"
        )


@dataclass(frozen=True)
class GCSVDTriple:
    """Compact factorization f = r . d . s with a two-sided inverse for d."""

    r: Any
    d: Any
    s: Any
    d_inv: Any
    residuals: dict


def gcsvd_from_mp(
    inst: DaggerInstance,
    f: Any,
    f_mp: Any,
    splitter: Optional[Callable[[Any], Any]] = None,
) -> GCSVDTriple:
    """Compact factorization through the splittings of f f° and f° f.

    ``splitter`` must send a dagger idempotent e to some m with
    m . m-dagger == e and m-dagger . m an identity; it defaults to the
    instance capability and its exceptions propagate (an instance that
    cannot split reports that here).
    """
    _require_verified(inst, f, f_mp, "compact factorization")
    split = splitter if splitter is not None else inst.split_idempotent
    r = split(inst.compose(f, f_mp))
    s = inst.dagger(split(inst.compose(f_mp, f)))
    d = inst.compose(inst.dagger(r), f, inst.dagger(s))
    d_inv = inst.compose(s, f_mp, r)
    mid = inst.source(d)
    mid_cod = inst.target(d)
    residuals = {
        "coisometry": inst.deviation(
            inst.compose(inst.dagger(r), r), inst.identity(mid)
        ),
        "isometry": inst.deviation(
            inst.compose(s, inst.dagger(s)), inst.identity(mid_cod)
        ),
        "invertible_left": inst.deviation(
            inst.compose(d, d_inv), inst.identity(mid)
        ),
        "invertible_right": inst.deviation(
            inst.compose(d_inv, d), inst.identity(mid_cod)
        ),
        "reconstruction": inst.deviation(inst.compose(r, d, s), f),
    }
    if not is_coisometry(inst, r):
        raise DecompositionError(
            f"source factor is not a coisometry (residual {residuals['coisometry']:.3e})"
        )
    if not is_isometry(inst, s):
        raise DecompositionError(
            f"target factor is not an isometry (residual {residuals['isometry']:.3e})"
        )
    if not (
        inst.equals(inst.compose(d, d_inv), inst.identity(mid))
        and inst.equals(inst.compose(d_inv, d), inst.identity(mid_cod))
    ):
        worst = max(residuals["invertible_left"], residuals["invertible_right"])
        raise DecompositionError(
            f"middle factor is not two-sided invertible (residual {worst:.3e})"
        )
    if not inst.equals(inst.compose(r, d, s), f):
        raise DecompositionError(
            f"factors do not recompose the map (residual {residuals['reconstruction']:.3e})"
        )
    return GCSVDTriple(r, d, s, d_inv, residuals)


def _check_gcsvd(inst: DaggerInstance, t: GCSVDTriple) -> None:
    mid, mid_cod = inst.source(t.d), inst.target(t.d)
    ok = (
        is_coisometry(inst, t.r)
        and is_isometry(inst, t.s)
        and inst.equals(inst.compose(t.d, t.d_inv), inst.identity(mid))
        and inst.equals(inst.compose(t.d_inv, t.d), inst.identity(mid_cod))
    )
    if not ok:
        raise InputError("triple does not satisfy the compact-form invariants")


def mp_from_gcsvd(inst: DaggerInstance, t: GCSVDTriple) -> Any:
    """Recover the M-P inverse from compact factors: s-dagger . d_inv . r-dagger."""
    _check_gcsvd(inst, t)
    f = inst.compose(t.r, t.d, t.s)
    candidate = inst.compose(inst.dagger(t.s), t.d_inv, inst.dagger(t.r))
    report = verify_mp(inst, f, candidate)
    if not report.all_hold:
        raise DecompositionError(
            f"reassembled inverse fails the axioms (residuals {report.residuals})"
        )
    return candidate


def gcsvd_intertwiners(
    inst: DaggerInstance, t1: GCSVDTriple, t2: GCSVDTriple
) -> tuple[Any, Any]:
    """Unitaries linking two compact factorizations of the same map.

    Returns (p, q) with r1 . p == r2, d1 . q == p . d2 and q . s2 == s1,
    exhibiting the factorization as unique up to unitary change of the
    middle objects.
    """
    f1 = inst.compose(t1.r, t1.d, t1.s)
    f2 = inst.compose(t2.r, t2.d, t2.s)
    if inst.source(f1) != inst.source(f2) or inst.target(f1) != inst.target(f2):
        raise InputError("triples factor maps of different types")
    if not inst.equals(f1, f2):
        raise InputError(
            f"triples factor different maps (residual {inst.deviation(f1, f2):.3e})"
        )
    p = inst.compose(inst.dagger(t1.r), t2.r)
    q = inst.compose(t1.s, inst.dagger(t2.s))
    if not (is_unitary(inst, p) and is_unitary(inst, q)):
        raise DecompositionError("intertwiners are not unitary")
    checks = (
        ("source factors", inst.compose(t1.r, p), t2.r),
        ("middle factors", inst.compose(t1.d, q), inst.compose(p, t2.d)),
        ("target factors", inst.compose(q, t2.s), t1.s),
    )
    for name, lhs, rhs in checks:
        if not inst.equals(lhs, rhs):
            raise DecompositionError(
                f"intertwiners fail to link the {name} "
                f"(residual {inst.deviation(lhs, rhs):.3e})"
            )
    return p, q


@dataclass(frozen=True)
class GSVDTriple:
    """Full factorization f = u . (d + 0) . v with u, v unitary.

    ``dims`` holds the four block sizes (rank part and kernel part on
    each side) needed to rebuild the padded middle map.
    """

    u: Any
    d: Any
    v: Any
    d_inv: Any
    dims: tuple[int, int, int, int]
    residuals: dict


def _padded_middle(inst: DaggerInstance, d: Any, z: int, w: int) -> Any:
    return inst.direct_sum(d, inst.zero(z, w))


def gsvd_from_mp(inst: DaggerInstance, f: Any, f_mp: Any) -> GSVDTriple:
    """Full unitary factorization, padding the compact form with kernels.

    Needs kernel, biproduct and zero capabilities on top of idempotent
    splitting; instances without them raise CapabilityError here.
    """
    _require_verified(inst, f, f_mp, "full factorization")
    compact = gcsvd_from_mp(inst, f, f_mp)
    k = inst.kernel(f)
    c = inst.kernel(inst.dagger(f))
    e_src = inst.compose(f, f_mp)
    e_tgt = inst.compose(f_mp, f)
    src_obj, tgt_obj = inst.source(f), inst.target(f)
    cover_src = inst.add(e_src, inst.compose(inst.dagger(k), k))
    cover_tgt = inst.add(e_tgt, inst.compose(inst.dagger(c), c))
    resid_src = inst.deviation(cover_src, inst.identity(src_obj))
    resid_tgt = inst.deviation(cover_tgt, inst.identity(tgt_obj))
    if not inst.equals(cover_src, inst.identity(src_obj)):
        raise DecompositionError(
            "range and kernel projections do not cover the source",
            residual=resid_src,
        )
    if not inst.equals(cover_tgt, inst.identity(tgt_obj)):
        raise DecompositionError(
            "range and kernel projections do not cover the target",
            residual=resid_tgt,
        )

    x = inst.target(compact.r)
    z = inst.source(k)
    y = inst.source(compact.s)
    w = inst.source(c)
    u = inst.add(
        inst.compose(compact.r, inst.injection((x, z), 0)),
        inst.compose(inst.dagger(k), inst.injection((x, z), 1)),
    )
    v = inst.add(
        inst.compose(inst.projection((y, w), 0), compact.s),
        inst.compose(inst.projection((y, w), 1), c),
    )
    middle = _padded_middle(inst, compact.d, z, w)
    recon = inst.compose(u, middle, v)
    residuals = {
        "kernel_source": resid_src,
        "kernel_target": resid_tgt,
        "reconstruction": inst.deviation(recon, f),
    }
    if not (is_unitary(inst, u) and is_unitary(inst, v)):
        raise DecompositionError("outer factors are not unitary")
    if not inst.equals(recon, f):
        raise DecompositionError(
            f"factors do not recompose the map (residual {residuals['reconstruction']:.3e})"
        )
    return GSVDTriple(u, compact.d, v, compact.d_inv, (x, z, y, w), residuals)


def _check_gsvd(inst: DaggerInstance, t: GSVDTriple) -> None:
    x, z, y, w = t.dims
    ok = (
        is_unitary(inst, t.u)
        and is_unitary(inst, t.v)
        and inst.equals(inst.compose(t.d, t.d_inv), inst.identity(x))
        and inst.equals(inst.compose(t.d_inv, t.d), inst.identity(y))
    )
    if not ok:
        raise InputError("triple does not satisfy the full-form invariants")


def mp_from_gsvd(inst: DaggerInstance, t: GSVDTriple) -> Any:
    """Recover the inverse by transposing the picture: v' . (d_inv + 0) . u'."""
    _check_gsvd(inst, t)
    x, z, y, w = t.dims
    f = inst.compose(t.u, _padded_middle(inst, t.d, z, w), t.v)
    candidate = inst.compose(
        inst.dagger(t.v),
        inst.direct_sum(t.d_inv, inst.zero(w, z)),
        inst.dagger(t.u),
    )
    report = verify_mp(inst, f, candidate)
    if not report.all_hold:
        raise DecompositionError(
            f"reassembled inverse fails the axioms (residuals {report.residuals})"
        )
    return candidate


def induced_gcsvd(inst: DaggerInstance, t: GSVDTriple) -> GCSVDTriple:
    """Restrict the full form back to rank blocks: a compact factorization."""
    _check_gsvd(inst, t)
    x, z, y, w = t.dims
    r = inst.compose(t.u, inst.projection((x, z), 0))
    s = inst.compose(inst.injection((y, w), 0), t.v)
    f = inst.compose(t.u, _padded_middle(inst, t.d, z, w), t.v)
    residuals = {
        "coisometry": inst.deviation(
            inst.compose(inst.dagger(r), r), inst.identity(x)
        ),
        "isometry": inst.deviation(
            inst.compose(s, inst.dagger(s)), inst.identity(y)
        ),
        "invertible_left": inst.deviation(
            inst.compose(t.d, t.d_inv), inst.identity(x)
        ),
        "invertible_right": inst.deviation(
            inst.compose(t.d_inv, t.d), inst.identity(y)
        ),
        "reconstruction": inst.deviation(inst.compose(r, t.d, s), f),
    }
    triple = GCSVDTriple(r, t.d, s, t.d_inv, residuals)
    _check_gcsvd(inst, triple)
    if not inst.equals(inst.compose(r, t.d, s), f):
        raise DecompositionError(
            "restricted factors do not recompose the map "
            f"(residual {residuals['reconstruction']:.3e})"
        )
    return triple


def gsvd_intertwiners(
    inst: DaggerInstance, t1: GSVDTriple, t2: GSVDTriple
) -> tuple[Any, Any, Any, Any]:
    """Blockwise unitaries linking two full factorizations of the same map.

    Returns (p, q, kp, kq): p and q link the rank blocks exactly as in
    the compact case, kp and kq link the kernel blocks, and
    u1 . (p + kp) == u2, (q + kq) . v2 == v1.
    """
    x1, z1, y1, w1 = t1.dims
    x2, z2, y2, w2 = t2.dims
    f1 = inst.compose(t1.u, _padded_middle(inst, t1.d, z1, w1), t1.v)
    f2 = inst.compose(t2.u, _padded_middle(inst, t2.d, z2, w2), t2.v)
    if inst.source(f1) != inst.source(f2) or inst.target(f1) != inst.target(f2):
        raise InputError("triples factor maps of different types")
    if not inst.equals(f1, f2):
        raise InputError(
            f"triples factor different maps (residual {inst.deviation(f1, f2):.3e})"
        )
    link_u = inst.compose(inst.dagger(t1.u), t2.u)
    link_v = inst.compose(t1.v, inst.dagger(t2.v))
    p = inst.compose(inst.injection((x1, z1), 0), link_u, inst.projection((x2, z2), 0))
    kp = inst.compose(inst.injection((x1, z1), 1), link_u, inst.projection((x2, z2), 1))
    q = inst.compose(inst.injection((y1, w1), 0), link_v, inst.projection((y2, w2), 0))
    kq = inst.compose(inst.injection((y1, w1), 1), link_v, inst.projection((y2, w2), 1))
    checks = (
        ("source factors", inst.compose(t1.u, inst.direct_sum(p, kp)), t2.u),
        ("middle factors", inst.compose(t1.d, q), inst.compose(p, t2.d)),
        ("target factors", inst.compose(inst.direct_sum(q, kq), t2.v), t1.v),
    )
    for name, lhs, rhs in checks:
        if not inst.equals(lhs, rhs):
            raise DecompositionError(
                f"intertwiners fail to link the {name} "
                f"(residual {inst.deviation(lhs, rhs):.3e})"
            )
    return p, q, kp, kq


@dataclass(frozen=True)
class PolarPair:
    """Polar factorization f = u . h, partial isometry times positive part."""

    u: Any
    h: Any
    h_mp: Any
    residuals: dict


def polar_from_mp(
    inst: DaggerInstance,
    f: Any,
    f_mp: Any,
    sqrt_provider: Optional[Callable[[Any], tuple[Any, Any]]] = None,
) -> PolarPair:
    """Polar factorization through the square root of f-dagger . f.

    ``sqrt_provider`` must return (h, h°) with h self-adjoint, h . h
    equal to the input and the pair verified; defaults to the instance
    capability, whose exceptions propagate.
    """
    _require_verified(inst, f, f_mp, "polar factorization")
    provider = sqrt_provider if sqrt_provider is not None else inst.sqrt_positive
    gram = inst.compose(inst.dagger(f), f)
    h, h_mp = provider(gram)
    if not is_self_adjoint(inst, h):
        raise PreconditionError("square root provider returned a non-self-adjoint map")
    if not inst.equals(inst.compose(h, h), gram):
        raise PreconditionError(
            "square root provider output does not square to f-dagger . f "
            f"(residual {inst.deviation(inst.compose(h, h), gram):.3e})"
        )
    report = verify_mp(inst, h, h_mp)
    if not report.all_hold:
        raise PreconditionError(
            f"square root inverse fails the axioms (residuals {report.residuals})"
        )
    u = inst.compose(f, h_mp)
    residuals = {
        "square": inst.deviation(inst.compose(h, h), gram),
        "partial_isometry": inst.deviation(
            inst.compose(u, inst.dagger(u), u), u
        ),
        "range_projector": inst.deviation(
            inst.compose(inst.dagger(u), u), inst.compose(h, h_mp)
        ),
        "reconstruction": inst.deviation(inst.compose(u, h), f),
    }
    if not inst.equals(inst.compose(u, inst.dagger(u), u), u):
        raise DecompositionError(
            "isometric factor is not a partial isometry "
            f"(residual {residuals['partial_isometry']:.3e})"
        )
    if not inst.equals(inst.compose(inst.dagger(u), u), inst.compose(h, h_mp)):
        raise DecompositionError(
            "isometric factor does not project onto the support of the positive part "
            f"(residual {residuals['range_projector']:.3e})"
        )
    if not inst.equals(inst.compose(u, h), f):
        raise DecompositionError(
            f"factors do not recompose the map (residual {residuals['reconstruction']:.3e})"
        )
    return PolarPair(u, h, h_mp, residuals)


def mp_from_polar(inst: DaggerInstance, pair: PolarPair) -> Any:
    """Recover the inverse from polar factors: h° . u-dagger."""
    if not (
        is_self_adjoint(inst, pair.h)
        and verify_mp(inst, pair.h, pair.h_mp).all_hold
        and inst.equals(
            inst.compose(pair.u, inst.dagger(pair.u), pair.u), pair.u
        )
    ):
        raise InputError("pair does not satisfy the polar-form invariants")
    f = inst.compose(pair.u, pair.h)
    candidate = inst.compose(pair.h_mp, inst.dagger(pair.u))
    report = verify_mp(inst, f, candidate)
    if not report.all_hold:
        raise DecompositionError(
            f"reassembled inverse fails the axioms (residuals {report.residuals})"
        )
    return candidate
