"""Splitting dagger idempotents formally.

Objects here are pairs (base object, dagger idempotent on it); a
morphism between two such pairs is a base morphism fixed by the chosen
idempotents on both sides.  Composition and dagger are inherited, and
the idempotent itself acts as the identity of its pair.

The point of the construction for this library: a map has a
Moore-Penrose inverse exactly when it becomes invertible between the
pairs carved out by its two projections.  :func:`iso_from_mp` and
:func:`mp_from_iso` are the two directions of that correspondence, and
:func:`mp_in_karoubi` shows inverses need nothing new after splitting.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Optional

from .core import (
    ConsistencyError,
    DaggerInstance,
    InputError,
    PreconditionError,
    is_dagger_idempotent,
    verify_mp,
)


@dataclass(frozen=True, eq=False)
class SplitObject:
    """A base object together with a dagger idempotent on it."""

    base: Any
    idempotent: Any

    def __repr__(self) -> str:
        return f"SplitObject(base={self.base!r})"


@dataclass(frozen=True, eq=False)
class SplitMorphism:
    """Base morphism f with dom.idempotent . f . cod.idempotent == f."""

    dom: SplitObject
    cod: SplitObject
    f: Any


def split_object(inst: DaggerInstance, e: Any) -> SplitObject:
    """Wrap a dagger idempotent as a formal object."""
    if inst.source(e) != inst.target(e):
        raise InputError("only endomorphisms can be split")
    if not is_dagger_idempotent(inst, e):
        resid = max(
            inst.deviation(inst.compose(e, e), e),
            inst.deviation(inst.dagger(e), e),
        )
        raise PreconditionError("not a dagger idempotent", residual=resid)
    return SplitObject(inst.source(e), e)


def same_object(inst: DaggerInstance, a: SplitObject, b: SplitObject) -> bool:
    return a.base == b.base and inst.equals(a.idempotent, b.idempotent)


def split_morphism(
    inst: DaggerInstance, dom: SplitObject, cod: SplitObject, f: Any
) -> SplitMorphism:
    """Check f is fixed by the two idempotents and wrap it."""
    if inst.source(f) != dom.base or inst.target(f) != cod.base:
        raise InputError(
            f"map has type {inst.source(f)} -> {inst.target(f)}, expected "
            f"{dom.base} -> {cod.base}"
        )
    absorbed = inst.compose(dom.idempotent, f, cod.idempotent)
    if not inst.equals(absorbed, f):
        raise InputError(
            "map is not fixed by the chosen idempotents "
            f"(residual {inst.deviation(absorbed, f):.3e})"
        )
    return SplitMorphism(dom, cod, f)


def split_identity(inst: DaggerInstance, obj: SplitObject) -> SplitMorphism:
    """The idempotent itself, acting as the identity of its pair."""
    return SplitMorphism(obj, obj, obj.idempotent)


def embed(inst: DaggerInstance, f: Any) -> SplitMorphism:
    """A base morphism viewed between identity splittings."""
    dom = SplitObject(inst.source(f), inst.identity(inst.source(f)))
    cod = SplitObject(inst.target(f), inst.identity(inst.target(f)))
    return SplitMorphism(dom, cod, f)


def compose_split(
    inst: DaggerInstance, f: SplitMorphism, g: SplitMorphism
) -> SplitMorphism:
    if not same_object(inst, f.cod, g.dom):
        raise InputError("codomain of the first map differs from domain of the second")
    return SplitMorphism(f.dom, g.cod, inst.compose(f.f, g.f))


def dagger_split(inst: DaggerInstance, f: SplitMorphism) -> SplitMorphism:
    return SplitMorphism(f.cod, f.dom, inst.dagger(f.f))


def mp_in_karoubi(
    inst: DaggerInstance,
    f: SplitMorphism,
    base_mp: Optional[Callable[[Any], Any]] = None,
) -> SplitMorphism:
    """M-P inverse of a formal morphism: the base inverse, re-housed.

    The base inverse automatically lives between the swapped pairs (it
    is fixed by the same idempotents from the other side), so splitting
    adds no new inverses.  ``base_mp`` defaults to the instance solver;
    whatever it raises propagates.
    """
    solver = base_mp if base_mp is not None else inst.mp
    g = solver(f.f)
    report = verify_mp(inst, f.f, g)
    if not report.all_hold:
        raise PreconditionError(
            f"base solver output fails the axioms (residuals {report.residuals})"
        )
    absorbed = inst.compose(f.cod.idempotent, g, f.dom.idempotent)
    if not inst.equals(absorbed, g):
        raise ConsistencyError(
            "verified inverse escapes the splitting "
            f"(residual {inst.deviation(absorbed, g):.3e})"
        )
    return SplitMorphism(f.cod, f.dom, g)


def iso_from_mp(
    inst: DaggerInstance, f: Any, f_mp: Any
) -> tuple[SplitMorphism, SplitMorphism]:
    """View an M-P invertible map as invertible between its projections.

    Returns (forward, backward): f itself from (source, f f°) to
    (target, f° f), and f° the other way, composing to the two split
    identities.
    """
    if not verify_mp(inst, f, f_mp).all_hold:
        raise PreconditionError("needs a verified M-P pair")
    e_dom = inst.compose(f, f_mp)
    e_cod = inst.compose(f_mp, f)
    dom = SplitObject(inst.source(f), e_dom)
    cod = SplitObject(inst.target(f), e_cod)
    for name, left, right, m in (("map", dom, cod, f), ("inverse", cod, dom, f_mp)):
        absorbed = inst.compose(left.idempotent, m, right.idempotent)
        if not inst.equals(absorbed, m):
            raise ConsistencyError(
                f"{name} is not fixed by its own projections "
                f"(residual {inst.deviation(absorbed, m):.3e})"
            )
    forward = SplitMorphism(dom, cod, f)
    backward = SplitMorphism(cod, dom, f_mp)
    if not inst.equals(inst.compose(f, f_mp), e_dom):
        raise ConsistencyError("forward-backward composite differs from the identity")
    if not inst.equals(inst.compose(f_mp, f), e_cod):
        raise ConsistencyError("backward-forward composite differs from the identity")
    return forward, backward


def mp_from_iso(
    inst: DaggerInstance, forward: SplitMorphism, backward: SplitMorphism
) -> tuple[Any, Any]:
    """Mutually inverse formal morphisms give an M-P pair in the base.

    Requires forward . backward and backward . forward to equal the two
    split identities; then the underlying base maps already satisfy all
    four axioms, which is re-verified before returning them.
    """
    if not (
        same_object(inst, forward.dom, backward.cod)
        and same_object(inst, forward.cod, backward.dom)
    ):
        raise InputError("maps do not go between the same two pairs")
    round_dom = inst.compose(forward.f, backward.f)
    round_cod = inst.compose(backward.f, forward.f)
    if not inst.equals(round_dom, forward.dom.idempotent):
        raise InputError(
            "composite onto the domain is not its identity "
            f"(residual {inst.deviation(round_dom, forward.dom.idempotent):.3e})"
        )
    if not inst.equals(round_cod, forward.cod.idempotent):
        raise InputError(
            "composite onto the codomain is not its identity "
            f"(residual {inst.deviation(round_cod, forward.cod.idempotent):.3e})"
        )
    report = verify_mp(inst, forward.f, backward.f)
    if not report.all_hold:
        raise ConsistencyError(
            f"inverse pair fails the axioms (residuals {report.residuals})"
        )
    return forward.f, backward.f
