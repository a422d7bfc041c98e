"""Constructions and identity checks valid in any dagger category.

Everything here is written against the instance contract: canonical
Moore-Penrose inverses for the maps that always have one, the gram
route that reduces inversion of ``f`` to inversion of ``f† f``, the
battery of identities a verified inverse pair must satisfy, and the
criteria under which inverses compose contravariantly.

Constructors re-verify their postconditions before returning; a verified
claim failing afterwards is reported as a consistency error rather than
silently accepted.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Optional

from .core import (
    ConsistencyError,
    DaggerInstance,
    InputError,
    NoMPInverseError,
    PreconditionError,
    is_dagger_idempotent,
    is_partial_isometry,
    is_self_adjoint,
    verify_mp,
)


def _checked(inst: DaggerInstance, f: Any, g: Any, what: str) -> Any:
    report = verify_mp(inst, f, g)
    if not report.all_hold:
        raise ConsistencyError(
            f"{what} produced a candidate failing the axioms "
            f"(residuals {report.residuals})"
        )
    return g


def mp_of_partial_isometry(inst: DaggerInstance, f: Any) -> Any:
    """M-P inverse of a partial isometry: its dagger."""
    if not is_partial_isometry(inst, f):
        resid = inst.deviation(inst.compose(f, inst.dagger(f), f), f)
        raise PreconditionError("not a partial isometry", residual=resid)
    return _checked(inst, f, inst.dagger(f), "partial isometry constructor")


def mp_of_dagger_idempotent(inst: DaggerInstance, e: Any) -> Any:
    """M-P inverse of a dagger idempotent: itself."""
    if not is_dagger_idempotent(inst, e):
        raise PreconditionError("not a dagger idempotent")
    return _checked(inst, e, e, "dagger idempotent constructor")


def mp_via_gram(
    inst: DaggerInstance, f: Any, gram_solver: Callable[[Any], Any]
) -> Any:
    """M-P inverse of f from an inverse of the gram endomorphism f† f.

    ``gram_solver`` must return a verified M-P inverse of ``f† f``; the
    route then succeeds iff ``f (f†f)° (f†f) = f``, in which case the
    answer is ``(f†f)° f†``.  Failure of that condition means f has no
    M-P inverse reachable this way, reported as
    :class:`NoMPInverseError`.
    """
    gram = inst.compose(inst.dagger(f), f)
    gram_mp = gram_solver(gram)
    report = verify_mp(inst, gram, gram_mp)
    if not report.all_hold:
        raise PreconditionError(
            "gram_solver did not return a verified inverse of f†f "
            f"(residuals {report.residuals})"
        )
    absorbed = inst.compose(f, gram_mp, gram)
    if not inst.equals(absorbed, f):
        raise NoMPInverseError(
            "gram route fails: f (f†f)° (f†f) differs from f",
            residual=inst.deviation(absorbed, f),
        )
    return _checked(
        inst, f, inst.compose(gram_mp, inst.dagger(f)), "gram route"
    )


@dataclass(frozen=True)
class DerivedIdentitiesReport:
    """Identities every Moore-Penrose pair (f, f°) satisfies.

    The two conditional items hold vacuously when their hypothesis
    fails: ``self_adjoint_transfer`` only constrains self-adjoint f, and
    ``dagger_mp_partial_isometry`` only constrains pairs with f° = f†.
    """

    double_mp: bool                    # (f°)° = f
    dagger_mp_swap: bool               # (f†)° = (f°)†
    projector_idempotents: bool        # ff°, f°f dagger idempotents, self-M-P
    gram_inverses: bool                # (ff†)° = f†° f°,  (f†f)° = f° f†°
    projector_alternatives: bool       # ff° = f†° f†,  f°f = f† f†°
    f_absorption: bool                 # f = f f† f†° = f†° f† f
    mp_absorption: bool                # f° = f° f†° f† = f† f†° f°
    dagger_absorption: bool            # f† = f† f f° = f° f f†
    self_adjoint_transfer: bool        # f = f† implies f° = f°† and f°f = ff°
    dagger_mp_partial_isometry: bool   # f° = f† implies f f† f = f

    def as_tuple(self) -> tuple[bool, ...]:
        return (
            self.double_mp,
            self.dagger_mp_swap,
            self.projector_idempotents,
            self.gram_inverses,
            self.projector_alternatives,
            self.f_absorption,
            self.mp_absorption,
            self.dagger_absorption,
            self.self_adjoint_transfer,
            self.dagger_mp_partial_isometry,
        )

    @property
    def all_hold(self) -> bool:
        return all(self.as_tuple())


def derived_identities_check(
    inst: DaggerInstance, f: Any, f_mp: Any
) -> DerivedIdentitiesReport:
    """Evaluate the ten consequences of the axioms for a verified pair."""
    if not verify_mp(inst, f, f_mp).all_hold:
        raise PreconditionError("derived identities need a verified M-P pair")
    dg = inst.dagger
    comp = inst.compose
    eq = inst.equals
    fd = dg(f)
    fmd = dg(f_mp)
    ffmp = comp(f, f_mp)
    fmpf = comp(f_mp, f)

    double_mp = verify_mp(inst, f_mp, f).all_hold
    dagger_mp_swap = verify_mp(inst, fd, fmd).all_hold
    projector_idempotents = (
        is_dagger_idempotent(inst, ffmp)
        and is_dagger_idempotent(inst, fmpf)
        and verify_mp(inst, ffmp, ffmp).all_hold
        and verify_mp(inst, fmpf, fmpf).all_hold
    )
    gram_inverses = (
        verify_mp(inst, comp(f, fd), comp(fmd, f_mp)).all_hold
        and verify_mp(inst, comp(fd, f), comp(f_mp, fmd)).all_hold
    )
    projector_alternatives = eq(ffmp, comp(fmd, fd)) and eq(fmpf, comp(fd, fmd))
    f_absorption = eq(f, comp(f, fd, fmd)) and eq(f, comp(fmd, fd, f))
    mp_absorption = eq(f_mp, comp(f_mp, fmd, fd)) and eq(f_mp, comp(fd, fmd, f_mp))
    dagger_absorption = eq(fd, comp(fd, f, f_mp)) and eq(fd, comp(f_mp, f, fd))

    endo = inst.source(f) == inst.target(f)
    if endo and is_self_adjoint(inst, f):
        self_adjoint_transfer = is_self_adjoint(inst, f_mp) and eq(fmpf, ffmp)
    else:
        self_adjoint_transfer = True
    if eq(f_mp, fd):
        dagger_mp_partial_isometry = is_partial_isometry(inst, f)
    else:
        dagger_mp_partial_isometry = True

    return DerivedIdentitiesReport(
        double_mp,
        dagger_mp_swap,
        projector_idempotents,
        gram_inverses,
        projector_alternatives,
        f_absorption,
        mp_absorption,
        dagger_absorption,
        self_adjoint_transfer,
        dagger_mp_partial_isometry,
    )


@dataclass(frozen=True)
class CompositionReport:
    """Outcome of the contravariant-composition criteria for (f, g).

    ``condition_a`` through ``condition_c`` are three equivalent
    sufficient conditions for ``(fg)° = g° f°``; the constructor raises
    if they disagree, so one boolean ``conditions_hold`` summarizes
    them.  ``composite_mp`` holds ``g° f°`` when they hold, else None.
    ``biconditional_lhs``/``biconditional_rhs`` record both sides of the
    exact characterization (the left side checks the axioms for
    ``g° f°`` directly, the right side its four algebraic clauses);
    whether the two agree is an empirical question for each instance, so
    they are reported rather than enforced.
    """

    condition_a: bool
    condition_b: bool
    condition_c: bool
    composite_mp: Optional[Any]
    biconditional_lhs: bool
    biconditional_rhs: bool

    @property
    def conditions_hold(self) -> bool:
        return self.condition_a


def composition_criteria(
    inst: DaggerInstance, f: Any, f_mp: Any, g: Any, g_mp: Any
) -> CompositionReport:
    """Check whether the M-P inverse of f then g is g° then f°."""
    if inst.target(f) != inst.source(g):
        raise InputError("f and g are not composable")
    if not verify_mp(inst, f, f_mp).all_hold:
        raise PreconditionError("composition criteria need a verified pair for f")
    if not verify_mp(inst, g, g_mp).all_hold:
        raise PreconditionError("composition criteria need a verified pair for g")
    dg = inst.dagger
    comp = inst.compose
    eq = inst.equals

    def self_adj(x):
        return eq(dg(x), x)

    def idem(x):
        return eq(comp(x, x), x)

    cond_a = (
        self_adj(comp(g, g_mp, f_mp, f))
        and self_adj(comp(f, g, g_mp, f_mp))
        and self_adj(comp(g_mp, f_mp, f, g))
    )
    cond_b = self_adj(comp(g, dg(g), f_mp, f)) and self_adj(
        comp(dg(f), f, g, g_mp)
    )
    cond_c = eq(
        comp(f_mp, f, g, dg(g), dg(f)), comp(g, dg(g), dg(f))
    ) and eq(comp(g, g_mp, dg(f), f, g), comp(dg(f), f, g))
    if not (cond_a == cond_b == cond_c):
        raise ConsistencyError(
            "equivalent composition conditions disagree: "
            f"a={cond_a} b={cond_b} c={cond_c}"
        )

    rhs = (
        idem(comp(f_mp, f, g, g_mp))
        and idem(comp(g, g_mp, f_mp, f))
        and eq(comp(f, g, g_mp, f_mp), comp(dg(f_mp), g, g_mp, dg(f)))
        and eq(comp(g_mp, f_mp, f, g), comp(dg(g), f_mp, f, dg(g_mp)))
    )
    candidate = comp(g_mp, f_mp)
    lhs = verify_mp(inst, comp(f, g), candidate).all_hold

    composite_mp = None
    if cond_a:
        if not lhs:
            raise ConsistencyError(
                "composition conditions hold but g° f° fails the axioms"
            )
        composite_mp = candidate
    return CompositionReport(cond_a, cond_b, cond_c, composite_mp, lhs, rhs)
