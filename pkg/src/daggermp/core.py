"""Dagger-category contract and the Moore-Penrose predicate suite.

An *instance* supplies a morphism type together with composition, an
involutive dagger, identities, and tolerance-aware equality.  Everything
else in this package (the derivation engine, the Karoubi envelope, the
decomposition pipelines) is written against :class:`DaggerInstance` and
never inspects morphisms directly.

Composition is diagrammatic throughout: ``compose(f, g)`` means "f then
g", so ``f: A -> B`` composes with ``g: B -> C`` and yields ``A -> C``.
Under this convention an isometry ``s`` satisfies ``s s† = 1`` on its
source and a coisometry ``r`` satisfies ``r† r = 1`` on its target.

A Moore-Penrose inverse of ``f: A -> B`` is a morphism ``g: B -> A``
satisfying the four identities

    f g f = f        g f g = g        (f g)† = f g        (g f)† = g f

and it is unique when it exists.
"""

from __future__ import annotations

import math
import sys
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Optional

MACHINE_EPS = sys.float_info.epsilon
EQ_TOL_DEFAULT = 100.0 * MACHINE_EPS


class DaggerError(Exception):
    """Base class for every error raised by this package."""


class InputError(DaggerError, ValueError):
    """Malformed or type-mismatched input (wrong shapes, bad JSON, ...)."""


class CapabilityError(DaggerError):
    """The instance does not provide the requested optional capability."""


class PreconditionError(DaggerError):
    """A documented precondition failed; carries the offending residual."""

    def __init__(self, message: str, residual: Optional[float] = None):
        if residual is not None:
            message = f"{message} (residual {residual:.3e})"
        super().__init__(message)
        self.residual = residual


class NumericError(DaggerError, RuntimeError):
    """An iterative numeric routine failed to converge."""


class NoMPInverseError(DaggerError):
    """No Moore-Penrose inverse exists along the attempted route."""

    def __init__(self, message: str, residual: Optional[float] = None):
        if residual is not None:
            message = f"{message} (residual {residual:.3e})"
        super().__init__(message)
        self.residual = residual


class ConsistencyError(DaggerError):
    """Checks that must agree disagreed; signals a tolerance or logic bug."""


class DecompositionError(DaggerError):
    """A decomposition was refused; carries the failing residual."""

    def __init__(self, message: str, residual: Optional[float] = None):
        if residual is not None:
            message = f"{message} (residual {residual:.3e})"
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class Tolerance:
    """Numeric slack for an instance.

    ``rank_tol`` is the singular-value cutoff.  ``None`` lets the
    instance derive a per-morphism default (the matrix instance uses
    ``max(rows, cols) * machine_eps * sigma_max``).  ``eq_tol`` scales
    equality comparisons.  Exact instances run with both at zero.
    """

    rank_tol: Optional[float] = None
    eq_tol: float = EQ_TOL_DEFAULT

    def __post_init__(self):
        if self.rank_tol is not None and not (
            math.isfinite(self.rank_tol) and self.rank_tol >= 0.0
        ):
            raise InputError("rank_tol must be finite and nonnegative")
        if not (math.isfinite(self.eq_tol) and self.eq_tol >= 0.0):
            raise InputError("eq_tol must be finite and nonnegative")

    @classmethod
    def exact(cls) -> "Tolerance":
        return cls(rank_tol=0.0, eq_tol=0.0)


@dataclass(frozen=True)
class MPReport:
    """Outcome of checking the four Moore-Penrose identities.

    ``residuals`` holds the instance's deviation measure for each
    identity in order (0.0 on exact instances when the identity holds).
    """

    mp1: bool
    mp2: bool
    mp3: bool
    mp4: bool
    residuals: tuple[float, float, float, float]

    @property
    def all_hold(self) -> bool:
        return self.mp1 and self.mp2 and self.mp3 and self.mp4

    def as_dict(self) -> dict:
        return {
            "mp1": self.mp1,
            "mp2": self.mp2,
            "mp3": self.mp3,
            "mp4": self.mp4,
            "residuals": list(self.residuals),
            "all_hold": self.all_hold,
        }


class DaggerInstance(ABC):
    """Contract an instance implements to plug into the generic machinery.

    The mandatory part is composition, dagger, identities, typing, and a
    deviation measure.  The capability hooks below are optional; the
    default implementations raise :class:`CapabilityError`, and generic
    code is expected to let that propagate.
    """

    name = "instance"

    def __init__(self, tolerance: Tolerance):
        self.tolerance = tolerance

    @abstractmethod
    def compose2(self, f: Any, g: Any) -> Any:
        """Diagrammatic composite "f then g"."""

    def compose(self, f: Any, *rest: Any) -> Any:
        out = f
        for g in rest:
            out = self.compose2(out, g)
        return out

    @abstractmethod
    def dagger(self, f: Any) -> Any: ...

    @abstractmethod
    def identity(self, obj: Any) -> Any: ...

    @abstractmethod
    def source(self, f: Any) -> Any: ...

    @abstractmethod
    def target(self, f: Any) -> Any: ...

    @abstractmethod
    def deviation(self, f: Any, g: Any) -> float:
        """Nonnegative distance between parallel morphisms."""

    def scale(self, f: Any, g: Any) -> float:
        """Size factor multiplying eq_tol in equality checks."""
        return 1.0

    def equals(self, f: Any, g: Any) -> bool:
        return self.deviation(f, g) <= self.tolerance.eq_tol * self.scale(f, g)

    # Optional capabilities.

    def positivity_witness(self, p: Any) -> bool:
        raise CapabilityError(f"{self.name} instance provides no positivity check")

    def split_idempotent(self, e: Any) -> Any:
        """Coisometry r with r r† = e and r† r = 1 on the new object."""
        raise CapabilityError(f"{self.name} instance cannot split idempotents")

    def kernel(self, f: Any) -> Any:
        """Isometry k with k f = 0, universal among such."""
        raise CapabilityError(f"{self.name} instance provides no kernels")

    def sqrt_positive(self, p: Any) -> tuple[Any, Any]:
        """Pair (h, h_mp): positive square root of p and its M-P inverse."""
        raise CapabilityError(f"{self.name} instance provides no square roots")

    def add(self, f: Any, g: Any) -> Any:
        raise CapabilityError(f"{self.name} instance has no additive structure")

    def direct_sum(self, f: Any, g: Any) -> Any:
        raise CapabilityError(f"{self.name} instance has no biproducts")

    def injection(self, dims: tuple, j: int) -> Any:
        raise CapabilityError(f"{self.name} instance has no biproducts")

    def projection(self, dims: tuple, j: int) -> Any:
        raise CapabilityError(f"{self.name} instance has no biproducts")

    def zero(self, src: Any, tgt: Any) -> Any:
        raise CapabilityError(f"{self.name} instance has no zero morphisms")

    def mp(self, f: Any) -> Any:
        """The instance's default Moore-Penrose inverse route, if any."""
        raise CapabilityError(f"{self.name} instance has no default M-P route")


def is_isometry(inst: DaggerInstance, f: Any) -> bool:
    """f f† = 1 on the source."""
    return inst.equals(
        inst.compose(f, inst.dagger(f)), inst.identity(inst.source(f))
    )


def is_coisometry(inst: DaggerInstance, f: Any) -> bool:
    """f† f = 1 on the target."""
    return inst.equals(
        inst.compose(inst.dagger(f), f), inst.identity(inst.target(f))
    )


def is_unitary(inst: DaggerInstance, f: Any) -> bool:
    return is_isometry(inst, f) and is_coisometry(inst, f)


def is_partial_isometry(inst: DaggerInstance, f: Any) -> bool:
    """f f† f = f."""
    return inst.equals(inst.compose(f, inst.dagger(f), f), f)


def _require_endo(inst: DaggerInstance, f: Any, what: str) -> None:
    if inst.source(f) != inst.target(f):
        raise InputError(f"{what} requires an endomorphism")


def is_self_adjoint(inst: DaggerInstance, f: Any) -> bool:
    _require_endo(inst, f, "self-adjointness")
    return inst.equals(inst.dagger(f), f)


def is_dagger_idempotent(inst: DaggerInstance, f: Any) -> bool:
    """f = f† and f f = f."""
    _require_endo(inst, f, "dagger idempotency")
    return inst.equals(inst.dagger(f), f) and inst.equals(inst.compose(f, f), f)


def is_positive(inst: DaggerInstance, p: Any) -> bool:
    """p = f f† for some f; delegated to the instance's witness."""
    _require_endo(inst, p, "positivity")
    return inst.positivity_witness(p)


def verify_mp(inst: DaggerInstance, f: Any, g: Any) -> MPReport:
    """Check the four Moore-Penrose identities for the candidate pair.

    ``g`` must have the dual type of ``f`` (source(g) = target(f) and
    target(g) = source(f)); anything else raises :class:`InputError`.
    """
    if inst.source(g) != inst.target(f) or inst.target(g) != inst.source(f):
        raise InputError("candidate inverse must have the dual type of f")
    fg = inst.compose(f, g)
    gf = inst.compose(g, f)
    checks = (
        (inst.compose(fg, f), f),
        (inst.compose(gf, g), g),
        (inst.dagger(fg), fg),
        (inst.dagger(gf), gf),
    )
    flags = []
    residuals = []
    for lhs, rhs in checks:
        dev = inst.deviation(lhs, rhs)
        residuals.append(dev)
        flags.append(dev <= inst.tolerance.eq_tol * inst.scale(lhs, rhs))
    return MPReport(
        flags[0], flags[1], flags[2], flags[3],
        (residuals[0], residuals[1], residuals[2], residuals[3]),
    )
