"""Partial injections between finite sets.

A partial injection src -> tgt is stored as one entry per source point,
either the image index or None.  The dagger reverses the graph, and it
is always the Moore-Penrose inverse: this is the instance where every
morphism is a partial isometry.  The defining laws of that situation
(each map is regular over its reversal, and the domain/range projections
commute) are checked by :func:`verify_inverse_category_laws`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Optional

from .core import DaggerInstance, InputError, Tolerance


@dataclass(frozen=True)
class PartialInjection:
    """Injective partial map; mapping[i] is the image of i or None."""

    src: int
    tgt: int
    mapping: tuple[Optional[int], ...]

    def __post_init__(self) -> None:
        if not isinstance(self.src, int) or not isinstance(self.tgt, int):
            raise InputError("endpoints must be ints")
        if self.src < 0 or self.tgt < 0:
            raise InputError("endpoints must be nonnegative")
        if not isinstance(self.mapping, tuple) or len(self.mapping) != self.src:
            raise InputError("mapping must be a tuple with one entry per source point")
        hit: set[int] = set()
        for value in self.mapping:
            if value is None:
                continue
            if not isinstance(value, int) or not (0 <= value < self.tgt):
                raise InputError(f"image {value!r} out of range for target {self.tgt}")
            if value in hit:
                raise InputError(f"target {value} hit twice; map is not injective")
            hit.add(value)

    @classmethod
    def from_pairs(
        cls, src: int, tgt: int, pairs: Iterable[tuple[int, int]]
    ) -> "PartialInjection":
        mapping: list[Optional[int]] = [None] * src
        for i, j in pairs:
            if not (0 <= i < src):
                raise InputError(f"source {i} out of range")
            if mapping[i] is not None:
                raise InputError(f"source {i} mapped twice")
            mapping[i] = j
        return cls(src, tgt, tuple(mapping))

    @classmethod
    def identity(cls, n: int) -> "PartialInjection":
        return cls(n, n, tuple(range(n)))

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i, j in enumerate(self.mapping) if j is not None]

    def compose(self, other: "PartialInjection") -> "PartialInjection":
        """self then other."""
        if self.tgt != other.src:
            raise InputError(
                f"cannot compose {self.src}->{self.tgt} with {other.src}->{other.tgt}"
            )
        mapping = tuple(
            other.mapping[j] if j is not None else None for j in self.mapping
        )
        return PartialInjection(self.src, other.tgt, mapping)

    def dagger(self) -> "PartialInjection":
        mapping: list[Optional[int]] = [None] * self.tgt
        for i, j in enumerate(self.mapping):
            if j is not None:
                mapping[j] = i
        return PartialInjection(self.tgt, self.src, tuple(mapping))

    def __repr__(self) -> str:
        return f"PartialInjection({self.src}, {self.tgt}, pairs={self.pairs})"


def compose_pinj(f: PartialInjection, g: PartialInjection) -> PartialInjection:
    return f.compose(g)


def dagger_pinj(f: PartialInjection) -> PartialInjection:
    return f.dagger()


def verify_inverse_category_laws(
    f: PartialInjection, g: PartialInjection
) -> tuple[bool, bool]:
    """The two laws making daggers here genuine inverses.

    For parallel f and g, returns (regular, projections_commute): each
    map is regular over its dagger (f f-dagger f == f), and the domain
    projections f f-dagger and g g-dagger commute.  Both always hold
    for partial injections; exposed as a check rather than an
    assumption.
    """
    if (f.src, f.tgt) != (g.src, g.tgt):
        raise InputError("maps must be parallel")
    regular = (
        f.compose(f.dagger()).compose(f) == f
        and g.compose(g.dagger()).compose(g) == g
    )
    p = f.compose(f.dagger())
    q = g.compose(g.dagger())
    projections_commute = p.compose(q) == q.compose(p)
    return regular, projections_commute


class PInjInstance(DaggerInstance):
    """Partial injections: exact, and every dagger is the inverse."""

    name = "pinj"

    def __init__(self) -> None:
        super().__init__(Tolerance.exact())

    def compose2(self, f: PartialInjection, g: PartialInjection) -> PartialInjection:
        return f.compose(g)

    def dagger(self, f: PartialInjection) -> PartialInjection:
        return f.dagger()

    def identity(self, obj: int) -> PartialInjection:
        return PartialInjection.identity(obj)

    def source(self, f: PartialInjection) -> int:
        return f.src

    def target(self, f: PartialInjection) -> int:
        return f.tgt

    def deviation(self, f: PartialInjection, g: PartialInjection) -> float:
        if (f.src, f.tgt) != (g.src, g.tgt):
            raise InputError(
                f"cannot compare {f.src}->{f.tgt} with {g.src}->{g.tgt}"
            )
        return float(
            sum(a != b for a, b in zip(f.mapping, g.mapping))
        )

    def mp(self, f: PartialInjection) -> PartialInjection:
        return f.dagger()


def pinj_to_obj(f: PartialInjection) -> dict:
    return {"src": f.src, "tgt": f.tgt, "map": [[i, j] for i, j in f.pairs]}


def pinj_from_obj(obj: Any) -> PartialInjection:
    if not isinstance(obj, dict):
        raise InputError("partial injection JSON must be an object")
    extra = set(obj) - {"src", "tgt", "map"}
    if extra:
        raise InputError(f"unexpected keys: {sorted(extra)}")
    try:
        src, tgt, entries = obj["src"], obj["tgt"], obj["map"]
    except KeyError as exc:
        raise InputError(f"missing key {exc.args[0]!r}") from None
    if not isinstance(src, int) or not isinstance(tgt, int):
        raise InputError("src and tgt must be integers")
    if not isinstance(entries, list):
        raise InputError("map must be a list of [i, j] pairs")
    pairs = []
    for entry in entries:
        if (
            not isinstance(entry, list)
            or len(entry) != 2
            or not all(isinstance(x, int) for x in entry)
        ):
            raise InputError(f"bad map entry: {entry!r}")
        pairs.append((entry[0], entry[1]))
    return PartialInjection.from_pairs(src, tgt, pairs)
