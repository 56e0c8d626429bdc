"""Graded homotopy data of spectrum descriptors.

Homotopy is descriptor-driven: each descriptor determines a total
function t -> abelian group through finite-support and periodic shapes.
The rational Eilenberg-MacLane spectrum carries Q in degree 0; the n-th
Morava K-theory at p carries the field of p elements in every degree
divisible by 2(p^n - 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm
from typing import Optional, Union

from .abelian import (
    ZERO,
    FgAbelianGroup,
    RationalVS,
    StructuredAbelian,
    decompose_div_plus_torsion,
    direct_sum,
    from_fg,
    is_prime,
)


class SpectrumDescriptor:
    def label(self) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.label()


@dataclass(frozen=True)
class HQ(SpectrumDescriptor):
    """The rational Eilenberg-MacLane spectrum."""

    def label(self) -> str:
        return "HQ"


@dataclass(frozen=True)
class MoravaK(SpectrumDescriptor):
    """The n-th Morava K-theory at p (n >= 1).

    Coefficients are a Laurent polynomial line over the field of p
    elements on a generator of degree 2(p^n - 1).
    """

    n: int
    p: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("Morava K-theory descriptors require n >= 1")
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def period(self) -> int:
        return 2 * (self.p ** self.n - 1)

    def label(self) -> str:
        return f"K({self.n},{self.p})"


@dataclass(frozen=True)
class GradedPiece(SpectrumDescriptor):
    """A single abelian group concentrated in one degree."""

    value: StructuredAbelian
    degree: int

    def label(self) -> str:
        return f"[{self.value.label()} in degree {self.degree}]"


@dataclass(frozen=True)
class Shift(SpectrumDescriptor):
    k: int
    inner: SpectrumDescriptor

    def label(self) -> str:
        return f"shift({self.k}, {self.inner.label()})"


@dataclass(frozen=True)
class Wedge(SpectrumDescriptor):
    """A finite wedge; homotopy is the degreewise direct sum.

    Infinite prime-indexed wedges are entered in truncated, explicit
    form; the scenario layer records the truncation.
    """

    parts: tuple[SpectrumDescriptor, ...]

    def label(self) -> str:
        return " v ".join(p.label() for p in self.parts)


def homotopy_of(x: SpectrumDescriptor, t: int) -> StructuredAbelian:
    """The homotopy group of the descriptor in degree t, in normal form."""
    if isinstance(x, HQ):
        return RationalVS(1) if t == 0 else ZERO
    if isinstance(x, MoravaK):
        if t % x.period == 0:
            return from_fg(FgAbelianGroup.cyclic(x.p))
        return ZERO
    if isinstance(x, GradedPiece):
        return direct_sum(x.value) if t == x.degree else ZERO
    if isinstance(x, Shift):
        return homotopy_of(x.inner, t - x.k)
    if isinstance(x, Wedge):
        return direct_sum(*(homotopy_of(p, t) for p in x.parts))
    raise TypeError(f"not a spectrum descriptor: {x!r}")


# ---------------------------------------------------------------------------
# graded shape analysis
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GradedShape:
    """Support structure of a graded homotopy:

    finitely many exceptional degrees plus periodic lines (period,
    residue) with nonzero values.
    """

    finite_degrees: tuple[int, ...]
    periodic_lines: tuple[tuple[int, int], ...]  # (period, residue)

    def is_bounded_above(self) -> Optional[int]:
        """Witness t0 when the support is bounded above, else None."""
        if self.periodic_lines:
            return None
        return max(self.finite_degrees, default=0)


def graded_shape(x: SpectrumDescriptor, offset: int = 0) -> GradedShape:
    if isinstance(x, HQ):
        return GradedShape((offset,), ())
    if isinstance(x, MoravaK):
        return GradedShape((), ((x.period, offset % x.period),))
    if isinstance(x, GradedPiece):
        if x.value.is_zero():
            return GradedShape((), ())
        return GradedShape((x.degree + offset,), ())
    if isinstance(x, Shift):
        return graded_shape(x.inner, offset + x.k)
    if isinstance(x, Wedge):
        fins: list[int] = []
        pers: list[tuple[int, int]] = []
        for p in x.parts:
            shape = graded_shape(p, offset)
            fins.extend(shape.finite_degrees)
            pers.extend(shape.periodic_lines)
        return GradedShape(tuple(sorted(set(fins))), tuple(sorted(set(pers))))
    raise TypeError(f"not a spectrum descriptor: {x!r}")


BoundednessAnswer = Union[bool, str]  # True / False / "unknown"


def is_bounded_above(x: SpectrumDescriptor) -> tuple[BoundednessAnswer, Optional[int]]:
    """(answer, witness): True with a degree t0 past which homotopy vanishes,
    False when a periodic line forces unbounded support, else "unknown"."""
    try:
        shape = graded_shape(x)
    except TypeError:
        return "unknown", None
    t0 = shape.is_bounded_above()
    if t0 is None:
        return False, None
    return True, t0


def torsion_profile(x: SpectrumDescriptor, t: int, j_primes
                    ) -> Optional[tuple[StructuredAbelian, StructuredAbelian]]:
    """Divisible-plus-torsion split of the degree-t homotopy, or None."""
    return decompose_div_plus_torsion(homotopy_of(x, t), j_primes)


@dataclass(frozen=True)
class DegreeClass:
    """A set of degrees sharing one homotopy value.

    ``description`` is human-readable; ``sample`` is one member degree.
    When ``covers`` is "all", the classes jointly exhaust every integer
    degree, so hypothesis checks over them quantify over all t.
    """

    description: str
    sample: int
    value: StructuredAbelian


def degree_classes(x: SpectrumDescriptor, period_cap: int = 10**6
                   ) -> Optional[tuple[DegreeClass, ...]]:
    """Partition all integer degrees into finitely many value classes.

    Returns None when the combined period exceeds the cap (callers then
    fall back to window enumeration).
    """
    shape = graded_shape(x)
    periods = [p for p, _ in shape.periodic_lines]
    big = 1
    for p in set(periods):
        big = lcm(big, p)
    if big > period_cap:
        return None
    out: list[DegreeClass] = []
    exceptional = set(shape.finite_degrees)
    seen_values: dict[int, StructuredAbelian] = {}
    for r in range(big):
        seen_values[r] = homotopy_of(x, _generic_degree(r, big, exceptional))
    for r in range(big):
        out.append(DegreeClass(
            f"degrees t = {r} mod {big} (away from exceptional degrees)",
            _generic_degree(r, big, exceptional),
            seen_values[r],
        ))
    for t in sorted(exceptional):
        out.append(DegreeClass(f"degree t = {t}", t, homotopy_of(x, t)))
    return tuple(out)


def _generic_degree(residue: int, period: int, avoid: set[int]) -> int:
    t = residue
    while t in avoid:
        t += period
    return t
