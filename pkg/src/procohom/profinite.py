"""Symbolic profinite groups: supernatural orders, quotient towers,
open normal subgroups, and cofinal families.

Supported descriptor grammar: finite groups by multiplication table,
procyclic pro-p groups p^a Z_p, finite products of those, and
prime-indexed products of procyclics.  This covers every group shape
the checker's rules consume while keeping all computations on finite
quotient tables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Mapping, Optional, Sequence, Union

from .abelian import (
    FgAbelianGroup,
    SymbolicInfinity,
    factorint,
    is_prime,
)
from .errors import BudgetExceeded, InvalidSubgroup, NotAHomomorphism, UnsupportedGroupShape

INFINITY = SymbolicInfinity("infinity")

TABLE_BUDGET = 10**4
HOM_VERIFY_BUDGET = 4 * 10**6  # skip pairwise surjection checks above this many pairs

Exponent = Union[int, SymbolicInfinity]


def _primes_ascending():
    yield 2
    n = 3
    while True:
        if is_prime(n):
            yield n
        n += 2


# ---------------------------------------------------------------------------
# prime sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PrimeSet:
    """A finite set of primes or the complement of one."""

    cofinite: bool
    primes: frozenset[int]

    def __post_init__(self):
        for p in self.primes:
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")

    @classmethod
    def of(cls, primes: Iterable[int]) -> "PrimeSet":
        return cls(False, frozenset(primes))

    @classmethod
    def all_primes(cls) -> "PrimeSet":
        return cls(True, frozenset())

    @classmethod
    def all_except(cls, primes: Iterable[int]) -> "PrimeSet":
        return cls(True, frozenset(primes))

    def __contains__(self, p: int) -> bool:
        return (p not in self.primes) if self.cofinite else (p in self.primes)

    def is_empty(self) -> bool:
        return not self.cofinite and not self.primes

    def is_finite(self) -> bool:
        return not self.cofinite

    def members(self) -> Iterable[int]:
        """Ascending members; an infinite generator when cofinite."""
        if self.cofinite:
            return (p for p in _primes_ascending() if p not in self.primes)
        return iter(sorted(self.primes))

    def union(self, other: "PrimeSet") -> "PrimeSet":
        if self.cofinite and other.cofinite:
            return PrimeSet(True, self.primes & other.primes)
        if self.cofinite:
            return PrimeSet(True, self.primes - other.primes)
        if other.cofinite:
            return PrimeSet(True, other.primes - self.primes)
        return PrimeSet(False, self.primes | other.primes)

    def minus_finite(self, primes: Iterable[int]) -> "PrimeSet":
        drop = frozenset(primes)
        if self.cofinite:
            return PrimeSet(True, self.primes | drop)
        return PrimeSet(False, self.primes - drop)

    def is_subset(self, other: "PrimeSet") -> bool:
        if not self.cofinite and not other.cofinite:
            return self.primes <= other.primes
        if not self.cofinite and other.cofinite:
            return not (self.primes & other.primes)
        if self.cofinite and other.cofinite:
            return other.primes <= self.primes
        return False  # a cofinite set never fits inside a finite one

    def label(self) -> str:
        if self.cofinite:
            if not self.primes:
                return "all primes"
            return "all primes except {" + ", ".join(map(str, sorted(self.primes))) + "}"
        return "{" + ", ".join(map(str, sorted(self.primes))) + "}"


# ---------------------------------------------------------------------------
# supernatural numbers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SupernaturalNumber:
    """Formal product prod_p p^(a_p) with exponents in N or infinity.

    Canonical form: ``finite_exponents`` holds the strictly positive
    finite exponents; ``infinite_set`` is the PrimeSet of primes with
    exponent infinity, disjoint from the finite support.
    """

    finite_exponents: tuple[tuple[int, int], ...] = ()
    infinite_set: PrimeSet = PrimeSet.of(())

    def __post_init__(self):
        for p, e in self.finite_exponents:
            if e <= 0:
                raise ValueError("finite exponents must be positive")
            if p in self.infinite_set:
                raise ValueError("finite exponent clashes with infinite exponent")

    @classmethod
    def one(cls) -> "SupernaturalNumber":
        return cls()

    @classmethod
    def from_int(cls, n: int) -> "SupernaturalNumber":
        if n <= 0:
            raise ValueError("expected a positive integer")
        return cls(tuple(sorted(factorint(n).items())))

    @classmethod
    def build(cls, exponents: Mapping[int, Exponent],
              infinite_set: Optional[PrimeSet] = None) -> "SupernaturalNumber":
        inf = infinite_set if infinite_set is not None else PrimeSet.of(())
        fin = {}
        for p, e in exponents.items():
            if isinstance(e, SymbolicInfinity):
                inf = inf.union(PrimeSet.of([p]))
            elif e > 0:
                fin[p] = e
        fin = {p: e for p, e in fin.items() if p not in inf}
        return cls(tuple(sorted(fin.items())), inf)

    def exponent(self, p: int) -> Exponent:
        if p in self.infinite_set:
            return INFINITY
        return dict(self.finite_exponents).get(p, 0)

    def is_finite(self) -> bool:
        return self.infinite_set.is_empty()

    def as_int(self) -> Optional[int]:
        if not self.is_finite():
            return None
        return reduce(lambda acc, pe: acc * pe[0] ** pe[1], self.finite_exponents, 1)

    def __mul__(self, other: "SupernaturalNumber") -> "SupernaturalNumber":
        inf = self.infinite_set.union(other.infinite_set)
        fin: dict[int, int] = {}
        for p, e in itertools.chain(self.finite_exponents, other.finite_exponents):
            if p not in inf:
                fin[p] = fin.get(p, 0) + e
        return SupernaturalNumber(tuple(sorted(fin.items())), inf)

    def divides(self, other: "SupernaturalNumber") -> bool:
        if not self.infinite_set.is_subset(other.infinite_set):
            return False
        for p, e in self.finite_exponents:
            oe = other.exponent(p)
            if not isinstance(oe, SymbolicInfinity) and e > oe:
                return False
        return True

    def label(self) -> str:
        bits = []
        for p, e in self.finite_exponents:
            bits.append(str(p) if e == 1 else f"{p}^{e}")
        if self.infinite_set.is_finite():
            bits.extend(f"{p}^inf" for p in self.infinite_set.members())
        else:
            bits.append(f"prod over {self.infinite_set.label()} of p^inf")
        return "1" if not bits else " * ".join(bits)

    def __str__(self) -> str:
        return self.label()


# ---------------------------------------------------------------------------
# finite group tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FiniteGroupTable:
    """A finite group given by its multiplication table.

    Elements are indexed 0..n-1 with the identity at index 0.
    Identity and inverse axioms are always checked; associativity is
    checked exhaustively at construction for small tables and on demand
    through :meth:`verify`.
    """

    table: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.table)
        if n == 0:
            raise ValueError("empty table")
        for row in self.table:
            if len(row) != n or any(not (0 <= x < n) for x in row):
                raise ValueError("malformed multiplication table")
        for i in range(n):
            if self.table[0][i] != i or self.table[i][0] != i:
                raise ValueError("identity must sit at index 0")
        for i in range(n):
            if 0 not in self.table[i]:
                raise ValueError(f"element {i} has no inverse")
        if n <= 64:
            self.verify()

    @property
    def size(self) -> int:
        return len(self.table)

    def verify(self) -> None:
        """Exhaustive associativity check (cubic in the group order)."""
        t = self.table
        n = len(t)
        for a in range(n):
            ta = t[a]
            for b in range(n):
                tab = t[ta[b]]
                tb = t[b]
                for c in range(n):
                    if tab[c] != ta[tb[c]]:
                        raise ValueError("multiplication table is not associative")

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.table[a].index(0)

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.table[x][a]
            k += 1
        return k

    def is_abelian(self) -> bool:
        t = self.table
        n = len(t)
        return all(t[a][b] == t[b][a] for a in range(n) for b in range(a + 1, n))

    def is_cyclic(self) -> bool:
        return any(self.element_order(a) == self.size for a in range(self.size))

    @classmethod
    def trivial(cls) -> "FiniteGroupTable":
        return cls(((0,),))

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroupTable":
        if n < 1:
            raise ValueError("cyclic group order must be positive")
        return cls(tuple(tuple((i + j) % n for j in range(n)) for i in range(n)))

    @classmethod
    def product(cls, a: "FiniteGroupTable", b: "FiniteGroupTable") -> "FiniteGroupTable":
        na, nb = a.size, b.size
        size = na * nb
        rows = []
        for i in range(size):
            ia, ib = divmod(i, nb)
            row = []
            ra, rb = a.table[ia], b.table[ib]
            for j in range(size):
                ja, jb = divmod(j, nb)
                row.append(ra[ja] * nb + rb[jb])
            rows.append(tuple(row))
        return cls(tuple(rows))

    def is_subgroup(self, subset: frozenset[int]) -> bool:
        if 0 not in subset:
            return False
        return all(self.table[a][b] in subset for a in subset for b in subset)

    def is_normal(self, subset: frozenset[int]) -> bool:
        if not self.is_subgroup(subset):
            return False
        for g in range(self.size):
            gi = self.inv(g)
            for h in subset:
                if self.table[self.table[g][h]][gi] not in subset:
                    return False
        return True

    def subgroup_table(self, subset: frozenset[int]) -> "FiniteGroupTable":
        elems = sorted(subset)
        pos = {e: i for i, e in enumerate(elems)}
        return FiniteGroupTable(
            tuple(tuple(pos[self.table[a][b]] for b in elems) for a in elems)
        )

    def quotient_by(self, subset: frozenset[int]) -> tuple["FiniteGroupTable", tuple[int, ...]]:
        """Quotient table by a normal subgroup plus the projection index map.

        Cosets are ordered by their minimal element, which puts the
        identity coset first.
        """
        if not self.is_normal(subset):
            raise InvalidSubgroup("subset is not a normal subgroup")
        coset_of: dict[int, int] = {}
        reps: list[int] = []
        for g in range(self.size):
            if g in coset_of:
                continue
            members = sorted(self.table[g][h] for h in subset)
            idx = len(reps)
            reps.append(members[0])
            for m in members:
                coset_of[m] = idx
        table = tuple(
            tuple(coset_of[self.table[ra][rb]] for rb in reps) for ra in reps
        )
        return FiniteGroupTable(table), tuple(coset_of[g] for g in range(self.size))

    def abelian_invariants(self) -> Optional[FgAbelianGroup]:
        """Invariant factors when the table is abelian, else None."""
        if not self.is_abelian():
            return None
        orders = [self.element_order(a) for a in range(self.size)]
        parts: list[int] = []
        for p in factorint(self.size):
            # geq[k] = number of cyclic p-power summands of exponent >= k+1,
            # read off the counts of elements killed by p^k
            geq: list[int] = []
            prev = 1
            k = 1
            while True:
                pk = p ** k
                cnt = sum(1 for o in orders if pk % o == 0)
                if cnt == prev:
                    break
                ratio = cnt // prev
                num = 0
                while ratio > 1:
                    ratio //= p
                    num += 1
                geq.append(num)
                prev = cnt
                k += 1
            for k0 in range(len(geq)):
                nxt = geq[k0 + 1] if k0 + 1 < len(geq) else 0
                parts.extend([p ** (k0 + 1)] * (geq[k0] - nxt))
        return FgAbelianGroup.from_orders(parts)

    def label(self) -> str:
        if self.size == 1:
            return "1"
        inv = self.abelian_invariants()
        if inv is not None:
            return inv.label().replace(" + ", " x ")
        return f"group of order {self.size}"


def verify_surjection(source: FiniteGroupTable, target: FiniteGroupTable,
                      mapping: Sequence[int]) -> None:
    """Check that an index map is a surjective homomorphism."""
    if len(mapping) != source.size:
        raise NotAHomomorphism("index map has wrong length")
    if mapping[0] != 0:
        raise NotAHomomorphism("identity must map to identity")
    if set(mapping) != set(range(target.size)):
        raise NotAHomomorphism("index map is not surjective")
    if source.size * source.size <= HOM_VERIFY_BUDGET:
        t_src, t_tgt = source.table, target.table
        for a in range(source.size):
            ma = mapping[a]
            row_t = t_tgt[ma]
            row_s = t_src[a]
            for b in range(source.size):
                if mapping[row_s[b]] != row_t[mapping[b]]:
                    raise NotAHomomorphism(f"not multiplicative at ({a}, {b})")


# ---------------------------------------------------------------------------
# profinite descriptors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Slot:
    """One factor position of a descriptor.

    ``key`` is the position (int) for finite products and the prime for
    prime-indexed products.  Exactly one of ``procyclic`` (p, shift) or
    ``finite`` (a group table) is set.
    """

    key: int
    procyclic: Optional[tuple[int, int]] = None
    finite: Optional[FiniteGroupTable] = None


class ProfiniteDescriptor:
    """Base class for symbolic profinite group descriptors."""

    def order(self) -> SupernaturalNumber:
        raise NotImplementedError

    def slot_for(self, key: int) -> Optional[Slot]:
        raise NotImplementedError

    def finite_slots(self) -> Optional[tuple[Slot, ...]]:
        """All slots in canonical order, or None when not enumerable."""
        raise NotImplementedError

    def is_trivial(self) -> bool:
        return False

    def label(self) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.label()


@dataclass(frozen=True)
class Finite(ProfiniteDescriptor):
    group: FiniteGroupTable

    def order(self) -> SupernaturalNumber:
        return SupernaturalNumber.from_int(self.group.size)

    def slot_for(self, key: int) -> Optional[Slot]:
        return Slot(0, finite=self.group) if key == 0 else None

    def finite_slots(self) -> tuple[Slot, ...]:
        return (Slot(0, finite=self.group),)

    def is_trivial(self) -> bool:
        return self.group.size == 1

    def label(self) -> str:
        return self.group.label()


@dataclass(frozen=True)
class Procyclic(ProfiniteDescriptor):
    """The group p^shift Z_p, an open subgroup of the p-adic integers."""

    p: int
    shift: int = 0

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.shift < 0:
            raise ValueError("shift must be nonnegative")

    def order(self) -> SupernaturalNumber:
        return SupernaturalNumber.build({self.p: INFINITY})

    def slot_for(self, key: int) -> Optional[Slot]:
        return Slot(0, procyclic=(self.p, self.shift)) if key == 0 else None

    def finite_slots(self) -> tuple[Slot, ...]:
        return (Slot(0, procyclic=(self.p, self.shift)),)

    def label(self) -> str:
        if self.shift == 0:
            return f"Z_{self.p}"
        return f"{self.p ** self.shift}Z_{self.p}"


@dataclass(frozen=True)
class Product(ProfiniteDescriptor):
    factors: tuple[ProfiniteDescriptor, ...]

    def __post_init__(self):
        procyclic_primes = []
        for f in self.factors:
            if isinstance(f, (Product, PrimeIndexedProduct)):
                raise UnsupportedGroupShape("nested products are not supported")
            if isinstance(f, Procyclic):
                procyclic_primes.append(f.p)
        if len(set(procyclic_primes)) != len(procyclic_primes):
            raise UnsupportedGroupShape("procyclic factor primes must be pairwise distinct")

    def order(self) -> SupernaturalNumber:
        acc = SupernaturalNumber.one()
        for f in self.factors:
            acc = acc * f.order()
        return acc

    def slot_for(self, key: int) -> Optional[Slot]:
        if not (0 <= key < len(self.factors)):
            return None
        f = self.factors[key]
        if isinstance(f, Procyclic):
            return Slot(key, procyclic=(f.p, f.shift))
        return Slot(key, finite=f.group)

    def finite_slots(self) -> tuple[Slot, ...]:
        return tuple(self.slot_for(i) for i in range(len(self.factors)))

    def is_trivial(self) -> bool:
        return all(f.is_trivial() for f in self.factors)

    def label(self) -> str:
        return " x ".join(f.label() for f in self.factors)


@dataclass(frozen=True)
class PrimeIndexedProduct(ProfiniteDescriptor):
    """Product over a prime set of procyclic factors p^(a_p) Z_p.

    ``local`` lists exceptional shifts; a shift of None marks a trivial
    factor at that prime.  Unlisted member primes carry shift 0.  The
    index set may be infinite; slots are then keyed by the prime and
    only finitely many are ever materialized.
    """

    index: PrimeSet
    local: tuple[tuple[int, Optional[int]], ...] = ()

    def __post_init__(self):
        for p, _ in self.local:
            if p not in self.index:
                raise UnsupportedGroupShape(f"local datum at {p} outside the index set")

    def shift_at(self, p: int) -> Optional[int]:
        """Shift of the factor at p; None when the factor is trivial or absent."""
        if p not in self.index:
            return None
        for q, s in self.local:
            if q == p:
                return s
        return 0

    def factor_primes(self) -> PrimeSet:
        trivial = [p for p, s in self.local if s is None]
        return self.index.minus_finite(trivial)

    def leading_primes(self, count: int) -> list[int]:
        """The first ``count`` factor primes in ascending order."""
        return list(itertools.islice(self.factor_primes().members(), count))

    def order(self) -> SupernaturalNumber:
        return SupernaturalNumber((), self.factor_primes())

    def slot_for(self, key: int) -> Optional[Slot]:
        s = self.shift_at(key)
        if s is None:
            return None
        return Slot(key, procyclic=(key, s))

    def finite_slots(self) -> Optional[tuple[Slot, ...]]:
        primes = self.factor_primes()
        if not primes.is_finite():
            return None
        return tuple(Slot(p, procyclic=(p, self.shift_at(p))) for p in primes.members())

    def is_trivial(self) -> bool:
        return self.factor_primes().is_empty()

    def label(self) -> str:
        primes = self.factor_primes()
        if primes.is_finite():
            bits = []
            for p in primes.members():
                s = self.shift_at(p) or 0
                bits.append(f"Z_{p}" if s == 0 else f"{p ** s}Z_{p}")
            return " x ".join(bits) if bits else "1"
        shifted = [f"{p ** s}Z_{p}" for p, s in sorted(self.local)
                   if s is not None and s > 0 and p in primes]
        base = f"prod over {primes.label()} of Z_p"
        if shifted:
            base += " (with " + ", ".join(shifted) + ")"
        return base


TRIVIAL_GROUP = Finite(FiniteGroupTable.trivial())


def order(g: ProfiniteDescriptor) -> SupernaturalNumber:
    """Supernatural order of a profinite group descriptor."""
    return g.order()


def divides_order(p: int, g: ProfiniteDescriptor) -> bool:
    e = g.order().exponent(p)
    return isinstance(e, SymbolicInfinity) or e >= 1


def closed_subgroup(g: ProfiniteDescriptor,
                    spec: Mapping[int, Optional[int]]) -> ProfiniteDescriptor:
    """Closed subgroup of a product of procyclics, factor by factor.

    ``spec`` maps a prime to the extra power selecting p^(a+k) Z_p
    inside that factor, or to None to drop the factor entirely.
    Unlisted factors are kept whole.
    """
    if isinstance(g, Procyclic):
        g = Product((g,))
    if isinstance(g, Product):
        if any(not isinstance(f, Procyclic) for f in g.factors):
            raise UnsupportedGroupShape(
                "closed subgroups are supported only in products of procyclics"
            )
        known = {f.p for f in g.factors}
        for p in spec:
            if p not in known:
                raise UnsupportedGroupShape(f"prime {p} is not a factor of the group")
        out: list[ProfiniteDescriptor] = []
        for f in g.factors:
            k = spec.get(f.p, 0)
            if k is None:
                continue
            if k < 0:
                raise UnsupportedGroupShape("subgroup shifts must be nonnegative")
            out.append(Procyclic(f.p, f.shift + k))
        if not out:
            return TRIVIAL_GROUP
        if len(out) == 1:
            return out[0]
        return Product(tuple(out))
    if isinstance(g, PrimeIndexedProduct):
        for p in spec:
            if g.shift_at(p) is None:
                raise UnsupportedGroupShape(f"prime {p} is not a factor of the group")
        local = dict(g.local)
        for p, k in spec.items():
            if k is None:
                local[p] = None
            else:
                if k < 0:
                    raise UnsupportedGroupShape("subgroup shifts must be nonnegative")
                local[p] = (g.shift_at(p) or 0) + k
        out2 = PrimeIndexedProduct(g.index, tuple(sorted(local.items())))
        if out2.is_trivial():
            return TRIVIAL_GROUP
        return out2
    raise UnsupportedGroupShape(
        "closed subgroups are supported only in products of procyclics"
    )


# ---------------------------------------------------------------------------
# open normal subgroups
# ---------------------------------------------------------------------------

SlotSpec = Union[int, frozenset[int]]  # exponent for procyclic, subset for finite


@dataclass(frozen=True)
class OpenNormalDescriptor:
    """An open normal subgroup described factor by factor.

    ``data`` assigns to finitely many slot keys either an exponent m
    (procyclic factor: the subgroup p^(shift+m) Z_p) or a frozenset of
    element indices (finite factor: a normal subgroup).  Slots without
    data carry the full factor.
    """

    group: ProfiniteDescriptor
    data: tuple[tuple[int, SlotSpec], ...]

    def __post_init__(self):
        seen = set()
        for key, spec in self.data:
            if key in seen:
                raise InvalidSubgroup(f"duplicate slot {key}")
            seen.add(key)
            slot = self.group.slot_for(key)
            if slot is None:
                raise InvalidSubgroup(f"unknown slot {key}")
            if slot.procyclic is not None:
                if not isinstance(spec, int) or isinstance(spec, bool) or spec < 0:
                    raise InvalidSubgroup("procyclic slot spec must be an exponent >= 0")
            else:
                if not isinstance(spec, frozenset):
                    raise InvalidSubgroup("finite slot spec must be a frozenset of indices")
                if not slot.finite.is_normal(spec):
                    raise InvalidSubgroup("finite slot subset is not a normal subgroup")

    @classmethod
    def make(cls, group: ProfiniteDescriptor,
             data: Mapping[int, SlotSpec]) -> "OpenNormalDescriptor":
        cleaned = []
        for key, spec in data.items():
            slot = group.slot_for(key)
            if slot is None:
                raise InvalidSubgroup(f"unknown slot {key}")
            if slot.procyclic is not None and spec == 0:
                continue  # full factor marker
            if slot.finite is not None and isinstance(spec, frozenset) \
                    and len(spec) == slot.finite.size:
                continue  # full factor marker
            cleaned.append((key, spec))
        return cls(group, tuple(sorted(cleaned)))

    def spec_at(self, key: int) -> Optional[SlotSpec]:
        for k, spec in self.data:
            if k == key:
                return spec
        return None

    def is_whole_group(self) -> bool:
        return not self.data

    def index(self) -> int:
        """The index [G : N], always finite."""
        out = 1
        for key, spec in self.data:
            slot = self.group.slot_for(key)
            if slot.procyclic is not None:
                out *= slot.procyclic[0] ** spec
            else:
                out *= slot.finite.size // len(spec)
        return out

    def contains(self, other: "OpenNormalDescriptor") -> bool:
        """Slot-wise containment test; both must live in the same group."""
        if self.group != other.group:
            raise InvalidSubgroup("containment requires a common ambient group")
        keys = {k for k, _ in self.data} | {k for k, _ in other.data}
        for key in keys:
            slot = self.group.slot_for(key)
            mine = self.spec_at(key)
            theirs = other.spec_at(key)
            if slot.procyclic is not None:
                if (theirs or 0) < (mine or 0):
                    return False
            else:
                full = frozenset(range(slot.finite.size))
                s_mine = mine if mine is not None else full
                s_theirs = theirs if theirs is not None else full
                if not s_theirs <= s_mine:
                    return False
        return True

    def member_group(self) -> ProfiniteDescriptor:
        """The subgroup itself, as a profinite group descriptor."""
        g = self.group
        if isinstance(g, PrimeIndexedProduct):
            local = dict(g.local)
            for p, spec in self.data:
                local[p] = (g.shift_at(p) or 0) + spec
            out = PrimeIndexedProduct(g.index, tuple(sorted(local.items())))
            return TRIVIAL_GROUP if out.is_trivial() else out
        slots = g.finite_slots()
        factors: list[ProfiniteDescriptor] = []
        for slot in slots:
            spec = self.spec_at(slot.key)
            if slot.procyclic is not None:
                p, shift = slot.procyclic
                factors.append(Procyclic(p, shift + (spec or 0)))
            else:
                sub = slot.finite if spec is None else slot.finite.subgroup_table(spec)
                if sub.size > 1:
                    factors.append(Finite(sub))
        if not factors:
            return TRIVIAL_GROUP
        if len(factors) == 1:
            return factors[0]
        return Product(tuple(factors))

    def label(self) -> str:
        g = self.group
        slots = g.finite_slots()
        if slots is None:
            if not self.data:
                return "the whole group"
            bits = []
            for key, spec in self.data:
                slot = g.slot_for(key)
                p, shift = slot.procyclic
                m = shift + spec
                bits.append(f"{p ** m}Z_{p}" if m else f"Z_{p}")
            return f"({' x '.join(bits)}) x remaining factors in full"
        bits = []
        for slot in slots:
            spec = self.spec_at(slot.key)
            if slot.procyclic is not None:
                p, shift = slot.procyclic
                m = shift + (spec or 0)
                bits.append(f"Z_{p}" if m == 0 else f"{p ** m}Z_{p}")
            else:
                if spec is None:
                    bits.append(slot.finite.label())
                elif len(spec) == 1:
                    bits.append("{e}")
                else:
                    bits.append(f"subgroup of order {len(spec)}")
        return " x ".join(bits) if bits else "G"

    def __str__(self) -> str:
        return self.label()


def whole_group(g: ProfiniteDescriptor) -> OpenNormalDescriptor:
    return OpenNormalDescriptor.make(g, {})


def quotient(g: ProfiniteDescriptor, n: OpenNormalDescriptor,
             table_budget: int = TABLE_BUDGET) -> FiniteGroupTable:
    """Multiplication table of G/N with canonically ordered elements.

    Factors appear in slot order; within each factor the quotient is
    Z/p^m for procyclic slots and cosets ordered by minimal element for
    finite slots.  Elements of the product are ordered mixed-radix with
    the first factor most significant.
    """
    if n.group != g:
        raise InvalidSubgroup("subgroup descriptor belongs to a different group")
    total = n.index()
    if total > table_budget:
        raise BudgetExceeded(
            f"quotient of order {total} exceeds the table budget {table_budget}"
        )
    tables: list[FiniteGroupTable] = []
    for key, spec in n.data:
        slot = g.slot_for(key)
        if slot.procyclic is not None:
            if spec:
                tables.append(FiniteGroupTable.cyclic(slot.procyclic[0] ** spec))
        else:
            q, _ = slot.finite.quotient_by(spec)
            if q.size > 1:
                tables.append(q)
    result = FiniteGroupTable.trivial()
    for t in tables:
        result = t if result.size == 1 else FiniteGroupTable.product(result, t)
    return result


def index(g: ProfiniteDescriptor, n: OpenNormalDescriptor) -> int:
    """The index [G : N] of an open normal subgroup."""
    if n.group != g:
        raise InvalidSubgroup("subgroup descriptor belongs to a different group")
    return n.index()


# ---------------------------------------------------------------------------
# canonical towers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuotientTower:
    """A chain of finite quotients Q_0 <- Q_1 <- ... with verified surjections."""

    group: ProfiniteDescriptor
    quotients: tuple[FiniteGroupTable, ...]
    surjections: tuple[tuple[int, ...], ...]  # surjections[j] : Q_{j+1} -> Q_j
    kernels: tuple[OpenNormalDescriptor, ...]

    def __post_init__(self):
        k = len(self.quotients)
        if len(self.surjections) != k - 1 or len(self.kernels) != k:
            raise ValueError("tower components have inconsistent lengths")
        group_size = self.group.order().as_int()
        for j in range(k - 1):
            if self.quotients[j + 1].size % self.quotients[j].size:
                raise ValueError("quotient sizes must divide up the tower")
            verify_surjection(self.quotients[j + 1], self.quotients[j],
                              self.surjections[j])
            if not self.kernels[j].contains(self.kernels[j + 1]):
                raise ValueError("tower kernels must decrease")
            if self.kernels[j].data == self.kernels[j + 1].data \
                    and self.kernels[j].index() != group_size:
                raise ValueError("tower kernels must strictly decrease until trivial")

    @property
    def depth(self) -> int:
        return len(self.quotients) - 1


def _tower_kernel_data(g: ProfiniteDescriptor, level: int) -> dict[int, SlotSpec]:
    """Slot data of the canonical kernel at the given tower level."""
    data: dict[int, SlotSpec] = {}
    if isinstance(g, PrimeIndexedProduct):
        # staggered schedule: the rank-r factor (ascending primes, rank
        # 0-based) sits at exponent max(0, level - 2r), which keeps the
        # kernels cofinal while quotient tables respect the budget
        for rank, p in enumerate(g.leading_primes((level + 1) // 2 + 1)):
            m = max(0, level - 2 * rank)
            if m:
                data[p] = m
        return data
    slots = g.finite_slots()
    for slot in slots:
        if slot.procyclic is not None:
            if level:
                data[slot.key] = level
        else:
            data[slot.key] = frozenset({0})
    return data


def canonical_tower(g: ProfiniteDescriptor, depth: int,
                    table_budget: int = TABLE_BUDGET) -> QuotientTower:
    """The canonical neighborhood-basis tower of finite quotients.

    Procyclic factors of finite products are cut at p^level; the factors
    of a prime-indexed product enter on a staggered schedule so the
    kernels stay cofinal while the quotient tables respect the budget.
    Finite factors are quotiented by the identity from level 0 on.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    kernels = [
        OpenNormalDescriptor.make(g, _tower_kernel_data(g, j))
        for j in range(depth + 1)
    ]
    quotients = [quotient(g, n, table_budget) for n in kernels]
    surjections = []
    for j in range(depth):
        surjections.append(
            _tower_surjection(g, kernels[j + 1], kernels[j],
                              quotients[j + 1], quotients[j])
        )
    return QuotientTower(g, tuple(quotients), tuple(surjections), tuple(kernels))


def _quotient_slot_parts(g: ProfiniteDescriptor, n: OpenNormalDescriptor) -> list[tuple]:
    """(key, size, kind, payload) for each nontrivial factor of G/N, in slot order."""
    out = []
    for key, spec in n.data:
        slot = g.slot_for(key)
        if slot.procyclic is not None:
            if spec:
                size = slot.procyclic[0] ** spec
                out.append((key, size, "cyclic", size))
        else:
            q, proj = slot.finite.quotient_by(spec)
            if q.size > 1:
                out.append((key, q.size, "coset", proj))
    return out


def _tower_surjection(g, fine: OpenNormalDescriptor, coarse: OpenNormalDescriptor,
                      q_fine: FiniteGroupTable, q_coarse: FiniteGroupTable) -> tuple[int, ...]:
    fine_parts = _quotient_slot_parts(g, fine)
    coarse_parts = _quotient_slot_parts(g, coarse)
    coarse_keys = {part[0]: i for i, part in enumerate(coarse_parts)}
    mapping = []
    for x in range(q_fine.size):
        # decode mixed-radix over fine parts (first factor most significant)
        rem = x
        digits = []
        for _, size, _, _ in reversed(fine_parts):
            digits.append(rem % size)
            rem //= size
        digits.reverse()
        out_digits = [0] * len(coarse_parts)
        for (key, _, kind, payload), d in zip(fine_parts, digits):
            i = coarse_keys.get(key)
            if i is None:
                continue
            _, c_size, _, c_payload = coarse_parts[i]
            if kind == "cyclic":
                out_digits[i] = d % c_size
            else:
                # both projections come from the same finite factor: lift a
                # coset rep of the fine quotient, then project coarsely
                rep = payload.index(d)
                out_digits[i] = c_payload[rep]
        y = 0
        for (_, size, _, _), d in zip(coarse_parts, out_digits):
            y = y * size + d
        mapping.append(y)
    return tuple(mapping)


# ---------------------------------------------------------------------------
# cofinal families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CanonicalFamily:
    """The family of all canonical tower kernels (cofinal by construction)."""


@dataclass(frozen=True)
class DeclaredChain:
    """A decreasing chain of declared open normal subgroups.

    When the members vary every procyclic exponent strictly upward and
    pin every finite factor at the identity, the chain is recognized as
    the finite prefix of a neighborhood basis of the identity and is
    treated as that infinite family.
    """

    members: tuple[OpenNormalDescriptor, ...]

    def __post_init__(self):
        if not self.members:
            raise InvalidSubgroup("a declared chain needs at least one member")
        g = self.members[0].group
        for m in self.members:
            if m.group != g:
                raise InvalidSubgroup("chain members must share the ambient group")
        for a, b in zip(self.members, self.members[1:]):
            if not a.contains(b):
                raise InvalidSubgroup("declared family must be a decreasing chain")

    @property
    def group(self) -> ProfiniteDescriptor:
        return self.members[0].group

    def recognized_basis_pattern(self) -> bool:
        """True when the chain extrapolates to a neighborhood basis."""
        slots = self.group.finite_slots()
        if slots is None:
            return False
        for slot in slots:
            specs = [m.spec_at(slot.key) for m in self.members]
            if slot.procyclic is not None:
                exps = [s if s is not None else 0 for s in specs]
                if len(exps) >= 2 and all(b > a for a, b in zip(exps, exps[1:])):
                    continue
                return False
            else:
                if all(s is not None and s == frozenset({0}) for s in specs):
                    continue
                return False
        return True


CofinalFamily = Union[CanonicalFamily, DeclaredChain]


@dataclass(frozen=True)
class CofinalCertificate:
    kind: str  # "symbolic" or "depth-checked"
    depth: Optional[int]
    detail: str


@dataclass(frozen=True)
class RefutedAt:
    level: int
    witness: str


def chain_member_contained_in(chain: DeclaredChain,
                              target: OpenNormalDescriptor) -> bool:
    """Does some (possibly extrapolated) chain member sit inside ``target``?"""
    for m in chain.members:
        if target.contains(m):
            return True
    if chain.recognized_basis_pattern():
        # extrapolated members deepen every procyclic exponent while the
        # finite parts stay pinned at the identity, so containment only
        # depends on the finite parts -- and {e} sits inside everything
        return True
    return False


def check_cofinal(family: CofinalFamily, g: ProfiniteDescriptor, depth: int,
                  table_budget: int = TABLE_BUDGET
                  ) -> Union[CofinalCertificate, RefutedAt]:
    """Certify or refute cofinality of a family among open normal subgroups.

    Canonical families and recognized neighborhood-basis chains are
    certified symbolically; other declared chains are tested against the
    canonical tower kernels down to the requested depth.
    """
    if isinstance(family, CanonicalFamily):
        return CofinalCertificate(
            "symbolic", None,
            "canonical tower kernels form a neighborhood basis of the identity",
        )
    if family.group != g:
        raise InvalidSubgroup("family members live in a different group")
    if family.recognized_basis_pattern():
        return CofinalCertificate(
            "symbolic", None,
            "declared chain extrapolates to a neighborhood basis: procyclic "
            "exponents increase strictly and finite factors are pinned at the identity",
        )
    for level in range(depth + 1):
        kernel = OpenNormalDescriptor.make(g, _tower_kernel_data(g, level))
        if not chain_member_contained_in(family, kernel):
            return RefutedAt(level, kernel.label())
    return CofinalCertificate(
        "depth-checked", depth,
        f"every canonical kernel down to depth {depth} contains a declared member",
    )


def induced_family(u_prime: OpenNormalDescriptor, family: CofinalFamily
                   ) -> tuple[ProfiniteDescriptor, CofinalFamily]:
    """Reindex a cofinal family inside an open normal subgroup.

    Returns the subgroup as a group descriptor together with the family
    of those members contained in it, rewritten as open normal subgroups
    of the subgroup.
    """
    base = u_prime.member_group()
    if isinstance(family, CanonicalFamily):
        return base, CanonicalFamily()
    g = u_prime.group
    slots = g.finite_slots()
    if slots is None:
        raise UnsupportedGroupShape(
            "declared families inside infinite prime-indexed products are not supported"
        )
    # map old slot keys to slot keys of the surviving factors of base
    new_keys: dict[int, int] = {}
    pos = 0
    for slot in slots:
        spec = u_prime.spec_at(slot.key)
        if slot.procyclic is not None:
            new_keys[slot.key] = pos
            pos += 1
        else:
            sub = slot.finite if spec is None else slot.finite.subgroup_table(spec)
            if sub.size > 1:
                new_keys[slot.key] = pos
                pos += 1
    base_slots = base.finite_slots()
    members_out = []
    for m in family.members:
        if not u_prime.contains(m):
            continue
        data: dict[int, SlotSpec] = {}
        for key, spec in m.data:
            slot = g.slot_for(key)
            if slot.procyclic is not None:
                u_exp = u_prime.spec_at(key) or 0
                rel = spec - u_exp
                if rel > 0:
                    data[base_slots[new_keys[key]].key] = rel
            else:
                if key not in new_keys:
                    # factor vanished inside the subgroup; containment already
                    # forces the member's slot to be the identity there
                    continue
                u_sub = u_prime.spec_at(key)
                elems = sorted(u_sub) if u_sub is not None \
                    else list(range(slot.finite.size))
                positions = frozenset(elems.index(x) for x in spec)
                data[base_slots[new_keys[key]].key] = positions
        members_out.append(OpenNormalDescriptor.make(base, data))
    if not members_out:
        raise InvalidSubgroup("no family member is contained in the subgroup")
    return base, DeclaredChain(tuple(members_out))
