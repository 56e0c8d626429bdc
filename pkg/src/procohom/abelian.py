"""Exact integer linear algebra and structured abelian groups.

Everything here is exact: matrix entries are arbitrary-precision Python
integers and group invariants are computed symbolically.  No floating
point is used anywhere in the engine.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from math import gcd
from typing import Iterable, Optional, Sequence, Union

from .errors import BudgetExceeded, CompositionNonzero

MATRIX_ENTRY_BUDGET = 10**7


# ---------------------------------------------------------------------------
# symbolic infinities
# ---------------------------------------------------------------------------

class SymbolicInfinity:
    """A symbolic countable infinity.

    Used both for countably infinite multiplicities of group summands
    (``OMEGA``) and for unbounded exponents of supernatural numbers
    (``INFINITY``).  Arithmetic is absorbing: ``x + n == x`` and
    ``x + x == x``.  The two instances are distinct sentinels and are
    never mixed.
    """

    __slots__ = ("_name",)

    def __init__(self, name: str):
        self._name = name

    def __repr__(self) -> str:
        return self._name

    def __add__(self, other):
        if isinstance(other, SymbolicInfinity) and other is not self:
            raise TypeError("cannot mix distinct symbolic infinities")
        return self

    __radd__ = __add__

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True


OMEGA = SymbolicInfinity("omega")

Cardinal = Union[int, SymbolicInfinity]


def card_add(a: Cardinal, b: Cardinal) -> Cardinal:
    if isinstance(a, SymbolicInfinity):
        return a
    if isinstance(b, SymbolicInfinity):
        return b
    return a + b


def card_min(a: Cardinal, b: Cardinal) -> Cardinal:
    if isinstance(a, SymbolicInfinity):
        return b
    if isinstance(b, SymbolicInfinity):
        return a
    return min(a, b)


def card_label(a: Cardinal) -> str:
    return "omega" if isinstance(a, SymbolicInfinity) else str(a)


# ---------------------------------------------------------------------------
# integer factorization helpers (trial division; desk-scale inputs)
# ---------------------------------------------------------------------------

def factorint(n: int) -> dict[int, int]:
    """Prime factorization ``{p: e}`` of a positive integer."""
    if n <= 0:
        raise ValueError("factorint expects a positive integer")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1 if d == 2 else 2
    return True


def p_adic_valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero is undefined")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


# ---------------------------------------------------------------------------
# IntegerMatrix
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntegerMatrix:
    """An immutable matrix of exact integers.

    Rows and columns may be zero; the entry budget rejects matrices
    with more than ``MATRIX_ENTRY_BUDGET`` cells.
    """

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if self.rows * self.cols > MATRIX_ENTRY_BUDGET:
            raise BudgetExceeded(
                f"matrix with {self.rows}x{self.cols} entries exceeds the "
                f"{MATRIX_ENTRY_BUDGET}-entry budget"
            )
        if len(self.entries) != self.rows:
            raise ValueError("row count mismatch")
        for row in self.entries:
            if len(row) != self.cols:
                raise ValueError("column count mismatch")
            for x in row:
                if not isinstance(x, int) or isinstance(x, bool):
                    raise TypeError("matrix entries must be integers")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntegerMatrix":
        rows = [tuple(int(x) for x in r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, tuple(rows))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntegerMatrix":
        if rows * cols > MATRIX_ENTRY_BUDGET:
            raise BudgetExceeded(
                f"matrix with {rows}x{cols} entries exceeds the "
                f"{MATRIX_ENTRY_BUDGET}-entry budget"
            )
        return cls(rows, cols, tuple(tuple(0 for _ in range(cols)) for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "IntegerMatrix":
        return cls(n, n, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def is_diagonal(self) -> bool:
        return all(
            x == 0 for i, row in enumerate(self.entries) for j, x in enumerate(row) if i != j
        )

    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.entries[i][i] for i in range(min(self.rows, self.cols)))

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix(
            self.cols, self.rows,
            tuple(tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols)),
        )

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch in matrix product")
        ot = other.entries
        out = []
        for row in self.entries:
            # accumulate only over nonzero entries; bar differentials are sparse
            acc = [0] * other.cols
            for k, a in enumerate(row):
                if a:
                    ork = ot[k]
                    for j in range(other.cols):
                        b = ork[j]
                        if b:
                            acc[j] += a * b
            out.append(tuple(acc))
        return IntegerMatrix(self.rows, other.cols, tuple(out))

    def columns_as_dicts(self) -> list[dict[int, int]]:
        cols: list[dict[int, int]] = [dict() for _ in range(self.cols)]
        for i, row in enumerate(self.entries):
            for j, x in enumerate(row):
                if x:
                    cols[j][i] = x
        return cols


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

def _snf_in_place(a: list[list[int]], m: int, n: int, want_transforms: bool,
                  want_inverses: bool = False):
    """Diagonalize ``a`` by unimodular row/column operations.

    Returns (u, v, u_inv, v_inv); the unused transforms are None.  The
    diagonal of ``a`` afterwards is nonnegative and satisfies the
    divisibility chain d1 | d2 | ...
    """
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)] if want_transforms else None
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)] if want_transforms else None
    u_inv = [[1 if i == j else 0 for j in range(m)] for i in range(m)] if want_inverses else None
    v_inv = [[1 if i == j else 0 for j in range(n)] for i in range(n)] if want_inverses else None

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        if u is not None:
            u[i], u[j] = u[j], u[i]
        if u_inv is not None:
            for r in u_inv:
                r[i], r[j] = r[j], r[i]

    def col_swap(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        if v is not None:
            for r in v:
                r[i], r[j] = r[j], r[i]
        if v_inv is not None:
            v_inv[i], v_inv[j] = v_inv[j], v_inv[i]

    def row_add(dst, src, q):
        # row[dst] += q * row[src]
        ad, as_ = a[dst], a[src]
        for k in range(n):
            if as_[k]:
                ad[k] += q * as_[k]
        if u is not None:
            ud, us = u[dst], u[src]
            for k in range(m):
                if us[k]:
                    ud[k] += q * us[k]
        if u_inv is not None:
            # inverse operation on the right: col[src] -= q * col[dst]
            for r in u_inv:
                if r[dst]:
                    r[src] -= q * r[dst]

    def col_add(dst, src, q):
        # col[dst] += q * col[src]
        for r in a:
            if r[src]:
                r[dst] += q * r[src]
        if v is not None:
            for r in v:
                if r[src]:
                    r[dst] += q * r[src]
        if v_inv is not None:
            vd, vs = v_inv[dst], v_inv[src]
            for k in range(n):
                if vd[k]:
                    vs[k] -= q * vd[k]

    def row_negate(i):
        a[i] = [-x for x in a[i]]
        if u is not None:
            u[i] = [-x for x in u[i]]
        if u_inv is not None:
            for r in u_inv:
                r[i] = -r[i]

    t = 0
    limit = min(m, n)
    while t < limit:
        # find a pivot of smallest absolute value in the remaining block
        piv_i = piv_j = -1
        piv = 0
        for i in range(t, m):
            ai = a[i]
            for j in range(t, n):
                x = ai[j]
                if x and (piv == 0 or abs(x) < piv):
                    piv, piv_i, piv_j = abs(x), i, j
                    if piv == 1:
                        break
            if piv == 1:
                break
        if piv == 0:
            break
        if piv_i != t:
            row_swap(t, piv_i)
        if piv_j != t:
            col_swap(t, piv_j)
        if a[t][t] < 0:
            row_negate(t)

        while True:
            # clear column t
            dirty = False
            for i in range(t + 1, m):
                x = a[i][t]
                if x:
                    q = x // a[t][t]
                    if q:
                        row_add(i, t, -q)
                    if a[i][t]:
                        row_swap(t, i)
                        if a[t][t] < 0:
                            row_negate(t)
                        dirty = True
                        break
            if dirty:
                continue
            # clear row t
            for j in range(t + 1, n):
                x = a[t][j]
                if x:
                    q = x // a[t][t]
                    if q:
                        col_add(j, t, -q)
                    if a[t][j]:
                        col_swap(t, j)
                        if a[t][t] < 0:
                            # column swap cannot flip sign, but keep safe
                            row_negate(t)
                        dirty = True
                        break
            if dirty:
                continue
            break

        # enforce divisibility of the remaining block by the pivot
        d = a[t][t]
        fixed = True
        if d != 1 and d != -1:
            for i in range(t + 1, m):
                ai = a[i]
                for j in range(t + 1, n):
                    if ai[j] % d:
                        row_add(t, i, 1)
                        fixed = False
                        break
                if not fixed:
                    break
        if not fixed:
            continue
        if a[t][t] < 0:
            row_negate(t)
        t += 1

    return u, v, u_inv, v_inv


def smith_normal_form(mat: IntegerMatrix) -> tuple[IntegerMatrix, IntegerMatrix, IntegerMatrix]:
    """Smith normal form ``(D, U, V)`` with ``U @ A @ V == D``.

    ``U`` and ``V`` are unimodular, ``D`` is diagonal with nonnegative
    entries satisfying d1 | d2 | ...
    """
    a = [list(row) for row in mat.entries]
    u, v, _, _ = _snf_in_place(a, mat.rows, mat.cols, want_transforms=True)
    d = IntegerMatrix.from_rows(a, mat.cols) if mat.rows else IntegerMatrix.zeros(0, mat.cols)
    return (
        d,
        IntegerMatrix.from_rows(u, mat.rows) if mat.rows else IntegerMatrix.zeros(0, 0),
        IntegerMatrix.from_rows(v, mat.cols) if mat.cols else IntegerMatrix.zeros(0, 0),
    )


def _snf_diagonal(mat: IntegerMatrix) -> list[int]:
    a = [list(row) for row in mat.entries]
    _snf_in_place(a, mat.rows, mat.cols, want_transforms=False)
    return [a[i][i] for i in range(min(mat.rows, mat.cols))]


# ---------------------------------------------------------------------------
# finitely generated abelian groups
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FgAbelianGroup:
    """Canonical invariant-factor form of a finitely generated abelian group.

    ``invariant_factors`` is an ascending divisibility chain d1 | d2 | ...
    with every d_i >= 2, so equal groups compare equal field by field.
    """

    free_rank: int
    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        prev = None
        for d in self.invariant_factors:
            if d < 2:
                raise ValueError("invariant factors must be >= 2")
            if prev is not None and d % prev:
                raise ValueError("invariant factors must form a divisibility chain")
            prev = d

    @classmethod
    def trivial(cls) -> "FgAbelianGroup":
        return cls(0, ())

    @classmethod
    def free(cls, rank: int) -> "FgAbelianGroup":
        return cls(rank, ())

    @classmethod
    def cyclic(cls, n: int) -> "FgAbelianGroup":
        if n == 0:
            return cls(1, ())
        n = abs(n)
        return cls(0, ()) if n == 1 else cls(0, (n,))

    @classmethod
    def from_orders(cls, orders: Iterable[int]) -> "FgAbelianGroup":
        """Canonicalize an arbitrary multiset of cyclic orders.

        Order 0 stands for an infinite cyclic summand.  Coprime factors
        are merged CRT-style into the invariant-factor chain.
        """
        rank = 0
        by_prime: dict[int, list[int]] = {}
        for n in orders:
            n = abs(n)
            if n == 0:
                rank += 1
            elif n == 1:
                continue
            else:
                for p, e in factorint(n).items():
                    by_prime.setdefault(p, []).append(e)
        k = max((len(v) for v in by_prime.values()), default=0)
        factors = []
        for slot in range(k):
            d = 1
            for p, exps in by_prime.items():
                exps_sorted = sorted(exps, reverse=True)
                if slot < len(exps_sorted):
                    d *= p ** exps_sorted[slot]
            factors.append(d)
        factors.reverse()
        return cls(rank, tuple(factors))

    def direct_sum(self, other: "FgAbelianGroup") -> "FgAbelianGroup":
        return FgAbelianGroup.from_orders(
            [0] * (self.free_rank + other.free_rank)
            + list(self.invariant_factors)
            + list(other.invariant_factors)
        )

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def torsion_order(self) -> int:
        return reduce(lambda a, b: a * b, self.invariant_factors, 1)

    def generator_orders(self) -> tuple[int, ...]:
        """Orders of the canonical generators; 0 stands for a free generator."""
        return (0,) * self.free_rank + self.invariant_factors

    def exponent_annihilates(self, n: int) -> bool:
        """True when n * G = 0."""
        if self.free_rank:
            return False
        return all(n % d == 0 for d in self.invariant_factors)

    def label(self) -> str:
        if self.is_trivial():
            return "0"
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.invariant_factors)
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.label()


def cokernel(mat: IntegerMatrix) -> FgAbelianGroup:
    """Cokernel of ``A : Z^cols -> Z^rows`` in canonical form."""
    diag = _snf_diagonal(mat)
    nonzero = [d for d in diag if d]
    return FgAbelianGroup.from_orders(
        [0] * (mat.rows - len(nonzero)) + [d for d in nonzero if d != 1]
    )


def homology_at(d_out: IntegerMatrix, d_in: IntegerMatrix) -> FgAbelianGroup:
    """Subquotient ker(d_out)/im(d_in) for a complex of free Z-modules.

    ``d_in`` maps into the middle module and ``d_out`` maps out of it, so
    ``d_out.cols == d_in.rows`` and ``d_out @ d_in == 0`` are required.
    """
    if d_out.cols != d_in.rows:
        raise CompositionNonzero(
            f"middle dimensions disagree: d_out has {d_out.cols} columns, "
            f"d_in has {d_in.rows} rows"
        )
    if d_out.rows and d_in.cols and not (d_out @ d_in).is_zero():
        raise CompositionNonzero("d_out . d_in != 0: malformed complex")
    c = d_out.cols

    a = [list(row) for row in d_in.entries]
    _, _, u_inv, _ = _snf_in_place(a, d_in.rows, d_in.cols, want_transforms=False,
                                   want_inverses=True)
    diag = [a[i][i] for i in range(min(d_in.rows, d_in.cols))]
    rank_in = sum(1 for d in diag if d)

    # change basis of the middle module so im(d_in) is spanned by the first
    # rank_in coordinates; columns of d_out in the new basis then split
    if d_out.rows:
        b = d_out @ IntegerMatrix.from_rows(u_inv, c)
        for j in range(rank_in):
            for i in range(d_out.rows):
                if b.entries[i][j]:
                    raise CompositionNonzero("d_out . d_in != 0: malformed complex")
        rest = IntegerMatrix.from_rows(
            [row[rank_in:] for row in b.entries], c - rank_in
        )
        rank_out = sum(1 for d in _snf_diagonal(rest) if d)
    else:
        rank_out = 0

    free = c - rank_in - rank_out
    torsion = [d for d in diag if d and d != 1]
    return FgAbelianGroup.from_orders([0] * free + torsion)


# ---------------------------------------------------------------------------
# structured abelian groups
# ---------------------------------------------------------------------------

class StructuredAbelian:
    """Base class for coefficient modules.

    Subclasses form the shapes Zero, Fg, RationalVS, PPrimary and
    DirectSum.  Always build values through :func:`direct_sum` or the
    shape constructors so the normal form invariants hold: a DirectSum
    is flat, has at most one RationalVS term, at most one Fg term, and
    at most one PPrimary term per prime.
    """

    def parts(self) -> tuple["StructuredAbelian", ...]:
        return (self,)

    def is_zero(self) -> bool:
        return False

    def is_torsion_free_divisible(self) -> bool:
        return False

    def is_finitely_generated(self) -> bool:
        return False

    def is_torsion(self) -> bool:
        """True when every element has finite order."""
        return False

    def torsion_primes(self) -> frozenset[int]:
        return frozenset()

    def as_fg(self) -> Optional[FgAbelianGroup]:
        """The underlying finitely generated group, when there is one."""
        return None

    def label(self) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.label()


@dataclass(frozen=True)
class Zero(StructuredAbelian):
    def is_zero(self) -> bool:
        return True

    def is_torsion_free_divisible(self) -> bool:
        return True

    def is_finitely_generated(self) -> bool:
        return True

    def is_torsion(self) -> bool:
        return True

    def as_fg(self) -> FgAbelianGroup:
        return FgAbelianGroup.trivial()

    def label(self) -> str:
        return "0"


ZERO = Zero()


@dataclass(frozen=True)
class Fg(StructuredAbelian):
    group: FgAbelianGroup

    def is_zero(self) -> bool:
        return self.group.is_trivial()

    def is_finitely_generated(self) -> bool:
        return True

    def is_torsion(self) -> bool:
        return self.group.free_rank == 0

    def torsion_primes(self) -> frozenset[int]:
        primes: set[int] = set()
        for d in self.group.invariant_factors:
            primes.update(factorint(d))
        return frozenset(primes)

    def as_fg(self) -> FgAbelianGroup:
        return self.group

    def label(self) -> str:
        return self.group.label()


@dataclass(frozen=True)
class RationalVS(StructuredAbelian):
    """A rational vector space of the given dimension (int or OMEGA)."""

    dim: Cardinal = 1

    def is_torsion_free_divisible(self) -> bool:
        return True

    def label(self) -> str:
        if self.dim == 1:
            return "Q"
        return f"Q^{card_label(self.dim)}"


@dataclass(frozen=True)
class PPrimary(StructuredAbelian):
    """A p-torsion group: summands Z/p^e with (possibly infinite) multiplicity.

    ``orders`` maps the exponent e >= 1 to the multiplicity of Z/p^e.
    In normal form a PPrimary part is only kept when some multiplicity
    is infinite; purely finite p-torsion folds into the Fg part.
    """

    p: int
    orders: tuple[tuple[int, Cardinal], ...]

    def is_torsion(self) -> bool:
        return True

    def torsion_primes(self) -> frozenset[int]:
        return frozenset({self.p})

    def label(self) -> str:
        bits = []
        for e, mult in self.orders:
            base = f"Z/{self.p ** e}"
            bits.append(base if mult == 1 else f"({base})^{card_label(mult)}")
        return " + ".join(bits)


@dataclass(frozen=True)
class DirectSum(StructuredAbelian):
    summands: tuple[StructuredAbelian, ...]

    def parts(self) -> tuple[StructuredAbelian, ...]:
        return self.summands

    def is_torsion_free_divisible(self) -> bool:
        return all(p.is_torsion_free_divisible() for p in self.summands)

    def is_finitely_generated(self) -> bool:
        return all(p.is_finitely_generated() for p in self.summands)

    def is_torsion(self) -> bool:
        return all(p.is_torsion() for p in self.summands)

    def torsion_primes(self) -> frozenset[int]:
        out: frozenset[int] = frozenset()
        for p in self.summands:
            out |= p.torsion_primes()
        return out

    def as_fg(self) -> Optional[FgAbelianGroup]:
        if not self.is_finitely_generated():
            return None
        acc = FgAbelianGroup.trivial()
        for p in self.summands:
            fg = p.as_fg()
            assert fg is not None
            acc = acc.direct_sum(fg)
        return acc

    def label(self) -> str:
        return " + ".join(p.label() for p in self.summands)


def direct_sum(*parts: StructuredAbelian) -> StructuredAbelian:
    """Normal form of a direct sum of structured abelian groups."""
    rational: Cardinal = 0
    free_rank = 0
    finite_orders: list[int] = []
    # prime -> exponent -> multiplicity
    p_torsion: dict[int, dict[int, Cardinal]] = {}

    def absorb(m: StructuredAbelian):
        nonlocal rational, free_rank
        if isinstance(m, Zero):
            return
        if isinstance(m, DirectSum):
            for q in m.summands:
                absorb(q)
            return
        if isinstance(m, RationalVS):
            rational = card_add(rational, m.dim)
            return
        if isinstance(m, Fg):
            free_rank += m.group.free_rank
            for d in m.group.invariant_factors:
                for p, e in factorint(d).items():
                    bucket = p_torsion.setdefault(p, {})
                    bucket[e] = card_add(bucket.get(e, 0), 1)
            return
        if isinstance(m, PPrimary):
            bucket = p_torsion.setdefault(m.p, {})
            for e, mult in m.orders:
                bucket[e] = card_add(bucket.get(e, 0), mult)
            return
        raise TypeError(f"not a structured abelian group: {m!r}")

    for part in parts:
        absorb(part)

    out: list[StructuredAbelian] = []
    if rational != 0:
        out.append(RationalVS(rational))

    infinite_parts = []
    for p in sorted(p_torsion):
        bucket = {e: m for e, m in p_torsion[p].items() if m != 0}
        if not bucket:
            continue
        if any(isinstance(m, SymbolicInfinity) for m in bucket.values()):
            infinite_parts.append(
                PPrimary(p, tuple(sorted(bucket.items())))
            )
        else:
            for e, mult in bucket.items():
                finite_orders.extend([p ** e] * mult)

    fg = FgAbelianGroup.from_orders([0] * free_rank + finite_orders)
    if not fg.is_trivial():
        out.append(Fg(fg))
    out.extend(infinite_parts)

    if not out:
        return ZERO
    if len(out) == 1:
        return out[0]
    return DirectSum(tuple(out))


def from_fg(group: FgAbelianGroup) -> StructuredAbelian:
    return direct_sum(Fg(group))


def cyclic(n: int) -> StructuredAbelian:
    return from_fg(FgAbelianGroup.cyclic(n))


def free(rank: int) -> StructuredAbelian:
    return from_fg(FgAbelianGroup.free(rank))


def n_torsion(m: StructuredAbelian, n: int) -> StructuredAbelian:
    """The n-torsion subgroup {x : n*x = 0} in normal form."""
    if n < 1:
        raise ValueError("n must be positive")
    pieces: list[StructuredAbelian] = []
    for part in direct_sum(m).parts():
        if isinstance(part, (Zero, RationalVS)):
            continue
        if isinstance(part, Fg):
            pieces.append(from_fg(FgAbelianGroup.from_orders(
                gcd(d, n) for d in part.group.invariant_factors
            )))
        elif isinstance(part, PPrimary):
            v = p_adic_valuation(n, part.p) if n % part.p == 0 else 0
            if v == 0:
                continue
            bucket: dict[int, Cardinal] = {}
            for e, mult in part.orders:
                e2 = min(e, v)
                bucket[e2] = card_add(bucket.get(e2, 0), mult)
            pieces.append(PPrimary(part.p, tuple(sorted(bucket.items()))))
        else:
            raise TypeError(part)
    return direct_sum(*pieces)


def mod_n(m: StructuredAbelian, n: int) -> StructuredAbelian:
    """The quotient M/nM in normal form."""
    if n < 1:
        raise ValueError("n must be positive")
    pieces: list[StructuredAbelian] = []
    for part in direct_sum(m).parts():
        if isinstance(part, (Zero, RationalVS)):
            continue
        if isinstance(part, Fg):
            orders = [n] * part.group.free_rank
            orders.extend(gcd(d, n) for d in part.group.invariant_factors)
            pieces.append(from_fg(FgAbelianGroup.from_orders(orders)))
        elif isinstance(part, PPrimary):
            v = p_adic_valuation(n, part.p) if n % part.p == 0 else 0
            if v == 0:
                continue
            bucket: dict[int, Cardinal] = {}
            for e, mult in part.orders:
                e2 = min(e, v)
                bucket[e2] = card_add(bucket.get(e2, 0), mult)
            pieces.append(PPrimary(part.p, tuple(sorted(bucket.items()))))
        else:
            raise TypeError(part)
    return direct_sum(*pieces)


def decompose_div_plus_torsion(
    m: StructuredAbelian, j_primes: Iterable[int]
) -> Optional[tuple[StructuredAbelian, StructuredAbelian]]:
    """Split M as (torsion-free divisible) + (J-torsion), or None.

    Returns a pair (D, T) with M = D + T when the normal form admits it
    and every torsion prime of M lies in ``j_primes``.
    """
    j = frozenset(j_primes)
    m = direct_sum(m)
    divisible: list[StructuredAbelian] = []
    torsion: list[StructuredAbelian] = []
    for part in m.parts():
        if isinstance(part, Zero):
            continue
        if isinstance(part, RationalVS):
            divisible.append(part)
        elif isinstance(part, Fg):
            if part.group.free_rank:
                return None
            torsion.append(part)
        elif isinstance(part, PPrimary):
            torsion.append(part)
        else:
            return None
    t = direct_sum(*torsion)
    if not t.torsion_primes() <= j:
        return None
    return direct_sum(*divisible), t
