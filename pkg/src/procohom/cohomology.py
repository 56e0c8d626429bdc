"""Group cohomology with trivial coefficients and its colimit along towers.

The computational route is the inhomogeneous cochain complex of a finite
group: C^n = functions K^n -> M with the alternating-sum coface
differential.  The exposed :func:`bar_complex` builds the full complex
with the documented lexicographic basis; the value engine works on the
quasi-isomorphic normalized subcomplex (cochains vanishing whenever an
argument is the identity), which keeps level sizes at (|K|-1)^n.

Coefficients split into elementary-divisor summands: prime fields run on
vectorized modular row reduction, prime-power rings Z/p^e on the dense
minimal-valuation Smith form, and free summands on exact sparse integer
elimination.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence, Union

import numpy as np

from . import abelian
from .abelian import (
    ZERO,
    Fg,
    FgAbelianGroup,
    IntegerMatrix,
    StructuredAbelian,
    SymbolicInfinity,
    direct_sum,
    factorint,
    from_fg,
    mod_n,
    n_torsion,
)
from .errors import BudgetExceeded, CompositionNonzero
from .exact_linalg import (
    EchelonLattice,
    FpQuotientSolver,
    PrimePowerQuotientSolver,
    diagonal_values,
    kernel_mod_p,
    kernel_with_row_orders,
)
from .profinite import (
    TABLE_BUDGET,
    FiniteGroupTable,
    ProfiniteDescriptor,
    QuotientTower,
    SupernaturalNumber,
    canonical_tower,
    verify_surjection,
)

BAR_BUDGET = 10**5

Cochain = dict[tuple[int, ...], tuple[int, ...]]  # tuple of coefficients per M-generator


# ---------------------------------------------------------------------------
# the full bar cochain complex (exposed, exactly the documented basis)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BarCochainComplex:
    """Levels C^0 .. C^(s_max+1) with C^n = functions K^n -> M.

    Basis ordering: tuples of K^n lexicographically (first coordinate
    most significant), then the generators of M; so the basis index of
    (w, j) is rank(w) * num_generators + j.  ``differentials[n]`` is the
    matrix of d : C^n -> C^(n+1).
    """

    group: FiniteGroupTable
    coefficients: FgAbelianGroup
    s_max: int
    dims: tuple[int, ...]
    differentials: tuple[IntegerMatrix, ...]


def _faces(table, v: tuple[int, ...]):
    """Cofaces of a tuple with alternating signs: (face, sign) pairs."""
    n = len(v) - 1
    yield v[1:], 1
    sign = -1
    for i in range(1, n + 1):
        yield v[: i - 1] + (table[v[i - 1]][v[i]],) + v[i + 1:], sign
        sign = -sign
    yield v[:-1], sign


def bar_complex(group: FiniteGroupTable, coefficients: FgAbelianGroup, s_max: int,
                budget: int = BAR_BUDGET) -> BarCochainComplex:
    """The full inhomogeneous cochain complex up to level s_max + 1."""
    if s_max < 0:
        raise ValueError("s_max must be nonnegative")
    k = group.size
    r = len(coefficients.generator_orders())
    top = k ** (s_max + 1) * max(r, 1)
    if top > budget:
        raise BudgetExceeded(
            f"level {s_max + 1} has {top} generators, over the budget {budget}"
        )
    dims = tuple(k ** n * r for n in range(s_max + 2))
    table = group.table
    diffs = []
    for n in range(s_max + 1):
        rows = [[0] * dims[n] for _ in range(dims[n + 1])]
        for v in itertools.product(range(k), repeat=n + 1):
            v_rank = 0
            for x in v:
                v_rank = v_rank * k + x
            for w, sign in _faces(table, v):
                w_rank = 0
                for x in w:
                    w_rank = w_rank * k + x
                for j in range(r):
                    rows[v_rank * r + j][w_rank * r + j] += sign
        diffs.append(IntegerMatrix.from_rows(rows, dims[n]))
    _check_dd_zero(diffs)
    return BarCochainComplex(group, coefficients, s_max, dims, tuple(diffs))


def _check_dd_zero(diffs: Sequence[IntegerMatrix]) -> None:
    for d_low, d_high in zip(diffs, diffs[1:]):
        cols_low = d_low.columns_as_dicts()
        cols_high = d_high.columns_as_dicts()
        for col in cols_low:
            acc: dict[int, int] = {}
            for mid, a in col.items():
                for row, b in cols_high[mid].items():
                    acc[row] = acc.get(row, 0) + a * b
            if any(acc.values()):
                raise CompositionNonzero("consecutive differentials do not compose to zero")


# ---------------------------------------------------------------------------
# normalized complex (internal value engine)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _normalized_tuples(group: FiniteGroupTable, n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(itertools.product(range(1, group.size), repeat=n))


@lru_cache(maxsize=None)
def _normalized_differential(group: FiniteGroupTable, n: int
                             ) -> tuple[tuple[dict[int, int], ...], int]:
    """Columns of d : N^n -> N^(n+1) on the normalized tuple basis."""
    k1 = group.size - 1
    ncols = k1 ** n
    nrows = k1 ** (n + 1)
    cols: list[dict[int, int]] = [dict() for _ in range(ncols)]
    table = group.table
    for v in itertools.product(range(1, group.size), repeat=n + 1):
        v_rank = 0
        for x in v:
            v_rank = v_rank * k1 + (x - 1)
        for w, sign in _faces(table, v):
            if any(x == 0 for x in w):
                continue  # lands outside the normalized subcomplex
            w_rank = 0
            for x in w:
                w_rank = w_rank * k1 + (x - 1)
            col = cols[w_rank]
            val = col.get(v_rank, 0) + sign
            if val:
                col[v_rank] = val
            elif v_rank in col:
                del col[v_rank]
    return tuple(cols), nrows


def _norm_rank(group: FiniteGroupTable, w: tuple[int, ...]) -> int:
    k1 = group.size - 1
    rank = 0
    for x in w:
        rank = rank * k1 + (x - 1)
    return rank


# ---------------------------------------------------------------------------
# per-summand cohomology with presentations
# ---------------------------------------------------------------------------

class _SummandCohomology:
    """H^s(K, Z/q) (q = 0 meaning Z) with representatives and class maps.

    ``gen_orders`` lists the orders of the chosen generators (0 = free);
    ``rep_vectors`` holds cocycle representatives over the normalized
    tuple basis; ``class_of_vector`` expresses a normalized cocycle in
    the generators.
    """

    def __init__(self, group: FiniteGroupTable, q: int, s: int):
        self.group = group
        self.q = q
        self.s = s
        if s == 0:
            self.gen_orders = (q,)
            self.rep_vectors = [{0: 1}]  # the empty tuple has rank 0
            self._mode = "degree0"
            self.value = from_fg(FgAbelianGroup.cyclic(q))
            return
        d_out_cols, d_out_rows = _normalized_differential(group, s)
        d_in_cols, _ = _normalized_differential(group, s - 1)
        c = len(d_out_cols)
        if q > 1 and _is_prime_cached(q):
            self._init_prime_field(d_out_cols, d_out_rows, d_in_cols, c)
        elif q > 1:
            self._init_prime_power(d_out_cols, d_out_rows, d_in_cols, c)
        else:
            self._init_generic(d_out_cols, d_out_rows, d_in_cols, c)

    # -- prime field route ---------------------------------------------------

    def _init_prime_field(self, d_out_cols, d_out_rows, d_in_cols, c):
        p = self.q
        a_out = np.zeros((d_out_rows, c), dtype=np.int64)
        for j, col in enumerate(d_out_cols):
            for i, v in col.items():
                a_out[i, j] = v % p
        kb = kernel_mod_p(a_out, p)
        b = np.zeros((c, len(d_in_cols)), dtype=np.int64)
        for j, col in enumerate(d_in_cols):
            for i, v in col.items():
                b[i, j] = v % p
        solver = FpQuotientSolver(b, kb, p)
        self._solver = solver
        self._mode = "prime"
        self.gen_orders = (p,) * solver.dim
        reps = solver.representatives()
        self.rep_vectors = [
            {i: int(reps[i, j]) for i in range(c) if reps[i, j]}
            for j in range(solver.dim)
        ]
        self.value = from_fg(FgAbelianGroup.from_orders([p] * solver.dim))

    # -- prime power route -----------------------------------------------------

    def _init_prime_power(self, d_out_cols, d_out_rows, d_in_cols, c):
        factors = factorint(self.q)
        (p, e), = factors.items()
        q = self.q
        a_in = np.zeros((c, len(d_in_cols)), dtype=np.int64)
        for j, col in enumerate(d_in_cols):
            for i, v in col.items():
                a_in[i, j] = v % q
        b_out = np.zeros((d_out_rows, c), dtype=np.int64)
        for j, col in enumerate(d_out_cols):
            for i, v in col.items():
                b_out[i, j] = v % q
        solver = PrimePowerQuotientSolver(a_in, b_out, p, e)
        self._solver = solver
        self._mode = "ppower"
        self.gen_orders = solver.gen_orders
        self.rep_vectors = [
            {i: int(vec[i]) for i in range(c) if vec[i]}
            for vec in solver.representatives()
        ]
        self.value = from_fg(FgAbelianGroup.from_orders(list(self.gen_orders)))

    # -- generic integer route -------------------------------------------------

    def _init_generic(self, d_out_cols, d_out_rows, d_in_cols, c):
        q = self.q
        row_orders = [q] * d_out_rows
        basis = kernel_with_row_orders(d_out_cols, d_out_rows, row_orders)
        ech = EchelonLattice(basis, c)
        bound_gens = list(d_in_cols)
        if q:
            bound_gens.extend({i: q} for i in range(c))
        w_cols = []
        for gen in bound_gens:
            sol = ech.solve(gen)
            if sol is None:
                raise CompositionNonzero("boundary escapes the cocycle lattice")
            w_cols.append(sol)
        u = len(basis)
        # dense diagonalization with transforms, for generators and classes
        w_dense = [[0] * len(w_cols) for _ in range(u)]
        for j, col in enumerate(w_cols):
            for i, v in col.items():
                w_dense[i][j] = v
        u_rows, _, u_inv, _ = abelian._snf_in_place(
            w_dense, u, len(w_cols), want_transforms=True, want_inverses=True
        )
        diag = [w_dense[i][i] if i < len(w_cols) else 0 for i in range(u)]
        self._mode = "generic"
        self._ech = ech
        self._basis = basis
        self._u_rows = u_rows if u_rows is not None else []
        keep = [i for i in range(u) if diag[i] != 1]
        self._keep = keep
        self.gen_orders = tuple(diag[i] for i in keep)
        self.rep_vectors = []
        for i in keep:
            # generator i of the diagonalized quotient: column i of U^-1
            # in kernel-basis coordinates, pushed down to the ambient level
            vec: dict[int, int] = {}
            for row in range(u):
                coef = u_inv[row][i]
                if coef:
                    for amb, x in basis[row].items():
                        nv = vec.get(amb, 0) + coef * x
                        if nv:
                            vec[amb] = nv
                        elif amb in vec:
                            del vec[amb]
            self.rep_vectors.append(vec)
        self.value = from_fg(FgAbelianGroup.from_orders(list(self.gen_orders)))

    # -- shared interface ------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.gen_orders)

    def class_of_vector(self, vec: dict[int, int]) -> tuple[int, ...]:
        if self._mode == "degree0":
            val = vec.get(0, 0)
            return ((val % self.q) if self.q else val,)
        if self._mode == "prime":
            dense = np.zeros(self._solver.ambient, dtype=np.int64)
            for i, v in vec.items():
                dense[i] = v % self.q
            return self._solver.class_of(dense)
        if self._mode == "ppower":
            dense = np.zeros(len(self._solver._beta), dtype=np.int64)
            for i, v in vec.items():
                dense[i] = v % self.q
            return self._solver.class_of(dense)
        sol = self._ech.solve(vec)
        if sol is None:
            raise CompositionNonzero("vector is not a cocycle of the complex")
        out = []
        for pos, i in enumerate(self._keep):
            row = self._u_rows[i]
            acc = 0
            for jj, coef in sol.items():
                if row[jj]:
                    acc += row[jj] * coef
            d = self.gen_orders[pos]
            out.append(acc % d if d else acc)
        return tuple(out)


@lru_cache(maxsize=None)
def _is_prime_cached(n: int) -> bool:
    return abelian.is_prime(n)


@lru_cache(maxsize=None)
def _summand_cohomology(group: FiniteGroupTable, q: int, s: int) -> _SummandCohomology:
    return _SummandCohomology(group, q, s)


# ---------------------------------------------------------------------------
# presentations for arbitrary finitely generated coefficients
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _CoefficientSlot:
    gen_index: int     # which generator of M
    gen_order: int     # its order in M (0 = free)
    q: int             # the elementary-divisor piece handled here
    embed: int         # multiplier Z/q -> Z/gen_order (1 for free)


def _coefficient_slots(m: FgAbelianGroup) -> tuple[_CoefficientSlot, ...]:
    slots = []
    for g_idx, d in enumerate(m.generator_orders()):
        if d == 0:
            slots.append(_CoefficientSlot(g_idx, 0, 0, 1))
            continue
        for p, e in sorted(factorint(d).items()):
            q = p ** e
            mcomp = d // q
            embed = (mcomp * pow(mcomp, -1, q)) % d
            slots.append(_CoefficientSlot(g_idx, d, q, embed))
    return tuple(slots)


class CohomologyClasses:
    """H^s(K, M) together with chosen cocycle representatives.

    Representatives are inhomogeneous cochains stored sparsely as
    {tuple of group elements: coefficient vector over the generators of
    M}; they vanish on tuples containing the identity.
    """

    def __init__(self, group: FiniteGroupTable, coefficients: FgAbelianGroup, degree: int):
        self.group = group
        self.coefficients = coefficients
        self.degree = degree
        self.slots = _coefficient_slots(coefficients)
        self.pieces = [
            _summand_cohomology(group, slot.q, degree) for slot in self.slots
        ]
        self.gen_orders: tuple[int, ...] = tuple(
            itertools.chain.from_iterable(p.gen_orders for p in self.pieces)
        )
        self.value: StructuredAbelian = direct_sum(
            *(p.value for p in self.pieces)
        )

    @property
    def num_generators(self) -> int:
        return len(self.gen_orders)

    def representatives(self) -> list[Cochain]:
        r = len(self.coefficients.generator_orders())
        tuples = {i: w for i, w in enumerate(_normalized_tuples(self.group, self.degree))}
        out: list[Cochain] = []
        for slot, piece in zip(self.slots, self.pieces):
            for vec in piece.rep_vectors:
                cochain: Cochain = {}
                for rank, val in vec.items():
                    coef = [0] * r
                    if slot.gen_order:
                        coef[slot.gen_index] = (slot.embed * val) % slot.gen_order
                    else:
                        coef[slot.gen_index] = val
                    cochain[tuples[rank]] = tuple(coef)
                out.append(cochain)
        return out

    def class_of(self, cochain: Cochain) -> tuple[int, ...]:
        coords: list[int] = []
        for slot, piece in zip(self.slots, self.pieces):
            vec: dict[int, int] = {}
            for w, coef in cochain.items():
                val = coef[slot.gen_index]
                if slot.q:
                    val %= slot.q
                if val:
                    vec[_norm_rank(self.group, w)] = val
            coords.extend(piece.class_of_vector(vec))
        return tuple(coords)


@lru_cache(maxsize=None)
def cohomology_classes(group: FiniteGroupTable, coefficients: FgAbelianGroup,
                       degree: int) -> CohomologyClasses:
    return CohomologyClasses(group, coefficients, degree)


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def group_cohomology(group: FiniteGroupTable, coefficients: FgAbelianGroup,
                     degree: int, budget: int = BAR_BUDGET) -> StructuredAbelian:
    """H^s(K, M) for the trivial action, in canonical form."""
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    if degree == 0:
        return from_fg(coefficients)
    r = max(len(coefficients.generator_orders()), 1)
    if group.size ** (degree + 1) * r > budget:
        raise BudgetExceeded(
            f"cochain level {degree + 1} for |K| = {group.size} exceeds the budget {budget}"
        )
    return cohomology_classes(group, coefficients, degree).value


def cyclic_closed_form(n: int, coefficients: StructuredAbelian,
                       degree: int) -> StructuredAbelian:
    """Cohomology of a cyclic group from the 2-periodic resolution.

    Independent oracle for the cochain engine: H^0 = M, odd degrees give
    the n-torsion of M, positive even degrees give M/nM.
    """
    if n < 1:
        raise ValueError("group order must be positive")
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    if degree == 0:
        return direct_sum(coefficients)
    if degree % 2:
        return n_torsion(coefficients, n)
    return mod_n(coefficients, n)


# ---------------------------------------------------------------------------
# symbolic vanishing rules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SymbolicVerdict:
    kind: str           # "vanishes" | "equals_coefficients" | "unknown"
    reason: str = ""
    detail: str = ""

    def is_vanishes(self) -> bool:
        return self.kind == "vanishes"


def _group_order_of(u: Union[ProfiniteDescriptor, FiniteGroupTable]) -> SupernaturalNumber:
    if isinstance(u, FiniteGroupTable):
        return SupernaturalNumber.from_int(u.size)
    return u.order()


def symbolic_cohomology(u: Union[ProfiniteDescriptor, FiniteGroupTable],
                        coefficients: StructuredAbelian, degree: int) -> SymbolicVerdict:
    """Decide H^s by imported vanishing criteria, without computing.

    Two criteria are encoded as trusted axioms, with their hypotheses
    checked here: torsion-free divisible coefficients have zero higher
    cohomology, and torsion coefficients supported away from the group
    order restrict injectively to the trivial group.
    """
    if degree == 0:
        return SymbolicVerdict("equals_coefficients", "degree-zero",
                               "trivial action: H^0 equals the coefficients")
    order = _group_order_of(u)
    reasons = set()
    for part in direct_sum(coefficients).parts():
        if part.is_torsion_free_divisible():
            reasons.add("divisible")
            continue
        if part.is_torsion():
            primes = part.torsion_primes()
            exps = [order.exponent(p) for p in primes]
            if all(not isinstance(e, SymbolicInfinity) and e == 0 for e in exps):
                reasons.add("coprime-torsion")
                continue
        return SymbolicVerdict("unknown", "no-rule",
                               f"no vanishing rule covers the summand {part.label()}")
    detail_bits = []
    if "divisible" in reasons:
        detail_bits.append(
            "torsion-free divisible coefficients have vanishing higher cohomology "
            "(imported result; hypotheses checked, conclusion trusted)"
        )
    if "coprime-torsion" in reasons:
        detail_bits.append(
            "torsion coefficients supported away from the group order vanish: "
            "restriction to the trivial subgroup is injective "
            "(imported result; hypotheses checked, conclusion trusted)"
        )
    if not detail_bits:
        detail_bits.append("the zero module has zero cohomology")
    return SymbolicVerdict("vanishes", "+".join(sorted(reasons)) or "zero",
                           "; ".join(detail_bits))


# ---------------------------------------------------------------------------
# inflation along quotient surjections
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InducedMap:
    """A homomorphism between presented cohomology groups.

    ``columns[i]`` lists the coordinates of the image of source
    generator i over the target generators; entries are meaningful
    modulo the corresponding target orders.
    """

    source_value: StructuredAbelian
    target_value: StructuredAbelian
    source_orders: tuple[int, ...]
    target_orders: tuple[int, ...]
    columns: tuple[tuple[int, ...], ...]

    def is_zero(self) -> bool:
        for col in self.columns:
            for v, d in zip(col, self.target_orders):
                if (v % d if d else v) != 0:
                    return False
        return True

    def is_isomorphism(self) -> bool:
        if self.source_value != self.target_value:
            return False
        t = len(self.target_orders)
        cols = [
            {i: v for i, v in enumerate(col) if v} for col in self.columns
        ]
        rel_cols = [
            {i: d} for i, d in enumerate(self.target_orders) if d
        ]
        diag = diagonal_values(cols + rel_cols, t)
        if len(diag) != t or any(abs(x) != 1 for x in diag):
            return False  # not surjective
        kernel = kernel_with_row_orders(cols, t, list(self.target_orders))
        for gen in kernel:
            for i, v in gen.items():
                d = self.source_orders[i]
                if (v % d if d else v) != 0:
                    return False  # not injective
        return True

    def then(self, later: "InducedMap") -> "InducedMap":
        """Composite source -> (this) -> (later)."""
        if self.target_orders != later.source_orders:
            raise ValueError("maps do not compose")
        cols = []
        for col in self.columns:
            acc = [0] * len(later.target_orders)
            for mid, v in enumerate(col):
                if v:
                    for tgt, w in enumerate(later.columns[mid]):
                        acc[tgt] += v * w
            cols.append(tuple(acc))
        return InducedMap(self.source_value, later.target_value,
                          self.source_orders, later.target_orders, tuple(cols))

    def equals(self, other: "InducedMap") -> bool:
        if self.target_orders != other.target_orders:
            return False
        if len(self.columns) != len(other.columns):
            return False
        for ca, cb in zip(self.columns, other.columns):
            for va, vb, d in zip(ca, cb, self.target_orders):
                diff = va - vb
                if (diff % d if d else diff) != 0:
                    return False
        return True


def identity_map(classes: CohomologyClasses) -> InducedMap:
    n = classes.num_generators
    cols = tuple(
        tuple(1 if i == j else 0 for i in range(n)) for j in range(n)
    )
    return InducedMap(classes.value, classes.value,
                      classes.gen_orders, classes.gen_orders, cols)


def inflation_map(source: FiniteGroupTable, target: FiniteGroupTable,
                  mapping: Sequence[int], coefficients: FgAbelianGroup,
                  degree: int, budget: int = BAR_BUDGET) -> InducedMap:
    """Induced map H^s(Q, M) -> H^s(Q', M) along a surjection Q' -> Q.

    ``mapping`` sends element indices of the source table Q' to the
    target table Q; cochains pull back through the s-fold product of the
    surjection.
    """
    verify_surjection(source, target, mapping)
    r = max(len(coefficients.generator_orders()), 1)
    for k in (source.size, target.size):
        if k ** (degree + 1) * r > budget:
            raise BudgetExceeded("cochain level exceeds the budget")
    small = cohomology_classes(target, coefficients, degree)
    big = cohomology_classes(source, coefficients, degree)
    if degree == 0:
        return identity_map(small)
    preimages: dict[int, list[int]] = {}
    for g_prime, g in enumerate(mapping):
        preimages.setdefault(g, []).append(g_prime)
    cols = []
    for rep in small.representatives():
        pulled: Cochain = {}
        for w, coef in rep.items():
            for w_prime in itertools.product(*(preimages.get(x, []) for x in w)):
                pulled[w_prime] = coef
        cols.append(big.class_of(pulled))
    return InducedMap(small.value, big.value, small.gen_orders, big.gen_orders,
                      tuple(cols))


# ---------------------------------------------------------------------------
# continuous cohomology as a colimit along inflation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UndeterminedAt:
    depth: int

    def label(self) -> str:
        return f"undetermined at depth {self.depth}"


CohomologyResult = Union[StructuredAbelian, UndeterminedAt]


@dataclass(frozen=True)
class StabilizationReport:
    status: str  # "symbolic" | "stabilized-iso" | "stabilized-zero" | "undetermined"
    certificate: str  # "symbolic" | "depth-evidence"
    detail: str
    levels: tuple[str, ...] = ()
    level_values: tuple[str, ...] = ()
    transitions: tuple[str, ...] = ()


def continuous_cohomology(group: ProfiniteDescriptor, coefficients: StructuredAbelian,
                          degree: int, tower: Optional[QuotientTower] = None,
                          depth: int = 3, budget: int = BAR_BUDGET,
                          table_budget: Optional[int] = None) -> CohomologyResult:
    result, _ = continuous_cohomology_report(
        group, coefficients, degree, tower=tower, depth=depth, budget=budget,
        table_budget=table_budget,
    )
    return result


def continuous_cohomology_report(
    group: ProfiniteDescriptor, coefficients: StructuredAbelian, degree: int,
    tower: Optional[QuotientTower] = None, depth: int = 3,
    budget: int = BAR_BUDGET, table_budget: Optional[int] = None,
) -> tuple[CohomologyResult, StabilizationReport]:
    """Continuous cohomology via symbolic rules or a stabilizing colimit.

    Symbolic verdicts win when available.  Otherwise the finite-level
    groups along the tower are compared through inflation; the colimit
    value is returned when the last two transitions are isomorphisms
    (that common value) or both zero maps (the zero group).  The
    certificate records that tower stabilization is evidence at the
    computed depth, not a symbolic proof.
    """
    verdict = symbolic_cohomology(group, coefficients, degree)
    if verdict.kind == "equals_coefficients":
        return direct_sum(coefficients), StabilizationReport(
            "symbolic", "symbolic", "degree zero equals the coefficients")
    if verdict.kind == "vanishes":
        return ZERO, StabilizationReport("symbolic", "symbolic", verdict.detail)

    norm = direct_sum(coefficients)
    symbolic_parts: list[StructuredAbelian] = []
    fg_parts: list[FgAbelianGroup] = []
    for part in norm.parts():
        if part.is_finitely_generated():
            fg_parts.append(part.as_fg())
            continue
        part_verdict = symbolic_cohomology(group, part, degree)
        if part_verdict.kind == "vanishes":
            continue
        return UndeterminedAt(0), StabilizationReport(
            "undetermined", "depth-evidence",
            f"no symbolic rule covers the non-finitely-generated summand {part.label()}",
        )
    fg = FgAbelianGroup.trivial()
    for part in fg_parts:
        fg = fg.direct_sum(part)

    if tower is None:
        tower = canonical_tower(group, depth, table_budget or TABLE_BUDGET)
    if tower.group != group:
        raise ValueError("tower belongs to a different group")

    r = max(len(fg.generator_orders()), 1)
    for q in tower.quotients:
        if q.size ** (degree + 1) * r > budget:
            raise BudgetExceeded(
                f"cochain level {degree + 1} for the tower quotient of order "
                f"{q.size} exceeds the budget {budget}"
            )
    classes = [
        cohomology_classes(q, fg, degree) for q in tower.quotients
    ]
    transitions = [
        inflation_map(tower.quotients[j + 1], tower.quotients[j],
                      tower.surjections[j], fg, degree, budget)
        for j in range(tower.depth)
    ]
    levels = tuple(q.label() for q in tower.quotients)
    level_values = tuple(c.value.label() for c in classes)
    kinds = []
    for t in transitions:
        if t.is_zero() and not (t.source_value.is_zero() and t.target_value.is_zero()):
            kinds.append("zero")
        elif t.is_isomorphism():
            kinds.append("iso")
        else:
            kinds.append("other")
    report_args = dict(levels=levels, level_values=level_values,
                       transitions=tuple(kinds))
    if len(kinds) >= 2 and kinds[-1] == kinds[-2] == "iso":
        return classes[-1].value, StabilizationReport(
            "stabilized-iso", "depth-evidence",
            f"the last two inflation maps at depth {tower.depth} are isomorphisms",
            **report_args,
        )
    if len(kinds) >= 2 and kinds[-1] == kinds[-2] == "zero":
        return ZERO, StabilizationReport(
            "stabilized-zero", "depth-evidence",
            f"the last two inflation maps at depth {tower.depth} are zero, so the "
            "colimit vanishes",
            **report_args,
        )
    return UndeterminedAt(tower.depth), StabilizationReport(
        "undetermined", "depth-evidence",
        f"the inflation system has not stabilized by depth {tower.depth}",
        **report_args,
    )
