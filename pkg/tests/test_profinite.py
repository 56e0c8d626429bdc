import pytest

from procohom.abelian import FgAbelianGroup
from procohom.errors import BudgetExceeded, InvalidSubgroup, NotAHomomorphism, \
    UnsupportedGroupShape
from procohom.profinite import (
    INFINITY,
    CanonicalFamily,
    CofinalCertificate,
    DeclaredChain,
    Finite,
    FiniteGroupTable,
    OpenNormalDescriptor,
    PrimeIndexedProduct,
    PrimeSet,
    Procyclic,
    Product,
    RefutedAt,
    SupernaturalNumber,
    canonical_tower,
    check_cofinal,
    closed_subgroup,
    index,
    induced_family,
    order,
    divides_order,
    quotient,
    verify_surjection,
    whole_group,
)


def symmetric3():
    """The symmetric group on three letters as a table (identity first)."""
    perms = [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]
    pos = {p: i for i, p in enumerate(perms)}

    def compose(p, q):  # (p o q)(x) = p[q[x]]
        return tuple(p[q[x]] for x in range(3))

    return FiniteGroupTable(
        tuple(tuple(pos[compose(p, q)] for q in perms) for p in perms)
    )


class TestPrimeSet:
    def test_membership(self):
        s = PrimeSet.of([2, 5])
        assert 2 in s and 5 in s and 3 not in s
        c = PrimeSet.all_except([2])
        assert 2 not in c and 3 in c and 97 in c

    def test_algebra(self):
        a = PrimeSet.of([2, 3])
        b = PrimeSet.all_except([3, 5])
        assert 3 in a.union(b) and 5 not in PrimeSet.of([2]).union(b)
        assert a.is_subset(PrimeSet.all_primes())
        assert not b.is_subset(a)
        assert PrimeSet.all_except([2]).minus_finite([3]).primes == frozenset({2, 3})

    def test_members_ascending(self):
        it = PrimeSet.all_except([3]).members()
        assert [next(it) for _ in range(4)] == [2, 5, 7, 11]

    def test_rejects_nonprime(self):
        with pytest.raises(ValueError):
            PrimeSet.of([4])


class TestSupernatural:
    def test_orders(self):
        assert order(Procyclic(2)).label() == "2^inf"
        assert order(Procyclic(2, 5)).label() == "2^inf"  # shift does not change order
        g = Product((Procyclic(2), Finite(FiniteGroupTable.cyclic(3))))
        assert order(g) == SupernaturalNumber.build({2: INFINITY, 3: 1})
        assert order(Finite(FiniteGroupTable.cyclic(6))) == SupernaturalNumber.from_int(6)
        pip = PrimeIndexedProduct(PrimeSet.of([2, 3, 5]))
        assert order(pip).infinite_set == PrimeSet.of([2, 3, 5])

    def test_infinite_product_order(self):
        pip = PrimeIndexedProduct(PrimeSet.all_except([2]), ((3, None),))
        o = order(pip)
        assert o.exponent(2) == 0
        assert o.exponent(3) == 0  # trivial local factor
        assert o.exponent(5) is INFINITY

    def test_divides_order(self):
        assert not divides_order(3, Procyclic(2))
        assert divides_order(2, Procyclic(2))
        assert divides_order(5, Product((Procyclic(2), Finite(FiniteGroupTable.cyclic(5)))))

    def test_multiplication_and_divides(self):
        a = SupernaturalNumber.from_int(12)
        b = SupernaturalNumber.build({2: INFINITY})
        ab = a * b
        assert ab.exponent(2) is INFINITY and ab.exponent(3) == 1
        assert a.divides(ab) and not ab.divides(a)


class TestFiniteGroupTable:
    def test_cyclic_properties(self):
        t = FiniteGroupTable.cyclic(6)
        t.verify()
        assert t.is_cyclic() and t.is_abelian()
        assert t.element_order(1) == 6
        assert t.inv(2) == 4

    def test_product_and_invariants(self):
        t = FiniteGroupTable.product(FiniteGroupTable.cyclic(2),
                                     FiniteGroupTable.cyclic(4))
        assert t.abelian_invariants() == FgAbelianGroup(0, (2, 4))
        t2 = FiniteGroupTable.product(FiniteGroupTable.cyclic(2),
                                      FiniteGroupTable.cyclic(3))
        assert t2.abelian_invariants() == FgAbelianGroup.cyclic(6)
        assert t2.label() == "Z/6"

    def test_nonabelian(self):
        s3 = symmetric3()
        s3.verify()
        assert not s3.is_abelian()
        assert s3.abelian_invariants() is None
        # {e, transposition} is a subgroup but not normal
        transposition = next(a for a in range(6) if s3.element_order(a) == 2)
        sub = frozenset({0, transposition})
        assert s3.is_subgroup(sub)
        assert not s3.is_normal(sub)
        # the alternating subgroup is normal with quotient Z/2
        alt = frozenset(a for a in range(6) if s3.element_order(a) in (1, 3))
        q, proj = s3.quotient_by(alt)
        assert q.size == 2 and proj[0] == 0

    def test_table_validation(self):
        with pytest.raises(ValueError):
            FiniteGroupTable(((0, 1), (1, 1)))  # 1*1 = 1 breaks inverses
        with pytest.raises(ValueError):
            FiniteGroupTable(((1, 0), (0, 1)))  # identity not at 0

    def test_verify_surjection(self):
        q4, q2 = FiniteGroupTable.cyclic(4), FiniteGroupTable.cyclic(2)
        verify_surjection(q4, q2, (0, 1, 0, 1))
        with pytest.raises(NotAHomomorphism):
            verify_surjection(q4, q2, (0, 0, 0, 0))
        with pytest.raises(NotAHomomorphism):
            verify_surjection(q4, q2, (0, 1, 1, 0))


class TestDescriptorsAndSubgroups:
    def test_quotients(self):
        zp = Procyclic(2)
        n = OpenNormalDescriptor.make(zp, {0: 2})
        assert quotient(zp, n).label() == "Z/4"
        assert index(zp, n) == 4
        g = Product((Procyclic(2), Finite(FiniteGroupTable.cyclic(3))))
        n2 = OpenNormalDescriptor.make(g, {0: 0, 1: frozenset({0})})
        assert quotient(g, n2).label() == "Z/3"
        assert quotient(g, whole_group(g)).size == 1
        n3 = OpenNormalDescriptor.make(g, {0: 2, 1: frozenset({0})})
        assert index(g, n3) == 12

    def test_invalid_subgroup(self):
        s3 = Finite(symmetric3())
        transposition = next(a for a in range(6)
                             if symmetric3().element_order(a) == 2)
        with pytest.raises(InvalidSubgroup):
            OpenNormalDescriptor.make(s3, {0: frozenset({0, transposition})})

    def test_member_group(self):
        g = Product((Procyclic(2), Finite(FiniteGroupTable.cyclic(3))))
        n = OpenNormalDescriptor.make(g, {0: 3, 1: frozenset({0})})
        assert n.member_group().label() == "8Z_2"
        n2 = OpenNormalDescriptor.make(g, {0: 1})
        assert n2.member_group().label() == "2Z_2 x Z/3"

    def test_closed_subgroup(self):
        g = Product((Procyclic(2), Procyclic(3)))
        h = closed_subgroup(g, {2: 1, 3: None})
        assert h == Procyclic(2, 1)
        assert closed_subgroup(g, {2: None, 3: None}).is_trivial()
        assert closed_subgroup(g, {}) == g
        pip = PrimeIndexedProduct(PrimeSet.of([2, 3, 5]))
        h2 = closed_subgroup(pip, {2: 2, 5: None})
        assert h2.shift_at(2) == 2 and h2.shift_at(5) is None and h2.shift_at(3) == 0
        with pytest.raises(UnsupportedGroupShape):
            closed_subgroup(g, {5: 1})
        with pytest.raises(UnsupportedGroupShape):
            closed_subgroup(Finite(FiniteGroupTable.cyclic(4)), {2: 1})


class TestCanonicalTower:
    def test_procyclic_tower(self):
        tower = canonical_tower(Procyclic(3), 3)
        assert [q.label() for q in tower.quotients] == ["1", "Z/3", "Z/9", "Z/27"]
        assert [k.index() for k in tower.kernels] == [1, 3, 9, 27]

    def test_product_tower_matches_pinned_shape(self):
        g = Product((Procyclic(2), Finite(FiniteGroupTable.cyclic(3))))
        tower = canonical_tower(g, 2)
        assert [q.size for q in tower.quotients] == [3, 6, 12]
        inv = tower.quotients[1].abelian_invariants()
        assert inv == FgAbelianGroup.cyclic(6)

    def test_finite_constant_tower(self):
        g = Finite(FiniteGroupTable.cyclic(5))
        tower = canonical_tower(g, 3)
        assert all(q.size == 5 for q in tower.quotients)
        assert all(k.index() == 5 for k in tower.kernels)

    def test_prime_indexed_tower_within_budget(self):
        pip = PrimeIndexedProduct(PrimeSet.of([2, 3, 5]))
        tower = canonical_tower(pip, 4)
        assert all(q.size <= 10**4 for q in tower.quotients)
        assert tower.quotients[-1].size == 144

    def test_infinite_prime_indexed_tower(self):
        g = PrimeIndexedProduct(PrimeSet.all_except([2]))
        tower = canonical_tower(g, 4)
        assert [q.size for q in tower.quotients] == [1, 3, 9, 135, 2025]
        for kernel in tower.kernels:
            lhs = SupernaturalNumber.from_int(kernel.index()) * \
                order(kernel.member_group())
            assert lhs == order(g)
        assert tower.kernels[0].label() == "the whole group"

    def test_budget_guard(self):
        with pytest.raises(BudgetExceeded):
            canonical_tower(Procyclic(2), 5, table_budget=16)

    def test_supernatural_identity_along_towers(self):
        fixtures = [
            Procyclic(2),
            Product((Procyclic(2), Finite(FiniteGroupTable.cyclic(3)))),
            PrimeIndexedProduct(PrimeSet.of([2, 3, 5])),
        ]
        for g in fixtures:
            tower = canonical_tower(g, 4)
            for kernel in tower.kernels:
                lhs = SupernaturalNumber.from_int(kernel.index()) * \
                    kernel.member_group().order()
                assert lhs == order(g)


class TestCofinalFamilies:
    def make_proper_sub(self):
        g = Product((Procyclic(2), Finite(FiniteGroupTable.cyclic(3))))
        members = tuple(
            OpenNormalDescriptor.make(g, {0: m, 1: frozenset({0})})
            for m in range(3)
        )
        return g, DeclaredChain(members)

    def test_recognized_pattern_certified(self):
        g, fam = self.make_proper_sub()
        cert = check_cofinal(fam, g, 3)
        assert isinstance(cert, CofinalCertificate) and cert.kind == "symbolic"

    def test_canonical_always_certified(self):
        for g in [Procyclic(2), Finite(FiniteGroupTable.cyclic(6)),
                  PrimeIndexedProduct(PrimeSet.of([2, 3]))]:
            cert = check_cofinal(CanonicalFamily(), g, 4)
            assert isinstance(cert, CofinalCertificate) and cert.kind == "symbolic"

    def test_refuted_full_finite_factor(self):
        g = Product((Procyclic(2), Finite(FiniteGroupTable.cyclic(3))))
        fam = DeclaredChain(tuple(
            OpenNormalDescriptor.make(g, {0: m}) for m in range(3)
        ))
        result = check_cofinal(fam, g, 3)
        assert isinstance(result, RefutedAt)
        assert result.level == 0
        assert result.witness == "Z_2 x {e}"

    def test_refuted_whole_group_family(self):
        g = Finite(FiniteGroupTable.cyclic(6))
        result = check_cofinal(DeclaredChain((whole_group(g),)), g, 2)
        assert isinstance(result, RefutedAt)
        assert result.witness == "{e}"

    def test_chain_must_decrease(self):
        g = Procyclic(2)
        with pytest.raises(InvalidSubgroup):
            DeclaredChain((
                OpenNormalDescriptor.make(g, {0: 2}),
                OpenNormalDescriptor.make(g, {0: 1}),
            ))

    def test_induced_family(self):
        g, fam = self.make_proper_sub()
        fam = DeclaredChain(fam.members + (
            OpenNormalDescriptor.make(g, {0: 3, 1: frozenset({0})}),
        ))
        u_prime = OpenNormalDescriptor.make(g, {0: 2, 1: frozenset({0})})
        base, induced = induced_family(u_prime, fam)
        assert base.label() == "4Z_2"
        assert [m.label() for m in induced.members] == ["4Z_2", "8Z_2"]

    def test_induced_family_canonical(self):
        u = OpenNormalDescriptor.make(Procyclic(5), {0: 1})
        base, induced = induced_family(u, CanonicalFamily())
        assert base == Procyclic(5, 1)
        assert isinstance(induced, CanonicalFamily)

    def test_induced_family_finite_identity(self):
        g = Finite(FiniteGroupTable.cyclic(4))
        fam = DeclaredChain((OpenNormalDescriptor.make(g, {0: frozenset({0})}),))
        base, induced = induced_family(whole_group(g), fam)
        assert base == g
        assert induced.members[0].index() == 4
