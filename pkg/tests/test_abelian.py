import pytest
from hypothesis import given, settings, strategies as st

from procohom.abelian import (
    OMEGA,
    Fg,
    FgAbelianGroup,
    IntegerMatrix,
    PPrimary,
    RationalVS,
    ZERO,
    cokernel,
    decompose_div_plus_torsion,
    direct_sum,
    homology_at,
    mod_n,
    n_torsion,
    smith_normal_form,
)
from procohom.errors import BudgetExceeded, CompositionNonzero


def mat(rows):
    return IntegerMatrix.from_rows(rows)


small_matrices = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(
            st.lists(st.integers(-9, 9), min_size=n, max_size=n),
            min_size=m, max_size=m,
        )
    )
)


class TestSmithNormalForm:
    def test_example_2x2(self):
        d, u, v = smith_normal_form(mat([[2, 4], [6, 8]]))
        assert d.diagonal() == (2, 4)
        assert (u @ mat([[2, 4], [6, 8]]) @ v).entries == d.entries

    def test_identity(self):
        d, u, v = smith_normal_form(IntegerMatrix.identity(3))
        assert d.entries == IntegerMatrix.identity(3).entries
        assert u.entries == IntegerMatrix.identity(3).entries
        assert v.entries == IntegerMatrix.identity(3).entries

    def test_zero(self):
        d, _, _ = smith_normal_form(IntegerMatrix.zeros(2, 2))
        assert d.is_zero()

    @given(small_matrices)
    @settings(max_examples=120, deadline=None)
    def test_transform_identity_and_chain(self, rows):
        a = mat(rows)
        d, u, v = smith_normal_form(a)
        assert (u @ a @ v).entries == d.entries
        diag = [x for x in d.diagonal()]
        assert all(x >= 0 for x in diag)
        nonzero = [x for x in diag if x]
        for x, y in zip(nonzero, nonzero[1:]):
            assert y % x == 0
        # zeros only at the end
        seen_zero = False
        for x in diag:
            if x == 0:
                seen_zero = True
            else:
                assert not seen_zero

    @given(st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3),
                    min_size=3, max_size=3))
    @settings(max_examples=60, deadline=None)
    def test_determinant_preserved(self, rows):
        a = mat(rows)
        d, _, _ = smith_normal_form(a)

        def det3(m):
            e = m.entries
            return (e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1])
                    - e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0])
                    + e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0]))

        prod = 1
        for x in d.diagonal():
            prod *= x
        assert abs(det3(a)) == prod

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            IntegerMatrix.zeros(10**4, 10**4)


class TestCokernelAndHomology:
    def test_cokernel_examples(self):
        assert cokernel(mat([[2]])) == FgAbelianGroup.cyclic(2)
        assert cokernel(mat([[2, 0], [0, 3]])) == FgAbelianGroup.cyclic(6)
        assert cokernel(IntegerMatrix.zeros(2, 2)) == FgAbelianGroup.free(2)

    def test_homology_examples(self):
        assert homology_at(IntegerMatrix.zeros(1, 1), mat([[7]])) == \
            FgAbelianGroup.cyclic(7)
        assert homology_at(IntegerMatrix.zeros(1, 1), mat([[2]])) == \
            FgAbelianGroup.cyclic(2)
        got = homology_at(IntegerMatrix.zeros(1, 2), mat([[2, 4], [6, 8]]))
        assert got == FgAbelianGroup(0, (2, 4))

    def test_composition_check(self):
        with pytest.raises(CompositionNonzero):
            homology_at(mat([[1]]), mat([[1]]))
        with pytest.raises(CompositionNonzero):
            homology_at(mat([[1, 0]]), mat([[1]]))

    @given(small_matrices)
    @settings(max_examples=60, deadline=None)
    def test_cokernel_agrees_with_homology_at_zero(self, rows):
        a = mat(rows)
        assert cokernel(a) == homology_at(IntegerMatrix.zeros(0, a.rows), a)

    def test_middle_homology_of_exact_complex(self):
        # Z --(1 0)^T--> Z^2 --(0 1)--> Z is exact in the middle
        d_in = mat([[1], [0]])
        d_out = mat([[0, 1]])
        assert homology_at(d_out, d_in) == FgAbelianGroup.trivial()


class TestFgAbelianGroup:
    def test_canonical_form(self):
        assert FgAbelianGroup.from_orders([2, 3]) == FgAbelianGroup.cyclic(6)
        assert FgAbelianGroup.from_orders([2, 4]) == FgAbelianGroup(0, (2, 4))
        assert FgAbelianGroup.from_orders([12, 60]).invariant_factors == (12, 60)
        assert FgAbelianGroup.from_orders([0, 30, 4]).invariant_factors == (2, 60)

    def test_chain_validation(self):
        with pytest.raises(ValueError):
            FgAbelianGroup(0, (4, 2))
        with pytest.raises(ValueError):
            FgAbelianGroup(0, (1,))

    def test_labels(self):
        assert FgAbelianGroup(1, (2,)).label() == "Z + Z/2"
        assert FgAbelianGroup.trivial().label() == "0"


fg_groups = st.lists(st.sampled_from([0, 0, 2, 3, 4, 5, 6, 8, 9]),
                     min_size=0, max_size=4).map(FgAbelianGroup.from_orders)


class TestStructuredAbelian:
    def test_normal_form_merges(self):
        m = direct_sum(Fg(FgAbelianGroup.cyclic(2)), Fg(FgAbelianGroup.cyclic(3)))
        assert m == Fg(FgAbelianGroup.cyclic(6))
        m = direct_sum(RationalVS(1), RationalVS(2))
        assert m == RationalVS(3)
        m = direct_sum(RationalVS(OMEGA), RationalVS(1))
        assert m == RationalVS(OMEGA)

    def test_infinite_multiplicities_absorb(self):
        pp = PPrimary(2, ((1, OMEGA),))
        m = direct_sum(pp, Fg(FgAbelianGroup.cyclic(2)))
        assert m == PPrimary(2, ((1, OMEGA),))
        m2 = direct_sum(pp, Fg(FgAbelianGroup.cyclic(4)))
        assert m2 == PPrimary(2, ((1, OMEGA), (2, 1)))

    def test_torsion_ops_examples(self):
        z4 = Fg(FgAbelianGroup.cyclic(4))
        assert n_torsion(z4, 2) == Fg(FgAbelianGroup.cyclic(2))
        assert n_torsion(RationalVS(1), 6) == ZERO
        assert n_torsion(Fg(FgAbelianGroup.cyclic(6)), 2) == Fg(FgAbelianGroup.cyclic(2))
        assert mod_n(z4, 2) == Fg(FgAbelianGroup.cyclic(2))
        assert mod_n(RationalVS(1), 5) == ZERO
        assert mod_n(Fg(FgAbelianGroup.free(2)), 3) == Fg(FgAbelianGroup(0, (3, 3)))

    def test_torsion_ops_on_p_primary(self):
        pp = PPrimary(3, ((2, OMEGA),))  # (Z/9)^omega
        assert n_torsion(pp, 3) == PPrimary(3, ((1, OMEGA),))
        assert mod_n(pp, 3) == PPrimary(3, ((1, OMEGA),))
        assert n_torsion(pp, 2) == ZERO

    @given(fg_groups, fg_groups, st.integers(1, 12))
    @settings(max_examples=80, deadline=None)
    def test_ops_commute_with_direct_sum(self, a, b, n):
        ma, mb = Fg(a), Fg(b)
        both = direct_sum(ma, mb)
        assert n_torsion(both, n) == direct_sum(n_torsion(ma, n), n_torsion(mb, n))
        assert mod_n(both, n) == direct_sum(mod_n(ma, n), mod_n(mb, n))

    def test_decompose_examples(self):
        m = direct_sum(RationalVS(1), Fg(FgAbelianGroup.cyclic(3)))
        d, t = decompose_div_plus_torsion(m, [3])
        assert d == RationalVS(1) and t == Fg(FgAbelianGroup.cyclic(3))
        assert decompose_div_plus_torsion(Fg(FgAbelianGroup.free(1)), [2]) is None
        assert decompose_div_plus_torsion(m, [2]) is None  # 3-torsion outside J
        assert decompose_div_plus_torsion(ZERO, [2]) == (ZERO, ZERO)

    def test_decompose_wedge_shape(self):
        # rational part plus torsion over several primes, like a wedge of
        # rational pieces and Morava K-theories in degree zero
        m = direct_sum(
            RationalVS(3),
            Fg(FgAbelianGroup.cyclic(2)),
            Fg(FgAbelianGroup.cyclic(5)),
            Fg(FgAbelianGroup.cyclic(11)),
        )
        result = decompose_div_plus_torsion(m, [2, 5, 11])
        assert result is not None
        d, t = result
        assert d == RationalVS(3)
        assert t.torsion_primes() == frozenset({2, 5, 11})

    @given(fg_groups, st.sets(st.sampled_from([2, 3, 5]), min_size=1))
    @settings(max_examples=60, deadline=None)
    def test_decompose_recombines(self, a, j):
        m = direct_sum(RationalVS(1), Fg(a))
        result = decompose_div_plus_torsion(m, j)
        if result is not None:
            d, t = result
            assert direct_sum(d, t) == m

    @given(fg_groups, fg_groups)
    @settings(max_examples=60, deadline=None)
    def test_normal_form_idempotent_and_commutative(self, a, b):
        ma, mb = Fg(a), Fg(b)
        both = direct_sum(ma, mb)
        assert direct_sum(both) == both
        assert direct_sum(mb, ma) == both
        assert direct_sum(both, ZERO) == both
