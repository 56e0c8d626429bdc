import pytest

from procohom.abelian import Fg, FgAbelianGroup, RationalVS, ZERO, direct_sum
from procohom.spectra import (
    HQ,
    GradedPiece,
    MoravaK,
    Shift,
    Wedge,
    degree_classes,
    graded_shape,
    homotopy_of,
    is_bounded_above,
    torsion_profile,
)

F2 = Fg(FgAbelianGroup.cyclic(2))
F3 = Fg(FgAbelianGroup.cyclic(3))


class TestHomotopy:
    def test_morava_periodicity(self):
        k12 = MoravaK(1, 2)
        assert k12.period == 2
        assert homotopy_of(k12, 2) == F2
        assert homotopy_of(k12, -6) == F2
        assert homotopy_of(k12, 3) == ZERO
        k13 = MoravaK(1, 3)
        assert k13.period == 4
        assert homotopy_of(k13, 2) == ZERO
        assert homotopy_of(k13, 4) == F3
        k23 = MoravaK(2, 3)
        assert k23.period == 16

    def test_morava_nonzero_iff_period_divides(self):
        k = MoravaK(1, 5)
        for t in range(-20, 21):
            value = homotopy_of(k, t)
            assert (t % k.period == 0) == (not value.is_zero())
            if not value.is_zero():
                assert value == Fg(FgAbelianGroup.cyclic(5))

    def test_hq(self):
        assert homotopy_of(HQ(), 0) == RationalVS(1)
        assert homotopy_of(HQ(), 1) == ZERO

    def test_shift_and_piece(self):
        x = Shift(3, HQ())
        assert homotopy_of(x, 3) == RationalVS(1)
        assert homotopy_of(x, 0) == ZERO
        piece = GradedPiece(Fg(FgAbelianGroup.cyclic(2)), -3)
        assert homotopy_of(piece, -3) == F2

    def test_wedge_additivity(self):
        x = Wedge((HQ(), MoravaK(1, 2)))
        for t in range(-6, 7):
            assert homotopy_of(x, t) == direct_sum(
                homotopy_of(HQ(), t), homotopy_of(MoravaK(1, 2), t))

    def test_rejects_bad_parameters(self):
        with pytest.raises(ValueError):
            MoravaK(0, 2)
        with pytest.raises(ValueError):
            MoravaK(1, 4)


class TestBoundedness:
    def test_hq_bounded(self):
        assert is_bounded_above(HQ()) == (True, 0)

    def test_morava_unbounded(self):
        assert is_bounded_above(MoravaK(2, 5))[0] is False

    def test_wedge_union_of_supports(self):
        assert is_bounded_above(Wedge((HQ(), MoravaK(1, 2))))[0] is False
        bounded = Wedge((HQ(), GradedPiece(F2, -3)))
        assert is_bounded_above(bounded) == (True, 0)

    def test_witness_for_low_piece(self):
        answer, witness = is_bounded_above(GradedPiece(F2, -3))
        assert answer is True and witness == -3
        # every degree above the witness is zero
        for t in range(witness + 1, witness + 10):
            assert homotopy_of(GradedPiece(F2, -3), t).is_zero()


class TestTorsionProfile:
    def test_hq(self):
        assert torsion_profile(HQ(), 0, [2]) == (RationalVS(1), ZERO)

    def test_not_decomposable(self):
        x = GradedPiece(Fg(FgAbelianGroup.free(1)), 0)
        assert torsion_profile(x, 0, [2]) is None

    def test_wedge_shape(self):
        x = Wedge((HQ(), HQ(), MoravaK(1, 2), MoravaK(1, 5)))
        d, t = torsion_profile(x, 0, [2, 5])
        assert d == RationalVS(2)
        assert t.torsion_primes() == frozenset({2, 5})
        # away from degree 0 only the periodic parts survive
        d2, t2 = torsion_profile(x, 8, [2, 5])
        assert d2 == ZERO
        assert t2 == direct_sum(F2, Fg(FgAbelianGroup.cyclic(5)))


class TestDegreeClasses:
    def test_cover_all_degrees(self):
        x = Wedge((HQ(), MoravaK(1, 2), MoravaK(1, 3)))
        classes = degree_classes(x)
        assert classes is not None
        # verify each class value against direct evaluation at its sample
        for cls in classes:
            assert homotopy_of(x, cls.sample) == cls.value
        # spot check: membership-based lookup agrees with homotopy_of
        shape = graded_shape(x)
        assert shape.periodic_lines
        for t in range(-10, 11):
            expected = homotopy_of(x, t)
            matches = [c for c in classes if _belongs(c, t, classes)]
            assert matches, t
            assert matches[0].value == expected

    def test_finite_support_single_class(self):
        classes = degree_classes(GradedPiece(F2, 5))
        values = {c.sample: c.value for c in classes}
        assert values[5] == F2


def _belongs(cls, t, classes):
    # exceptional degree classes take precedence over residue classes
    exceptional = {c.sample for c in classes if c.description.startswith("degree t =")}
    if t in exceptional:
        return cls.description == f"degree t = {t}"
    if cls.description.startswith("degrees t = "):
        rest = cls.description.split("degrees t = ")[1]
        r, mod = rest.split(" mod ")
        mod = int(mod.split(" ")[0])
        return t % mod == int(r)
    return False
