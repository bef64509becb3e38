import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from orbitscope import (
    IndexSet,
    NormTag,
    OpenCone,
    SeqVector,
    cone_contains,
    cone_sample,
    norm,
    norm_gt,
    norm_lt,
)
from orbitscope.errors import IndexSetMismatch, OrbitscopeError
from orbitscope.numeric import Mode, numeric_mode, to_float


def e(i, c=1, index_set=IndexSet.NATURALS):
    return SeqVector.basis(index_set, i, c)


class TestNorm:
    def test_unit_basis_sup(self):
        assert norm(e(0), NormTag.PINF) == 1

    def test_zero_vector(self):
        assert norm(SeqVector.zero(IndexSet.NATURALS), NormTag.P2) == 0

    def test_two_unit_entries_l1(self):
        assert norm(e(0) + e(1), NormTag.P1) == 2

    def test_zero_iff_zero_vector(self):
        v = e(3, Fraction(1, 7))
        assert norm(v, NormTag.P1) > 0
        assert norm(v - v, NormTag.P1) == 0

    def test_exact_p2_perfect_square(self):
        v = SeqVector.from_entries(IndexSet.NATURALS, {0: 3, 1: 4})
        assert norm(v, NormTag.P2) == 5

    def test_complex_entry_sup(self):
        v = SeqVector.from_entries(IndexSet.INTEGERS, {0: (1, 1)})
        # |1+i| = sqrt(2): exact comparisons still decide strictly
        assert norm_lt(v, NormTag.PINF, Fraction(15, 10))
        assert norm_gt(v, NormTag.PINF, Fraction(14, 10))

    def test_exact_p1_mixed_irrational(self):
        v = SeqVector.from_entries(IndexSet.INTEGERS, {0: (1, 1), 1: 2})
        # sqrt(2) + 2 in (3.41, 3.42)
        assert norm_lt(v, NormTag.P1, Fraction(342, 100))
        assert norm_gt(v, NormTag.P1, Fraction(341, 100))


@settings(max_examples=60, deadline=None)
@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(1, 9),
       st.sampled_from(list(NormTag)))
def test_norm_homogeneous_and_triangle(a, b, lam, p):
    u = SeqVector.from_entries(IndexSet.INTEGERS, {0: Fraction(a, 7), 3: Fraction(b, 5)})
    v = SeqVector.from_entries(IndexSet.INTEGERS, {0: Fraction(b, 3), 5: Fraction(a, 2)})
    scaled = norm(u.scale(lam), p)
    direct = lam * norm(u, p)
    if isinstance(scaled, Fraction) and isinstance(direct, Fraction):
        assert scaled == direct
    else:
        assert abs(to_float(scaled) - to_float(direct)) <= 1e-12 * max(1.0, to_float(direct))
    lhs = to_float(norm(u + v, p))
    assert lhs <= to_float(norm(u, p)) + to_float(norm(v, p)) + 1e-12


class TestCone:
    def setup_method(self):
        self.c = e(0, 2)
        self.C = OpenCone(self.c, 1, NormTag.P2)

    def test_center_is_member(self):
        assert cone_contains(self.C, self.c)

    def test_negated_center_is_not(self):
        assert not cone_contains(self.C, self.c.scale(-1))

    def test_closed_form_derived_example(self):
        # c = 2 e_0, r = 1, x = e_0 + 0.4 e_1:
        # <x,c> = 2, <x,c>^2 = 4 > ||x||^2 (||c||^2 - r^2) = 1.16 * 3 = 3.48
        x = SeqVector.from_entries(IndexSet.NATURALS, {0: 1, 1: Fraction(2, 5)})
        ip = Fraction(2)
        lhs = ip * ip
        rhs = (Fraction(1) + Fraction(4, 25)) * Fraction(3)
        assert lhs == 4 and rhs == Fraction(348, 100)
        assert lhs > rhs
        assert cone_contains(self.C, x)

    def test_zero_vector_never_member(self):
        assert not cone_contains(self.C, SeqVector.zero(IndexSet.NATURALS))
        Cinf = OpenCone(self.c, 1, NormTag.PINF)
        assert not cone_contains(Cinf, SeqVector.zero(IndexSet.NATURALS))

    def test_membership_invariant_under_positive_scaling(self):
        rng = random.Random(7)
        x = SeqVector.from_entries(IndexSet.NATURALS, {0: 1, 1: Fraction(2, 5)})
        out = SeqVector.from_entries(IndexSet.NATURALS, {1: 3})
        for _ in range(40):
            lam = Fraction(str(round(rng.uniform(1e-6, 1e6), 4)))
            if lam <= 0:
                continue
            assert cone_contains(self.C, x.scale(lam))
            assert not cone_contains(self.C, out.scale(lam))

    def test_cone_requires_center_off_ball(self):
        with pytest.raises(OrbitscopeError):
            OpenCone(e(0, 1), 2, NormTag.P2)

    def test_index_set_mismatch(self):
        with pytest.raises(IndexSetMismatch):
            cone_contains(self.C, SeqVector.basis(IndexSet.INTEGERS, 0))

    @pytest.mark.parametrize("p", [NormTag.P1, NormTag.PINF])
    def test_minimization_norms(self, p):
        C = OpenCone(e(0, 2), 1, p)
        assert cone_contains(C, e(0, 5))
        assert cone_contains(C, e(0, 2) + e(1, Fraction(1, 4)))
        assert not cone_contains(C, e(1, 3))

    def test_closed_form_agrees_with_minimization(self):
        rng = random.Random(123)
        agree = 0
        for _ in range(300):
            x = SeqVector.from_entries(
                IndexSet.NATURALS,
                {i: Fraction(rng.randint(-40, 40), 10) for i in range(3)})
            if x.is_zero:
                continue
            a = cone_contains(self.C, x, method="closed-form")
            b = cone_contains(self.C, x, method="minimize")
            assert a == b
            agree += 1
        assert agree > 250


class TestConeSample:
    def test_samples_are_members_and_deterministic(self):
        C = OpenCone(e(0, 2) + e(2, 1), Fraction(1, 2), NormTag.P2)
        first = cone_sample(C, 30, seed=11)
        second = cone_sample(C, 30, seed=11)
        assert len(first) == 30
        assert all(cone_contains(C, v) for v in first)
        assert [v.key() for v in first] == [v.key() for v in second]

    def test_different_seed_differs(self):
        C = OpenCone(e(0, 2), 1, NormTag.PINF)
        a = cone_sample(C, 5, seed=1)
        b = cone_sample(C, 5, seed=2)
        assert [v.key() for v in a] != [v.key() for v in b]


class TestVector:
    def test_canonical_sparse_form(self):
        v = SeqVector.from_entries(IndexSet.INTEGERS, {0: 1, 5: 0})
        assert v.support == [0]

    def test_naturals_reject_negative_index(self):
        with pytest.raises(IndexSetMismatch):
            SeqVector.from_entries(IndexSet.NATURALS, {-1: 1})

    def test_add_across_index_sets_rejected(self):
        with pytest.raises(IndexSetMismatch):
            e(0) + SeqVector.basis(IndexSet.INTEGERS, 0)

    def test_json_roundtrip_exact(self):
        v = SeqVector.from_entries(IndexSet.INTEGERS,
                                   {-2: Fraction(3, 4), 1: (Fraction(1, 3), 2)})
        obj = v.to_jsonable()
        assert obj["index_set"] == "Z"
        assert obj["entries"][0] == [-2, "3/4", "0"]
        back = SeqVector.from_jsonable(obj)
        assert back == v

    def test_json_roundtrip_float(self):
        with numeric_mode(Mode.FLOAT64):
            v = SeqVector.from_entries(IndexSet.NATURALS, {0: 0.5, 3: -2.25})
            back = SeqVector.from_jsonable(v.to_jsonable())
            assert back == v

    def test_entries_sorted_by_index(self):
        v = SeqVector.from_entries(IndexSet.INTEGERS, {5: 1, -3: 2, 0: 4})
        assert [item[0] for item in v.to_jsonable()["entries"]] == [-3, 0, 5]


class TestFloatPolicy:
    def test_strict_inequality_shaved_by_tolerance(self):
        with numeric_mode(Mode.FLOAT64):
            v = SeqVector.basis(IndexSet.NATURALS, 0, 1.0)
            assert norm_lt(v, NormTag.PINF, 1.0 + 1e-6)
            assert not norm_lt(v, NormTag.PINF, 1.0)
            assert not norm_lt(v, NormTag.PINF, 1.0 + 1e-10)
