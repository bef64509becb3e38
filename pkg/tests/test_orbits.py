from fractions import Fraction

import pytest

from orbitscope import (
    Constant,
    IndexSet,
    NormTag,
    OpenCone,
    SeqVector,
    Shape,
    ShiftOperator,
    apply_power,
    coarse_density_report,
    coarse_orbit_contains,
    cone_sample,
    make_coarse_witness,
    norm,
    orbit,
    orbit_points_in_ball,
    prop32_operator,
    rescale_coarse_witness,
)
from orbitscope.errors import OrbitscopeError, VerificationFailed

from conftest import nfold_apply


def ei(i, c=1):
    return SeqVector.basis(IndexSet.INTEGERS, i, c)


def en(i, c=1):
    return SeqVector.basis(IndexSet.NATURALS, i, c)


def doubling():
    return ShiftOperator(Shape.UNILATERAL_BACKWARD, IndexSet.NATURALS, Constant(2))


class TestOrbit:
    def test_prop32_base_drifts_left(self):
        trace = orbit(prop32_operator(), ei(0), 5, NormTag.PINF)
        assert [p.support for p in trace.points] == [[0], [-1], [-2], [-3], [-4], [-5]]
        assert all(n == 1 for n in trace.norms)

    def test_zero_horizon(self):
        x = ei(3, 7)
        trace = orbit(prop32_operator(), x, 0)
        assert trace.points == (x,)

    def test_doubling_orbit_matches_repeated_apply(self):
        expected = [en(3), en(2, 2), en(1, 4), en(0, 8),
                    SeqVector.zero(IndexSet.NATURALS)]
        trace = orbit(doubling(), en(3), 4)
        assert list(trace.points) == expected
        for n in range(5):
            assert trace.points[n] == nfold_apply(doubling(), n, en(3))

    def test_csv_shape(self):
        text = orbit(prop32_operator(), ei(0), 3, NormTag.PINF).to_csv()
        lines = text.strip().splitlines()
        assert lines[0] == "n,norm,support_min,support_max,entries_json"
        assert len(lines) == 5
        assert lines[1].startswith("0,1.0,0,0")


class TestCoarseOrbit:
    def test_self_witness_at_time_zero(self):
        w = coarse_orbit_contains(prop32_operator(), ei(2, 3), Fraction(1, 10),
                                  ei(2, 3), 5, NormTag.PINF)
        assert w.time == 0
        assert w.achieved_distance == 0

    def test_exact_hit_on_drifted_basis(self):
        w = coarse_orbit_contains(prop32_operator(), ei(0), Fraction(1, 2),
                                  ei(-3), 10, NormTag.PINF)
        assert w.time == 3
        assert w.achieved_distance == 0

    def test_absent_up_to_horizon(self):
        # oracle: orbit points are e_{-n}, each at sup-distance 5 from 5 e_0
        T = prop32_operator()
        target = ei(0, 5)
        for n in range(11):
            diff = apply_power(T, n, ei(0)) - target
            assert norm(diff, NormTag.PINF) >= 4
        assert coarse_orbit_contains(T, ei(0), Fraction(1, 2), target, 10,
                                     NormTag.PINF) is None

    def test_monotone_in_d(self):
        T = prop32_operator()
        w_small = coarse_orbit_contains(T, ei(0), Fraction(1, 2), ei(-4), 10,
                                        NormTag.PINF)
        w_large = coarse_orbit_contains(T, ei(0), 3, ei(-4), 10, NormTag.PINF)
        assert w_large.time <= w_small.time

    def test_rejects_nonpositive_d(self):
        with pytest.raises(OrbitscopeError):
            coarse_orbit_contains(prop32_operator(), ei(0), 0, ei(0), 3)

    def test_witness_reverifies(self):
        w = make_coarse_witness(prop32_operator(), ei(0), 1, ei(-2), 2,
                                NormTag.PINF)
        w.verify(prop32_operator())
        with pytest.raises(VerificationFailed):
            make_coarse_witness(prop32_operator(), ei(0), Fraction(1, 2),
                                ei(0, 5), 1, NormTag.PINF)


def synth_orbit_instance(targets, times):
    """Base point whose doubling-shift orbit visits each target in turn."""
    entries = {}
    for y, n_s in zip(targets, times):
        for j, val in y.items():
            entries[n_s + j] = val * SeqVector.basis(
                IndexSet.NATURALS, 0, Fraction(1, 2 ** n_s)).entry(0)
    return SeqVector(IndexSet.NATURALS, entries)


class TestCoarseDensity:
    def test_dense_on_cone_by_back_solving(self):
        # sample the cone first, then build the base point that visits
        # every sample; the report must then witness all of them
        C = OpenCone(en(1, 2) + en(3, 1), Fraction(1, 2), NormTag.PINF)
        samples = cone_sample(C, 6, seed=17)
        times = [20 + 15 * i for i in range(6)]
        x = synth_orbit_instance(samples, times)
        T = doubling()
        for y, n_s in zip(samples, times):
            diff = apply_power(T, n_s, x) - y
            assert norm(diff, NormTag.PINF) < Fraction(1, 10)
        report = coarse_density_report(T, x, Fraction(1, 2), C, 6, 120, seed=17)
        assert report.verdict == "PASS"
        assert report.hit_ratio == 1.0
        assert report.max_first_time <= 95

    def test_ratio_zero_far_from_orbit(self):
        C = OpenCone(ei(0, 5), Fraction(1, 2), NormTag.PINF)
        report = coarse_density_report(prop32_operator(), ei(0), Fraction(1, 2),
                                       C, 5, 50, seed=3)
        assert report.verdict == "FAIL"
        assert report.hit_ratio == 0.0

    def test_empty_sample_vacuous_pass(self):
        C = OpenCone(ei(0, 5), Fraction(1, 2), NormTag.PINF)
        report = coarse_density_report(prop32_operator(), ei(0), 1, C, 0, 10,
                                       seed=0)
        assert report.verdict == "PASS"
        assert report.warning


class TestRescale:
    def witness(self):
        return make_coarse_witness(prop32_operator(), ei(0), 2,
                                   ei(-4) + ei(2, Fraction(1, 2)), 4, NormTag.PINF)

    def test_identity_at_original_bound(self):
        w = self.witness()
        rw = rescale_coarse_witness(prop32_operator(), w, 2)
        assert rw.target == w.target
        assert rw.base == w.base
        assert rw.time == w.time

    def test_doubling_bound(self):
        w = self.witness()
        rw = rescale_coarse_witness(prop32_operator(), w, 4)
        assert rw.bound == 4
        assert rw.target == w.target.scale(2)
        assert rw.achieved_distance == w.achieved_distance * 2

    def test_round_trip_exact(self):
        w = self.witness()
        rw = rescale_coarse_witness(prop32_operator(), w, Fraction(1, 5))
        back = rescale_coarse_witness(prop32_operator(), rw, 2)
        assert back.target == w.target
        assert back.base == w.base
        assert back.achieved_distance == w.achieved_distance

    def test_degenerate_zero_pair(self):
        z = SeqVector.zero(IndexSet.INTEGERS)
        w = make_coarse_witness(prop32_operator(), z, 1, z, 3, NormTag.PINF)
        rw = rescale_coarse_witness(prop32_operator(), w, 7)
        assert rw.target.is_zero and rw.base.is_zero


class TestPointCounting:
    def test_counts_grow_on_planted_instance(self):
        y = SeqVector.from_entries(IndexSet.NATURALS, {2: 3, 5: 1})
        times = (30, 300, 3000)
        x = synth_orbit_instance([y, y, y], times)
        T = doubling()
        counts = [orbit_points_in_ball(T, x, y, Fraction(3, 2), K, NormTag.PINF)
                  for K in (100, 1000, 10000)]
        assert counts == [1, 2, 3]

    def test_plateau_on_single_visit(self):
        # the drifting orbit passes a basis target exactly once
        counts = [orbit_points_in_ball(prop32_operator(), ei(0), ei(-5),
                                       Fraction(3, 10), K, NormTag.PINF)
                  for K in (20, 200, 2000)]
        assert counts == [1, 1, 1]
