import random
from fractions import Fraction

import pytest

from orbitscope import (
    Band,
    Block,
    Constant,
    IndexSet,
    NormTag,
    Periodic,
    PiecewiseTwoSided,
    SeqVector,
    Shape,
    ShiftOperator,
    Table,
    apply,
    apply_power,
    norm,
    prop32_operator,
    riesz_blocks,
    shift_from_jsonable,
    spectral_radius_estimate,
    weight_product,
)
from orbitscope.errors import (
    ConfigError,
    IndecisiveSpectrum,
    IndexSetMismatch,
    NumericOverflow,
)
from orbitscope.numeric import Mode, numeric_mode

from conftest import nfold_apply, random_shift, vector_for


def ei(i, c=1):
    return SeqVector.basis(IndexSet.INTEGERS, i, c)


def en(i, c=1):
    return SeqVector.basis(IndexSet.NATURALS, i, c)


class TestApply:
    def test_prop32_weight_one_zone(self):
        # weights are 1 at indices <= 0, so e_0 moves to e_{-1} unscaled
        assert apply(prop32_operator(), ei(0)) == ei(-1)

    def test_prop32_weight_two_zone(self):
        assert apply(prop32_operator(), ei(1)) == ei(0, 2)

    def test_unilateral_annihilates_bottom(self):
        T = ShiftOperator(Shape.UNILATERAL_BACKWARD, IndexSet.NATURALS, Constant(5))
        assert apply(T, en(0)).is_zero

    def test_forward_shift(self):
        T = ShiftOperator(Shape.BILATERAL_FORWARD, IndexSet.INTEGERS, Constant(3))
        assert apply(T, ei(2)) == ei(3, 3)

    def test_diagonal(self):
        T = ShiftOperator(Shape.DIAGONAL, IndexSet.INTEGERS, Table({0: 7}, 2))
        assert apply(T, ei(0) + ei(1)) == ei(0, 7) + ei(1, 2)

    def test_index_mismatch(self):
        with pytest.raises(IndexSetMismatch):
            apply(prop32_operator(), en(0))

    def test_linearity_exact(self):
        rng = random.Random(5)
        for _ in range(50):
            T = random_shift(rng)
            u = vector_for(rng, T)
            v = vector_for(rng, T)
            a, b = Fraction(3, 7), Fraction(-5, 2)
            lhs = apply(T, u.scale(a) + v.scale(b))
            rhs = apply(T, u).scale(a) + apply(T, v).scale(b)
            assert lhs == rhs


class TestApplyPower:
    def test_identity_power(self):
        v = ei(2, 5) + ei(-1, 3)
        assert apply_power(prop32_operator(), 0, v) == v

    def test_prop32_base_orbit_is_flat(self):
        T = prop32_operator()
        for n in (1, 5, 50, 500):
            v = apply_power(T, n, ei(0))
            assert v == ei(-n)
            assert norm(v, NormTag.PINF) == 1

    def test_prop32_doubling_path(self):
        T = prop32_operator()
        for n in (1, 3, 8):
            assert apply_power(T, n, ei(n)) == ei(0, 2 ** n)
            assert apply_power(T, n, ei(n)) == nfold_apply(T, n, ei(n))

    def test_oracle_equivalence_500_random(self):
        rng = random.Random(42)
        for _ in range(500):
            T = random_shift(rng)
            v = vector_for(rng, T)
            n = rng.randint(0, 30)
            assert apply_power(T, n, v) == nfold_apply(T, n, v)

    def test_semigroup_exact(self):
        rng = random.Random(99)
        for _ in range(60):
            T = random_shift(rng)
            v = vector_for(rng, T)
            m, n = rng.randint(0, 50), rng.randint(0, 50)
            assert apply_power(T, m + n, v) == apply_power(T, m, apply_power(T, n, v))

    def test_semigroup_float_relative(self):
        with numeric_mode(Mode.FLOAT64):
            rng = random.Random(3)
            T = ShiftOperator(Shape.BILATERAL_BACKWARD, IndexSet.INTEGERS,
                              Constant(Fraction(3, 2)))
            v = SeqVector.from_entries(IndexSet.INTEGERS, {0: 1.0, 4: -2.5})
            for _ in range(20):
                m, n = rng.randint(0, 50), rng.randint(0, 50)
                a = apply_power(T, m + n, v)
                b = apply_power(T, m, apply_power(T, n, v))
                for i in set(a.support) | set(b.support):
                    x, y = a.entry(i), b.entry(i)
                    assert abs(x - y) <= 1e-9 * max(abs(x), abs(y), 1.0)

    def test_float_overflow_policy(self):
        with numeric_mode(Mode.FLOAT64):
            T = prop32_operator()
            with pytest.raises(NumericOverflow):
                apply_power(T, 1000, SeqVector.basis(IndexSet.INTEGERS, 1000))
            # exact mode has no overflow
        big = apply_power(prop32_operator(), 1000, ei(1000))
        assert big == ei(0, Fraction(2) ** 1000)


class TestWeightProduct:
    def test_prop32_path_product(self):
        wp = weight_product(prop32_operator(), 0, 5)
        assert wp.exact_value.re == 32
        # oracle: five applications of the operator to e_5
        assert nfold_apply(prop32_operator(), 5, ei(5)) == ei(0, 32)

    def test_empty_product(self):
        wp = weight_product(prop32_operator(), 3, 0)
        assert wp.exact_value.re == 1

    def test_halving_product_with_oracle(self):
        T = ShiftOperator(Shape.UNILATERAL_BACKWARD, IndexSet.NATURALS,
                          Constant(Fraction(1, 2)))
        wp = weight_product(T, 0, 10)
        assert wp.exact_value.re == Fraction(1, 1024)
        assert nfold_apply(T, 10, en(10)) == en(0, Fraction(1, 1024))

    def test_unilateral_exit_gives_zero(self):
        T = ShiftOperator(Shape.UNILATERAL_BACKWARD, IndexSet.NATURALS, Constant(2))
        assert weight_product(T, -2, 1).is_zero

    def test_log_matches_exact(self):
        wp = weight_product(prop32_operator(), 0, 12)
        assert abs(wp.log2_magnitude - 12.0) < 1e-9

    def test_periodic_product(self):
        T = ShiftOperator(Shape.BILATERAL_BACKWARD, IndexSet.INTEGERS,
                          Periodic((2, 3, 5)))
        v = nfold_apply(T, 9, ei(9))
        wp = weight_product(T, 0, 9)
        assert v == ei(0, wp.exact_value.re)


class TestSpectral:
    def test_constant_two_estimate(self):
        T = ShiftOperator(Shape.UNILATERAL_BACKWARD, IndexSet.NATURALS, Constant(2))
        trace = spectral_radius_estimate(T, 64, (0, 128))
        assert abs(trace.estimate - 2.0) <= 0.02
        # constant weights make every geometric mean exactly the weight
        assert all(abs(q - 2.0) < 1e-9 for q in trace.quotients)

    def test_constant_half_estimate(self):
        T = ShiftOperator(Shape.UNILATERAL_BACKWARD, IndexSet.NATURALS,
                          Constant(Fraction(1, 2)))
        assert abs(spectral_radius_estimate(T, 64, (0, 128)).estimate - 0.5) <= 0.005

    def test_diagonal_table_estimate(self):
        T = ShiftOperator(Shape.DIAGONAL, IndexSet.INTEGERS,
                          Table({0: 3}, Fraction(1, 10)))
        assert abs(spectral_radius_estimate(T, 64, (-64, 64)).estimate - 3.0) <= 0.03

    def test_brute_force_oracle_small(self):
        # oracle: exhaust all n-step windows of the weight sequence
        T = ShiftOperator(Shape.BILATERAL_BACKWARD, IndexSet.INTEGERS,
                          PiecewiseTwoSided(3, Fraction(1, 2)))
        trace = spectral_radius_estimate(T, 8, (-16, 16))
        weights = {j: (3.0 if j >= 1 else 0.5) for j in range(-40, 40)}
        for n in range(1, 9):
            best = 0.0
            for s in range(-16, 17):
                prod = 1.0
                for j in range(s - n + 1, s + 1):
                    prod *= weights[j]
                best = max(best, prod ** (1.0 / n))
            assert abs(trace.quotients[n - 1] - best) < 1e-9


class TestBlocks:
    def two_band(self):
        return ShiftOperator(
            Shape.BLOCK_DIRECT_SUM, IndexSet.INTEGERS,
            blocks=(Block(Band(0, None), "backward", Constant(Fraction(1, 2))),
                    Block(Band(None, -1), "backward", Constant(2))))

    def test_apply_commutes_with_band_projection(self):
        T = self.two_band()
        split = riesz_blocks(T).splitter
        v = SeqVector.from_entries(IndexSet.INTEGERS, {3: 1, -4: 2, 0: -1})
        v1, v2 = split.split(v)
        w1, w2 = split.split(apply(T, v))
        assert apply(T, v1) == w1
        assert apply(T, v2) == w2

    def test_riesz_two_band_partition(self):
        rs = riesz_blocks(self.two_band())
        assert len(rs.contracting.blocks) == 1
        assert len(rs.expanding.blocks) == 1
        assert rs.contracting.blocks[0].band == Band(0, None)

    def test_riesz_single_expanding_block(self):
        T = ShiftOperator(Shape.BLOCK_DIRECT_SUM, IndexSet.INTEGERS,
                          blocks=(Block(Band(None, None), "backward", Constant(2)),))
        rs = riesz_blocks(T)
        assert rs.contracting.blocks == ()
        assert len(rs.expanding.blocks) == 1

    def test_riesz_indecisive_on_unit_weight(self):
        T = ShiftOperator(Shape.BLOCK_DIRECT_SUM, IndexSet.INTEGERS,
                          blocks=(Block(Band(None, None), "backward", Constant(1)),))
        with pytest.raises(IndecisiveSpectrum):
            riesz_blocks(T)

    def test_band_overlap_rejected(self):
        with pytest.raises(ConfigError):
            ShiftOperator(Shape.BLOCK_DIRECT_SUM, IndexSet.INTEGERS,
                          blocks=(Block(Band(0, None), "backward", Constant(2)),
                                  Block(Band(-5, 5), "backward", Constant(3))))


class TestConfig:
    def test_preset_prop32(self):
        T = shift_from_jsonable({"preset": "paper-prop32"})
        assert T.label == "paper-prop32"
        assert apply(T, ei(1)) == ei(0, 2)

    def test_unknown_preset(self):
        with pytest.raises(ConfigError):
            shift_from_jsonable({"preset": "nope"})

    def test_roundtrip(self):
        T = ShiftOperator(Shape.BILATERAL_BACKWARD, IndexSet.INTEGERS,
                          PiecewiseTwoSided(2, 1))
        back = shift_from_jsonable(T.to_jsonable())
        assert back.shape is T.shape
        assert apply(back, ei(1)) == apply(T, ei(1))

    def test_unknown_keys_rejected(self):
        with pytest.raises(ConfigError):
            shift_from_jsonable({"shape": "diagonal", "index_set": "Z",
                                 "weights": {"kind": "constant", "value": 2},
                                 "frobnicate": 1})

    def test_weights_must_be_nonzero(self):
        with pytest.raises(ConfigError):
            Constant(0)

    def test_unilateral_requires_naturals(self):
        with pytest.raises(ConfigError):
            ShiftOperator(Shape.UNILATERAL_BACKWARD, IndexSet.INTEGERS, Constant(2))
