"""Formula evaluations pinned exactly, plus their soundness properties."""

import math
import random
from fractions import Fraction

import pytest

from gridcubes.bounds import (
    BoundParams,
    beta,
    bound_table_rows,
    c_n_schedule,
    check_eq_ep,
    choose_r_dense,
    choose_r_sparse,
    count_affine_maps_bound,
    epsilon_small_check,
    inductive_step,
    lll_condition,
    lower_bound_closed_form,
    lower_bound_iterated,
)
from gridcubes.cubes import CubeNotion, f_exhaustive

C_GRID = [Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1)]


class TestInductiveStep:
    def test_half(self):
        assert inductive_step(10, Fraction(1, 2), 2) == (5, Fraction(2, 81))

    def test_one(self):
        assert inductive_step(4, 1, 2) == (1, Fraction(2, 25))

    def test_boundary_rejected(self):
        with pytest.raises(ValueError):
            inductive_step(5, Fraction(1, 2), 2)  # ceil(log2 32) = 5, need n > 5
        with pytest.raises(ValueError):
            inductive_step(3, 1, 2)

    def test_strictly_decreasing(self):
        rng = random.Random(3)
        for _ in range(100):
            n = rng.randint(4, 200)
            den = rng.randint(2, 30)
            c = Fraction(rng.randint(1, den), den)
            N = rng.choice([2, 3, 5])
            try:
                n2, c2 = inductive_step(n, c, N)
            except ValueError:
                continue
            assert n2 < n and c2 < c


class TestIteratedBound:
    def test_no_step_possible(self):
        assert lower_bound_iterated(3, Fraction(1, 2), 2) == 0

    def test_pinned_values(self):
        assert lower_bound_iterated(10, Fraction(1, 2), 2) == 1
        assert lower_bound_iterated(100, Fraction(1, 2), 2) == 3
        assert lower_bound_iterated(100, 1, 2) == 4

    def test_below_exhaustive_truth(self):
        for n in range(1, 5):
            for c in C_GRID:
                truth = f_exhaustive(2, n, c, CubeNotion.INDEPENDENT_GENERATORS)
                assert lower_bound_iterated(n, c, 2) <= truth


class TestClosedForm:
    def test_large_instance_exact_power_path(self):
        res = lower_bound_closed_form(10 ** 6, Fraction(1, 2), 2, Fraction(21, 10))
        assert res.value == 17 and not res.clamped and not res.initial_step

    def test_exact_boundary(self):
        # c = 1/2, alpha = 2 makes the log argument exactly n
        res = lower_bound_closed_form(4, Fraction(1, 2), 2, 2)
        assert (res.value, res.raw) == (1, 1)
        res = lower_bound_closed_form(2, Fraction(1, 2), 2, 2)
        assert (res.value, res.raw) == (0, 0)

    def test_float_guard_path(self):
        res = lower_bound_closed_form(100, Fraction(3, 8), 2, 2)
        assert res.value == 5

    def test_initial_step_for_large_c(self):
        res = lower_bound_closed_form(100, Fraction(3, 4), 2, Fraction(13, 6))
        assert res.initial_step and res.value == 4
        small = lower_bound_closed_form(4, Fraction(3, 4), 2, Fraction(13, 6))
        assert small.value == 0  # the initial step does not fit at n = 4

    def test_small_regime_clamps(self):
        res = lower_bound_closed_form(2, Fraction(1, 4), 2, Fraction(13, 6))
        assert res.value == 0

    def test_c_one_rejected(self):
        with pytest.raises(ValueError):
            lower_bound_closed_form(10, 1, 2, 2)

    def test_growth_without_bound(self):
        values = [
            lower_bound_closed_form(n, Fraction(1, 2), 2, Fraction(21, 10)).value
            for n in (10, 10 ** 3, 10 ** 6, 10 ** 9)
        ]
        assert values == sorted(values) and values[-1] > values[0]

    def test_below_exhaustive_truth(self):
        for n in range(2, 5):
            for c in C_GRID[:-1]:
                truth = f_exhaustive(2, n, c, CubeNotion.INDEPENDENT_GENERATORS)
                for eps in (Fraction(1, 10), Fraction(1, 2), 1, 3):
                    alpha = BoundParams.make(2, c, eps).alpha
                    assert lower_bound_closed_form(n, c, 2, alpha).value <= truth

    def test_reproducible(self):
        a = lower_bound_closed_form(12345, Fraction(3, 8), 2, Fraction(13, 6))
        b = lower_bound_closed_form(12345, Fraction(3, 8), 2, Fraction(13, 6))
        assert a == b

    def test_floor_postcondition_exact_branch(self):
        # k = raw + 1 must satisfy alpha^k <= x < alpha^(k+1) with x exact
        rng = random.Random(27)
        for _ in range(120):
            N = rng.choice([2, 3, 5])
            j = rng.randint(1, 12)
            c = Fraction(1, N ** j)
            n = rng.randint(2, 10 ** 6)
            alpha = Fraction(rng.randint(5, 40), rng.randint(2, 4))
            if alpha <= 1:
                continue
            res = lower_bound_closed_form(n, c, N, alpha)
            x = 1 + Fraction(1 - n, -j) * (alpha - 1)
            k = res.raw + 1
            assert alpha ** k <= x < alpha ** (k + 1)

    def test_floor_postcondition_float_branch(self):
        # same two-sided check, via the exact power comparison that settles
        # alpha^k <= x when log_N(c) is irrational; parameters kept small
        # enough that the big-integer comparison stays feasible
        from gridcubes.bounds import _alpha_pow_le_x

        rng = random.Random(28)
        done = 0
        while done < 60:
            c = Fraction(rng.randint(3, 15), 32)
            if c.numerator == 1:
                continue  # power of two: the exact branch, covered above
            n = rng.randint(2, 200)
            alpha = Fraction(rng.randint(5, 9), 2)
            res = lower_bound_closed_form(n, c, 2, alpha)
            k = res.raw + 1
            assert _alpha_pow_le_x(k, n, c, 2, alpha)
            assert not _alpha_pow_le_x(k + 1, n, c, 2, alpha)
            done += 1


class TestBeta:
    def test_plug_in(self):
        assert beta(Fraction(1, 2), 2, 2) == 3.0

    def test_monotone_in_c(self):
        values = [beta(Fraction(1, d), 2, 2) for d in (2, 4, 8, 64, 1024)]
        assert values == sorted(values)

    def test_finite(self):
        assert math.isfinite(beta(Fraction(99, 100), 3, Fraction(5, 2)))


class TestEpsilonSmallCheck:
    def test_at_one(self):
        chk = epsilon_small_check(1)
        assert chk.holds and chk.margin > 0
        assert chk.lhs == pytest.approx(1 / (1 + math.log2(7 / 6)))

    def test_tiny(self):
        assert epsilon_small_check(Fraction(1, 1000)).holds

    def test_scan_flips_at_most_once(self):
        signs = [epsilon_small_check(Fraction(k, 8)).holds for k in range(1, 40)]
        flips = sum(1 for a, b in zip(signs, signs[1:]) if a != b)
        assert flips <= 1


class TestCnSchedule:
    def test_pinned(self):
        assert c_n_schedule(16, 2) == Fraction(3, 4)
        assert c_n_schedule(4, 2) == Fraction(1, 2)
        assert c_n_schedule(3, 2) == Fraction(0)
        assert c_n_schedule(256, 2) == Fraction(7, 8)

    def test_nondecreasing(self):
        prev = Fraction(0)
        for n in range(2, 2000):
            cur = c_n_schedule(n, 2)
            assert cur >= prev
            prev = cur

    def test_too_small(self):
        with pytest.raises(ValueError):
            c_n_schedule(2, 3)


class TestEqEp:
    def test_golden_threshold(self):
        # Computed by scanning n >= 16 upward for eps=1, N=2.
        assert not check_eq_ep(24514, 1, 2).holds
        assert check_eq_ep(24515, 1, 2).holds
        assert not check_eq_ep(60164, 1, 2).holds_natural
        assert check_eq_ep(60165, 1, 2).holds_natural

    def test_schedule_jump_flips_back(self):
        # The inequality is not monotone at desk scale: the density schedule
        # steps up at n = 65536 and halves log(1/c_n).
        assert check_eq_ep(65535, 1, 2).holds
        assert not check_eq_ep(65536, 1, 2).holds
        assert not check_eq_ep(143405, 1, 2).holds
        assert check_eq_ep(143406, 1, 2).holds

    def test_ratio_grows_within_band(self):
        ratios = [
            check_eq_ep(n, 1, 2).rhs / check_eq_ep(n, 1, 2).lhs
            for n in (2000, 4000, 8000, 16000, 32000)
        ]
        assert ratios == sorted(ratios)

    def test_degenerate_schedule_vacuous(self):
        rep = check_eq_ep(3, 1, 2)
        assert rep.holds and rep.c_n == 0 and math.isinf(rep.rhs)


class TestChooseR:
    def test_dense_examples(self):
        assert choose_r_dense(1024, Fraction(1, 2)) == 13
        assert choose_r_dense(16, Fraction(1, 2)) is None
        assert choose_r_dense(16, 1) == 7
        assert choose_r_dense(8, 1) == 5

    def test_dense_upper_strictness(self):
        rng = random.Random(9)
        for _ in range(200):
            n = rng.randint(2, 10 ** 6)
            eps = Fraction(rng.randint(1, 8), rng.randint(1, 8))
            r = choose_r_dense(n, eps)
            if r is None:
                continue
            p, q = eps.numerator, eps.denominator
            assert 2 ** (2 * q * r) > n ** (2 * q + p)  # strictly above the lower end
            assert 2 ** (q * r) < n ** (q + p)  # strictly below the upper end

    def test_sparse_examples(self):
        assert choose_r_sparse(Fraction(1, 10)) == 8
        assert choose_r_sparse(1) == 4
        assert choose_r_sparse(Fraction(1, 2)) == 6

    def test_sparse_monotone(self):
        values = [choose_r_sparse(Fraction(k, 12)) for k in range(1, 60)]
        assert values == sorted(values, reverse=True)


class TestLLLCondition:
    def test_exact_boundary_false(self):
        assert lll_condition(1, Fraction(1, 2), 1) is False
        assert lll_condition(4, Fraction(1, 2), 2) is False  # 4*4*(1/16) = 1

    def test_exact_true(self):
        assert lll_condition(1, Fraction(2, 5), 1) is True

    def test_eventually_true_in_r(self):
        assert not lll_condition(10 ** 9, Fraction(9, 10), 3)
        assert lll_condition(10 ** 9, Fraction(9, 10), 12)

    def test_huge_count(self):
        assert lll_condition(2 ** 84, Fraction(1, 64), 6) is True


class TestCountBound:
    def test_examples(self):
        assert count_affine_maps_bound(2, 1, 1) == 4
        assert count_affine_maps_bound(3, 2, 2) == 729

    def test_rejects_bad_params(self):
        with pytest.raises(ValueError):
            count_affine_maps_bound(1, 1, 1)


class TestDensityIncrementVsPower:
    def test_increment_beats_power_when_c_small(self):
        # 2c^2/(c+4)^2 >= c^alpha under the smallness condition on log c.
        rng = random.Random(15)
        checked = 0
        while checked < 60:
            eps = Fraction(rng.randint(1, 6), rng.randint(1, 4))
            alpha = 2 + eps / 3
            N = rng.choice([2, 3])
            bound = (3 / eps) * min(
                math.log(2 / 25, N), -(1 + math.log(8, N))
            )
            k = rng.randint(1, 60)
            c = Fraction(1, N) ** k
            if math.log(float(c), N) > bound - 1e-9:
                continue  # smallness condition not clearly satisfied
            lhs = 2 * c ** 2 / (c + 4) ** 2
            p, q = alpha.numerator, alpha.denominator
            # lhs >= c^(p/q)  <=>  lhs^q >= c^p  (both sides in (0,1))
            assert lhs ** q >= c ** p
            checked += 1


class TestBoundTable:
    def test_rows_shape(self):
        rows = bound_table_rows(2, [10, 20], Fraction(1, 2), Fraction(1, 2))
        assert [r["n"] for r in rows] == [10, 20]
        assert all(set(r) == {"N", "n", "c", "iterated_bound", "closed_form_bound", "alpha", "beta"} for r in rows)

    def test_c_one_drops_closed_form(self):
        rows = bound_table_rows(2, [10], 1, Fraction(1, 2))
        assert rows[0]["closed_form_bound"] is None
        assert rows[0]["iterated_bound"] >= 1
