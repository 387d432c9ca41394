import random
from fractions import Fraction

import pytest

from payback.exceptions import PreconditionError, UsageError
from payback.models.project import (
    INFINITY,
    TIME_ZERO,
    ZERO_PROJECT,
    ExtendedTime,
    add,
    classify,
    make_project,
    scale,
)
from payback.schemas.report import MetricKind
from payback.services.generators import (
    gen_conventional_project,
    gen_dominated_pair,
    gen_nonnegative_project,
    gen_project,
)
from payback.services.metrics import (
    MetricsService,
    breakeven_points,
    first_breakeven,
    is_acceptable,
    metric_value,
    modified_payback,
    modified_project,
    payback,
    payback_oracle_dominance,
    payback_oracle_grid,
)
from payback.utils.rational import draw_rational


def T(value):
    return ExtendedTime(Fraction(value))


class TestPayback:
    def test_demo_project(self, demo_project):
        assert payback(demo_project) == T(3)

    def test_recovers_then_dips(self):
        assert payback(make_project([(0, -1), (1, 2), (2, -3), (4, 2)])) == T(4)

    def test_two_transaction(self):
        assert payback(make_project([(0, -2), (3, 3)])) == T(3)

    def test_zero_project(self):
        assert payback(ZERO_PROJECT) == TIME_ZERO

    def test_nonnegative_balance(self):
        assert payback(make_project([(1, 1), (2, -1)])) == TIME_ZERO

    def test_sunk_cost(self):
        assert payback(make_project([(0, -1)])) == INFINITY

    def test_negative_terminal_value(self):
        assert payback(make_project([(0, -100), (1, 150), (2, -100)])) == INFINITY

    def test_exact_break_even_counts(self):
        assert payback(make_project([(0, -1), (Fraction(7, 3), 1)])) == T(Fraction(7, 3))

    def test_late_negative_start(self):
        assert payback(make_project([(2, -1), (5, 1)])) == T(5)


class TestOracles:
    def test_oracles_agree_on_examples(self, demo_project, acons_pair):
        projects = [demo_project, *acons_pair, ZERO_PROJECT, make_project([(0, -1)]), make_project([(3, 1)])]
        for x in projects:
            assert payback_oracle_dominance(x) == payback(x) == payback_oracle_grid(x)

    def test_oracle_equivalence(self, params):
        rng = random.Random(20240601)
        for _ in range(10_000):
            x = gen_project(rng, params)
            expected = payback(x)
            assert payback_oracle_dominance(x) == expected, str(x)
            assert payback_oracle_grid(x) == expected, str(x)


class TestLastBreakevenProperties:
    def test_comp(self, params):
        rng = random.Random(1)
        for _ in range(1_000):
            b = draw_rational(rng, Fraction(0), params.amount_range, 64, open_low=True)
            a = b * draw_rational(rng, Fraction(0), Fraction(1), 64, open_low=True)
            tau = draw_rational(rng, Fraction(0), params.time_range, 64, open_low=True)
            assert payback(make_project([(0, -a), (tau, b)])) == ExtendedTime(tau)

    def test_acons(self, params):
        rng = random.Random(2)
        for _ in range(10_000):
            x, y = gen_project(rng, params), gen_project(rng, params)
            assert payback(add(x, y)) <= max(payback(x), payback(y))

    def test_mon(self, params):
        rng = random.Random(3)
        for _ in range(10_000):
            x, y = gen_dominated_pair(rng, params)
            assert payback(x) >= payback(y)

    def test_scale_invariance(self, params):
        rng = random.Random(4)
        for _ in range(1_000):
            x = gen_project(rng, params)
            c = draw_rational(rng, Fraction(0), Fraction(10), 64, open_low=True)
            assert payback(scale(x, c)) == payback(x)

    def test_zero_on_nonnegative(self, params):
        rng = random.Random(5)
        for _ in range(1_000):
            assert payback(gen_nonnegative_project(rng, params)) == TIME_ZERO


class TestConventionalAgreement:
    def test_all_recipes_agree_on_p2(self, params):
        rng = random.Random(6)
        for _ in range(2_000):
            x = gen_conventional_project(rng, params)
            switch = classify(x).phase_switch
            assert payback(x) == first_breakeven(x) == ExtendedTime(switch)

    def test_unrecovered_two_transaction(self, params):
        rng = random.Random(7)
        for _ in range(500):
            b = draw_rational(rng, Fraction(0), params.amount_range, 64, open_low=True)
            a = b + draw_rational(rng, Fraction(0), params.amount_range, 64, open_low=True)
            tau = draw_rational(rng, Fraction(0), params.time_range, 64, open_low=True)
            assert payback(make_project([(0, -a), (tau, b)])) == INFINITY


class TestRivalMetrics:
    def test_first_breakeven(self, demo_project, acons_pair):
        x, y = acons_pair
        assert first_breakeven(demo_project) == T(1)
        assert first_breakeven(x) == T(1)
        assert first_breakeven(y) == T(3)
        assert first_breakeven(add(x, y)) == T(4)

    def test_first_breakeven_edges(self):
        assert first_breakeven(ZERO_PROJECT) == TIME_ZERO
        assert first_breakeven(make_project([(0, -1)])) == INFINITY
        assert first_breakeven(make_project([(1, -1), (2, 1)])) == TIME_ZERO

    def test_breakeven_points(self, demo_project):
        assert breakeven_points(demo_project) == [1, 3]
        assert breakeven_points(make_project([(0, 1)])) == []

    def test_modified(self, demo_project):
        assert modified_project(demo_project) == make_project([(0, -200), (1, 150), (3, 60)])
        assert modified_payback(demo_project) == T(3)

    def test_modified_breaks_monotonicity(self):
        y = make_project([(1, 1), (2, -1)])
        assert modified_payback(ZERO_PROJECT) == TIME_ZERO
        assert modified_payback(y) == T(1)

    def test_modified_is_monotone_in_inflows(self, params):
        # adding inflows never delays the modified payback
        rng = random.Random(8)
        for _ in range(1_000):
            x = gen_project(rng, params)
            extra = make_project(
                (e.time, abs(e.amount)) for e in gen_project(rng, params).events
            )
            assert modified_payback(add(x, extra)) <= modified_payback(x)

    def test_dropping_an_outflow_never_delays_modified(self, params):
        rng = random.Random(9)
        for _ in range(1_000):
            x = gen_project(rng, params)
            outflows = [i for i, e in enumerate(x.events) if e.amount < 0]
            if not outflows:
                continue
            dropped = rng.choice(outflows)
            reduced = make_project(pair for i, pair in enumerate(x.pairs()) if i != dropped)
            assert modified_payback(reduced) <= modified_payback(x)


class TestScreening:
    def test_mapp_is_inclusive(self, demo_project):
        assert is_acceptable(demo_project, 3)
        assert not is_acceptable(demo_project, Fraction(29, 10))

    def test_sunk_cost_never_acceptable(self):
        assert not is_acceptable(make_project([(0, -1)]), 10 ** 9)

    def test_mapp_must_be_positive(self, demo_project):
        with pytest.raises(PreconditionError):
            is_acceptable(demo_project, 0)

    def test_other_metric(self, demo_project):
        assert is_acceptable(demo_project, 1, MetricKind.FIRST_BREAKEVEN)


class TestMetricsService:
    def test_discounted_needs_alpha(self, demo_project):
        with pytest.raises(UsageError):
            metric_value(demo_project, MetricKind.DISCOUNTED_LAST)
        with pytest.raises(UsageError):
            MetricsService().report(demo_project, MetricKind.DISCOUNTED_LAST)

    def test_report(self, demo_project):
        report = MetricsService().report(demo_project, MetricKind.LAST_BREAKEVEN, Fraction(3), "demo")
        assert report.value == T(3)
        assert report.breakeven_points == [1, 3]
        assert report.acceptable is True
        assert report.project == "demo"
        assert not report.approximate

    def test_modified_report_uses_modified_stream(self, demo_project):
        report = MetricsService().report(demo_project, MetricKind.MODIFIED)
        assert report.breakeven_points == [3]

    def test_values(self, demo_project, halving_table):
        values = MetricsService(halving_table).values(make_project([(0, -1), (1, 4)]))
        assert values[MetricKind.LAST_BREAKEVEN] == T(1)
        assert values[MetricKind.DISCOUNTED_LAST] == T(1)
        assert MetricKind.DISCOUNTED_LAST not in MetricsService().values(demo_project)
