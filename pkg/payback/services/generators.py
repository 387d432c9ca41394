"""Seeded random projects for the axiom suites.

Every generator accepts either an integer seed or a ``random.Random``
instance; the same seed always yields the same project.
"""

import random
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from payback.config import analysis_config
from payback.models.project import ZERO, Project, add, make_project
from payback.schemas.axiom import GeneratorParams
from payback.utils.rational import draw_rational

Seed = Union[int, random.Random]


def default_params(**overrides) -> GeneratorParams:
    """Generator parameters from the analysis config, with overrides."""
    return GeneratorParams(**{**analysis_config.get_generator_params(), **overrides})


def _rng(seed: Seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def _draw_times(rng: random.Random, params: GeneratorParams, count: int) -> List[Fraction]:
    """Distinct sorted event times, time 0 included about half the time."""
    if params.time_grid is not None:
        grid = sorted(set(params.time_grid))
        return sorted(rng.sample(grid, min(count, len(grid))))
    times = set()
    if rng.random() < 0.5:
        times.add(ZERO)
    attempts = 0
    while len(times) < count and attempts < 8 * count:
        times.add(draw_rational(rng, ZERO, params.time_range, params.max_denominator))
        attempts += 1
    return sorted(times)


def _draw_amount(rng: random.Random, params: GeneratorParams) -> Fraction:
    return draw_rational(rng, ZERO, params.amount_range, params.max_denominator, open_low=True)


def gen_project(seed: Seed, params: Optional[GeneratorParams] = None) -> Project:
    """Random project biased towards sign-alternating balances.

    The first amount is an outflow most of the time and later amounts flip
    sign with probability one half, so nonconventional balances dominate.
    """
    params = params or default_params()
    rng = _rng(seed)
    if params.max_events == 0:
        return make_project([])
    count = rng.randint(0, params.max_events)
    times = _draw_times(rng, params, count)

    negative = rng.random() < 0.8
    raw = []
    for t in times:
        amount = _draw_amount(rng, params)
        raw.append((t, -amount if negative else amount))
        if rng.random() < 0.5:
            negative = not negative
    return make_project(raw)


def gen_nonnegative_project(seed: Seed, params: Optional[GeneratorParams] = None) -> Project:
    """Project whose balance is nonnegative everywhere.

    Either pure inflows, or inflow/outflow pairs with the inflow first and
    the outflow no larger.
    """
    params = params or default_params()
    rng = _rng(seed)
    if params.max_events == 0:
        return make_project([])
    count = rng.randint(0, params.max_events)
    times = _draw_times(rng, params, count)

    raw = []
    if rng.random() < 0.5:
        raw = [(t, _draw_amount(rng, params)) for t in times]
    else:
        for i in range(0, len(times) - 1, 2):
            inflow = _draw_amount(rng, params)
            outflow = inflow * draw_rational(rng, ZERO, Fraction(1), params.max_denominator)
            raw.append((times[i], inflow))
            raw.append((times[i + 1], -outflow))
        if len(times) % 2:
            raw.append((times[-1], _draw_amount(rng, params)))
    return make_project(raw)


def gen_dominated_pair(seed: Seed, params: Optional[GeneratorParams] = None) -> Tuple[Project, Project]:
    """(x, y) with x <= y by construction: y = x + n, n of nonnegative balance."""
    params = params or default_params()
    rng = _rng(seed)
    x = gen_project(rng, params)
    n = gen_nonnegative_project(rng, params)
    return x, add(x, n)


def gen_conventional_project(seed: Seed, params: Optional[GeneratorParams] = None) -> Project:
    """Outflows from time 0, then inflows that recover the deficit (class P2)."""
    params = params or default_params()
    rng = _rng(seed)
    count = max(2, rng.randint(2, max(2, params.max_events)))

    times = {ZERO}
    attempts = 0
    while len(times) < count and attempts < 8 * count:
        times.add(draw_rational(rng, ZERO, params.time_range, params.max_denominator))
        attempts += 1
    times = sorted(times)
    if len(times) < 2:
        times.append(params.time_range + 1)

    split = rng.randint(1, len(times) - 1)
    outflows = [_draw_amount(rng, params) for _ in times[:split]]
    deficit = sum(outflows, ZERO)
    raw = [(t, -a) for t, a in zip(times[:split], outflows)]

    inflow_times = times[split:]
    for t in inflow_times[:-1]:
        amount = _draw_amount(rng, params)
        raw.append((t, amount))
        deficit -= amount
    extra = ZERO if rng.random() < 0.2 else _draw_amount(rng, params)
    raw.append((inflow_times[-1], max(deficit, ZERO) + extra))
    return make_project(raw)
