"""Executable axiom harness for payback functionals.

Every check treats the functional as a black box and is a falsification
suite: a violation is a concrete counterexample, a pass is evidence only.
Canned witnesses turn the known counterexamples for the rival recipes into
replayable witnesses; random trials are seeded and deterministic.
"""

import math
import random
from dataclasses import dataclass
from enum import Enum as PyEnum
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import structlog

from payback.config import analysis_config
from payback.exceptions import PreconditionError, UnknownFunctionalError, UsageError
from payback.models.discount import DiscountForm, DiscountFunction
from payback.models.project import (
    INFINITY,
    TIME_ZERO,
    ZERO,
    ExtendedTime,
    Project,
    add,
    dominates,
    in_p1,
    make_project,
)
from payback.schemas.axiom import AxiomName, AxiomReport, GeneratorParams, Witness
from payback.services import metrics
from payback.services.discount import discount_stream, factor, invert
from payback.services.generators import default_params, gen_dominated_pair, gen_project
from payback.utils.logging import log_axiom_report
from payback.utils.rational import draw_rational

logger = structlog.get_logger(__name__)


class FunctionalName(PyEnum):
    """Built-in payback functionals."""
    LAST_BE = "LAST_BE"
    FIRST_BE = "FIRST_BE"
    MODIFIED = "MODIFIED"
    CONST_ZERO = "CONST_ZERO"
    OBS3_RESTRICTED = "OBS3_RESTRICTED"
    DISCOUNTED_LAST_BE = "DISCOUNTED_LAST_BE"


@dataclass(frozen=True)
class PaybackFunctional:
    """A named map Project -> ExtendedTime; discounted functionals carry alpha."""

    name: str
    fn: Callable[[Project], ExtendedTime]
    alpha: Optional[DiscountFunction] = None

    def __call__(self, x: Project) -> ExtendedTime:
        return self.fn(x)


def _restricted_last_breakeven(x: Project) -> ExtendedTime:
    """Last break-even point on P1, +inf elsewhere."""
    return metrics.payback(x) if in_p1(x) else INFINITY


def discounted_functional(alpha: DiscountFunction) -> PaybackFunctional:
    """x -> payback(x^(alpha))."""
    return PaybackFunctional(
        FunctionalName.DISCOUNTED_LAST_BE.value,
        lambda x: metrics.discounted_payback(x, alpha),
        alpha,
    )


def builtin(name: Union[str, FunctionalName], alpha: Optional[DiscountFunction] = None) -> PaybackFunctional:
    """Look up a built-in functional by name (case-insensitive)."""
    try:
        key = name if isinstance(name, FunctionalName) else FunctionalName(name.strip().upper().replace("-", "_"))
    except ValueError:
        raise UnknownFunctionalError(name) from None

    if key is FunctionalName.LAST_BE:
        return PaybackFunctional(key.value, metrics.payback)
    if key is FunctionalName.FIRST_BE:
        return PaybackFunctional(key.value, metrics.first_breakeven)
    if key is FunctionalName.MODIFIED:
        return PaybackFunctional(key.value, metrics.modified_payback)
    if key is FunctionalName.CONST_ZERO:
        return PaybackFunctional(key.value, lambda x: TIME_ZERO)
    if key is FunctionalName.OBS3_RESTRICTED:
        return PaybackFunctional(key.value, _restricted_last_breakeven)
    if alpha is None:
        raise UsageError("DISCOUNTED_LAST_BE needs a discount function")
    return discounted_functional(alpha)


# Axioms each built-in functional provably satisfies; a violation of any
# other axiom is an expected finding, not a regression.
PROVEN_AXIOMS: Dict[FunctionalName, FrozenSet[AxiomName]] = {
    FunctionalName.LAST_BE: frozenset({AxiomName.COMP, AxiomName.ACONS, AxiomName.MON, AxiomName.LSC}),
    FunctionalName.FIRST_BE: frozenset({AxiomName.COMP, AxiomName.MON, AxiomName.LSC}),
    FunctionalName.MODIFIED: frozenset({AxiomName.COMP}),
    FunctionalName.CONST_ZERO: frozenset({AxiomName.ACONS, AxiomName.MON, AxiomName.LSC}),
    FunctionalName.OBS3_RESTRICTED: frozenset({AxiomName.COMP, AxiomName.ACONS}),
    FunctionalName.DISCOUNTED_LAST_BE: frozenset(
        {AxiomName.ACONS, AxiomName.LSC, AxiomName.ALPHA_COMP, AxiomName.ALPHA_MON}
    ),
}


# Canned witnesses: (a, b, tau) triples for COMP, (x, y) raw pairs otherwise.
CANNED_COMP: List[Tuple[Fraction, Fraction, Fraction]] = [
    (Fraction(1), Fraction(1), Fraction(1)),
    (Fraction(1), Fraction(2), Fraction(5)),
]

# first break-even of x, y, x + y: 1, 3, 4
CANNED_ACONS = [
    ([(0, -1), (1, 2), (2, -3), (4, 2)], [(0, -2), (3, 3)]),
]

CANNED_MON = [
    # 0 <= y, modified metric 0 < 1
    ([], [(1, 1), (2, -1)]),
    # x in P1 is dominated by the zero project, which is outside P1
    ([(0, -2), (1, 1), (3, 1)], []),
]

# Discounted-space dominated pairs that defeat the undiscounted payback;
# each is used whenever alpha is defined at its times and dominance holds.
CANNED_ALPHA_MON = [
    # alpha = {0: 1, 1: 1/2}
    ([(0, -1), (1, 1)], [(0, Fraction(-1, 2)), (1, Fraction(1, 4))]),
    # alpha = {0: 1, 1: 2, 2: 1}
    ([(0, -1), (2, 1)], [(0, -1), (1, 1), (2, Fraction(-1, 4))]),
]


def replay_witness(F: PaybackFunctional, witness: Witness) -> List[ExtendedTime]:
    """Re-evaluate F on a witness's inputs, in the order of ``observed``."""
    if witness.axiom is AxiomName.ACONS:
        x, y = witness.inputs
        return [F(x), F(y), F(add(x, y))]
    return [F(p) for p in witness.inputs]


def sign_margin(x: Project) -> Optional[Fraction]:
    """Amount perturbation radius that cannot flip the sign of any nonzero balance.

    Perturbing every amount by at most r moves the balance after k events by
    at most k * r, so r = min |nonzero balance| / (2 * event count) keeps
    every nonzero balance on its side of zero.
    """
    nonzero = [abs(b) for b in x.balances if b != 0]
    if not nonzero:
        return None
    return min(nonzero) / (2 * len(x.events))


def _shrink(projects: List[Project], violates: Callable[[List[Project]], bool]) -> List[Project]:
    """Greedy local shrinking: drop events, then round amounts, while the violation persists."""
    current = list(projects)
    changed = True
    while changed:
        changed = False
        for i, p in enumerate(current):
            for j in range(len(p.events)):
                smaller = make_project(p.events[:j] + p.events[j + 1:])
                candidate = current[:i] + [smaller] + current[i + 1:]
                if violates(candidate):
                    current, changed = candidate, True
                    break
            if changed:
                break
    for i, p in enumerate(current):
        for j, event in enumerate(p.events):
            rounded = Fraction(round(event.amount))
            if rounded == event.amount or rounded == 0:
                continue
            events = [(e.time, e.amount) for e in p.events]
            events[j] = (event.time, rounded)
            candidate = current[:i] + [make_project(events)] + current[i + 1:]
            if violates(candidate):
                current = candidate
                p = current[i]
    return current


class _Collector:
    """Counts trials and violations, keeping at most ``limit`` witnesses."""

    def __init__(self, limit: int):
        self.limit = limit
        self.trials = 0
        self.count = 0
        self.witnesses: List[Witness] = []

    def record(self, make_witness: Callable[[], Witness]):
        self.count += 1
        if len(self.witnesses) < self.limit:
            self.witnesses.append(make_witness())

    def report(self, axiom: AxiomName, F: PaybackFunctional, seed, **extra) -> AxiomReport:
        report = AxiomReport(
            axiom=axiom,
            functional=F.name,
            trials=self.trials,
            seed=seed,
            violations=sorted(self.witnesses, key=lambda w: w.model_dump_json()),
            violation_count=self.count,
            **extra,
        )
        log_axiom_report(
            logger,
            functional=F.name,
            axiom=axiom.value,
            trials=report.trials,
            violations=report.violation_count,
            applicable=report.applicable,
        )
        return report


def _max_witnesses() -> int:
    return int(analysis_config.get_axiom_setting("max_witnesses"))


def _alpha_defined(alpha: Optional[DiscountFunction], projects: Iterable[Project]) -> bool:
    """alpha is exactly defined at every event time of the projects."""
    if alpha is None or alpha.form is DiscountForm.IDENTITY:
        return True
    for p in projects:
        for t in p.times:
            if alpha.form is DiscountForm.TABLE and alpha.lookup(t) is None:
                return False
            if alpha.form is DiscountForm.EXPONENTIAL and t.denominator != 1:
                return False
    return True


def params_for_alpha(alpha: Optional[DiscountFunction], params: GeneratorParams) -> GeneratorParams:
    """Restrict generated event times to where alpha is exactly defined."""
    if alpha is None or alpha.form is DiscountForm.IDENTITY:
        return params
    if alpha.form is DiscountForm.TABLE:
        grid = alpha.times
    else:
        grid = tuple(Fraction(k) for k in range(0, math.floor(params.time_range) + 1))
    return params.model_copy(update={"time_grid": grid})


def _resolve(F: PaybackFunctional, params: Optional[GeneratorParams]) -> GeneratorParams:
    return params_for_alpha(F.alpha, params or default_params())


def check_comp(
    F: PaybackFunctional,
    trials: int,
    seed: int = 0,
    params: Optional[GeneratorParams] = None,
) -> AxiomReport:
    """F(-a 1_0 + b 1_tau) = tau for 0 < a <= b, tau > 0."""
    if trials <= 0:
        raise PreconditionError("trials must be positive")
    params = _resolve(F, params)
    rng = random.Random(seed)
    collector = _Collector(_max_witnesses())

    positive_grid = [t for t in (params.time_grid or ()) if t > 0]
    triples = list(CANNED_COMP)
    for _ in range(trials):
        b = draw_rational(rng, ZERO, params.amount_range, params.max_denominator, open_low=True)
        a = b * draw_rational(rng, ZERO, Fraction(1), params.max_denominator, open_low=True)
        if params.time_grid is not None:
            if not positive_grid:
                raise PreconditionError("generator time grid has no positive time")
            tau = rng.choice(positive_grid)
        else:
            tau = draw_rational(rng, ZERO, params.time_range, params.max_denominator, open_low=True)
        triples.append((a, b, tau))

    for a, b, tau in triples:
        x = make_project([(0, -a), (tau, b)])
        if not _alpha_defined(F.alpha, [x]):
            continue
        collector.trials += 1
        observed = F(x)
        if observed != ExtendedTime(tau):
            collector.record(lambda: Witness(
                axiom=AxiomName.COMP,
                inputs=[x],
                parameters={"a": a, "b": b, "tau": tau},
                observed=[observed],
                expected_relation=f"F(x) = tau = {tau}",
            ))
    return collector.report(AxiomName.COMP, F, seed)


def check_acons(
    F: PaybackFunctional,
    trials: int,
    seed: int = 0,
    params: Optional[GeneratorParams] = None,
) -> AxiomReport:
    """F(x + y) <= max(F(x), F(y)), +inf maximal."""
    if trials <= 0:
        raise PreconditionError("trials must be positive")
    params = _resolve(F, params)
    rng = random.Random(seed)
    collector = _Collector(_max_witnesses())

    def violates(ps: List[Project]) -> bool:
        return F(add(ps[0], ps[1])) > max(F(ps[0]), F(ps[1]))

    pairs = [(make_project(x), make_project(y)) for x, y in CANNED_ACONS]
    canned = len(pairs)
    pairs += [(gen_project(rng, params), gen_project(rng, params)) for _ in range(trials)]

    for index, (x, y) in enumerate(pairs):
        if not _alpha_defined(F.alpha, [x, y]):
            continue
        collector.trials += 1
        if violates([x, y]):
            if index >= canned:
                x, y = _shrink([x, y], violates)
            collector.record(lambda: Witness(
                axiom=AxiomName.ACONS,
                inputs=[x, y],
                observed=[F(x), F(y), F(add(x, y))],
                expected_relation="F(x + y) <= max(F(x), F(y))",
            ))
    return collector.report(AxiomName.ACONS, F, seed)


def check_mon(
    F: PaybackFunctional,
    trials: int,
    seed: int = 0,
    params: Optional[GeneratorParams] = None,
) -> AxiomReport:
    """x <= y implies F(x) >= F(y)."""
    if trials <= 0:
        raise PreconditionError("trials must be positive")
    params = _resolve(F, params)
    rng = random.Random(seed)
    collector = _Collector(_max_witnesses())

    def violates(ps: List[Project]) -> bool:
        return dominates(ps[0], ps[1]) and F(ps[0]) < F(ps[1])

    pairs = [(make_project(x), make_project(y)) for x, y in CANNED_MON]
    canned = len(pairs)
    pairs += [gen_dominated_pair(rng, params) for _ in range(trials)]

    for index, (x, y) in enumerate(pairs):
        if not _alpha_defined(F.alpha, [x, y]):
            continue
        collector.trials += 1
        if violates([x, y]):
            if index >= canned:
                x, y = _shrink([x, y], violates)
            collector.record(lambda: Witness(
                axiom=AxiomName.MON,
                inputs=[x, y],
                observed=[F(x), F(y)],
                expected_relation="x <= y implies F(x) >= F(y)",
            ))
    return collector.report(AxiomName.MON, F, seed)


def _perturb(rng: random.Random, x: Project, delta: Fraction, resolution: int) -> Project:
    return make_project(
        (e.time, e.amount + delta * Fraction(rng.randint(-resolution, resolution), resolution))
        for e in x.events
    )


def check_lsc(
    F: PaybackFunctional,
    x: Project,
    d,
    deltas: Sequence[Fraction],
    seed: int = 0,
    samples: Optional[int] = None,
) -> AxiomReport:
    """Amount perturbations of x within each radius must keep F above d.

    Times stay fixed. The two corner perturbations (every amount +delta,
    every amount -delta) are always tried first. ``stable_delta`` is the
    largest radius with no dropping sample; the check is violated when no
    tested radius is stable.
    """
    d = Fraction(d)
    if d <= 0:
        raise PreconditionError(f"LSC threshold d must be positive, got {d}")
    if not deltas or any(delta <= 0 for delta in deltas):
        raise PreconditionError("LSC radii must be positive")
    samples = samples or int(analysis_config.get_axiom_setting("lsc_samples"))
    collector = _Collector(_max_witnesses())

    fx = F(x)
    if not fx > ExtendedTime(d):
        return collector.report(
            AxiomName.LSC, F, seed,
            applicable=False,
            note=f"precondition F(x) > d fails: F(x) = {fx}, d = {d}",
        )

    rng = random.Random(seed)
    resolution = 64
    stable = None
    first_drop = None
    for delta in sorted(deltas):
        perturbations = [
            make_project((e.time, e.amount + delta) for e in x.events),
            make_project((e.time, e.amount - delta) for e in x.events),
        ]
        perturbations += [_perturb(rng, x, delta, resolution) for _ in range(samples)]
        dropped = None
        for p in perturbations:
            if not _alpha_defined(F.alpha, [p]):
                continue
            collector.trials += 1
            if F(p) <= ExtendedTime(d):
                dropped = p
                break
        if dropped is None:
            stable = delta
        elif first_drop is None:
            first_drop = (delta, dropped)

    if stable is None and first_drop is not None:
        delta, dropped = first_drop
        collector.record(lambda: Witness(
            axiom=AxiomName.LSC,
            inputs=[x, dropped],
            parameters={"d": d, "delta": delta},
            observed=[fx, F(dropped)],
            expected_relation=f"F(x) > d implies F(perturbed) > d = {d}",
        ))
    return collector.report(AxiomName.LSC, F, seed, stable_delta=stable)


def _lsc_radius(F: PaybackFunctional, x: Project) -> Optional[Fraction]:
    """Sign margin of the stream F actually inspects, mapped back to x's amounts."""
    if F.alpha is None:
        return sign_margin(x)
    margin = sign_margin(discount_stream(x, F.alpha))
    if margin is None:
        return None
    largest = max((factor(F.alpha, t) for t in x.times), default=Fraction(1))
    return margin / max(Fraction(1), largest)


def check_lsc_suite(
    F: PaybackFunctional,
    trials: int,
    seed: int = 0,
    params: Optional[GeneratorParams] = None,
    samples: Optional[int] = None,
) -> AxiomReport:
    """LSC over generated (x, d) with F(x) > d, at radii below the sign margin.

    d is F(x)/2 for finite F(x) and the generator time range otherwise;
    projects with F(x) = 0 are skipped.
    """
    if trials <= 0:
        raise PreconditionError("trials must be positive")
    params = _resolve(F, params)
    rng = random.Random(seed)
    collector = _Collector(_max_witnesses())

    cases = 0
    attempts = 0
    while cases < trials and attempts < 20 * trials:
        attempts += 1
        x = gen_project(rng, params)
        fx = F(x)
        radius = _lsc_radius(F, x)
        if fx == TIME_ZERO or radius is None:
            continue
        d = fx.value / 2 if fx.is_finite else params.time_range
        cases += 1
        report = check_lsc(F, x, d, [radius], seed=rng.getrandbits(64), samples=samples)
        collector.trials += report.trials
        for witness in report.violations:
            collector.record(lambda: witness)

    return collector.report(
        AxiomName.LSC, F, seed,
        applicable=cases > 0,
        note=None if cases else "no generated project has F(x) > 0",
    )


def check_alpha_comp(
    F: PaybackFunctional,
    alpha: DiscountFunction,
    trials: int,
    seed: int = 0,
    params: Optional[GeneratorParams] = None,
) -> AxiomReport:
    """F(-a 1_0 + b 1_tau) = tau for 0 < a <= alpha(tau) b, boundary included.

    tau ranges over the positive times where alpha is exact: the table
    times, or the integer grid for an exponential alpha.
    """
    if trials <= 0:
        raise PreconditionError("trials must be positive")
    params = params or default_params()
    rng = random.Random(seed)
    collector = _Collector(_max_witnesses())

    taus = [t for t in params_for_alpha(alpha, params).time_grid or () if t > 0]
    if alpha.form is not DiscountForm.IDENTITY and not taus:
        raise PreconditionError("discount function has no positive exact time to sample")

    for trial in range(trials):
        if taus:
            tau = rng.choice(taus)
        else:
            tau = draw_rational(rng, ZERO, params.time_range, params.max_denominator, open_low=True)
        b = draw_rational(rng, ZERO, params.amount_range, params.max_denominator, open_low=True)
        # every fourth trial sits on the boundary a = alpha(tau) b
        u = Fraction(1) if trial % 4 == 0 else draw_rational(
            rng, ZERO, Fraction(1), params.max_denominator, open_low=True
        )
        a = factor(alpha, tau) * b * u
        x = make_project([(0, -a), (tau, b)])
        if not _alpha_defined(F.alpha, [x]):
            continue
        collector.trials += 1
        observed = F(x)
        if observed != ExtendedTime(tau):
            collector.record(lambda: Witness(
                axiom=AxiomName.ALPHA_COMP,
                inputs=[x],
                parameters={"a": a, "b": b, "tau": tau},
                observed=[observed],
                expected_relation=f"F(x) = tau = {tau}",
            ))
    return collector.report(AxiomName.ALPHA_COMP, F, seed)


def check_alpha_mon(
    F: PaybackFunctional,
    alpha: DiscountFunction,
    trials: int,
    seed: int = 0,
    params: Optional[GeneratorParams] = None,
) -> AxiomReport:
    """x^(alpha) <= y^(alpha) implies F(x) >= F(y).

    Pairs are generated dominated in discounted space and mapped back
    through invert(alpha).
    """
    if trials <= 0:
        raise PreconditionError("trials must be positive")
    params = params_for_alpha(alpha, params or default_params())
    rng = random.Random(seed)
    collector = _Collector(_max_witnesses())
    inverse = invert(alpha)

    def usable(ps: List[Project]) -> bool:
        return _alpha_defined(alpha, ps) and _alpha_defined(F.alpha, ps)

    def violates(ps: List[Project]) -> bool:
        return (
            usable(ps)
            and dominates(discount_stream(ps[0], alpha), discount_stream(ps[1], alpha))
            and F(ps[0]) < F(ps[1])
        )

    pairs = []
    for x_raw, y_raw in CANNED_ALPHA_MON:
        x, y = make_project(x_raw), make_project(y_raw)
        if usable([x, y]) and dominates(discount_stream(x, alpha), discount_stream(y, alpha)):
            pairs.append((x, y))
    canned = len(pairs)
    for _ in range(trials):
        u, v = gen_dominated_pair(rng, params)
        pairs.append((discount_stream(u, inverse), discount_stream(v, inverse)))

    for index, (x, y) in enumerate(pairs):
        if not usable([x, y]):
            continue
        collector.trials += 1
        if F(x) < F(y):
            if index >= canned:
                x, y = _shrink([x, y], violates)
            collector.record(lambda: Witness(
                axiom=AxiomName.ALPHA_MON,
                inputs=[x, y],
                observed=[F(x), F(y)],
                expected_relation="x^(alpha) <= y^(alpha) implies F(x) >= F(y)",
            ))
    return collector.report(AxiomName.ALPHA_MON, F, seed)


class AxiomHarness:
    """Runs a selection of axiom suites against one functional."""

    def __init__(
        self,
        alpha: Optional[DiscountFunction] = None,
        params: Optional[GeneratorParams] = None,
    ):
        self.alpha = alpha or DiscountFunction.tabulated(analysis_config.get_default_discount_table())
        self.params = params or default_params()

    def run(self, F: PaybackFunctional, axioms: Iterable[AxiomName], trials: int, seed: int = 0) -> List[AxiomReport]:
        reports = []
        for axiom in axioms:
            if axiom is AxiomName.COMP:
                reports.append(check_comp(F, trials, seed, self.params))
            elif axiom is AxiomName.ACONS:
                reports.append(check_acons(F, trials, seed, self.params))
            elif axiom is AxiomName.MON:
                reports.append(check_mon(F, trials, seed, self.params))
            elif axiom is AxiomName.LSC:
                reports.append(check_lsc_suite(F, trials, seed, self.params))
            elif axiom is AxiomName.ALPHA_COMP:
                reports.append(check_alpha_comp(F, F.alpha or self.alpha, trials, seed, self.params))
            else:
                reports.append(check_alpha_mon(F, F.alpha or self.alpha, trials, seed, self.params))
        return reports

    @staticmethod
    def regressions(F: PaybackFunctional, reports: Iterable[AxiomReport]) -> List[AxiomReport]:
        """Reports with violations of an axiom the functional provably satisfies."""
        try:
            proven = PROVEN_AXIOMS[FunctionalName(F.name)]
        except ValueError:
            proven = frozenset(AxiomName)
        return [r for r in reports if r.axiom in proven and r.violation_count]
