"""Discount factors and the discounted stream transform x -> x^(alpha)."""

from decimal import Decimal, localcontext
from fractions import Fraction

from payback.exceptions import DiscountTableMissError, InvalidEventError
from payback.models.discount import DiscountForm, DiscountFunction
from payback.models.project import Event, Project
from payback.utils.rational import RationalLike, to_rational

ONE = Fraction(1)


def factor(alpha: DiscountFunction, t: RationalLike) -> Fraction:
    """Discount factor alpha(t).

    EXPONENTIAL factors are exact at integer times; elsewhere they are
    rational images of a ``precision``-digit Decimal power.
    """
    t = to_rational(t)
    if t < 0:
        raise InvalidEventError(f"discount factor is undefined at negative time {t}")

    if alpha.form is DiscountForm.IDENTITY:
        return ONE

    if alpha.form is DiscountForm.TABLE:
        value = alpha.lookup(t)
        if value is None:
            raise DiscountTableMissError(t)
        return value

    base = 1 + alpha.rate
    if t.denominator == 1:
        return base ** -t.numerator
    with localcontext() as ctx:
        ctx.prec = alpha.precision
        d_base = Decimal(base.numerator) / Decimal(base.denominator)
        d_exp = Decimal(t.numerator) / Decimal(t.denominator)
        return Fraction(d_base ** -d_exp)


def is_exact_for(x: Project, alpha: DiscountFunction) -> bool:
    """True when every factor sampled by discount_stream(x, alpha) is exact."""
    return all(alpha.is_exact_at(e.time) for e in x.events)


def discount_stream(x: Project, alpha: DiscountFunction) -> Project:
    """x^(alpha): every amount scaled by the factor at its own time."""
    if alpha.form is DiscountForm.IDENTITY or x.is_zero:
        return x
    # factors are positive, so the result stays canonical
    return Project(tuple(Event(e.time, e.amount * factor(alpha, e.time)) for e in x.events))


def invert(alpha: DiscountFunction) -> DiscountFunction:
    """1/alpha, so that discount_stream(discount_stream(x, a), invert(a)) == x."""
    if alpha.form is DiscountForm.IDENTITY:
        return alpha
    if alpha.form is DiscountForm.TABLE:
        return DiscountFunction.tabulated((t, 1 / f) for t, f in alpha.table)
    # (1 + r)^(-t) inverts to (1 + r')^(-t) with 1 + r' = 1 / (1 + r)
    return DiscountFunction.exponential(1 / (1 + alpha.rate) - 1, precision=alpha.precision)
