"""Discount functions alpha: R+ -> R++ with alpha(0) = 1."""

from dataclasses import dataclass, field
from enum import Enum as PyEnum
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Tuple, Union

from payback.exceptions import InvalidDiscountError
from payback.utils.rational import RationalLike, to_rational

DEFAULT_PRECISION = 30


class DiscountForm(PyEnum):
    """Representation of a discount function."""
    IDENTITY = "identity"
    TABLE = "table"
    EXPONENTIAL = "exponential"


@dataclass(frozen=True)
class DiscountFunction:
    """A discount function in one of three forms.

    TABLE is partial: it only has to define the factor at the event times of
    the projects it is applied to. Factors above 1 are allowed (negative
    interest rates). EXPONENTIAL is (1 + rate)^(-t); it is exact at integer
    times and a ``precision``-digit approximation elsewhere.
    """

    form: DiscountForm
    table: Tuple[Tuple[Fraction, Fraction], ...] = ()
    rate: Optional[Fraction] = None
    precision: int = DEFAULT_PRECISION
    _lookup: Dict[Fraction, Fraction] = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.form is DiscountForm.TABLE:
            lookup = dict(self.table)
            object.__setattr__(self, "_lookup", lookup)
        elif self.form is DiscountForm.EXPONENTIAL:
            if self.rate is None or self.rate <= -1:
                raise InvalidDiscountError(f"exponential rate must exceed -1, got {self.rate}")
            if self.precision <= 0:
                raise InvalidDiscountError(f"precision must be positive, got {self.precision}")

    @classmethod
    def identity(cls) -> "DiscountFunction":
        return cls(DiscountForm.IDENTITY)

    @classmethod
    def tabulated(
        cls,
        pairs: Union[Mapping[RationalLike, RationalLike], Iterable[Tuple[RationalLike, RationalLike]]],
    ) -> "DiscountFunction":
        """Build a TABLE form; alpha(0) = 1 is implied when 0 is absent."""
        items = pairs.items() if isinstance(pairs, Mapping) else pairs
        table: Dict[Fraction, Fraction] = {}
        for raw_time, raw_factor in items:
            time, factor = to_rational(raw_time), to_rational(raw_factor)
            if time < 0:
                raise InvalidDiscountError(f"discount table time {time} is negative")
            if factor <= 0:
                raise InvalidDiscountError(f"discount factor at time {time} must be positive, got {factor}")
            if time in table and table[time] != factor:
                raise InvalidDiscountError(f"conflicting discount factors at time {time}")
            table[time] = factor
        if table.setdefault(Fraction(0), Fraction(1)) != 1:
            raise InvalidDiscountError(f"discount factor at time 0 must be 1, got {table[Fraction(0)]}")
        return cls(DiscountForm.TABLE, table=tuple(sorted(table.items())))

    @classmethod
    def exponential(cls, rate: RationalLike, precision: int = DEFAULT_PRECISION) -> "DiscountFunction":
        return cls(DiscountForm.EXPONENTIAL, rate=to_rational(rate), precision=precision)

    @property
    def is_exact(self) -> bool:
        """Exact at every time (IDENTITY and TABLE)."""
        return self.form is not DiscountForm.EXPONENTIAL

    def is_exact_at(self, t: Fraction) -> bool:
        return self.is_exact or t.denominator == 1

    @property
    def times(self) -> Tuple[Fraction, ...]:
        return tuple(t for t, _ in self.table)

    def lookup(self, t: Fraction) -> Optional[Fraction]:
        return self._lookup.get(t)

    def __str__(self) -> str:
        if self.form is DiscountForm.IDENTITY:
            return "identity"
        if self.form is DiscountForm.EXPONENTIAL:
            return f"exponential(rate={self.rate})"
        inner = ", ".join(f"{t}: {f}" for t, f in self.table)
        return f"table{{{inner}}}"
