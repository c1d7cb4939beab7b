"""Direct-limit arithmetic in the rationals.

The first Cech cohomology of a solenoid with coefficients in a ring R is
the direct limit of R --w1--> R --w2--> R --w3--> ... , realized inside
the rationals as the group of fractions a/(w1*...*wn).  Over Q every
connecting map is a bijection and the limit is one copy of Q; over Z the
limit is not finitely generated, and this module produces the witnesses:
any finite generator set spans a cyclic subgroup of Q, and some stage
element 1/(w1*...*wn) escapes it.

Denominators are carried in factored form so that deep stages never
materialize the product w1*...*wn except on explicit request.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from ._primes import factorize
from .typealg import HorizonError, SolenoidType


def _mul_factors(factors: dict[int, int]) -> int:
    value = 1
    for p, e in factors.items():
        value *= p**e
    return value


@dataclass(frozen=True)
class Fraction:
    """Reduced fraction with a factored positive denominator.

    ``denominator_factors`` is a sorted tuple of (prime, exponent) pairs
    multiplying out to the denominator; the sign lives on the numerator.
    """

    numerator: int
    denominator_factors: tuple[tuple[int, int], ...] = ()

    @classmethod
    def from_factored(cls, numerator: int, factors: dict[int, int]) -> Fraction:
        """Build a/(product of factors), reducing prime by prime."""
        if numerator == 0:
            return cls(0, ())
        reduced = {}
        for p, e in factors.items():
            cancel = 0
            n = numerator
            while cancel < e and n % p == 0:
                n //= p
                cancel += 1
            numerator = n
            if e - cancel > 0:
                reduced[p] = e - cancel
        return cls(numerator, tuple(sorted(reduced.items())))

    @classmethod
    def of(cls, numerator: int, denominator: int = 1) -> Fraction:
        if denominator == 0:
            raise ZeroDivisionError("denominator is zero")
        if denominator < 0:
            numerator, denominator = -numerator, -denominator
        return cls.from_factored(numerator, factorize(denominator))

    @property
    def denominator(self) -> int:
        return _mul_factors(dict(self.denominator_factors))

    @property
    def is_zero(self) -> bool:
        return self.numerator == 0

    def scale(self, k: int) -> Fraction:
        """k times this fraction."""
        return Fraction.from_factored(
            self.numerator * k, dict(self.denominator_factors)
        )

    def __str__(self) -> str:
        return f"{self.numerator}/{self.denominator}"


ZERO = Fraction(0, ())


def parse_fraction(text: str) -> Fraction:
    """Parse "a/b" or a bare integer "a"."""
    text = text.strip()
    if "/" in text:
        num_text, _, den_text = text.partition("/")
        try:
            return Fraction.of(int(num_text), int(den_text))
        except ValueError as exc:
            raise ValueError(f"bad fraction {text!r}") from exc
    try:
        return Fraction.of(int(text))
    except ValueError as exc:
        raise ValueError(f"bad fraction {text!r}") from exc


@dataclass(frozen=True)
class RationalCyclicSubgroup:
    """Subgroup of Q generated by one nonnegative fraction.

    Every finitely generated subgroup of Q has this form, which turns
    membership and escape questions into single divisibility checks.  A
    zero generator denotes the trivial group.
    """

    generator: Fraction

    def __post_init__(self) -> None:
        if self.generator.numerator < 0:
            raise ValueError("generator must be >= 0")

    @property
    def is_trivial(self) -> bool:
        return self.generator.is_zero

    def __str__(self) -> str:
        return f"<{self.generator}>"


TRIVIAL_SUBGROUP = RationalCyclicSubgroup(ZERO)


@dataclass(frozen=True)
class LimitElement:
    """Stage-n coordinate of a limit element: represents value/(w1*...*wn)."""

    stage: int
    value: int

    def __post_init__(self) -> None:
        if self.stage < 0:
            raise ValueError(f"stage {self.stage} is negative")

    def __str__(self) -> str:
        return f"stage={self.stage} value={self.value}"


def inject(type_: SolenoidType, elem: LimitElement) -> Fraction:
    """Image of a stage-n element in Q, as the reduced a/(w1*...*wn).

    Compatible with the connecting maps: the stage-n element a and the
    stage-(n+1) element a*w_{n+1} land on the same fraction.
    """
    type_.require_stage(elem.stage)
    factors: dict[int, int] = {}
    for w in type_.terms(elem.stage):
        for p, e in factorize(w).items():
            factors[p] = factors.get(p, 0) + e
    return Fraction.from_factored(elem.value, factors)


def format_element(type_: SolenoidType, elem: LimitElement) -> str:
    """Render "stage=n value=a (= a/b)" with the reduced fraction."""
    return f"{elem} (= {inject(type_, elem)})"


def span(generators: Iterable[Fraction]) -> RationalCyclicSubgroup:
    """Cyclic normal form of the subgroup of Q generated by the inputs.

    The span of a_i/b_i is generated by gcd(a_i * L/b_i)/L with L the
    lcm of the denominators; the empty span is the trivial group.
    """
    gens = [g for g in generators if not g.is_zero]
    if not gens:
        return TRIVIAL_SUBGROUP
    lcm_factors: dict[int, int] = {}
    for g in gens:
        for p, e in g.denominator_factors:
            lcm_factors[p] = max(lcm_factors.get(p, 0), e)
    lcm = _mul_factors(lcm_factors)
    scaled = 0
    for g in gens:
        scaled = math.gcd(scaled, abs(g.numerator) * (lcm // g.denominator))
    return RationalCyclicSubgroup(Fraction.from_factored(scaled, lcm_factors))


def contains(group: RationalCyclicSubgroup, x: Fraction) -> bool:
    """Is x an integer multiple of the group's generator?"""
    g = group.generator
    if g.is_zero:
        return x.is_zero
    if x.is_zero:
        return True
    # x/g = (x.num * g.den) / (x.den * g.num); g.num > 0 here.
    return (x.numerator * g.denominator) % (x.denominator * g.numerator) == 0


def non_fg_witness(
    type_: SolenoidType, candidate: RationalCyclicSubgroup
) -> LimitElement:
    """Least stage n >= 1 whose element 1/(w1*...*wn) escapes the candidate.

    Such a stage always exists for a periodic type: the candidate's
    denominator is a fixed integer while the stage denominators grow
    without bound in every prime of the period.  This is the constructive
    content of the limit over Z not being finitely generated.
    """
    if type_.period is None:
        raise HorizonError(f"witness search over {type_} needs a period")
    n = 1
    while True:
        elem = LimitElement(n, 1)
        if not contains(candidate, inject(type_, elem)):
            return elem
        n += 1


def limit_rank_over_Q(type_: SolenoidType, stages: int) -> int:
    """Rank of the limit over Q after checking stages 1..n connect bijectively.

    Multiplication by w is a bijection of Q exactly when w is nonzero;
    the check is performed for every stage up to the horizon, after which
    the limit of copies of Q along bijections is a single copy of Q.
    """
    if stages < 0:
        raise ValueError(f"stage horizon {stages} is negative")
    type_.require_stage(stages)
    for n in range(1, stages + 1):
        if type_.term(n) == 0:
            raise ValueError(f"connecting map at stage {n} is not a bijection")
    return 1
