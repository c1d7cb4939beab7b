"""Solenoid type descriptors and their supernatural numbers.

A solenoid is described by its bonding sequence w1, w2, ... of integers
>= 2.  Full information is an eventually periodic description (a finite
prefix followed by a period block repeated forever); a prefix alone means
only a finite horizon of the sequence is known, and questions that depend
on the unseen tail then come back as horizon-limited verdicts instead of
guesses.

The formal product w1*w2*... is carried as a supernatural number, a map
from primes to exponents in {1, 2, ...} or infinity.  Products of entries
are never materialized as integers anywhere in this module; everything
downstream needs only gcds and per-prime exponents.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

from ._primes import factorize

INFINITY = math.inf

# Bonding degrees are kept within 64-bit magnitude; factored carries make
# anything larger pointless.
MAX_ENTRY = 2**63 - 1

_TOKEN_RE = re.compile(r"^[0-9]+$")


class TypeSyntaxError(ValueError):
    """Raised when a type descriptor string does not match the grammar."""


class HorizonError(ValueError):
    """Raised when an operation needs tail information a prefix-only
    description cannot provide."""


@dataclass(frozen=True)
class Verdict:
    """Answer to a question about the infinite tail of a bonding sequence.

    ``decided`` is True when the description pins the answer down for the
    whole sequence; otherwise ``value`` only reports what the known
    horizon shows.
    """

    decided: bool
    value: bool

    @property
    def is_decided_true(self) -> bool:
        return self.decided and self.value

    @property
    def is_decided_false(self) -> bool:
        return self.decided and not self.value

    @property
    def label(self) -> str:
        if self.decided:
            return "true" if self.value else "false"
        return f"horizon-limited({'true' if self.value else 'false'})"

    def __str__(self) -> str:
        return self.label


DECIDED_TRUE = Verdict(True, True)
DECIDED_FALSE = Verdict(True, False)


def horizon_limited(value: bool) -> Verdict:
    return Verdict(False, value)


@dataclass(frozen=True)
class SolenoidType:
    """Eventually periodic (or horizon-limited) bonding sequence.

    ``prefix`` holds the first entries verbatim.  When ``period`` is
    present the sequence continues with the period block repeated
    forever; when it is None only the prefix is known.
    """

    prefix: tuple[int, ...] = ()
    period: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "prefix", tuple(self.prefix))
        if self.period is not None:
            object.__setattr__(self, "period", tuple(self.period))
            if not self.period:
                raise TypeSyntaxError("period block must be nonempty")
        if not self.prefix and self.period is None:
            raise TypeSyntaxError("descriptor carries no entries at all")
        for w in self.prefix + (self.period or ()):
            if not isinstance(w, int) or isinstance(w, bool):
                raise TypeSyntaxError(f"entry {w!r} is not an integer")
            if w < 2:
                raise TypeSyntaxError(f"entry {w} is < 2")
            if w > MAX_ENTRY:
                raise TypeSyntaxError(f"entry {w} exceeds 64-bit magnitude")

    @property
    def has_period(self) -> bool:
        return self.period is not None

    @property
    def horizon(self) -> int | None:
        """Largest stage with a known entry, or None when unbounded."""
        return None if self.has_period else len(self.prefix)

    def term(self, n: int) -> int:
        """Entry w_n for n >= 1."""
        if n < 1:
            raise ValueError(f"term index {n} is < 1")
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        if self.period is None:
            raise HorizonError(
                f"entry w_{n} lies beyond the known horizon of {self}"
            )
        return self.period[(n - len(self.prefix) - 1) % len(self.period)]

    def terms(self, stop: int) -> Iterator[int]:
        """Yield w_1, ..., w_stop."""
        for n in range(1, stop + 1):
            yield self.term(n)

    def require_stage(self, n: int) -> None:
        """Fail with HorizonError unless entries through stage n exist."""
        if n < 0:
            raise ValueError(f"stage {n} is negative")
        if self.period is None and n > len(self.prefix):
            raise HorizonError(
                f"stage {n} lies beyond the known horizon of {self}"
            )

    def tail_entry_values(self, after: int) -> frozenset[int]:
        """Distinct entries occurring at stages strictly greater than
        ``after`` (within the horizon when there is no period)."""
        values = set(self.prefix[after:])
        if self.period is not None:
            values.update(self.period)
        return frozenset(values)

    def __str__(self) -> str:
        left = ",".join(str(w) for w in self.prefix)
        right = "" if self.period is None else ",".join(str(w) for w in self.period)
        return f"{left}|{right}"


def _parse_side(text: str, side: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    entries = []
    for token in text.split(","):
        token = token.strip()
        if not _TOKEN_RE.match(token):
            raise TypeSyntaxError(f"bad token {token!r} in {side}")
        entries.append(int(token))
    return tuple(entries)


def parse_type(text: str) -> SolenoidType:
    """Parse a descriptor ``prefix|period``.

    Each side is a comma-separated list of decimal integers >= 2;
    whitespace around tokens is ignored.  An empty right side means the
    tail is unknown; an empty left side means the sequence is purely
    periodic.  Both sides empty is an error.

    >>> parse_type("2,3|5,7")
    SolenoidType(prefix=(2, 3), period=(5, 7))
    """
    if text.count("|") != 1:
        raise TypeSyntaxError("descriptor must contain exactly one '|'")
    left, right = text.split("|")
    prefix = _parse_side(left, "prefix")
    period = _parse_side(right, "period")
    return SolenoidType(prefix, period if period else None)


def format_type(type_: SolenoidType) -> str:
    """Canonical descriptor (no whitespace); parses back to an equal value."""
    return str(type_)


@dataclass(frozen=True)
class SupernaturalNumber:
    """Formal product of the whole bonding sequence, prime by prime.

    ``exponents`` maps each prime dividing some entry to its total
    exponent across the sequence; INFINITY marks primes that divide a
    period entry and therefore recur forever.  Primes with exponent zero
    are absent.
    """

    exponents: Mapping[int, int | float]

    def __post_init__(self) -> None:
        cleaned = {}
        for p, e in self.exponents.items():
            if e == INFINITY:
                cleaned[p] = INFINITY
            elif isinstance(e, int) and e >= 1:
                cleaned[p] = e
            else:
                raise ValueError(f"exponent of {p} must be >= 1 or INFINITY, got {e!r}")
        object.__setattr__(self, "exponents", cleaned)

    def exponent(self, p: int) -> int | float:
        return self.exponents.get(p, 0)

    @property
    def infinite_support(self) -> frozenset[int]:
        """Primes with infinite exponent."""
        return frozenset(p for p, e in self.exponents.items() if e == INFINITY)

    def __str__(self) -> str:
        if not self.exponents:
            return "1"
        parts = []
        for p in sorted(self.exponents):
            e = self.exponents[p]
            if e == INFINITY:
                parts.append(f"{p}^oo")
            elif e == 1:
                parts.append(str(p))
            else:
                parts.append(f"{p}^{e}")
        return "*".join(parts)


def supernatural_of(type_: SolenoidType) -> SupernaturalNumber:
    """Supernatural number of the full product w1*w2*...

    Needs a period: a prefix alone does not determine the product.  A
    prime gets exponent INFINITY exactly when it divides some period
    entry; otherwise its exponent is the (finite, exact) sum of its
    exponents in the prefix entries.
    """
    if type_.period is None:
        raise HorizonError(f"supernatural number of {type_} needs a period")
    exponents: dict[int, int | float] = {}
    for w in type_.prefix:
        for p, e in factorize(w).items():
            exponents[p] = exponents.get(p, 0) + e
    for w in type_.period:
        for p in factorize(w):
            exponents[p] = INFINITY
    return SupernaturalNumber(exponents)


def tail_coprime(type_: SolenoidType, r: int) -> Verdict:
    """Is r coprime to all but finitely many entries of the sequence?

    With a period the question is decided: true iff no prime factor of r
    divides a period entry (prefix entries are finitely many and cannot
    matter).  Without a period the verdict is horizon-limited; its value
    reports whether the known entries past the last one sharing a factor
    with r exist and are clean, i.e. whether the collisions had already
    stopped before the horizon.
    """
    if r < 1:
        raise ValueError(f"degree {r} is < 1")
    if r == 1:
        # 1 is coprime to every integer, no tail information needed.
        return DECIDED_TRUE
    if type_.period is not None:
        ok = all(math.gcd(r, w) == 1 for w in type_.period)
        return DECIDED_TRUE if ok else DECIDED_FALSE
    # Period-free: the prefix is nonempty.  Entries past the last one
    # sharing a factor with r are coprime by construction, so the horizon
    # value reduces to whether that clean run is nonempty.
    return horizon_limited(math.gcd(r, type_.prefix[-1]) == 1)


def types_equivalent(a: SolenoidType, b: SolenoidType) -> bool:
    """Same solenoid up to homeomorphism.

    Two eventually periodic descriptions give homeomorphic solenoids iff
    their supernatural numbers have the same set of infinite-exponent
    primes: finite supports are finite, so the finite exponents always
    agree up to finitely many primes.
    """
    return (
        supernatural_of(a).infinite_support == supernatural_of(b).infinite_support
    )
