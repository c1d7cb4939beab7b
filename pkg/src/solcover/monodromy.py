"""Covering classification from a monodromy permutation.

An r-fold covering of a solenoid is encoded by the permutation sigma of
the sheets {1, ..., r} induced by one trip around the base circle.  Deeper
stages see the powers sigma_n = sigma^(w1*...*wn), whose orbits only ever
split; once every orbit length is coprime to all later bonding degrees
the partition is frozen, and the frozen orbits are exactly the connected
components of the covering space.  Each component covers the base with
degree equal to its orbit length and is itself homeomorphic to the base.

Exponents w1*...*wn are carried factored and reduced modulo each cycle
length on the fly, so stage indices in the millions cost nothing.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from ._primes import factorize
from .typealg import HorizonError, SolenoidType, Verdict, tail_coprime

_CYCLE_RE = re.compile(r"\(([^()]*)\)")
_ID_RE = re.compile(r"^id:([0-9]+)$")


class Permutation:
    """Bijection of {1, ..., r}, held as an image tuple with its disjoint
    cycles (fixed points as 1-cycles) derived on demand."""

    __slots__ = ("_images", "_cycles")

    def __init__(self, images: Sequence[int]):
        images = tuple(images)
        if not images:
            raise ValueError("degree must be >= 1")
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"images {images} are not a bijection of 1..{len(images)}")
        self._images = images
        self._cycles: tuple[tuple[int, ...], ...] | None = None

    @classmethod
    def identity(cls, degree: int) -> Permutation:
        if degree < 1:
            raise ValueError("degree must be >= 1")
        return cls(range(1, degree + 1))

    @classmethod
    def from_cycles(
        cls, cycles: Iterable[Sequence[int]], degree: int | None = None
    ) -> Permutation:
        """Build from disjoint cycles; unlisted points are fixed.

        The degree defaults to the largest point mentioned.
        """
        cycles = [tuple(c) for c in cycles]
        points = [p for c in cycles for p in c]
        if degree is None:
            degree = max(points, default=0)
        if degree < 1:
            raise ValueError("degree must be >= 1")
        seen = set()
        for p in points:
            if not isinstance(p, int) or p < 1:
                raise ValueError(f"point {p!r} is not a positive integer")
            if p > degree:
                raise ValueError(f"point {p} exceeds degree {degree}")
            if p in seen:
                raise ValueError(f"repeated point {p}")
            seen.add(p)
        images = list(range(1, degree + 1))
        for c in cycles:
            for i, p in enumerate(c):
                images[p - 1] = c[(i + 1) % len(c)]
        return cls(images)

    @property
    def degree(self) -> int:
        return len(self._images)

    def __call__(self, point: int) -> int:
        return self._images[point - 1]

    @property
    def images(self) -> tuple[int, ...]:
        return self._images

    @property
    def cycles(self) -> tuple[tuple[int, ...], ...]:
        """Disjoint cycles, each rotated smallest-first, ordered by their
        smallest point; together they partition {1, ..., degree}."""
        if self._cycles is None:
            self._cycles = tuple(_decompose(self._images))
        return self._cycles

    def cycle_lengths(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.cycles)

    @property
    def is_identity(self) -> bool:
        return all(img == i + 1 for i, img in enumerate(self._images))

    def compose(self, other: Permutation) -> Permutation:
        """self after other: (self.compose(other))(x) = self(other(x))."""
        if other.degree != self.degree:
            raise ValueError("degrees differ")
        return Permutation(tuple(self._images[j - 1] for j in other._images))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self._images == other._images

    def __hash__(self) -> int:
        return hash(self._images)

    def __str__(self) -> str:
        if self.is_identity:
            return f"id:{self.degree}"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles)

    def __repr__(self) -> str:
        return f"Permutation({list(self._images)!r})"


def _decompose(images: tuple[int, ...]) -> list[tuple[int, ...]]:
    seen = [False] * len(images)
    cycles = []
    for start in range(1, len(images) + 1):
        if seen[start - 1]:
            continue
        cycle = []
        p = start
        while not seen[p - 1]:
            seen[p - 1] = True
            cycle.append(p)
            p = images[p - 1]
        cycles.append(tuple(cycle))
    return cycles


def parse_permutation(text: str) -> Permutation:
    """Parse cycle notation "(1 2)(3 4 5)" or identity "id:r"."""
    text = text.strip()
    m = _ID_RE.match(text)
    if m:
        return Permutation.identity(int(m.group(1)))
    cycles = []
    covered = []
    for m in _CYCLE_RE.finditer(text):
        covered.append((m.start(), m.end()))
        tokens = m.group(1).split()
        if not tokens:
            raise ValueError("empty cycle")
        if not all(t.isdigit() for t in tokens):
            raise ValueError(f"bad cycle {m.group(0)!r}")
        cycles.append(tuple(int(t) for t in tokens))
    remainder = text
    for start, end in reversed(covered):
        remainder = remainder[:start] + remainder[end:]
    if remainder.strip() or not cycles:
        raise ValueError(f"cannot parse permutation {text!r}")
    return Permutation.from_cycles(cycles)


def full_cycle(degree: int) -> Permutation:
    """The r-cycle (1 2 ... r), the canonical connected monodromy."""
    if degree < 1:
        raise ValueError("degree must be >= 1")
    return Permutation.from_cycles([tuple(range(1, degree + 1))], degree)


@dataclass(frozen=True)
class FactoredExponent:
    """Product of bonding degrees kept as a prime multiset.

    Residues modulo a cycle length and gcds with a cycle length are read
    off the factors; the integer value itself is materialized only on
    explicit request.
    """

    factors: tuple[tuple[int, int], ...] = ()

    @classmethod
    def from_int(cls, n: int) -> FactoredExponent:
        if n < 1:
            raise ValueError(f"exponent {n} is < 1")
        return cls(tuple(sorted(factorize(n).items()))) if n > 1 else cls()

    @classmethod
    def stage_product(cls, type_: SolenoidType, stage: int) -> FactoredExponent:
        """w1 * ... * w_stage; stage 0 is the empty product."""
        return cls.range_product(type_, 0, stage)

    @classmethod
    def range_product(
        cls, type_: SolenoidType, start: int, stop: int
    ) -> FactoredExponent:
        """Product of w_n over start < n <= stop."""
        if start < 0 or stop < start:
            raise ValueError(f"bad stage range ({start}, {stop}]")
        type_.require_stage(stop)
        counts: dict[int, int] = {}
        prefix_hi = min(stop, len(type_.prefix))
        for w in type_.prefix[start:prefix_hi]:
            counts[w] = counts.get(w, 0) + 1
        if stop > len(type_.prefix):
            period = type_.period
            assert period is not None
            p_len = len(period)
            lo = max(start, len(type_.prefix)) - len(type_.prefix)
            hi = stop - len(type_.prefix)
            # Period position j serves stages with offset t in [lo, hi),
            # t congruent to j mod the period length.
            for j, w in enumerate(period):
                n_occ = _count_congruent(lo, hi - 1, j, p_len)
                if n_occ:
                    counts[w] = counts.get(w, 0) + n_occ
        exps: dict[int, int] = {}
        for w, k in counts.items():
            for p, e in factorize(w).items():
                exps[p] = exps.get(p, 0) + e * k
        return cls(tuple(sorted(exps.items())))

    def times(self, other: FactoredExponent) -> FactoredExponent:
        merged = dict(self.factors)
        for p, e in other.factors:
            merged[p] = merged.get(p, 0) + e
        return FactoredExponent(tuple(sorted(merged.items())))

    def mod(self, m: int) -> int:
        """Residue of the product modulo m, by modular exponentiation."""
        if m < 1:
            raise ValueError(f"modulus {m} is < 1")
        r = 1 % m
        for p, e in self.factors:
            r = (r * pow(p, e, m)) % m
        return r

    def gcd_int(self, n: int) -> int:
        """gcd of the product with a small integer n >= 1."""
        g = 1
        mine = dict(self.factors)
        for p, e in factorize(n).items():
            g *= p ** min(e, mine.get(p, 0))
        return g

    def value(self) -> int:
        """Materialize the integer; only sensible for shallow products."""
        v = 1
        for p, e in self.factors:
            v *= p**e
        return v

    @property
    def is_one(self) -> bool:
        return not self.factors

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return "*".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)


def _count_congruent(lo: int, hi: int, j: int, m: int) -> int:
    """Number of t in [lo, hi] with t % m == j (0 <= j < m)."""
    if hi < lo:
        return 0
    return (hi - j) // m - (lo - 1 - j) // m


def _split_cycle(cycle: tuple[int, ...], step: int) -> list[tuple[int, ...]]:
    """Cycles of the step-th power of a single cycle.

    A cycle of length l raised to a power congruent to step (mod l) falls
    apart into gcd(l, step) cycles of length l/gcd.
    """
    l = len(cycle)
    g = math.gcd(l, step)
    size = l // g
    return [
        tuple(cycle[(j + t * step) % l] for t in range(size)) for j in range(g)
    ]


def _power_cycles(
    cycles: Iterable[tuple[int, ...]], exponent_mod: "int | FactoredExponent"
) -> list[tuple[int, ...]]:
    out = []
    if isinstance(exponent_mod, FactoredExponent):
        for c in cycles:
            out.extend(_split_cycle(c, exponent_mod.mod(len(c))))
    else:
        for c in cycles:
            out.extend(_split_cycle(c, exponent_mod % len(c)))
    return out


def power(sigma: Permutation, exponent: "FactoredExponent | int") -> Permutation:
    """sigma raised to a (possibly factored) nonnegative power.

    Works cycle by cycle with the exponent reduced modulo each cycle
    length, so the product behind a FactoredExponent is never expanded.
    """
    if isinstance(exponent, int):
        if exponent < 0:
            raise ValueError("exponent must be >= 0")
    return Permutation.from_cycles(
        _power_cycles(sigma.cycles, exponent), sigma.degree
    )


def sigma_at_stage(type_: SolenoidType, sigma0: Permutation, n: int) -> Permutation:
    """Sheet permutation seen at stage n: sigma0^(w1*...*wn)."""
    if n == 0:
        return sigma0
    return power(sigma0, FactoredExponent.stage_product(type_, n))


@dataclass(frozen=True)
class StabilizationResult:
    """Stage after which the orbit partition is (or appears) frozen."""

    stage: int
    decided: bool


def _tail_values(type_: SolenoidType, n: int, period_values: frozenset[int]):
    if n >= len(type_.prefix):
        return period_values
    return period_values.union(type_.prefix[n:])


def _stabilize(
    type_: SolenoidType, sigma0: Permutation
) -> tuple[int, bool, list[tuple[int, ...]]]:
    """Shared scan: (stage, decided, orbit cycles at that stage)."""
    cycles = list(sigma0.cycles)
    if type_.period is not None:
        period_values = frozenset(type_.period)
        # Splits strictly increase the orbit count (bounded by the
        # degree) and each pending split lands within one period block,
        # so the scan provably stops well inside this cap.
        cap = len(type_.prefix) + (sigma0.degree + 1) * len(type_.period) + 2
        for n in range(cap):
            lengths = set(len(c) for c in cycles)
            tail = _tail_values(type_, n, period_values)
            if all(math.gcd(l, w) == 1 for l in lengths for w in tail):
                return n, True, cycles
            cycles = _power_cycles(cycles, type_.term(n + 1))
        raise AssertionError("orbit refinement exceeded its proven bound")
    last_split = 0
    count = len(cycles)
    frozen = cycles
    for n in range(1, len(type_.prefix) + 1):
        cycles = _power_cycles(cycles, type_.term(n))
        if len(cycles) != count:
            count = len(cycles)
            last_split = n
            frozen = cycles
    return last_split, False, frozen


def stabilization_stage(
    type_: SolenoidType, sigma0: Permutation
) -> StabilizationResult:
    """Least stage whose orbit lengths are coprime to every later entry.

    Orbits only refine as the stage grows and a permutation of r points
    has at most r orbits, so with a period the scan always terminates.
    Without a period nothing about the tail may be assumed: the result is
    then the last stage at which a split was observed within the horizon,
    flagged as undecided.
    """
    stage, decided, _ = _stabilize(type_, sigma0)
    return StabilizationResult(stage, decided)


@dataclass(frozen=True)
class Component:
    """One connected component of the covering space: an orbit of the
    stabilized sheet permutation."""

    length: int
    sheets: tuple[int, ...]
    tail_coprime: Verdict
    homeomorphic_to_base: bool


@dataclass(frozen=True)
class CoveringReport:
    """Full component decomposition of the covering encoded by sigma0."""

    degree: int
    base: SolenoidType
    monodromy: Permutation
    stabilization_stage: int
    stabilization_decided: bool
    components: tuple[Component, ...]
    connected: bool


def classify(type_: SolenoidType, sigma0: Permutation) -> CoveringReport:
    """Decompose the covering given by sigma0 into components.

    Components are the orbits of the sheet permutation at the
    stabilization stage, listed by smallest sheet label.  Each carries
    its covering degree (the orbit length), the tail-coprimality verdict
    for that length, and whether it is homeomorphic to the base, which
    holds whenever the verdict is decided true; at a decided
    stabilization stage that is every component.
    """
    stab = stabilization_stage(type_, sigma0)
    sigma_star = sigma_at_stage(type_, sigma0, stab.stage)
    components = []
    for orbit in sigma_star.cycles:
        sheets = tuple(sorted(orbit))
        verdict = tail_coprime(type_, len(orbit))
        components.append(
            Component(
                length=len(orbit),
                sheets=sheets,
                tail_coprime=verdict,
                homeomorphic_to_base=verdict.is_decided_true,
            )
        )
    return CoveringReport(
        degree=sigma0.degree,
        base=type_,
        monodromy=sigma0,
        stabilization_stage=stab.stage,
        stabilization_decided=stab.decided,
        components=tuple(components),
        connected=len(components) == 1,
    )


def connected_covering_exists(type_: SolenoidType, r: int) -> Verdict:
    """Does the solenoid admit a connected r-fold covering?

    Exactly when r is coprime to all but finitely many bonding degrees;
    the r-cycle monodromy then realizes a connected covering, while any
    shared tail factor forces every degree-r monodromy to split.
    """
    if r < 1:
        raise ValueError(f"degree {r} is < 1")
    return tail_coprime(type_, r)


def power_map_bijective(modulus: int, l: int) -> bool:
    """Is multiplication by l a bijection of Z/modulus?"""
    if modulus < 1:
        raise ValueError(f"modulus {modulus} is < 1")
    if l < 1:
        raise ValueError(f"exponent {l} is < 1")
    return math.gcd(l, modulus) == 1
