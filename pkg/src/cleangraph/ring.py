"""Exact arithmetic over Z_n: factorization, totient, idempotents and units.

Everything here is a pure function of its arguments. Residues are plain
``int`` values in ``[0, n)`` and every returned list is sorted ascending.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, prod

MAX_MODULUS = 2**63 - 1


@dataclass(frozen=True)
class Factorization:
    """Prime-power decomposition ``n = prod(p**a for p, a in factors)``."""

    n: int
    factors: tuple[tuple[int, int], ...]

    @property
    def m(self) -> int:
        """Exponent of 2 in n."""
        if self.factors and self.factors[0][0] == 2:
            return self.factors[0][1]
        return 0

    @property
    def k_total(self) -> int:
        return len(self.factors)

    @property
    def k_odd(self) -> int:
        return self.k_total - (1 if self.m else 0)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def prime_powers(self) -> list[int]:
        return [p**a for p, a in self.factors]

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return " * ".join(f"{p}^{a}" if a > 1 else str(p) for p, a in self.factors)


@dataclass(frozen=True)
class RingData:
    """Idempotents, units and self-inverse units of Z_n."""

    fact: Factorization
    idempotents: tuple[int, ...]
    units: tuple[int, ...]
    self_inverse_units: tuple[int, ...]
    _inverse: dict[int, int] = field(repr=False, compare=False, default_factory=dict)

    @property
    def n(self) -> int:
        return self.fact.n

    @property
    def phi(self) -> int:
        return len(self.units)

    @property
    def r(self) -> int:
        return len(self.self_inverse_units)

    @property
    def nonzero_idempotents(self) -> tuple[int, ...]:
        return tuple(e for e in self.idempotents if e != 0)

    @property
    def non_self_inverse_units(self) -> tuple[int, ...]:
        s = set(self.self_inverse_units)
        return tuple(u for u in self.units if u not in s)

    def inverse(self, u: int) -> int:
        """Inverse of the unit ``u``, cached per ring."""
        try:
            return self._inverse[u]
        except KeyError:
            v = self._inverse[u] = mod_inverse(u, self.n)
            return v


def factorize(n: int, max_n: int = MAX_MODULUS) -> Factorization:
    """Factor ``n`` by trial division.

    >>> factorize(12).factors
    ((2, 2), (3, 1))
    """
    if not isinstance(n, int) or isinstance(n, bool):
        raise TypeError(f"n must be an int, got {type(n).__name__}")
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    if n > max_n:
        raise ValueError(f"n={n} exceeds the configured bound {max_n}")
    factors = []
    rest = n
    for p in (2, 3):
        if rest % p == 0:
            a = 0
            while rest % p == 0:
                rest //= p
                a += 1
            factors.append((p, a))
    # candidates 6j +- 1
    p = 5
    step = 2
    while p * p <= rest:
        if rest % p == 0:
            a = 0
            while rest % p == 0:
                rest //= p
                a += 1
            factors.append((p, a))
        p += step
        step = 6 - step
    if rest > 1:
        factors.append((rest, 1))
    return Factorization(n, tuple(factors))


def euler_phi(fact: Factorization) -> int:
    return prod(p**a - p ** (a - 1) for p, a in fact.factors)


def crt(residues: list[int], moduli: list[int]) -> int:
    """Combine ``x = r_i (mod m_i)`` for pairwise coprime moduli."""
    total = prod(moduli)
    x = 0
    for r_i, m_i in zip(residues, moduli):
        c = total // m_i
        x += r_i * c * pow(c, -1, m_i)
    return x % total


def enumerate_idempotents(fact: Factorization) -> list[int]:
    """All e in [0, n) with e*e = e (mod n).

    Every idempotent of Z_n is 0 or 1 modulo each prime power, so the 2**k
    choices recombined by CRT give exactly the idempotent set.
    """
    if fact.n == 1:
        return [0]
    moduli = fact.prime_powers()
    out = []
    for mask in range(1 << len(moduli)):
        bits = [(mask >> i) & 1 for i in range(len(moduli))]
        out.append(crt(bits, moduli))
    return sorted(out)


def _require_n_at_least_2(fact: Factorization) -> None:
    if fact.n < 2:
        raise ValueError(f"operation needs n >= 2, got n={fact.n}")


def enumerate_units(fact: Factorization) -> list[int]:
    _require_n_at_least_2(fact)
    n = fact.n
    return [u for u in range(1, n) if gcd(u, n) == 1]


def enumerate_self_inverse_units(fact: Factorization) -> list[int]:
    _require_n_at_least_2(fact)
    n = fact.n
    return [u for u in range(1, n) if u * u % n == 1]


def count_self_inverse_closed(fact: Factorization) -> int:
    """Number of solutions of x**2 = 1 (mod n) from the 2-adic exponent.

    Each odd prime power contributes the two roots +-1; the power of two
    contributes 1, 2 or 4 roots for m <= 1, m == 2 and m >= 3.
    """
    _require_n_at_least_2(fact)
    m, k = fact.m, fact.k_odd
    if m <= 1:
        return 2**k
    if m == 2:
        return 2 ** (k + 1)
    return 2 ** (k + 2)


def mod_inverse(u: int, n: int) -> int:
    if n < 1:
        raise ValueError(f"modulus must be positive, got {n}")
    if gcd(u, n) != 1:
        raise ValueError(f"{u} is not a unit modulo {n}")
    if n == 1:
        return 0
    return pow(u, -1, n)


def complement_pairs(fact: Factorization) -> list[tuple[int, int]]:
    """Nontrivial idempotents grouped as ``(e, 1 - e)`` with ``e < 1 - e``.

    This is the listing order in which block ``2m`` and block ``2m + 1`` are
    complementary; storage everywhere else stays ascending.
    """
    n = fact.n
    seen = set()
    pairs = []
    for e in enumerate_idempotents(fact):
        if e in (0, 1) or e in seen:
            continue
        f = (1 - e) % n
        seen.update((e, f))
        pairs.append((min(e, f), max(e, f)))
    return sorted(pairs)


def ring_data(n: int | Factorization) -> RingData:
    fact = n if isinstance(n, Factorization) else factorize(n)
    _require_n_at_least_2(fact)
    return RingData(
        fact=fact,
        idempotents=tuple(enumerate_idempotents(fact)),
        units=tuple(enumerate_units(fact)),
        self_inverse_units=tuple(enumerate_self_inverse_units(fact)),
    )
