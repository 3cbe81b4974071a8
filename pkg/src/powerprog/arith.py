"""Small integer helpers: exact k-th roots, perfect-power recognition, primes.

Sign conventions used across the package: for even k only nonnegative values
are k-th powers and the canonical base is nonnegative; for odd k every integer
is allowed and the base keeps the sign of the value. 0 counts as a k-th power
for every k, with base 0.
"""

from __future__ import annotations

from dataclasses import dataclass


def int_nth_root(x: int, k: int) -> tuple[int, bool]:
    """Floor k-th root of a nonnegative integer, with an exactness flag.

    Returns (r, exact) with r**k <= x < (r+1)**k and exact iff r**k == x.
    Pure integer Newton iteration, no floats, so it is reliable for big x.
    """
    if k <= 0:
        raise ValueError("root index must be a positive integer")
    if x < 0:
        raise ValueError("int_nth_root expects a nonnegative argument")
    if x in (0, 1) or k == 1:
        return x, True
    # initial overestimate from the bit length, then Newton descent
    r = 1 << ((x.bit_length() + k - 1) // k)
    while True:
        nxt = ((k - 1) * r + x // r ** (k - 1)) // k
        if nxt >= r:
            break
        r = nxt
    while r ** k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r, r ** k == x


def kth_power_base(x: int, k: int) -> int | None:
    """Canonical base b with b**k == x, or None if x is not a k-th power."""
    if k < 2:
        raise ValueError("exponent must be at least 2")
    if x == 0:
        return 0
    if x < 0:
        if k % 2 == 0:
            return None
        b = kth_power_base(-x, k)
        return None if b is None else -b
    r, exact = int_nth_root(x, k)
    return r if exact else None


@dataclass(frozen=True)
class PowerWitness:
    """A checked statement value == base**exponent under the sign conventions."""

    value: int
    exponent: int
    base: int

    def __post_init__(self) -> None:
        if self.exponent < 2:
            raise ValueError("witness exponent must be at least 2")
        if self.base ** self.exponent != self.value:
            raise ValueError(
                f"{self.base}**{self.exponent} != {self.value}: not a power witness"
            )
        if self.exponent % 2 == 0 and self.base < 0:
            raise ValueError("even-exponent witnesses use the nonnegative base")


def is_prime(n: int) -> bool:
    """Trial division primality check, adequate for the small n used here."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def primes_below(limit: int) -> list[int]:
    """All primes < limit by a sieve of Eratosthenes."""
    if limit <= 2:
        return []
    sieve = bytearray([1]) * limit
    sieve[0] = sieve[1] = 0
    for p in range(2, int(limit ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, limit, p)))
    return [i for i in range(limit) if sieve[i]]
