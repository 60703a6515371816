"""Integer number theory used by the sieve.

Primality (Miller-Rabin), factorization (trial division, then Pollard rho with
Brent's cycle detection), divisors, prime powers, primitive prime divisors.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

try:
    import flint
except ImportError:  # pragma: no cover - optional accelerator
    flint = None

__all__ = [
    "PrimePower",
    "Factorization",
    "FactorizationBudgetExceeded",
    "DEFAULT_SEED",
    "DEFAULT_RHO_BUDGET",
    "set_default_seed",
    "small_primes",
    "is_prime",
    "factorize",
    "divisors",
    "prime_power",
    "prime_powers_upto",
    "multiplicative_order_is",
    "cyclotomic_value",
    "zsigmondy_ppd",
    "divides_exp_minus_one",
    "is_large",
]

TRIAL_LIMIT = 10**5
DEFAULT_SEED = 20240917
DEFAULT_RHO_BUDGET = 2**32
# rho iterations spent on one cofactor before handing it to FLINT (when present)
RHO_STAGE = 2**16

# Deterministic for n < 3317044064679887385961981 (Sorenson & Webster).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_DET_LIMIT = 3317044064679887385961981
_MR_RANDOM_ROUNDS = 64

_seed = DEFAULT_SEED


def set_default_seed(seed: int) -> None:
    """Seed for randomized primality rounds and rho start values."""
    global _seed
    _seed = seed


class FactorizationBudgetExceeded(RuntimeError):
    def __init__(self, n: int, budget: int):
        super().__init__(f"Pollard rho exceeded {budget} iterations on {n}")
        self.n = n
        self.budget = budget


@dataclass(frozen=True)
class PrimePower:
    p: int
    e: int
    q: int

    def __post_init__(self):
        if self.e < 1 or self.p**self.e != self.q or not is_prime(self.p):
            raise ValueError(f"not a prime power: {self.p}^{self.e} = {self.q}")


@dataclass(frozen=True)
class Factorization:
    pairs: tuple[tuple[int, int], ...]

    def value(self) -> int:
        return math.prod(p**m for p, m in self.pairs)

    def primes(self) -> list[int]:
        return [p for p, _ in self.pairs]

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)


@lru_cache(maxsize=None)
def small_primes(limit: int = TRIAL_LIMIT) -> tuple[int, ...]:
    """Primes below ``limit`` (Eratosthenes)."""
    if limit <= 2:
        return ()
    sieve = bytearray([1]) * limit
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(limit - 1) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytes(len(range(i * i, limit, i)))
    return tuple(i for i in range(limit) if sieve[i])


def _mr_round(n: int, d: int, s: int, a: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int, seed: Optional[int] = None) -> bool:
    """Miller-Rabin; deterministic below 3.3e24, 64 seeded random rounds above."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if n < _MR_DET_LIMIT:
        return all(_mr_round(n, d, s, a) for a in _MR_BASES)
    if not all(_mr_round(n, d, s, a) for a in _MR_BASES):
        return False
    rng = random.Random(_seed if seed is None else seed)
    return all(_mr_round(n, d, s, rng.randrange(2, n - 1)) for _ in range(_MR_RANDOM_ROUNDS))


def _perfect_power(n: int) -> Optional[tuple[int, int]]:
    """Return (b, k) with b**k == n and k >= 2 maximal-ish, or None."""
    for k in range(n.bit_length(), 1, -1):
        b = _iroot(n, k)
        if b > 1 and b**k == n:
            return b, k
    return None


def _iroot(n: int, k: int) -> int:
    """Floor of the k-th root of n >= 0."""
    if n < 2:
        return n
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def _brent(n: int, c: int, y: int, budget: int) -> Optional[int]:
    """One Brent/Pollard rho run; a nontrivial factor, ``n`` on failure, or None
    when ``budget`` iterations are spent."""
    m = 128
    g = r = q = 1
    used = 0
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += m
        used += 2 * r
        r <<= 1
        if g == 1 and used > budget:
            return None
    if g == n:
        while True:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
            if g > 1:
                break
    return g


def _split(n: int, budget: int, rng: random.Random) -> int:
    """A nontrivial factor of the odd composite ``n``, by Brent rho."""
    pp = _perfect_power(n)
    if pp is not None:
        return pp[0]
    remaining = budget
    while remaining > 0:
        c = rng.randrange(1, n - 1)
        y = rng.randrange(0, n)
        d = _brent(n, c, y, remaining)
        if d is None:
            break
        if d != n:
            return d
        remaining -= 1
    raise FactorizationBudgetExceeded(n, budget)


def _flint_factor(n: int) -> list[tuple[int, int]]:
    return [(int(p), int(m)) for p, m in flint.fmpz(n).factor()]


def factorize(n: int, budget: int = DEFAULT_RHO_BUDGET, accelerate: bool = True) -> Factorization:
    """Prime factorization of ``n >= 1``.

    Trial division by primes below 10**5, then Pollard rho (Brent) on the
    remaining composites.  A cofactor that survives ``RHO_STAGE`` rho
    iterations goes to FLINT when python-flint is importable and
    ``accelerate`` is set; otherwise rho runs on, and
    :class:`FactorizationBudgetExceeded` is raised once a single cofactor has
    used ``budget`` iterations.
    """
    if n < 1:
        raise ValueError("factorize needs n >= 1")
    counts: dict[int, int] = {}
    for p in small_primes():
        if p * p > n:
            break
        if n % p == 0:
            m = 0
            while n % p == 0:
                n //= p
                m += 1
            counts[p] = m
    use_flint = accelerate and flint is not None and budget > RHO_STAGE
    if n > 1:
        rng = random.Random(_seed ^ n.bit_length())
        stack = [n]
        while stack:
            m = stack.pop()
            if m == 1:
                continue
            # cofactors below 10**10 are prime: all primes < 10**5 were divided out
            if m < TRIAL_LIMIT**2 or is_prime(m):
                counts[m] = counts.get(m, 0) + 1
                continue
            if use_flint:
                try:
                    d = _split(m, RHO_STAGE, rng)
                except FactorizationBudgetExceeded:
                    for p, k in _flint_factor(m):
                        counts[p] = counts.get(p, 0) + k
                    continue
            else:
                d = _split(m, budget, rng)
            stack.extend((d, m // d))
    return Factorization(tuple(sorted(counts.items())))


def divisors(n: int, budget: int = DEFAULT_RHO_BUDGET) -> list[int]:
    """All positive divisors of ``n`` in increasing order."""
    divs = [1]
    for p, m in factorize(n, budget):
        divs = [d * p**i for d in divs for i in range(m + 1)]
    return sorted(divs)


def prime_power(q: int) -> Optional[PrimePower]:
    """Decompose ``q`` as p**e, or None when q is not a prime power."""
    if q < 2:
        return None
    if is_prime(q):
        return PrimePower(q, 1, q)
    for e in range(q.bit_length(), 1, -1):
        p = _iroot(q, e)
        if p**e == q and is_prime(p):
            return PrimePower(p, e, q)
    return None


def prime_powers_upto(limit: int) -> Iterator[PrimePower]:
    """Every prime power q <= limit, ascending in q."""
    found = []
    for p in small_primes(limit + 1):
        e, q = 1, p
        while q <= limit:
            found.append(PrimePower(p, e, q))
            e += 1
            q *= p
    found.sort(key=lambda pp: pp.q)
    return iter(found)


def multiplicative_order_is(a: int, n: int, r: int) -> bool:
    """True when the multiplicative order of ``a`` modulo the prime ``r`` is ``n``."""
    if a % r == 0 or pow(a, n, r) != 1:
        return False
    return all(pow(a, n // s, r) != 1 for s, _ in factorize(n))


def _mobius(n: int) -> int:
    f = factorize(n)
    if any(m > 1 for _, m in f):
        return 0
    return -1 if len(f) % 2 else 1


def cyclotomic_value(n: int, x: int) -> int:
    """Phi_n(x) as an integer, via prod over d | n of (x^d - 1)^mu(n/d)."""
    num, den = 1, 1
    for d in divisors(n):
        mu = _mobius(n // d)
        if mu == 1:
            num *= x**d - 1
        elif mu == -1:
            den *= x**d - 1
    assert num % den == 0
    return num // den


def zsigmondy_ppd(q: int, n: int, scan_limit: int = 10**5, budget: int = DEFAULT_RHO_BUDGET) -> Optional[int]:
    """Smallest primitive prime divisor of ``q**n - 1``, or None for (2, 6).

    A primitive prime divisor r has multiplicative order n modulo r, so r = 1
    (mod n); small candidates are scanned first, then Phi_n(q) is factored.
    """
    if n < 3 or prime_power(q) is None:
        raise ValueError("zsigmondy_ppd needs a prime power q >= 2 and n >= 3")
    if (q, n) == (2, 6):
        return None
    phi = cyclotomic_value(n, q)
    r = n + 1
    while r <= scan_limit and r <= phi:
        if phi % r == 0 and is_prime(r) and multiplicative_order_is(q, n, r):
            return r
        r += n
    try:
        cands = factorize(phi, budget).primes()
    except FactorizationBudgetExceeded:
        # keep scanning r = 1 (mod n); Zsigmondy guarantees termination
        while True:
            if phi % r == 0 and is_prime(r) and multiplicative_order_is(q, n, r):
                return r
            r += n
    for r in cands:
        if multiplicative_order_is(q, n, r):
            return r
    return None


def divides_exp_minus_one(r: int, a: int, b: int, verify: bool = False) -> bool:
    """Whether r**a - 1 divides r**b - 1, decided as ``a | b``.

    With ``verify=True`` the answer is cross-checked by big-integer division.
    """
    if r < 2 or a < 1 or b < 1:
        raise ValueError("need r >= 2 and a, b >= 1")
    ans = b % a == 0
    if verify:
        assert ans == ((r**b - 1) % (r**a - 1) == 0), (r, a, b)
    return ans


def is_large(sub_order: int, group_order: int) -> bool:
    """|Y|^3 >= |X|."""
    if sub_order < 1 or group_order < sub_order:
        raise ValueError("need 1 <= sub_order <= group_order")
    return sub_order**3 >= group_order
