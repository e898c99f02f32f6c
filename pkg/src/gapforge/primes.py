"""Prime generation, primality verdicts, smoothness, primorials.

Everything here is deterministic: fixed Miller-Rabin witness sets below
2^64, Baillie-PSW (base-2 strong probable prime + strong Lucas) above,
where the verdict is downgraded to "probable_prime".
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

PROBABLE_PRIME_FLOOR = 1 << 64  # below this, verdicts are proven
TRIAL_DIVISION_BOUND = 10_000   # is_prime always trial-divides this far

DEFAULT_SEGMENT_FLAGS = 1 << 18
DEFAULT_PRESIEVE_DEPTH = 10**6
DEFAULT_SEARCH_BUDGET = 10**6

# Deterministic Miller-Rabin witnesses for all n < 2^64
# (Sinclair's 7-witness set, https://miller-rabin.appspot.com/)
_WITNESSES_64 = (2, 325, 9375, 28178, 450775, 9780504, 1795265022)


class ExhaustionError(RuntimeError):
    """Raised when a bounded prime search runs out of step budget."""


def simple_sieve(limit: int) -> list[int]:
    """All primes <= limit by a plain sieve of Eratosthenes."""
    if limit < 2:
        return []
    flags = bytearray(b"\x01") * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            start = p * p
            flags[start :: p] = b"\x00" * ((limit - start) // p + 1)
    return [i for i, f in enumerate(flags) if f]


def primes_in_range(lo: int, hi: int, segment_flags: int = DEFAULT_SEGMENT_FLAGS) -> list[int]:
    """Primes p with lo < p <= hi, ascending, via a segmented sieve.

    Segments hold segment_flags byte flags each so the working set stays
    cache-resident; output is identical to the unsegmented sieve.
    """
    if lo > hi:
        raise ValueError(f"empty-range precondition violated: lo={lo} > hi={hi}")
    if hi < 2 or hi <= lo:
        return []
    base = simple_sieve(math.isqrt(hi))
    out = []
    low = max(lo + 1, 2)
    while low <= hi:
        high = min(low + segment_flags - 1, hi)
        flags = bytearray(b"\x01") * (high - low + 1)
        for p in base:
            if p * p > high:
                break
            start = max(p * p, ((low + p - 1) // p) * p)
            if start > high:
                continue
            flags[start - low :: p] = b"\x00" * ((high - start) // p + 1)
        out.extend(low + i for i, f in enumerate(flags) if f)
        low = high + 1
    return out


@lru_cache(maxsize=4)
def _cached_primes(limit: int) -> tuple[int, ...]:
    return tuple(simple_sieve(limit))


def _small_primes() -> tuple[int, ...]:
    return _cached_primes(TRIAL_DIVISION_BOUND)


def _miller_rabin(n: int, bases) -> bool:
    """True if n passes Miller-Rabin for every base (n odd, > 2)."""
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in bases:
        a %= n
        if a == 0:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n), n odd positive."""
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _strong_lucas(n: int) -> bool:
    """Strong Lucas probable prime test, Selfridge parameters.

    Assumes n odd, n > 2, not divisible by tiny primes.
    """
    # Selfridge: first D in 5, -7, 9, -11, ... with (D/n) = -1
    D = 5
    while True:
        j = _jacobi(D % n, n)
        if j == -1:
            break
        if j == 0 and abs(D) % n != 0:
            return False  # nontrivial factor gcd(|D|, n)
        if abs(D) == 13:
            # perfect squares never reach (D/n) = -1; cut the search
            r = math.isqrt(n)
            if r * r == n:
                return False
        D = -(D + 2) if D > 0 else -(D - 2)
    P = 1
    Q = (1 - D) // 4

    d = n + 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1

    # binary ladder for U_d, V_d (mod n), tracking Q^k
    U, V, Qk = 1, P, Q % n
    for bit in bin(d)[3:]:
        U, V = U * V % n, (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if bit == "1":
            U, V = P * U + V, D * U + P * V
            if U % 2:
                U += n
            if V % 2:
                V += n
            U = U // 2 % n
            V = V // 2 % n
            Qk = Qk * Q % n
    if U == 0 or V == 0:
        return True
    for _ in range(s - 1):
        V = (V * V - 2 * Qk) % n
        if V == 0:
            return True
        Qk = Qk * Qk % n
    return False


def is_prime(n: int) -> str:
    """Primality verdict: "prime", "composite", or "probable_prime".

    Deterministic below 2^64 (fixed witness set). Above, base-2 strong
    probable prime plus strong Lucas; passing numbers are reported as
    "probable_prime", never "prime". 0 and 1 come back "composite".
    """
    if n < 2:
        return "composite"
    for p in _small_primes():
        if n == p:
            return "prime"
        if n % p == 0:
            return "composite"
        if p * p > n:
            return "prime"
    if n < PROBABLE_PRIME_FLOOR:
        return "prime" if _miller_rabin(n, _WITNESSES_64) else "composite"
    if not _miller_rabin(n, (2,)):
        return "composite"
    if not _strong_lucas(n):
        return "composite"
    return "probable_prime"


def is_probable_prime(n: int) -> bool:
    """True when is_prime(n) is "prime" or "probable_prime"."""
    return is_prime(n) != "composite"


@dataclass(frozen=True)
class PrimorialValue:
    """Product of the primes p <= limit with p not dividing excluded_modulus."""

    value: int
    limit: int
    excluded_modulus: int = 1

    def __post_init__(self):
        if self.excluded_modulus < 1:
            raise ValueError("excluded_modulus must be >= 1")

    @property
    def prime_set(self) -> tuple[int, ...]:
        return tuple(
            p for p in primes_in_range(0, self.limit) if self.excluded_modulus % p != 0
        )


def _balanced_product(vals: list[int]) -> int:
    """Product by halving; keeps big-integer multiplications balanced."""
    if not vals:
        return 1
    while len(vals) > 1:
        vals = [vals[i] * vals[i + 1] for i in range(0, len(vals) - 1, 2)] + (
            [vals[-1]] if len(vals) % 2 else []
        )
    return vals[0]


def primorial_excluding(limit: int, M: int = 1) -> PrimorialValue:
    """P_M(limit): the product of primes p <= limit with p not dividing M."""
    if M < 1:
        raise ValueError("M must be >= 1")
    ps = [p for p in primes_in_range(0, limit) if M % p != 0]
    return PrimorialValue(value=_balanced_product(ps), limit=limit, excluded_modulus=M)


def smooth_numbers_up_to(U: int, y: int) -> list[int]:
    """All n <= U whose prime factors are all <= y, ascending; includes 1.

    Enumerates products of prime powers recursively, so sparse smooth sets
    stay cheap even for large U.
    """
    if U < 1:
        raise ValueError("U must be >= 1")
    ps = simple_sieve(y) if y >= 2 else []
    out: list[int] = []

    def extend(i: int, v: int) -> None:
        out.append(v)
        for j in range(i, len(ps)):
            if v * ps[j] > U:
                break
            extend(j, v * ps[j])

    extend(0, 1)
    out.sort()
    return out


def largest_prime_factor(n: int) -> int:
    """Largest prime factor of n >= 2 by trial division (small inputs)."""
    best = 1
    for p in (2, 3):
        while n % p == 0:
            best = p
            n //= p
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            while n % p == 0:
                best = p
                n //= p
        f += 6
    return max(best, n) if n > 1 else best


def _pollard_rho(n: int) -> int:
    """Brent-cycle Pollard rho; n odd composite, no factor <= 10^6."""
    if n % 2 == 0:
        return 2
    c = 1
    while True:
        x = y = 2
        d = 1
        q = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            q = q * abs(x - y) % n
            if q == 0:
                d = math.gcd(abs(x - y), n)
                break
            d = math.gcd(q, n)
        if d != n:
            return d
        c += 1


def factorize(M: int) -> dict[int, int]:
    """Prime factorization of M >= 1 as {p: exponent}."""
    if M < 1:
        raise ValueError("M must be >= 1")
    out: dict[int, int] = {}
    for p in _small_primes():
        if p * p > M:
            break
        while M % p == 0:
            out[p] = out.get(p, 0) + 1
            M //= p
    if M > 1:
        if is_prime(M) != "composite":
            out[M] = out.get(M, 0) + 1
        else:
            stack = [M]
            while stack:
                m = stack.pop()
                if is_prime(m) != "composite":
                    out[m] = out.get(m, 0) + 1
                    continue
                d = _pollard_rho(m)
                stack.extend((d, m // d))
    return out


def totient_and_omega(M: int) -> tuple[int, int]:
    """(Euler phi(M), number of distinct prime factors of M)."""
    fac = factorize(M)
    phi = M
    for p in fac:
        phi = phi // p * (p - 1)
    return phi, len(fac)


@lru_cache(maxsize=2)
def _presieve_primes(depth: int) -> tuple[int, ...]:
    return tuple(simple_sieve(depth))


def sieve_ap_window(start: int, M: int, count: int, depth: int) -> bytearray:
    """Flag which of start, start+M, ..., start+(count-1)M survive trial
    division by primes <= depth (1 = no small factor found).

    A candidate equal to a sieving prime is kept. Residues step through the
    window arithmetically, so start is reduced once per sieving prime.
    """
    flags = bytearray(b"\x01") * count
    for p in _presieve_primes(depth):
        mp = M % p
        if mp == 0:
            continue  # gcd(a, M) = 1 keeps p out of every candidate
        r = start % p
        # k with start + k*M ≡ 0 (mod p)
        k = (-r * pow(mp, -1, p)) % p
        while k < count:
            if start + k * M != p:
                flags[k] = 0
            k += p
    return flags


def next_prime_in_ap(
    start: int,
    M: int,
    a: int,
    direction: str = "forward",
    presieve_depth: int = DEFAULT_PRESIEVE_DEPTH,
    budget: int = DEFAULT_SEARCH_BUDGET,
) -> int:
    """Nearest prime ≡ a (mod M) strictly beyond start in the direction.

    Candidates are pre-screened by trial division to presieve_depth before
    any probable-prime test. Raises ExhaustionError after examining budget
    candidates so the caller can decide to enlarge the search.
    """
    if M < 1 or math.gcd(M, a) != 1:
        raise ValueError(f"need gcd(M, a) = 1, got M={M}, a={a}")
    if direction not in ("forward", "backward"):
        raise ValueError(f"unknown direction {direction!r}")
    window = 4096
    if direction == "forward":
        t = start + ((a - start) % M)
        if t <= start:
            t += M
    else:
        t = start - ((start - a) % M)
        if t >= start:
            t -= M
    examined = 0
    while examined < budget:
        n = min(window, budget - examined)
        if direction == "forward":
            base = t
            flags = sieve_ap_window(base, M, n, presieve_depth)
            order = range(n)
        else:
            base = t - (n - 1) * M
            if base < 2:
                shrink = (2 - base + M - 1) // M
                n -= shrink
                base += shrink * M
                if n <= 0:
                    raise ExhaustionError("backward search ran below 2")
            flags = sieve_ap_window(base, M, n, presieve_depth)
            order = range(n - 1, -1, -1)
        for k in order:
            if flags[k] and is_prime(base + k * M) != "composite":
                return base + k * M
        examined += n
        t = t + n * M if direction == "forward" else t - n * M
    raise ExhaustionError(
        f"no prime ≡ {a} (mod {M}) within {budget} candidates {direction} of {start}"
    )
