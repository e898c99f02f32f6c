"""Quantitative objects: Mertens-type products, survivor-class counts and
their predicted main terms, singular series, admissible tuples, and the
measured-vs-predicted report.

Finite products are evaluated as exact rationals while numerator and
denominator fit in 128 bits, otherwise as floats multiplied in descending
order of p; the truncated twin-prime-type product is cached per modulus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .params import SieveParams
from .primes import (
    factorize,
    primes_in_range,
    primorial_excluding,
    simple_sieve,
    smooth_numbers_up_to,
    totient_and_omega,
)

EULER_GAMMA = 0.57721566490153286061  # 20 digits
DEFAULT_PRODUCT_TRUNCATION = 10**6
_RATIONAL_BIT_LIMIT = 128


@dataclass(frozen=True)
class AnalyticConstants:
    euler_gamma: float = EULER_GAMMA
    product_truncation: int = DEFAULT_PRODUCT_TRUNCATION


@dataclass(frozen=True)
class AdmissibleTuple:
    """k offsets occupying fewer than p classes modulo every prime p."""

    k: int
    w: float
    H: tuple[int, ...]

    def __post_init__(self):
        if len(self.H) != self.k or len(set(self.H)) != self.k:
            raise ValueError("H must hold k distinct offsets")
        if list(self.H) != sorted(self.H):
            raise ValueError("H must be ascending")


@dataclass(frozen=True)
class WeightContext:
    """Inputs shared by the omega-functions and singular series."""

    m: int
    q: int
    H: AdmissibleTuple
    y: int
    w: float
    M: int
    p0: int = 0


def _product(factors: list[Fraction]) -> float:
    """Product of ascending-p factors, exact while it fits 128 bits."""
    acc = Fraction(1)
    for f in factors:
        acc *= f
        if (
            acc.numerator.bit_length() > _RATIONAL_BIT_LIMIT
            or acc.denominator.bit_length() > _RATIONAL_BIT_LIMIT
        ):
            out = 1.0
            for g in reversed(factors):
                out *= float(g)
            return out
    return float(acc)


def is_admissible(H: tuple[int, ...] | list[int]) -> bool:
    """True when {h mod p} misses a class for every prime p <= len(H).

    Primes beyond k = len(H) cannot be fully occupied by k offsets, so
    only p <= k need checking.
    """
    k = len(H)
    for p in simple_sieve(k):
        if len({h % p for h in H}) == p:
            return False
    return True


def admissible_tuple(k: int, w: float) -> AdmissibleTuple:
    """The tuple h_i = p_{pi(k)+i} * P(w): the k primes after pi(k), scaled
    by the primorial of w. Always admissible: offsets share class 0 at
    primes up to w, and avoid class 0 at larger primes up to k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    scale = primorial_excluding(int(w), 1).value if w >= 2 else 1
    skip = len(simple_sieve(k))  # pi(k)
    limit = 64
    primes = simple_sieve(limit)
    while len(primes) < skip + k:
        limit *= 2
        primes = simple_sieve(limit)
    H = tuple(p * scale for p in primes[skip : skip + k])
    tup = AdmissibleTuple(k=k, w=float(w), H=H)
    assert is_admissible(H)
    return tup


def mertens_ratio(y: int, M: int, m: int) -> Fraction:
    """prod over p <= y, p not dividing M or m, of (p-2)/(p-1), exact.

    Zero exactly when p = 2 participates (both M and m odd), matching the
    vacuosity of the odd-odd survivor classes.
    """
    acc = Fraction(1)
    for p in simple_sieve(y):
        if M % p != 0 and m % p != 0:
            acc *= Fraction(p - 2, p - 1)
    return acc


def count_Rm_exact(V: int, m: int, y: int, z: int, M: int) -> int:
    """#{z < p <= V : gcd(m*p - 1, P_M(y)) = 1}, by sieve and gcd."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if V <= z:
        return 0
    P = primorial_excluding(y, M).value
    return sum(1 for p in primes_in_range(z, V) if math.gcd(m * p - 1, P) == 1)


@lru_cache(maxsize=8)
def _twin_type_product(M: int, truncation: int) -> float:
    """prod over 2 < p <= truncation, p not dividing M, of p(p-2)/(p-1)^2,
    multiplied in descending p."""
    out = 1.0
    for p in reversed(simple_sieve(truncation)):
        if p > 2 and M % p != 0:
            out *= p * (p - 2) / (p - 1) ** 2
    return out


def predicted_Rm(
    U: int, m: int, x: int, y: int, M: int, constants: AnalyticConstants | None = None
) -> float:
    """Main term for the size of the class of survivors m * p:

    2 e^(-gamma) U / (m log x log y) * M/phi(M)
      * prod_{p>2, p∤M} p(p-2)/(p-1)^2 * prod_{p>2, p∤M, p|m} (p-1)/(p-2),

    the infinite product truncated at constants.product_truncation.
    """
    c = constants or AnalyticConstants()
    phi, _ = totient_and_omega(M)
    lead = 2.0 * math.exp(-c.euler_gamma) * U / (m * math.log(x) * math.log(y))
    twin = _twin_type_product(M, c.product_truncation)
    madj = _product(
        [Fraction(p - 1, p - 2) for p in sorted(factorize(m)) if p > 2 and M % p != 0]
    )
    return lead * (M / phi) * twin * madj


def count_R0_exact(U: int, y: int, M: int) -> int:
    """Number of y-smooth m <= U with gcd(m - 1, P_M(y)) = 1.

    m = 1 never counts: gcd(0, P) = P.
    """
    P = primorial_excluding(y, M).value
    return sum(1 for m in smooth_numbers_up_to(U, y) if math.gcd(m - 1, P) == 1)


def _assum2_ok(m: int, M: int) -> bool:
    # odd M forces even m; odd-odd classes are vacuous
    return M % 2 == 0 or m % 2 == 0


def sum_Rm_measured(
    K: float, U: int, z: int, y: int, M: int, x: int
) -> tuple[int, float]:
    """Measured sum of the class counts over U/(zK) <= m < U/z, against the
    comparison value U M log K / (log x log y phi(M))."""
    if K < 2:
        raise ValueError("K must be >= 2")
    phi, _ = totient_and_omega(M)
    m_lo = max(1, math.ceil(U / (z * K)))
    m_hi = (U - 1) // z  # largest m with m < U/z
    measured = 0
    for m in range(m_lo, m_hi + 1):
        if _assum2_ok(m, M):
            measured += count_Rm_exact(U // m, m, y, z, M)
    bound = U * M * math.log(K) / (math.log(x) * math.log(y) * phi)
    return measured, bound


def omega_mq(p: int, ctx: WeightContext) -> int:
    """Count of n in [1, p] with n + h_i q ≡ 0 or m(n + h_i q) ≡ 1 (mod p)
    for some i, by direct loop."""
    m, q = ctx.m, ctx.q
    count = 0
    for n in range(1, p + 1):
        for h in ctx.H.H:
            v = n + h * q
            if v % p == 0 or (m * v - 1) % p == 0:
                count += 1
                break
    return count


def omega_prime(p: int, ctx: WeightContext, h: int) -> int:
    """Count of n in [1, p] with p0 + (h_i - h) n ≡ 0 or
    m(p0 + (h_i - h) n) ≡ 1 (mod p) for some i.

    For h_i = h the congruence loses its n-dependence and contributes all
    n or none, according to the constant condition.
    """
    if h not in ctx.H.H:
        raise ValueError(f"h={h} is not an element of H")
    m, p0 = ctx.m, ctx.p0
    count = 0
    for n in range(1, p + 1):
        for hi in ctx.H.H:
            v = p0 + (hi - h) * n
            if v % p == 0 or (m * v - 1) % p == 0:
                count += 1
                break
    return count


def singular_series_mq(ctx: WeightContext) -> float:
    """prod_{p<=y, p∤M} (1 - omega_{m,q}(p)/p)(1 - 1/p)^(-2k)
       * prod_{p<=y, p|M} (1 - 1/p)^(-k)
       * prod_{p<=w, p|M} (1 - 1/p)^(1-k)."""
    k = ctx.H.k
    factors: list[Fraction] = []
    for p in simple_sieve(ctx.y):
        if ctx.M % p != 0:
            om = omega_mq(p, ctx)
            factors.append(Fraction(p - om, p) * Fraction(p, p - 1) ** (2 * k))
        else:
            factors.append(Fraction(p, p - 1) ** k)
    if ctx.w >= 2:
        for p in simple_sieve(int(ctx.w)):
            if ctx.M % p == 0:
                factors.append(Fraction(p - 1, p) ** (k - 1))
    return _product(factors)


def singular_series_m(m: int, k: int, w: float, M: int) -> float:
    """2^(-(2k-1)) (phi(M)/M)^k * prod_{p>2, p∤M, p|m} (p-2)/(p-1)
       * prod_{2<p<=w, p∤M} (1 - 1/p)^(2k) (1 - 2/p)^(-1)."""
    if k < 1 or w < 0:
        raise ValueError("need k >= 1 and w >= 0")
    phi, _ = totient_and_omega(M)
    factors = [Fraction(1, 2 ** (2 * k - 1)), Fraction(phi, M) ** k]
    for p in sorted(factorize(m)):
        if p > 2 and M % p != 0:
            factors.append(Fraction(p - 2, p - 1))
    if w >= 3:
        for p in simple_sieve(int(w)):
            if p > 2 and M % p != 0:
                factors.append(Fraction(p - 1, p) ** (2 * k) * Fraction(p, p - 2))
    return _product(factors)


def theorem_reference_value(params: SieveParams) -> float:
    """C_U * phi(M) * log X log2 X log4 X / (log3 X)^2 at the implied X.

    A reference magnitude only; the asymptotic carries uncontrolled o(1)
    terms and is never asserted.
    """
    lX = params.log_implied_X
    l2 = math.log(lX)
    l3 = math.log(l2)
    l4 = math.log(l3)
    phi, _ = totient_and_omega(params.M)
    return params.C_U * phi * lX * l2 * l4 / (l3 * l3)


def estimate_report(
    params: SieveParams,
    m_list: list[int],
    K: float | None = None,
    constants: AnalyticConstants | None = None,
) -> dict:
    """Measured-vs-predicted report: per-m exact counts against main terms,
    the smooth-class count against its reference shape, the banded sum
    against its comparison value, and the headline reference magnitude."""
    c = constants or AnalyticConstants()
    x, y, z, U, M = params.x, params.y, params.z, params.U, params.M
    if K is None:
        K = max(2.0, math.log(math.log(x)) ** 2)
    per_m = []
    for m in sorted(m_list):
        if not _assum2_ok(m, M):
            continue
        V = x
        exact = count_Rm_exact(V, m, y, z, M)
        predicted = predicted_Rm(U, m, x, y, M, c)
        per_m.append(
            {
                "m": m,
                "V": V,
                "exact": exact,
                "predicted": predicted,
                "ratio": exact / predicted if predicted > 0 else None,
            }
        )
    r0 = count_R0_exact(U, y, M)
    measured, bound = sum_Rm_measured(K, U, z, y, M, x)
    return {
        "x": x, "M": M, "a": params.a, "y": y, "z": z, "U": U,
        "epsilon": params.epsilon, "C_U": params.C_U, "w": params.w, "z0": params.z0,
        "per_m": per_m,
        "R0": {
            "U": U,
            "count": r0,
            "density": r0 / U,
            "reference_shape": x / math.log(x) ** (1.0 + params.epsilon),
        },
        "sums": {
            "K": K,
            "m_low": max(1, math.ceil(U / (z * K))),
            "m_high": (U - 1) // z,
            "measured": measured,
            "bound": bound,
        },
        "theorem_reference": {
            "C": params.C_U,
            "log_X": params.log_implied_X,
            "value": theorem_reference_value(params),
        },
        "error_shape": math.exp(-math.sqrt(math.log(x))),
    }


def render_report_text(report: dict) -> str:
    """Aligned-column rendering of an estimate report."""
    lines = []
    lines.append(
        "params  x={x}  M={M}  a={a}  y={y}  z={z}  U={U}  eps={epsilon}  C_U={C_U}".format(**report)
    )
    lines.append(f"        w={report['w']:.6f}  z0={report['z0']:.6f}")
    lines.append("")
    if report["per_m"]:
        lines.append(f"{'m':>6} {'V':>10} {'exact':>10} {'predicted':>14} {'ratio':>10}")
        for row in report["per_m"]:
            ratio = f"{row['ratio']:.4f}" if row["ratio"] is not None else "n/a"
            lines.append(
                f"{row['m']:>6} {row['V']:>10} {row['exact']:>10} {row['predicted']:>14.3f} {ratio:>10}"
            )
        lines.append("")
    r0 = report["R0"]
    lines.append(
        f"R0      count={r0['count']}  U={r0['U']}  density={r0['density']:.6g}  "
        f"reference x/(log x)^(1+eps)={r0['reference_shape']:.3f}"
    )
    s = report["sums"]
    lines.append(
        f"sums    K={s['K']:.3f}  m in [{s['m_low']}, {s['m_high']}]  "
        f"measured={s['measured']}  comparison={s['bound']:.3f}"
    )
    t = report["theorem_reference"]
    lines.append(
        f"ref     C={t['C']}  log X={t['log_X']:.3f}  value={t['value']:.3f}  "
        f"(reference only, never asserted)"
    )
    lines.append(f"o(1) shape exp(-sqrt(log x)) = {report['error_shape']:.6g}")
    return "\n".join(lines) + "\n"
