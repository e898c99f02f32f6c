"""Turning a covering assignment into a verifiable prime gap.

The CRT places a block of U consecutive composites inside the progression
a (mod M); the certificate records one witness prime per block element and
(optionally) the two primes bounding the block, so a verifier can re-check
the whole construction without trusting any stored intermediate.
"""

from __future__ import annotations

import json
import math
import sys
from dataclasses import dataclass, field

from .construction import ResidueAssignment
from .params import SieveParams
from .primes import (
    DEFAULT_PRESIEVE_DEPTH,
    DEFAULT_SEARCH_BUDGET,
    PROBABLE_PRIME_FLOOR,
    PrimorialValue,
    is_prime,
    next_prime_in_ap,
    primes_in_range,
    primorial_excluding,
    sieve_ap_window,
)


class AssignmentMismatch(ValueError):
    """Assignment keys differ from the primorial's prime set."""


class NonCoprimeError(ValueError):
    """Modular inverse requested for non-coprime arguments."""


class WitnessFailure(RuntimeError):
    """A freshly built witness failed its divisibility re-check."""


@dataclass
class GapCertificate:
    """Everything needed to independently re-verify one constructed gap."""

    M: int
    a: int
    x: int
    y: int
    z: int
    U: int
    assignment: list[tuple[int, int]]
    U0: int
    r: int
    primorial_digits: int
    block_start: int
    witnesses: list[int]
    prev_prime: int | None = None
    next_prime: int | None = None
    primality_grade: str | None = None  # "proven" | "probable"
    gap: int | None = None


@dataclass
class VerifyResult:
    valid: bool
    reason: str | None = None


def decimal_digits(n: int) -> int:
    """Number of decimal digits of n >= 1, without forming the string."""
    if n < 10:
        return 1
    d = int(n.bit_length() * 0.30102999566398119) + 1
    while 10 ** (d - 1) > n:
        d -= 1
    while 10**d <= n:
        d += 1
    return d


def solve_U0(assignment: ResidueAssignment, window_low: int, primorial: PrimorialValue) -> int:
    """The unique U0 in [window_low, window_low + P) with U0 ≡ -a_p (mod p)
    for every assigned prime, by incremental CRT."""
    keys = sorted(assignment.entries)
    if tuple(keys) != primorial.prime_set:
        raise AssignmentMismatch(
            f"assignment primes {keys[:5]}...({len(keys)}) do not match the "
            f"primorial's prime set ({len(primorial.prime_set)} primes)"
        )
    u, mod = 0, 1
    for p in keys:
        target = (-assignment.entries[p]) % p
        t = (target - u) * pow(mod % p, -1, p) % p
        u += mod * t
        mod *= p
    assert mod == primorial.value
    return window_low + (u - window_low) % mod


def modular_inverse_r(M: int, primorial: PrimorialValue) -> int:
    """Least nonnegative r with M*r ≡ -1 (mod P), via the extended gcd."""
    P = primorial.value
    if math.gcd(M, P) != 1:
        raise NonCoprimeError(f"gcd(M, P) = {math.gcd(M, P)} != 1")
    return (P - pow(M % P, -1, P)) % P


def build_certificate(
    params: SieveParams,
    assignment: ResidueAssignment,
    with_bounds: bool = False,
    presieve_depth: int = DEFAULT_PRESIEVE_DEPTH,
    budget: int = DEFAULT_SEARCH_BUDGET,
) -> GapCertificate:
    """Place the covered block via CRT and certify every element composite.

    The witness for j is the smallest assigned prime whose class contains
    j; its divisibility of the block element is re-checked in full
    precision before it is recorded. with_bounds additionally locates the
    bounding primes on both sides (the expensive part).
    """
    M, a, x, U = params.M, params.a, params.x, params.U
    primorial = primorial_excluding(x, M)
    window_low = -(-x // M)  # ceil(x / M)
    U0 = solve_U0(assignment, window_low, primorial)
    r = modular_inverse_r(M, primorial)
    block_start = M * (U0 + a * r) + a

    witnesses = [0] * (U + 1)
    for p, a_p in assignment.items_sorted():
        j = a_p if a_p >= 1 else p
        while j <= U:
            if witnesses[j] == 0:
                witnesses[j] = p
            j += p
    for j in range(1, U + 1):
        p = witnesses[j]
        if p == 0:
            raise WitnessFailure(f"element {j} is not covered by any assigned class")
        if (block_start + j * M) % p != 0:
            raise WitnessFailure(f"witness {p} does not divide block element {j}")

    cert = GapCertificate(
        M=M, a=a, x=x, y=params.y, z=params.z, U=U,
        assignment=assignment.items_sorted(),
        U0=U0, r=r,
        primorial_digits=decimal_digits(primorial.value),
        block_start=block_start,
        witnesses=witnesses[1:],
    )
    if with_bounds:
        prev = next_prime_in_ap(block_start + M, M, a, "backward",
                                presieve_depth=presieve_depth, budget=budget)
        nxt = next_prime_in_ap(block_start + U * M, M, a, "forward",
                               presieve_depth=presieve_depth, budget=budget)
        cert.prev_prime = prev
        cert.next_prime = nxt
        cert.gap = nxt - prev
        grades = {is_prime(prev), is_prime(nxt)}
        cert.primality_grade = "probable" if "probable_prime" in grades else "proven"
    return cert


def _composite_between(low: int, high: int, M: int, a: int, skip: set[int],
                       presieve_depth: int) -> int | None:
    """First element ≡ a (mod M) in (low, high) that is not composite,
    ignoring positions in skip; None when all are composite."""
    start = low + ((a - low) % M)
    if start <= low:
        start += M
    if start >= high:
        return None
    count = (high - 1 - start) // M + 1
    flags = sieve_ap_window(start, M, count, presieve_depth)
    for k in range(count):
        t = start + k * M
        if t in skip:
            continue
        if flags[k] and is_prime(t) != "composite":
            return t
    return None


def verify_certificate(cert: GapCertificate, presieve_depth: int = DEFAULT_PRESIEVE_DEPTH) -> VerifyResult:
    """Re-check every invariant of the certificate from scratch.

    Recomputes the primorial, the CRT congruences, each witness'
    divisibility and, when bounding primes are present, the primality of
    the bounds and the compositeness of every intermediate progression
    element. Stored values are never trusted, only re-derived.
    """
    M, a, x, U = cert.M, cert.a, cert.x, cert.U
    if M < 1 or math.gcd(M, a) != 1:
        return VerifyResult(False, "coprimality")

    expected = [p for p in primes_in_range(0, x) if M % p != 0]
    asg = dict(cert.assignment)
    if sorted(asg) != expected:
        return VerifyResult(False, "assignment primes")
    if any(not 0 <= asg[p] < p for p in asg):
        return VerifyResult(False, "assignment residues")

    primorial = primorial_excluding(x, M)
    P = primorial.value
    if cert.primorial_digits != decimal_digits(P):
        return VerifyResult(False, "primorial digits")

    # x/M <= U0 < x/M + P, in exact integer arithmetic
    if not (M * cert.U0 >= x and M * cert.U0 < x + M * P):
        return VerifyResult(False, "window")
    for p, a_p in cert.assignment:
        if (cert.U0 + a_p) % p != 0:
            return VerifyResult(False, f"crt residue at {p}")
    if (M * cert.r + 1) % P != 0:
        return VerifyResult(False, "r")
    if cert.block_start != M * (cert.U0 + a * cert.r) + a:
        return VerifyResult(False, "block start")

    if len(cert.witnesses) != U:
        return VerifyResult(False, "witness count")
    for j in range(1, U + 1):
        p = cert.witnesses[j - 1]
        if p not in asg:
            return VerifyResult(False, f"witness {j}")
        if j % p != asg[p]:
            return VerifyResult(False, f"witness {j}")
        elem = cert.block_start + j * M
        if elem % p != 0 or elem <= p:
            return VerifyResult(False, f"witness {j}")

    has_bounds = cert.prev_prime is not None or cert.next_prime is not None
    if not has_bounds:
        return VerifyResult(True)

    prev, nxt = cert.prev_prime, cert.next_prime
    if prev is None or nxt is None:
        return VerifyResult(False, "bounds incomplete")
    if prev % M != a % M or nxt % M != a % M:
        return VerifyResult(False, "bounds progression")
    if prev > cert.block_start or nxt < cert.block_start + (U + 1) * M:
        return VerifyResult(False, "bounds placement")
    if cert.gap != nxt - prev:
        return VerifyResult(False, "gap value")
    if cert.gap < M * U:
        return VerifyResult(False, "gap length")
    grade_prev, grade_nxt = is_prime(prev), is_prime(nxt)
    if "composite" in (grade_prev, grade_nxt):
        return VerifyResult(False, "bounds not prime")
    need = "probable" if "probable_prime" in (grade_prev, grade_nxt) else "proven"
    if cert.primality_grade != need:
        return VerifyResult(False, "primality grade")

    # the block interior is already certified by witnesses
    block = {cert.block_start + j * M for j in range(1, U + 1)}
    t = _composite_between(prev, nxt, M, a, block, presieve_depth)
    if t is not None:
        return VerifyResult(False, f"interior prime at offset {t - prev}")
    return VerifyResult(True)


# ---------------------------------------------------------------------------
# serialization: decimal strings for every arbitrary-precision field

_BIG_FIELDS = ("U0", "r", "block_start", "prev_prime", "next_prime", "gap")


def _allow_big_decimal_strings() -> None:
    # certificates at x ~ 10^4 carry ~4000-digit integers, beyond the
    # default int<->str conversion cap of newer CPythons
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(2_000_000)


def certificate_to_json(cert: GapCertificate, indent: int | None = None) -> str:
    _allow_big_decimal_strings()
    doc: dict = {
        "M": cert.M, "a": cert.a, "x": cert.x, "y": cert.y, "z": cert.z, "U": cert.U,
        "assignment": [[p, a_p] for p, a_p in cert.assignment],
        "U0": str(cert.U0),
        "r": str(cert.r),
        "primorial_digits": cert.primorial_digits,
        "block_start": str(cert.block_start),
        "witnesses": list(cert.witnesses),
    }
    if cert.prev_prime is not None:
        doc["prev_prime"] = str(cert.prev_prime)
    if cert.next_prime is not None:
        doc["next_prime"] = str(cert.next_prime)
    if cert.primality_grade is not None:
        doc["primality_grade"] = cert.primality_grade
    if cert.gap is not None:
        doc["gap"] = str(cert.gap)
    return json.dumps(doc, indent=indent)


def certificate_from_json(text: str) -> GapCertificate:
    _allow_big_decimal_strings()
    doc = json.loads(text)
    return GapCertificate(
        M=int(doc["M"]), a=int(doc["a"]), x=int(doc["x"]),
        y=int(doc["y"]), z=int(doc["z"]), U=int(doc["U"]),
        assignment=[(int(p), int(c)) for p, c in doc["assignment"]],
        U0=int(doc["U0"]), r=int(doc["r"]),
        primorial_digits=int(doc["primorial_digits"]),
        block_start=int(doc["block_start"]),
        witnesses=[int(w) for w in doc["witnesses"]],
        prev_prime=int(doc["prev_prime"]) if "prev_prime" in doc else None,
        next_prime=int(doc["next_prime"]) if "next_prime" in doc else None,
        primality_grade=doc.get("primality_grade"),
        gap=int(doc["gap"]) if "gap" in doc else None,
    )
