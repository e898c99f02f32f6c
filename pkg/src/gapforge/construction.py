"""Three-phase sieving of [1, U] and the greedy residue-class covering.

Phase 1 takes a_p = 0 on the primes in (y, z] away from M, phase 2 takes
a_p = 1 on the primes up to y, and the remaining survivors are handed to a
greedy max-coverage pass over the primes in (z, x]. The paper-facing
survivor classes (smooth numbers, smooth-times-large-prime, multiples of
primes dividing M) are materialized by classify_survivors.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .params import SieveParams
from .primes import factorize, is_prime, primes_in_range, simple_sieve

SMOOTH_PHASE = "smooth_phase"
UNIT_PHASE = "unit_phase"
COVER_PHASE = "cover_phase"
DEFAULT_ZERO = "default_zero"


class ClassificationError(RuntimeError):
    """A survivor fits none of R0 / Rm / E; the sieve phases are inconsistent."""


class CoverageError(RuntimeError):
    """The requested interval cannot be completely covered."""


@dataclass
class ResidueAssignment:
    """Covering map p -> a_p with the phase each entry came from."""

    entries: dict[int, int] = field(default_factory=dict)
    phase_tags: dict[int, str] = field(default_factory=dict)

    def add(self, p: int, residue: int, tag: str) -> None:
        if p in self.entries:
            raise ValueError(f"prime {p} assigned twice")
        if not 0 <= residue < p:
            raise ValueError(f"residue {residue} out of range for p={p}")
        self.entries[p] = residue
        self.phase_tags[p] = tag

    def items_sorted(self) -> list[tuple[int, int]]:
        return sorted(self.entries.items())

    def __len__(self) -> int:
        return len(self.entries)


@dataclass
class SurvivorClassification:
    """Survivors of phases 1-2 split into the three paper classes.

    Rm stores, per smooth cofactor m, the list of large primes p with
    m * p a survivor. E holds survivors divisible by a prime in (y, z]
    that divides M.
    """

    R0: list[int]
    Rm: dict[int, list[int]]
    E: list[int]
    U: int

    def survivors(self) -> list[int]:
        vals = list(self.R0) + list(self.E)
        for m, ps in self.Rm.items():
            vals.extend(m * p for p in ps)
        vals.sort()
        return vals


@dataclass
class CoverResult:
    complete: bool
    extension: dict[int, int]
    uncovered: list[int]


def run_phases(params: SieveParams) -> tuple[ResidueAssignment, bytearray]:
    """Assign the phase-1/2 residues and sieve [1, U].

    Returns the assignment and a flag vector over [0, U] (index 0 unused)
    with flags[n] = 1 exactly when n avoided every assigned class.
    """
    y, z, U, M = params.y, params.z, params.U, params.M
    if not (y < z <= params.x):
        raise ValueError(f"need y < z <= x, got y={y}, z={z}, x={params.x}")
    assignment = ResidueAssignment()
    flags = bytearray(b"\x01") * (U + 1)
    flags[0] = 0
    for p in simple_sieve(z):
        if M % p == 0:
            continue
        if p <= y:
            assignment.add(p, 1, UNIT_PHASE)
            kernels.mark_residue_class(flags, U, p, 1)
        else:
            assignment.add(p, 0, SMOOTH_PHASE)
            kernels.mark_residue_class(flags, U, p, 0)
    return assignment, flags


def survivor_list(flags: bytearray) -> list[int]:
    return survivor_array(flags).tolist()


def survivor_array(flags: bytearray) -> np.ndarray:
    return np.flatnonzero(np.frombuffer(bytes(flags), dtype=np.uint8)).astype(np.int64)


def classify_survivors(params: SieveParams, flags: bytearray) -> SurvivorClassification:
    """Partition the survivors into R0 (y-smooth), Rm (m * p with p > z),
    and E (divisible by a prime factor of M inside (y, z]).

    The partition is exhaustive and disjoint for any correctly sieved
    vector; a survivor fitting no class raises ClassificationError.
    """
    y, z, M, U = params.y, params.z, params.M, params.U
    small = simple_sieve(y)
    m_primes_mid = [p for p in factorize(M) if y < p <= z]
    R0: list[int] = []
    Rm: dict[int, list[int]] = {}
    E: list[int] = []
    for n in survivor_list(flags):
        if any(n % p == 0 for p in m_primes_mid):
            E.append(n)
            continue
        rem = n
        for p in small:
            while rem % p == 0:
                rem //= p
        if rem == 1:
            R0.append(n)
            continue
        if rem > z and is_prime(rem) != "composite":
            Rm.setdefault(n // rem, []).append(rem)
            continue
        raise ClassificationError(
            f"survivor {n} is not smooth, not smooth*large-prime (residual {rem}), "
            f"and has no factor of M in ({y}, {z}]"
        )
    for ps in Rm.values():
        ps.sort()
    return SurvivorClassification(R0=R0, Rm=Rm, E=E, U=U)


def cover_survivors(
    values: list[int] | np.ndarray,
    cover_primes: list[int],
    method: str = "lazy",
) -> CoverResult:
    """Greedy max-coverage of the given values by residue classes.

    Repeatedly picks the (q, c) pair hitting the most uncovered values,
    breaking ties toward the smallest q, then the smallest c; each prime
    is used at most once. method="exhaustive" rescores every prime every
    round and exists as the reference the lazy path is tested against.
    """
    vals = np.sort(np.asarray(values, dtype=np.int64))
    primes = sorted(cover_primes)
    extension: dict[int, int] = {}
    if vals.size == 0:
        return CoverResult(True, extension, [])
    if not primes:
        return CoverResult(False, extension, vals.tolist())
    scorer = kernels.ResidueScorer(max(primes))

    if method == "exhaustive":
        remaining = set(primes)
        while vals.size and remaining:
            best = None
            for q in sorted(remaining):
                cnt, c = scorer.best_class(vals, q)
                key = (-cnt, q, c)
                if best is None or key < best:
                    best = key
            _, q, c = best
            remaining.discard(q)
            extension[q] = c
            vals = vals[vals % q != c]
        return CoverResult(vals.size == 0, extension, vals.tolist())

    if method != "lazy":
        raise ValueError(f"unknown method {method!r}")

    # Lazy greedy: class counts only shrink as values are covered, so a
    # stale score is an upper bound and the heap top, once rescored at the
    # current version, is the true maximum (ties resolved by the q in the
    # heap key; c is recomputed fresh alongside the count).
    version = 0
    counts, classes = scorer.score_all(vals, np.asarray(primes, dtype=np.int64))
    heap = [(-int(counts[i]), q, int(classes[i]), version) for i, q in enumerate(primes)]
    heapq.heapify(heap)
    while vals.size and heap:
        negc, q, c, ver = heapq.heappop(heap)
        if ver != version:
            cnt, c = scorer.best_class(vals, q)
            heapq.heappush(heap, (-cnt, q, c, version))
            continue
        extension[q] = c
        vals = vals[vals % q != c]
        version += 1
    return CoverResult(vals.size == 0, extension, vals.tolist())


def greedy_cover(
    classification: SurvivorClassification,
    cover_primes: list[int],
    method: str = "lazy",
) -> CoverResult:
    """Greedy covering of every classified survivor; see cover_survivors."""
    return cover_survivors(classification.survivors(), cover_primes, method=method)


def cover_fixed_U(params: SieveParams, x: int | None = None) -> ResidueAssignment:
    """Cover [1, params.U] exactly, returning the full assignment with
    unused primes p <= x, p not dividing M defaulted to a_p = 0.

    Raises CoverageError when the greedy covering leaves survivors.
    """
    if x is None:
        x = params.x
    cover = [p for p in primes_in_range(params.z, x) if params.M % p != 0]
    assignment, flags = run_phases(params)
    result = cover_survivors(survivor_array(flags), cover)
    if not result.complete:
        raise CoverageError(
            f"[1,{params.U}] not coverable: {len(result.uncovered)} survivors "
            f"uncovered, first {result.uncovered[:5]}"
        )
    for q, c in result.extension.items():
        assignment.add(q, c, COVER_PHASE)
    for q in cover:
        if q not in assignment.entries:
            assignment.add(q, 0, DEFAULT_ZERO)
    return assignment


def _coverable(params: SieveParams, U: int, cover_primes: list[int]) -> tuple[bool, dict[int, int]]:
    if U < 1:
        return True, {}
    probe = SieveParams(
        x=params.x, M=params.M, a=params.a, epsilon=params.epsilon, C_U=params.C_U,
        y=params.y, z=params.z, U=U, w=params.w, z0=params.z0, kappa=params.kappa,
        implied_X=params.implied_X, overrides_used=True,
    )
    _, flags = run_phases(probe)
    result = cover_survivors(survivor_array(flags), cover_primes)
    return result.complete, result.extension


def max_covered_U(
    params: SieveParams, x: int | None = None, u_cap: int | None = None
) -> tuple[int, ResidueAssignment]:
    """Largest U whose survivors the primes in (z, x] can cover, plus the
    full residue assignment for [1, U_max].

    Coverability of [1, U] restricts to [1, U'] for U' < U, so the boundary
    is located by exponential bracketing from U = z and binary search.
    Unassigned primes p <= x, p not dividing M default to a_p = 0. The
    bracketing refuses to pass u_cap (default 64x): parameters whose
    covering capacity outruns the survivor density have no finite boundary.
    """
    if x is None:
        x = params.x
    if u_cap is None:
        u_cap = 64 * x
    cover = [p for p in primes_in_range(params.z, x) if params.M % p != 0]

    good, bad = 0, None
    U = max(params.z, 1)
    ok, _ = _coverable(params, U, cover)
    if ok:
        good = U
        while True:
            U *= 2
            if U > u_cap:
                raise RuntimeError(
                    f"coverable beyond the U cap {u_cap}; these parameters have "
                    "covering capacity beyond the survivor density, raise u_cap "
                    "only if a finite boundary is expected"
                )
            ok, _ = _coverable(params, U, cover)
            if not ok:
                bad = U
                break
            good = U
    else:
        bad = U
        while U > 1:
            U //= 2
            ok, _ = _coverable(params, U, cover)
            if ok:
                good = U
                break
            bad = U
        # U = 0 is vacuously coverable
    while bad - good > 1:
        mid = (good + bad) // 2
        ok, _ = _coverable(params, mid, cover)
        if ok:
            good = mid
        else:
            bad = mid

    U_max = good
    final = SieveParams(
        x=params.x, M=params.M, a=params.a, epsilon=params.epsilon, C_U=params.C_U,
        y=params.y, z=params.z, U=max(U_max, 1), w=params.w, z0=params.z0,
        kappa=params.kappa, implied_X=params.implied_X, overrides_used=True,
    )
    if U_max >= 1:
        assignment = cover_fixed_U(final, x)
    else:
        assignment, _ = run_phases(final)
        for q in cover:
            assignment.add(q, 0, DEFAULT_ZERO)
    return U_max, assignment


def verify_coverage(assignment: ResidueAssignment, U: int) -> bool:
    """Directly check that every n in [1, U] hits some assigned class."""
    flags = bytearray(b"\x01") * (U + 1)
    flags[0] = 0
    for p, a_p in assignment.entries.items():
        kernels.mark_residue_class(flags, U, p, a_p)
    return not any(flags[1:])
