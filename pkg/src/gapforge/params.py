"""Scalar parameters of the construction and admissibility checks on the modulus.

The smooth limit y, the zero-class limit z and the target interval length U
are derived from the sieving limit x; all three can be overridden for toy
instances where the asymptotic displays are meaningless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .primes import totient_and_omega

MIN_DERIVED_Y = 10  # below this the derived displays are degenerate


class DomainError(ValueError):
    """A derived formula is undefined or degenerate for the given x."""


def iterated_log(x: float, nu: int) -> float:
    """nu-fold iterated natural logarithm of x.

    Raises DomainError when an intermediate value is <= 0 (the next log
    would be undefined).
    """
    if nu < 1:
        raise ValueError("nu must be >= 1")
    v = float(x)
    for _ in range(nu):
        if v <= 0.0:
            raise DomainError(f"iterated log hit a non-positive intermediate ({v})")
        v = math.log(v)
    return v


@dataclass(frozen=True)
class SieveParams:
    """Every scalar parameter of one construction run."""

    x: int
    M: int
    a: int
    epsilon: float
    C_U: float
    y: int
    z: int
    U: int
    w: float
    z0: float
    kappa: float = 1.0
    implied_X: float = field(default=float("inf"))
    overrides_used: bool = False

    def __post_init__(self):
        if math.gcd(self.M, self.a) != 1:
            raise DomainError(f"gcd(M, a) must be 1, got M={self.M}, a={self.a}")
        if not (0.0 < self.epsilon < 1.0):
            raise DomainError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.C_U <= 0.0:
            raise DomainError(f"C_U must be positive, got {self.C_U}")
        if self.U < 1 or self.y < 2 or self.z < 3:
            raise DomainError(
                f"degenerate bounds: U={self.U} (need >=1), y={self.y} (>=2), z={self.z} (>=3)"
            )
        if self.w < 0.0:
            raise DomainError(f"w must be >= 0, got {self.w}")
        if not self.overrides_used and not (self.y < self.z < self.x):
            raise DomainError(f"derived ordering y < z < x violated: {self.y}, {self.z}, {self.x}")

    @property
    def log_implied_X(self) -> float:
        return self.x / (1.0 - self.epsilon)


def derive_params(
    x: int,
    M: int,
    a: int,
    epsilon: float = 0.1,
    C_U: float = 2.0,
    y: int | None = None,
    z: int | None = None,
    U: int | None = None,
    kappa: float = 1.0,
) -> SieveParams:
    """Derive (y, z, U, w, z0) from x, honoring any explicit overrides.

    y = floor(exp((1-eps) log x log3 x / log2 x)), z = floor(x / log2 x),
    U = floor(C_U (phi(M)/M) x log y / log2 x). w = log4 x clamped at 0.
    Deriving (rather than overriding) requires x large enough that the
    displays are non-degenerate; in practice y must come out >= 10, which
    puts x in the thousands. Toy instances pass y/z/U directly.
    """
    if x < 20:
        raise DomainError(f"x must be >= 20, got {x}")
    overrides_used = y is not None or z is not None or U is not None

    l1 = math.log(x)
    l2 = math.log(l1) if l1 > 0 else float("nan")
    l3 = math.log(l2) if l2 > 0 else None

    if y is None:
        if l3 is None or l3 <= 0:
            raise DomainError(f"y-display undefined at x={x} (log3 x <= 0); supply overrides")
        y = int(math.exp((1.0 - epsilon) * l1 * l3 / l2))
        if y < MIN_DERIVED_Y:
            raise DomainError(
                f"derived y={y} below {MIN_DERIVED_Y}: the parameter displays degenerate "
                f"for x={x} (log4 x is already {iterated_log(x, 4):.3f} here); "
                "supply explicit y/z/U overrides for toy runs"
            )
    if z is None:
        z = int(x / l2)
    if U is None:
        phi, _ = totient_and_omega(M)
        U = int(C_U * (phi / M) * x * math.log(y) / l2)

    w = 0.0
    z0 = 0.0
    if l3 is not None and l3 > 0:
        z0 = l1 * l3 / l2
        l4 = math.log(l3)
        if l4 > 0:
            w = l4

    log_X = x / (1.0 - epsilon)
    try:
        implied_X = math.exp(log_X)
    except OverflowError:
        implied_X = float("inf")

    return SieveParams(
        x=x, M=M, a=a, epsilon=epsilon, C_U=C_U,
        y=y, z=z, U=U, w=w, z0=z0, kappa=kappa,
        implied_X=implied_X, overrides_used=overrides_used,
    )


@dataclass(frozen=True)
class ModulusCheck:
    """Outcome of the admissibility checks on (M, a)."""

    accepted: bool
    reason: str | None  # first failed check: "coprimality" | "size" | "omega"
    checks: tuple[tuple[str, str], ...]  # (name, "pass" | "vacuous-pass" | "fail")
    detail: str = ""


def check_modulus(M: int, a: int, x: int, kappa: float = 1.0) -> ModulusCheck:
    """Verify gcd(M, a) = 1, M <= kappa x^(1/5), and the omega(M) growth bound.

    The omega bound only bites once log4 M is defined and positive, i.e.
    M > e^(e^e); every desk-scale M records it as a vacuous pass.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    checks: list[tuple[str, str]] = []
    reason = None
    detail = ""

    if math.gcd(M, a) == 1:
        checks.append(("coprimality", "pass"))
    else:
        checks.append(("coprimality", "fail"))
        reason = reason or "coprimality"
        detail = f"gcd({M}, {a}) = {math.gcd(M, a)}"

    size_bound = kappa * x ** 0.2
    if M <= size_bound:
        checks.append(("size", "pass"))
    else:
        checks.append(("size", "fail"))
        if reason is None:
            reason = "size"
            detail = f"M={M} > kappa*x^(1/5) = {size_bound:.3f}"

    try:
        l4M = iterated_log(M, 4)
    except DomainError:
        l4M = None
    if l4M is None or l4M <= 0:
        checks.append(("omega", "vacuous-pass"))
    else:
        l2M = iterated_log(M, 2)
        l3M = iterated_log(M, 3)
        _, omega = totient_and_omega(M)
        bound = math.exp(l2M * l4M / l3M)
        if omega <= bound:
            checks.append(("omega", "pass"))
        else:
            checks.append(("omega", "fail"))
            if reason is None:
                reason = "omega"
                detail = f"omega(M)={omega} > exp(log2 M log4 M / log3 M) = {bound:.3f}"

    return ModulusCheck(accepted=reason is None, reason=reason, checks=tuple(checks), detail=detail)
