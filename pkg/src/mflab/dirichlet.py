"""Error-bounded evaluation of zeta(s), F(s) and log F(s) for sigma > 1.

Four routes to F are provided, each tagged in its EvalResult:

* ``truncated-series``  -- direct sum to N, unconditional tail bound.
* ``partial-summation`` -- Abel integral of a summatory trace, unconditional.
* ``prime-sum``         -- sum f(p) p^{-s} plus Euler-factor defect,
                           unconditional (crude near sigma = 1).
* ``euler-product``     -- prime-zeta route usable arbitrarily close to the
                           one-line; its bound is conditional on the stated
                           alignment assumption (see F_euler).

All tail bounds are integral comparisons using |f(n)| <= 1: rigorous but
crude, so near sigma = 1 the unconditional routes report honest, large
bounds instead of refusing.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import expm1, isqrt, log

import numpy as np

from .errors import CoverageError, DomainError, SingularFactorError
from .multfun import MultiplicativeFunction, StreamSummer, SummatoryTrace, segment_values
from .primes import PrimeTable, sieve_primes

# Bernoulli quotients B_2/2!, B_4/4!, B_6/6! for the Euler-Maclaurin tail.
_B2_2F = 1.0 / 12.0
_B4_4F = -1.0 / 720.0
_B6_6F = 1.0 / 30240.0

# |log(factor_p) - f(p) p^{-s}| <= 3.75 p^{-2 sigma} for p >= 3, |f| <= 1:
# |z| <= p^{-sigma}/(1-p^{-sigma}) <= 1/2, so |log(1+z)-z| <= |z|^2 <= 2.25
# p^{-2 sigma}, and the k >= 2 terms add at most 1.5 p^{-2 sigma}.
_DEFECT_COEFF = 3.75


@dataclass(frozen=True)
class ComplexPoint:
    """A point s = sigma + it strictly right of the one-line."""

    sigma: float
    t: float = 0.0

    def __post_init__(self) -> None:
        if not self.sigma > 1.0:
            raise DomainError(f"sigma must be > 1, got {self.sigma}")

    @property
    def s(self) -> complex:
        return complex(self.sigma, self.t)


def as_point(s) -> ComplexPoint:
    if isinstance(s, ComplexPoint):
        return s
    c = complex(s)
    return ComplexPoint(c.real, c.imag)


@dataclass(frozen=True)
class EvalResult:
    """A value with a bound on |value - true value| under the method's
    stated assumptions."""

    value: complex
    error_bound: float
    method: str

    def consistent_with(self, other: "EvalResult") -> bool:
        return abs(self.value - other.value) <= self.error_bound + other.error_bound


@dataclass(frozen=True)
class TruncationPlan:
    """Cutoffs: N terms of the series, primes to P, exact Euler-factor
    logs below exact_factor_cutoff."""

    series_cutoff: int = 100_000
    prime_cutoff: int = 100_000
    exact_factor_cutoff: int = 10_000

    def __post_init__(self) -> None:
        if self.series_cutoff < 2 or self.prime_cutoff < 2:
            raise DomainError("cutoffs must be >= 2")
        if not 2 <= self.exact_factor_cutoff <= self.prime_cutoff:
            raise DomainError("need 2 <= exact_factor_cutoff <= prime_cutoff")


# ---------------------------------------------------------------------------
# zeta


def zeta(s, tol: float = 1e-10) -> EvalResult:
    """Euler-Maclaurin evaluation of zeta(s), sigma > 1.

    Direct sum to N plus N^{1-s}/(s-1), the boundary term and the Bernoulli
    corrections through B_4; N grows until the standard remainder bound
    (first omitted term times |s+5|/(sigma+5)) is below tol.
    """
    pt = as_point(s)
    sc = pt.s
    sigma = pt.sigma

    def rem_bound(n: int) -> float:
        w = sc * (sc + 1) * (sc + 2) * (sc + 3) * (sc + 4)
        t3 = abs(_B6_6F) * abs(w) * n ** (-(sigma + 5.0))
        return t3 * abs(sc + 5) / (sigma + 5.0)

    N = max(16, int(2 * abs(pt.t)) + 10)
    while rem_bound(N) > tol and N < (1 << 22):
        N *= 2
    ns = np.arange(1, N, dtype=np.float64)
    head = complex(np.cumsum(np.exp(-sc * np.log(ns)))[-1])
    lnN = log(N)
    value = (
        head
        + np.exp((1 - sc) * lnN) / (sc - 1)
        + 0.5 * np.exp(-sc * lnN)
        + _B2_2F * sc * np.exp((-sc - 1) * lnN)
        + _B4_4F * sc * (sc + 1) * (sc + 2) * np.exp((-sc - 3) * lnN)
    )
    bound = rem_bound(N) + 1e-15 * (1.0 + abs(value)) * log(N)
    return EvalResult(value, bound, "euler-maclaurin")


def log_zeta(s, tol: float = 1e-10) -> EvalResult:
    """Principal log of the zeta value, with propagated bound."""
    z = zeta(s, tol)
    az = abs(z.value)
    if az <= z.error_bound:
        raise SingularFactorError("zeta value indistinguishable from 0")
    err = z.error_bound / (az - z.error_bound)
    return EvalResult(np.log(z.value), err, z.method)


def _mu_small(k: int) -> int:
    if k == 1:
        return 1
    mu, d = 1, 2
    while d * d <= k:
        if k % d == 0:
            k //= d
            if k % d == 0:
                return 0
            mu = -mu
        d += 1
    return -mu if k > 1 else mu


def log_zeta_minus_prime_zeta(w, tol: float = 1e-12) -> EvalResult:
    """log zeta(w) - P(w) = -sum_{k>=2} mu(k)/k log zeta(kw).

    The k = 1 terms cancel, so the result is branch-free and stays O(1)
    as Re w -> 1; this is the accurate route to prime sums near the pole.
    """
    pt = as_point(w)
    sigma = pt.sigma
    K = 2
    while 2.0 ** (-(K + 1) * sigma) * 12.0 > tol and K < 64:
        K += 1
    total = 0.0 + 0.0j
    err = 0.0
    for k in range(2, K + 1):
        mu = _mu_small(k)
        if mu == 0:
            continue
        lz = log_zeta(ComplexPoint(k * pt.sigma, k * pt.t), tol=1e-14)
        total -= (mu / k) * lz.value
        err += lz.error_bound / k
    err += 12.0 * 2.0 ** (-(K + 1) * sigma)
    return EvalResult(total, err, "euler-maclaurin")


def prime_zeta(w, tol: float = 1e-12) -> EvalResult:
    """P(w) = sum_p p^{-w} via the Moebius/log-zeta identity.

    Uses the principal log of zeta(w); accurate even for sigma - 1 ~ 1e-9
    where direct prime summation is hopeless.
    """
    tail = log_zeta_minus_prime_zeta(w, tol)
    lz = log_zeta(w)
    return EvalResult(lz.value - tail.value, lz.error_bound + tail.error_bound,
                      "euler-maclaurin")


# ---------------------------------------------------------------------------
# F(s) routes


def F_truncated(
    f: MultiplicativeFunction,
    s,
    plan: TruncationPlan,
    base: PrimeTable | None = None,
    segment_size: int = 1 << 18,
) -> EvalResult:
    """sum_{n<=N} f(n) n^{-s} with the integral-comparison tail bound
    N^{1-sigma}/(sigma-1)."""
    pt = as_point(s)
    sc = pt.s
    N = plan.series_cutoff
    if base is None:
        base = sieve_primes(max(2, isqrt(N)))
    summer = StreamSummer()
    summer.feed(1, np.ones(1, dtype=np.complex128))
    lo = 2
    while lo <= N:
        hi = min(lo + segment_size - 1, N)
        vals = segment_values(f, lo, hi, base)
        ns = np.arange(lo, hi + 1, dtype=np.float64)
        summer.feed(lo, vals * np.exp(-sc * np.log(ns)))
        lo = hi + 1
    value = summer.close()
    bound = float(N) ** (1.0 - pt.sigma) / (pt.sigma - 1.0)
    return EvalResult(value, bound, "truncated-series")


def F_partial_summation(trace: SummatoryTrace, s, X: float) -> EvalResult:
    """s * int_1^X S_f(y) y^{-s-1} dy from trace checkpoints.

    Exact between consecutive-integer checkpoints; wider gaps contribute a
    reconstruction bound (|S(y) - S(a)| <= y - a), and the unseen range
    beyond X contributes |s| X^{1-sigma}/(sigma-1).
    """
    pt = as_point(s)
    sc, sigma = pt.s, pt.sigma
    if X < 1:
        raise DomainError(f"X must be >= 1, got {X}")
    tail = abs(sc) * X ** (1.0 - sigma) / (sigma - 1.0)
    if X == 1:
        return EvalResult(0.0 + 0.0j, tail, "partial-summation")
    if trace.xs.size == 0 or float(trace.xs[-1]) < X - 1:
        raise CoverageError(
            f"trace ends at {0 if trace.xs.size == 0 else int(trace.xs[-1])}, needs >= {X - 1}")
    xs = [1] + [int(v) for v in trace.xs if v > 1]
    ss = [1.0 + 0.0j] + [complex(v) for v, xv in zip(trace.values, trace.xs) if xv > 1]
    value = 0.0 + 0.0j
    recon = 0.0
    for i, (a, Sa) in enumerate(zip(xs, ss)):
        if a >= X:
            break
        b = xs[i + 1] if i + 1 < len(xs) else X
        c = min(float(b), X)
        value += Sa * (a ** (-sc) - c ** (-sc))
        if c - a > 1.0:
            # int_a^c (y-a) y^{-sigma-1} dy, closed form
            e = (a ** (1 - sigma) - c ** (1 - sigma)) / (sigma - 1.0) - a * (
                a ** (-sigma) - c ** (-sigma)) / sigma
            recon += abs(sc) * e
    return EvalResult(value, recon + tail, "partial-summation")


def euler_factor_log(
    f: MultiplicativeFunction, p: int, s, kmax: int | None = None,
    tail_tol: float = 1e-14,
) -> complex:
    """Principal log of the local Euler factor sum_k f(p^k) p^{-ks}.

    For p >= 3 in class M the inner sum has modulus <= 1/2, so the factor
    stays in the right half-plane and the principal branch is safe.
    """
    pt = as_point(s)
    x = np.exp(-pt.s * log(p))
    if f.completely_multiplicative:
        w = 1.0 - f.prime_power(p, 1) * x
        if abs(w) < 1e-12:
            raise SingularFactorError(f"Euler factor at p={p} vanishes")
        return complex(-np.log(w))
    if kmax is None:
        kmax = 1
        while p ** (-(kmax + 1) * pt.sigma) / (1 - p ** (-pt.sigma)) > tail_tol:
            kmax += 1
    w = 1.0 + 0.0j
    xk = 1.0 + 0.0j
    for k in range(1, kmax + 1):
        xk *= x
        w += f.prime_power(p, k) * xk
    if abs(w) < 1e-12:
        raise SingularFactorError(f"Euler factor at p={p} vanishes")
    return complex(np.log(w))


def _defect_sum(
    f: MultiplicativeFunction, pt: ComplexPoint, cutoff: int,
    base: PrimeTable,
) -> tuple[complex, float]:
    """sum_{p<=cutoff} [log factor_p - f(p) p^{-s}] plus tail bound."""
    sc, sigma = pt.s, pt.sigma
    ps = base.primes_le(cutoff).astype(np.float64)
    if f.completely_multiplicative:
        fp = f.prime_values(ps.astype(np.int64))
        z = fp * np.exp(-sc * np.log(ps))
        small = np.abs(z) < 1e-3
        exact = -np.log(1.0 - np.where(small, 0.5, z)) - np.where(small, 0.5, z)
        series = z * z * (0.5 + z * (1.0 / 3.0 + z * (0.25 + z * 0.2)))
        delta = complex(np.cumsum(np.where(small, series, exact))[-1])
    else:
        acc = 0.0 + 0.0j
        for p in ps:
            p = int(p)
            acc += euler_factor_log(f, p, pt) - f.prime_power(p, 1) * np.exp(-sc * log(p))
        delta = acc
    tail = _DEFECT_COEFF * float(cutoff) ** (1.0 - 2.0 * sigma) / (2.0 * sigma - 1.0)
    return delta, tail


@dataclass(frozen=True)
class PrimeSumResult:
    """Truncated prime sum of f(p) p^{-s} with its Euler-factor defect.

    log F(s) = value + defect + remainder, |remainder| <= error_bound.
    """

    value: complex
    defect: complex
    prime_tail_bound: float
    defect_tail_bound: float
    method: str = "prime-sum"

    @property
    def error_bound(self) -> float:
        return self.prime_tail_bound + self.defect_tail_bound

    @property
    def log_F(self) -> complex:
        return self.value + self.defect


def log_F_prime_sum(
    f: MultiplicativeFunction, s, plan: TruncationPlan,
    base: PrimeTable | None = None,
) -> PrimeSumResult:
    """sum_{p<=P} f(p) p^{-s} plus the defect sum_{p<=C} [log factor - f(p)p^{-s}].

    Unconditional bounds: prime tail P^{1-sigma}/(sigma-1) and defect tail
    3.75 C^{1-2 sigma}/(2 sigma - 1).  The p = 2 factor is always inside the
    exact range, so class M2 is not required (a vanishing factor at p = 2
    raises SingularFactorError).
    """
    pt = as_point(s)
    if base is None:
        base = sieve_primes(plan.prime_cutoff)
    ps = base.primes_le(plan.prime_cutoff)
    fp = f.prime_values(ps)
    terms = fp * np.exp(-pt.s * np.log(ps.astype(np.float64)))
    value = complex(np.cumsum(terms)[-1])
    prime_tail = float(plan.prime_cutoff) ** (1.0 - pt.sigma) / (pt.sigma - 1.0)
    delta, dtail = _defect_sum(f, pt, plan.exact_factor_cutoff, base)
    return PrimeSumResult(value, delta, prime_tail, dtail)


def F_euler(
    f: MultiplicativeFunction,
    s,
    plan: TruncationPlan,
    epsilon0: int = 1,
    t0: float = 0.0,
    base: PrimeTable | None = None,
) -> EvalResult:
    """F(s) through the Euler product, written around the direction (e0, t0):

        log F = e0 [ sum_{p<=P} (1 + e0 f(p) p^{-it0}) p^{-w} - P(w) ] + defect,
        w = s - i t0,

    with P(w) from the Moebius/log-zeta identity.  This stays accurate for
    sigma arbitrarily close to 1.

    Stated assumption for the error bound: the alignment residual
    1 + e0 f(p) p^{-it0} vanishes for p > P (true for the aligned corpus:
    moebius/liouville/one at t0 = 0 and the extremal construction).  The
    residual's observed partial sums diagnose how credible that is.
    """
    if epsilon0 not in (-1, 1):
        raise DomainError("epsilon0 must be +1 or -1")
    if not f.claims_M:
        raise DomainError("F_euler requires a class-M function")
    pt = as_point(s)
    w = pt.s - 1j * t0
    wpt = ComplexPoint(w.real, w.imag)
    if base is None:
        base = sieve_primes(plan.prime_cutoff)
    ps = base.primes_le(plan.prime_cutoff)
    psf = ps.astype(np.float64)
    fp = f.prime_values(ps)
    g = 1.0 + epsilon0 * fp * np.exp(-1j * t0 * np.log(psf))
    residual = complex(np.cumsum(g * np.exp(-w * np.log(psf)))[-1])
    pz = prime_zeta(wpt)
    delta, dtail = _defect_sum(f, pt, plan.exact_factor_cutoff, base)
    log_F = epsilon0 * (residual - pz.value) + delta
    log_err = pz.error_bound + dtail
    value = np.exp(log_F)
    bound = abs(value) * expm1(min(log_err, 500.0))
    return EvalResult(complex(value), bound, "euler-product")


# ---------------------------------------------------------------------------
# probes


def zeta_floor_probe(sigmas, ts) -> float:
    """min over the grid of |zeta(sigma+it)| * log(|t|+2).

    Finite-range probe of the classical lower bound for 1/zeta on and near
    the one-line.
    """
    best = float("inf")
    for sg in sigmas:
        for t in ts:
            z = zeta(ComplexPoint(float(sg), float(t)))
            best = min(best, abs(z.value) * log(abs(t) + 2.0))
    return best
