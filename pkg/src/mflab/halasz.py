"""Diagnostics for the pole/zero behavior of F(s) on the one-line.

A direction is a pair (epsilon0, t0): epsilon0 = -1 probes a pole-like
point (|F| ~ 1/(sigma-1)), epsilon0 = +1 a zero-like point.  The central
object is the alignment sum

    sum_p (1 + epsilon0 Re(f(p) p^{-it0})) / p,

whose convergence or divergence separates the two regimes.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import cos, log, pi, sqrt
from typing import Sequence

import numpy as np

from .dirichlet import (
    ComplexPoint,
    EvalResult,
    F_euler,
    TruncationPlan,
    as_point,
    log_zeta_minus_prime_zeta,
)
from .errors import DomainError
from .multfun import MultiplicativeFunction, SummatoryTrace
from .primes import PrimeTable


@dataclass(frozen=True)
class HalaszDirection:
    epsilon0: int
    t0: float = 0.0

    def __post_init__(self) -> None:
        if self.epsilon0 not in (-1, 1):
            raise DomainError(f"epsilon0 must be +1 or -1, got {self.epsilon0}")


@dataclass(frozen=True)
class PartialSumSeries:
    """Partial sums of a nonnegative prime series at geometric cutoffs."""

    cutoffs: np.ndarray
    partials: np.ndarray

    def final(self) -> float:
        return float(self.partials[-1])


def write_series_csv(series: PartialSumSeries, path: str, provenance: str | None = None) -> None:
    """CSV export: header ``P,partial_sum`` plus a provenance comment."""
    with open(path, "w", newline="") as fh:
        if provenance:
            fh.write(f"# {provenance}\n")
        fh.write("P,partial_sum\n")
        for c, v in zip(series.cutoffs, series.partials):
            fh.write(f"{int(c)},{float(v)!r}\n")


def _geometric_cutoffs(P: int) -> list[int]:
    cuts = []
    c = 4
    while c < P:
        cuts.append(c)
        c *= 2
    cuts.append(P)
    return cuts


def pole_sum(
    f: MultiplicativeFunction,
    direction: HalaszDirection,
    P: int,
    table: PrimeTable,
) -> PartialSumSeries:
    """Partial sums of (1 + e0 Re(f(p) p^{-it0}))/p for p <= P.

    Every term is >= 0 when |f(p)| <= 1; a term below -1e-12 means the
    function is outside class M and raises.
    """
    ps = table.primes_le(P)
    psf = ps.astype(np.float64)
    fp = f.prime_values(ps)
    terms = (1.0 + direction.epsilon0 * np.real(fp * np.exp(-1j * direction.t0 * np.log(psf)))) / psf
    worst = float(terms.min()) if terms.size else 0.0
    if worst < -1e-12:
        p_bad = int(ps[int(np.argmin(terms))])
        raise DomainError(f"negative alignment term at p={p_bad}: |f(p)| > 1")
    partial = np.cumsum(np.maximum(terms, 0.0))
    cuts = _geometric_cutoffs(P)
    idx = np.searchsorted(ps, cuts, side="right") - 1
    vals = np.where(idx >= 0, partial[np.maximum(idx, 0)], 0.0)
    return PartialSumSeries(np.asarray(cuts, dtype=np.int64), vals.astype(np.float64))


@dataclass(frozen=True)
class ThetaValue:
    """Angle decomposition e0 f(p) p^{-it0} = -|f(p)| e^{i theta}, theta in (-pi, pi].

    chain_* carry the proof inequality
    1 + e0 Re(f(p) p^{-it0}) >= |f(p)|(1-cos theta) >= |f(p)| theta^2/(2 pi).
    """

    p: int
    theta: float
    modulus: float
    chain_top: float
    chain_mid: float
    chain_low: float

    @property
    def chain_ok(self) -> bool:
        return (
            self.chain_top >= self.chain_mid - 1e-12
            and self.chain_mid >= self.chain_low - 1e-12
        )


def theta_from_value(fp: complex, direction: HalaszDirection, p: int) -> ThetaValue:
    w = direction.epsilon0 * fp * np.exp(-1j * direction.t0 * log(p))
    r = abs(w)
    if r == 0.0:
        # degenerate decomposition: chain collapses to 1 >= 0 >= 0
        return ThetaValue(p, 0.0, 0.0, 1.0, 0.0, 0.0)
    theta = float(np.angle(-w))
    if theta <= -pi:
        theta = pi
    top = 1.0 + float(w.real)
    mid = r * (1.0 - cos(theta))
    low = r * theta * theta / (2.0 * pi)
    return ThetaValue(p, theta, r, top, mid, low)


def theta_decomposition(
    f: MultiplicativeFunction, direction: HalaszDirection, p: int
) -> ThetaValue:
    return theta_from_value(f.prime_power(p, 1), direction, p)


@dataclass(frozen=True)
class LemmaDefectResult:
    """D = e0 sum_p f(p) p^{-s} + log zeta(s - i t0), with normalized ratio."""

    value: complex
    error_bound: float
    normalizer: float
    ratio: float


def lemma_defect(
    f: MultiplicativeFunction,
    direction: HalaszDirection,
    s,
    plan: TruncationPlan,
    base: PrimeTable,
) -> LemmaDefectResult:
    """Evaluate the defect D and |D| / sqrt(log 1/(sigma-1)).

    Rearranged so the pole cancels exactly:

        D = [log zeta(w) - P(w)] + sum_{p<=P} (1 + e0 f(p) p^{-it0}) p^{-w},
        w = s - i t0,

    where the bracket comes from the Moebius/log-zeta identity.  The value
    is then accurate near sigma = 1 whenever f is aligned with the
    direction; the bound still carries the unconditional residual tail
    2 P^{1-sigma}/(sigma-1).
    """
    pt = as_point(s)
    if pt.sigma - 1.0 > 1.0 / np.e + 1e-12:
        raise DomainError("lemma defect needs sigma - 1 <= 1/e")
    w = pt.s - 1j * direction.t0
    bracket = log_zeta_minus_prime_zeta(ComplexPoint(w.real, w.imag))
    ps = base.primes_le(plan.prime_cutoff)
    psf = ps.astype(np.float64)
    fp = f.prime_values(ps)
    g = 1.0 + direction.epsilon0 * fp * np.exp(-1j * direction.t0 * np.log(psf))
    resid = complex(np.cumsum(g * np.exp(-w * np.log(psf)))[-1])
    D = bracket.value + resid
    err = bracket.error_bound + 2.0 * float(plan.prime_cutoff) ** (1.0 - pt.sigma) / (
        pt.sigma - 1.0)
    normalizer = sqrt(max(log(1.0 / (pt.sigma - 1.0)), 1.0))
    return LemmaDefectResult(D, err, normalizer, abs(D) / normalizer)


@dataclass(frozen=True)
class Theorem1Point:
    sigma: float
    F: EvalResult
    ratio: float | None  # None = indeterminate (|F| within its error bound)
    ratio_bound: float


def theorem1_ratio(
    f: MultiplicativeFunction,
    direction: HalaszDirection,
    sigma_grid: Sequence[float],
    plan: TruncationPlan,
    base: PrimeTable | None = None,
) -> list[Theorem1Point]:
    """|F(sigma + i t0)|^e0 / (sigma - 1) along a grid of sigma in (1, 3/2].

    F comes from the euler-product route, the only one usable near the
    one-line; see F_euler for its stated alignment assumption.
    """
    out = []
    for sg in sigma_grid:
        sg = float(sg)
        if not 1.0 < sg <= 1.5:
            raise DomainError(f"theorem-1 grid needs sigma in (1, 3/2], got {sg}")
        fe = F_euler(f, ComplexPoint(sg, direction.t0), plan,
                     epsilon0=direction.epsilon0, t0=direction.t0, base=base)
        aF = abs(fe.value)
        if aF <= fe.error_bound:
            out.append(Theorem1Point(sg, fe, None, float("inf")))
            continue
        if direction.epsilon0 == 1:
            ratio = aF / (sg - 1.0)
            rbound = fe.error_bound / (sg - 1.0)
        else:
            ratio = 1.0 / (aF * (sg - 1.0))
            rbound = fe.error_bound / (aF * (aF - fe.error_bound) * (sg - 1.0))
        out.append(Theorem1Point(sg, fe, ratio, rbound))
    return out


@dataclass(frozen=True)
class Theorem2Point:
    x: int
    abs_S: float
    ratio: float


def theorem2_ratio(trace: SummatoryTrace, c: float) -> list[Theorem2Point]:
    """|S_f(x)| log x / (x exp(c sqrt(log log x))) at checkpoints x >= 16."""
    out = []
    for x, v in zip(trace.xs, trace.values):
        x = int(x)
        if x < 16:
            continue
        a = abs(complex(v))
        ratio = a * log(x) / (x * np.exp(c * sqrt(log(log(x)))))
        out.append(Theorem2Point(x, a, float(ratio)))
    return out


# ---------------------------------------------------------------------------
# criterion report

_DIVERGENT_SLOPE = 0.5   # growth per decade >= this fraction of d(loglog): diverging
_FLAT_SLOPE = 0.05       # below this fraction: treated as converged


@dataclass(frozen=True)
class CriterionReport:
    function_label: str
    t: float
    cutoffs: np.ndarray
    partials: np.ndarray
    last_decade_growth: float
    loglog_increment: float
    sum_side: str        # diverging | converged | unclear
    two_adic_ok: bool
    two_adic_first_failure: int | None
    verdict: str

    def text(self) -> str:
        lines = [
            f"function: {self.function_label}",
            f"t: {self.t!r}",
            "partial sums of (1 - Re f(p) p^(-it))/p:",
        ]
        for c, v in zip(self.cutoffs, self.partials):
            lines.append(f"  P={int(c)}: {float(v)!r}")
        lines.append(f"last-decade growth: {self.last_decade_growth!r}"
                     f" (loglog increment {self.loglog_increment!r})")
        lines.append(f"sum side: {self.sum_side}")
        if self.two_adic_ok:
            lines.append("2-adic side f(2^k) = -2^(ikt): pass")
        else:
            lines.append(
                f"2-adic side f(2^k) = -2^(ikt): fails at k={self.two_adic_first_failure}")
        lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines)


def criterion_report(
    f: MultiplicativeFunction,
    t: float,
    P: int,
    table: PrimeTable,
    K: int = 20,
) -> CriterionReport:
    """Probe the mean-value criterion at a finite cutoff.

    Divergence of the prime sum is undecidable from finite data; the sum
    side is labeled by comparing last-decade growth against 0.5 * d(loglog),
    and anything between the flat and divergent thresholds stays
    indeterminate.
    """
    if P < 100:
        raise DomainError("criterion needs P >= 100")
    ps = table.primes_le(P)
    psf = ps.astype(np.float64)
    fp = f.prime_values(ps)
    terms = (1.0 - np.real(fp * np.exp(-1j * t * np.log(psf)))) / psf
    partial = np.cumsum(terms)
    cutoffs = []
    c = 10
    while c < P:
        cutoffs.append(c)
        c *= 10
    cutoffs.append(P)
    idx = np.searchsorted(ps, cutoffs, side="right") - 1
    partials = np.where(idx >= 0, partial[np.maximum(idx, 0)], 0.0)
    lo, hi = cutoffs[-2], cutoffs[-1]
    growth = float(partials[-1] - partials[-2])
    dll = log(log(hi)) - log(log(lo))
    if growth >= _DIVERGENT_SLOPE * dll:
        sum_side = "diverging"
    elif growth <= _FLAT_SLOPE * dll:
        sum_side = "converged"
    else:
        sum_side = "unclear"
    two_adic_fail = None
    for k in range(1, K + 1):
        if abs(f.prime_power(2, k) - (-np.exp(1j * k * t * log(2.0)))) > 1e-9:
            two_adic_fail = k
            break
    if two_adic_fail is None:
        verdict = "criterion satisfied (2-adic side)"
    elif sum_side == "diverging":
        verdict = "criterion satisfied (sum side)"
    elif sum_side == "converged":
        verdict = "criterion fails"
    else:
        verdict = "indeterminate at this cutoff"
    return CriterionReport(
        function_label=f.label,
        t=t,
        cutoffs=np.asarray(cutoffs, dtype=np.int64),
        partials=partials.astype(np.float64),
        last_decade_growth=growth,
        loglog_increment=dll,
        sum_side=sum_side,
        two_adic_ok=two_adic_fail is None,
        two_adic_first_failure=two_adic_fail,
        verdict=verdict,
    )
