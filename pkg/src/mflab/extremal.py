"""Constructs the extremal counterexample function from a target growth
profile kappa, and verifies the construction's mechanics at desk scale.

All profile functions (kappa, its regularizations, alpha) are evaluated in
loglog coordinates: ``ll = log log x``.  Block endpoints are kept in log
form (log x_j, log x_j^2) because upper_j = x_j^{log x_j} overflows floats
from j = 3 on even though the construction remains well-defined.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from math import exp, log, sqrt
from typing import Callable

import numpy as np

from .dirichlet import ComplexPoint, TruncationPlan, log_F_prime_sum
from .errors import CapacityError, CoverageError, DomainError, FunctionSpecError
from .multfun import MultiplicativeFunction
from .primes import PrimeTable, mertens_estimate, sum_reciprocal_primes

LOGLOG_16 = log(log(16.0))      # smallest admissible loglog coordinate
DEFAULT_LOGLOG_MAX = 40.0       # sup truncation: x_max = e^(e^40)
MERTENS_SLACK = 0.05            # finite-range slack for analytic Mertens bounds
ALPHA_FLOOR = 1e-6


# ---------------------------------------------------------------------------
# kappa regularization and alpha


@dataclass(frozen=True)
class KappaFunction:
    """A growth target with its monotone regularizations on a loglog grid.

    kappa0 is the running max of raw (nondecreasing); kappa1 additionally
    makes kappa/sqrt(ll) nonincreasing while staying nondecreasing itself.
    The sup defining kappa1 is truncated at loglog_max; beyond the grid both
    extend as constants.
    """

    grid: np.ndarray = field(repr=False)
    kappa0_vals: np.ndarray = field(repr=False)
    kappa1_vals: np.ndarray = field(repr=False)
    loglog_max: float
    desc: str = "custom"

    def kappa0(self, ll: float) -> float:
        return self._interp(ll, self.kappa0_vals)

    def kappa1(self, ll: float) -> float:
        return self._interp(ll, self.kappa1_vals)

    def _interp(self, ll: float, vals: np.ndarray) -> float:
        if ll < self.grid[0] - 1e-12:
            raise DomainError(f"loglog coordinate {ll} below domain start {self.grid[0]}")
        if ll >= self.grid[-1]:
            return float(vals[-1])
        return float(np.interp(ll, self.grid, vals))


def regularize_kappa(
    raw: Callable[[float], float],
    loglog_min: float = LOGLOG_16,
    loglog_max: float = DEFAULT_LOGLOG_MAX,
    points: int = 2000,
    desc: str = "custom",
) -> KappaFunction:
    """Running-max and sup regularizations of ``raw`` on a loglog grid."""
    if loglog_max < 8.0:
        raise DomainError("loglog_max must be >= 8")
    grid = np.linspace(loglog_min, loglog_max, points)
    vals = np.array([float(raw(v)) for v in grid])
    if not np.all(vals > 0.0):
        bad = float(grid[int(np.argmin(vals))])
        raise DomainError(f"raw kappa must be positive; fails near loglog={bad}")
    kappa0 = np.maximum.accumulate(vals)
    ratio = kappa0 / np.sqrt(grid)
    kappa1 = np.sqrt(grid) * np.maximum.accumulate(ratio[::-1])[::-1]
    return KappaFunction(grid, kappa0, kappa1, loglog_max, desc)


@dataclass(frozen=True)
class AlphaFunction:
    """Nonincreasing envelope dominating the F-growth exponent.

    alpha(x) solves exp(kappa1(x)) (loglog x + 1/e) e^{C0} =
    exp(alpha(x) sqrt(loglog x)); a right-running max on the grid enforces
    monotonicity when kappa1 + C0 is too small for the raw formula.
    """

    kappa: KappaFunction
    C0: float
    grid: np.ndarray = field(repr=False)
    env_vals: np.ndarray = field(repr=False)
    desc: str = "custom"

    def formula_at(self, ll: float) -> float:
        v = (self.kappa.kappa1(ll) + log(ll + 1.0 / np.e) + self.C0) / sqrt(ll)
        return max(v, ALPHA_FLOOR)

    def at_loglog(self, ll: float) -> float:
        if ll < self.grid[0] - 1e-12:
            raise DomainError(f"alpha undefined below loglog={self.grid[0]}")
        if ll >= self.grid[-1]:
            return self.formula_at(ll)
        return float(np.interp(ll, self.grid, self.env_vals))

    def __call__(self, x: float) -> float:
        if x < 16.0:
            raise DomainError(f"alpha needs x >= 16, got {x}")
        return self.at_loglog(log(log(x)))


def alpha_from_kappa(kappa: KappaFunction, C0: float) -> AlphaFunction:
    if C0 < 0:
        raise DomainError(f"C0 must be >= 0, got {C0}")
    grid = kappa.grid
    raw = np.array(
        [max((k1 + log(v + 1.0 / np.e) + C0) / sqrt(v), ALPHA_FLOOR)
         for v, k1 in zip(grid, kappa.kappa1_vals)])
    env = np.maximum.accumulate(raw[::-1])[::-1]
    return AlphaFunction(kappa, float(C0), grid, env,
                         desc=f"envelope(kappa={kappa.desc}, C0={C0!r})")


def parse_kappa_spec(spec: str) -> Callable[[float], float]:
    """Vocabulary: const:<c> | power:<e> (meaning ll^e, e < 1/2) |
    loglog-fraction:<c> (meaning c sqrt(ll)/log(ll))."""
    parts = spec.split(":")
    if len(parts) != 2:
        raise FunctionSpecError(f"bad kappa spec {spec!r}")
    kind, arg = parts
    try:
        v = float(arg)
    except ValueError:
        raise FunctionSpecError(f"bad kappa parameter {arg!r}") from None
    if kind == "const":
        if v <= 0:
            raise FunctionSpecError("const kappa must be positive")
        return lambda ll: v
    if kind == "power":
        if not 0 <= v < 0.5:
            raise FunctionSpecError("power exponent must lie in [0, 1/2)")
        return lambda ll: ll**v
    if kind == "loglog-fraction":
        if v <= 0:
            raise FunctionSpecError("loglog-fraction coefficient must be positive")
        return lambda ll: v * sqrt(ll) / log(ll)
    raise FunctionSpecError(f"unknown kappa kind {kind!r}")


# ---------------------------------------------------------------------------
# block construction


@dataclass(frozen=True)
class ExtremalBlock:
    log_x: float      # log x_j
    log_upper: float  # log x_j^{log x_j} = (log x_j)^2
    a: float          # sqrt(alpha(upper_j))


@dataclass(frozen=True)
class ExtremalSpec:
    x1: float
    J: int
    C0: float
    blocks: tuple[ExtremalBlock, ...]
    kappa_desc: str
    alpha_desc: str
    alpha: AlphaFunction | None = field(default=None, compare=False, repr=False)

    def sum_a_sq(self) -> float:
        return float(sum(b.a * b.a for b in self.blocks))

    def to_json_dict(self) -> dict:
        return {
            "x1": self.x1,
            "J": self.J,
            "C0": self.C0,
            "kappa_desc": self.kappa_desc,
            "alpha_desc": self.alpha_desc,
            "blocks": [
                {"log_x": b.log_x, "log_upper": b.log_upper, "a": b.a}
                for b in self.blocks
            ],
        }

    def content_hash(self) -> str:
        blob = json.dumps(self.to_json_dict(), sort_keys=True).encode()
        return hashlib.sha1(blob).hexdigest()[:10]


def choose_blocks(
    alpha: AlphaFunction,
    J: int,
    x1: float,
    budget: float = 64.0,
    kappa_desc: str = "custom",
) -> ExtremalSpec:
    """Blocks with log x_{j+1} = (log x_j)^2 + 1, so upper_j < x_{j+1}
    exactly in log form; a_j = sqrt(alpha(upper_j))."""
    if x1 < 16.0:
        raise DomainError(f"x1 must be >= 16, got {x1}")
    if J < 1:
        raise DomainError(f"J must be >= 1, got {J}")
    blocks = []
    lx = log(x1)
    total = 0.0
    for j in range(1, J + 1):
        lu = lx * lx
        if not np.isfinite(lu) or lu >= 8.98e307:
            raise CapacityError(
                f"log-form overflow at block {j}; maximal feasible J = {j - 1}")
        a = sqrt(alpha.at_loglog(log(lu)))
        total += a * a
        if total > budget:
            raise CapacityError(
                f"sum of a_j^2 exceeds budget {budget} at block {j}")
        blocks.append(ExtremalBlock(lx, lu, a))
        lx = lu + 1.0
    return ExtremalSpec(
        x1=float(x1), J=J, C0=alpha.C0, blocks=tuple(blocks),
        kappa_desc=kappa_desc, alpha_desc=alpha.desc, alpha=alpha)


def build_spec(
    kappa_spec: str, x1: float, J: int, C0: float = 1.0,
    loglog_max: float = DEFAULT_LOGLOG_MAX, budget: float = 64.0,
) -> ExtremalSpec:
    raw = parse_kappa_spec(kappa_spec)
    kappa = regularize_kappa(raw, loglog_max=loglog_max, desc=kappa_spec)
    alpha = alpha_from_kappa(kappa, C0)
    return choose_blocks(alpha, J, x1, budget=budget, kappa_desc=kappa_spec)


def reference_spec() -> ExtremalSpec:
    """The desk-scale reference construction used across the test corpus."""
    return build_spec("power:0.25", x1=20.0, J=3, C0=1.0)


def save_spec(spec: ExtremalSpec, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(spec.to_json_dict(), fh, sort_keys=True, indent=2)
        fh.write("\n")


def load_spec(path: str) -> ExtremalSpec:
    with open(path) as fh:
        doc = json.load(fh)
    blocks = tuple(
        ExtremalBlock(float(b["log_x"]), float(b["log_upper"]), float(b["a"]))
        for b in doc["blocks"])
    alpha = None
    try:
        raw = parse_kappa_spec(doc["kappa_desc"])
        kappa = regularize_kappa(raw, desc=doc["kappa_desc"])
        alpha = alpha_from_kappa(kappa, float(doc["C0"]))
    except FunctionSpecError:
        pass  # custom kappa: blocks alone still define the function
    return ExtremalSpec(
        x1=float(doc["x1"]), J=int(doc["J"]), C0=float(doc["C0"]),
        blocks=blocks, kappa_desc=doc["kappa_desc"],
        alpha_desc=doc["alpha_desc"], alpha=alpha)


# ---------------------------------------------------------------------------
# the function itself


def theta_at(spec: ExtremalSpec, p: int) -> float:
    """theta_p: a_j/sqrt(loglog p) on the sine-selected window of block j,
    0 outside all blocks (including all p < x_1)."""
    if p < 2:
        raise DomainError(f"theta_at needs a prime >= 2, got {p}")
    lp = log(p)
    for b in spec.blocks:
        if b.log_x <= lp < b.log_upper and -np.sin(lp) >= 0.5:
            return b.a / sqrt(log(lp))
    return 0.0


def theta_values(spec: ExtremalSpec, ps: np.ndarray) -> np.ndarray:
    lp = np.log(ps.astype(np.float64))
    th = np.zeros(lp.size, dtype=np.float64)
    for b in spec.blocks:
        m = (lp >= b.log_x) & (lp < b.log_upper) & (-np.sin(lp) >= 0.5)
        if m.any():
            th[m] = b.a / np.sqrt(np.log(lp[m]))
    return th


def extremal_function(spec: ExtremalSpec) -> MultiplicativeFunction:
    """Completely multiplicative f with f(p) = -e^{i theta_p}; class M."""

    def rule(p: int, k: int) -> complex:
        return (-np.exp(1j * theta_at(spec, p))) ** k

    def vec(ps: np.ndarray) -> np.ndarray:
        return -np.exp(1j * theta_values(spec, ps))

    return MultiplicativeFunction(
        label=f"extremal:{spec.content_hash()}",
        rule=rule,
        completely_multiplicative=True,
        claims_M=True,
        prime_vec=vec,
    )


# ---------------------------------------------------------------------------
# verification reports


@dataclass(frozen=True)
class BlockPsum:
    j: int
    covered: bool            # block intersects [1, P]
    mertens_partial: float   # sum 1/p up to min(upper_j, P)
    majorant: float          # a_j^2 * mertens_partial / loglog x_j
    analytic_majorant: float  # same with the analytic Mertens estimate at upper_j


@dataclass(frozen=True)
class PsumReport:
    cutoff: int
    observed: float
    majorant: float
    sum_a_sq: float
    blocks: tuple[BlockPsum, ...]

    @property
    def budget_bound(self) -> float:
        return 4.0 * self.sum_a_sq

    @property
    def ok(self) -> bool:
        return (self.observed <= self.majorant + 1e-12
                and self.majorant <= self.budget_bound + 1e-12)

    def text(self) -> str:
        lines = [
            f"theta-sum check at cutoff {self.cutoff}",
            f"observed sum theta_p^2/p: {self.observed!r}",
            f"per-block Mertens majorant: {self.majorant!r}",
            f"4 * sum a_j^2: {self.budget_bound!r}",
        ]
        for b in self.blocks:
            tag = "covered" if b.covered else "beyond cutoff"
            lines.append(
                f"  block {b.j} ({tag}): majorant {b.majorant!r}, "
                f"analytic {b.analytic_majorant!r}")
        lines.append(f"verdict: {'PASS' if self.ok else 'FAIL'}")
        return "\n".join(lines)


def verify_psum(spec: ExtremalSpec, P: int, table: PrimeTable) -> PsumReport:
    """Check sum_p theta_p^2/p <= per-block Mertens majorant <= 4 sum a_j^2.

    The majorant for block j is a_j^2 (sum_{p <= min(upper_j, P)} 1/p)
    / loglog x_j; blocks entirely above P contribute nothing observed and
    are reported with their analytic (log-form) majorant only.
    """
    ps = table.primes_le(P)
    th = theta_values(spec, ps)
    obs = float(np.cumsum(th * th / ps.astype(np.float64))[-1]) if ps.size else 0.0
    log_P = log(P)
    majorant = 0.0
    rows = []
    for j, b in enumerate(spec.blocks, start=1):
        llx = log(b.log_x)
        analytic = b.a * b.a * (mertens_estimate(b.log_upper) + MERTENS_SLACK) / llx
        if b.log_x > log_P:
            rows.append(BlockPsum(j, False, 0.0, 0.0, analytic))
            continue
        cut = min(b.log_upper, log_P)
        H = sum_reciprocal_primes(min(float(P), exp(cut)), table)
        mj = b.a * b.a * H / llx
        majorant += mj
        rows.append(BlockPsum(j, True, H, mj, analytic))
    return PsumReport(cutoff=P, observed=obs, majorant=majorant,
                      sum_a_sq=spec.sum_a_sq(), blocks=tuple(rows))


@dataclass(frozen=True)
class WindowReport:
    j: int
    sigma: float
    selected_count: int
    selected_min: int
    selected_max: int
    window_sum: float        # W_j = sum theta_p (-sin log p) p^{-sigma}
    half_theta_sum: float    # (1/2) sum theta_p p^{-sigma}
    re_log_F_prime_sum: float
    target: float            # a_j sqrt(loglog x_j)

    @property
    def ok(self) -> bool:
        return self.window_sum >= self.half_theta_sum - 1e-15

    def text(self) -> str:
        return "\n".join([
            f"window check for block {self.j} at sigma = {self.sigma!r}, t = 1",
            f"selected primes: {self.selected_count} in "
            f"[{self.selected_min}, {self.selected_max}]",
            f"window sum W_j: {self.window_sum!r}",
            f"(1/2) sum theta_p p^-sigma: {self.half_theta_sum!r}",
            f"Re prime-sum log F: {self.re_log_F_prime_sum!r}",
            f"target a_j sqrt(loglog x_j): {self.target!r} (reported, not asserted)",
            f"verdict: {'PASS' if self.ok else 'FAIL'}",
        ])


def verify_logF_lower(
    spec: ExtremalSpec,
    j: int,
    plan: TruncationPlan,
    table: PrimeTable,
) -> WindowReport:
    """At s = 1 + 1/(log x_j)^2 + i: the sine-window selection guarantees
    W_j >= (1/2) sum_{selected} theta_p p^{-sigma} (asserted); the full
    prime-sum Re log F and the a_j sqrt(loglog x_j) target are reported
    without asserting the asymptotic lower bound."""
    if not 1 <= j <= spec.J:
        raise DomainError(f"block index {j} outside 1..{spec.J}")
    b = spec.blocks[j - 1]
    if b.log_upper > log(table.limit):
        raise CoverageError(
            f"block {j} extends to exp({b.log_upper!r}), beyond table limit {table.limit}")
    sigma = 1.0 + 1.0 / (b.log_x * b.log_x)
    ps = table.primes_le(min(exp(b.log_upper), float(table.limit)))
    lp = np.log(ps.astype(np.float64))
    inside = (lp >= b.log_x) & (lp < b.log_upper)
    sel = inside & (-np.sin(lp) >= 0.5)
    lps = lp[sel]
    th = b.a / np.sqrt(np.log(lps))
    pw = np.exp(-sigma * lps)
    W = float(np.sum(th * (-np.sin(lps)) * pw))
    half = 0.5 * float(np.sum(th * pw))
    fext = extremal_function(spec)
    psr = log_F_prime_sum(fext, ComplexPoint(sigma, 1.0), plan, base=table)
    sel_ps = ps[sel]
    return WindowReport(
        j=j,
        sigma=sigma,
        selected_count=int(sel_ps.size),
        selected_min=int(sel_ps[0]) if sel_ps.size else 0,
        selected_max=int(sel_ps[-1]) if sel_ps.size else 0,
        window_sum=W,
        half_theta_sum=half,
        re_log_F_prime_sum=float((psr.value + psr.defect).real),
        target=b.a * sqrt(log(b.log_x)),
    )
