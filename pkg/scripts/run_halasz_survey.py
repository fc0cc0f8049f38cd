#!/usr/bin/env python3
"""Survey the builtin corpus: pole/zero ratios, defect grids, criterion verdicts.

Writes one CSV per diagnostic into --outdir and prints a short summary table.
Every output is deterministic; rerunning overwrites byte-identical files.
"""

from __future__ import annotations

import argparse
import csv
from dataclasses import dataclass, field
from pathlib import Path

from mflab.dirichlet import ComplexPoint, TruncationPlan
from mflab.halasz import HalaszDirection, criterion_report, lemma_defect, theorem1_ratio
from mflab.multfun import builtin
from mflab.primes import sieve_primes


@dataclass
class SurveyConfig:
    outdir: Path = Path("survey_out")
    prime_cutoff: int = 100_000
    criterion_cutoff: int = 1_000_000
    sigma_grid: list[float] = field(default_factory=lambda: [
        1.0 + (0.5) * (0.002) ** (i / 11) for i in range(12)])
    # (function, epsilon0) pairs worth probing at t0 = 0
    directions: list[tuple[str, int]] = field(default_factory=lambda: [
        ("moebius", 1), ("liouville", 1), ("one", -1), ("odd_one", -1),
        ("extremal-ref", 1)])


def run(cfg: SurveyConfig) -> None:
    cfg.outdir.mkdir(parents=True, exist_ok=True)
    base = sieve_primes(cfg.prime_cutoff)
    base_big = sieve_primes(cfg.criterion_cutoff)
    plan = TruncationPlan(prime_cutoff=cfg.prime_cutoff)
    grid = sorted(cfg.sigma_grid)

    with open(cfg.outdir / "theorem1_ratios.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["function", "epsilon0", "sigma", "abs_F", "err_F", "ratio"])
        for name, eps in cfg.directions:
            f = builtin(name)
            d = HalaszDirection(eps, 0.0)
            for pt in theorem1_ratio(f, d, grid, plan, base=base):
                ratio = "" if pt.ratio is None else repr(pt.ratio)
                w.writerow([name, eps, repr(pt.sigma), repr(abs(pt.F.value)),
                            repr(pt.F.error_bound), ratio])

    with open(cfg.outdir / "lemma_defect.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["function", "epsilon0", "sigma", "abs_D", "ratio", "err"])
        for name, eps in cfg.directions:
            f = builtin(name)
            d = HalaszDirection(eps, 0.0)
            for sg in grid:
                if sg - 1.0 > 1.0 / 2.718281828459045:
                    continue
                r = lemma_defect(f, d, ComplexPoint(sg), plan, base)
                w.writerow([name, eps, repr(sg), repr(abs(r.value)),
                            repr(r.ratio), repr(r.error_bound)])

    print(f"{'function':14} {'verdict'}")
    with open(cfg.outdir / "criterion_verdicts.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["function", "t", "sum_side", "two_adic_ok", "verdict"])
        for name in ("one", "moebius", "liouville", "odd_one", "extremal-ref"):
            f = builtin(name)
            rep = criterion_report(f, 0.0, cfg.criterion_cutoff, base_big)
            w.writerow([name, "0.0", rep.sum_side, rep.two_adic_ok, rep.verdict])
            print(f"{name:14} {rep.verdict}")
    print(f"wrote 3 CSVs to {cfg.outdir}/")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", type=Path, default=Path("survey_out"))
    ap.add_argument("--prime-cutoff", type=int, default=100_000)
    args = ap.parse_args()
    run(SurveyConfig(outdir=args.outdir, prime_cutoff=args.prime_cutoff))


if __name__ == "__main__":
    main()
