"""Seeded simulation as a cross-check on the exact values.

Runs are reproducible from a single 64-bit seed, batches merge by plain
addition of wins, and estimates are compared to exact values with a
four-sigma z-test.
"""

from fractions import Fraction

from treasurehunt import (
    GameConfig,
    compare_to_exact,
    fresh_doors_searcher,
    run_mc,
    run_mc_batched,
    scaled_searcher,
    uniform_hider,
)

cfg = GameConfig(9, 3, 2)
report = run_mc(cfg, scaled_searcher(cfg), uniform_hider(cfg), trials=200_000, seed=7)
check = compare_to_exact(report, Fraction(8, 165))
print(f"multi n=9 d=3 k=2, scaled table vs uniform hider, {report.trials} trials, seed {report.seed}:")
print(f"  estimate {report.wins}/{report.trials} = {float(report.estimate):.5f}")
print(f"  exact 8/165 = {float(check.exact):.5f}, z = {check.z_score:+.2f}, passed: {check.passed}")
print()

single = GameConfig(4, 2, 2, occupancy="single")
rep2 = run_mc(single, fresh_doors_searcher(single), uniform_hider(single), trials=200_000, seed=7)
check2 = compare_to_exact(rep2, Fraction(2, 3))
print(f"single n=4 d=2 k=2, fresh pairs: estimate {float(rep2.estimate):.5f} vs 2/3, "
      f"z = {check2.z_score:+.2f}, passed: {check2.passed}")
print()

batched = run_mc_batched(single, fresh_doors_searcher(single), uniform_hider(single),
                         trials=200_000, seed=7, batches=8)
print(f"same run split over 8 derived-seed batches: {batched.wins} wins of {batched.trials}")
print("batches merge by addition, so parallel workers need no coordination")
