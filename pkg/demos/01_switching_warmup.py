"""Warm-up: two treasures behind four doors, guesses of two.

The searcher opens two doors, a treasure is revealed behind one of them,
and she has one guess left for the other treasure. Staying near the
revealed door feels tempting; switching to the two untouched doors is
better, much like the classic switch-or-stay door puzzles.
"""

from fractions import Fraction

from treasurehunt import (
    GameConfig,
    closed_form_value,
    deterministic_win_set,
    evaluate_exact,
    fresh_doors_searcher,
    sequence_form_value,
)

cfg = GameConfig(n=4, d=2, k=2, occupancy="single")

print("Game: hide 2 treasures behind 4 doors (one per door), guess 2 doors per round.")
print()

# The switching strategy: always guess two doors never guessed before.
switcher = fresh_doors_searcher(cfg)
for hidden in [(1, 1, 0, 0), (1, 0, 1, 0), (0, 0, 1, 1)]:
    print(f"  switching vs hidden {hidden}: win chance {evaluate_exact(cfg, switcher, hidden)}")
print("The switcher wins every placement with probability 2/3: an equalizer.")
print()

# A stubborn deterministic plan and its win set: it covers at most
# k^d = 4 of the 6 placements, and the fresh-door plan attains that.
def stay_plan(history):
    if not history:
        return frozenset({0, 1})
    revealed = history[0][1]
    return frozenset({revealed, 2})

print(f"stay-near plan wins {len(deterministic_win_set(cfg, stay_plan))} placements")

def switch_plan(history):
    return frozenset({0, 1}) if not history else frozenset({2, 3})

print(f"switch plan wins {len(deterministic_win_set(cfg, switch_plan))} placements (the maximum, 2^2)")
print()

report = closed_form_value(cfg)
lp = sequence_form_value(cfg)
assert lp.value == report.value == Fraction(2, 3)
print(f"Counting bound k^d / C(n,d) = {report.value}, and the LP confirms the game")
print(f"is worth exactly {lp.value}: switching is optimal play.")
