"""Independent oracles used by the test suite.

These deliberately avoid the library's solution paths: the continuation
oracle expands the sampled-plan searcher literally, and the double oracle
solves tiny games over pure strategies with best-response certificates.
They share nothing with the stay-probability formula or the quotient LP.
"""

from fractions import Fraction
from itertools import combinations

from treasurehunt.combinatorics import count_allocations, enumerate_allocations
from treasurehunt.simplex import EQ, GEQ, LEQ, solve_lp


def mimic_continuation_oracle(n: int, d: int):
    """Stay probabilities observed by expanding the guess-one plan mimic.

    For every allocation and every tie-break branch: visit doors in
    nonincreasing treasure-count order (ties uniform), dig each door dry,
    and record for each observable diagram whether the next guess stays.
    Returns {diagram: (reach weight, stay weight)}.
    """
    table: dict[tuple[int, ...], list[Fraction]] = {}
    prior = Fraction(1, count_allocations(n, d, "multi"))
    for alloc in enumerate_allocations(n, d, "multi"):
        stack = [(tuple(range(n)), (), prior)]
        while stack:
            unvisited, prefix, weight = stack.pop()
            if sum(prefix) == d:
                continue
            top = max(alloc[door] for door in unvisited)
            ties = [door for door in unvisited if alloc[door] == top]
            share = weight / len(ties)
            for door in ties:
                count = alloc[door]
                parts = prefix
                for dug in range(1, count + 1):
                    parts = prefix + (dug,)
                    if 1 <= sum(parts) <= d - 1:
                        entry = table.setdefault(parts, [Fraction(0), Fraction(0)])
                        entry[0] += share
                        if dug < count:
                            entry[1] += share
                stack.append((tuple(x for x in unvisited if x != door), parts, share))
    return table


# ---------------------------------------------------------------------------
# Double-oracle solver over pure strategies (tiny configs only)
# ---------------------------------------------------------------------------

def _all_guesses(n, k):
    out = []
    for size in range(1, k + 1):
        out.extend(frozenset(c) for c in combinations(range(n), size))
    return out


def _payoff(row, col, d):
    alloc, policy = col
    remaining = list(alloc)
    h = ()
    for _ in range(d):
        g = row[h]
        options = sorted(o for o in g if remaining[o] > 0)
        if not options:
            return 0
        o = policy.get((h, g), options[0])
        if o not in options:
            o = options[0]
        remaining[o] -= 1
        h = h + ((g, o),)
    return 1


def _hider_br(rows, x, allocations, d):
    best_val, best_col = None, None
    for alloc in allocations:
        policy = {}

        def walk(h, active, remaining, found):
            if found == d:
                return sum(x[i] for i in active)
            groups: dict = {}
            for i in active:
                groups.setdefault(rows[i][h], []).append(i)
            total = Fraction(0)
            for g, idxs in groups.items():
                options = sorted(o for o in g if remaining[o] > 0)
                if not options:
                    continue
                best = None
                besto = None
                for o in options:
                    rem2 = remaining[:o] + (remaining[o] - 1,) + remaining[o + 1:]
                    v = walk(h + ((g, o),), idxs, rem2, found + 1)
                    if best is None or v < best:
                        best, besto = v, o
                policy[(h, g)] = besto
                total += best
            return total

        v = walk((), [i for i in range(len(rows)) if x[i] > 0], tuple(alloc), 0)
        if best_val is None or v < best_val:
            best_val, best_col = v, (tuple(alloc), dict(policy))
    return best_val, best_col


def _searcher_br(cols, y, n, k, d):
    guesses = _all_guesses(n, k)
    strategy = {}

    def walk(h, active, found):
        if found == d:
            return sum(y[i] for i, _ in active)
        best, bestg = Fraction(0), guesses[0]
        for g in guesses:
            branches: dict = {}
            for i, remaining in active:
                options = sorted(o for o in g if remaining[o] > 0)
                if not options:
                    continue
                alloc, policy = cols[i]
                o = policy.get((h, g), options[0])
                if o not in options:
                    o = options[0]
                rem2 = remaining[:o] + (remaining[o] - 1,) + remaining[o + 1:]
                branches.setdefault(o, []).append((i, rem2))
            val = Fraction(0)
            for o in sorted(branches):
                val += walk(h + ((g, o),), branches[o], found + 1)
            if val > best:
                best, bestg = val, g
        strategy[h] = bestg
        return best

    active = [(i, tuple(cols[i][0])) for i in range(len(cols)) if y[i] > 0]
    return walk((), active, 0), strategy


def _complete_row(row, n, k, d):
    guesses = _all_guesses(n, k)
    out = {}

    def rec(h, found):
        if found == d:
            return
        g = row.get(h, guesses[0])
        out[h] = g
        for o in sorted(g):
            rec(h + ((g, o),), found + 1)

    rec((), 0)
    return out


def _solve_matrix(rows, cols, d):
    A = [[_payoff(r, c, d) for c in cols] for r in rows]
    R, C = len(rows), len(cols)
    cons = [({r: Fraction(1) for r in range(R)}, EQ, Fraction(1))]
    for c in range(C):
        row = {r: Fraction(A[r][c]) for r in range(R)}
        row[R] = Fraction(-1)
        cons.append((row, GEQ, Fraction(0)))
    res = solve_lp(R + 1, {R: Fraction(1)}, cons, maximize=True, free_vars=[R])
    cons2 = [({c: Fraction(1) for c in range(C)}, EQ, Fraction(1))]
    for r in range(R):
        row = {c: Fraction(A[r][c]) for c in range(C)}
        row[C] = Fraction(-1)
        cons2.append((row, LEQ, Fraction(0)))
    res2 = solve_lp(C + 1, {C: Fraction(1)}, cons2, maximize=False, free_vars=[C])
    assert res.objective == res2.objective
    return res.objective, list(res.x[:R]), list(res2.x[:C])


def double_oracle_value(n, d, k, occupancy="multi") -> Fraction:
    """Exact game value by double oracle, certified by best-response equality."""
    allocations = enumerate_allocations(n, d, occupancy)
    rows = [_complete_row({}, n, k, d)]
    cols = [(tuple(allocations[0]), {})]
    while True:
        v, x, y = _solve_matrix(rows, cols, d)
        hv, hcol = _hider_br(rows, x, allocations, d)
        sv, srow = _searcher_br(cols, y, n, k, d)
        done = True
        if hv < v:
            cols.append(hcol)
            done = False
        if sv > v:
            rows.append(_complete_row(srow, n, k, d))
            done = False
        if done:
            assert hv == v and sv == v
            return v
