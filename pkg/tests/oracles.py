"""Independent reference implementations used only by the tests.

Each one is deliberately naive: explicit loops over exact integers or
rationals, no shared code with the package.
"""

from fractions import Fraction
import math


def brute_average_ranks(xs):
    """Rank of x_i = (# values below x_i) + (# values equal to x_i + 1) / 2."""
    return [Fraction(r, 2) for r in doubled_ranks(xs)]


def doubled_ranks(xs):
    """Twice the average rank, which is always an integer."""
    return [2 * sum(y < x for y in xs) + sum(y == x for y in xs) + 1 for x in xs]


def _signed_sqrt_ratio(num, den):
    """num / sqrt(den) for integers, exact until the final rounding."""
    if num == 0:
        return 0.0
    return math.copysign(math.sqrt(Fraction(num * num, den)), num)


def brute_spearman(a, b):
    """Pearson on explicit average ranks; ``None`` when either side is constant."""
    n = len(a)
    u, v = doubled_ranks(a), doubled_ranks(b)
    su, sv = sum(u), sum(v)
    cov = n * sum(x * y for x, y in zip(u, v)) - su * sv
    vu = n * sum(x * x for x in u) - su * su
    vv = n * sum(y * y for y in v) - sv * sv
    if vu == 0 or vv == 0:
        return None
    return _signed_sqrt_ratio(cov, vu * vv)


def tie_corrected_spearman(a, b):
    """Textbook tie-corrected formula built from squared rank differences (all terms times 12)."""
    n = len(a)
    d2x4 = sum((x - y) ** 2 for x, y in zip(doubled_ranks(a), doubled_ranks(b)))

    def ties(xs):
        counts = {}
        for x in xs:
            counts[x] = counts.get(x, 0) + 1
        return sum(t ** 3 - t for t in counts.values())

    sx = n ** 3 - n - ties(a)
    sy = n ** 3 - n - ties(b)
    if sx == 0 or sy == 0:
        return None
    # rho = (Sx + Sy - sum d^2) / (2 sqrt(Sx Sy))
    num = sx + sy - 3 * d2x4
    return _signed_sqrt_ratio(num, 4 * sx * sy)


def brute_window_means(xs, b, stride):
    """Each window re-summed from scratch, left to right."""
    out = []
    start = 0
    while start + b <= len(xs):
        total = 0
        for v in xs[start:start + b]:
            total += v
        out.append(total / b)
        start += stride
    return out


def prefix_sum_window_means(xs, b, stride):
    prefix = [Fraction(0)]
    for v in xs:
        prefix.append(prefix[-1] + Fraction(v))
    return [(prefix[s + b] - prefix[s]) / b for s in range(0, len(xs) - b + 1, stride)]
