#!/usr/bin/env python3
"""Writes the fixed small-instance grid used by the acceptance suite (oracle equivalence).

Every combination of n in 1..6, m in 1..3, profile rs/lt-linear and attacker slice/provider,
with attack and routing probabilities derived deterministically from (n, m). Half of the
instances use a capacity small enough that full servers force re-picks.
"""
import json
import sys
from fractions import Fraction


def grid():
    out = []
    for n in range(1, 7):
        for m in range(1, 4):
            for profile in ("rs", "lt-linear"):
                for attacker in ("slice", "provider"):
                    tight = -(-n // m)  # ceil(n / m)
                    c = n if (n + m) % 2 == 0 else max(tight, 1)
                    a = [str(Fraction((i + n) % 9 + 1, 10)) for i in range(m)]
                    if (n * m) % 2 == 0:
                        p = [str(Fraction(1, m))] * m
                    else:
                        total = m * (m + 1) // 2
                        p = [str(Fraction(i + 1, total)) for i in range(m)]
                    cfg = {"n": n, "m": m, "c": c, "profile": profile, "a": a, "p": p, "attacker": attacker}
                    out.append(cfg)
    return out


if __name__ == "__main__":
    json.dump(grid(), sys.stdout, indent=1)
    sys.stdout.write("\n")
