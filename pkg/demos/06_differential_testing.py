"""The symbolic verifier against a brute-force explorer.

For closed timed automata (non-strict integer guards), integer delays are
enough to decide reachability, so a plain graph search over clamped clock
vectors gives ground truth.  We draw random automata and compare.
"""
import random
import time

from timedtar.oracle import brute_reachable, random_closed_ta
from timedtar.tar import NonEmpty, check_emptiness

rng = random.Random(2024)
agree = 0
t0 = time.monotonic()
n = 100
for _ in range(n):
    p = random_closed_ta(rng)
    symbolic = isinstance(check_emptiness(p), NonEmpty)
    agree += symbolic == brute_reachable(p)
print(f"{agree}/{n} agree ({time.monotonic() - t0:.1f}s)")
