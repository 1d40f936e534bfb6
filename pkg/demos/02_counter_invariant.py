"""Clocks meet an unbounded counter.

Each round trip ``t0.t1`` takes at least one time unit (``x >= 1``) and bumps
``i``, so ``y >= i`` holds forever and ``t2`` (``y < i``) is dead.  The
counter rules out any finite-state abstraction; two refuted words suffice.
"""
from timedtar import models
from timedtar.tar import Empty, check_emptiness

v = check_emptiness(models.p2())
assert isinstance(v, Empty)
print(f"language empty after {v.iterations} iterations; proof predicates:")
for s in v.proof.states:
    print("  ", s)
