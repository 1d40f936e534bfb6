"""A stopwatch program whose error location is unreachable.

In ``l1`` the clock ``x`` is reset every time unit while the stopwatch ``y``
is frozen, so ``x - y`` can never exceed the time spent in ``l1``, which the
guard ``z < 1`` keeps below one unit.  Zone-style reasoning over clocks alone
cannot see this; the refinement loop finds the invariant ``x - y <= z``
after refuting two words.
"""
from timedtar import models
from timedtar.encode import encode_word
from timedtar.interp import interpolate
from timedtar.tar import check_emptiness, explain

p = models.p1()

print("First candidate word i.t0.t2, its interpolants:")
enc = encode_word(["i", "t0", "t2"], p)
for k, pred in enumerate(interpolate(enc, p).predicates):
    print(f"  after step {k}: {pred}")

v = check_emptiness(p, on_iteration=lambda s: print("  " + s.line()))
print()
print(explain(v))
