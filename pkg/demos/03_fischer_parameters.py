"""Which timing bounds make Fischer's protocol safe?

Two processes write a shared ``id`` within ``a`` time units of asking and
wait at least ``b`` before entering.  Mutual exclusion holds exactly when the
write is guaranteed to land before anyone re-reads, i.e. ``a < b`` (or a
bound is negative, which disables the protocol).  The model is a
reconstruction built from the textbook description.
"""
import time

from timedtar import models
from timedtar.frontend import format_guard
from timedtar.synth import synth_params

t0 = time.monotonic()
res = synth_params(models.fischer(2), ["a", "b"])
print(f"safe parameter values: {format_guard(res.constraint)}")
print(f"{res.status} after {res.iterations} strengthening rounds, "
      f"{time.monotonic() - t0:.1f}s")
for r in res.removals:
    print(f"  removed {r.removed}  (witness {'.'.join(r.word[:4])}...)")
