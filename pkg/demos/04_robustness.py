"""How much guard imprecision does a model tolerate?

Every clock guard is widened by ``eps`` and the safe values of ``eps`` are
synthesised.  With ``a = 1, b = 2`` Fischer tolerates anything below 1/2;
the small controller never reaches its alarm whatever the widening; the
stopwatch example breaks under any widening unless its guard has slack.
Fischer and the controller are reconstructions.
"""
from timedtar import models
from timedtar.frontend import format_guard
from timedtar.synth import synth_robust

cases = [
    ("fischer, a=1 b=2 (reconstructed)", models.fischer_fixed(2)),
    ("m3-like controller (reconstructed)", models.m3_like()),
    ("stopwatch example", models.p1()),
    ("stopwatch example, guard x - y >= 2", models.p1_tight()),
]
for name, p in cases:
    res = synth_robust(p)
    margin = "not an interval from 0" if res.max_eps is None else str(res.max_eps)
    print(f"{name:38} {format_guard(res.constraint):30} max eps: {margin}")

res = synth_robust(models.fischer(2))
print()
print("parametric Fischer, robust region:", format_guard(res.constraint))
