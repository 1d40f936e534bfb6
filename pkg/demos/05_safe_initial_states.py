"""Largest set of start states that keeps a program safe.

A single clock starts at an arbitrary value in ``busy``.  Time only passes
after an edge is taken, so from the start the alarm is immediate exactly
when ``x >= 3``.  The ``poll`` edge is enabled while ``x <= 1`` and lets an
arbitrary amount of time pass, after which the alarm is reachable too.  The
safe start states are therefore ``1 < x < 3``; the loop removes the two
unsafe pieces one witness at a time.
"""
from timedtar.frontend import format_guard, parse_model
from timedtar.synth import safe_init

p = parse_model("""
rtp 1
clock x
location busy
location alarm
initial busy
accepting alarm
edge poll : busy -> busy when x <= 1
edge fire : busy -> alarm when x >= 3
""")
res = safe_init(p)
print("safe start:", format_guard(res.constraint), f"({res.status})")
for r in res.removals:
    print("  removed", r.removed, "because of", ".".join(r.word))
