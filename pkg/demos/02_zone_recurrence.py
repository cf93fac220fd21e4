"""The traveling-S zone automaton and its recurrence dichotomy.

S symbols split a {0,1,S} configuration into zones.  The k-th S excises
1-runs from its zone when the oracle certifies the run-length machine
total, and re-deposits them one zone to the left; the first S chews
through whatever reaches it.  With a totality table that lists machine 2
as total and machine 3 as not, length-2 runs keep being recycled back to
position 0 while the length-3 run parks in the middle zone forever.

Run:  python3 demos/02_zone_recurrence.py
"""

from symdyn import (orbit, orbit_windows, pi2_system, totality_oracle,
                    two_zone_configuration)

sys = pi2_system(totality_oracle())
x = two_zone_configuration()

print("initial configuration:", x.materialize(16), "...")
print()
print("first steps (window 12):")
for t, row in enumerate(orbit(sys, x, 10, 12), start=1):
    print(f"  t={t:2d}: {row}")
print()

steps, burn_in = 200_000, 20_000
returns = []
late_bad = 0
for t, w in enumerate(orbit_windows(sys, x, 0, steps, 5)):
    if w[:4] == "0110":
        returns.append(t)
    if t >= burn_in and w[:5] == "01110":
        late_bad += 1

print(f"over {steps} steps:")
print(f"  '0110' at position 0 at times {returns}")
print(f"  '01110' occurrences after t={burn_in}: {late_bad}")
print()
print("the total machine's blocks keep coming back; the non-total one")
print("crosses the window once early on and is never recycled again.")
