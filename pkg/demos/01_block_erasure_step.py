"""A guided tour of the block-erasure map and its attractor predicate.

The map shifts a binary configuration left and erases every block 0 1^l 0
whose machine M_l is observed (within the current budget) to halt on the
empty input.  With the worked-example oracle -- M_1 halts after 8 steps,
M_3 after 4, everything else runs forever -- a single step reproduces the
reference picture, and the membership predicate tells us exactly which
cylinders still meet the attractor.

Run:  python3 demos/01_block_erasure_step.py
"""

from symdyn import (Cylinder, SystemId, attractor_meets, binary_config,
                    worked_example_oracle, orbit, pi1_system, step_prefix)
from symdyn.space import Constant

oracle = worked_example_oracle()
sys = pi1_system(oracle)

word = "1001011100101100"
print("input prefix :", word)
padded = word + "0" * (sys.lookahead(16) - 16)
print("one step     :", step_prefix(sys, padded, 16))
print()

print("a short orbit (window 16, tail of zeros):")
x = binary_config(word, Constant("0"))
for t, row in enumerate(orbit(sys, x, 6, 16), start=1):
    print(f"  t={t}: {row}")
print()

print("which cylinders meet the attractor?")
for w in ("010", "0110", "01110", "11", "0101100"):
    v = attractor_meets(SystemId.PI1, Cylinder(w), oracle)
    note = f"  ({v.witness})" if v.witness else ""
    print(f"  [{w}]_0 -> {v.value}{note}")
