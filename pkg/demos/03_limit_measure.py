"""The exact limit measure of the block-erasure dynamics.

Pushing a Bernoulli(1/2) product measure through the erasure map and
shifting makes the window statistics stationary; the limit is computable
as an exact rational for every window word, because a finite oracle
table's erasure verdicts are eventually constant in run length and gap
size.  A long pseudo-random orbit should -- and does -- reproduce these
numbers to within Monte-Carlo noise.

Run:  python3 demos/03_limit_measure.py
"""

from fractions import Fraction

from symdyn import (Sampler, binary_config, empirical_measure,
                    parity_oracle, pi1_system, tilde_mu_table)

oracle = parity_oracle()      # odd-numbered machines halt, even ones never
sys = pi1_system(oracle)

depth, n = 3, 300_000
table = tilde_mu_table(oracle, Fraction(1, 2), depth, truncation=24)
x = binary_config("", Sampler(("0", "1"), (1, 1), 2024))
emp = empirical_measure(sys, x, n, depth)

print(f"window   exact limit             simulated ({n} steps)")
tv = Fraction(0)
for w in sorted(table):
    est = table[w]
    f = emp.frequency(w)
    tv += abs(f - est.midpoint())
    exact = str(est.midpoint())
    if len(exact) > 22:                      # exact but unwieldy
        exact = f"~{float(est.midpoint()):.12f}"
    print(f"  {w}    {exact:>22}   {float(f):.6f}")
print(f"\ntotal variation distance: {float(tv / 2):.5f}")
print("exact masses sum to",
      sum((e.midpoint() for e in table.values()), Fraction(0)))
