"""A tour of the background machinery: shifts, recodings, entropy, measures.

Everything downstream rests on these pieces: the golden-mean shift shows the
entropy/choice-point story, the alternating two-cycle shows recodings, and
the Parry measure supplies the noise that drives diffusive defects.
"""

import math

from defectca import (
    binary_alphabet,
    build_markov_shift,
    choice_point,
    entropy,
    equal_length_cycles,
    higher_block,
    higher_power,
    parry_measure,
    period_of,
    regularity,
    transitive_components,
)

A2 = binary_alphabet()

golden = build_markov_shift(A2, [(0, 0), (0, 1), (1, 0)])  # no "11"
print("golden mean shift:")
print("  entropy:", entropy(golden), "= log2(phi):",
      math.log2((1 + math.sqrt(5)) / 2))
print("  choice point:", choice_point(golden))
P, c0, c1 = equal_length_cycles(golden)
print(f"  two cycles of length {P} at it: {c0} and {c1}")
print("  regularity:", regularity(golden))

m = parry_measure(golden)
print("  Parry kernel tau(0,.):", {b: round(float(m.kernel[(0, b)]), 6)
                                   for b in golden.followers(0)})
print("  stationary:", m.stationary,
      " entropy rate:", round(float(m.entropy_rate()), 6))

gstar = build_markov_shift(A2, [(0, 1), (1, 0)])
print("\nalternating two-cycle:")
print("  entropy:", entropy(gstar), " period:", period_of(gstar))
blocked, coder = higher_block(gstar, 2)
print("  2-block presentation vertices:",
      [coder.unpack(v) for v in sorted(blocked.usable)])
powered, _ = higher_power(gstar, 2)
print("  2-power presentation edges:", sorted(powered.edges),
      "(each phase is its own fixed point)")

two_loops = build_markov_shift(A2, [(0, 0), (1, 1)])
print("\ntransitive components of the two-fixed-point shift:",
      [sorted(c.usable) for c in transitive_components(two_loops)])
