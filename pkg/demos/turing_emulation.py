"""The Turing regime: a classical machine compiled into a cellular automaton.

With positive entropy on both tape halves, admissible sequences can encode
arbitrary bits via two equal-length cycles, so tape machines with admissible
halves simulate classical Turing machines.  Here a binary incrementer is
compiled onto full-shift tapes, embedded into a radius-2 CA, and the three
layers are stepped side by side.
"""

from defectca import (
    APDA,
    apply_rule,
    binary_alphabet,
    build_markov_shift,
    classical_to_lr,
    detect_runaway_cycle,
    full_shift,
    regime_of,
    turing_to_ca,
)
from defectca import zoo

A2 = binary_alphabet()
full = full_shift(A2)
zero = build_markov_shift(A2, [(0, 0)])

print("regimes:",
      "full/full ->", regime_of(full, full), "|",
      "frozen/full ->", regime_of(zero, full), "|",
      "periodic/periodic ->",
      regime_of(build_markov_shift(A2, [(0, 1), (1, 0)]), zero))

tm = zoo.binary_increment_tm()
comp = classical_to_lr(tm, full, full)
rule, emb = turing_to_ca(comp.machine)
print(f"\ncompiled incrementer: {comp.cells_per_symbol} cells per tape symbol,"
      f" {len(comp.machine.head_domain)} head states,"
      f" CA alphabet size {rule.alphabet.size}, radius {rule.radius}")

tape = {-3: 0, -2: 0, -1: 1, 0: 1}  # the number 0011, head on its last bit
state = comp.initial_state(tape, "start", 0, window=10)
ca = emb.encode(state)
ctape, cd, cz = dict(tape), "start", 0
for k in range(6):
    ctape, cd, cz = tm.step(ctape, cd, cz)
    state, micro = comp.macro_step(state)
    for _ in range(micro):
        ca = apply_rule(rule, ca)
    digits = "".join(str(ctape.get(j, 0)) for j in range(-4, 1))
    print(f"  macro {k + 1}: tape {digits} head {cd:<6} ({micro} CA steps)")

got_tape, got_d, got_z = comp.decode_state(emb.decode(ca), window=5)
print("decoded from the CA:  ",
      "".join(str(got_tape.get(j, 0)) for j in range(-4, 1)),
      "head", got_d)

# an autonomous pushdown automaton with a guaranteed leftward escape
apda = APDA(2, ("q", "r"),
            {(0, "q"): "r", (1, "q"): "q", (0, "r"): "q", (1, "r"): "q"},
            {(0, "q"): ("push", 1), (1, "q"): ("pop",),
             (0, "r"): ("noop",), (1, "r"): ("push", 0)})
print("\nAPDA runaway cycle:", detect_runaway_cycle(apda))
