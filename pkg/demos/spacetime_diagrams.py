"""Render spacetime diagrams of defect particles in ECA #184 and #54.

Writes PBM images (plus defect-cell masks) into demos/output/.  Time runs
downward; each row is one step of the automaton.
"""

import os

from defectca import from_wolfram_number, normalize, periodic_config
from defectca.io import render_spacetime, spacetime_rows
from defectca.lattice import encode_config
from defectca import zoo

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

# --- ECA #184: a gamma+ dislocation racing an omega- wall -------------------
# Left of the origin the road alternates car/gap; to the right it is jammed.
rule = from_wolfram_number(184)
cfg = periodic_config(rule.alphabet, (0, 1), (0, 0, 1, 0), (1, 1),
                      left_phase=1)

rows, _ = spacetime_rows(rule, cfg, steps=120, lo=-150, hi=150)

# defect cells are computed against the block presentation of the background
sys184 = normalize(rule, zoo.eca184_background())
_, masks = spacetime_rows(sys184.rule, encode_config(sys184.coder, cfg),
                          steps=120, lo=-150, hi=150, shift=sys184.shift)

image, mask = render_spacetime(rows, rule.alphabet, highlight=masks)
with open(os.path.join(OUT, "eca184.pbm"), "wb") as fh:
    fh.write(image)
with open(os.path.join(OUT, "eca184-defects.pbm"), "wb") as fh:
    fh.write(mask)
print("wrote eca184.pbm: gamma+ (moving right) meets the jam wall")

# --- ECA #54: the two gamma dislocations over the period-4 background -------
rule54 = from_wolfram_number(54)
gamma_plus = periodic_config(rule54.alphabet, (0, 0, 1, 0), (), (1, 1, 0, 1),
                             left_phase=0, right_phase=3)
rows54, _ = spacetime_rows(rule54, gamma_plus, steps=120, lo=-150, hi=150)
image54, _ = render_spacetime(rows54, rule54.alphabet)
with open(os.path.join(OUT, "eca54.pbm"), "wb") as fh:
    fh.write(image54)
print("wrote eca54.pbm: a gamma+ dislocation drifting right at speed 1")
