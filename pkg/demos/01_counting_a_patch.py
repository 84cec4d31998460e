"""
Counting reroutings of a small patch, from geometry to a number.
"""

from fractions import Fraction

from pseudobound import (
    bipermutation_of_patch,
    count_reroutings,
    crossing_pairs,
    make_patch,
    multicrossing_census,
    segments_of_patch,
)
from pseudobound.bipermutation import crossing_poset, linear_extensions, split

# A 4 x 3 box cut by five lines.  Coordinates are exact fractions.
half = Fraction(1, 2)
lines = [
    (1, 0, 1 + half),   # x = 3/2
    (1, 0, 2 + half),   # x = 5/2
    (0, 1, 1 + half),   # y = 3/2
    (2, 2, 7),          # x + y = 7/2
    (1, -1, half),      # x - y = 1/2
]
box = [(0, 0), (4, 0), (4, 3), (0, 3)]
patch = make_patch(lines, box)

for seg in segments_of_patch(patch):
    a, b = seg.endpoints
    print(f"segment {seg.label}: ({a.x}, {a.y}) -> ({b.x}, {b.y})")

# walking around the boundary gives the bipermutation
bip = bipermutation_of_patch(patch)
print("bipermutation:", bip)
print("crossing pairs:", sorted(tuple(sorted(p)) for p in crossing_pairs(bip)))
print("crossings by order:", multicrossing_census(patch))

# cut along segment 1 and list the admissible orders of its crossings
poset = crossing_poset(bip, 1)
print("crossings on segment 1:", poset.elements, "forced:", sorted(poset.forced_pairs))
for order in linear_extensions(poset):
    left, right = split(bip, 1, order)
    print("  order", order, "->", left, "|", right)

print("reroutings:", count_reroutings(bip))
