"""
From per-region counts to the exponent constant, for the shipped constructions.
"""

from fractions import Fraction

from pseudobound.construction import (
    CountSource,
    ConstructionConfig,
    RegionSpec,
    amplify,
    assemble_bound,
    format_report,
    load_config,
)
from pseudobound.verify import data_path

for name in ("k4", "k6", "k12"):
    report = assemble_bound(load_config(data_path("tables", f"{name}.cfg")))
    print(format_report(report))
    print()

# a toy construction built in code: one patch of 5 pairwise crossing
# segments (62 reroutings) per n^2/100
toy = ConstructionConfig(3, (RegionSpec("K5", Fraction(1, 100), CountSource("complete", 5)),))
report = assemble_bound(toy)
print(format_report(report))

# recursing into the bundles multiplies c by k/(k-1)
for k in (2, 3, 4, 6, 12):
    print(k, float(amplify(report.exact_sum, k)))
