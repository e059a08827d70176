"""
How large do chance episodes get?
=================================

Noise streams contain no structure, so the largest episode count at each
size shows what chance alone produces.  Streams with an embedded pattern
give the smallest count among the pattern's own episodes.  The two curves
should be far apart.

Pass ``--full`` for 10 replicates of 50 s (roughly a quarter of an hour on
one core).  The default is a quick look.
"""

import sys

from spikeepisodes import SignificanceConfig, significance_run

full = "--full" in sys.argv
cfg = (SignificanceConfig(replicates=10, duration=50.0) if full
       else SignificanceConfig(replicates=2, duration=5.0, max_size=6))
report = significance_run(cfg, progress=None)

for kind in ("parallel", "serial"):
    print(f"\n{kind}: mean max frequency per size")
    for label, curve in report.noise[kind].items():
        print(f"  {label:28s}", " ".join(f"{v:7.1f}" for v in curve))
    for label, curve in report.patterns.items():
        if report.pattern_kinds[label] == kind:
            print(f"  {label:28s}", " ".join(f"{v:7.1f}" for v in curve), "(min)")
    ratios = report.separation(kind, 3)
    print("  size-3 separation:", {k: round(v, 1) for k, v in ratios.items()})

# The same numbers as a table for plotting
with open("significance_curves.tsv", "w") as fh:
    fh.write(report.to_tsv())
print("\ncurves written to significance_curves.tsv")
