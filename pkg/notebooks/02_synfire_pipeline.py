"""
Finding a synfire chain
=======================

A synfire chain is a sequence of synchronous groups.  Parallel mining finds
the groups.  Each occurrence of a group is then replaced by one composite
event, and serial mining on the rewritten stream finds the chain.
"""

from spikeepisodes import discover_synfire, parse_interval_set, simulate_spec
from spikeepisodes.presets import example3_spec

# X drives (A B C), which drives D, then E, then F.  The delays are 5, 3, 7
# and 3 ms, so a single serial gap cannot describe the chain.
spec = example3_spec("sigmoid", lambda0=5.0)
seq, _ = simulate_spec(spec, 50.0, seed=1)
print(f"{len(seq)} spikes")

# Offer five 2 ms gap bins and let the miner choose a bin for every link.
intervals = parse_interval_set("0-0.002,0.002-0.004,0.004-0.006,0.006-0.008,0.008-0.010")
result = discover_synfire(seq, expiry=0.001, intervals=intervals)

print("composites:", ", ".join(str(c) for c in result.composites))
print(f"rewritten stream has {len(result.rewritten)} events")
for chain, count in result.chains():
    print(f"{chain} : {count}")

# At the default 20 Hz background the chain neurons are driven hard enough
# that extra co-firing pairs appear and share neurons with the true groups.
# Rewriting refuses such overlapping groups instead of guessing.
busy, _ = simulate_spec(example3_spec("sigmoid"), 50.0, seed=1)
try:
    discover_synfire(busy, expiry=0.001, intervals=intervals)
except ValueError as exc:
    print("\n20 Hz background:", exc)
