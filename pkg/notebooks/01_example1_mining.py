"""
Parallel and serial episodes in a small simulated network
=========================================================

A -> B, then B fans out to C and E, with C -> D and E -> F.  Every link has
a 5 ms delay.  The rest of the 26 neurons are randomly wired background.
"""

from spikeepisodes import MiningConfig, mine, parse_interval_set, simulate_spec
from spikeepisodes.presets import example1_spec

# 50 s of spikes from the sigmoid rate model
seq, net = simulate_spec(example1_spec("sigmoid"), 50.0, seed=1)
print(f"{len(seq)} spikes from {net.n_neurons} neurons")

# Neurons that share a driver fire close together.  Parallel episodes with a
# short expiry pick up those synchronous groups.
for expiry in (0.002, 0.007):
    report = mine(seq, "parallel", MiningConfig(expiry=expiry))
    print(f"\nparallel, expiry {expiry * 1000:g} ms")
    print(report.format_table(max_rows=6))

# Serial episodes with a gap of (4, 6] ms recover the ordered paths through
# the 5 ms links.
report = mine(seq, "serial", MiningConfig(intervals=parse_interval_set("0.004-0.006")))
print("\nserial, gap (4, 6] ms")
print(report.format_table(max_rows=6))

# A lower quiescent rate leaves fewer background-driven spikes in the chain
# neurons, and the parallel result shrinks to the two sibling pairs.
quiet, _ = simulate_spec(example1_spec("sigmoid", lambda0=5.0), 50.0, seed=1)
print("\nparallel, expiry 2 ms, 5 Hz background")
print(mine(quiet, "parallel", MiningConfig(expiry=0.002)).format_table(max_rows=6))
