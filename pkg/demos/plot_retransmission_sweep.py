"""
Reachability against noise for several retransmission probabilities
====================================================================

A shortened version of the bundled scenario 1 (300 s of simulated time
instead of 1800 s). For each p_r we plot RCH against the probability of
reception and print the relative degradation S_RCH at p_c = 0.5.

The full run is ``noisyflood run scenario1.cfg`` followed by
``noisyflood table out/results.csv``.
"""

import dataclasses

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from noisyflood import config, run_scenario

spec = config.load("scenario1.cfg")
spec = dataclasses.replace(spec, base=dataclasses.replace(spec.base, sim_time_s=300))
table = run_scenario(spec)

fig, ax = plt.subplots(figsize=(5, 4))
for p_r in table.values:
    rows = table.group(p_r)
    ax.plot([r.p_c for r in rows], [r.rch for r in rows], marker="o", label=f"p_r = {p_r}")
    print(f"p_r = {p_r}: S_RCH(0.5) = {table.cell(p_r, 0.5).s_rch:.1f} %")
ax.set_xlabel("probability of reception p_c")
ax.set_ylabel("RCH")
ax.legend()
fig.tight_layout()
fig.savefig("rch_vs_pc.png", dpi=120)
