"""
Exact expectations versus Monte Carlo
=====================================

On topologies with a handful of nodes every delivery and retransmission
outcome can be enumerated, which gives the exact expected reachability.
The Monte Carlo engine has to land within a few standard errors of it.
"""

import math

import numpy as np

from noisyflood import FloodParams, exact_metrics, flood_batch
from noisyflood.oracle import FIXTURES, fixture

# %%
# The 3-node chain by hand: B is reached with probability p_c, C with p_c^2
# when p_r = 1, so E[RCH] = (0.5 + 0.25) / 3 at p_c = 0.5.
topo, src = fixture("chain-3")
print(exact_metrics(topo, src, FloodParams(p_r=1.0, p_c=0.5)))

# %%
# Every bundled fixture at one noisy operating point.
params = FloodParams(p_r=0.75, p_c=0.5)
rng = np.random.default_rng(0)
for name in FIXTURES:
    topo, src = fixture(name)
    exact = exact_metrics(topo, src, params)
    reached, _ = flood_batch(topo, src, params, rng, runs=100_000)
    mc = reached.mean() / topo.n
    se = reached.std(ddof=1) / math.sqrt(len(reached)) / topo.n
    print(f"{name:<14} exact {exact.expected_rch:.5f}  mc {mc:.5f}  z {(mc - exact.expected_rch) / se:+.2f}")
