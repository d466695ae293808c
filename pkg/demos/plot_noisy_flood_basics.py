"""
Flooding one snapshot through a noisy channel
=============================================

Drop 100 nodes on a 600 x 600 m field, link the ones within 100 m of each
other and flood a route request from node 0. We then turn the noise up
(lower probability of reception) and watch the reached set shrink.
"""

import numpy as np

from noisyflood import Area, FloodParams, build_topology, density, flood, flood_coupled

rng = np.random.default_rng(7)
positions = rng.random((100, 2)) * 600
topo = build_topology(positions, radio_range=100)
print(f"expected neighbours per node: {density(100, 100, Area(600, 600)):.2f}")
print(f"nodes in the source's component: {len(topo.component(0))}")

# %%
# Pure flooding on a clean channel reaches the whole component, and every
# node in it transmits exactly once.
out = flood(topo, 0, FloodParams(p_r=1.0, p_c=1.0), rng)
print(f"pure flood: reached {len(out.reached)}, transmissions {out.transmissions}")

# %%
# Probabilistic flooding with p_r = 0.8 on a lossy channel. Reusing the same
# uniforms for every p_c (``flood_coupled``) makes the reached sets nested,
# so the curve below can only go up.
grid = [0.5, 0.6, 0.7, 0.8, 0.9, 1.0]
outs = flood_coupled(topo, 0, 0.8, grid, np.random.default_rng(1))
for p_c, o in zip(grid, outs):
    print(f"p_c = {p_c:.1f}: reached {len(o.reached):3d}, transmissions {o.transmissions:3d}")

# %%
# A single flood is a noisy sample. Averaging over many draws shows the
# typical loss of reachability from noise.
for p_c in (1.0, 0.7, 0.5):
    sizes = [len(flood(topo, 0, FloodParams(0.8, p_c), rng).reached) for _ in range(300)]
    print(f"p_c = {p_c:.1f}: mean reached {np.mean(sizes):.1f} of {len(topo.component(0)) - 1}")
