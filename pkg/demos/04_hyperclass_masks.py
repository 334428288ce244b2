"""
Hyper-classes and inlier masks
==============================

Each maximal clique becomes a hyper-class: the unit centroid of its member
node features. A test feature ranks hyper-classes by cosine, keeps the top
r proportion, and the union of their members becomes the inlier mask; all
other classes are zeroed out of the masked prediction.
"""

import numpy as np

from cliqueadapt import (
    Space,
    build_fog,
    build_mask,
    build_sog,
    make_hyperclasses,
    maximal_cliques,
    rank_by_affinity,
    select_top_r,
)
from cliqueadapt.core import normalize

rng = np.random.default_rng(2)

# Nine class centers in three loose communities on the sphere.
community_centers = [np.eye(6)[0], np.eye(6)[2], np.eye(6)[4]]
nodes = np.stack([
    normalize(community_centers[i // 3] + 0.35 * rng.standard_normal(6))
    for i in range(9)
])

sog = build_sog(build_fog(nodes, threshold=0.55, space=Space.AFV))
cliques = maximal_cliques(sog)
hypers = make_hyperclasses(cliques, nodes)
print("cliques:", cliques.cliques)

# A query inside the first community ranks that community's hyper-classes
# on top; with r = 0.34 only the closest third of cliques stays selected.
query = normalize(community_centers[0] + 0.2 * rng.standard_normal(6))
ranked = rank_by_affinity(query, hypers)
selected = select_top_r(ranked, len(cliques.cliques), r=0.34)
mask = build_mask(selected, cliques, n_nodes=9)

print("ranking (best first):", ranked)
print("selected cliques    :", [cliques.cliques[i] for i in selected])
print("inlier mask         :", mask.astype(int))

# Widening r only ever adds inliers, never removes them.
for r in (0.34, 0.67, 1.0):
    m = build_mask(select_top_r(ranked, len(cliques.cliques), r), cliques, 9)
    print(f"mask at r={r:<5}:", m.astype(int))
