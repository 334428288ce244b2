"""
Similarity graphs and maximal cliques
=====================================

Class centers become nodes of a first-order graph (edges where cosine
exceeds a threshold). The second-order graph prunes edges that lack a
completing 2-path, thinning redundant connections. Maximal cliques of the
pruned graph are the building blocks for hyper-classes.
"""

import numpy as np

from cliqueadapt import (
    Space,
    ThresholdSchedule,
    advance_threshold,
    build_fog,
    build_sog,
    maximal_cliques,
)
from cliqueadapt.core import normalize

# Three tight "animal" centers, two tight "vehicle" centers, one outlier.
anchors = np.stack([
    normalize(np.array([1.0, 0.1, 0.0])),
    normalize(np.array([1.0, 0.3, 0.1])),
    normalize(np.array([0.9, 0.2, 0.2])),
    normalize(np.array([0.0, 1.0, 0.1])),
    normalize(np.array([0.1, 1.0, 0.0])),
    normalize(np.array([0.0, 0.0, 1.0])),
])

fog = build_fog(anchors, threshold=0.8, space=Space.CSS)
sog = build_sog(fog)

def edges(g):
    i, j = np.nonzero(np.triu(g.adjacency, 1))
    return sorted(zip(i.tolist(), j.tolist()))

print("first-order edges :", edges(fog))
print("second-order edges:", edges(sog))

# Cliques of the second-order graph: the two communities come out whole,
# and the outlier survives as a singleton so it can still be selected.
cliques = maximal_cliques(sog)
print("maximal cliques   :", cliques.cliques)

# The threshold grows with every processed sample, so the graph sparsifies
# as the caches fill with better-adapted centers.
sched = ThresholdSchedule(t0=0.70, growth=0.002)
values = [advance_threshold(sched) for _ in range(120)]
print("\nthreshold after     0 samples:", values[0])
print("threshold after    50 samples:", round(values[50], 3))
print("threshold after   100 samples:", round(values[100], 3))
