"""
Entropy-gated caching
=====================

Each class keeps a small bounded store of test features. Below capacity
everything is admitted; once full, a newcomer must be more confident
(lower prediction entropy) than the worst resident, which it then evicts.
The running maximum entropy of a full cache can therefore only go down.
"""

import numpy as np

from cliqueadapt import CacheEntry, ClassCache, consider_insert
from cliqueadapt.core import normalize

rng = np.random.default_rng(0)
cache = ClassCache(class_id=0, capacity=3, dim=4)

arrivals = [0.62, 0.91, 0.48, 0.75, 0.30, 0.55, 0.95]
print(f"capacity = {cache.capacity}\n")
for i, h in enumerate(arrivals):
    entry = CacheEntry(normalize(rng.standard_normal(4)), h, i)
    result = consider_insert(cache, entry)
    held = sorted(round(e.entropy, 2) for e in cache.entries)
    note = ""
    if result.evicted is not None:
        note = f" (evicted entropy {result.evicted.entropy:.2f})"
    print(f"sample {i}: entropy {h:.2f} -> {result.status.value:<8} cache now {held}{note}")

# The final residents are the three most confident arrivals ever seen.
print("\nretained entropies:", sorted(e.entropy for e in cache.entries))
