"""
Math kernels underneath the adaptation engine
==============================================

Everything downstream is built from four small pieces: unit normalization,
temperature softmax, Shannon entropy, and an exponential similarity
weighting. This script walks through their behavior on small inputs.
"""

import numpy as np

from cliqueadapt import adaptation_fn, cosine, entropy, normalize, softmax

# Normalization maps any nonzero vector onto the unit sphere; all cached
# features live there, so similarity reduces to a dot product.
v = np.array([3.0, 4.0])
print("normalize([3, 4])      ->", normalize(v))
print("cosine with [1, 0]     ->", round(cosine(v, np.array([1.0, 0.0])), 6))

# The softmax temperature controls how peaked predictions are. The engine
# defaults to tau = 0.01, the usual logit scale for contrastive encoders;
# the same logits at tau = 1.0 stay soft.
logits = np.array([0.32, 0.30, 0.10])
for tau in (1.0, 0.1, 0.01):
    p = softmax(logits, tau)
    print(f"softmax(tau={tau:<5}) -> {np.round(p, 4)}  entropy={entropy(p):.4f}")

# Entropy is the confidence signal used by the cache gate: uniform
# predictions score ln(K), one-hot predictions score 0.
print("entropy(uniform over 4) =", round(entropy(np.full(4, 0.25)), 6), "= ln 4")

# The adaptation function exp(-alpha * (1 - x)) turns cosine similarity into
# a positive weight: 1 at a perfect match, decaying for anything farther.
# Larger alpha sharpens the decay.
for alpha in (1.0, 5.0, 20.0):
    weights = adaptation_fn(np.array([1.0, 0.8, 0.5, 0.0]), alpha)
    print(f"adaptation_fn(alpha={alpha:<4}) at x=[1, .8, .5, 0] ->", np.round(weights, 4))
