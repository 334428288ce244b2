"""
Fusion weight sweep
===================

The final score is beta1 * zero-shot + beta2 * shared-space + beta3 *
auxiliary-space. With beta1 pinned at 1, a grid search over (beta2, beta3)
shows how much each adapted path contributes. The three path outputs per
sample are independent of the weights, so one recorded pass over the
stream prices the whole grid.
"""

import numpy as np

from cliqueadapt import EngineConfig, StreamData, SynthSpec, generate, run_stream, sweep_betas

spec = SynthSpec(samples=400, seed=9)
text_features, stream = generate(spec)
config = EngineConfig(k=spec.k, d1=spec.d1, d2=spec.d2)

result = run_stream(config, StreamData(text_features=text_features, samples=stream),
                    collect_paths=True)
sweep = sweep_betas(result.paths, step=0.5, max_value=2.0)

values = sorted({b2 for b2, _, _ in sweep.grid})
table = {(b2, b3): acc for b2, b3, acc in sweep.grid}

print("top-1 accuracy over the (beta2, beta3) grid (beta1 = 1):\n")
print("           " + "".join(f"b3={v:<6}" for v in values))
for b2 in values:
    row = "".join(f"{table[(b2, b3)]:.3f}   " for b3 in values)
    print(f"  b2={b2:<5} {row}")

w = sweep.weights
print(f"\nbest weights: ({w.beta1}, {w.beta2}, {w.beta3})  accuracy {sweep.accuracy:.3f}")
print(f"zero-shot alone (0, 0 corner): {table[(0.0, 0.0)]:.3f}")
