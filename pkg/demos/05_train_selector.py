"""Train a small learned selector and compare its choices with the exact one.

Uses a reduced sample count and epoch budget so the demo finishes in about a
minute; the README shows the full-scale command.
"""

import numpy as np

from ris_rqsm import coas_select, sample_channel
from ris_rqsm.dnn import TrainConfig, generate_dataset, predict_subset, train

rng = np.random.default_rng(12)

N, N_R, N_S = 16, 4, 2
print("generating 20k labeled channel draws ...")
dataset = generate_dataset(20_000, N, N_R, N_S, rng)

config = TrainConfig(
    n_samples=20_000, epochs=8, augment_permutations=True,
    augment_phases=True, average_weights=True, seed=12,
)
print("training (8 epochs) ...")
result = train(dataset, config)
for epoch, (loss, acc) in enumerate(
    zip(result.history["val_loss"], result.history["val_acc"])
):
    print(f"  epoch {epoch}: val loss {loss:.4f}, val accuracy {acc:.3f}")

agree = 0
trials = 2000
for _ in range(trials):
    h = sample_channel(N, N_R, rng)
    if predict_subset(result.params, h) == coas_select(h, N_S).subset:
        agree += 1
print(f"\nagreement with the exact selector on fresh channels: "
      f"{agree / trials:.3f} (chance 0.167)")
