"""Walk through channel sampling, antenna selection and subset labeling.

Draws a few Rayleigh channel realizations, shows which receive antennas the
norm-based selector keeps, and verifies the choice against an exhaustive
search over every subset.
"""

from itertools import combinations

import numpy as np

from ris_rqsm import coas_select, sample_channel, subset_label, label_to_subset

rng = np.random.default_rng(7)

N, N_R, N_S = 8, 4, 2
print(f"configuration: {N} reflectors, {N_R} candidate antennas, keep {N_S}\n")

for trial in range(3):
    h = sample_channel(N, N_R, rng)
    norms = np.sum(np.abs(h.entries) ** 2, axis=0)
    sel = coas_select(h, N_S)
    print(f"realization {trial + 1}")
    print("  column norms:", np.array2string(norms, precision=3))
    print(f"  kept antennas {sel.subset.indices} -> class label {sel.subset.label}")

    best = max(
        combinations(range(1, N_R + 1), N_S),
        key=lambda c: sum(norms[i - 1] for i in c),
    )
    assert best == sel.subset.indices, "exhaustive search disagrees"
    print(f"  exhaustive search over all C({N_R},{N_S}) subsets agrees\n")

print("label mapping for every subset of 2 out of 4 antennas:")
for label in range(1, 7):
    subset = label_to_subset(label, 4, 2)
    assert subset_label(subset, 4, 2) == label
    print(f"  label {label} <-> antennas {subset}")
