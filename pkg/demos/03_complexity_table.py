"""Reproduce the operation-count comparison of the two selection strategies.

Prints the three benchmark cases and writes them as CSV for the plotting
frontend.
"""

from ris_rqsm.complexity import DEFAULT_CASES, complexity_table, write_complexity_csv

rows = complexity_table()
widths = ("case", "L", "layer_sizes", "N", "N_R", "N_S", "coas_rms", "dnn_rms")
print(" | ".join(f"{w:>11}" for w in widths))
for row in rows:
    print(" | ".join(f"{str(row[w]):>11}" for w in widths))

ratio = [row["dnn_rms"] / row["coas_rms"] for row in rows]
print("\nnetwork-to-selection cost ratio per case:",
      ", ".join(f"{r:.1f}x" for r in ratio))

write_complexity_csv("complexity.csv", DEFAULT_CASES)
print("wrote complexity.csv")
