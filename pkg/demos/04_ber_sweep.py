"""Run a small BER sweep for three selectors and print a text waterfall.

Writes ber_demo.csv (the same schema the CLI produces) so the plotting
frontend can render the curves.
"""

import math

from ris_rqsm.sim import SweepConfig, run_sweep

GRID = tuple(float(s) for s in range(-8, 9, 4))

records = []
for selector in ("coas", "random", "first"):
    config = SweepConfig(
        mod_order=8, n_reflectors=8, n_rx=4, n_sel=2,
        snr_grid_db=GRID, selector=selector, seed=42,
        max_frames=40_000, min_bit_errors=10**9,
    )
    records += run_sweep(config, csv_path="ber_demo.csv")

print(f"{'snr_db':>7} | {'coas':>9} | {'random':>9} | {'first':>9}")
by_sel = {s: [r for r in records if r.selector == s] for s in ("coas", "random", "first")}
for i, snr in enumerate(GRID):
    row = [by_sel[s][i].ber for s in ("coas", "random", "first")]
    print(f"{snr:>7.1f} | " + " | ".join(f"{b:>9.2e}" for b in row))

print("\ncrude waterfall (log10 BER, coas selector):")
for rec in by_sel["coas"]:
    if rec.ber > 0:
        bar = "#" * int(10 * (2 + math.log10(rec.ber)) + 20)
        print(f"  {rec.snr_db:>5.1f} dB {rec.ber:.2e} {bar}")

print("\nwrote ber_demo.csv")
