"""Trace one transmission end to end: bits -> mapping -> phases -> detection.

Shows how the message splits into a QAM symbol plus two antenna positions,
how each reflector half rotates toward its target antenna, and that the
exhaustive detector recovers the message.
"""

import numpy as np

from ris_rqsm import (
    SystemConfig,
    coas_select,
    demap_bits,
    map_bits,
    ml_detect,
    ris_phases,
    sample_channel,
    transmit_receive,
)

rng = np.random.default_rng(3)

config = SystemConfig(
    mod_order=8, n_reflectors=8, n_rx=4, n_sel=2,
    symbol_energy=1.0, noise_variance=0.05,
)
print(f"spectral efficiency: {config.eta} bits per channel use")

sel = coas_select(sample_channel(config.n_reflectors, config.n_rx, rng), config.n_sel)
print(f"selected antennas: {sel.subset.indices}")

bits = rng.integers(0, 2, config.eta)
frame = map_bits(bits, config)
print(f"message bits     : {bits}")
print(f"  QAM symbol     : {frame.symbol:.3f} (index {frame.symbol_index})")
print(f"  I-branch target: subset position {frame.l_re}")
print(f"  Q-branch target: subset position {frame.l_im}")

phases = ris_phases(sel, frame.l_re, frame.l_im)
print(f"reflector phases (rad): {np.array2string(phases.phases, precision=3)}")

y = transmit_receive(sel, frame, phases, config, rng)
print(f"received samples: {np.array2string(y.values, precision=3)}")

det = ml_detect(y, sel, config)
decoded = demap_bits(det.l_re, det.l_im, det.symbol, config)
print(f"detected         : symbol index {det.symbol_index}, "
      f"targets ({det.l_re}, {det.l_im}), metric {det.metric:.4f}")
print(f"decoded bits     : {decoded}")
print("bit errors       :", int(np.sum(decoded != bits)))
