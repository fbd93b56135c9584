"""Link-level simulator for RIS-assisted receive quadrature spatial modulation.

Subpackages by concern:

- :mod:`ris_rqsm.channel` -- Rayleigh channel draws, antenna-subset
  selection and labeling, classifier feature vectors.
- :mod:`ris_rqsm.phy` -- bit mapping, QAM, reflector phase control,
  received-signal synthesis and maximum-likelihood detection.
- :mod:`ris_rqsm.dnn` -- the from-scratch MLP selector: dataset
  generation, Adam training, inference, checkpoints.
- :mod:`ris_rqsm.complexity` -- closed-form real-multiplication counts.
- :mod:`ris_rqsm.sim` -- seeded Monte Carlo BER sweeps and CSV output.
- :mod:`ris_rqsm.cli` -- the ``ris-rqsm`` command-line tool.
"""

from .errors import ConfigurationError
from .channel import (
    AntennaSubset,
    ChannelMatrix,
    SelectedChannel,
    coas_select,
    feature_vector,
    label_to_subset,
    sample_channel,
    subset_label,
)
from .phy import (
    Detection,
    PhaseVector,
    ReceivedVector,
    RqsmFrame,
    SystemConfig,
    demap_bits,
    map_bits,
    ml_detect,
    qam_constellation,
    ris_phases,
    spectral_efficiency,
    transmit_receive,
)
from .complexity import coas_rm_count, complexity_table, dnn_rm_count
from .sim import BerRecord, SweepConfig, run_point, run_sweep, snr_to_noise

__all__ = [
    "ConfigurationError",
    "AntennaSubset",
    "ChannelMatrix",
    "SelectedChannel",
    "coas_select",
    "feature_vector",
    "label_to_subset",
    "sample_channel",
    "subset_label",
    "Detection",
    "PhaseVector",
    "ReceivedVector",
    "RqsmFrame",
    "SystemConfig",
    "demap_bits",
    "map_bits",
    "ml_detect",
    "qam_constellation",
    "ris_phases",
    "spectral_efficiency",
    "transmit_receive",
    "coas_rm_count",
    "complexity_table",
    "dnn_rm_count",
    "BerRecord",
    "SweepConfig",
    "run_point",
    "run_sweep",
    "snr_to_noise",
]

__version__ = "0.1.0"
