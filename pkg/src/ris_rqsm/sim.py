"""Seeded Monte Carlo bit-error-rate sweeps across selectors and SNR grids.

Frames are processed in fixed-size blocks.  Every block draws its channel,
message and noise randomness from a substream derived only from (seed,
block index), so outcomes do not depend on scheduling and two runs that
differ only in the selector see identical channels, bits and noise --
paired comparisons are therefore noise-free to first order.  Selector-
internal randomness (the random-subset baseline) uses a separate
substream so it cannot disturb the pairing.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace

import numpy as np

from . import dnn as dnn_mod
from .channel import all_subsets, n_subsets
from .errors import ConfigurationError
from .phy import SystemConfig, qam_constellation, spectral_efficiency, TWO_PI

__all__ = [
    "SweepConfig",
    "BerRecord",
    "SELECTORS",
    "CSV_HEADER",
    "snr_to_noise",
    "run_point",
    "run_sweep",
    "records_to_csv_rows",
    "write_records_csv",
    "frame_outcomes_for_block",
    "ber_confidence",
]

SELECTORS = ("coas", "dnn", "random", "first")

CSV_HEADER = "selector,M,N,N_R,N_S,snr_db,frames,bit_errors,ber,seed,wall_time_s"

DEFAULT_BLOCK_FRAMES = 4096


@dataclass(frozen=True)
class SweepConfig:
    """Everything needed to reproduce one BER sweep."""

    mod_order: int
    n_reflectors: int
    n_rx: int
    n_sel: int
    snr_grid_db: tuple[float, ...]
    selector: str
    seed: int
    symbol_energy: float = 1.0
    max_frames: int = 10_000_000
    min_bit_errors: int = 200
    model_path: str | None = None
    block_frames: int = DEFAULT_BLOCK_FRAMES

    def __post_init__(self) -> None:
        if self.selector not in SELECTORS:
            raise ConfigurationError(
                f"unknown selector {self.selector!r}; choose one of {SELECTORS}"
            )
        if len(self.snr_grid_db) == 0:
            raise ConfigurationError("SNR grid must not be empty")
        if self.max_frames < 1 or self.min_bit_errors < 1 or self.block_frames < 1:
            raise ConfigurationError("stop rule and block size must be positive")
        if self.selector == "dnn" and not self.model_path:
            raise ConfigurationError("selector 'dnn' requires a model checkpoint path")
        # Validate the static link parameters eagerly.
        self.system(noise_variance=1.0)

    def system(self, noise_variance: float) -> SystemConfig:
        return SystemConfig(
            mod_order=self.mod_order,
            n_reflectors=self.n_reflectors,
            n_rx=self.n_rx,
            n_sel=self.n_sel,
            symbol_energy=self.symbol_energy,
            noise_variance=noise_variance,
        )

    @property
    def eta(self) -> int:
        return spectral_efficiency(self.mod_order, self.n_sel)


@dataclass(frozen=True)
class BerRecord:
    """One measured (selector, configuration, SNR) point."""

    selector: str
    mod_order: int
    n_reflectors: int
    n_rx: int
    n_sel: int
    snr_db: float
    frames: int
    bit_errors: int
    ber: float
    seed: int
    wall_time: float


def snr_to_noise(snr_db: float, symbol_energy: float) -> float:
    """Noise variance N_0 for a given SNR in dB: N_0 = E_s / 10^(SNR/10)."""
    if symbol_energy <= 0:
        raise ConfigurationError("symbol energy must be positive")
    if math.isinf(snr_db):
        return 0.0 if snr_db > 0 else math.inf
    return symbol_energy / (10.0 ** (snr_db / 10.0))


def ber_confidence(bit_errors: int, total_bits: int, z: float = 1.96):
    """Normal-approximation confidence interval for a BER estimate."""
    if total_bits < 1:
        raise ValueError("need at least one transmitted bit")
    p = bit_errors / total_bits
    half = z * math.sqrt(max(p * (1.0 - p), 0.0) / total_bits)
    return max(p - half, 0.0), min(p + half, 1.0)


def _load_model(config: SweepConfig) -> dnn_mod.MlpParams | None:
    if config.selector != "dnn":
        return None
    try:
        params = dnn_mod.load_checkpoint(config.model_path)
    except FileNotFoundError:
        raise ConfigurationError(f"model checkpoint not found: {config.model_path}")
    _check_model_dims(params, config)
    return params


def _check_model_dims(params: dnn_mod.MlpParams, config: SweepConfig) -> None:
    expected_in = 2 * config.n_reflectors * config.n_rx
    expected_out = n_subsets(config.n_rx, config.n_sel)
    if params.n_inputs != expected_in:
        raise ConfigurationError(
            f"model input size {params.n_inputs} does not match "
            f"2*N*N_R = {expected_in} for N={config.n_reflectors}, N_R={config.n_rx}"
        )
    if params.n_outputs != expected_out:
        raise ConfigurationError(
            f"model output size {params.n_outputs} does not match the "
            f"{expected_out} subsets of {config.n_sel} out of {config.n_rx} antennas"
        )


def _block_streams(seed: int, block_index: int):
    """Main and selector substreams for one block, scheduling-independent."""
    main = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(block_index,)))
    sel = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(block_index, 1)))
    return main, sel


def _select_block(
    h: np.ndarray,
    config: SweepConfig,
    rng_sel: np.random.Generator,
    params: dnn_mod.MlpParams | None,
) -> np.ndarray:
    """0-based sorted subset indices, shape (frames, n_sel)."""
    b, n, n_rx = h.shape
    k = config.n_sel
    if config.selector == "first":
        return np.broadcast_to(np.arange(k), (b, k)).copy()
    if config.selector == "random":
        scores = rng_sel.random((b, n_rx))
        return np.sort(np.argsort(scores, axis=1)[:, :k], axis=1)
    if config.selector == "dnn":
        vec = h.transpose(0, 2, 1).reshape(b, n * n_rx)
        feats = np.concatenate([vec.real, vec.imag], axis=1)
        labels = dnn_mod.predict_labels(params, feats)
        lut = np.array(all_subsets(n_rx, k), dtype=np.int64) - 1
        return lut[labels - 1]
    norms = np.sum(np.abs(h) ** 2, axis=1)
    return np.sort(np.argsort(-norms, axis=1, kind="stable")[:, :k], axis=1)


def frame_outcomes_for_block(
    config: SweepConfig,
    snr_db: float,
    block_index: int,
    n_frames: int,
    params: dnn_mod.MlpParams | None = None,
) -> np.ndarray:
    """Per-frame bit-error counts for one block of the deterministic stream.

    Two configs differing only in ``selector`` see identical channels,
    messages and noise for the same (seed, block_index), which makes the
    returned arrays directly comparable frame by frame.
    """
    if config.selector == "dnn" and params is None:
        params = _load_model(config)
    n0 = snr_to_noise(snr_db, config.symbol_energy)
    rng, rng_sel = _block_streams(config.seed, block_index)
    h, bits, noise = _draw_block(rng, n_frames, config, n0)
    idx = _select_block(h, config, rng_sel, params)
    return _detect_block(h, bits, noise, idx, config)


def _draw_block(rng: np.random.Generator, b: int, config: SweepConfig, n0: float):
    """Channel, message bits and scaled noise for ``b`` frames, fixed order."""
    n, n_rx, n_sel = config.n_reflectors, config.n_rx, config.n_sel
    h = (
        rng.standard_normal((b, n, n_rx)) + 1j * rng.standard_normal((b, n, n_rx))
    ) / np.sqrt(2.0)
    bits = rng.integers(0, 2, size=(b, config.eta), dtype=np.int64)
    noise = math.sqrt(n0 / 2.0) * (
        rng.standard_normal((b, n_sel)) + 1j * rng.standard_normal((b, n_sel))
    )
    return h, bits, noise


def _detect_block(
    h: np.ndarray,
    bits: np.ndarray,
    noise: np.ndarray,
    idx: np.ndarray,
    config: SweepConfig,
) -> np.ndarray:
    """Map, transmit, detect and demap a block; per-frame bit-error counts."""
    b = h.shape[0]
    half = config.n_reflectors // 2
    k_sym = int(math.log2(config.mod_order))
    k_idx = int(math.log2(config.n_sel))
    table = qam_constellation(config.mod_order)
    amp = math.sqrt(config.symbol_energy)

    h_sel = np.take_along_axis(h, idx[:, None, :], axis=2)
    h_re, h_im = h_sel[:, :half, :], h_sel[:, half:, :]
    rot_re = np.exp(1j * np.mod(-np.angle(h_re), TWO_PI))
    rot_im = np.exp(1j * np.mod(-np.angle(h_im), TWO_PI))
    # gains[f, l, c]: branch gain at subset antenna l when targeting c.
    gains_re = np.einsum("fsl,fsc->flc", h_re, rot_re)
    gains_im = np.einsum("fsl,fsc->flc", h_im, rot_im)

    pow_sym = 1 << np.arange(k_sym - 1, -1, -1, dtype=np.int64)
    sym_idx = bits[:, :k_sym] @ pow_sym
    if k_idx > 0:
        pow_idx = 1 << np.arange(k_idx - 1, -1, -1, dtype=np.int64)
        lre = bits[:, k_sym : k_sym + k_idx] @ pow_idx
        lim = bits[:, k_sym + k_idx :] @ pow_idx
    else:
        lre = np.zeros(b, dtype=np.int64)
        lim = np.zeros(b, dtype=np.int64)
    x = table[sym_idx]

    g_tx_re = np.take_along_axis(gains_re, lre[:, None, None], axis=2)[:, :, 0]
    g_tx_im = np.take_along_axis(gains_im, lim[:, None, None], axis=2)[:, :, 0]
    y = amp * (g_tx_re * x.real[:, None] + 1j * g_tx_im * x.imag[:, None]) + noise

    hyp = amp * (
        gains_re[:, :, :, None, None] * table.real[None, None, None, None, :]
        + 1j * gains_im[:, :, None, :, None] * table.imag[None, None, None, None, :]
    )
    metrics = np.sum(np.abs(y[:, :, None, None, None] - hyp) ** 2, axis=1)
    flat = np.argmin(metrics.reshape(b, -1), axis=1)
    n_sel, m = config.n_sel, config.mod_order
    det_lre = flat // (n_sel * m)
    det_lim = (flat // m) % n_sel
    det_sym = flat % m

    err = _bit_diff(sym_idx, det_sym, k_sym)
    if k_idx > 0:
        err += _bit_diff(lre, det_lre, k_idx)
        err += _bit_diff(lim, det_lim, k_idx)
    return err


def _bit_diff(a: np.ndarray, b: np.ndarray, width: int) -> np.ndarray:
    """Hamming distance between two integer arrays over ``width`` bits."""
    diff = np.bitwise_xor(a, b)
    count = np.zeros(a.shape, dtype=np.int64)
    for shift in range(width):
        count += (diff >> shift) & 1
    return count


def run_point(
    config: SweepConfig,
    snr_db: float,
    params: dnn_mod.MlpParams | None = None,
) -> BerRecord:
    """Monte Carlo BER at one SNR, stopping at min_bit_errors or max_frames."""
    if params is None:
        params = _load_model(config)
    elif config.selector == "dnn":
        _check_model_dims(params, config)
    n0 = snr_to_noise(snr_db, config.symbol_energy)
    eta = config.eta
    t0 = time.perf_counter()
    frames = 0
    bit_errors = 0
    block_index = 0
    while frames < config.max_frames and bit_errors < config.min_bit_errors:
        b = min(config.block_frames, config.max_frames - frames)
        rng, rng_sel = _block_streams(config.seed, block_index)
        h, bits, noise = _draw_block(rng, b, config, n0)
        idx = _select_block(h, config, rng_sel, params)
        bit_errors += int(np.sum(_detect_block(h, bits, noise, idx, config)))
        frames += b
        block_index += 1
    wall = time.perf_counter() - t0
    return BerRecord(
        selector=config.selector,
        mod_order=config.mod_order,
        n_reflectors=config.n_reflectors,
        n_rx=config.n_rx,
        n_sel=config.n_sel,
        snr_db=float(snr_db),
        frames=frames,
        bit_errors=bit_errors,
        ber=bit_errors / (frames * eta),
        seed=config.seed,
        wall_time=wall,
    )


def run_sweep(
    config: SweepConfig,
    csv_path=None,
    params: dnn_mod.MlpParams | None = None,
    measure_time: bool = True,
) -> list[BerRecord]:
    """One :func:`run_point` per grid entry, optionally appended to a CSV.

    With ``measure_time=False`` the wall_time_s column is written as 0.000,
    making repeated runs byte-identical.
    """
    if params is None:
        params = _load_model(config)
    records = []
    for snr_db in config.snr_grid_db:
        rec = run_point(config, snr_db, params=params)
        if not measure_time:
            rec = replace(rec, wall_time=0.0)
        records.append(rec)
    if csv_path is not None:
        write_records_csv(csv_path, records)
    return records


def records_to_csv_rows(records) -> list[str]:
    rows = []
    for r in records:
        rows.append(
            f"{r.selector},{r.mod_order},{r.n_reflectors},{r.n_rx},{r.n_sel},"
            f"{r.snr_db!r},{r.frames},{r.bit_errors},{r.ber!r},{r.seed},"
            f"{r.wall_time:.3f}"
        )
    return rows


def write_records_csv(path, records) -> None:
    """Append records, writing the fixed header when the file is new/empty."""
    need_header = True
    try:
        with open(path) as fh:
            need_header = fh.readline().strip() == ""
    except FileNotFoundError:
        pass
    with open(path, "a", newline="") as fh:
        if need_header:
            fh.write(CSV_HEADER + "\n")
        for row in records_to_csv_rows(records):
            fh.write(row + "\n")
