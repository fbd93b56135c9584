"""Transmit mapping, reflector phase control, signal synthesis and detection.

One channel use carries ``log2(M) + 2*log2(N_S)`` bits: a Gray-coded QAM
symbol plus two receive-antenna positions inside the selected subset, one
targeted by the in-phase half of the reflecting surface and one by the
quadrature half.  Each reflector rotates its incident signal so that the
contributions add coherently at its target antenna.  The receiver runs an
exhaustive minimum-distance search over all (antenna, antenna, symbol)
triples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import SelectedChannel
from .errors import ConfigurationError

__all__ = [
    "SystemConfig",
    "RqsmFrame",
    "PhaseVector",
    "ReceivedVector",
    "Detection",
    "spectral_efficiency",
    "qam_constellation",
    "qam_modulate",
    "qam_demodulate",
    "map_bits",
    "demap_bits",
    "ris_phases",
    "branch_gains",
    "transmit_receive",
    "ml_detect",
    "detection_metric",
    "bits_to_int",
    "int_to_bits",
]

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class SystemConfig:
    """Static link parameters for one simulated configuration."""

    mod_order: int
    n_reflectors: int
    n_rx: int
    n_sel: int
    symbol_energy: float = 1.0
    noise_variance: float = 1.0

    def __post_init__(self) -> None:
        _require_pow2(self.mod_order, "modulation order")
        if self.mod_order < 4:
            raise ConfigurationError(f"modulation order must be >= 4, got {self.mod_order}")
        if self.n_reflectors % 2 != 0 or self.n_reflectors < 2:
            raise ConfigurationError(
                f"reflector count must be even and positive, got {self.n_reflectors}"
            )
        _require_pow2(self.n_sel, "selected antenna count")
        if self.n_sel > self.n_rx:
            raise ConfigurationError(
                f"cannot select {self.n_sel} antennas out of {self.n_rx}"
            )
        if self.symbol_energy < 0:
            raise ConfigurationError("symbol energy must be non-negative")
        if self.noise_variance < 0:
            raise ConfigurationError("noise variance must be non-negative")

    @property
    def bits_per_symbol(self) -> int:
        return int(math.log2(self.mod_order))

    @property
    def bits_per_index(self) -> int:
        return int(math.log2(self.n_sel))

    @property
    def eta(self) -> int:
        """Bits per channel use."""
        return spectral_efficiency(self.mod_order, self.n_sel)


@dataclass(frozen=True)
class RqsmFrame:
    """One transmission: the raw bits and their mapped content."""

    bits: np.ndarray
    l_re: int
    l_im: int
    symbol: complex
    symbol_index: int

    @property
    def x_re(self) -> float:
        return self.symbol.real

    @property
    def x_im(self) -> float:
        return self.symbol.imag


@dataclass(frozen=True)
class PhaseVector:
    """Per-reflector phase rotations, radians in [0, 2*pi)."""

    phases: np.ndarray

    def __post_init__(self) -> None:
        p = np.asarray(self.phases, dtype=np.float64)
        if np.any(p < 0) or np.any(p >= TWO_PI):
            raise ValueError("phases must lie in [0, 2*pi)")
        object.__setattr__(self, "phases", p)


@dataclass(frozen=True)
class ReceivedVector:
    """Complex baseband samples at the selected antennas."""

    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=np.complex128)
        if v.ndim != 1:
            raise ValueError("received vector must be 1-D")
        if not np.isfinite(v).all():
            raise ValueError("received vector contains non-finite entries")
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class Detection:
    """Detector decision plus the distance metric it attained."""

    l_re: int
    l_im: int
    symbol_index: int
    symbol: complex
    metric: float


def spectral_efficiency(mod_order: int, n_sel: int) -> int:
    """Bits per channel use: log2(M) + 2*log2(N_S)."""
    _require_pow2(mod_order, "modulation order")
    _require_pow2(n_sel, "selected antenna count")
    return int(math.log2(mod_order)) + 2 * int(math.log2(n_sel))


def _gray_to_index(code: int) -> int:
    """Invert the reflected Gray code: index whose Gray pattern is ``code``."""
    idx = code
    shift = 1
    while (code >> shift) > 0:
        idx ^= code >> shift
        shift += 1
    return idx


def _pam_levels(n_levels: int) -> np.ndarray:
    """Amplitudes -(n-1), .., -1, 1, .., n-1 ordered by Gray-coded bit value."""
    amps = np.empty(n_levels)
    for value in range(n_levels):
        amps[value] = 2 * _gray_to_index(value) - (n_levels - 1)
    return amps


def qam_constellation(mod_order: int) -> np.ndarray:
    """Unit-average-energy Gray-coded QAM table, indexed by bit pattern.

    Entry ``k`` is the point transmitted for the bit pattern whose MSB-first
    integer value is ``k``.  Square grid when log2(M) is even, a 4x2-style
    rectangle otherwise; in both cases the in-phase bits come first.
    """
    _require_pow2(mod_order, "modulation order")
    if mod_order < 4:
        raise ConfigurationError(f"modulation order must be >= 4, got {mod_order}")
    k = int(math.log2(mod_order))
    k_i = (k + 1) // 2
    k_q = k // 2
    amps_i = _pam_levels(1 << k_i)
    amps_q = _pam_levels(1 << k_q)
    points = np.empty(mod_order, dtype=np.complex128)
    for value in range(mod_order):
        v_i = value >> k_q
        v_q = value & ((1 << k_q) - 1)
        points[value] = amps_i[v_i] + 1j * amps_q[v_q]
    energy = np.mean(np.abs(points) ** 2)
    return points / np.sqrt(energy)


def qam_modulate(bits, mod_order: int) -> complex:
    """Map log2(M) bits (MSB first) to a constellation point."""
    table = qam_constellation(mod_order)
    k = int(math.log2(mod_order))
    bits = np.asarray(bits, dtype=np.int64)
    if bits.shape != (k,):
        raise ValueError(f"expected {k} bits, got shape {bits.shape}")
    return complex(table[bits_to_int(bits)])


def qam_demodulate(symbol: complex, mod_order: int) -> np.ndarray:
    """Bits of the constellation point nearest to ``symbol``."""
    table = qam_constellation(mod_order)
    index = int(np.argmin(np.abs(table - symbol)))
    return int_to_bits(index, int(math.log2(mod_order)))


def bits_to_int(bits) -> int:
    value = 0
    for b in np.asarray(bits, dtype=np.int64):
        value = (value << 1) | int(b)
    return value


def int_to_bits(value: int, width: int) -> np.ndarray:
    return np.array([(value >> (width - 1 - i)) & 1 for i in range(width)], dtype=np.int64)


def map_bits(bits, config: SystemConfig) -> RqsmFrame:
    """Split an eta-bit message into [symbol bits | I-antenna bits | Q-antenna bits].

    The antenna fields are the binary value plus one, so the all-zeros
    message targets position 1 on both branches.
    """
    bits = np.asarray(bits, dtype=np.int64)
    if bits.shape != (config.eta,):
        raise ValueError(f"expected {config.eta} bits, got shape {bits.shape}")
    if np.any((bits != 0) & (bits != 1)):
        raise ValueError("bits must be 0 or 1")
    ns = config.bits_per_symbol
    nq = config.bits_per_index
    symbol_index = bits_to_int(bits[:ns])
    l_re = bits_to_int(bits[ns : ns + nq]) + 1
    l_im = bits_to_int(bits[ns + nq :]) + 1
    table = qam_constellation(config.mod_order)
    return RqsmFrame(
        bits=bits,
        l_re=l_re,
        l_im=l_im,
        symbol=complex(table[symbol_index]),
        symbol_index=symbol_index,
    )


def demap_bits(l_re: int, l_im: int, symbol: complex, config: SystemConfig) -> np.ndarray:
    """Exact inverse of :func:`map_bits` composed with the QAM mapping."""
    nq = config.bits_per_index
    sym_bits = qam_demodulate(symbol, config.mod_order)
    re_bits = int_to_bits(l_re - 1, nq) if nq else np.empty(0, dtype=np.int64)
    im_bits = int_to_bits(l_im - 1, nq) if nq else np.empty(0, dtype=np.int64)
    return np.concatenate([sym_bits, re_bits, im_bits])


def ris_phases(sel: SelectedChannel, l_re: int, l_im: int) -> PhaseVector:
    """Phase rotations that cancel the channel phase toward the target antennas.

    Reflectors in the first half aim at subset position ``l_re``, the second
    half at ``l_im``: each applies the negative of its channel entry's phase
    angle, so the rotated gains toward the target are real and non-negative.
    """
    half = sel.n_reflectors // 2
    if not (1 <= l_re <= sel.n_sel and 1 <= l_im <= sel.n_sel):
        raise ValueError(
            f"target positions ({l_re}, {l_im}) out of range 1..{sel.n_sel}"
        )
    phases = np.empty(sel.n_reflectors)
    phases[:half] = np.mod(-np.angle(sel.matrix[:half, l_re - 1]), TWO_PI)
    phases[half:] = np.mod(-np.angle(sel.matrix[half:, l_im - 1]), TWO_PI)
    return PhaseVector(phases)


def branch_gains(sel: SelectedChannel, phases: PhaseVector) -> tuple[np.ndarray, np.ndarray]:
    """Effective per-antenna gains of the two reflector halves.

    Returns ``(g_re, g_im)`` of length N_S where ``g_re[l]`` sums the rotated
    first-half entries toward subset position ``l+1`` and ``g_im[l]`` the
    rotated second-half entries.
    """
    half = sel.n_reflectors // 2
    rot = np.exp(1j * phases.phases)
    g_re = rot[:half] @ sel.matrix[:half]
    g_im = rot[half:] @ sel.matrix[half:]
    return g_re, g_im


def transmit_receive(
    sel: SelectedChannel,
    frame: RqsmFrame,
    phases: PhaseVector,
    config: SystemConfig,
    rng: np.random.Generator,
) -> ReceivedVector:
    """Synthesize the faded, noisy signal at every selected antenna.

    ``y_l = sqrt(E_s) * (g_re[l] * x_re + j * g_im[l] * x_im) + n_l`` with
    ``n_l ~ CN(0, N_0)``.
    """
    g_re, g_im = branch_gains(sel, phases)
    clean = np.sqrt(config.symbol_energy) * (g_re * frame.x_re + 1j * g_im * frame.x_im)
    sigma = np.sqrt(config.noise_variance / 2.0)
    noise = sigma * (
        rng.standard_normal(sel.n_sel) + 1j * rng.standard_normal(sel.n_sel)
    )
    return ReceivedVector(clean + noise)


def detection_metric(
    y: ReceivedVector,
    sel: SelectedChannel,
    l_re: int,
    l_im: int,
    symbol: complex,
    config: SystemConfig,
) -> float:
    """Squared Euclidean distance between ``y`` and one candidate hypothesis."""
    phases = ris_phases(sel, l_re, l_im)
    g_re, g_im = branch_gains(sel, phases)
    hyp = np.sqrt(config.symbol_energy) * (g_re * symbol.real + 1j * g_im * symbol.imag)
    return float(np.sum(np.abs(y.values - hyp) ** 2))


def ml_detect(y: ReceivedVector, sel: SelectedChannel, config: SystemConfig) -> Detection:
    """Exhaustive joint search over all (l_re, l_im, symbol) candidates.

    The candidate hypothesizing targets (a, b) uses the phase vector the
    transmitter would have applied for those targets.  Candidates are
    enumerated with l_re outermost, then l_im, then the symbol index; the
    first candidate attaining the minimum metric wins ties.
    """
    if y.values.shape != (sel.n_sel,):
        raise ValueError(
            f"received vector length {y.values.shape[0]} != subset size {sel.n_sel}"
        )
    table = qam_constellation(config.mod_order)
    n_sel = sel.n_sel
    half = sel.n_reflectors // 2
    # gains[l, c]: rotated-branch gain at antenna l when the branch targets c.
    rot_re = np.exp(1j * np.mod(-np.angle(sel.matrix[:half]), TWO_PI))
    rot_im = np.exp(1j * np.mod(-np.angle(sel.matrix[half:]), TWO_PI))
    gains_re = np.einsum("sl,sc->lc", sel.matrix[:half], rot_re)
    gains_im = np.einsum("sl,sc->lc", sel.matrix[half:], rot_im)
    amp = np.sqrt(config.symbol_energy)
    # hyp[l, cr, ci, m] for every candidate triple.
    hyp = amp * (
        gains_re[:, :, None, None] * table.real[None, None, None, :]
        + 1j * gains_im[:, None, :, None] * table.imag[None, None, None, :]
    )
    metrics = np.sum(np.abs(y.values[:, None, None, None] - hyp) ** 2, axis=0)
    flat = int(np.argmin(metrics))
    cr, ci, m = np.unravel_index(flat, metrics.shape)
    l_re, l_im = int(cr) + 1, int(ci) + 1
    symbol = complex(table[m])
    # Report the metric through the canonical single-candidate formula so a
    # re-evaluation of the returned decision reproduces it exactly.
    return Detection(
        l_re=l_re,
        l_im=l_im,
        symbol_index=int(m),
        symbol=symbol,
        metric=detection_metric(y, sel, l_re, l_im, symbol, config),
    )


def _require_pow2(value: int, what: str) -> None:
    if value < 1 or (value & (value - 1)) != 0:
        raise ConfigurationError(f"{what} must be a power of two, got {value}")
