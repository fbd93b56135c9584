"""Rayleigh channel generation, receive-antenna subset selection and labeling.

The channel between the reflecting surface and the candidate receive
antennas is an N x N_R matrix of i.i.d. zero-mean unit-variance complex
Gaussian gains.  A selector keeps N_S of the N_R columns; the kept subset
is identified by its 1-based lexicographic rank, which doubles as the
class label for the learned selector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import ConfigurationError

__all__ = [
    "ChannelMatrix",
    "AntennaSubset",
    "SelectedChannel",
    "sample_channel",
    "coas_select",
    "subset_label",
    "label_to_subset",
    "feature_vector",
    "feature_dim",
    "n_subsets",
]


@dataclass(frozen=True)
class ChannelMatrix:
    """Complex gains from each reflecting element to each candidate antenna.

    ``entries[s, r]`` is the gain from reflector ``s`` (0-based row) to
    receive antenna ``r`` (0-based column).  Sampling and selection require
    an even row count so the reflector array splits into equal in-phase and
    quadrature halves; the bare container also admits odd shapes for
    vectorization-only uses.
    """

    entries: np.ndarray

    def __post_init__(self) -> None:
        h = np.asarray(self.entries, dtype=np.complex128)
        if h.ndim != 2:
            raise ValueError(f"channel matrix must be 2-D, got shape {h.shape}")
        if h.shape[0] < 1 or h.shape[1] < 1:
            raise ConfigurationError("need at least one reflector and one antenna")
        if not np.isfinite(h).all():
            raise ValueError("channel matrix contains non-finite entries")
        object.__setattr__(self, "entries", h)

    @property
    def n_reflectors(self) -> int:
        return self.entries.shape[0]

    @property
    def n_rx(self) -> int:
        return self.entries.shape[1]


@dataclass(frozen=True)
class AntennaSubset:
    """A sorted choice of receive antennas, 1-based indices into 1..n_rx."""

    indices: tuple[int, ...]
    n_rx: int

    def __post_init__(self) -> None:
        idx = tuple(int(i) for i in self.indices)
        if len(idx) == 0:
            raise ValueError("subset must not be empty")
        if any(i < 1 or i > self.n_rx for i in idx):
            raise ValueError(f"indices {idx} out of range 1..{self.n_rx}")
        if any(a >= b for a, b in zip(idx, idx[1:])):
            raise ValueError(f"indices {idx} must be strictly increasing")
        object.__setattr__(self, "indices", idx)

    @property
    def n_sel(self) -> int:
        return len(self.indices)

    @property
    def label(self) -> int:
        """1-based lexicographic rank among all same-size sorted subsets."""
        return subset_label(self.indices, self.n_rx, self.n_sel)


@dataclass(frozen=True)
class SelectedChannel:
    """The kept N x N_S sub-matrix together with the subset that produced it.

    The first N/2 rows feed the in-phase branch, the remaining rows the
    quadrature branch.
    """

    matrix: np.ndarray
    subset: AntennaSubset

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[1] != self.subset.n_sel:
            raise ValueError(
                f"matrix shape {m.shape} inconsistent with subset of size {self.subset.n_sel}"
            )
        if m.shape[0] % 2 != 0:
            raise ConfigurationError("selected channel needs an even reflector count")
        object.__setattr__(self, "matrix", m)

    @property
    def n_reflectors(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_sel(self) -> int:
        return self.matrix.shape[1]

    @property
    def i_part(self) -> np.ndarray:
        """Rows serving the in-phase branch (first half of the reflectors)."""
        return self.matrix[: self.n_reflectors // 2]

    @property
    def q_part(self) -> np.ndarray:
        """Rows serving the quadrature branch (second half of the reflectors)."""
        return self.matrix[self.n_reflectors // 2 :]


def sample_channel(n_reflectors: int, n_rx: int, rng: np.random.Generator) -> ChannelMatrix:
    """Draw an N x N_R matrix of i.i.d. CN(0, 1) gains.

    Real and imaginary parts are independent N(0, 1/2), so the per-entry
    power E[|h|^2] is 1.  Deterministic for a given generator state.
    """
    if n_reflectors % 2 != 0 or n_reflectors < 2:
        raise ConfigurationError(
            f"reflector count must be even and positive, got {n_reflectors}"
        )
    if n_rx < 1:
        raise ConfigurationError(f"need at least one receive antenna, got {n_rx}")
    shape = (n_reflectors, n_rx)
    h = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
    return ChannelMatrix(h)


def coas_select(channel: ChannelMatrix, n_sel: int) -> SelectedChannel:
    """Keep the ``n_sel`` antennas whose channel columns have the largest norms.

    Equal norms are resolved in favor of the lower antenna index.  The
    returned subset is reported in ascending index order regardless of the
    norm ranking, because the class labels are defined on sorted sets.
    """
    _require_pow2(n_sel, "selected antenna count")
    if n_sel > channel.n_rx:
        raise ConfigurationError(
            f"cannot select {n_sel} antennas out of {channel.n_rx}"
        )
    norms = np.sum(np.abs(channel.entries) ** 2, axis=0)
    # Stable sort on the negated norms keeps lower indices first on ties.
    order = np.argsort(-norms, kind="stable")[:n_sel]
    kept = np.sort(order)
    subset = AntennaSubset(tuple(int(i) + 1 for i in kept), channel.n_rx)
    return SelectedChannel(channel.entries[:, kept], subset)


def subset_label(indices, n_rx: int, n_sel: int) -> int:
    """1-based lexicographic rank of a sorted antenna subset.

    The subsets of size ``n_sel`` drawn from ``1..n_rx`` are enumerated in
    lexicographic order; {1, 2} maps to 1 and {n_rx-n_sel+1, .., n_rx} maps
    to C(n_rx, n_sel).
    """
    idx = [int(i) for i in indices]
    if len(idx) != n_sel:
        raise ValueError(f"expected {n_sel} indices, got {len(idx)}")
    if any(i < 1 or i > n_rx for i in idx):
        raise ValueError(f"indices {idx} out of range 1..{n_rx}")
    if any(a >= b for a, b in zip(idx, idx[1:])):
        raise ValueError(f"indices {idx} must be strictly increasing")
    rank = 0
    prev = 0
    for pos, c in enumerate(idx):
        for skipped in range(prev + 1, c):
            rank += math.comb(n_rx - skipped, n_sel - pos - 1)
        prev = c
    return rank + 1


def label_to_subset(label: int, n_rx: int, n_sel: int) -> tuple[int, ...]:
    """Inverse of :func:`subset_label`: recover the sorted index tuple."""
    total = math.comb(n_rx, n_sel)
    if not 1 <= label <= total:
        raise ValueError(f"label {label} out of range 1..{total}")
    remaining = label - 1
    indices: list[int] = []
    candidate = 1
    for pos in range(n_sel):
        while True:
            block = math.comb(n_rx - candidate, n_sel - pos - 1)
            if remaining < block:
                break
            remaining -= block
            candidate += 1
        indices.append(candidate)
        candidate += 1
    return tuple(indices)


def feature_vector(channel: ChannelMatrix) -> np.ndarray:
    """Stack the channel matrix column-by-column, real parts then imaginary.

    The full matrix is vectorized (not just the selected columns): the
    selector has to see every candidate antenna to rank them.
    """
    vec = channel.entries.flatten(order="F")
    return np.concatenate([vec.real, vec.imag])


def feature_dim(n_reflectors: int, n_rx: int) -> int:
    """Length of the real-valued input seen by the learned selector."""
    return 2 * n_reflectors * n_rx


def n_subsets(n_rx: int, n_sel: int) -> int:
    """Number of distinct antenna subsets, i.e. the classifier output size."""
    return math.comb(n_rx, n_sel)


def all_subsets(n_rx: int, n_sel: int) -> list[tuple[int, ...]]:
    """All sorted subsets in label order (label = list position + 1)."""
    return [tuple(c) for c in combinations(range(1, n_rx + 1), n_sel)]


def _require_pow2(value: int, what: str) -> None:
    if value < 1 or (value & (value - 1)) != 0:
        raise ConfigurationError(f"{what} must be a power of two, got {value}")
