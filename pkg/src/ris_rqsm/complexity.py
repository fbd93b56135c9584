"""Real-multiplication counts for the two antenna-selection strategies.

Only multiplications are counted: additions, activations and the softmax
exponentials are excluded.  One complex multiplication and one squared
magnitude each cost 4 real multiplications, which makes the norm-based
selection cost 4*N*N_R in total, while the network inference cost is the
usual chain of layer products.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

from .channel import feature_dim, n_subsets

__all__ = [
    "ComplexityCase",
    "DEFAULT_CASES",
    "dnn_rm_count",
    "coas_rm_count",
    "complexity_table",
    "write_complexity_csv",
    "CSV_HEADER",
]

CSV_HEADER = ["case", "L", "layer_sizes", "N", "N_R", "N_S", "coas_rms", "dnn_rms"]


@dataclass(frozen=True)
class ComplexityCase:
    """One benchmark configuration with both operation counts."""

    name: str
    layer_sizes: tuple[int, ...]
    n_reflectors: int
    n_rx: int
    n_sel: int

    @property
    def n_layers(self) -> int:
        return len(self.layer_sizes)

    @property
    def coas_rms(self) -> int:
        return coas_rm_count(self.n_reflectors, self.n_rx)

    @property
    def dnn_rms(self) -> int:
        return dnn_rm_count(self.n_reflectors, self.n_rx, self.n_sel, self.layer_sizes)


DEFAULT_CASES = (
    ComplexityCase("Case 1", (4, 4), 8, 4, 2),
    ComplexityCase("Case 2", (32, 32, 32), 16, 4, 2),
    ComplexityCase("Case 3", (256, 256, 256, 256), 64, 8, 4),
)


def dnn_rm_count(n_reflectors: int, n_rx: int, n_sel: int, layer_sizes) -> int:
    """Multiplications for one inference pass of the selector network.

    input*first + output*last + the hidden-to-hidden chain, with input
    dimension 2*N*N_R and one output neuron per antenna subset.
    """
    sizes = [int(s) for s in layer_sizes]
    if not sizes:
        raise ValueError("need at least one hidden layer")
    if any(s < 1 for s in sizes):
        raise ValueError(f"layer sizes must be positive, got {sizes}")
    p = feature_dim(n_reflectors, n_rx)
    t = n_subsets(n_rx, n_sel)
    chain = sum(a * b for a, b in zip(sizes, sizes[1:]))
    return p * sizes[0] + t * sizes[-1] + chain


def coas_rm_count(n_reflectors: int, n_rx: int) -> int:
    """Multiplications for ranking all antennas by squared column norm."""
    if n_reflectors < 1 or n_rx < 1:
        raise ValueError("reflector and antenna counts must be positive")
    return 4 * n_reflectors * n_rx


def complexity_table(cases=DEFAULT_CASES) -> list[dict]:
    """Evaluate both counts for every case, as rows matching ``CSV_HEADER``."""
    rows = []
    for case in cases:
        rows.append(
            {
                "case": case.name,
                "L": case.n_layers,
                "layer_sizes": "x".join(str(s) for s in case.layer_sizes),
                "N": case.n_reflectors,
                "N_R": case.n_rx,
                "N_S": case.n_sel,
                "coas_rms": case.coas_rms,
                "dnn_rms": case.dnn_rms,
            }
        )
    return rows


def write_complexity_csv(path, cases=DEFAULT_CASES) -> list[dict]:
    rows = complexity_table(cases)
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_HEADER)
        writer.writeheader()
        writer.writerows(rows)
    return rows


def read_cases_csv(path) -> tuple[ComplexityCase, ...]:
    """Load case definitions (columns: case, layer_sizes, N, N_R, N_S)."""
    cases = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            sizes = tuple(int(s) for s in row["layer_sizes"].split("x"))
            cases.append(
                ComplexityCase(
                    name=row["case"],
                    layer_sizes=sizes,
                    n_reflectors=int(row["N"]),
                    n_rx=int(row["N_R"]),
                    n_sel=int(row["N_S"]),
                )
            )
    return tuple(cases)
