"""Command-line entry point: simulate, train, dataset, complexity, selfcheck.

A flat key-value config file (``key = value`` lines, ``#`` comments) may
supply any flag's default; explicit flags override the file.  The selector
and the seed are never defaulted silently -- they must come from a flag or
the config file.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import channel as ch
from . import complexity as cx
from . import dnn as dnn_mod
from . import phy
from . import sim
from .errors import ConfigurationError


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return 2
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ris-rqsm",
        description="Monte Carlo link simulator for RIS-assisted receive "
        "quadrature spatial modulation with antenna selection",
    )
    sub = parser.add_subparsers(dest="command")
    parser.set_defaults(command=None)

    p_sim = sub.add_parser("simulate", help="run a BER sweep and write CSV rows")
    p_sim.add_argument("--config", help="key=value file supplying flag defaults")
    p_sim.add_argument("--selector", choices=sim.SELECTORS)
    p_sim.add_argument("--M", type=int, help="QAM modulation order")
    p_sim.add_argument("--N", type=int, help="number of reflecting elements")
    p_sim.add_argument("--NR", type=int, help="candidate receive antennas")
    p_sim.add_argument("--NS", type=int, help="selected receive antennas")
    p_sim.add_argument("--snr", help="SNR grid in dB: start:step:stop or comma list")
    p_sim.add_argument("--seed", type=int)
    p_sim.add_argument("--Es", type=float, default=None, help="symbol energy (default 1)")
    p_sim.add_argument("--max-frames", type=int, default=None)
    p_sim.add_argument("--min-bit-errors", type=int, default=None)
    p_sim.add_argument("--block-frames", type=int, default=None)
    p_sim.add_argument("--model", help="checkpoint path (required for selector dnn)")
    p_sim.add_argument("--no-timing", action="store_true",
                       help="write wall_time_s as 0.000 for byte-reproducible output")
    p_sim.add_argument("-o", "--output", help="CSV output path (default: stdout)")
    p_sim.set_defaults(func=_cmd_simulate)

    p_train = sub.add_parser("train", help="generate a dataset and train the selector")
    p_train.add_argument("--config", help="key=value file supplying flag defaults")
    p_train.add_argument("--N", type=int)
    p_train.add_argument("--NR", type=int)
    p_train.add_argument("--NS", type=int)
    p_train.add_argument("--samples", type=int, default=None)
    p_train.add_argument("--epochs", type=int, default=None)
    p_train.add_argument("--max-steps", type=int, default=None)
    p_train.add_argument("--minibatch", type=int, default=None)
    p_train.add_argument("--lr", type=float, default=None)
    p_train.add_argument("--val-fraction", type=float, default=None)
    p_train.add_argument("--hidden", default=None,
                         help="hidden layer widths, e.g. 256x256x256x256")
    p_train.add_argument("--augment", action="store_true", default=None,
                         help="train on antenna-permuted, phase-rerolled views "
                              "of each minibatch")
    p_train.add_argument("--average-weights", action="store_true", default=None,
                         help="return the running average of the Adam iterates")
    p_train.add_argument("--seed", type=int)
    p_train.add_argument("-o", "--output", required=True, help="checkpoint path (.npz)")
    p_train.set_defaults(func=_cmd_train)

    p_data = sub.add_parser("dataset", help="generate a labeled channel dataset")
    p_data.add_argument("--N", type=int, required=True)
    p_data.add_argument("--NR", type=int, required=True)
    p_data.add_argument("--NS", type=int, required=True)
    p_data.add_argument("--samples", type=int, required=True)
    p_data.add_argument("--val-fraction", type=float, default=0.10)
    p_data.add_argument("--seed", type=int)
    p_data.add_argument("-o", "--output", required=True, help="dataset path (.npz)")
    p_data.set_defaults(func=_cmd_dataset)

    p_cx = sub.add_parser("complexity", help="emit the operation-count table as CSV")
    p_cx.add_argument("--cases", help="CSV of case definitions (default: built-in three)")
    p_cx.add_argument("-o", "--output", help="CSV output path (default: stdout)")
    p_cx.set_defaults(func=_cmd_complexity)

    p_check = sub.add_parser("selfcheck", help="run the quick invariant suite")
    p_check.set_defaults(func=_cmd_selfcheck)

    return parser


def _read_config_file(path) -> dict:
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigurationError(f"{path}:{lineno}: expected key = value")
            key, _, val = line.partition("=")
            values[key.strip()] = val.strip()
    return values


def _merge(args, key: str, file_values: dict, file_key: str, cast, default=None):
    """Explicit flag wins, then the config file, then the declared default."""
    flag = getattr(args, key, None)
    if flag is not None:
        return flag
    if file_key in file_values:
        return cast(file_values[file_key])
    return default


def parse_snr_grid(text: str) -> tuple[float, ...]:
    """'start:step:stop' (inclusive), a comma list, or a single value."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigurationError(f"bad SNR range {text!r}, expected start:step:stop")
        start, step, stop = (float(p) for p in parts)
        if step <= 0:
            raise ConfigurationError("SNR range step must be positive")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        if count < 1:
            raise ConfigurationError(f"SNR range {text!r} is empty")
        return tuple(start + i * step for i in range(count))
    return tuple(float(p) for p in text.split(",") if p.strip())


def _cmd_simulate(args) -> int:
    file_values = _read_config_file(args.config) if args.config else {}
    selector = _merge(args, "selector", file_values, "selector", str)
    seed = _merge(args, "seed", file_values, "seed", int)
    if selector is None:
        raise ConfigurationError("selector must be given explicitly (flag or config file)")
    if seed is None:
        raise ConfigurationError("seed must be given explicitly (flag or config file)")
    snr_text = _merge(args, "snr", file_values, "snr", str)
    if snr_text is None:
        raise ConfigurationError("an SNR grid is required (--snr or config file)")
    config = sim.SweepConfig(
        mod_order=_req(_merge(args, "M", file_values, "M", int), "M"),
        n_reflectors=_req(_merge(args, "N", file_values, "N", int), "N"),
        n_rx=_req(_merge(args, "NR", file_values, "NR", int), "NR"),
        n_sel=_req(_merge(args, "NS", file_values, "NS", int), "NS"),
        snr_grid_db=parse_snr_grid(str(snr_text)),
        selector=selector,
        seed=seed,
        symbol_energy=_merge(args, "Es", file_values, "Es", float, 1.0),
        max_frames=_merge(args, "max_frames", file_values, "max_frames", int, 10_000_000),
        min_bit_errors=_merge(args, "min_bit_errors", file_values, "min_bit_errors", int, 200),
        model_path=_merge(args, "model", file_values, "model", str),
        block_frames=_merge(args, "block_frames", file_values, "block_frames", int,
                            sim.DEFAULT_BLOCK_FRAMES),
    )
    out = _merge(args, "output", file_values, "output", str)
    records = sim.run_sweep(config, csv_path=out, measure_time=not args.no_timing)
    if out is None:
        print(sim.CSV_HEADER)
        for row in sim.records_to_csv_rows(records):
            print(row)
    else:
        print(f"wrote {len(records)} rows to {out}")
    return 0


def _req(value, name: str):
    if value is None:
        raise ConfigurationError(f"{name} is required (flag or config file)")
    return value


def _cmd_train(args) -> int:
    file_values = _read_config_file(args.config) if args.config else {}
    seed = _merge(args, "seed", file_values, "seed", int)
    if seed is None:
        raise ConfigurationError("seed must be given explicitly (flag or config file)")
    n = _req(_merge(args, "N", file_values, "N", int), "N")
    n_rx = _req(_merge(args, "NR", file_values, "NR", int), "NR")
    n_sel = _req(_merge(args, "NS", file_values, "NS", int), "NS")
    hidden_text = _merge(args, "hidden", file_values, "hidden", str)
    hidden = (
        tuple(int(s) for s in hidden_text.split("x"))
        if hidden_text
        else dnn_mod.DEFAULT_HIDDEN_LAYERS
    )
    truthy = lambda v: v.lower() in ("1", "true", "yes")
    augment = _merge(args, "augment", file_values, "augment", truthy, False)
    average = _merge(args, "average_weights", file_values, "average_weights",
                     truthy, False)
    config = dnn_mod.TrainConfig(
        n_samples=_merge(args, "samples", file_values, "samples", int, 1_000_000),
        validation_fraction=_merge(args, "val_fraction", file_values, "val_fraction",
                                   float, 0.10),
        minibatch=_merge(args, "minibatch", file_values, "minibatch", int, 256),
        learning_rate=_merge(args, "lr", file_values, "lr", float, 5e-4),
        epochs=_merge(args, "epochs", file_values, "epochs", int, 400),
        max_steps=_merge(args, "max_steps", file_values, "max_steps", int),
        hidden_layers=hidden,
        augment_permutations=bool(augment),
        augment_phases=bool(augment),
        average_weights=bool(average),
        seed=seed,
    )
    rng = np.random.default_rng(seed)
    print(f"generating {config.n_samples} samples (N={n}, N_R={n_rx}, N_S={n_sel})")
    dataset = dnn_mod.generate_dataset(
        config.n_samples, n, n_rx, n_sel, rng,
        validation_fraction=config.validation_fraction,
    )
    print(f"training: {len(dataset.train_idx)} train / {len(dataset.val_idx)} validation rows")
    result = dnn_mod.train(dataset, config)
    dnn_mod.save_checkpoint(args.output, result.params)
    last = {k: v[-1] for k, v in result.history.items()}
    print(
        f"done after {len(result.history['val_acc'])} epochs: "
        f"train acc {last['train_acc']:.4f}, val acc {last['val_acc']:.4f}"
    )
    print(f"checkpoint written to {args.output}")
    return 0


def _cmd_dataset(args) -> int:
    if args.seed is None:
        raise ConfigurationError("seed must be given explicitly")
    rng = np.random.default_rng(args.seed)
    dataset = dnn_mod.generate_dataset(
        args.samples, args.N, args.NR, args.NS, rng,
        validation_fraction=args.val_fraction,
    )
    np.savez(
        args.output,
        features=dataset.features,
        labels=dataset.labels,
        train_idx=dataset.train_idx,
        val_idx=dataset.val_idx,
        dims=np.array([args.N, args.NR, args.NS]),
        seed=np.array(args.seed),
    )
    print(f"wrote {args.samples} samples to {args.output}")
    return 0


def _cmd_complexity(args) -> int:
    cases = cx.read_cases_csv(args.cases) if args.cases else cx.DEFAULT_CASES
    rows = cx.complexity_table(cases)
    if args.output:
        cx.write_complexity_csv(args.output, cases)
        print(f"wrote {len(rows)} cases to {args.output}")
    else:
        print(",".join(cx.CSV_HEADER))
        for row in rows:
            print(",".join(str(row[col]) for col in cx.CSV_HEADER))
    return 0


def _cmd_selfcheck(args) -> int:
    failures = 0
    for name, check in _SELFCHECKS:
        try:
            check()
            print(f"PASS {name}")
        except Exception as exc:
            failures += 1
            print(f"FAIL {name}: {exc}")
    if failures:
        print(f"{failures} check(s) failed")
        return 1
    print("all checks passed")
    return 0


def _check_complexity_table() -> None:
    rows = cx.complexity_table()
    got = [(r["coas_rms"], r["dnn_rms"]) for r in rows]
    expected = [(128, 296), (256, 6336), (2048, 476672)]
    if got != expected:
        raise AssertionError(f"operation counts {got} != {expected}")


def _check_label_bijection() -> None:
    for n_rx, n_sel in ((4, 2), (6, 2), (8, 4)):
        seen = set()
        for subset in ch.all_subsets(n_rx, n_sel):
            label = ch.subset_label(subset, n_rx, n_sel)
            if ch.label_to_subset(label, n_rx, n_sel) != subset:
                raise AssertionError(f"round trip failed for {subset}")
            seen.add(label)
        if seen != set(range(1, ch.n_subsets(n_rx, n_sel) + 1)):
            raise AssertionError(f"labels not a bijection for ({n_rx},{n_sel})")


def _check_noiseless_loopback() -> None:
    config = phy.SystemConfig(mod_order=4, n_reflectors=4, n_rx=4, n_sel=2,
                              noise_variance=0.0)
    rng = np.random.default_rng(11)
    h = ch.sample_channel(4, 4, rng)
    sel = ch.coas_select(h, 2)
    for message in range(2**config.eta):
        bits = phy.int_to_bits(message, config.eta)
        frame = phy.map_bits(bits, config)
        phases = phy.ris_phases(sel, frame.l_re, frame.l_im)
        y = phy.transmit_receive(sel, frame, phases, config, rng)
        det = phy.ml_detect(y, sel, config)
        out = phy.demap_bits(det.l_re, det.l_im, det.symbol, config)
        if not np.array_equal(out, bits):
            raise AssertionError(f"message {message} not recovered")


def _check_gradients() -> None:
    # Redraw (deterministically) until every pre-activation clears the ReLU
    # kink by more than the finite-difference step can reach.
    for attempt in range(50):
        rng = np.random.default_rng(5 + 1000 * attempt)
        params = dnn_mod.init_params((4, 3, 3, 2), rng)
        x = rng.standard_normal((6, 4))
        y = rng.integers(1, 3, size=6)
        margin = np.inf
        h = x
        for w, b in zip(params.weights[:-1], params.biases[:-1]):
            z = h @ w + b
            margin = min(margin, float(np.min(np.abs(z))))
            h = np.maximum(z, 0.0)
        if margin > 1e-4:
            break
    _, grads_w, grads_b = dnn_mod.loss_and_gradients(params, x, y)
    step = 1e-6
    for tensors, grads in ((params.weights, grads_w), (params.biases, grads_b)):
        for t, g in zip(tensors, grads):
            it = np.nditer(t, flags=["multi_index"])
            for _ in it:
                i = it.multi_index
                orig = t[i]
                t[i] = orig + step
                up, _, _ = dnn_mod.loss_and_gradients(params, x, y)
                t[i] = orig - step
                down, _, _ = dnn_mod.loss_and_gradients(params, x, y)
                t[i] = orig
                fd = (up - down) / (2 * step)
                if abs(fd - g[i]) > 1e-5 * max(abs(fd) + abs(g[i]), 1e-3):
                    raise AssertionError(f"gradient mismatch at {i}: {g[i]} vs {fd}")


def _check_channel_moments() -> None:
    rng = np.random.default_rng(7)
    h = ch.sample_channel(100, 2000, rng).entries
    power = float(np.mean(np.abs(h) ** 2))
    if abs(power - 1.0) > 0.02:
        raise AssertionError(f"mean power {power} deviates from 1")


def _check_selection_oracle() -> None:
    from itertools import combinations

    rng = np.random.default_rng(13)
    for _ in range(300):
        n_rx = int(rng.integers(2, 9))
        n_sel = int(rng.choice([s for s in (1, 2, 4, 8) if s <= n_rx]))
        h = ch.sample_channel(4, n_rx, rng)
        got = ch.coas_select(h, n_sel).subset.indices
        norms = np.sum(np.abs(h.entries) ** 2, axis=0)
        best = max(
            combinations(range(1, n_rx + 1), n_sel),
            key=lambda c: sum(norms[i - 1] for i in c),
        )
        if got != best:
            raise AssertionError(f"selection {got} != exhaustive {best}")


_SELFCHECKS = (
    ("complexity-table", _check_complexity_table),
    ("subset-labeling", _check_label_bijection),
    ("noiseless-loopback", _check_noiseless_loopback),
    ("gradient-finite-difference", _check_gradients),
    ("channel-moments", _check_channel_moments),
    ("selection-oracle", _check_selection_oracle),
)


if __name__ == "__main__":
    sys.exit(main())
