"""Command-line front end.

Exit codes (stable):
    0  success
    1  usage error (bad flag or flag value)
    2  data or format error (missing file, bad CSV, unknown channel, too little data)
    3  verification failure
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import formats, ingest, pipeline, synth
from .activation import DEFAULT_K_SIGMA
from .errors import FormatError, SensorFFTError, VerificationError
from .selection import DEFAULT_THRESHOLD

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_VERIFY = 3

log = logging.getLogger("sensorfft")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _threshold(text: str) -> float:
    value = float(text)
    if not 0.0 < value <= 1.0:
        raise argparse.ArgumentTypeError(f"must be in (0, 1], got {text}")
    return value


def _non_negative(text: str) -> float:
    value = float(text)
    if not value >= 0.0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return value


def _positive(text: str) -> float:
    value = float(text)
    if not value > 0.0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def _unsigned(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return value


def _pulse(text: str) -> tuple[float, float, float]:
    try:
        start, duration, magnitude = (float(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected START_H,DURATION_H,MAGNITUDE") from None
    if not duration > 0:
        raise argparse.ArgumentTypeError("pulse duration must be > 0")
    return start, duration, magnitude


def _add_input_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="ingest-format CSV file, or - for stdin")
    p.add_argument("--channel", default="co2_ppm", help="channel column (default: co2_ppm)")
    p.add_argument("--interval-s", type=_positive_int, default=900,
                   help="resampling grid step in seconds (default: 900)")


def _add_pipeline_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--threshold", type=_threshold, default=DEFAULT_THRESHOLD,
                   help=f"retained energy fraction in (0, 1] (default: {DEFAULT_THRESHOLD}; 0.9 is the stricter preset)")
    p.add_argument("--k-sigma", type=_non_negative, default=DEFAULT_K_SIGMA,
                   help=f"activation sensitivity, in std devs of |slope| (default: {DEFAULT_K_SIGMA})")
    p.add_argument("--verify", action="store_true", help="cross-check the transform against the naive DFT")
    p.add_argument("--out", help="output file (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sensorfft", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("synth", help="emit a synthetic CO2 day as ingest CSV")
    p.add_argument("--hours", type=_positive, default=24.0)
    p.add_argument("--interval-min", type=_positive, default=15.0)
    p.add_argument("--baseline", type=float, default=420.0)
    p.add_argument("--amplitude", type=float, default=80.0, help="diurnal amplitude, ppm")
    p.add_argument("--noise-std", type=_non_negative, default=5.0)
    p.add_argument("--seed", type=_unsigned, default=0)
    p.add_argument("--start", type=_unsigned, default=0, help="epoch seconds of the first sample")
    p.add_argument("--pulse", type=_pulse, action="append", metavar="START_H,DURATION_H,MAGNITUDE",
                   help="occupancy pulse; repeatable; replaces the default pulses")
    p.add_argument("--no-pulses", action="store_true", help="drop the default occupancy pulses")
    p.add_argument("--out", help="output file (default: stdout)")

    p = sub.add_parser("compress", help="select harmonics and write the result JSON")
    _add_input_flags(p)
    _add_pipeline_flags(p)
    p.add_argument("--reconstruction", help="also write timestamp,original,reconstructed CSV here")
    p.add_argument("--spectrum-out", help="also write the full spectrum JSON here")

    p = sub.add_parser("schedule", help="write the activation schedule JSON")
    _add_input_flags(p)
    _add_pipeline_flags(p)

    p = sub.add_parser("verify", help="check transform correctness on the input data")
    _add_input_flags(p)
    p.add_argument("--spectrum", help="stored spectrum JSON to audit instead of a fresh transform")
    return parser


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="")


def _load_series(args) -> tuple[list[ingest.SampleRecord], pipeline.PipelineConfig]:
    text = _read(args.input)
    records = ingest.parse_records(text)
    if args.channel not in ingest.available_channels(text):
        raise FormatError(f"channel {args.channel!r} not in {args.input} header")
    config = pipeline.PipelineConfig(
        channel=args.channel,
        interval=args.interval_s,
        threshold=getattr(args, "threshold", DEFAULT_THRESHOLD),
        k_sigma=getattr(args, "k_sigma", DEFAULT_K_SIGMA),
        verify=getattr(args, "verify", False),
    )
    return records, config


def cmd_synth(args) -> int:
    pulses = synth.DEFAULT_PULSES
    if args.no_pulses:
        pulses = ()
    if args.pulse:
        pulses = tuple(args.pulse)
    config = synth.SynthConfig(
        duration_hours=args.hours,
        interval_minutes=args.interval_min,
        baseline=args.baseline,
        diurnal_amplitude=args.amplitude,
        occupancy_pulses=pulses,
        noise_std=args.noise_std,
        seed=args.seed,
        start=args.start,
    )
    try:
        series = synth.generate(config)
    except SensorFFTError as exc:
        raise UsageError(str(exc)) from None
    log.info("generated %d samples", len(series))
    _write(args.out, ingest.series_to_csv(series))
    return EXIT_OK


def cmd_compress(args) -> int:
    records, config = _load_series(args)
    result = pipeline.run(records, config)
    log.info(
        "kept %d units (%d bins), energy fraction %.4f, rmse %.4g",
        result.metrics.retained_units, result.metrics.retained_bins,
        result.metrics.energy_fraction, result.metrics.rmse,
    )
    if args.reconstruction:
        _write(args.reconstruction, formats.reconstruction_csv(result.series, result.reconstructed))
    if args.spectrum_out:
        _write(args.spectrum_out, formats.dumps(formats.spectrum_to_dict(result.spectrum)))
    _write(args.out, formats.dumps(formats.result_to_dict(result)))
    return EXIT_OK


def cmd_schedule(args) -> int:
    records, config = _load_series(args)
    result = pipeline.run(records, config)
    log.info("%d activation(s)", len(result.schedule))
    _write(args.out, formats.dumps(formats.schedule_to_dict(result.schedule)))
    return EXIT_OK


def cmd_verify(args) -> int:
    records, config = _load_series(args)
    series = pipeline.prepare_series(records, config)
    spectrum = None
    if args.spectrum:
        spectrum = formats.spectrum_from_dict(formats.load_json(_read(args.spectrum)))
    checks = pipeline.transform_checks(series, spectrum)
    for check in checks:
        status = "PASS" if check.passed else "FAIL"
        print(f"{status} {check.name}: max deviation {check.deviation:.3e} (tolerance {check.tolerance:.3e})")
    return EXIT_OK if all(c.passed for c in checks) else EXIT_VERIFY


COMMANDS = {
    "synth": cmd_synth,
    "compress": cmd_compress,
    "schedule": cmd_schedule,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(message)s",
        stream=sys.stderr,
    )
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"sensorfft: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except VerificationError as exc:
        print(f"sensorfft: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except SensorFFTError as exc:
        where = f" [{exc.stage}]" if exc.stage else ""
        print(f"sensorfft: data error{where}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"sensorfft: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
