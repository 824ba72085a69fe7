"""Command-line front end.

    python main.py compare --input fixtures/bank_waiting_times.txt --format json
    python main.py fit --input data.txt --alpha-mode profile
    python main.py curves --params alpha=1,theta=1 --grid 0.01:10:200 --output curves.csv
    python main.py ttt --input data.txt --params alpha=0.0143,theta=0.2032
    python main.py sample --params alpha=1,theta=1 --n 10000 --seed 7 --output draws.txt
    python main.py entropy --params alpha=1,theta=1 --order 2

Exit codes: 0 success, 1 usage/parse/data or file error, 2 at least one model fit failed
(the table is still written).
"""

import sys
import argparse

from errors import ConfigError, SsdLabError
from job_runner import (COMMANDS, DEFAULT_GRID, DEFAULT_SAMPLE_SIZE, DEFAULT_SEED,
                        DEFAULT_ENTROPY_ORDER, EXIT_USAGE, OUTPUT_FORMATS, RunConfig, run)
from fit import DEFAULT_ALPHA_MAX
from gof import DEFAULT_MAX_PARALLEL_FITS, DEFAULT_MODELS
from ssd import SsdParams
from unified_logger import LogLevel, get_logger


def parse_params(text):
    """'alpha=1.5,theta=0.8' -> SsdParams."""
    values = {}
    for part in text.split(','):
        key, sep, value = part.partition('=')
        if not sep:
            raise ConfigError(f"--params entries must look like name=value, got {part!r}")
        try:
            values[key.strip().lower()] = float(value)
        except ValueError:
            raise ConfigError(f"--params value for {key.strip()!r} is not a number: {value!r}") from None
    if set(values) != {'alpha', 'theta'}:
        raise ConfigError(f"--params needs exactly alpha and theta, got {sorted(values)}")
    try:
        return SsdParams(values['alpha'], values['theta'])
    except SsdLabError as e:
        raise ConfigError(f"--params: {e}") from e


def parse_grid(text):
    """'min:max:points' -> (float, float, int)."""
    parts = text.split(':')
    if len(parts) != 3:
        raise ConfigError(f"--grid must be min:max:points, got {text!r}")
    try:
        x_min, x_max, points = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError(f"--grid must be min:max:points with numeric parts, got {text!r}") from None
    return x_min, x_max, points


def parse_models(text):
    names = tuple(name.strip().lower() for name in text.split(',') if name.strip())
    if not names:
        raise ConfigError("--models needs at least one model name")
    return names


def build_parser():
    parser = argparse.ArgumentParser(
        prog='ssdlab',
        description='SSD lifetime distribution: fitting, model comparison and plot data.')
    parser.add_argument('command', choices=COMMANDS)
    parser.add_argument('--input', dest='input_path', help='dataset file (text/CSV or .xlsx)')
    parser.add_argument('--output', dest='output_path', help='output file (stdout when omitted)')
    parser.add_argument('--format', dest='output_format', choices=OUTPUT_FORMATS, default='table')
    parser.add_argument('--models', default=','.join(DEFAULT_MODELS),
                        help='comma-separated model names (default: all seven)')
    parser.add_argument('--alpha-mode', choices=('profile', 'continuous'), default='continuous')
    parser.add_argument('--alpha-max', type=int, default=DEFAULT_ALPHA_MAX)
    parser.add_argument('--seed', type=int, default=DEFAULT_SEED)
    parser.add_argument('--grid', default=':'.join(str(v) for v in DEFAULT_GRID),
                        help='x grid for curves as min:max:points')
    parser.add_argument('--params', help='SSD parameters as alpha=..,theta=..')
    parser.add_argument('--n', type=int, default=DEFAULT_SAMPLE_SIZE, help='sample size')
    parser.add_argument('--order', type=float, default=DEFAULT_ENTROPY_ORDER, help='Renyi entropy order')
    parser.add_argument('--max-parallel', type=int, default=DEFAULT_MAX_PARALLEL_FITS,
                        help='maximum concurrent model fits')
    parser.add_argument('--label', help='dataset label (default: file name)')
    return parser


def config_from_args(args) -> RunConfig:
    return RunConfig(
        command=args.command,
        input_path=args.input_path,
        output_path=args.output_path,
        output_format=args.output_format,
        models=parse_models(args.models),
        alpha_mode=args.alpha_mode,
        alpha_max=args.alpha_max,
        seed=args.seed,
        grid=parse_grid(args.grid),
        params=parse_params(args.params) if args.params else None,
        n=args.n,
        order=args.order,
        max_parallel=args.max_parallel,
        label=args.label,
    )


def main(argv=None):
    """Run one command; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors; 2 is reserved for partial fit failure.
        return EXIT_USAGE if e.code else 0

    try:
        outcome = run(config_from_args(args))
    except (SsdLabError, OSError) as e:
        # run() starts the command's logging session; report the failure there.
        get_logger().log(LogLevel.ERROR, f"{args.command} failed: {e}", source_file="main.py", function_name="main")
        return EXIT_USAGE

    if not args.output_path:
        sys.stdout.write(outcome.text)
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
