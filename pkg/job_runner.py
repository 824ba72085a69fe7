"""Non-interactive orchestration of every CLI command.

Each run_* function takes a validated RunConfig, does the work, writes the
output file when one is configured and returns a RunOutcome carrying the
rendered text, a small summary and the exit code. Nothing here calls
sys.exit(); errors propagate to main.py.

Contract: one command at a time per process (the unified logger is a global
singleton). Numbers are written with repr(), the shortest text that reads
back to the same double.
"""

import io
import os
import json
import math
from dataclasses import dataclass, field
from datetime import datetime

import numpy as np
import pandas as pd

import baselines
import fit
import gof
import observability
import ssd
from data_loader import Dataset, ingest
from errors import ConfigError, FitError
from report_schema import validate_report
from unified_logger import LogLevel, get_logger

COMMANDS = ('fit', 'compare', 'curves', 'ttt', 'sample', 'entropy')
OUTPUT_FORMATS = ('table', 'csv', 'json')

DEFAULT_GRID = (0.01, 10.0, 200)
DEFAULT_SAMPLE_SIZE = 1000
DEFAULT_SEED = 7
DEFAULT_ENTROPY_ORDER = 2.0

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARTIAL_FAILURE = 2

# Commands that read a dataset / need --params.
_NEEDS_INPUT = ('fit', 'compare', 'ttt')
_NEEDS_PARAMS = ('curves', 'sample', 'entropy')


@dataclass
class RunConfig:
    """Everything one CLI invocation needs."""

    command: str
    input_path: str | None = None
    output_path: str | None = None
    output_format: str = 'table'
    models: tuple = gof.DEFAULT_MODELS
    alpha_mode: str = 'continuous'
    alpha_max: int = fit.DEFAULT_ALPHA_MAX
    seed: int = DEFAULT_SEED
    grid: tuple = DEFAULT_GRID
    params: ssd.SsdParams | None = None
    n: int = DEFAULT_SAMPLE_SIZE
    order: float = DEFAULT_ENTROPY_ORDER
    max_parallel: int = gof.DEFAULT_MAX_PARALLEL_FITS
    label: str | None = None

    def validate(self):
        """Raise ConfigError for anything the commands cannot run with."""
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}; choose from {', '.join(COMMANDS)}")
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigError(f"unknown format {self.output_format!r}; choose from {', '.join(OUTPUT_FORMATS)}")
        if self.alpha_mode not in baselines.ALPHA_MODES:
            raise ConfigError(f"alpha mode must be one of {baselines.ALPHA_MODES}, got {self.alpha_mode!r}")
        if int(self.alpha_max) != self.alpha_max or self.alpha_max < 0:
            raise ConfigError(f"alpha max must be an integer >= 0, got {self.alpha_max}")
        if not self.models:
            raise ConfigError("at least one model is required")
        for name in self.models:
            if name not in baselines.MODELS:
                raise ConfigError(f"unknown model {name!r}; choose from {', '.join(baselines.MODEL_NAMES)}")
        x_min, x_max, points = self.grid
        if int(points) != points or points < 2:
            raise ConfigError(f"grid needs at least 2 points, got {points}")
        if not 0 < x_min < x_max or not math.isfinite(x_max):
            raise ConfigError(f"grid needs 0 < x_min < x_max, got {x_min}:{x_max}")
        if self.seed < 0:
            raise ConfigError(f"seed must be an unsigned integer, got {self.seed}")
        if self.n < 1:
            raise ConfigError(f"sample size must be >= 1, got {self.n}")
        if self.max_parallel < 1:
            raise ConfigError(f"max parallel fits must be >= 1, got {self.max_parallel}")
        if self.command in _NEEDS_INPUT and not self.input_path:
            raise ConfigError(f"'{self.command}' needs --input")
        if self.command in _NEEDS_PARAMS and self.params is None:
            raise ConfigError(f"'{self.command}' needs --params alpha=..,theta=..")
        return self


@dataclass
class RunOutcome:
    command: str
    text: str
    exit_code: int = EXIT_OK
    summary: dict = field(default_factory=dict)
    output_paths: list = field(default_factory=list)


def _num(value):
    """Shortest round-trip text for a float; blank for missing values."""
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return ''
    return repr(float(value))


def _frame_to_csv(df):
    buffer = io.StringIO()
    df.to_csv(buffer, index=False, lineterminator='\n')
    return buffer.getvalue()


def _write(path, text):
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        f.write(text)
    return path


def _load(config) -> Dataset:
    return ingest(config.input_path, label=config.label)


def _params_text(params: dict):
    return ";".join(f"{k}={_num(v)}" for k, v in params.items())


# --------------------------------------------------------------------------- #
# Commands
# --------------------------------------------------------------------------- #

def run_fit(config: RunConfig) -> RunOutcome:
    """Single-model fit (the first of --models, ssd by default)."""
    logger = get_logger()
    data = _load(config)
    name = config.models[0]
    result = baselines.baseline_fit(name, data, alpha_mode=config.alpha_mode, alpha_max=config.alpha_max)
    logger.log_fit_complete(result, data.label, status='success' if result.converged else 'not-converged')
    if result.profile:
        logger.log_data(f"{name}_profile.csv",
                        [{'alpha': a, 'theta': t, 'loglik': ll} for a, t, ll in result.profile],
                        format='csv')

    record = {
        'model': result.model.name,
        'mode': result.mode,
        'params': result.estimates,
        'loglik': result.loglik,
        'neg2LL': result.neg2ll,
        'iterations': result.iterations,
        'converged': result.converged,
        'gradient_norm': result.gradient_norm,
        'n': result.n,
        'message': result.message,
    }
    if name == 'ssd':
        try:
            record['standard_errors'] = fit.standard_errors(result.ssd_params(), data)
        except FitError as e:
            logger.log(LogLevel.WARNING, f"standard errors unavailable: {e}",
                       source_file="job_runner.py", function_name="run_fit")

    if config.output_format == 'json':
        text = json.dumps(record, indent=2) + '\n'
    else:
        flat = {k: v for k, v in record.items() if k not in ('params', 'standard_errors')}
        flat['params'] = _params_text(record['params'])
        if 'standard_errors' in record:
            flat['standard_errors'] = _params_text(record['standard_errors'])
        if config.output_format == 'csv':
            text = _frame_to_csv(pd.DataFrame([flat]))
        else:
            text = "\n".join(f"{k:>15}: {_num(v) if isinstance(v, float) else v}" for k, v in flat.items()) + "\n"

    exit_code = EXIT_OK if result.converged else EXIT_PARTIAL_FAILURE
    return RunOutcome('fit', text, exit_code, summary={'model': name, 'neg2LL': result.neg2ll,
                                                      'converged': result.converged})


def render_report(report: gof.ModelReport, output_format: str) -> str:
    if output_format == 'json':
        return json.dumps(validate_report(report.to_json_dict()), indent=2) + '\n'
    if output_format == 'csv':
        rows = []
        for row in report.rows:
            record = row.to_json_dict()
            record['params'] = _params_text(record['params'])
            rows.append(record)
        return _frame_to_csv(pd.DataFrame(rows, columns=list(report.rows[0].to_json_dict())))
    header = f"{report.dataset_label}: n={report.n}, mean={report.mean:.6g}\n"
    return header + report.to_frame().to_string(index=False, float_format=lambda v: f"{v:.4f}") + "\n"


def run_compare(config: RunConfig) -> RunOutcome:
    """Fit every requested model and emit the comparison table; exit 2 if any fit failed."""
    data = _load(config)
    report = gof.compare_models(data, list(config.models), alpha_mode=config.alpha_mode,
                                alpha_max=config.alpha_max, max_parallel=config.max_parallel)
    text = render_report(report, config.output_format)
    exit_code = EXIT_PARTIAL_FAILURE if report.failed else EXIT_OK
    return RunOutcome('compare', text, exit_code,
                      summary={'dataset': data.label, 'n': data.n, 'ranking': list(report.ranking),
                               'failed': [r.model for r in report.failed]})


def run_curves(config: RunConfig) -> RunOutcome:
    """
    pdf, cdf, hazard, survival and MRL on the x grid, plus Lorenz and
    Bonferroni on a 99-point p grid. With --output the p-grid table goes to
    <stem>_lorenz.csv next to the main file.
    """
    x_min, x_max, points = config.grid
    curves = ssd.theoretical_curves(config.params, x_min, x_max, int(points))
    inequality = ssd.lorenz_curves(config.params)

    main = pd.DataFrame({'x': curves['pdf'].xs})
    for key in ('pdf', 'cdf', 'hazard', 'survival', 'mrl'):
        main[key] = curves[key].ys
    lorenz = pd.DataFrame({'p': inequality['lorenz'].xs,
                           'lorenz': inequality['lorenz'].ys,
                           'bonferroni': inequality['bonferroni'].ys})

    if config.output_format == 'json':
        text = json.dumps({'params': {'alpha': config.params.alpha, 'theta': config.params.theta},
                           'curves': main.to_dict('list'), 'lorenz': lorenz.to_dict('list')}, indent=2) + '\n'
        return RunOutcome('curves', text, summary={'points': int(points)})

    text = _frame_to_csv(main)
    outcome = RunOutcome('curves', text, summary={'points': int(points)})
    lorenz_text = _frame_to_csv(lorenz)
    if config.output_path:
        stem, _ = os.path.splitext(config.output_path)
        outcome.output_paths.append(_write(f"{stem}_lorenz.csv", lorenz_text))
    else:
        outcome.text = text + "\n" + lorenz_text
    return outcome


def run_ttt(config: RunConfig) -> RunOutcome:
    """Empirical scaled TTT points, with the SSD transform at --params as an extra column."""
    data = _load(config)
    empirical = gof.empirical_ttt(data)
    frame = pd.DataFrame({'u': empirical.xs, 'phi': empirical.ys})
    if config.params is not None:
        frame['ssd_phi'] = [ssd.ttt_transform(float(u), config.params) for u in empirical.xs]
    if config.output_format == 'json':
        text = json.dumps(frame.to_dict('list'), indent=2) + '\n'
    else:
        text = _frame_to_csv(frame)
    return RunOutcome('ttt', text, summary={'dataset': data.label, 'n': data.n})


def run_sample(config: RunConfig) -> RunOutcome:
    """n seeded draws, one per line in generation order, after a header comment."""
    params = config.params
    draws = ssd.draw(config.n, params, config.seed)
    header = f"# ssd sample alpha={_num(params.alpha)} theta={_num(params.theta)} seed={config.seed} n={config.n}\n"
    text = header + "".join(f"{repr(float(v))}\n" for v in draws)
    return RunOutcome('sample', text, summary={'n': config.n, 'seed': config.seed,
                                               'mean': float(np.mean(draws))})


def run_entropy(config: RunConfig) -> RunOutcome:
    """Renyi entropy at --order, reporting which evaluation path was used."""
    method, value = ssd.renyi_entropy_with_method(config.order, config.params)
    record = {'alpha': config.params.alpha, 'theta': config.params.theta,
              'order': float(config.order), 'method': method, 'entropy': value}
    if config.output_format == 'json':
        text = json.dumps(record, indent=2) + '\n'
    elif config.output_format == 'csv':
        text = _frame_to_csv(pd.DataFrame([record]))
    else:
        text = f"Renyi entropy (order {_num(config.order)}, {method}): {_num(value)}\n"
    return RunOutcome('entropy', text, summary={'method': method, 'entropy': value})


_RUNNERS = {
    'fit': run_fit,
    'compare': run_compare,
    'curves': run_curves,
    'ttt': run_ttt,
    'sample': run_sample,
    'entropy': run_entropy,
}


def run(config: RunConfig) -> RunOutcome:
    """Validate, dispatch, write --output and record the run in the history log."""
    config.validate()
    logger = get_logger(config.command)
    run_id = logger.session_id
    started_at = datetime.now().isoformat(timespec='seconds')

    def _record_history(status, summary=None, error=None):
        entry = {
            'run_id': run_id,
            'command': config.command,
            'status': status,
            'started_at': started_at,
            'finished_at': datetime.now().isoformat(timespec='seconds'),
            'input_path': os.path.abspath(config.input_path) if config.input_path else None,
            'output_path': os.path.abspath(config.output_path) if config.output_path else None,
            'summary': summary or {},
        }
        if error:
            entry['error'] = error
        observability.record_run(entry)

    try:
        outcome = _RUNNERS[config.command](config)
        if config.output_path:
            outcome.output_paths.insert(0, _write(config.output_path, outcome.text))
    except Exception as e:
        _record_history('error', error=str(e))
        raise

    _record_history('completed' if outcome.exit_code == EXIT_OK else 'partial', summary=outcome.summary)
    logger.log(LogLevel.INFO, f"{config.command} finished with exit code {outcome.exit_code}")
    return outcome
