import json
import math
import os
from io import StringIO

import pandas as pd
import pytest

import observability
import ssd
from errors import ConfigError
from job_runner import EXIT_OK, EXIT_PARTIAL_FAILURE, EXIT_USAGE, RunConfig, run
from main import main, parse_grid, parse_params
from ssd import SsdParams


@pytest.fixture
def small_file(write_text):
    return write_text("small.txt", "1\n2\n3\n")


@pytest.fixture
def simulated_file(write_text):
    values = ssd.draw(200, SsdParams(2.0, 1.0), seed=99)
    return write_text("simulated.txt", "\n".join(repr(float(v)) for v in values) + "\n")


# --------------------------------------------------------------------------- #
# Argument parsing
# --------------------------------------------------------------------------- #

def test_parse_params():
    assert parse_params("alpha=1.5, theta=0.8") == SsdParams(1.5, 0.8)
    for bad in ("alpha=1", "alpha=1,theta=x", "alpha:1,theta=1", "alpha=1,theta=-2"):
        with pytest.raises(ConfigError):
            parse_params(bad)


def test_parse_grid():
    assert parse_grid("0.5:1.5:3") == (0.5, 1.5, 3)
    with pytest.raises(ConfigError):
        parse_grid("0.5:1.5")


@pytest.mark.parametrize("config", [
    RunConfig('curves', params=SsdParams(1, 1), grid=(1.0, 0.5, 10)),
    RunConfig('curves', params=SsdParams(1, 1), grid=(0.5, 1.5, 1)),
    RunConfig('curves'),
    RunConfig('compare'),
    RunConfig('compare', input_path='x.txt', models=('weibull',)),
    RunConfig('sample', params=SsdParams(1, 1), n=0),
    RunConfig('fit', input_path='x.txt', alpha_mode='grid'),
])
def test_invalid_configs(config):
    with pytest.raises(ConfigError):
        config.validate()


# --------------------------------------------------------------------------- #
# compare
# --------------------------------------------------------------------------- #

def test_compare_csv(small_file, tmp_path):
    out = tmp_path / "table.csv"
    code = main(['compare', '--input', small_file, '--models', 'exponential',
                 '--format', 'csv', '--output', str(out)])
    assert code == EXIT_OK
    table = pd.read_csv(out)
    assert list(table['model']) == ['exponential']
    assert table.loc[0, 'params'] == 'theta=0.5'
    assert table.loc[0, 'status'] == 'ok'


def test_compare_json(small_file, capsys):
    code = main(['compare', '--input', small_file, '--models', 'exponential,lbed', '--format', 'json'])
    assert code == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert [row['model'] for row in report['rows']] == ['lbed', 'exponential']
    assert report['rows'][0]['params'] == {'theta': 1.0}
    assert report['rows'][1]['params'] == {'theta': 0.5}
    assert report['dataset'] == {'label': 'small.txt', 'n': 3, 'mean': 2.0}
    assert set(report['ranking']) == {'exponential', 'lbed'}


def test_compare_table(simulated_file, capsys):
    code = main(['compare', '--input', simulated_file, '--alpha-max', '10', '--label', 'sim'])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("sim: n=200")
    for name in ('ssd', 'sd', 'rkd', 'gamma', 'lbed', 'lindley', 'exponential'):
        assert name in out


def test_compare_partial_failure_still_writes(write_text, tmp_path):
    data = write_text("constant.txt", "2\n2\n2\n")
    out = tmp_path / "report.json"
    code = main(['compare', '--input', data, '--models', 'gamma,exponential', '--format', 'json',
                 '--output', str(out)])
    assert code == EXIT_PARTIAL_FAILURE
    report = json.loads(out.read_text())
    assert [row['status'] for row in report['rows']] == ['failed', 'ok']
    assert report['ranking'] == ['exponential']
    runs = observability.list_runs('compare')
    assert runs[0]['status'] == 'partial'
    assert runs[0]['summary']['failed'] == ['gamma']


# --------------------------------------------------------------------------- #
# fit
# --------------------------------------------------------------------------- #

def test_fit_json(simulated_file, capsys):
    code = main(['fit', '--input', simulated_file, '--format', 'json', '--alpha-max', '10'])
    assert code == EXIT_OK
    record = json.loads(capsys.readouterr().out)
    assert record['model'] == 'ssd'
    assert record['converged'] is True
    assert set(record['params']) == {'alpha', 'theta'}
    assert set(record['standard_errors']) == {'alpha', 'theta'}
    assert record['neg2LL'] == pytest.approx(-2.0 * record['loglik'])


def test_fit_profile_mode(simulated_file, capsys, isolated_logs):
    code = main(['fit', '--input', simulated_file, '--alpha-mode', 'profile', '--alpha-max', '10', '--format', 'csv'])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert 'profile-integer' in out
    [profile_csv] = list((isolated_logs / "debug").glob("fit_*/ssd_profile.csv"))
    profile = pd.read_csv(profile_csv)
    assert list(profile['alpha']) == [float(a) for a in range(11)]


def test_fit_is_logged(simulated_file):
    main(['fit', '--input', simulated_file, '--models', 'lindley'])
    fits = observability.get_fits(model='lindley')
    assert len(fits) == 1
    assert fits[0]['dataset'] == 'simulated.txt'
    assert set(fits[0]['estimates']) == {'theta'}


# --------------------------------------------------------------------------- #
# curves, ttt, sample, entropy
# --------------------------------------------------------------------------- #

def test_curves_csv(tmp_path):
    out = tmp_path / "curves.csv"
    code = main(['curves', '--params', 'alpha=1,theta=1', '--grid', '0.5:1.5:3', '--output', str(out)])
    assert code == EXIT_OK
    curves = pd.read_csv(out)
    assert list(curves.columns) == ['x', 'pdf', 'cdf', 'hazard', 'survival', 'mrl']
    assert list(curves['x']) == [0.5, 1.0, 1.5]
    assert curves.loc[1, 'pdf'] == pytest.approx(2.0 / (3.0 * math.e), abs=1e-10)
    assert curves.loc[1, 'cdf'] == pytest.approx(0.1416146373, abs=1e-10)
    lorenz = pd.read_csv(tmp_path / "curves_lorenz.csv")
    assert list(lorenz.columns) == ['p', 'lorenz', 'bonferroni']
    assert len(lorenz) == 99


def test_curves_json(capsys):
    code = main(['curves', '--params', 'alpha=2,theta=0.5', '--grid', '1:5:5', '--format', 'json'])
    assert code == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload['params'] == {'alpha': 2.0, 'theta': 0.5}
    assert payload['curves']['x'] == [1.0, 2.0, 3.0, 4.0, 5.0]


def test_ttt(small_file, capsys):
    code = main(['ttt', '--input', small_file, '--params', 'alpha=1,theta=1'])
    assert code == EXIT_OK
    frame = pd.read_csv(StringIO(capsys.readouterr().out))
    assert list(frame.columns) == ['u', 'phi', 'ssd_phi']
    assert list(frame['phi']) == pytest.approx([0.0, 0.5, 5 / 6, 1.0])
    assert frame['ssd_phi'].iloc[-1] == pytest.approx(1.0, abs=1e-6)


def test_sample_is_reproducible(tmp_path):
    first, second = tmp_path / "a.txt", tmp_path / "b.txt"
    for out in (first, second):
        assert main(['sample', '--params', 'alpha=1,theta=1', '--n', '25', '--seed', '7', '--output', str(out)]) == 0
    assert first.read_text() == second.read_text()
    lines = first.read_text().splitlines()
    assert lines[0] == "# ssd sample alpha=1.0 theta=1.0 seed=7 n=25"
    assert len(lines) == 26
    draws = ssd.draw(25, SsdParams(1.0, 1.0), 7)
    assert [float(v) for v in lines[1:]] == draws.tolist()


def test_sample_then_profile_fit_recovers_alpha(tmp_path, capsys):
    draws = tmp_path / "draws.txt"
    assert main(['sample', '--params', 'alpha=1,theta=1', '--n', '10000', '--seed', '7',
                 '--output', str(draws)]) == EXIT_OK
    values = [float(v) for v in draws.read_text().splitlines()[1:]]
    assert abs(sum(values) / len(values) - 8.0 / 3.0) < 0.1

    code = main(['fit', '--input', str(draws), '--alpha-mode', 'profile', '--alpha-max', '10', '--format', 'json'])
    assert code == EXIT_OK
    record = json.loads(capsys.readouterr().out)
    assert record['params']['alpha'] == 1.0
    assert record['params']['theta'] == pytest.approx(1.0, rel=0.05)


def test_entropy(capsys):
    assert main(['entropy', '--params', 'alpha=1,theta=1', '--order', '2', '--format', 'json']) == EXIT_OK
    record = json.loads(capsys.readouterr().out)
    assert record['method'] == 'closed'
    assert record['entropy'] == pytest.approx(1.637609, abs=1e-6)


# --------------------------------------------------------------------------- #
# Exit codes and run history
# --------------------------------------------------------------------------- #

def test_usage_errors_exit_one(tmp_path):
    assert main(['bogus']) == EXIT_USAGE
    assert main(['compare']) == EXIT_USAGE
    assert main(['curves', '--params', 'alpha=1']) == EXIT_USAGE
    assert main(['compare', '--input', str(tmp_path / 'missing.txt')]) == EXIT_USAGE
    assert main(['curves', '--params', 'alpha=1,theta=1', '--grid', '2:1:10']) == EXIT_USAGE


def test_bad_dataset_exits_one(write_text):
    path = write_text("bad.txt", "1\n-3\n")
    assert main(['compare', '--input', path]) == EXIT_USAGE
    runs = observability.list_runs('compare')
    assert runs[0]['status'] == 'error'
    assert 'line 2' in runs[0]['error']


def test_unwritable_output_exits_one(tmp_path):
    blocker = tmp_path / "blocker"
    blocker.write_text("not a directory\n")
    code = main(['sample', '--params', 'alpha=1,theta=1', '--n', '5', '--output', str(blocker / "draws.txt")])
    assert code == EXIT_USAGE
    assert observability.list_runs('sample')[0]['status'] == 'error'
    assert observability.get_errors(run_name='sample')


def test_help_exits_zero():
    assert main(['--help']) == 0


def test_run_history(small_file, tmp_path):
    outcome = run(RunConfig('compare', input_path=small_file, models=('exponential',),
                            output_path=str(tmp_path / "t.txt")))
    assert outcome.exit_code == EXIT_OK
    assert os.path.isfile(outcome.output_paths[0])
    runs = observability.list_runs()
    assert runs[0]['command'] == 'compare'
    assert runs[0]['status'] == 'completed'
    assert runs[0]['summary']['ranking'] == ['exponential']
