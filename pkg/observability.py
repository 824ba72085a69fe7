"""Read/write helpers for run history, fit history and error logs.

Everything here is read-only against the log tree except record_run(), which
appends one line per CLI run to <log dir>/run_history.jsonl. The log directory
is resolved at call time (env SSDLAB_LOG_DIR, default Logs) so it always
matches the one the unified logger writes to.
"""

import os
import json

import pandas as pd

from unified_logger import DEFAULT_LOG_DIR

_ENCODINGS = ['utf-8-sig', 'latin-1', 'iso-8859-1', 'cp1252']


def logs_dir():
    return os.environ.get("SSDLAB_LOG_DIR", DEFAULT_LOG_DIR)


def run_history_path():
    return os.path.join(logs_dir(), 'run_history.jsonl')


def _read_csv(path):
    last = None
    for enc in _ENCODINGS:
        try:
            return pd.read_csv(path, encoding=enc)
        except (UnicodeDecodeError, pd.errors.ParserError) as e:
            last = e
    raise ValueError(f"Could not read '{path}': {last}")


def _tail(df, limit):
    df = df.where(pd.notna(df), None)
    rows = df.to_dict('records')
    rows.reverse()
    return rows[:limit]


# --------------------------------------------------------------------------- #
# Run history
# --------------------------------------------------------------------------- #

def record_run(entry):
    """Append one run-history record (a dict) to run_history.jsonl."""
    os.makedirs(logs_dir(), exist_ok=True)
    with open(run_history_path(), 'a', encoding='utf-8') as f:
        f.write(json.dumps(entry, default=str) + '\n')


def list_runs(command=None, limit=50):
    """Return run-history records (most recent first), optionally for one command."""
    path = run_history_path()
    if not os.path.isfile(path):
        return []
    runs = []
    with open(path, 'r', encoding='utf-8') as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            try:
                runs.append(json.loads(line))
            except json.JSONDecodeError:
                continue
    if command:
        runs = [r for r in runs if r.get('command') == command]
    runs.reverse()
    return runs[:limit]


# --------------------------------------------------------------------------- #
# Fit and error logs
# --------------------------------------------------------------------------- #

def get_fits(model=None, dataset=None, limit=100):
    """Rows of fits/fits.csv (most recent first), optionally filtered."""
    path = os.path.join(logs_dir(), 'fits', 'fits.csv')
    if not os.path.isfile(path):
        return []
    df = _read_csv(path)
    if model:
        df = df[df['model'] == model]
    if dataset:
        df = df[df['dataset'] == dataset]
    rows = _tail(df, limit)
    for row in rows:
        if isinstance(row.get('estimates'), str):
            row['estimates'] = json.loads(row['estimates'])
    return rows


def get_errors(run_name=None, limit=100):
    """ERROR/CRITICAL rows from errors/errors.csv (most recent first)."""
    path = os.path.join(logs_dir(), 'errors', 'errors.csv')
    if not os.path.isfile(path):
        return []
    df = _read_csv(path)
    if run_name and 'run_name' in df.columns:
        df = df[df['run_name'] == run_name]
    return _tail(df, limit)
