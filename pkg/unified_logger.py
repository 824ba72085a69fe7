"""
Unified logging for the SSD lifetime-distribution toolkit.

One process-wide logger (see get_logger) writes:

    stderr                          every entry
    <log_dir>/sessions/<run>_<session>.log   every entry, per session
    <log_dir>/errors/errors.csv     ERROR and CRITICAL entries
    <log_dir>/fits/fits.csv         one row per completed model fit
    <log_dir>/debug/<run>_<session>/ artifacts written with log_data

<log_dir> is SSDLAB_LOG_DIR (default Logs); SSDLAB_LOG_TO_FILE=0 keeps
everything on stderr.
"""

import os
import csv
import json
import sys
import threading
from datetime import datetime
from enum import Enum

import pandas as pd

DEFAULT_LOG_DIR = "Logs"

ERROR_COLUMNS = ['timestamp', 'run_name', 'level', 'source_file', 'function_name', 'message']
FIT_COLUMNS = ['timestamp', 'session_id', 'run_name', 'dataset', 'model', 'mode',
               'estimates', 'loglik', 'iterations', 'converged', 'gradient_norm', 'status']


class LogLevel(Enum):
    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"
    CRITICAL = "CRITICAL"


def _file_logging_enabled():
    return os.environ.get("SSDLAB_LOG_TO_FILE", "1").strip().lower() not in ("0", "false", "no")


def _now(fmt="%Y-%m-%d %H:%M:%S"):
    return datetime.now().strftime(fmt)


def _warn(message):
    print(f"Warning: {message}", file=sys.stderr)


class _CsvLedger:
    """Append-only CSV with a fixed column list.

    A file left behind with different columns (an older layout) is rewritten
    once under the current columns before the first append; old rows keep
    their values and new columns come out blank.
    """

    def __init__(self, path, columns):
        self.path = path
        self.columns = list(columns)
        self._reconciled = False

    def _reconcile(self):
        if self._reconciled:
            return
        self._reconciled = True
        if not os.path.exists(self.path) or os.path.getsize(self.path) == 0:
            return
        try:
            old = pd.read_csv(self.path, dtype=str, keep_default_na=False)
            if list(old.columns) == self.columns:
                return
            tmp = self.path + '.migrating'
            old.reindex(columns=self.columns, fill_value='').to_csv(tmp, index=False)
            os.replace(tmp, self.path)
        except Exception as e:
            _warn(f"could not reconcile the columns of {self.path}: {e}")

    def append(self, row):
        self._reconcile()
        fresh = not os.path.exists(self.path) or os.path.getsize(self.path) == 0
        with open(self.path, 'a', newline='', encoding='utf-8') as f:
            writer = csv.DictWriter(f, fieldnames=self.columns, extrasaction='ignore')
            if fresh:
                writer.writeheader()
            writer.writerow(row)


class UnifiedLogger:
    """Console, session-file and CSV logging for one run."""

    def __init__(self, run_name=None, log_dir=None):
        self.run_name = run_name
        self.log_dir = log_dir or os.environ.get("SSDLAB_LOG_DIR", DEFAULT_LOG_DIR)
        self.session_id = _now("%Y%m%d_%H%M%S")
        self.to_file = _file_logging_enabled()

        tag = f"{run_name or 'general'}_{self.session_id}"
        self.sessions_dir = os.path.join(self.log_dir, "sessions")
        self.errors_dir = os.path.join(self.log_dir, "errors")
        self.fits_dir = os.path.join(self.log_dir, "fits")
        self.debug_dir = os.path.join(self.log_dir, "debug", tag)
        self.log_file = os.path.join(self.sessions_dir, f"{tag}.log")
        self.errors_csv = os.path.join(self.errors_dir, "errors.csv")
        self.fits_csv = os.path.join(self.fits_dir, "fits.csv")

        if self.to_file:
            for path in (self.sessions_dir, self.errors_dir, self.fits_dir):
                os.makedirs(path, exist_ok=True)

        self._errors = _CsvLedger(self.errors_csv, ERROR_COLUMNS)
        self._fits = _CsvLedger(self.fits_csv, FIT_COLUMNS)
        # Model fits run on worker threads during compare.
        self._lock = threading.Lock()

    def _append(self, ledger, row):
        if not self.to_file:
            return
        with self._lock:
            try:
                ledger.append(row)
            except Exception as e:
                _warn(f"could not write to {ledger.path}: {e}")

    def log(self, level, message, source_file=None, function_name=None, to_file=True):
        """Log a message with the specified level."""
        level_name = level.value if isinstance(level, LogLevel) else str(level)
        origin = (source_file or '') + (f"::{function_name}" if function_name else '')
        parts = [_now(), level_name] + ([origin] if origin else []) + [str(message)]
        entry = " - ".join(parts)

        # stderr only: stdout carries report output when no --output is given.
        print(entry, file=sys.stderr)

        if to_file and self.to_file:
            try:
                with self._lock, open(self.log_file, 'a', encoding='utf-8') as f:
                    f.write(entry + '\n')
            except OSError as e:
                _warn(f"could not write to log file: {e}")

        if level in (LogLevel.ERROR, LogLevel.CRITICAL):
            self._append(self._errors, {
                'timestamp': _now(),
                'run_name': self.run_name or 'general',
                'level': level_name,
                'source_file': source_file or '',
                'function_name': function_name or '',
                'message': message,
            })

    def log_data(self, filename, data, format='txt', subfolder=None):
        """
        Write an artifact into the session debug directory.

        Args:
            filename: File name inside the debug directory.
            data: Rows (list of dicts or list of sequences) for csv; any
                JSON-serializable value for json; anything else is str()-ed.
            format: 'csv', 'json' or 'txt'.
            subfolder: Optional subdirectory of the debug directory.

        Returns:
            The path written, or None when file logging is off.
        """
        if not self.to_file:
            return None
        output_dir = os.path.join(self.debug_dir, subfolder) if subfolder else self.debug_dir
        os.makedirs(output_dir, exist_ok=True)
        path = os.path.join(output_dir, filename)

        try:
            if format == 'csv':
                rows = list(data)
                if not rows:
                    return path
                has_header = isinstance(rows[0], dict)
                pd.DataFrame(rows).to_csv(path, index=False, header=has_header)
            elif format == 'json':
                with open(path, 'w', encoding='utf-8') as f:
                    json.dump(data, f, indent=2, default=str)
            else:
                with open(path, 'w', encoding='utf-8') as f:
                    f.write(str(data))
        except Exception as e:
            self.log(LogLevel.ERROR, f"could not write {path}: {e}", source_file="unified_logger.py",
                     function_name="log_data")
            return path
        self.log(LogLevel.DEBUG, f"wrote {path}")
        return path

    def log_fit_complete(self, fit_result, dataset_label, status='success'):
        """Record a finished fit (converged or not) in fits/fits.csv."""
        self._append(self._fits, {
            'timestamp': _now(),
            'session_id': self.session_id,
            'run_name': self.run_name or 'general',
            'dataset': dataset_label,
            'model': fit_result.model.name,
            'mode': fit_result.mode,
            'estimates': json.dumps(fit_result.estimates),
            'loglik': repr(fit_result.loglik),
            'iterations': fit_result.iterations,
            'converged': fit_result.converged,
            'gradient_norm': repr(fit_result.gradient_norm),
            'status': status,
        })


_logger_instance = None


def get_logger(run_name=None):
    """Return the process-wide logger, starting a new session when run_name is given."""
    global _logger_instance
    if _logger_instance is None or run_name:
        _logger_instance = UnifiedLogger(run_name)
    return _logger_instance
