import json
import math

import numpy as np
import pandas as pd

from .config import settings
from .exceptions import ParameterError

###############################################################################################################
# Description

"""
ReportFrame collects the rows produced by a CLI command in a pandas DataFrame and renders them
as a fixed-width table, CSV or JSON. Output is deterministic: no timestamps, columns in
insertion order, floats with a fixed number of significant digits.
"""

FORMATS = ("table", "csv", "json")

###############################################################################################################
# JSON values with fixed float digits

def _rounded(value, digits):
    """Copy of value with floats rounded to digits significant digits and NaN/inf as None."""
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return None
        return float(format(value, f".{digits}g"))
    if isinstance(value, dict):
        return {str(key): _rounded(item, digits) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_rounded(item, digits) for item in value]
    return str(value)

###############################################################################################################
# Report container

class ReportFrame:
    """
    Rows of one command run.

    Attributes:
        command (str): Name of the command.
        params (dict): Parameters of the run, in insertion order.
        df (pd.DataFrame): One row per computed item.
        failures (int): Number of appended rows marked as failed.
    """
    def __init__(self, command, params=None):
        self.command = command
        self.params = dict(params or {})
        self.df = pd.DataFrame()
        self.failures = 0

    @property
    def passed(self):
        return self.failures == 0

    def append(self, rows):
        """
        Append rows given as dicts. A row with a false 'passed' entry counts as a failure.

        Args:
            rows (list or dict): One row or a list of rows.
        """
        if isinstance(rows, dict):
            rows = [rows]
        rows = list(rows)
        self.failures += sum(1 for row in rows if row.get("passed") is False or row.get("passed") is np.False_)
        frame = pd.DataFrame(rows)
        self.df = frame if self.df.empty else pd.concat([self.df, frame], ignore_index=True)

    def records(self):
        """Rows as dicts with numpy scalars turned into Python values."""
        rows = []
        for record in self.df.to_dict(orient="records"):
            rows.append({key: (value.item() if isinstance(value, np.generic) else value)
                         for key, value in record.items()})
        return rows

    def render(self, fmt="table"):
        """
        Render the report.

        Args:
            fmt (str): 'table', 'csv' or 'json'.

        Returns:
            str: The rendered text, newline terminated.
        """
        cfg = settings()
        if fmt == "table":
            if self.df.empty:
                return f"{self.command}: no rows\n"
            digits = cfg.table_digits
            return self.df.to_string(index=False, float_format=lambda v: f"{v:.{digits}g}") + "\n"
        if fmt == "csv":
            return self.df.to_csv(index=False, float_format=f"%.{cfg.float_digits}g", lineterminator="\n")
        if fmt == "json":
            document = {"command": self.command, "params": self.params, "rows": self.records(),
                        "passed": self.passed}
            return json.dumps(_rounded(document, cfg.float_digits), allow_nan=False) + "\n"
        raise ParameterError(f"Unknown report format {fmt!r}; expected one of {', '.join(FORMATS)}.")

    def save(self, path, fmt="table"):
        with open(path, "w", newline="\n") as file:
            file.write(self.render(fmt))
