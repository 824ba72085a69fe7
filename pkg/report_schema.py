"""Fixed JSON schema for comparison reports written by `compare --format json`.

Written in the same strict style as the structured-output schemas elsewhere in
the project (additionalProperties false, nullable fields typed as
[.., "null"]) and checked with jsonschema before anything is written.
"""

import jsonschema

from errors import SsdLabError

_NULLABLE_NUMBER = {"type": ["number", "null"]}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "ModelReport",
    "type": "object",
    "additionalProperties": False,
    "required": ["dataset", "rows", "ranking"],
    "properties": {
        "dataset": {
            "type": "object",
            "additionalProperties": False,
            "required": ["label", "n", "mean"],
            "properties": {
                "label": {"type": "string"},
                "n": {"type": "integer", "minimum": 1},
                "mean": {"type": "number", "exclusiveMinimum": 0},
            },
        },
        "rows": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["model", "params", "neg2LL", "aic", "bic", "aicc", "ks", "pvalue",
                             "status", "error"],
                "properties": {
                    "model": {
                        "type": "string",
                        "enum": ["ssd", "sd", "rkd", "gamma", "lbed", "lindley", "exponential"],
                    },
                    "params": {
                        "type": "object",
                        "maxProperties": 2,
                        "additionalProperties": {"type": "number"},
                    },
                    "neg2LL": _NULLABLE_NUMBER,
                    "aic": _NULLABLE_NUMBER,
                    "bic": _NULLABLE_NUMBER,
                    "aicc": _NULLABLE_NUMBER,
                    "ks": {"type": ["number", "null"], "minimum": 0, "maximum": 1},
                    "pvalue": {"type": ["number", "null"], "minimum": 0, "maximum": 1},
                    "status": {"type": "string", "enum": ["ok", "failed"]},
                    "error": {"type": "string"},
                },
            },
        },
        "ranking": {
            "type": "array",
            "items": {"type": "string"},
            "uniqueItems": True,
        },
    },
}


class ReportSchemaError(SsdLabError):
    """Raised when a report does not match REPORT_SCHEMA."""


def validate_report(report_dict):
    """
    Validate a ModelReport JSON dict.

    Raises:
        ReportSchemaError: with the path of the first offending field.
    """
    try:
        jsonschema.validate(instance=report_dict, schema=REPORT_SCHEMA)
    except jsonschema.ValidationError as e:
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise ReportSchemaError(f"report does not match schema at {where}: {e.message}") from e
    return report_dict
