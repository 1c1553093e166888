"""Deterministic structured reports: plain JSON with sorted keys.

Anything the modules emit (chains, fractions, vertex tuples, frozensets)
is first lowered to JSON-safe values; rendering the same data twice gives
byte-identical output, which the golden tests rely on.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Optional

from .chains import Chain

SCHEMA = "coarsecycles-report/1"


def jsonable(obj):
    """Lower a value to JSON-safe types, deterministically."""
    if isinstance(obj, Chain):
        return {
            "degree": obj.degree,
            "ring": obj.ring,
            "terms": [
                [[list(v) for v in key], coeff]
                for key, coeff in sorted(obj.terms())
            ],
        }
    if isinstance(obj, Fraction):
        return "{}/{}".format(obj.numerator, obj.denominator)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (frozenset, set)):
        return [jsonable(v) for v in sorted(obj)]
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, float):
        raise TypeError("reports are exact; found a float: {!r}".format(obj))
    return str(obj)


def make_report(config_echo: dict, command: str, sections: dict) -> dict:
    return {
        "schema": SCHEMA,
        "command": command,
        "config": jsonable(config_echo),
        "sections": jsonable(sections),
    }


def render(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def write(report: dict, path: Optional[str]) -> str:
    """Render; write to path when given.  Returns the rendered text either way."""
    text = render(report)
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    return text
