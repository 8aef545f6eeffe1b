"""Structured pass/fail results shared by every verification routine."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class VerificationReport:
    relation: str
    params: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def status(self):
        return "pass" if not self.failures else "fail"

    @property
    def ok(self):
        return not self.failures

    def add_failure(self, witness):
        self.failures.append(witness)

    def to_dict(self):
        out = {"relation": self.relation}
        out.update({k: _plain(v) for k, v in sorted(self.params.items())})
        out["status"] = self.status
        out["failures"] = [_plain(f) for f in self.failures]
        return out

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=False)

    def summary_line(self):
        return f"{'PASS' if self.ok else 'FAIL'}  {self.relation}"


def _plain(v):
    """Render report payloads with stable, JSON-safe primitives."""
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, (int, str, bool)) or v is None:
        return v
    return str(v)


REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "VerificationReport",
    "type": "object",
    "properties": {
        "relation": {"type": "string"},
        "status": {"enum": ["pass", "fail"]},
        "failures": {
            "type": "array",
            "items": {
                "type": "object",
                "description": "witness: offending sector/degree/mode and the"
                               " rendered residual vector or coefficient",
            },
        },
    },
    "required": ["relation", "status", "failures"],
    "additionalProperties": True,
}

SERIES_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "TruncatedSeries",
    "type": "object",
    "properties": {
        "vars": {"type": "array", "items": {"type": "string"}},
        "order": {"type": "integer"},
        "terms": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "e": {"type": "array", "items": {"type": "integer"}},
                    "c": {"type": "string"},
                },
                "required": ["e", "c"],
            },
        },
    },
    "required": ["vars", "order", "terms"],
}
