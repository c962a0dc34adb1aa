"""Verification reports and their line-oriented serialization.

A report document is JSON Lines: a header record, then one record per check.
Keys are sorted and rationals are written as ``"p/q"`` strings, so identical
inputs give byte-identical documents.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional

from .interval import format_rational, parse_rational

FORMAT_NAME = "dendrite-ifs-report"
FORMAT_VERSION = 1

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"

EXIT_CODES = {PASS: 0, FAIL: 1, INCONCLUSIVE: 2}


@dataclass
class VerificationReport:
    check_name: str
    depth: int
    items_checked: int = 0
    result: str = PASS
    min_margin: Optional[Fraction] = None
    precision_digits: int = 0
    failures: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.result not in EXIT_CODES:
            raise ValueError(f"unknown result {self.result!r}")

    @property
    def passed(self) -> bool:
        return self.result == PASS

    def to_record(self) -> dict:
        return {
            "check_name": self.check_name,
            "depth": self.depth,
            "items_checked": self.items_checked,
            "result": self.result,
            "min_margin": None if self.min_margin is None else format_rational(self.min_margin),
            "precision_digits": self.precision_digits,
            "failures": self.failures,
            "details": self.details,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "VerificationReport":
        mm = rec.get("min_margin")
        return cls(
            check_name=rec["check_name"],
            depth=rec["depth"],
            items_checked=rec["items_checked"],
            result=rec["result"],
            min_margin=None if mm is None else parse_rational(mm),
            precision_digits=rec["precision_digits"],
            failures=list(rec.get("failures", [])),
            details=dict(rec.get("details", {})),
        )


def settle(report: VerificationReport, unknown: bool) -> VerificationReport:
    """Set ``result`` from collected failures; a definite failure outranks inconclusive."""
    definite = [f for f in report.failures if f.get("kind") != "unknown"]
    if definite:
        report.result = FAIL
    elif unknown or report.failures:
        report.result = INCONCLUSIVE
    else:
        report.result = PASS
    return report


def dumps(reports: Iterable[VerificationReport]) -> str:
    lines = [json.dumps({"format": FORMAT_NAME, "version": FORMAT_VERSION}, sort_keys=True)]
    lines.extend(json.dumps(r.to_record(), sort_keys=True, separators=(",", ":")) for r in reports)
    return "\n".join(lines) + "\n"


def loads(text: str) -> list[VerificationReport]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty report document")
    header = json.loads(lines[0])
    if header.get("format") != FORMAT_NAME:
        raise ValueError(f"not a {FORMAT_NAME} document")
    if header.get("version") != FORMAT_VERSION:
        raise ValueError(f"unsupported report version {header.get('version')!r}")
    return [VerificationReport.from_record(json.loads(ln)) for ln in lines[1:]]


def write(reports: Iterable[VerificationReport], path) -> None:
    Path(path).write_text(dumps(reports))


def overall_exit_code(reports: Iterable[VerificationReport]) -> int:
    results = {r.result for r in reports}
    if FAIL in results:
        return EXIT_CODES[FAIL]
    if INCONCLUSIVE in results:
        return EXIT_CODES[INCONCLUSIVE]
    return EXIT_CODES[PASS]
