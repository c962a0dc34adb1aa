"""Run configuration and the full verification suite."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import report as rpt
from .dendrite import postcritical_density, verify_tree
from .separation import verify_one_point, verify_osc, verify_pairwise_disjoint, verify_separation
from .ternary import CANONICAL, DEFAULT_PRECISION, EXPLICIT_FILE, PRECISION_CAP, CConstant, DigitStream

CHECKS = ("separation", "disjoint", "osc", "onepoint", "tree", "density")

DEFAULT_DEPTHS = {
    "separation": 8,
    "disjoint": 5,
    "osc": 3,
    "onepoint": 6,
    "tree": 5,
    "density": 6,
}

MIN_DEPTHS = {name: 2 if name == "onepoint" else 1 for name in CHECKS}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    h: Fraction = Fraction(2, 9)
    depths: dict = field(default_factory=lambda: dict(DEFAULT_DEPTHS))
    precision_start: int = DEFAULT_PRECISION
    precision_cap: int = PRECISION_CAP
    mode: str = CANONICAL
    digit_file: Optional[str] = None
    report_path: Optional[str] = None

    def validate(self) -> None:
        if not 0 < self.h < 1:
            raise ConfigError(f"h must satisfy 0 < h < 1, got {self.h}")
        if self.precision_start < 1 or self.precision_start > self.precision_cap:
            raise ConfigError("need 1 <= precision_start <= precision_cap")
        for name, depth in self.depths.items():
            if name not in CHECKS:
                raise ConfigError(f"unknown check {name!r}")
            if depth < MIN_DEPTHS[name]:
                raise ConfigError(f"depth for {name} must be >= {MIN_DEPTHS[name]}, got {depth}")
        if self.mode == EXPLICIT_FILE:
            if not self.digit_file:
                raise ConfigError("file mode needs a digit file path")
            if not Path(self.digit_file).is_file():
                raise ConfigError(f"digit file not found: {self.digit_file}")
        elif self.mode != CANONICAL:
            raise ConfigError(f"unknown enumeration mode {self.mode!r}")

    def stream(self) -> DigitStream:
        if self.mode == EXPLICIT_FILE:
            return DigitStream.from_file(self.digit_file)
        return DigitStream.canonical()

    def constant(self, stream: DigitStream) -> CConstant:
        return CConstant(stream, self.precision_start, self.precision_cap)


_RUNNERS = {
    "separation": verify_separation,
    "disjoint": verify_pairwise_disjoint,
    "osc": verify_osc,
    "onepoint": verify_one_point,
    "tree": verify_tree,
    "density": lambda h, depth, c: postcritical_density(depth, h, c),
}


def run_check(name: str, config: RunConfig, stream: Optional[DigitStream] = None) -> rpt.VerificationReport:
    stream = stream or config.stream()
    # a fresh enclosure per check keeps precision_digits local to that check
    return _RUNNERS[name](config.h, config.depths[name], config.constant(stream))


def run_suite(config: RunConfig, checks=CHECKS) -> list:
    """Run the selected checks in the fixed suite order; writes the report if configured."""
    config.validate()
    stream = config.stream()
    reports = [run_check(name, config, stream) for name in CHECKS if name in checks]
    if config.report_path:
        rpt.write(reports, config.report_path)
    return reports
