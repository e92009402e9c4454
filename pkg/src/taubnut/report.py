"""Verification reports: deterministic JSON plus a human summary table.

The JSON document is byte-identical across runs with the same manifest:
check values come from seeded generators keyed by the check's registry
position (never by execution order), and wall times are stored as null
in the file.  Real timings appear only in the human-readable table.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

SCHEMA_VERSION = 1
DEFAULT_SEED = 1905


def canonical_json(obj):
    """Stable serialization used for hashing and for report files."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def manifest_sha256(manifest):
    return hashlib.sha256(canonical_json(manifest).encode("ascii")).hexdigest()


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    tolerance: float
    passed: bool
    samples: int
    detail: str
    wall_time_s: float

    def to_dict(self):
        # wall time is environment noise; the file stores null so that
        # reruns of the same manifest produce identical bytes
        return {
            "name": self.name,
            "value": self.value,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "samples": self.samples,
            "detail": self.detail,
            "wall_time_s": None,
        }


@dataclass(frozen=True)
class VerificationReport:
    manifest: dict
    checks: tuple

    @property
    def verdict(self):
        return "pass" if all(c.passed for c in self.checks) else "fail"

    @property
    def failures(self):
        return tuple(c for c in self.checks if not c.passed)

    @property
    def manifest_hash(self):
        return manifest_sha256(self.manifest)

    def to_dict(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "manifest": self.manifest,
            "manifest_sha256": self.manifest_hash,
            "checks": [c.to_dict() for c in self.checks],
            "verdict": self.verdict,
        }

    def to_json_text(self):
        return canonical_json(self.to_dict()) + "\n"

    def format_table(self):
        lines = []
        width = max([len(c.name) for c in self.checks] + [20])
        header = "%-*s  %12s  %10s  %7s  %7s  %s" % (
            width, "check", "value", "tolerance", "n", "time", "status")
        lines.append(header)
        lines.append("-" * len(header))
        for c in self.checks:
            lines.append("%-*s  %12.4e  %10.1e  %7d  %6.2fs  %s" % (
                width, c.name, c.value, c.tolerance, c.samples,
                c.wall_time_s, "pass" if c.passed else "FAIL"))
        lines.append("-" * len(header))
        npass = sum(1 for c in self.checks if c.passed)
        lines.append("%d/%d checks passed  ->  %s   [manifest %s]" % (
            npass, len(self.checks), self.verdict.upper(), self.manifest_hash[:16]))
        return "\n".join(lines)
