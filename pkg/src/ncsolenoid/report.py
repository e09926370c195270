"""Verification report records shared by every suite.

A check has one of three statuses:

* ``pass``: every sample satisfied the law;
* ``fail``: a law expected to hold exactly was violated;
* ``defect``: a report-mode finding, i.e. a law that is not claimed in the
  current regime was observed to fail; the defect phase is recorded but the
  run's exit code is unaffected.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field


@dataclass
class Check:
    id: str
    status: str = "pass"
    samples: int = 0
    counterexample: dict | None = None
    defect_phase: list[str] | None = None
    failures: int = 0
    note: str | None = None

    def record(self, ok: bool, payload=None, defect_phase=None, report_mode: bool = False):
        """Tally one sample; the first failing sample is kept as the counterexample."""
        self.samples += 1
        if ok:
            return
        self.failures += 1
        if self.status == "pass":
            self.status = "defect" if report_mode else "fail"
        elif self.status == "defect" and not report_mode:
            self.status = "fail"
        if self.counterexample is None:
            self.counterexample = payload() if callable(payload) else payload
            if defect_phase is not None:
                self.defect_phase = defect_phase() if callable(defect_phase) else defect_phase

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        out = {
            "id": self.id,
            "status": self.status,
            "samples": self.samples,
            "counterexample": self.counterexample,
            "defect_phase": self.defect_phase,
        }
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class SuiteReport:
    name: str
    checks: list[Check] = field(default_factory=list)

    def check(self, check_id: str, note: str | None = None) -> Check:
        for c in self.checks:
            if c.id == check_id:
                return c
        c = Check(check_id, note=note)
        self.checks.append(c)
        return c

    def __getitem__(self, check_id: str) -> Check:
        for c in self.checks:
            if c.id == check_id:
                return c
        raise KeyError(check_id)

    @property
    def ok(self) -> bool:
        """True when no check has status ``fail`` (defects do not count)."""
        return all(c.status != "fail" for c in self.checks)

    @property
    def all_pass(self) -> bool:
        return all(c.status == "pass" for c in self.checks)

    def merge(self, other: SuiteReport, prefix: str = "") -> SuiteReport:
        for c in other.checks:
            c.id = prefix + c.id
            self.checks.append(c)
        return self

    def to_json(self) -> dict:
        return {"name": self.name, "checks": [c.to_json() for c in self.checks]}

    def lines(self) -> list[str]:
        out = [f"[{self.name}]"]
        for c in self.checks:
            line = f"  {c.status.upper():6} {c.id} ({c.samples} samples"
            line += f", {c.failures} failing)" if c.failures else ")"
            out.append(line)
            if c.counterexample is not None:
                out.append(f"         first counterexample: {c.counterexample}")
            if c.defect_phase is not None:
                out.append(f"         defect phase: {c.defect_phase}")
        return out


def batch_rng(seed: int, name: str, batch: int) -> random.Random:
    """Independent deterministic stream for one batch of one suite."""
    return random.Random(f"{seed}/{name}/{batch}")


def batches(n_samples: int, batch_size: int = 100):
    """Yield ``(batch_index, count)`` pairs covering n_samples."""
    b = 0
    while n_samples > 0:
        k = min(batch_size, n_samples)
        yield b, k
        n_samples -= k
        b += 1
