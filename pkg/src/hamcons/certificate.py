"""Line-oriented certificate records.

A certificate is a sequence of ``key=value`` lines. Nothing schedule- or
clock-dependent goes into it, so two deterministic runs of the same command
produce byte-identical files.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from . import __version__


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def fmt(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (tuple, list)):
        if value and isinstance(value[0], (tuple, list)):
            return ";".join(fmt(v) for v in value)
        return " ".join(str(v) for v in value)
    return str(value)


@dataclass
class Certificate:
    command: str
    inputs: dict = field(default_factory=dict)
    outcome: str = ""
    records: list = field(default_factory=list)

    def add(self, key: str, value) -> None:
        self.records.append((key, value))

    def lines(self) -> list[str]:
        out = [f"command={self.command}", f"version={__version__}"]
        out += [f"input.{k}={fmt(v)}" for k, v in self.inputs.items()]
        out.append(f"outcome={self.outcome}")
        out += [f"{k}={fmt(v)}" for k, v in self.records]
        return out

    def render(self) -> str:
        return "\n".join(self.lines()) + "\n"


def parse_certificate(text: str) -> dict[str, list[str]]:
    out: dict[str, list[str]] = {}
    for ln in text.splitlines():
        if "=" in ln:
            k, v = ln.split("=", 1)
            out.setdefault(k, []).append(v)
    return out
