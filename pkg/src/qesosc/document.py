"""JSON result documents and the CSV grid export format."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

import numpy as np

from .evaluate import potential_spec
from .states import Parity, QesState
from .verify import SpectrumReport

SCHEMA_VERSION = "1.0"


def load_schema() -> dict:
    return json.loads(resources.files("qesosc").joinpath("schemas/result.schema.json").read_text())


def _num(x):
    return None if x is None else float(x)


def state_to_dict(st: QesState) -> dict:
    spec = potential_spec(st)
    roots = None
    if st.roots is not None:
        roots = [[float(np.real(z)), float(np.imag(z))] for z in st.roots]
    return {
        "family": st.family,
        "n": st.n,
        "parity": None if st.parity is None else st.parity.label,
        "energy": float(st.energy),
        "coeffs": [float(v) for v in st.coeffs],
        "gauge": {k: float(v) for k, v in st.gauge.items()},
        "potential": {k: float(v) for k, v in spec.as_dict().items()},
        "roots": roots,
        "node_count": st.node_count,
        "category": None if st.category is None else st.category.value,
        "provenance": st.provenance,
        "notes": list(st.notes),
    }


def state_from_dict(d: dict) -> QesState:
    roots = None
    if d.get("roots") is not None:
        roots = tuple(complex(re, im) if im else float(re) for re, im in d["roots"])
    gauge = d["gauge"]
    return QesState(
        family=d["family"], n=int(d["n"]), energy=float(d["energy"]),
        coeffs=tuple(float(v) for v in d["coeffs"]),
        a=float(gauge["a"]), b=float(gauge["b"]), c=_num(gauge.get("c")),
        parity=None if d.get("parity") is None else Parity.parse(d["parity"]),
        node_count=d.get("node_count"), provenance=d.get("provenance", "matrix"),
        roots=roots, notes=tuple(d.get("notes", ())))


def report_to_dict(rep: SpectrumReport) -> dict:
    return {
        "parity": rep.parity.label,
        "qes_energy": rep.qes_energy,
        "fd_energy": rep.fd_energy,
        "abs_error": rep.abs_error,
        "matched_index": rep.matched_index,
        "node_count": rep.node_count,
        "converged": rep.converged,
        "passed": rep.passed,
        "eigenvalues": {k: [float(x) for x in v] for k, v in rep.eigenvalues.items()},
        "notes": list(rep.notes),
    }


@dataclass
class ResultDocument:
    command: str
    model: dict
    states: list[QesState] = field(default_factory=list)
    verification: Optional[list[dict]] = None
    diagnostics: list[str] = field(default_factory=list)
    schema_version: str = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "command": self.command,
            "model": self.model,
            "states": [state_to_dict(s) for s in self.states],
            "verification": self.verification,
            "diagnostics": list(self.diagnostics),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "ResultDocument":
        if d.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema_version {d.get('schema_version')!r}")
        return cls(command=d["command"], model=d["model"],
                   states=[state_from_dict(s) for s in d["states"]],
                   verification=d.get("verification"),
                   diagnostics=list(d.get("diagnostics", [])),
                   schema_version=d["schema_version"])

    @classmethod
    def from_json(cls, text: str) -> "ResultDocument":
        return cls.from_dict(json.loads(text))


def grid_csv(xs, columns: dict) -> str:
    """Delimited text: an ``x`` column followed by the named columns."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", *columns])
    cols = [np.asarray(v, dtype=float) for v in columns.values()]
    for i, x in enumerate(np.asarray(xs, dtype=float)):
        w.writerow([repr(float(x)), *(repr(float(c[i])) for c in cols)])
    return buf.getvalue()
