"""JSON curve specifications: parsing, emission and the bundled corpus."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

from .curvedef import (CurveError, HMap, WeierstrassCurve, canonical_component, from_quadratic,
                       new_curve)
from .exactpoly import UPoly, parse_rational

_PARTS = ("a1", "a2", "b1", "b2")


class SpecError(CurveError):
    """Malformed curve specification (missing fields, wrong component count)."""


@dataclass
class CurveSpec:
    dim: int
    map: list[dict[str, list[str]]]
    p: list[str] | None = None
    quadratic_form: dict[str, list[str]] | None = None
    name: str | None = None
    expected: dict[str, Any] = field(default_factory=dict)
    questionable: bool = False

    # -- serialisation ---------------------------------------------------------
    @classmethod
    def from_dict(cls, d: dict) -> "CurveSpec":
        if not isinstance(d, dict):
            raise SpecError("a curve specification must be a JSON object")
        has_p, has_q = "p" in d, "quadratic_form" in d
        if has_p == has_q:
            raise SpecError("exactly one of 'p' and 'quadratic_form' is required")
        comps = d.get("map")
        if not isinstance(comps, list) or not comps:
            raise SpecError("'map' must be a non-empty list of components")
        dim = d.get("dim", len(comps))
        if dim not in (2, 3):
            raise SpecError("'dim' must be 2 or 3")
        if len(comps) != dim:
            raise SpecError(f"'map' has {len(comps)} components but dim is {dim}")
        norm_comps = []
        for c in comps:
            if not isinstance(c, dict) or not set(c) <= set(_PARTS):
                raise SpecError("each component needs keys among a1, a2, b1, b2")
            norm_comps.append({k: _coeff_list(c.get(k, [])) for k in _PARTS})
        p = _coeff_list(d["p"]) if has_p else None
        qf = None
        if has_q:
            q = d["quadratic_form"]
            if not isinstance(q, dict) or set(q) != {"psi1", "psi2", "psi3"}:
                raise SpecError("'quadratic_form' needs psi1, psi2 and psi3")
            qf = {k: _coeff_list(q[k]) for k in ("psi1", "psi2", "psi3")}
        return cls(dim, norm_comps, p, qf, d.get("name"), dict(d.get("expected", {})),
                   bool(d.get("questionable", False)))

    def to_dict(self) -> dict:
        out: dict[str, Any] = {}
        if self.name is not None:
            out["name"] = self.name
        out["dim"] = self.dim
        if self.p is not None:
            out["p"] = list(self.p)
        if self.quadratic_form is not None:
            out["quadratic_form"] = {k: list(v) for k, v in self.quadratic_form.items()}
        out["map"] = [{k: list(c[k]) for k in _PARTS} for c in self.map]
        if self.expected:
            out["expected"] = dict(self.expected)
        if self.questionable:
            out["questionable"] = True
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    # -- construction ----------------------------------------------------------
    def build(self) -> tuple[WeierstrassCurve, HMap]:
        """Curve and map, normalising a quadratic form when one is given."""
        raw = [tuple(_poly(c[k]) for k in _PARTS) for c in self.map]
        if self.quadratic_form is not None:
            q = self.quadratic_form
            curve, sub, comps = from_quadratic(_poly(q["psi1"]), _poly(q["psi2"]),
                                               _poly(q["psi3"]), raw)
            return curve, HMap(comps, sub)
        curve = new_curve(_poly(self.p))
        return curve, HMap([canonical_component(*r) for r in raw])


def _coeff_list(xs) -> list[str]:
    if not isinstance(xs, list):
        raise SpecError("coefficient lists must be JSON arrays")
    try:
        vals = [parse_rational(x) for x in xs]
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise SpecError(f"bad coefficient in {xs!r}: {exc}") from None
    while vals and vals[-1] == 0:
        vals.pop()
    return [str(v) for v in vals]


def _poly(xs: list[str]) -> UPoly:
    return UPoly([parse_rational(x) for x in xs])


def parse(text: str) -> CurveSpec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON: {exc}") from None
    return CurveSpec.from_dict(data)


def load(path: str | Path) -> CurveSpec:
    return parse(Path(path).read_text())


def corpus_names() -> list[str]:
    root = resources.files("hypertop") / "corpus"
    return sorted(f.name[:-5] for f in root.iterdir() if f.name.endswith(".json"))


def load_corpus(name: str) -> CurveSpec:
    root = resources.files("hypertop") / "corpus"
    return parse((root / f"{name}.json").read_text())
