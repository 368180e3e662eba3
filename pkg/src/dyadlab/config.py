"""Experiment configuration: a JSON key-value tree with arrays.

Weights are given inline as cell-value arrays or through named seeded
generators (constant, lognormal, power, two_level), so a config file is
a complete, reproducible description of a run.  Rejections carry the
config path and a best-effort line number into the diagnostic.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .mesh import Mesh
from .spaces import Space, space_from_config
from .suites import SUITES, lognormal_weight, power_weight, two_level_weight

__all__ = ["ConfigError", "ExperimentConfig", "parse_config", "render_config", "build_weight"]

KNOWN_CONSTANTS = (
    "A",
    "A_strong",
    "A_sparse",
    "G",
    "muckenhoupt_p",
    "fujii_wilson",
    "op_norm",
    "weak_op_norm",
    "convexity",
    "concavity",
)


class ConfigError(ValueError):
    """Invalid configuration; message carries path and line diagnostics."""


@dataclass
class ExperimentConfig:
    d: int
    L: int
    seed: int
    spaces: list[dict]
    constants: list[dict] = field(default_factory=list)
    suites: list[dict] = field(default_factory=list)
    strict: bool = False
    banach_only: bool = True
    note: str = ""

    def mesh(self) -> Mesh:
        return Mesh(self.d, self.L)

    def build_space(self, index: int) -> Space:
        mesh = self.mesh()
        doc = dict(self.spaces[index])
        return space_from_config(mesh, _materialize_weights(mesh, doc))

    def to_doc(self) -> dict:
        doc = {
            "mesh": {"d": self.d, "L": self.L},
            "seed": self.seed,
            "spaces": self.spaces,
            "constants": self.constants,
            "suites": self.suites,
            "strict": self.strict,
            "banach_only": self.banach_only,
        }
        if self.note:
            doc["note"] = self.note
        return doc


def build_weight(mesh: Mesh, spec) -> np.ndarray:
    """Inline array, or {"generator": name, ...} with a seed where random."""
    if isinstance(spec, list):
        arr = np.asarray(spec, dtype=float)
        if arr.size != mesh.cell_count:
            raise ConfigError(
                f"inline weight has {arr.size} values, mesh needs {mesh.cell_count}"
            )
        return arr.reshape(mesh.shape)
    if isinstance(spec, dict):
        gen = spec.get("generator")
        if gen == "constant":
            return np.full(mesh.shape, float(spec.get("value", 1.0)))
        if gen == "lognormal":
            rng = np.random.default_rng(int(spec.get("seed", 0)))
            return lognormal_weight(mesh, float(spec.get("sigma", 0.5)), rng)
        if gen == "power":
            return power_weight(mesh, float(spec.get("alpha", 0.0)))
        if gen == "two_level":
            return two_level_weight(
                mesh,
                float(spec.get("a", 1.0)),
                float(spec.get("b", 2.0)),
                float(spec.get("split", 0.5)),
            )
        raise ConfigError(f"unknown weight generator {gen!r}")
    raise ConfigError(f"weight must be an array or a generator object, got {type(spec)}")


def _materialize_weights(mesh: Mesh, doc: dict) -> dict:
    out = dict(doc)
    if "weight" in out:
        out["weight"] = [float(v) for v in build_weight(mesh, out["weight"]).reshape(-1)]
    if "inner" in out:
        out["inner"] = _materialize_weights(mesh, out["inner"])
    return out


def _line_of(text: str, token: str) -> int:
    for n, line in enumerate(text.splitlines(), start=1):
        if token in line:
            return n
    return 1


def parse_config(text: str) -> ExperimentConfig:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"line {exc.lineno}: {exc.msg}") from exc
    errors: list[str] = []

    def fail(path: str, msg: str, token: str | None = None):
        line = _line_of(text, token if token is not None else path.split(".")[-1])
        errors.append(f"line {line}: {path}: {msg}")

    mesh_doc = doc.get("mesh")
    if not isinstance(mesh_doc, dict):
        fail("mesh", "missing mesh object", "mesh")
        d, L = 1, 1
    else:
        d = mesh_doc.get("d", 1)
        L = mesh_doc.get("L", 3)
        if not (isinstance(d, int) and d >= 1):
            fail("mesh.d", f"dimension must be an integer >= 1, got {d!r}", '"d"')
        if not (isinstance(L, int) and L >= 0):
            fail("mesh.L", f"depth must be an integer >= 0, got {L!r}", '"L"')
    seed = doc.get("seed", 0)
    banach_only = bool(doc.get("banach_only", True))
    spaces = doc.get("spaces", [])
    if not isinstance(spaces, list):
        fail("spaces", "must be an array", "spaces")
        spaces = []
    for i, sp in enumerate(spaces):
        if not isinstance(sp, dict) or "kind" not in sp:
            fail(f"spaces[{i}]", "space document needs a 'kind'", "kind")
            continue
        _validate_space(sp, f"spaces[{i}]", banach_only, fail)
    constants = doc.get("constants", [])
    for i, c in enumerate(constants):
        name = c.get("name") if isinstance(c, dict) else None
        if name not in KNOWN_CONSTANTS:
            fail(f"constants[{i}].name", f"unknown constant {name!r}", str(name))
        elif name in ("muckenhoupt_p", "fujii_wilson"):
            if "weight" not in c:
                fail(f"constants[{i}]", f"{name} needs a weight", str(name))
            if name == "muckenhoupt_p":
                p = c.get("p", 2.0)
                if not (p == "inf" or (isinstance(p, (int, float)) and p >= 1)):
                    fail(f"constants[{i}].p", f"exponent must be in [1, inf], got {p!r}", '"p"')
        elif not isinstance(c.get("space"), int) or not (0 <= c["space"] < len(spaces)):
            fail(f"constants[{i}].space", "must index into spaces", '"space"')
    suites = doc.get("suites", [])
    for i, s in enumerate(suites):
        sid = s.get("id") if isinstance(s, dict) else None
        if sid not in SUITES:
            fail(f"suites[{i}].id", f"unknown suite {sid!r}", str(sid))
    if errors:
        raise ConfigError("; ".join(errors))
    return ExperimentConfig(
        d=d,
        L=L,
        seed=int(seed),
        spaces=spaces,
        constants=constants,
        suites=suites,
        strict=bool(doc.get("strict", False)),
        banach_only=banach_only,
        note=str(doc.get("note", "")),
    )


def _validate_space(sp: dict, path: str, banach_only: bool, fail) -> None:
    kind = sp["kind"]
    if kind == "weighted_lebesgue":
        p = sp.get("p")
        if p == "inf":
            return
        if not isinstance(p, (int, float)) or p <= 0:
            fail(f"{path}.p", f"exponent must be positive or 'inf', got {p!r}", '"p"')
        elif banach_only and p < 1:
            fail(f"{path}.p", f"exponent {p} < 1 is not allowed under a Banach-only config", '"p"')
    elif kind == "variable_lebesgue":
        pv = sp.get("p")
        if not isinstance(pv, list):
            fail(f"{path}.p", "variable exponent must be an array", '"p"')
        else:
            for v in pv:
                if v != "inf" and (not isinstance(v, (int, float)) or v < 1):
                    fail(f"{path}.p", f"exponent values must be in [1, inf], got {v!r}", '"p"')
                    break
    elif kind == "morrey":
        p, q = sp.get("p"), sp.get("q")
        pv = math.inf if p == "inf" else p
        qv = math.inf if q == "inf" else q
        if not (isinstance(pv, (int, float)) and isinstance(qv, (int, float)) and 1 <= pv <= qv):
            fail(f"{path}", f"Morrey needs 1 <= p <= q, got ({p!r}, {q!r})", '"q"')
    elif kind == "concavification":
        r = sp.get("r")
        if not isinstance(r, (int, float)) or r <= 0:
            fail(f"{path}.r", f"concavification exponent must be positive, got {r!r}", '"r"')
        elif banach_only and r > 1:
            fail(f"{path}.r", "r > 1 may leave the Banach range under a Banach-only config", '"r"')
        if isinstance(sp.get("inner"), dict):
            _validate_space(sp["inner"], f"{path}.inner", False, fail)
    elif kind in ("kothe_dual", "weak_type", "musielak_orlicz", "orlicz_amemiya"):
        if kind in ("kothe_dual", "weak_type"):
            inner = sp.get("inner")
            if not isinstance(inner, dict) or "kind" not in inner:
                fail(f"{path}.inner", "needs an inner space document", '"inner"')
            else:
                _validate_space(inner, f"{path}.inner", banach_only, fail)
    else:
        fail(f"{path}.kind", f"unknown space kind {kind!r}", str(kind))


def render_config(cfg: ExperimentConfig) -> str:
    """Canonical rendering: parse(render(parse(x))) == parse(x)."""
    return json.dumps(cfg.to_doc(), sort_keys=True, indent=2) + "\n"
