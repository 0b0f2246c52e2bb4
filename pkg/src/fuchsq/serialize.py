"""Versioned JSON for blueprints, kernels, verdicts, certificates and families.

Rationals are written as ``"num/den"`` strings.  Parsing rebuilds every
stored field verbatim, so a loaded blueprint is checked against what was
written rather than silently recomputed.
"""

from __future__ import annotations

import json
from dataclasses import replace
from pathlib import Path
from typing import Any

import jsonschema

from .btree import verdict_from_json
from .certify import FamilyMember, NoncommensurabilityCertificate
from .construct import ConstructionInput, ConstructionTrace, GroupBlueprint, StepRecord
from .errors import SchemaError
from .exactnum import Q, qstr
from .fuchsian import InvolutionData, KernelData, Presentation
from .minkowski import INF, LorentzVector, ray

BLUEPRINT_SCHEMA_ID = "fuchsian-blueprint/1"
CERTIFICATE_SCHEMA_ID = "fuchsian-certificate/1"
KERNEL_SCHEMA_ID = "fuchsian-kernel/1"
MANIFEST_SCHEMA_ID = "fuchsian-family/1"

_RAT = {"type": "string", "pattern": r"^-?[0-9]+(/[0-9]+)?$"}
_BPT = {"type": "string", "pattern": r"^(-?[0-9]+(/[0-9]+)?|inf)$"}
_VEC = {"type": "array", "items": _RAT, "minItems": 3, "maxItems": 3}
_MAT2 = {"type": "array", "minItems": 2, "maxItems": 2,
         "items": {"type": "array", "items": _RAT, "minItems": 2, "maxItems": 2}}
_MAT3 = {"type": "array", "minItems": 3, "maxItems": 3, "items": _VEC}
_POSINT = {"type": "integer", "minimum": 1}

BLUEPRINT_SCHEMA = {
    "type": "object",
    "required": ["schema", "input", "generators", "vertices", "trace", "signature"],
    "properties": {
        "schema": {"const": BLUEPRINT_SCHEMA_ID},
        "input": {
            "type": "object",
            "required": ["points", "v0", "prime", "classes", "x1", "t_init", "retry_cap"],
            "properties": {
                "points": {"type": "array", "items": _RAT, "minItems": 2},
                "v0": _RAT, "x1": _RAT, "t_init": _RAT,
                "prime": _POSINT, "retry_cap": _POSINT,
                "classes": {"type": "array", "items": _POSINT, "minItems": 1},
            },
        },
        "generators": {
            "type": "array", "minItems": 3,
            "items": {
                "type": "object",
                "required": ["index", "f", "lorentz", "matrix", "a", "b_sq", "det_class"],
                "properties": {
                    "index": {"type": "integer", "minimum": 0},
                    "f": _VEC, "lorentz": _MAT3, "matrix": _MAT2,
                    "a": _RAT, "b_sq": _RAT, "det_class": _POSINT,
                },
            },
        },
        "vertices": {
            "type": "array", "minItems": 3,
            "items": {"type": "object", "required": ["point", "vector"],
                      "properties": {"point": _BPT, "vector": _VEC}},
        },
        "trace": {
            "type": "object",
            "required": ["steps", "f_n", "V", "f_0"],
            "properties": {
                "steps": {
                    "type": "array", "minItems": 1,
                    "items": {
                        "type": "object",
                        "required": ["i", "x", "v", "f", "lambda", "t", "abs_norm", "attempts"],
                        "properties": {
                            "i": _POSINT, "x": _RAT, "v": _RAT, "f": _VEC,
                            "lambda": _RAT, "t": _RAT, "abs_norm": _RAT, "attempts": _POSINT,
                        },
                    },
                },
                "f_n": _VEC, "V": _VEC, "f_0": _VEC,
            },
        },
        "signature": {"type": "string"},
    },
}

_LATTICE = {"type": "object", "required": ["prime", "basis"],
            "properties": {"prime": _POSINT, "basis": _MAT2}}

VERDICT_SCHEMA = {
    "type": "object",
    "required": ["prime", "verdict", "reason"],
    "properties": {
        "prime": _POSINT,
        "verdict": {"enum": ["stabilizes", "no"]},
        "witness": _LATTICE,
        "violating_pair": {"type": "array", "items": {"type": "integer", "minimum": 0},
                           "minItems": 2, "maxItems": 2},
        "reason": {"type": "string"},
    },
    "oneOf": [
        {"properties": {"verdict": {"const": "stabilizes"}}, "required": ["witness"]},
        {"properties": {"verdict": {"const": "no"}}, "required": ["violating_pair"]},
    ],
}

CERTIFICATE_SCHEMA = {
    "type": "object",
    "required": ["schema", "prime", "group_a", "verdict_a", "group_b", "verdict_b", "note"],
    "properties": {
        "schema": {"const": CERTIFICATE_SCHEMA_ID},
        "prime": _POSINT,
        "group_a": {"type": "string"}, "group_b": {"type": "string"},
        "verdict_a": VERDICT_SCHEMA, "verdict_b": VERDICT_SCHEMA,
        "note": {"type": "string"},
    },
}

KERNEL_SCHEMA = {
    "type": "object",
    "required": ["schema", "index", "transversal", "generators"],
    "properties": {
        "schema": {"const": KERNEL_SCHEMA_ID},
        "index": _POSINT,
        "image": {"type": "array", "items": _POSINT},
        "transversal": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
        "generators": {
            "type": "array",
            "items": {"type": "object", "required": ["word", "matrix", "det_class"],
                      "properties": {"word": {"type": "array", "items": {"type": "integer"}},
                                     "matrix": _MAT2, "det_class": _POSINT}},
        },
    },
}

MANIFEST_SCHEMA = {
    "type": "object",
    "required": ["schema", "points", "groups", "primes", "certificates"],
    "properties": {
        "schema": {"const": MANIFEST_SCHEMA_ID},
        "points": {"type": "array", "items": _RAT},
        "groups": {"type": "array", "items": {"type": "string"}},
        "primes": {"type": "array", "items": _POSINT},
        "certificates": {"type": "array", "items": {"type": "string"}},
    },
}


def check(data: Any, schema: dict, what: str) -> None:
    try:
        jsonschema.validate(data, schema)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaError(f"{what} schema mismatch at {path}: {exc.message}") from None


# -- small pieces -------------------------------------------------------------

def _bpt(r) -> str:
    return "inf" if r is INF else qstr(r)


def _mat(m) -> list:
    return [[qstr(e) for e in row] for row in m]


def _unmat(rows) -> tuple:
    return tuple(tuple(Q(e) for e in row) for row in rows)


def _vec(data) -> LorentzVector:
    return LorentzVector.from_json(data)


# -- blueprints ---------------------------------------------------------------

def input_to_json(inp: ConstructionInput) -> dict:
    return {
        "points": [qstr(y) for y in inp.points],
        "v0": qstr(inp.v0),
        "prime": inp.prime,
        "classes": list(inp.classes),
        "x1": qstr(inp.x1),
        "t_init": qstr(inp.t_init),
        "retry_cap": inp.retry_cap,
    }


def input_from_json(data: dict) -> ConstructionInput:
    inp = ConstructionInput(
        points=tuple(Q(y) for y in data["points"]),
        v0=Q(data["v0"]),
        prime=int(data["prime"]),
        classes=tuple(int(c) for c in data["classes"]),
        x1=Q(data["x1"]),
        t_init=Q(data["t_init"]),
        retry_cap=int(data["retry_cap"]),
    )
    inp.validate()
    return inp


def blueprint_to_json(b: GroupBlueprint) -> dict:
    tr = b.trace
    return {
        "schema": BLUEPRINT_SCHEMA_ID,
        "input": input_to_json(b.input),
        "generators": [
            {
                "index": g.index,
                "f": g.f.to_json(),
                "lorentz": _mat(g.lorentz),
                "matrix": _mat(g.proj),
                "a": qstr(g.a),
                "b_sq": qstr(g.b_sq),
                "det_class": g.det_class,
            }
            for g in b.generators
        ],
        "vertices": [{"point": _bpt(r), "vector": v.to_json()}
                     for r, v in zip(b.vertices, b.vertex_vectors)],
        "trace": {
            "steps": [
                {
                    "i": s.i, "x": qstr(s.x), "v": qstr(s.v), "f": s.f.to_json(),
                    "lambda": qstr(s.lam), "t": qstr(s.t), "abs_norm": qstr(s.abs_norm),
                    "attempts": s.attempts,
                }
                for s in tr.steps
            ],
            "f_n": tr.f_n.to_json(),
            "V": tr.v_n_vec.to_json(),
            "f_0": tr.f_0.to_json(),
        },
        "signature": b.presentation.signature,
    }


def blueprint_from_json(data: dict) -> GroupBlueprint:
    """Rebuild a blueprint from its JSON form; raises SchemaError on bad input."""
    check(data, BLUEPRINT_SCHEMA, "blueprint")
    try:
        inp = input_from_json(data["input"])
        steps = tuple(
            StepRecord(
                i=int(s["i"]), x=Q(s["x"]), x_vec=ray(Q(s["x"])), v=Q(s["v"]),
                v_vec=None,  # filled below from the vertex list
                f=_vec(s["f"]), lam=Q(s["lambda"]), t=Q(s["t"]),
                abs_norm=Q(s["abs_norm"]), attempts=int(s["attempts"]),
            )
            for s in data["trace"]["steps"]
        )
        vertices = tuple(INF if v["point"] == "inf" else Q(v["point"])
                         for v in data["vertices"])
        vectors = tuple(_vec(v["vector"]) for v in data["vertices"])
        if len(vectors) != len(steps) + 2:
            raise SchemaError("blueprint has inconsistent step and vertex counts")
        steps = tuple(replace(s, v_vec=vectors[s.i]) for s in steps)
        gens = tuple(
            InvolutionData(
                index=int(g["index"]), f=_vec(g["f"]), lorentz=_unmat(g["lorentz"]),
                proj=_unmat(g["matrix"]), a=Q(g["a"]), b_sq=Q(g["b_sq"]),
                det_class=int(g["det_class"]),
            )
            for g in data["generators"]
        )
        tr = data["trace"]
        trace = ConstructionTrace(steps, _vec(tr["f_n"]), _vec(tr["V"]), _vec(tr["f_0"]))
    except (KeyError, ValueError, ZeroDivisionError, TypeError) as exc:
        raise SchemaError(f"blueprint could not be parsed: {exc}") from None
    return GroupBlueprint(
        input=inp,
        generators=gens,
        vertices=vertices,
        vertex_vectors=vectors,
        trace=trace,
        presentation=Presentation.of(len(gens) - 1),
    )


# -- kernels, verdicts, certificates ------------------------------------------

def kernel_to_json(k: KernelData) -> dict:
    return {
        "schema": KERNEL_SCHEMA_ID,
        "index": k.index,
        "image": list(k.image),
        "transversal": [list(w) for w in k.transversal],
        "generators": [{"word": list(g.word), "matrix": _mat(g.proj), "det_class": g.det_class}
                       for g in k.generators],
    }


def verdict_to_json(v) -> dict:
    return v.to_json()


def verdict_from_data(data: dict):
    check(data, VERDICT_SCHEMA, "verdict")
    return verdict_from_json(data)


def certificate_from_json(data: dict) -> NoncommensurabilityCertificate:
    check(data, CERTIFICATE_SCHEMA, "certificate")
    return NoncommensurabilityCertificate.from_json(data)


# -- files --------------------------------------------------------------------

def dumps(data: dict) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def write_json(path: str | Path, data: dict) -> None:
    Path(path).write_text(dumps(data), encoding="utf-8")


def read_json(path: str | Path) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc.msg} at line {exc.lineno})") from None


def load_blueprint(path: str | Path) -> GroupBlueprint:
    return blueprint_from_json(read_json(path))


def save_blueprint(path: str | Path, b: GroupBlueprint) -> None:
    write_json(path, blueprint_to_json(b))


def write_family(out_dir: str | Path, family_id: str, members: list[FamilyMember],
                 certificates: dict[tuple[int, int], NoncommensurabilityCertificate]) -> Path:
    """Write ``<out_dir>/<family_id>/`` with groups, certificates and a manifest."""
    root = Path(out_dir) / family_id
    root.mkdir(parents=True, exist_ok=True)
    for j, m in enumerate(members, start=1):
        save_blueprint(root / f"group_{j}.json", m.blueprint)
    names = []
    for (i, j), cert in sorted(certificates.items()):
        name = f"cert_{i}_{j}.json"
        write_json(root / name, cert.to_json())
        names.append(name)
    manifest = {
        "schema": MANIFEST_SCHEMA_ID,
        "points": [qstr(y) for y in members[0].blueprint.points] if members else [],
        "groups": [f"group_{j}.json" for j in range(1, len(members) + 1)],
        "primes": [m.prime for m in members],
        "certificates": names,
    }
    write_json(root / "manifest.json", manifest)
    return root


def read_family(root: str | Path) -> tuple[list[FamilyMember], dict]:
    root = Path(root)
    manifest = read_json(root / "manifest.json")
    check(manifest, MANIFEST_SCHEMA, "manifest")
    members = [FamilyMember(f"group_{j}", load_blueprint(root / name), p)
               for j, (name, p) in enumerate(zip(manifest["groups"], manifest["primes"]), start=1)]
    certs = {}
    for name in manifest["certificates"]:
        _, i, j = Path(name).stem.split("_")
        certs[(int(i), int(j))] = certificate_from_json(read_json(root / name))
    return members, certs


__all__ = [
    "BLUEPRINT_SCHEMA", "CERTIFICATE_SCHEMA", "KERNEL_SCHEMA", "MANIFEST_SCHEMA", "VERDICT_SCHEMA",
    "blueprint_from_json", "blueprint_to_json", "certificate_from_json", "check", "dumps",
    "input_from_json", "input_to_json", "kernel_to_json", "load_blueprint", "read_family",
    "read_json", "save_blueprint", "verdict_from_data", "verdict_to_json", "write_family",
    "write_json",
]
