"""JSON file formats: algebra/variety files, word-system files, free
algebra dumps, and equivalence certificates.

Algebra file::

    {"signature": [{"name": "meet", "arity": 2}],
     "algebras": [{"name": "S2", "size": 2, "ops": {"meet": [[0,0],[0,1]]}}],
     "identities": [["meet(x1,x2)", "meet(x2,x1)"]]}        # optional

Tables are nested row-major arrays, index order = argument order;
constants are scalars.  Word-system file::

    {"words": {"mul": "mul(x2,x1)", "inv": "inv(x1)", "e": "e"}}
"""

from __future__ import annotations

import json

from .algebras import FiniteAlgebra
from .errors import ParseError
from .free import FreeAlgebra, VarietySpec
from .terms import Signature, format_term, parse_term
from .verbal import WordSystem

MAX_IDENTITY_VARS = 9


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from None


def load_algebra_file(path):
    """Returns (signature, algebras, identities)."""
    doc = _load_json(path)
    if not isinstance(doc, dict) or "signature" not in doc:
        raise ParseError(f"{path}: expected an object with a 'signature' key")
    try:
        sig = Signature(
            [(entry["name"], entry["arity"]) for entry in doc["signature"]]
        )
    except (TypeError, KeyError):
        raise ParseError(
            f"{path}: signature entries must be objects with 'name' and 'arity'"
        ) from None
    algebras = []
    for spec in doc.get("algebras", []):
        try:
            name, size, ops = spec["name"], spec["size"], spec["ops"]
        except (TypeError, KeyError):
            raise ParseError(
                f"{path}: algebra entries must carry 'name', 'size' and 'ops'"
            ) from None
        algebras.append(FiniteAlgebra(name, sig, size, ops))
    identities = []
    for pair in doc.get("identities", []):
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise ParseError(f"{path}: identities must be [lhs, rhs] pairs")
        identities.append(
            (
                parse_term(pair[0], sig, MAX_IDENTITY_VARS),
                parse_term(pair[1], sig, MAX_IDENTITY_VARS),
            )
        )
    return sig, algebras, identities


def load_variety_file(path) -> VarietySpec:
    sig, algebras, identities = load_algebra_file(path)
    if not algebras:
        raise ParseError(f"{path}: a variety file needs at least one algebra")
    return VarietySpec(algebras, identities)


def load_word_file(path, sig: Signature) -> WordSystem:
    doc = _load_json(path)
    if not isinstance(doc, dict) or "words" not in doc:
        raise ParseError(f"{path}: expected an object with a 'words' key")
    nvars = max(sig.max_arity(), 1)
    words = {
        name: parse_term(text, sig, nvars) for name, text in doc["words"].items()
    }
    return WordSystem(sig, words)


def word_system_json(ws: WordSystem) -> dict:
    return {"words": {name: format_term(w) for name, w in ws.items()}}


def free_dump_json(free: FreeAlgebra) -> dict:
    return {
        "variety": free.variety.fingerprint(),
        "rank": free.nvars,
        "size": free.size,
        "generators": list(free.generator_indices),
        "elements": [
            {"index": i, "witness": format_term(w)}
            for i, w in enumerate(free.witnesses)
        ],
    }


def certificate_json(cert) -> dict:
    doc = {"verdict": cert.verdict, "bounds": cert.bounds}
    if cert.word_system is not None:
        doc["word_system"] = word_system_json(cert.word_system)["words"]
    doc["evidence"] = cert.evidence
    return doc


def write_output(text: str, path=None):
    if path is None:
        print(text, end="" if text.endswith("\n") else "\n")
    else:
        with open(path, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2)
