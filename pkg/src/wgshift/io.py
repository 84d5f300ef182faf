"""JSON documents for operators, vectors, alphabets and sum manifests.

Complex numbers are ``[re, im]`` pairs.  Operator documents are dense: every
weight is written, zeros included, and keys always come in the order
``schema_version, n, phi, weights``.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any, List, Optional, Tuple, Union

import numpy as np

from .adjoint import DecompositionResult
from .core import DomainError, WgsError, WgsOperator, as_vector
from .semigroup import Annulus, FiniteSet, NullSequence, WeightAlphabet

__all__ = [
    "SCHEMA_VERSION",
    "DocumentParseError",
    "ValidationError",
    "load_operator",
    "save_operator",
    "operator_to_dict",
    "operator_from_dict",
    "load_vector",
    "save_vector",
    "load_alphabet",
    "save_alphabet",
    "load_sum_manifest",
    "save_decomposition",
    "dumps",
]

SCHEMA_VERSION = "1"
PathLike = Union[str, Path]


class DocumentParseError(WgsError, ValueError):
    """Malformed JSON; ``offset`` is the byte offset of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte offset {offset}")
        self.offset = offset


class ValidationError(DomainError):
    """Well-formed JSON that does not describe a valid object."""


def _number(x: float) -> Union[int, float]:
    # shortest round-trip text; integral values print without a fraction
    x = float(x)
    if x.is_integer() and abs(x) < 2**53 and not (x == 0 and math.copysign(1.0, x) < 0):
        return int(x)
    return x


def _pair(z: complex) -> List[Union[int, float]]:
    return [_number(z.real), _number(z.imag)]


def dumps(obj: Any) -> str:
    return json.dumps(obj, separators=(",", ":"), allow_nan=False)


def _parse(text: Union[str, bytes]) -> Any:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        offset = len(text[: exc.pos].encode("utf-8"))
        raise DocumentParseError(exc.msg, offset) from None


def _real(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{where} must be a number, got {value!r}")
    x = float(value)
    if not math.isfinite(x):
        raise ValidationError(f"{where} is not finite")
    return x


def _complex_list(items, where: str) -> np.ndarray:
    if not isinstance(items, list):
        raise ValidationError(f"{where} must be a list of [re, im] pairs")
    out = np.empty(len(items), dtype=np.complex128)
    for i, pair in enumerate(items):
        if not isinstance(pair, list) or len(pair) != 2:
            raise ValidationError(f"{where}[{i}] must be a [re, im] pair, got {pair!r}")
        out[i] = complex(_real(pair[0], f"{where}[{i}][0]"), _real(pair[1], f"{where}[{i}][1]"))
    return out


def _check_version(doc: dict, what: str):
    version = doc.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ValidationError(f"unsupported {what} schema_version {version!r}")


def operator_to_dict(op: WgsOperator) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "n": op.n,
        "phi": op.phi.tolist(),
        "weights": [_pair(w) for w in op.weights.tolist()],
    }


def operator_from_dict(doc: Any) -> WgsOperator:
    if not isinstance(doc, dict):
        raise ValidationError("operator document must be a JSON object")
    _check_version(doc, "operator")
    for key in ("n", "phi", "weights"):
        if key not in doc:
            raise ValidationError(f"missing field {key!r}")
    n = doc["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ValidationError(f"n must be a positive integer, got {n!r}")
    phi = doc["phi"]
    if not isinstance(phi, list):
        raise ValidationError("phi must be a list of integers")
    if len(phi) != n:
        raise ValidationError(f"phi has {len(phi)} entries, expected n={n}")
    for i, v in enumerate(phi):
        if isinstance(v, bool) or not isinstance(v, int):
            raise ValidationError(f"phi[{i}]={v!r} is not an integer")
        if not 0 <= v < n:
            raise ValidationError(f"phi[{i}]={v} out of range [0,{n})")
    weights = _complex_list(doc["weights"], "weights")
    if len(weights) != n:
        raise ValidationError(f"weights has {len(weights)} entries, expected n={n}")
    return WgsOperator(np.asarray(phi, dtype=np.intp), weights)


def load_operator(document: Union[str, bytes]) -> WgsOperator:
    """Parse an operator document.

    >>> op = load_operator('{"schema_version":"1","n":2,"phi":[1,0],"weights":[[0,1],[2,0]]}')
    >>> op.weights.tolist()
    [1j, (2+0j)]
    """
    return operator_from_dict(_parse(document))


def save_operator(op: WgsOperator) -> str:
    return dumps(operator_to_dict(op))


def load_vector(document: Union[str, bytes], n: Optional[int] = None) -> np.ndarray:
    """Accepts ``{"n": .., "coords": [[re, im], ...]}`` or a bare list of pairs."""
    doc = _parse(document)
    if isinstance(doc, dict):
        _check_version(doc, "vector")
        if "coords" not in doc:
            raise ValidationError("missing field 'coords'")
        coords = _complex_list(doc["coords"], "coords")
        if "n" in doc and doc["n"] != len(coords):
            raise ValidationError(f"coords has {len(coords)} entries, expected n={doc['n']}")
    else:
        coords = _complex_list(doc, "coords")
    if n is not None and len(coords) != n:
        raise ValidationError(f"vector has length {len(coords)}, expected {n}")
    return as_vector(coords)


def save_vector(x) -> str:
    x = as_vector(x)
    return dumps({"schema_version": SCHEMA_VERSION, "n": int(x.shape[0]), "coords": [_pair(z) for z in x.tolist()]})


def alphabet_from_dict(doc: Any) -> WeightAlphabet:
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ValidationError("alphabet document must be an object with a 'kind'")
    kind = doc["kind"]
    try:
        if kind == "finite":
            return FiniteSet(tuple(_complex_list(doc.get("elements"), "elements").tolist()))
        if kind == "annulus":
            return Annulus(_real(doc.get("delta"), "delta"))
        if kind == "null_sequence":
            rule = doc.get("rule", "reciprocal")
            ratio = doc.get("ratio")
            scale = doc.get("scale")
            if ratio is not None:
                ratio = _real(ratio, "ratio")
            if isinstance(scale, list):
                scale = complex(_complex_list([scale], "scale")[0])
            elif scale is not None:
                scale = _real(scale, "scale")
            return NullSequence(rule, ratio, scale)
    except ValidationError:
        raise
    except DomainError as exc:
        raise ValidationError(str(exc)) from None
    raise ValidationError(f"unknown alphabet kind {kind!r}")


def load_alphabet(document: Union[str, bytes]) -> WeightAlphabet:
    return alphabet_from_dict(_parse(document))


def save_alphabet(a: WeightAlphabet) -> str:
    if isinstance(a, FiniteSet):
        return dumps({"kind": "finite", "elements": [_pair(z) for z in a.elements]})
    if isinstance(a, Annulus):
        return dumps({"kind": "annulus", "delta": _number(a.delta)})
    if isinstance(a, NullSequence):
        doc: dict = {"kind": "null_sequence", "rule": a.rule}
        if a.rule == "geometric":
            doc["ratio"] = a.ratio
            doc["scale"] = _pair(a.scale)
        return dumps(doc)
    raise TypeError(f"unsupported alphabet {type(a).__name__}")


def load_sum_manifest(path: PathLike) -> Tuple[int, List[WgsOperator], dict]:
    """Load a sum manifest: ``{"n": .., "terms": [...]}``.

    Each entry of ``terms`` is either an inline operator document or a path
    to one, relative to the manifest.  Returns ``(n, terms, manifest)``.
    """
    path = Path(path)
    manifest = _parse(path.read_bytes())
    if not isinstance(manifest, dict) or not isinstance(manifest.get("terms"), list):
        raise ValidationError(f"{path}: manifest must be an object with a 'terms' list")
    _check_version(manifest, "manifest")
    terms = []
    for i, entry in enumerate(manifest["terms"]):
        if isinstance(entry, str):
            term_path = path.parent / entry
            try:
                terms.append(load_operator(term_path.read_bytes()))
            except ValidationError as exc:
                raise ValidationError(f"{term_path}: {exc}") from None
        else:
            try:
                terms.append(operator_from_dict(entry))
            except ValidationError as exc:
                raise ValidationError(f"terms[{i}]: {exc}") from None
    n = manifest.get("n", terms[0].n if terms else None)
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ValidationError(f"{path}: manifest needs a positive integer 'n'")
    for i, t in enumerate(terms):
        if t.n != n:
            raise ValidationError(f"{path}: term {i} has dimension {t.n}, expected {n}")
    return n, terms, manifest


def save_decomposition(result: DecompositionResult, out_dir: PathLike) -> Path:
    """Write one operator document per term plus ``manifest.json``; returns the manifest path."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    names = []
    for i, term in enumerate(result.terms):
        name = f"term_{i:03d}.json"
        (out / name).write_text(save_operator(term) + "\n")
        names.append(name)
    manifest = {
        "schema_version": SCHEMA_VERSION,
        "kind": "adjoint",
        "n": result.n,
        "term_count": len(result.terms),
        "anchor": result.anchor,
        "fiber_counts": list(result.fiber_counts),
        "source_norm": result.source_norm,
        "terms": names,
    }
    path = out / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2) + "\n")
    return path
