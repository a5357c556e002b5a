"""JSON forms of representations and instances, command-line value parsers and instance hashes.

Field elements are never JSON numbers: GF(p^k) entries are coefficient arrays, rationals are strings.
"""

import hashlib
import json
import os
from dataclasses import dataclass
from typing import Any

from exact_linalg import FieldSpec, InvalidFieldSpec
from quiver_core import Quiver, VertexMismatch, double_quiver, named_quiver
from rep_core import PairRep, Representation, ShapeMismatch


class MalformedInstance(ValueError):
    def __init__(self, reason: str):
        self.reason = reason

    def __str__(self):
        return f"Malformed instance: {self.reason}."


def canonical_json(value: Any) -> str:
    return json.dumps(value, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def instance_hash(value: Any) -> str:
    return hashlib.sha256(canonical_json(value).encode("utf-8")).hexdigest()


def _matrices_to_json(R: Representation, names) -> dict:
    return {name: R.field.encode_array(R[name]) for name in names}


def rep_to_json(R: Representation) -> dict:
    return {
        "quiver": R.quiver.to_json(),
        "field": R.field.to_json(),
        "dims": R.dims,
        "matrices": _matrices_to_json(R, R.quiver.arrow_names()),
    }


def rep_from_json(obj: dict) -> Representation:
    try:
        Q = Quiver.from_json(obj["quiver"])
        F = FieldSpec.parse(obj["field"])
        dims = Q.dim_vector(obj["dims"])
        matrices = {
            a.name: F.array(obj["matrices"][a.name], shape=(dims[a.head], dims[a.tail])) for a in Q.arrows
        }
        return Representation(Q, F, dims, matrices)
    except (KeyError, TypeError, ValueError) as e:
        raise MalformedInstance(str(e))


@dataclass(frozen=True, eq=False)
class Instance:
    pair: PairRep
    lam: dict | None = None
    vertex: str | None = None


def instance_to_json(pair: PairRep, lam: dict | None = None, vertex: Any = None) -> dict:
    """The double-quiver representation JSON plus "base_quiver"; starred arrows carry xi under their "a*" names."""
    F = pair.field
    Q = pair.base_quiver
    out = {**rep_to_json(pair.rep), "base_quiver": Q.to_json()}
    if lam is not None:
        out["lambda"] = {u: F.encode(F.scalar(lam[u])) for u in Q.vertices}
    if vertex is not None:
        out["vertex"] = str(vertex)
    return out


def _pair_from_parts(obj: dict) -> PairRep:
    # older files kept X and xi under separate keys; xi[a] is shaped like the transpose of X[a]
    Q = Quiver.from_json(obj["quiver"])
    F = FieldSpec.parse(obj["field"])
    dims = Q.dim_vector(obj["dims"])
    X = {a.name: F.array(obj["X"][a.name], shape=(dims[a.head], dims[a.tail])) for a in Q.arrows}
    xi = {a.name: F.array(obj["xi"][a.name], shape=(dims[a.tail], dims[a.head])) for a in Q.arrows}
    return PairRep.from_parts(Q, F, dims, X, xi)


def _pair_from_rep(obj: dict) -> PairRep:
    Q = Quiver.from_json(obj["base_quiver"])
    rep = rep_from_json({**obj, "quiver": obj.get("quiver", double_quiver(Q).to_json())})
    return PairRep(Q, rep)


def is_instance_json(obj: Any) -> bool:
    return isinstance(obj, dict) and ("base_quiver" in obj or "xi" in obj)


def instance_from_json(obj: dict) -> Instance:
    """Inverse of instance_to_json. Files with separate "X" and "xi" keys are read as well."""
    try:
        pair = _pair_from_parts(obj) if "base_quiver" not in obj and "xi" in obj else _pair_from_rep(obj)
        Q, F = pair.base_quiver, pair.field
        lam = None
        if obj.get("lambda") is not None:
            lam = {str(u): F.decode(x) for u, x in obj["lambda"].items()}
            if set(lam) != set(Q.vertices):
                raise VertexMismatch(Q.vertices, lam)
        vertex = obj.get("vertex")
        return Instance(pair, lam, None if vertex is None else str(vertex))
    except MalformedInstance:
        raise
    except (KeyError, TypeError, ValueError, InvalidFieldSpec, ShapeMismatch) as e:
        raise MalformedInstance(str(e))


def load_json(path: str) -> Any:
    with open(path, encoding="utf-8") as fp:
        return json.load(fp)


# command-line values


def quiver_from_arg(text: str) -> Quiver:
    """A named quiver, or a path to a JSON file {"vertices": [...], "arrows": [...]}."""
    if os.path.isfile(text):
        try:
            return Quiver.from_json(load_json(text))
        except (KeyError, TypeError, json.JSONDecodeError) as e:
            raise MalformedInstance(f"{text}: {e}")
    return named_quiver(text)


def _assignments(text: str) -> dict:
    out = {}
    for item in text.split(","):
        if not item.strip():
            continue
        key, sep, value = item.partition("=")
        if not sep:
            raise MalformedInstance(f"expected vertex=value, got {item!r}")
        out[key.strip()] = value.strip()
    return out


def _keyed(Q: Quiver, text: str) -> dict:
    text = text.strip()
    if text.startswith("{") or text.startswith("["):
        try:
            value = json.loads(text)
        except json.JSONDecodeError as e:
            raise MalformedInstance(str(e))
        if isinstance(value, list):
            if len(value) != len(Q.vertices):
                raise VertexMismatch(Q.vertices, range(len(value)))
            return dict(zip(Q.vertices, value))
        return {str(k): x for k, x in value.items()}
    return _assignments(text)


def weights_from_arg(text: str, Q: Quiver, field: FieldSpec) -> dict:
    """--lambda as a JSON object or list, or inline "i=val,..."; vertices not named get weight zero."""
    given = _keyed(Q, text)
    unknown = set(given) - set(Q.vertices)
    if unknown:
        raise VertexMismatch(Q.vertices, sorted(unknown))
    return {u: field.scalar(given.get(u, 0)) for u in Q.vertices}


def parse_dims(text: str, Q: Quiver) -> dict:
    given = _keyed(Q, text)
    try:
        return Q.dim_vector({u: int(given[u]) for u in Q.vertices})
    except KeyError as e:
        raise MalformedInstance(f"no dimension for vertex {e}")
