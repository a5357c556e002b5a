"""Quivers, double quivers, the Euler form and affine classification."""

import logging
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Mapping, Sequence

import networkx as nx
import numpy as np
import sympy

log = logging.getLogger("preproj.quiver_core")
log.setLevel(os.getenv("PREPROJ_LOG_LEVEL", "INFO"))

INFINITY = "∞"
STAR = "*"
CONNECTING_ARROW = "a" + INFINITY

DimVector = dict  # vertex -> int
Weights = dict  # vertex -> scalar


class ArrowNameCollision(ValueError):
    def __init__(self, name: str):
        self.name = name

    def __str__(self):
        return f"Arrow name {self.name!r} is already taken."


class VertexMismatch(ValueError):
    def __init__(self, expected: Iterable, got: Iterable):
        self.expected = list(expected)
        self.got = list(got)

    def __str__(self):
        return f"Expected vertices {self.expected}, got {self.got}."


class DisconnectedQuiver(ValueError):
    def __init__(self, components: int):
        self.components = components

    def __str__(self):
        return f"Quiver is not connected ({self.components} components)."


class CyclicQuiver(ValueError):
    def __str__(self):
        return "Quiver has an oriented cycle; paths are not finite in number."


class UnknownQuiver(KeyError):
    def __init__(self, name: str):
        self.name = name

    def __str__(self):
        return f"Unknown quiver {self.name!r}; expected jordan, cycle:n, kronecker, Dtilde4 or atilde:n."


@dataclass(frozen=True)
class Arrow:
    name: str
    tail: str
    head: str

    def to_json(self) -> dict:
        return {"name": self.name, "tail": self.tail, "head": self.head}


@dataclass(frozen=True)
class Quiver:
    """A finite quiver. Vertex and arrow order is the declaration order and drives every iteration."""

    vertices: tuple
    arrows: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(str(v) for v in self.vertices))
        object.__setattr__(
            self, "arrows", tuple(Arrow(str(a.name), str(a.tail), str(a.head)) for a in self.arrows)
        )
        if len(set(self.vertices)) != len(self.vertices):
            raise VertexMismatch(sorted(set(self.vertices)), self.vertices)
        names = set()
        for a in self.arrows:
            if a.name in names:
                raise ArrowNameCollision(a.name)
            names.add(a.name)
            if a.tail not in self.vertices or a.head not in self.vertices:
                raise VertexMismatch(self.vertices, [a.tail, a.head])

    @classmethod
    def from_json(cls, obj: Mapping) -> "Quiver":
        return cls(
            tuple(obj["vertices"]),
            tuple(Arrow(a["name"], a["tail"], a["head"]) for a in obj.get("arrows", [])),
        )

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "arrows": [a.to_json() for a in self.arrows]}

    def index(self, vertex: Any) -> int:
        return self.vertices.index(str(vertex))

    def arrow(self, name: str) -> Arrow:
        for a in self.arrows:
            if a.name == name:
                return a
        raise KeyError(name)

    def arrow_names(self) -> list:
        return [a.name for a in self.arrows]

    def graph(self) -> nx.MultiDiGraph:
        G = nx.MultiDiGraph()
        G.add_nodes_from(self.vertices)
        for a in self.arrows:
            G.add_edge(a.tail, a.head, key=a.name)
        return G

    def has_oriented_cycle(self) -> bool:
        return not nx.is_directed_acyclic_graph(self.graph())

    def is_oriented_cycle(self) -> bool:
        """Whether the underlying graph is a single cycle traversed in one direction (a loop counts)."""
        n = len(self.vertices)
        if n == 0 or len(self.arrows) != n:
            return False
        outs = {v: 0 for v in self.vertices}
        ins = dict(outs)
        for a in self.arrows:
            outs[a.tail] += 1
            ins[a.head] += 1
        return all(outs[v] == ins[v] == 1 for v in self.vertices) and nx.is_weakly_connected(self.graph())

    def vector(self, alpha: Mapping | Sequence) -> np.ndarray:
        """Integer vector of a dimension vector, in vertex order."""
        if isinstance(alpha, Mapping):
            alpha = {str(k): x for k, x in alpha.items()}
            if set(alpha) != set(self.vertices):
                raise VertexMismatch(self.vertices, alpha)
            return np.array([int(alpha[v]) for v in self.vertices])
        if len(alpha) != len(self.vertices):
            raise VertexMismatch(self.vertices, range(len(alpha)))
        return np.array([int(x) for x in alpha])

    def dim_vector(self, alpha: Mapping | Sequence) -> DimVector:
        return dict(zip(self.vertices, (int(x) for x in self.vector(alpha))))


def starred(name: str) -> str:
    return name + STAR


def is_starred(name: str) -> bool:
    return name.endswith(STAR)


def double_quiver(Q: Quiver) -> Quiver:
    names = set(Q.arrow_names())
    stars = []
    for a in Q.arrows:
        if is_starred(a.name) or starred(a.name) in names:
            raise ArrowNameCollision(starred(a.name))
        stars.append(Arrow(starred(a.name), a.head, a.tail))
    return Quiver(Q.vertices, Q.arrows + tuple(stars))


def opposite(Q: Quiver) -> Quiver:
    return reorient_quiver(Q, Q.arrow_names())


def reorient_quiver(Q: Quiver, flips: Iterable[str]) -> Quiver:
    flips = set(flips)
    unknown = flips - set(Q.arrow_names())
    if unknown:
        raise KeyError(f"no arrows named {sorted(unknown)}")
    return Quiver(Q.vertices, tuple(Arrow(a.name, a.head, a.tail) if a.name in flips else a for a in Q.arrows))


def euler_form(Q: Quiver, alpha, beta) -> int:
    a, b = Q.vector(alpha), Q.vector(beta)
    value = int(a @ b)
    for arrow in Q.arrows:
        value -= int(a[Q.index(arrow.tail)]) * int(b[Q.index(arrow.head)])
    return value


def symmetrized_form(Q: Quiver) -> sympy.Matrix:
    """Gram matrix of (x, y) = <x, y> + <y, x>."""
    n = len(Q.vertices)
    S = sympy.Matrix.eye(n) * 2
    for a in Q.arrows:
        i, j = Q.index(a.tail), Q.index(a.head)
        S[i, j] -= 1
        S[j, i] -= 1
    return S


@dataclass(frozen=True)
class AffineData:
    is_affine: bool
    delta: DimVector | None
    extending_vertices: tuple
    has_oriented_cycle: bool

    def to_json(self) -> dict:
        return {
            "is_affine": self.is_affine,
            "delta": None if self.delta is None else list(self.delta.values()),
            "extending_vertices": list(self.extending_vertices),
            "has_oriented_cycle": self.has_oriented_cycle,
        }


def _positive_definite(S: sympy.Matrix) -> bool:
    return S.rows == 0 or S.is_positive_definite


def affine_classify(Q: Quiver) -> AffineData:
    G = Q.graph()
    if not Q.vertices or not nx.is_weakly_connected(G):
        raise DisconnectedQuiver(nx.number_weakly_connected_components(G))
    cyclic = Q.has_oriented_cycle()
    S = symmetrized_form(Q)
    radical = S.nullspace()
    if not S.is_positive_semidefinite or len(radical) != 1:
        return AffineData(False, None, (), cyclic)

    generator = [Fraction(int(x.p), int(x.q)) for x in radical[0]]
    scale = math.lcm(*(x.denominator for x in generator))
    ints = [int(x * scale) for x in generator]
    common = math.gcd(*ints)
    ints = [x // common for x in ints]
    if ints[0] < 0:
        ints = [-x for x in ints]
    delta = dict(zip(Q.vertices, ints))

    extending = []
    for i, v in enumerate(Q.vertices):
        if delta[v] != 1:
            continue
        keep = [j for j in range(len(Q.vertices)) if j != i]
        if _positive_definite(S.extract(keep, keep)):
            extending.append(v)
    log.debug(f"affine quiver: {delta=} {extending=}")
    return AffineData(True, delta, tuple(extending), cyclic)


def defect(Q: Quiver, aff: AffineData, alpha) -> int:
    if not aff.is_affine:
        raise ValueError("defect is only defined for affine quivers")
    return euler_form(Q, aff.delta, alpha)


def infinity_quiver(Q: Quiver, v: Any, lam: Weights) -> tuple[Quiver, Weights]:
    """Adjoin a vertex ∞ and an arrow ∞ -> v; the weight at ∞ is zero."""
    v = str(v)
    if INFINITY in Q.vertices:
        raise VertexMismatch(Q.vertices, [INFINITY])
    if v not in Q.vertices:
        raise VertexMismatch(Q.vertices, [v])
    name = CONNECTING_ARROW
    if name in Q.arrow_names() or starred(name) in Q.arrow_names():
        raise ArrowNameCollision(name)
    Qinf = Quiver(Q.vertices + (INFINITY,), Q.arrows + (Arrow(name, INFINITY, v),))
    lam = {str(k): x for k, x in lam.items()}
    sample = lam[v]
    lam_inf = {**{u: lam[u] for u in Q.vertices}, INFINITY: sample - sample}
    return Qinf, lam_inf


def proj_dim_vector(Q: Quiver, i: Any) -> DimVector:
    """Number of paths from i to each vertex."""
    G = Q.graph()
    if not nx.is_directed_acyclic_graph(G):
        raise CyclicQuiver()
    counts = {v: 0 for v in Q.vertices}
    counts[str(i)] = 1
    for u in nx.topological_sort(G):
        for _, w, _ in G.out_edges(u, keys=True):
            counts[w] += counts[u]
    return counts


def inj_dim_vector(Q: Quiver, i: Any) -> DimVector:
    """Number of paths from each vertex to i."""
    return proj_dim_vector(opposite(Q), i)


def weights_dot(lam: Weights, alpha: Mapping):
    """lambda . alpha as a field scalar."""
    total = None
    for v, x in lam.items():
        term = x * int(alpha[v])
        total = term if total is None else total + term
    return total
