"""Weighted finite graphs and the discrete differential calculus built on them.

A graph carries a positive vertex measure ``mu`` and positive symmetric edge
weights ``w``.  All operators below treat a function as zero outside the set
where it is defined, which is exact for functions supported on a domain with
Dirichlet boundary values.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .errors import InputError, ParameterError, ValidationError

Edge = tuple[str, str]


def _edge_key(a: str, b: str) -> Edge:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class WeightedGraph:
    """Connected weighted graph with a positive vertex measure.

    ``weights`` is keyed by the sorted vertex pair, so symmetry of the edge
    weight is structural.  Instances are built through :meth:`build`, which
    validates every invariant and names the violated one on failure.
    """

    vertices: tuple[str, ...]
    measure: dict[str, float]
    weights: dict[Edge, float]
    adjacency: dict[str, tuple[str, ...]]

    @property
    def mu_min(self) -> float:
        """Smallest vertex measure (the global positive lower bound)."""
        return min(self.measure.values())

    def mu(self, x: str) -> float:
        return self.measure[x]

    def weight(self, x: str, y: str) -> float:
        return self.weights[_edge_key(x, y)]

    def neighbors(self, x: str) -> tuple[str, ...]:
        return self.adjacency[x]

    @classmethod
    def build(
        cls,
        measure: Mapping[str, float],
        edges: Iterable[tuple[str, str, float]],
    ) -> "WeightedGraph":
        """Validate raw vertex/edge data and assemble a graph.

        Raises :class:`ValidationError` naming the violated invariant:
        ``measure_positive``, ``vertex_known``, ``no_self_loops``,
        ``edge_weight_positive``, ``edge_weight_symmetric``,
        ``duplicate_edge`` or ``connected``.
        """
        vertices = tuple(sorted(measure))
        if not vertices:
            raise ValidationError("vertex_set_nonempty", "graph has no vertices")
        for x, mu in measure.items():
            if not (isinstance(mu, (int, float)) and math.isfinite(mu) and mu > 0):
                raise ValidationError(
                    "measure_positive", f"mu({x}) = {mu!r} is not a positive real"
                )
        weights: dict[Edge, float] = {}
        oriented_seen: set[tuple[str, str]] = set()
        for a, b, w in edges:
            if a not in measure or b not in measure:
                raise ValidationError(
                    "vertex_known", f"edge ({a}, {b}) references an unknown vertex"
                )
            if a == b:
                raise ValidationError("no_self_loops", f"self loop at {a}")
            if not (isinstance(w, (int, float)) and math.isfinite(w) and w > 0):
                raise ValidationError(
                    "edge_weight_positive", f"w({a}, {b}) = {w!r} is not positive"
                )
            if (a, b) in oriented_seen:
                raise ValidationError("duplicate_edge", f"edge ({a}, {b}) listed twice")
            oriented_seen.add((a, b))
            key = _edge_key(a, b)
            if key in weights and weights[key] != w:
                raise ValidationError(
                    "edge_weight_symmetric",
                    f"edge {key} listed with weights {weights[key]} and {w}",
                )
            weights[key] = float(w)
        adjacency: dict[str, list[str]] = {x: [] for x in vertices}
        for (a, b) in weights:
            adjacency[a].append(b)
            adjacency[b].append(a)
        adj = {x: tuple(sorted(ys)) for x, ys in adjacency.items()}
        graph = cls(
            vertices=vertices,
            measure={x: float(measure[x]) for x in vertices},
            weights=weights,
            adjacency=adj,
        )
        if not graph._is_connected():
            raise ValidationError("connected", "graph is not connected")
        return graph

    def _is_connected(self) -> bool:
        if len(self.vertices) == 1:
            return True
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            x = stack.pop()
            for y in self.adjacency[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(self.vertices)

    def to_json_dict(self, omega: Iterable[str] = ()) -> dict:
        return {
            "vertices": [{"id": x, "mu": self.measure[x]} for x in self.vertices],
            "edges": [
                {"a": a, "b": b, "w": w} for (a, b), w in sorted(self.weights.items())
            ],
            "omega": sorted(omega),
        }


@dataclass(frozen=True)
class VertexFunction:
    """Real-valued function on a vertex set, zero-extended elsewhere.

    ``zero_boundary`` asserts that the function vanishes on the boundary of
    the domain it was built against; arithmetic preserves the flag.
    """

    values: Mapping[str, float]
    zero_boundary: bool = False

    def value(self, x: str) -> float:
        return self.values.get(x, 0.0)

    def __call__(self, x: str) -> float:
        return self.values.get(x, 0.0)

    def __add__(self, other: "VertexFunction") -> "VertexFunction":
        keys = set(self.values) | set(other.values)
        return VertexFunction(
            {x: self.value(x) + other.value(x) for x in keys},
            zero_boundary=self.zero_boundary and other.zero_boundary,
        )

    def __sub__(self, other: "VertexFunction") -> "VertexFunction":
        return self + other * (-1.0)

    def __mul__(self, scalar: float) -> "VertexFunction":
        return VertexFunction(
            {x: v * scalar for x, v in self.values.items()},
            zero_boundary=self.zero_boundary,
        )

    __rmul__ = __mul__

    @staticmethod
    def indicator(x: str, support: Iterable[str], zero_boundary: bool = False) -> "VertexFunction":
        return VertexFunction(
            {y: (1.0 if y == x else 0.0) for y in support}, zero_boundary=zero_boundary
        )


class WorkingAssembly:
    """Array form of the subgraph induced on ``omega + boundary``.

    Vertex order is omega (sorted) followed by boundary (sorted); every
    vectorised operator in the package indexes into this order.
    """

    def __init__(self, graph: WeightedGraph, omega: tuple[str, ...], boundary: tuple[str, ...]):
        self.order: tuple[str, ...] = omega + boundary
        self.index: dict[str, int] = {x: i for i, x in enumerate(self.order)}
        self.n = len(self.order)
        self.n_omega = len(omega)
        self.mu = np.array([graph.mu(x) for x in self.order])
        ei, ej, w = [], [], []
        inside = set(self.order)
        for (a, b), wab in sorted(graph.weights.items()):
            if a in inside and b in inside:
                ei.append(self.index[a])
                ej.append(self.index[b])
                w.append(wab)
        self.ei = np.array(ei, dtype=np.intp)
        self.ej = np.array(ej, dtype=np.intp)
        self.w = np.array(w)
        self.mu_omega = self.mu[: self.n_omega]
        incidence = np.zeros((len(self.w), self.n))
        for row, (i, j) in enumerate(zip(self.ei, self.ej)):
            incidence[row, i] = 1.0
            incidence[row, j] = 1.0
        self._incidence = incidence

    def values(self, fn: VertexFunction) -> np.ndarray:
        return np.array([fn.value(x) for x in self.order])

    def full(self, coeffs: np.ndarray) -> np.ndarray:
        """Zero-extend omega coefficients to the working set."""
        out = np.zeros(self.n)
        out[: self.n_omega] = coeffs
        return out

    def grad_sq(self, vals: np.ndarray) -> np.ndarray:
        """Pointwise squared gradient length over the working set."""
        d = vals[self.ej] - vals[self.ei]
        c = self.w * d * d
        acc = np.bincount(self.ei, weights=c, minlength=self.n)
        acc += np.bincount(self.ej, weights=c, minlength=self.n)
        return acc / (2.0 * self.mu)

    def dirichlet_integral(self, vals: np.ndarray, l: float) -> float:
        """Integral of the l-th power of the gradient length over the working set."""
        gs = self.grad_sq(vals)
        if l == 2.0:
            return float(np.dot(self.mu, gs))
        return float(np.dot(self.mu, gs ** (l / 2.0)))

    def batch_dirichlet_integral(self, vals: np.ndarray, l: float) -> np.ndarray:
        """Row-wise Dirichlet integral for a batch of value vectors (N, n)."""
        d = vals[:, self.ej] - vals[:, self.ei]
        c = self.w * d * d
        if l == 2.0:
            return c.sum(axis=1)
        gs = (c @ self._incidence) / (2.0 * self.mu)
        return (gs ** (l / 2.0)) @ self.mu

    def grad_factor(self, grad_sq: np.ndarray, l: float) -> np.ndarray:
        """Pointwise ``|grad|^(l-2)``, with the vanishing-gradient convention.

        For l < 2 the factor is defined as 0 where the gradient length is 0,
        which keeps the operator finite and matches the weak form of the
        l-energy.  For l = 2 the factor is identically 1.
        """
        if l == 2.0:
            return np.ones_like(grad_sq)
        if l > 2.0:
            return grad_sq ** ((l - 2.0) / 2.0)
        out = np.zeros_like(grad_sq)
        pos = grad_sq > 0.0
        out[pos] = grad_sq[pos] ** ((l - 2.0) / 2.0)
        return out

    def l_laplacian(self, vals: np.ndarray, l: float) -> np.ndarray:
        """Vector of the l-Laplacian over the working set."""
        d = vals[self.ej] - vals[self.ei]
        if l == 2.0:
            t = 2.0 * self.w * d
        else:
            f = self.grad_factor(self.grad_sq(vals), l)
            t = (f[self.ei] + f[self.ej]) * self.w * d
        acc = np.bincount(self.ei, weights=t, minlength=self.n)
        acc -= np.bincount(self.ej, weights=t, minlength=self.n)
        return acc / (2.0 * self.mu)

    def weak_operator_vector(self, vals: np.ndarray, l: float) -> np.ndarray:
        """Coefficient gradient of the l-energy over omega, i.e. ``-mu * Delta_l``.

        Component m equals the integral of ``|grad u|^(l-2) Gamma(u, e_m)``
        over the working set, with e_m the indicator of the m-th omega vertex.
        """
        lap = self.l_laplacian(vals, l)
        return -(self.mu * lap)[: self.n_omega]

    def gamma_vector(self, vals_a: np.ndarray, vals_b: np.ndarray) -> np.ndarray:
        """Pointwise gradient form of two functions over the working set."""
        da = vals_a[self.ej] - vals_a[self.ei]
        db = vals_b[self.ej] - vals_b[self.ei]
        c = self.w * da * db
        acc = np.bincount(self.ei, weights=c, minlength=self.n)
        acc += np.bincount(self.ej, weights=c, minlength=self.n)
        return acc / (2.0 * self.mu)


@dataclass(frozen=True, eq=False)
class DomainDecomposition:
    """A domain, its exterior boundary and the induced working subgraph."""

    graph: WeightedGraph
    omega: tuple[str, ...]
    boundary: tuple[str, ...]
    _assembly_cache: list = field(default_factory=list, repr=False)

    @property
    def working(self) -> tuple[str, ...]:
        return self.omega + self.boundary

    @property
    def count(self) -> int:
        """Number of domain vertices (the dimension of the zero-trace space)."""
        return len(self.omega)

    @property
    def assembly(self) -> WorkingAssembly:
        if not self._assembly_cache:
            self._assembly_cache.append(WorkingAssembly(self.graph, self.omega, self.boundary))
        return self._assembly_cache[0]

    def function(self, values: Mapping[str, float], zero_boundary: bool = False) -> VertexFunction:
        """Build a function on the working set, checking the boundary contract."""
        unknown = set(values) - set(self.working)
        if unknown:
            raise InputError(f"values defined outside the working set: {sorted(unknown)}")
        if zero_boundary:
            bad = [x for x in self.boundary if values.get(x, 0.0) != 0.0]
            if bad:
                raise InputError(f"zero_boundary function is nonzero on boundary vertices {bad}")
        filled = {x: float(values.get(x, 0.0)) for x in self.working}
        return VertexFunction(filled, zero_boundary=zero_boundary)

    def from_coefficients(self, coeffs: np.ndarray) -> VertexFunction:
        """Function with the given omega values and zero boundary values."""
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape != (self.count,):
            raise InputError(f"expected {self.count} coefficients, got shape {coeffs.shape}")
        values = {x: float(c) for x, c in zip(self.omega, coeffs)}
        values.update({x: 0.0 for x in self.boundary})
        return VertexFunction(values, zero_boundary=True)

    def coefficients(self, fn: VertexFunction) -> np.ndarray:
        return np.array([fn.value(x) for x in self.omega])


def compute_boundary(graph: WeightedGraph, omega: Iterable[str]) -> DomainDecomposition:
    """Split the graph into a domain and its exterior boundary.

    The boundary is the set of vertices outside omega with at least one
    neighbor inside omega.
    """
    omega_set = set(omega)
    if not omega_set:
        raise InputError("omega must be nonempty")
    unknown = omega_set - set(graph.vertices)
    if unknown:
        raise InputError(f"omega contains unknown vertices: {sorted(unknown)}")
    boundary = {
        y
        for x in omega_set
        for y in graph.neighbors(x)
        if y not in omega_set
    }
    return DomainDecomposition(
        graph=graph,
        omega=tuple(sorted(omega_set)),
        boundary=tuple(sorted(boundary)),
    )


def _check_vertex(graph: WeightedGraph, x: str) -> None:
    if x not in graph.adjacency:
        raise InputError(f"vertex {x!r} is not in the graph")


def gamma(graph: WeightedGraph, psi1: VertexFunction, psi2: VertexFunction, x: str) -> float:
    """Gradient form of two functions at a vertex."""
    _check_vertex(graph, x)
    s = 0.0
    p1x, p2x = psi1.value(x), psi2.value(x)
    for y in graph.neighbors(x):
        s += graph.weight(x, y) * (psi1.value(y) - p1x) * (psi2.value(y) - p2x)
    return s / (2.0 * graph.mu(x))


def grad_norm(graph: WeightedGraph, psi: VertexFunction, x: str) -> float:
    """Length of the discrete gradient at a vertex."""
    return math.sqrt(gamma(graph, psi, psi, x))


def laplacian(graph: WeightedGraph, psi: VertexFunction, x: str) -> float:
    """Graph Laplacian at a vertex."""
    _check_vertex(graph, x)
    px = psi.value(x)
    s = 0.0
    for y in graph.neighbors(x):
        s += graph.weight(x, y) * (psi.value(y) - px)
    return s / graph.mu(x)


def l_laplacian(graph: WeightedGraph, psi: VertexFunction, x: str, l: float) -> float:
    """Nonlinear l-Laplacian at a vertex; reduces to the Laplacian at l = 2.

    For l < 2 the factor ``|grad psi|^(l-2)`` is taken as 0 wherever the
    gradient length vanishes.
    """
    if not l > 1.0:
        raise ParameterError(f"l must exceed 1, got {l}")
    _check_vertex(graph, x)
    if l == 2.0:
        return laplacian(graph, psi, x)

    def factor(z: str) -> float:
        g = grad_norm(graph, psi, z)
        if g == 0.0:
            return 0.0
        return g ** (l - 2.0)

    px = psi.value(x)
    fx = factor(x)
    s = 0.0
    for y in graph.neighbors(x):
        s += (factor(y) + fx) * graph.weight(x, y) * (psi.value(y) - px)
    return s / (2.0 * graph.mu(x))


def integrate(graph: WeightedGraph, psi: VertexFunction, region: Iterable[str]) -> float:
    """Measure-weighted sum of the function over a vertex set."""
    total = 0.0
    for x in region:
        _check_vertex(graph, x)
        total += graph.mu(x) * psi.value(x)
    return total


def load_graph_json(source) -> tuple[WeightedGraph, DomainDecomposition]:
    """Load a graph document and its domain.

    ``source`` is a path or a parsed dict with keys ``vertices``, ``edges``
    and ``omega``.  Every structural invariant is enforced;
    :class:`ValidationError` names the violated one.
    """
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        with open(source, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    else:
        doc = source
    if not isinstance(doc, dict):
        raise ValidationError("document_object", "graph document must be a JSON object")
    for key in ("vertices", "edges", "omega"):
        if key not in doc:
            raise ValidationError("document_keys", f"missing key {key!r}")
    try:
        measure = {str(v["id"]): v["mu"] for v in doc["vertices"]}
    except (TypeError, KeyError) as exc:
        raise ValidationError("vertex_record", f"bad vertex record: {exc}") from exc
    if len(measure) != len(doc["vertices"]):
        raise ValidationError("duplicate_vertex", "vertex ids are not unique")
    try:
        edges = [(str(e["a"]), str(e["b"]), e["w"]) for e in doc["edges"]]
    except (TypeError, KeyError) as exc:
        raise ValidationError("edge_record", f"bad edge record: {exc}") from exc
    graph = WeightedGraph.build(measure, edges)
    omega = [str(x) for x in doc["omega"]]
    if not omega:
        raise ValidationError("omega_nonempty", "omega must list at least one vertex")
    if len(set(omega)) != len(omega):
        raise ValidationError("omega_unique", "omega lists a vertex twice")
    unknown = set(omega) - set(graph.vertices)
    if unknown:
        raise ValidationError("omega_subset", f"omega not a subset of the vertex set: {sorted(unknown)}")
    return graph, compute_boundary(graph, omega)
