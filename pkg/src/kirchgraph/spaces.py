"""Zero-trace function spaces on a domain: norms, basis, embedding constants."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import ContractError, InputError, ParameterError
from .graph import DomainDecomposition, VertexFunction, WeightedGraph


@dataclass(frozen=True)
class SobolevElement:
    """A zero-boundary function together with its gradient-energy exponent."""

    domain: DomainDecomposition
    function: VertexFunction
    exponent: float

    def __post_init__(self):
        if not self.exponent > 1.0:
            raise ParameterError(f"exponent must exceed 1, got {self.exponent}")
        if not self.function.zero_boundary:
            raise ContractError("function does not carry the zero_boundary flag")
        bad = [x for x in self.domain.boundary if self.function.value(x) != 0.0]
        if bad:
            raise ContractError(f"function is nonzero on boundary vertices {bad}")

    @property
    def coefficients(self) -> np.ndarray:
        return self.domain.coefficients(self.function)

    def norm(self) -> float:
        return w0_norm(self)


def lp_norm(graph: WeightedGraph, u: VertexFunction, gamma: float, region: Iterable[str]) -> float:
    """Measure-weighted gamma-norm over a region; ``gamma = inf`` is the max norm."""
    region = list(region)
    for x in region:
        if x not in graph.adjacency:
            raise InputError(f"vertex {x!r} is not in the graph")
    if gamma == math.inf:
        return max((abs(u.value(x)) for x in region), default=0.0)
    if not gamma >= 1.0:
        raise ParameterError(f"gamma must be >= 1 or inf, got {gamma}")
    total = sum(graph.mu(x) * abs(u.value(x)) ** gamma for x in region)
    return total ** (1.0 / gamma)


def w0_norm(u: SobolevElement) -> float:
    """Gradient-energy norm of a zero-boundary function."""
    if not u.function.zero_boundary:
        raise ContractError("w0_norm requires the zero_boundary flag")
    asm = u.domain.assembly
    vals = asm.values(u.function)
    return asm.dirichlet_integral(vals, u.exponent) ** (1.0 / u.exponent)


def canonical_basis(domain: DomainDecomposition, exponent: float = 2.0) -> list[SobolevElement]:
    """Indicator functions of the domain vertices, in sorted vertex order.

    They span the zero-trace space, whose dimension equals the number of
    domain vertices.
    """
    if domain.count == 0:
        raise InputError("domain has no vertices")
    basis = []
    for i in range(domain.count):
        coeffs = np.zeros(domain.count)
        coeffs[i] = 1.0
        basis.append(SobolevElement(domain, domain.from_coefficients(coeffs), exponent))
    return basis


@dataclass
class EmbeddingReport:
    """Constants comparing a gamma-norm against the gradient-energy norm.

    ``best_constant`` is the computed sharp ratio for the requested gamma;
    ``base_constant`` is the sharp ratio at gamma = l, from which
    ``guaranteed_constant`` (valid for every gamma in [1, inf]) and
    ``sup_constant`` (max-norm bound) are assembled.
    """

    l: float
    gamma: float
    best_constant: float
    base_constant: float
    guaranteed_constant: float
    sup_constant: float
    witness: VertexFunction
    converged: bool
    restarts: int
    mu_min_domain: float
    domain_measure: float

    def to_json_dict(self) -> dict:
        return {
            "l": self.l,
            "gamma": "inf" if self.gamma == math.inf else self.gamma,
            "best_constant": self.best_constant,
            "base_constant": self.base_constant,
            "guaranteed_constant": self.guaranteed_constant,
            "sup_constant": self.sup_constant,
            "converged": self.converged,
            "restarts": self.restarts,
            "mu_min_domain": self.mu_min_domain,
            "domain_measure": self.domain_measure,
            "witness": {x: v for x, v in self.witness.values.items()},
        }


def _w0_pow(asm, coeffs: np.ndarray, l: float) -> float:
    return asm.dirichlet_integral(asm.full(coeffs), l)


def _lp_value_and_grad(asm, coeffs: np.ndarray, gamma: float) -> tuple[float, np.ndarray]:
    """Gamma-norm restricted to the domain and its coefficient gradient."""
    mu = asm.mu_omega
    if gamma == math.inf:
        j = int(np.argmax(np.abs(coeffs)))
        val = abs(coeffs[j])
        grad = np.zeros_like(coeffs)
        grad[j] = math.copysign(1.0, coeffs[j]) if coeffs[j] != 0.0 else 0.0
        return val, grad
    power = float(np.dot(mu, np.abs(coeffs) ** gamma))
    val = power ** (1.0 / gamma)
    if val == 0.0:
        return 0.0, np.zeros_like(coeffs)
    grad = mu * np.abs(coeffs) ** (gamma - 1.0) * np.sign(coeffs) * val ** (1.0 - gamma)
    return val, grad


def _sphere_ascent(asm, l: float, gamma: float, start: np.ndarray, tol: float, max_iters: int):
    """Maximise the gamma-norm over the unit sphere of the gradient-energy norm.

    Projected gradient ascent with backtracking; the retraction is radial
    rescaling, which is exact because both norms are positively homogeneous.
    Returns (best coefficients, best value, converged flag).
    """
    c = np.asarray(start, dtype=float)
    nrm = _w0_pow(asm, c, l) ** (1.0 / l)
    if nrm == 0.0:
        return c, 0.0, False
    c = c / nrm
    step = 1.0
    val, _ = _lp_value_and_grad(asm, c, gamma)
    for _ in range(max_iters):
        val, g_num = _lp_value_and_grad(asm, c, gamma)
        # gradient of the constraint norm wrt the coefficients
        energy = _w0_pow(asm, c, l)
        g_den = energy ** (1.0 / l - 1.0) * asm.weak_operator_vector(asm.full(c), l)
        nd = np.linalg.norm(g_den)
        if nd == 0.0:
            return c, val, False
        n_hat = g_den / nd
        tangent = g_num - np.dot(g_num, n_hat) * n_hat
        tn = np.linalg.norm(tangent)
        if tn < tol:
            return c, val, True
        improved = False
        while step > 1e-18:
            cand = c + step * tangent
            cand_nrm = _w0_pow(asm, cand, l) ** (1.0 / l)
            if cand_nrm == 0.0:
                step *= 0.5
                continue
            cand = cand / cand_nrm
            cand_val, _ = _lp_value_and_grad(asm, cand, gamma)
            if cand_val >= val + 1e-4 * step * tn * tn:
                c, val = cand, cand_val
                step = min(step * 2.0, 1e6)
                improved = True
                break
            step *= 0.5
        if not improved:
            # no ascent direction makes progress at float resolution
            return c, val, tn < math.sqrt(tol)
    return c, val, False


def _best_ratio(domain, l, gamma, restarts, tol, max_iters, seed) -> tuple[np.ndarray, float, bool]:
    asm = domain.assembly
    n = domain.count
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed))
    starts = [np.eye(n)[i] for i in range(n)]
    starts += [rng.standard_normal(n) for _ in range(restarts)]
    best_c, best_val, best_conv = None, -math.inf, False
    for s in starts:
        if not np.any(s):
            continue
        c, val, conv = _sphere_ascent(asm, l, gamma, s, tol, max_iters)
        if val > best_val:
            best_c, best_val, best_conv = c, val, conv
    return best_c, best_val, best_conv


def embedding_constants(
    domain: DomainDecomposition,
    l: float,
    gamma: float,
    restarts: int = 20,
    tol: float = 1e-10,
    max_iters: int = 2000,
    seed: int = 0,
) -> EmbeddingReport:
    """Sharp and guaranteed constants embedding the zero-trace space in L^gamma.

    The sharp constant is found by multi-start projected gradient ascent on
    the unit sphere of the gradient-energy norm (basis starts plus
    ``restarts`` random starts).  The guaranteed constant is
    ``C / mu_min_domain * (1 + domain measure)`` with C the sharp constant at
    gamma = l; the sup constant is ``C / mu_min**(1/l)`` with the global
    measure minimum.
    """
    if not l > 1.0:
        raise ParameterError(f"l must exceed 1, got {l}")
    if gamma != math.inf and not gamma >= 1.0:
        raise ParameterError(f"gamma must be >= 1 or inf, got {gamma}")
    if not domain.boundary:
        raise InputError("embedding constants need a nonempty boundary")
    witness_c, best, conv = _best_ratio(domain, l, gamma, restarts, tol, max_iters, seed)
    if gamma == l:
        base = best
    else:
        _, base, base_conv = _best_ratio(domain, l, l, restarts, tol, max_iters, seed + 1)
        conv = conv and base_conv
    mu_min_domain = min(domain.graph.mu(x) for x in domain.omega)
    domain_measure = sum(domain.graph.mu(x) for x in domain.omega)
    guaranteed = base / mu_min_domain * (1.0 + abs(domain_measure))
    sup_constant = base / domain.graph.mu_min ** (1.0 / l)
    return EmbeddingReport(
        l=l,
        gamma=gamma,
        best_constant=best,
        base_constant=base,
        guaranteed_constant=guaranteed,
        sup_constant=sup_constant,
        witness=domain.from_coefficients(witness_c),
        converged=conv,
        restarts=restarts,
        mu_min_domain=mu_min_domain,
        domain_measure=domain_measure,
    )
