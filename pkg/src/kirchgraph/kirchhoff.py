"""Two-component Kirchhoff system on a graph domain: energy, derivatives, hypotheses.

The system couples a p-component ``u`` and a q-component ``v`` through a
nonlocal Kirchhoff factor ``M_i(s) = a_i + b_i s^k`` in front of the
l-Laplacian, a sublinear term with exponent r, a coupling term with exponents
(alpha, beta) and additive forcing terms g1, g2.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import InputError, ParameterError, ValidationError
from .graph import DomainDecomposition, VertexFunction
from .spaces import EmbeddingReport, SobolevElement

PARAM_NAMES = ("p", "q", "r", "k", "alpha", "beta", "a1", "a2", "b1", "b2", "lambda1", "lambda2")
COEFFICIENT_NAMES = ("h1", "h2", "h3", "g1", "g2")


class CoefficientWarning(UserWarning):
    """A coefficient violates a hypothesis-level sign condition."""


@dataclass(frozen=True)
class KirchhoffParams:
    p: float
    q: float
    r: float
    k: float
    alpha: float
    beta: float
    a1: float
    a2: float
    b1: float
    b2: float
    lambda1: float
    lambda2: float

    def __post_init__(self):
        for name in ("p", "q", "r"):
            if not getattr(self, name) > 1.0:
                raise ParameterError(f"exponent {name} must exceed 1, got {getattr(self, name)}")
        if not self.k >= 0.0:
            raise ParameterError(f"k must be nonnegative, got {self.k}")
        for name in ("alpha", "beta"):
            if not getattr(self, name) > 0.0:
                raise ParameterError(f"{name} must be positive, got {getattr(self, name)}")
        for name in ("a1", "a2", "b1", "b2"):
            if not getattr(self, name) > 0.0:
                raise ParameterError(f"{name} must be positive, got {getattr(self, name)}")

    @property
    def coupling_sum(self) -> float:
        return self.alpha + self.beta

    @property
    def bulk_exponent(self) -> float:
        """The norm power ``(k+1) * max(p, q)`` controlling the bulk growth."""
        return (self.k + 1.0) * max(self.p, self.q)

    def to_json_dict(self) -> dict:
        return {name: getattr(self, name) for name in PARAM_NAMES}


def _odd_power(c: np.ndarray, s: float) -> np.ndarray:
    """Signed power ``sign(c) |c|^(s-1)``, taken as 0 at c = 0."""
    out = np.zeros_like(c)
    nz = c != 0.0
    out[nz] = np.sign(c[nz]) * np.abs(c[nz]) ** (s - 1.0)
    return out


class _FunctionalModel:
    """Vectorised energy / gradient / residual evaluations for one instance.

    States are coefficient vectors over the domain vertices; the pair (u, v)
    travels as one concatenated vector of length ``2 * n``.
    """

    def __init__(self, instance: "KirchhoffInstance"):
        self.instance = instance
        self.asm = instance.domain.assembly
        self.n = instance.domain.count
        par = instance.params
        self.p, self.q, self.r, self.k = par.p, par.q, par.r, par.k
        self.alpha, self.beta = par.alpha, par.beta
        self.ab = par.coupling_sum
        self.h1, self.h2, self.h3 = instance.h1_arr, instance.h2_arr, instance.h3_arr
        self.g1, self.g2 = instance.g1_arr, instance.g2_arr
        self.mu = self.asm.mu_omega

    def split(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return x[: self.n], x[self.n :]

    def norm_pows(self, x: np.ndarray) -> tuple[float, float]:
        """Gradient-energy integrals ``(|u|_W^p, |v|_W^q)``."""
        cu, cv = self.split(x)
        su = self.asm.dirichlet_integral(self.asm.full(cu), self.p)
        sv = self.asm.dirichlet_integral(self.asm.full(cv), self.q)
        return su, sv

    def norms(self, x: np.ndarray) -> tuple[float, float]:
        su, sv = self.norm_pows(x)
        return su ** (1.0 / self.p), sv ** (1.0 / self.q)

    def x_norm(self, x: np.ndarray) -> float:
        nu, nv = self.norms(x)
        return nu + nv

    def batch_energy(self, states: np.ndarray) -> np.ndarray:
        """Energies of a batch of concatenated state vectors (N, 2n)."""
        par = self.instance.params
        n_states = states.shape[0]
        asm = self.asm
        full_u = np.zeros((n_states, asm.n))
        full_v = np.zeros((n_states, asm.n))
        full_u[:, : self.n] = states[:, : self.n]
        full_v[:, : self.n] = states[:, self.n :]
        su = asm.batch_dirichlet_integral(full_u, self.p)
        sv = asm.batch_dirichlet_integral(full_v, self.q)
        au = np.abs(states[:, : self.n])
        av = np.abs(states[:, self.n :])
        e = par.a1 / self.p * su + par.b1 / (self.p * (self.k + 1.0)) * su ** (self.k + 1.0)
        e += par.a2 / self.q * sv + par.b2 / (self.q * (self.k + 1.0)) * sv ** (self.k + 1.0)
        e -= par.lambda1 / self.r * (au ** self.r * self.h1) @ self.mu
        e -= par.lambda2 / self.r * (av ** self.r * self.h3) @ self.mu
        e -= (au ** self.alpha * av ** self.beta * self.h2) @ self.mu / self.ab
        e -= (states[:, : self.n] * self.g1) @ self.mu
        e -= (states[:, self.n :] * self.g2) @ self.mu
        return e

    def energy(self, x: np.ndarray) -> float:
        par = self.instance.params
        cu, cv = self.split(x)
        su, sv = self.norm_pows(x)
        au, av = np.abs(cu), np.abs(cv)
        e = par.a1 / self.p * su + par.b1 / (self.p * (self.k + 1.0)) * su ** (self.k + 1.0)
        e += par.a2 / self.q * sv + par.b2 / (self.q * (self.k + 1.0)) * sv ** (self.k + 1.0)
        e -= par.lambda1 / self.r * float(np.dot(self.mu, self.h1 * au ** self.r))
        e -= par.lambda2 / self.r * float(np.dot(self.mu, self.h3 * av ** self.r))
        e -= float(np.dot(self.mu, self.h2 * au ** self.alpha * av ** self.beta)) / self.ab
        e -= float(np.dot(self.mu, self.g1 * cu))
        e -= float(np.dot(self.mu, self.g2 * cv))
        return e

    def kirchhoff_factors(self, x: np.ndarray) -> tuple[float, float]:
        par = self.instance.params
        su, sv = self.norm_pows(x)
        return par.a1 + par.b1 * su ** self.k, par.a2 + par.b2 * sv ** self.k

    def _nonlinear_u(self, cu: np.ndarray, cv: np.ndarray) -> np.ndarray:
        """Right-hand side of the u-equation at each domain vertex."""
        par = self.instance.params
        out = par.lambda1 * self.h1 * _odd_power(cu, self.r)
        out += (self.alpha / self.ab) * self.h2 * _odd_power(cu, self.alpha) * np.abs(cv) ** self.beta
        out += self.g1
        return out

    def _nonlinear_v(self, cu: np.ndarray, cv: np.ndarray) -> np.ndarray:
        par = self.instance.params
        out = par.lambda2 * self.h3 * _odd_power(cv, self.r)
        out += (self.beta / self.ab) * self.h2 * np.abs(cu) ** self.alpha * _odd_power(cv, self.beta)
        out += self.g2
        return out

    def grad(self, x: np.ndarray) -> np.ndarray:
        """Coefficient gradient of the energy against the indicator basis."""
        cu, cv = self.split(x)
        m1, m2 = self.kirchhoff_factors(x)
        wu = self.asm.weak_operator_vector(self.asm.full(cu), self.p)
        wv = self.asm.weak_operator_vector(self.asm.full(cv), self.q)
        gu = m1 * wu - self.mu * self._nonlinear_u(cu, cv)
        gv = m2 * wv - self.mu * self._nonlinear_v(cu, cv)
        return np.concatenate([gu, gv])

    def residual(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Pointwise strong-form residual of both equations over the domain."""
        cu, cv = self.split(x)
        m1, m2 = self.kirchhoff_factors(x)
        lap_u = self.asm.l_laplacian(self.asm.full(cu), self.p)[: self.n]
        lap_v = self.asm.l_laplacian(self.asm.full(cv), self.q)[: self.n]
        r1 = -m1 * lap_u - self._nonlinear_u(cu, cv)
        r2 = -m2 * lap_v - self._nonlinear_v(cu, cv)
        return r1, r2

    def directional(self, x: np.ndarray, d: np.ndarray) -> float:
        """Derivative of the energy at ``x`` along ``d`` via the gradient form.

        The Kirchhoff terms are integrated over the whole working set; the
        pointwise nonlinearities only see the domain because test functions
        vanish on the boundary.
        """
        cu, cv = self.split(x)
        du, dv = self.split(d)
        m1, m2 = self.kirchhoff_factors(x)
        asm = self.asm
        vu, vphi = asm.full(cu), asm.full(du)
        fu = asm.grad_factor(asm.grad_sq(vu), self.p)
        term = m1 * float(np.dot(asm.mu, fu * asm.gamma_vector(vu, vphi)))
        vv, vpsi = asm.full(cv), asm.full(dv)
        fv = asm.grad_factor(asm.grad_sq(vv), self.q)
        term += m2 * float(np.dot(asm.mu, fv * asm.gamma_vector(vv, vpsi)))
        term -= float(np.dot(self.mu, self._nonlinear_u(cu, cv) * du))
        term -= float(np.dot(self.mu, self._nonlinear_v(cu, cv) * dv))
        return term


class KirchhoffInstance:
    """A fully specified system: domain, parameters and coefficient functions.

    Coefficient extrema over the domain are cached eagerly;
    positivity violations of the h-coefficients are reported as warnings and
    surface as failed hypothesis margins, never silently fixed.
    """

    def __init__(
        self,
        domain: DomainDecomposition,
        params: KirchhoffParams,
        h1: VertexFunction,
        h2: VertexFunction,
        h3: VertexFunction,
        g1: VertexFunction,
        g2: VertexFunction,
        h4_mode: str = "proof",
    ):
        if h4_mode not in ("proof", "literal"):
            raise ParameterError(f"h4_mode must be 'proof' or 'literal', got {h4_mode!r}")
        self.domain = domain
        self.params = params
        self.h4_mode = h4_mode
        self.h1, self.h2, self.h3, self.g1, self.g2 = h1, h2, h3, g1, g2
        omega = domain.omega
        self.h1_arr = np.array([h1.value(x) for x in omega])
        self.h2_arr = np.array([h2.value(x) for x in omega])
        self.h3_arr = np.array([h3.value(x) for x in omega])
        self.g1_arr = np.array([g1.value(x) for x in omega])
        self.g2_arr = np.array([g2.value(x) for x in omega])
        self.extrema = {
            name: (float(arr.min()), float(arr.max()))
            for name, arr in zip(COEFFICIENT_NAMES, (self.h1_arr, self.h2_arr, self.h3_arr, self.g1_arr, self.g2_arr))
        }
        for name in ("h1", "h2", "h3"):
            if self.extrema[name][0] <= 0.0:
                warnings.warn(
                    f"coefficient {name} is not strictly positive on the domain; "
                    "hypothesis checks will report the violation",
                    CoefficientWarning,
                    stacklevel=2,
                )
        self._model: _FunctionalModel | None = None
        self._tails: dict[str, float] = {}

    @property
    def model(self) -> _FunctionalModel:
        if self._model is None:
            self._model = _FunctionalModel(self)
        return self._model

    @property
    def h2_sup(self) -> float:
        return float(np.max(np.abs(self.h2_arr)))

    def coefficient_tail(self, mode: str | None = None) -> float:
        """Constant term collecting the h- and g-norm contributions.

        ``mode='proof'`` uses the conjugate exponents p/(p-1), q/(q-1) for the
        forcing terms (the form the estimate chain actually supports);
        ``mode='literal'`` uses p/(p-r), q/(q-r) throughout.
        """
        mode = mode or self.h4_mode
        if mode in self._tails:
            return self._tails[mode]
        par = self.params
        p, q, r = par.p, par.q, par.r
        if r >= min(p, q):
            raise ParameterError("the coefficient tail requires r < min(p, q)")
        mu = self.domain.assembly.mu_omega
        lam_coeff = max(par.lambda1 * (p - r) / (p * r), par.lambda2 * (q - r) / (q * r))
        h_term = float(np.dot(mu, self.h1_arr ** (p / (p - r))))
        h_term += float(np.dot(mu, self.h3_arr ** (q / (q - r))))
        if mode == "proof":
            e1, e2 = p / (p - 1.0), q / (q - 1.0)
        else:
            e1, e2 = p / (p - r), q / (q - r)
        g_coeff = max((p - 1.0) / p, (q - 1.0) / q)
        g_term = float(np.dot(mu, np.abs(self.g1_arr) ** e1))
        g_term += float(np.dot(mu, np.abs(self.g2_arr) ** e2))
        tail = lam_coeff * h_term + g_coeff * g_term
        self._tails[mode] = tail
        return tail

    def state(self, cu, cv) -> "StatePair":
        """Assemble a state pair from coefficient vectors over the domain."""
        cu = np.asarray(cu, dtype=float)
        cv = np.asarray(cv, dtype=float)
        u = SobolevElement(self.domain, self.domain.from_coefficients(cu), self.params.p)
        v = SobolevElement(self.domain, self.domain.from_coefficients(cv), self.params.q)
        return StatePair(u, v)

    def state_vector(self, state: "StatePair") -> np.ndarray:
        if state.u.domain is not self.domain:
            raise InputError("state was built on a different domain")
        return np.concatenate([state.u.coefficients, state.v.coefficients])

    def to_json_dict(self) -> dict:
        def coeff(arr):
            return {x: float(v) for x, v in zip(self.domain.omega, arr)}

        return {
            "params": self.params.to_json_dict(),
            "coefficients": {
                "h1": coeff(self.h1_arr),
                "h2": coeff(self.h2_arr),
                "h3": coeff(self.h3_arr),
                "g1": coeff(self.g1_arr),
                "g2": coeff(self.g2_arr),
            },
            "h4_mode": self.h4_mode,
        }


@dataclass(frozen=True)
class StatePair:
    """A (u, v) pair with cached component and product-space norms."""

    u: SobolevElement
    v: SobolevElement

    def __post_init__(self):
        if self.u.domain is not self.v.domain:
            raise InputError("components live on different domains")
        object.__setattr__(self, "norm_u", self.u.norm())
        object.__setattr__(self, "norm_v", self.v.norm())

    @property
    def norm_x(self) -> float:
        """Product-space norm: the sum of the component norms."""
        return self.norm_u + self.norm_v


def kirchhoff_m(instance: KirchhoffInstance, i: int, s: float) -> float:
    """Nonlocal coefficient ``a_i + b_i s^k`` evaluated at ``s >= 0``."""
    if i not in (1, 2):
        raise InputError(f"component index must be 1 or 2, got {i}")
    if s < 0.0:
        raise ParameterError(f"s must be nonnegative, got {s}")
    par = instance.params
    a, b = (par.a1, par.b1) if i == 1 else (par.a2, par.b2)
    return a + b * s ** par.k


def _require_same_domain(instance: KirchhoffInstance, state: StatePair) -> None:
    if state.u.domain is not instance.domain:
        raise InputError("state was built on a different domain than the instance")


def energy(instance: KirchhoffInstance, state: StatePair) -> float:
    """Value of the variational functional at a state pair."""
    _require_same_domain(instance, state)
    return instance.model.energy(instance.state_vector(state))


def directional_derivative(instance: KirchhoffInstance, state: StatePair, direction: StatePair) -> float:
    """First variation of the energy at ``state`` along ``direction``."""
    _require_same_domain(instance, state)
    _require_same_domain(instance, direction)
    return instance.model.directional(instance.state_vector(state), instance.state_vector(direction))


def gradient_vector(instance: KirchhoffInstance, state: StatePair) -> np.ndarray:
    """Energy gradient against the indicator basis, u-block then v-block.

    The dual norm of the derivative is represented by the Euclidean norm of
    this vector.
    """
    _require_same_domain(instance, state)
    return instance.model.grad(instance.state_vector(state))


def strong_residual(instance: KirchhoffInstance, state: StatePair) -> dict[str, tuple[float, float]]:
    """Pointwise residual of both strong-form equations at each domain vertex."""
    _require_same_domain(instance, state)
    r1, r2 = instance.model.residual(instance.state_vector(state))
    return {x: (float(a), float(b)) for x, a, b in zip(instance.domain.omega, r1, r2)}


@dataclass(frozen=True)
class MountainPassGeometry:
    """Constants describing the energy barrier on small product-norm spheres."""

    m1: float
    m2: float
    zstar: float
    rho: float
    g_at_zstar: float
    g2nd_at_zstar: float

    def to_json_dict(self) -> dict:
        return {
            "m1": self.m1,
            "m2": self.m2,
            "zstar": self.zstar,
            "rho": self.rho,
            "g_at_zstar": self.g_at_zstar,
            "g2nd_at_zstar": self.g2nd_at_zstar,
        }


def _barrier_m1(params: KirchhoffParams) -> float:
    a_exp = params.bulk_exponent
    return 2.0 ** (1.0 - a_exp) * min(
        params.b1 / (params.p * (params.k + 1.0)),
        params.b2 / (params.q * (params.k + 1.0)),
    )


def _barrier_m2(instance: KirchhoffInstance, emb_p: EmbeddingReport, emb_q: EmbeddingReport) -> float:
    par = instance.params
    ab = par.coupling_sum
    cp, cq = emb_p.guaranteed_constant, emb_q.guaranteed_constant
    return instance.h2_sup / ab ** 2 * max(par.alpha * cp ** ab, par.beta * cq ** ab)


def _profile_raw(m1: float, m2: float, a_exp: float, b_exp: float, tail: float, z: float) -> float:
    return m1 * z ** a_exp - m2 * z ** b_exp - tail


def _peak_raw(m1: float, m2: float, a_exp: float, b_exp: float) -> float:
    """Maximum of ``m1 z^a - m2 z^b`` over z >= 0 (requires b > a, m2 > 0)."""
    gap = b_exp - a_exp
    return gap / b_exp * m1 ** (b_exp / gap) * (a_exp / (b_exp * m2)) ** (a_exp / gap)


def _check_embeddings(instance: KirchhoffInstance, emb_p, emb_q) -> None:
    if emb_p is None or emb_q is None:
        raise InputError("hypothesis evaluation needs embedding reports for both exponents")
    if emb_p.l != instance.params.p or emb_q.l != instance.params.q:
        raise InputError(
            f"embedding reports computed for l = ({emb_p.l}, {emb_q.l}), "
            f"instance exponents are ({instance.params.p}, {instance.params.q})"
        )


def mountain_pass_radius(
    instance: KirchhoffInstance, emb_p: EmbeddingReport, emb_q: EmbeddingReport
) -> MountainPassGeometry:
    """Barrier constants, the stationary point of the barrier profile and the radius."""
    _check_embeddings(instance, emb_p, emb_q)
    par = instance.params
    a_exp, b_exp = par.bulk_exponent, par.coupling_sum
    if b_exp <= a_exp:
        raise ParameterError(
            f"alpha + beta = {b_exp} must exceed (k+1) max(p, q) = {a_exp}"
        )
    if min(par.p, par.q) <= par.r:
        raise ParameterError("the barrier profile requires r < min(p, q)")
    m1 = _barrier_m1(par)
    m2 = _barrier_m2(instance, emb_p, emb_q)
    if m2 <= 0.0:
        raise ParameterError("the coupling bound is zero; the barrier profile has no interior peak")
    zstar = (a_exp * m1 / (b_exp * m2)) ** (1.0 / (b_exp - a_exp))
    tail = instance.coefficient_tail()
    g_at = _profile_raw(m1, m2, a_exp, b_exp, tail, zstar)
    g2nd = (a_exp - b_exp) * b_exp * m2 * (a_exp * m1 / (b_exp * m2)) ** ((b_exp - 2.0) / (b_exp - a_exp))
    return MountainPassGeometry(m1=m1, m2=m2, zstar=zstar, rho=zstar, g_at_zstar=g_at, g2nd_at_zstar=g2nd)


def g_profile(instance: KirchhoffInstance, emb_p: EmbeddingReport, emb_q: EmbeddingReport, z: float) -> float:
    """Lower-bound profile for the energy on the product-norm sphere of radius z <= 1."""
    if z < 0.0:
        raise ParameterError(f"z must be nonnegative, got {z}")
    _check_embeddings(instance, emb_p, emb_q)
    par = instance.params
    m1 = _barrier_m1(par)
    m2 = _barrier_m2(instance, emb_p, emb_q)
    return _profile_raw(m1, m2, par.bulk_exponent, par.coupling_sum, instance.coefficient_tail(), z)


def ps_lower_bound(
    instance: KirchhoffInstance, emb_p: EmbeddingReport, emb_q: EmbeddingReport, state: StatePair
) -> float:
    """Coercive lower bound for ``energy - <gradient, state> / (alpha+beta)``.

    Evaluated from the component norms only; grows without bound along rays,
    which is what makes bounded-energy sequences with vanishing gradients
    bounded.
    """
    _check_embeddings(instance, emb_p, emb_q)
    _require_same_domain(instance, state)
    par = instance.params
    ab = par.coupling_sum
    nu, nv = state.norm_u, state.norm_v
    cp, cq = emb_p.guaranteed_constant, emb_q.guaranteed_constant
    h1_max = instance.extrema["h1"][1]
    h3_max = instance.extrema["h3"][1]
    g1_max = instance.extrema["g1"][1]
    g2_max = instance.extrema["g2"][1]
    val = par.a1 * (1.0 / par.p - 1.0 / ab) * nu ** par.p
    val += par.b1 * (1.0 / (par.p * (par.k + 1.0)) - 1.0 / ab) * nu ** (par.p * (par.k + 1.0))
    val += par.a2 * (1.0 / par.q - 1.0 / ab) * nv ** par.q
    val += par.b2 * (1.0 / (par.q * (par.k + 1.0)) - 1.0 / ab) * nv ** (par.q * (par.k + 1.0))
    val -= par.lambda1 * (1.0 / par.r - 1.0 / ab) * h1_max * cp ** par.r * nu ** par.r
    val -= par.lambda2 * (1.0 / par.r - 1.0 / ab) * h3_max * cq ** par.r * nv ** par.r
    val -= (1.0 - 1.0 / ab) * (g1_max * cp * nu + g2_max * cq * nv)
    return val


@dataclass
class HypothesisReport:
    """Named margins and verdicts for the four structural hypotheses.

    Margins are oriented so that a satisfied inequality has a positive
    (strict) or nonnegative (non-strict) value.
    """

    verdicts: dict[str, bool]
    margins: dict[str, float]
    strict: dict[str, bool]
    geometry: MountainPassGeometry | None
    mode: str

    @property
    def all_ok(self) -> bool:
        return all(self.verdicts.values())

    def to_json_dict(self) -> dict:
        return {
            "verdicts": self.verdicts,
            "margins": self.margins,
            "strict": self.strict,
            "geometry": self.geometry.to_json_dict() if self.geometry else None,
            "mode": self.mode,
            "all_ok": self.all_ok,
        }

    def table(self) -> str:
        lines = ["hypothesis  verdict  margin (positive = satisfied)"]
        for name in ("H1", "H2", "H3", "H4"):
            ok = self.verdicts[name]
            parts = [
                f"{key.split('.', 1)[1]}={self.margins[key]:+.6g}"
                for key in sorted(self.margins)
                if key.startswith(name + ".")
            ]
            lines.append(f"{name:<11} {'pass' if ok else 'FAIL':<8} " + ", ".join(parts))
        return "\n".join(lines)


def check_hypotheses(
    instance: KirchhoffInstance, emb_p: EmbeddingReport, emb_q: EmbeddingReport
) -> HypothesisReport:
    """Evaluate every structural hypothesis with explicit numeric margins."""
    _check_embeddings(instance, emb_p, emb_q)
    par = instance.params
    margins: dict[str, float] = {}
    strict: dict[str, bool] = {}

    def put(name: str, value: float, is_strict: bool = True) -> None:
        margins[name] = value
        strict[name] = is_strict

    cp, cq = emb_p.guaranteed_constant, emb_q.guaranteed_constant
    put("H1.a1_minus_cp_pow", par.a1 - cp ** par.p)
    put("H1.a2_minus_cq_pow", par.a2 - cq ** par.q)
    put("H1.b1", par.b1)
    put("H1.b2", par.b2)
    put("H1.k", par.k, is_strict=False)

    put("H2.h1_min", instance.extrema["h1"][0])
    put("H2.h2_min", instance.extrema["h2"][0])
    put("H2.h3_min", instance.extrema["h3"][0])

    minpq = min(par.p, par.q)
    put("H3.lambda1", par.lambda1)
    put("H3.lambda2", par.lambda2)
    put("H3.alpha", par.alpha)
    put("H3.beta", par.beta)
    put("H3.r_below_min_pq", minpq - par.r)
    put("H3.kirchhoff_scale", par.bulk_exponent - max(par.p, par.q), is_strict=False)
    put("H3.coupling_above_bulk", par.coupling_sum - par.bulk_exponent)

    lam1_hi = par.a1 * cp ** (-par.p) - 1.0
    lam2_hi = par.a2 * cq ** (-par.q) - 1.0
    put("H4.lambda1_low", par.lambda1)
    put("H4.lambda1_high", lam1_hi - par.lambda1)
    put("H4.lambda2_low", par.lambda2)
    put("H4.lambda2_high", lam2_hi - par.lambda2)

    geometry: MountainPassGeometry | None = None
    m1 = _barrier_m1(par)
    try:
        m2 = _barrier_m2(instance, emb_p, emb_q)
    except Exception:
        m2 = math.nan
    scale = par.coupling_sum / par.bulk_exponent
    put("H4.m1_within_m2_scale", scale * m2 - m1 if math.isfinite(m2) else math.nan, is_strict=False)
    try:
        geometry = mountain_pass_radius(instance, emb_p, emb_q)
        put("H4.barrier_peak", geometry.g_at_zstar)
    except ParameterError:
        put("H4.barrier_peak", math.nan)

    def group_ok(prefix: str) -> bool:
        ok = True
        for name, value in margins.items():
            if not name.startswith(prefix + "."):
                continue
            if math.isnan(value):
                ok = False
            elif strict[name]:
                ok = ok and value > 0.0
            else:
                ok = ok and value >= 0.0
        return ok

    verdicts = {name: group_ok(name) for name in ("H1", "H2", "H3", "H4")}
    return HypothesisReport(
        verdicts=verdicts, margins=margins, strict=strict, geometry=geometry, mode=instance.h4_mode
    )


def _expand_coefficient(doc, domain: DomainDecomposition, name: str) -> VertexFunction:
    if not isinstance(doc, dict):
        raise ValidationError("coefficient_record", f"{name} must be an object")
    if set(doc.keys()) == {"const"}:
        value = float(doc["const"])
        return domain.function({x: value for x in domain.omega})
    unknown = set(doc) - set(domain.omega)
    if unknown:
        raise ValidationError(
            "coefficient_vertex_unknown", f"{name} defined on non-domain vertices {sorted(unknown)}"
        )
    missing = set(domain.omega) - set(doc)
    if missing:
        raise ValidationError(
            "coefficient_incomplete", f"{name} missing values at {sorted(missing)}"
        )
    return domain.function({x: float(v) for x, v in doc.items()})


def load_instance_json(source, domain: DomainDecomposition) -> KirchhoffInstance:
    """Load an instance document against an existing domain decomposition."""
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        with open(source, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    else:
        doc = source
    if not isinstance(doc, dict) or "params" not in doc or "coefficients" not in doc:
        raise ValidationError("document_keys", "instance document needs 'params' and 'coefficients'")
    raw = doc["params"]
    missing = [name for name in PARAM_NAMES if name not in raw]
    if missing:
        raise ValidationError("params_missing", f"missing parameters: {missing}")
    try:
        params = KirchhoffParams(**{name: float(raw[name]) for name in PARAM_NAMES})
    except ParameterError as exc:
        raise ValidationError("param_range", str(exc)) from exc
    coeffs = doc["coefficients"]
    missing = [name for name in COEFFICIENT_NAMES if name not in coeffs]
    if missing:
        raise ValidationError("coefficient_missing", f"missing coefficients: {missing}")
    expanded = {name: _expand_coefficient(coeffs[name], domain, name) for name in COEFFICIENT_NAMES}
    mode = doc.get("h4_mode", "proof")
    if mode not in ("proof", "literal"):
        raise ValidationError("h4_mode", f"h4_mode must be 'proof' or 'literal', got {mode!r}")
    return KirchhoffInstance(domain, params, h4_mode=mode, **expanded)
