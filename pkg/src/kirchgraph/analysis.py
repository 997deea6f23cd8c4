"""Certificate checks: semi-trivial necessary conditions, nonexistence, full non-triviality."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, ParameterError
from .kirchhoff import KirchhoffInstance
from .solvers import CriticalPoint
from .spaces import EmbeddingReport


def semitrivial_necessary(
    instance: KirchhoffInstance,
    emb_p: EmbeddingReport,
    emb_q: EmbeddingReport,
    point: CriticalPoint,
) -> tuple[bool, float]:
    """Necessary inequality satisfied by every semi-trivial solution.

    For a ``(u0, 0)`` pair the Kirchhoff terms of u0 are dominated by the
    sublinear and forcing terms measured through the embedding constants;
    the v-side uses the maximum of the matching coefficient h3.  Returns
    ``(holds, margin)`` with margin = bound minus Kirchhoff side.
    """
    par = instance.params
    cls = point.classification
    if cls == "fully-non-trivial":
        raise InputError("point is fully non-trivial; the inequality applies to semi-trivial pairs")
    if cls in ("semi-trivial-u", "trivial"):
        nrm = point.state.norm_u
        a, b, ell, lam = par.a1, par.b1, par.p, par.lambda1
        h_max = instance.extrema["h1"][1]
        g_max = instance.extrema["g1"][1]
        c = emb_p.guaranteed_constant
    else:
        nrm = point.state.norm_v
        a, b, ell, lam = par.a2, par.b2, par.q, par.lambda2
        h_max = instance.extrema["h3"][1]
        g_max = instance.extrema["g2"][1]
        c = emb_q.guaranteed_constant
    lhs = a * nrm ** ell + b * nrm ** (ell * (par.k + 1.0))
    rhs = lam * h_max * c ** par.r * nrm ** par.r + g_max * c * nrm
    margin = rhs - lhs
    return margin >= 0.0, margin


@dataclass
class NonexistenceVerdict:
    """Outcome of scanning the pair condition that forbids solutions."""

    mode: str
    verdict: str  # "refuted" | "holds-numerically" | "vacuous-at-origin"
    f_max: float
    argmax: tuple[float, float]
    witness: tuple[float, float] | None
    worst_margin: float | None
    region: dict
    ray_analysis: list[dict] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "mode": self.mode,
            "verdict": self.verdict,
            "f_max": self.f_max,
            "argmax": list(self.argmax),
            "witness": list(self.witness) if self.witness else None,
            "worst_margin": self.worst_margin,
            "region": self.region,
            "ray_analysis": self.ray_analysis,
        }


class _PairCondition:
    """The scalar function of (s, t) whose global negativity forbids solutions."""

    def __init__(self, instance: KirchhoffInstance, pointwise: bool):
        par = instance.params
        self.r, self.alpha, self.beta = par.r, par.alpha, par.beta
        self.lam1, self.lam2 = par.lambda1, par.lambda2
        mu = instance.domain.assembly.mu_omega
        if pointwise:
            self.c_h1 = instance.h1_arr
            self.c_h3 = instance.h3_arr
            self.c_h2 = instance.h2_arr
            self.c_g1 = instance.g1_arr
            self.c_g2 = instance.g2_arr
        else:
            self.c_h1 = np.array([float(np.dot(mu, instance.h1_arr))])
            self.c_h3 = np.array([float(np.dot(mu, instance.h3_arr))])
            self.c_h2 = np.array([float(np.dot(mu, instance.h2_arr))])
            self.c_g1 = np.array([float(np.dot(mu, instance.g1_arr))])
            self.c_g2 = np.array([float(np.dot(mu, instance.g2_arr))])

    def __call__(self, s, t):
        """Max over the coefficient family of the pair expression; broadcasts."""
        s = np.asarray(s, dtype=float)[..., None]
        t = np.asarray(t, dtype=float)[..., None]
        val = self.lam1 * np.abs(s) ** self.r * self.c_h1
        val = val + self.lam2 * np.abs(t) ** self.r * self.c_h3
        val = val + np.abs(s) ** self.alpha * np.abs(t) ** self.beta * self.c_h2
        val = val + s * self.c_g1 + t * self.c_g2
        return np.max(val, axis=-1)

    def gradient(self, s: float, t: float) -> np.ndarray:
        h = 1e-7 * (1.0 + max(abs(s), abs(t)))
        fs = (self(s + h, t) - self(s - h, t)) / (2.0 * h)
        ft = (self(s, t + h) - self(s, t - h)) / (2.0 * h)
        return np.array([float(fs), float(ft)])

    def ray_coefficients(self, ds: float, dt: float) -> list[tuple[float, float]]:
        """(exponent, coefficient) pairs of the max envelope along a ray direction."""
        terms = []
        rows = len(self.c_h1)
        for idx in range(rows):
            c_r = self.lam1 * abs(ds) ** self.r * self.c_h1[idx]
            c_r += self.lam2 * abs(dt) ** self.r * self.c_h3[idx]
            c_ab = abs(ds) ** self.alpha * abs(dt) ** self.beta * self.c_h2[idx]
            c_lin = ds * self.c_g1[idx] + dt * self.c_g2[idx]
            terms.append([(self.alpha + self.beta, c_ab), (self.r, c_r), (1.0, c_lin)])
        return terms


def _ray_leading(term_list: list[tuple[float, float]]) -> tuple[float, float]:
    """Leading (exponent, coefficient) of one polynomial-in-T ray expression."""
    for expo, coeff in sorted(term_list, key=lambda ec: -ec[0]):
        if coeff != 0.0:
            return expo, coeff
    return 0.0, 0.0


def certify_nonexistence(
    instance: KirchhoffInstance,
    mode: str = "integral",
    t_max: float = 1e3,
    grid_n: int = 201,
    ascent_iters: int = 200,
) -> NonexistenceVerdict:
    """Scan the pair condition over a punctured square plus ray asymptotics.

    ``integral`` mode tests the measure-integrated coefficients, ``pointwise``
    mode requires negativity of the per-vertex expression at every vertex,
    and ``literal`` mode includes the origin, where the expression vanishes
    identically, so the strict condition is vacuous there.  A numeric
    "holds" verdict only speaks for the scanned region and for rays whose
    leading-term sign is conclusive; the report lists which case applied.
    """
    if mode not in ("integral", "pointwise", "literal"):
        raise ParameterError(f"mode must be integral, pointwise or literal, got {mode!r}")
    region = {"t_max": t_max, "grid": [grid_n, grid_n], "ascent_iters": ascent_iters}
    if mode == "literal":
        return NonexistenceVerdict(
            mode=mode,
            verdict="vacuous-at-origin",
            f_max=0.0,
            argmax=(0.0, 0.0),
            witness=None,
            worst_margin=None,
            region=region,
        )
    cond = _PairCondition(instance, pointwise=(mode == "pointwise"))

    axis = np.linspace(-t_max, t_max, grid_n)
    ss, tt = np.meshgrid(axis, axis, indexing="ij")
    values = cond(ss.ravel(), tt.ravel()).reshape(ss.shape)
    origin = (ss == 0.0) & (tt == 0.0)
    values = np.where(origin, -np.inf, values)
    flat = int(np.argmax(values))
    i, j = np.unravel_index(flat, values.shape)
    best = (float(ss[i, j]), float(tt[i, j]))
    f_best = float(values[i, j])

    # local ascent polish from the best grid point
    s, t = best
    fval = f_best
    step = max(t_max / grid_n, 1e-6)
    for _ in range(ascent_iters):
        g = cond.gradient(s, t)
        gn = float(np.linalg.norm(g))
        if gn == 0.0 or not math.isfinite(gn):
            break
        moved = False
        while step > 1e-14 * t_max:
            s2, t2 = s + step * g[0] / gn, t + step * g[1] / gn
            if (s2, t2) != (0.0, 0.0):
                f2 = float(cond(s2, t2))
                if f2 > fval:
                    s, t, fval = s2, t2, f2
                    step *= 2.0
                    moved = True
                    break
            step *= 0.5
        if not moved:
            break
        if fval >= 0.0:
            break
    if fval > f_best:
        best, f_best = (s, t), fval

    rays = []
    refuting_ray = None
    for ds, dt in ((1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)):
        leadings = [_ray_leading(terms) for terms in cond.ray_coefficients(ds, dt)]
        expo, coeff = max(leadings, key=lambda ec: (ec[1] > 0, ec[0] if ec[1] > 0 else -ec[0]))
        if coeff > 0.0:
            case = "diverges-positive"
            refuting_ray = refuting_ray or (ds, dt)
        elif all(c == 0.0 for _, c in leadings):
            case = "identically-zero"
            refuting_ray = refuting_ray or (ds, dt)
        else:
            case = "conclusive-negative"
        rays.append({"direction": [ds, dt], "leading_exponent": expo, "leading_coefficient": coeff, "case": case})
    region["rays"] = rays

    if f_best >= -1e-12 and best != (0.0, 0.0):
        return NonexistenceVerdict(
            mode=mode, verdict="refuted", f_max=f_best, argmax=best,
            witness=best, worst_margin=None, region=region, ray_analysis=rays,
        )
    if refuting_ray is not None:
        ds, dt = refuting_ray
        scale = t_max
        witness = None
        for _ in range(220):
            cand = (ds * scale, dt * scale)
            if float(cond(*cand)) >= 0.0:
                witness = cand
                break
            scale *= 2.0
        if witness is not None:
            return NonexistenceVerdict(
                mode=mode, verdict="refuted", f_max=float(cond(*witness)), argmax=witness,
                witness=witness, worst_margin=None, region=region, ray_analysis=rays,
            )
    return NonexistenceVerdict(
        mode=mode, verdict="holds-numerically", f_max=f_best, argmax=best,
        witness=None, worst_margin=f_best, region=region, ray_analysis=rays,
    )


@dataclass
class FullNontrivialityReport:
    """Classification audit of verified points under nonvanishing forcing terms."""

    applicable: bool
    checked: int
    violations: list[dict]

    @property
    def all_fully_nontrivial(self) -> bool:
        return not self.violations

    def to_json_dict(self) -> dict:
        return {
            "applicable": self.applicable,
            "checked": self.checked,
            "violations": self.violations,
            "all_fully_nontrivial": self.all_fully_nontrivial,
        }


def fully_nontrivial_check(instance: KirchhoffInstance, points: list[CriticalPoint]) -> FullNontrivialityReport:
    """Assert every verified point has two nonzero components when g1, g2 are nonzero.

    A verified semi-trivial pair under nonvanishing forcing would contradict
    the frozen component's equation at some vertex; the report names that
    vertex and its residual.
    """
    applicable = bool(np.any(instance.g1_arr != 0.0) and np.any(instance.g2_arr != 0.0))
    violations = []
    checked = 0
    for idx, cp in enumerate(points):
        if not cp.verified:
            continue
        checked += 1
        if cp.classification == "fully-non-trivial":
            continue
        x = instance.state_vector(cp.state)
        r1, r2 = instance.model.residual(x)
        res = r2 if cp.classification in ("semi-trivial-u", "trivial") else r1
        at = int(np.argmax(np.abs(res)))
        violations.append(
            {
                "point_index": idx,
                "classification": cp.classification,
                "vertex": instance.domain.omega[at],
                "residual": float(res[at]),
            }
        )
    return FullNontrivialityReport(applicable=applicable, checked=checked, violations=violations)
