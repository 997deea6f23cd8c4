"""Critical-point solvers for the coupled system and its scalar reductions.

All solvers work on concatenated coefficient vectors (u-block then v-block),
use seeded randomness for reproducibility, and hand every candidate to an
independent verification pass (basis gradient plus pointwise strong residual)
before it may be reported as a solution.
"""

from __future__ import annotations

import itertools
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import ParameterError, SolverFailure
from .kirchhoff import KirchhoffInstance, MountainPassGeometry, StatePair

CLASSIFICATIONS = ("trivial", "semi-trivial-u", "semi-trivial-v", "fully-non-trivial")


@dataclass
class SolverConfig:
    """Tolerances, budgets and seeding shared by every solver."""

    grad_tol: float = 1e-8
    residual_tol: float = 1e-8
    max_iters: int = 100_000
    armijo_slope: float = 1e-4
    backtrack: float = 0.5
    path_points: int = 50
    restarts: int = 50
    dedup_radius: float = 1e-6
    rng_seed: int = 0
    classify_tol: float = 1e-9
    polish_trigger: float = 1e-4
    threads: int = 1

    def __post_init__(self):
        for name in ("grad_tol", "residual_tol", "armijo_slope", "dedup_radius", "classify_tol"):
            if not getattr(self, name) > 0.0:
                raise ParameterError(f"{name} must be positive")
        if not (0.0 < self.backtrack < 1.0):
            raise ParameterError("backtrack factor must lie in (0, 1)")
        if self.path_points < 3:
            raise ParameterError("path_points must be at least 3")
        if self.max_iters < 1 or self.restarts < 1 or self.threads < 1:
            raise ParameterError("max_iters, restarts and threads must be positive")

    def to_json_dict(self) -> dict:
        return {
            "grad_tol": self.grad_tol,
            "residual_tol": self.residual_tol,
            "max_iters": self.max_iters,
            "armijo_slope": self.armijo_slope,
            "backtrack": self.backtrack,
            "path_points": self.path_points,
            "restarts": self.restarts,
            "dedup_radius": self.dedup_radius,
            "rng_seed": self.rng_seed,
            "classify_tol": self.classify_tol,
            "polish_trigger": self.polish_trigger,
            "threads": self.threads,
        }


@dataclass
class CriticalPoint:
    """A candidate state with its verification data and classification."""

    state: StatePair
    energy: float
    grad_norm: float
    max_residual: float
    classification: str
    method: str
    verified: bool
    iterations: int = 0
    seed: int | None = None
    message: str = ""
    path_profile: list[tuple[int, float, float]] | None = None

    def to_json_dict(self) -> dict:
        domain = self.state.u.domain
        return {
            "u": {x: self.state.u.function.value(x) for x in domain.omega},
            "v": {x: self.state.v.function.value(x) for x in domain.omega},
            "energy": self.energy,
            "grad_norm": self.grad_norm,
            "max_residual": self.max_residual,
            "classification": self.classification,
            "method": self.method,
            "verified": self.verified,
            "iterations": self.iterations,
            "seed": self.seed,
            "message": self.message,
        }


def classify_solution(state: StatePair, tol: float = 1e-9) -> str:
    """Classify a pair by which components vanish (up to ``tol`` in norm)."""
    u_zero = state.norm_u < tol
    v_zero = state.norm_v < tol
    if u_zero and v_zero:
        return "trivial"
    if v_zero:
        return "semi-trivial-u"
    if u_zero:
        return "semi-trivial-v"
    return "fully-non-trivial"


def verify(
    instance: KirchhoffInstance,
    state: StatePair | np.ndarray,
    config: SolverConfig | None = None,
    method: str = "verify",
    iterations: int = 0,
    seed: int | None = None,
    message: str = "",
) -> CriticalPoint:
    """Fill every critical-point field from independent evaluations."""
    config = config or SolverConfig()
    model = instance.model
    if isinstance(state, StatePair):
        x = instance.state_vector(state)
        pair = state
    else:
        x = np.asarray(state, dtype=float)
        pair = instance.state(x[: model.n], x[model.n :])
    grad = model.grad(x)
    r1, r2 = model.residual(x)
    grad_norm = float(np.linalg.norm(grad))
    max_residual = float(max(np.max(np.abs(r1)), np.max(np.abs(r2))))
    e = model.energy(x)
    finite = math.isfinite(e) and math.isfinite(grad_norm) and math.isfinite(max_residual)
    verified = finite and grad_norm < config.grad_tol and max_residual < config.residual_tol
    return CriticalPoint(
        state=pair,
        energy=e,
        grad_norm=grad_norm,
        max_residual=max_residual,
        classification=classify_solution(pair, config.classify_tol),
        method=method,
        verified=verified,
        iterations=iterations,
        seed=seed,
        message=message,
    )


def _fd_jacobian(fn: Callable[[np.ndarray], np.ndarray], x: np.ndarray) -> np.ndarray:
    m = len(fn(x))
    jac = np.empty((m, len(x)))
    for j in range(len(x)):
        h = 1e-6 * (1.0 + abs(x[j]))
        xp, xm = x.copy(), x.copy()
        xp[j] += h
        xm[j] -= h
        jac[:, j] = (fn(xp) - fn(xm)) / (2.0 * h)
    return jac


def newton_polish(
    grad_fn: Callable[[np.ndarray], np.ndarray],
    x0: np.ndarray,
    tol: float = 1e-12,
    max_iter: int = 60,
) -> tuple[np.ndarray, bool]:
    """Damped Newton iteration on the gradient map with a finite-difference Jacobian."""
    x = np.asarray(x0, dtype=float).copy()
    f = grad_fn(x)
    fn = float(np.linalg.norm(f))
    for _ in range(max_iter):
        if fn < tol:
            return x, True
        jac = _fd_jacobian(grad_fn, x)
        try:
            dx = np.linalg.solve(jac, -f)
        except np.linalg.LinAlgError:
            dx = np.linalg.lstsq(jac, -f, rcond=None)[0]
        if not np.all(np.isfinite(dx)):
            return x, False
        t, improved = 1.0, False
        while t > 1e-12:
            cand = x + t * dx
            fc_vec = grad_fn(cand)
            fc = float(np.linalg.norm(fc_vec))
            if math.isfinite(fc) and (fc < fn * (1.0 - 0.25 * t) or fc < tol):
                x, f, fn, improved = cand, fc_vec, fc, True
                break
            t *= 0.5
        if not improved:
            return x, fn < tol
    return x, fn < tol


def _armijo_descent(
    model,
    x0: np.ndarray,
    config: SolverConfig,
    max_iters: int,
    project: Callable[[np.ndarray], np.ndarray] | None = None,
    energy_trace: list | None = None,
) -> tuple[np.ndarray, float, int, str]:
    """Gradient descent with backtracking; accepted steps strictly decrease energy.

    Returns (iterate, energy, iterations, status) with status one of
    ``converged``, ``stalled`` or ``max_iters``.
    """
    x = np.asarray(x0, dtype=float).copy()
    e = model.energy(x)
    step = 1.0
    for it in range(max_iters):
        g = model.grad(x)
        gn = float(np.linalg.norm(g))
        if gn < config.grad_tol:
            return x, e, it, "converged"
        accepted = False
        t = step
        while t > 1e-18:
            cand = x - t * g
            if project is not None:
                cand = project(cand)
            ec = model.energy(cand)
            if ec <= e - config.armijo_slope * t * gn * gn:
                accepted = True
                break
            t *= config.backtrack
        if not accepted:
            return x, e, it, "stalled"
        if energy_trace is not None:
            energy_trace.append(ec)
        x, e = cand, ec
        step = min(t / config.backtrack, 1e12)
    return x, e, max_iters, "max_iters"


def _map_restarts(fn: Callable, args: Sequence, threads: int) -> list:
    """Run independent restarts, optionally on a thread pool; order-stable merge."""
    if threads <= 1 or len(args) <= 1:
        return [fn(a) for a in args]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, args))


def _polished_candidate(instance, x, config, method, iterations, seed, checks=None, message=""):
    """Newton-polish a near-critical iterate and verify; fall back to the raw iterate."""
    model = instance.model
    polished, _ = newton_polish(model.grad, x, tol=min(config.grad_tol * 1e-3, 1e-12))
    for cand in (polished, x):
        if not np.all(np.isfinite(cand)):
            continue
        if checks is not None and not checks(cand):
            continue
        cp = verify(instance, cand, config, method=method, iterations=iterations, seed=seed, message=message)
        if cp.verified:
            return cp
    return verify(instance, x, config, method=method, iterations=iterations, seed=seed, message=message)


def minimize_in_ball(instance: KirchhoffInstance, rho: float, config: SolverConfig | None = None) -> CriticalPoint:
    """Minimise the energy over the closed product-norm ball of radius rho.

    Projected gradient descent with backtracking from a small negative-energy
    start; the retraction onto the ball is radial rescaling.  Returns a
    verified interior critical point of negative energy, or an unverified
    report describing what went wrong (no negative-energy start, iterate
    stuck on the ball boundary, iteration budget exhausted).
    """
    if not rho > 0.0:
        raise ParameterError(f"rho must be positive, got {rho}")
    config = config or SolverConfig()
    model = instance.model
    dim = 2 * model.n
    seeds = np.random.SeedSequence(config.rng_seed).spawn(config.restarts)

    def project(x: np.ndarray) -> np.ndarray:
        nx = model.x_norm(x)
        if nx > rho:
            return x * (rho / nx)
        return x

    def negative_start(rng: np.random.Generator) -> np.ndarray | None:
        d = rng.standard_normal(dim)
        nd = model.x_norm(d)
        if nd == 0.0:
            return None
        d = d / nd
        t = rho
        for _ in range(60):
            for s in (1.0, -1.0):
                x0 = s * t * d
                if model.energy(x0) < 0.0:
                    return x0
            t *= 0.5
        return None

    def one_restart(idx_seed) -> CriticalPoint:
        idx, seed = idx_seed
        rng = np.random.default_rng(seed)
        x0 = negative_start(rng)
        if x0 is None:
            zero = np.zeros(dim)
            return verify(instance, zero, config, method="minimize-in-ball",
                          seed=config.rng_seed, message="no-negative-energy-start")
        x, e, iters, status = _armijo_descent(
            model, x0, config, config.max_iters, project=project
        )
        interior = model.x_norm(x) < rho * (1.0 - 1e-12)
        if status in ("converged", "stalled") and interior:
            def checks(c):
                return model.x_norm(c) < rho and model.energy(c) < 0.0
            cp = _polished_candidate(instance, x, config, "minimize-in-ball", iters,
                                     config.rng_seed, checks=checks)
            if cp.verified and cp.energy < 0.0:
                return cp
            return cp
        message = "boundary-stuck" if not interior else status
        return verify(instance, x, config, method="minimize-in-ball",
                      iterations=iters, seed=config.rng_seed, message=message)

    results = _map_restarts(one_restart, list(enumerate(seeds)), config.threads)
    hits = [cp for cp in results if cp.verified and cp.energy < 0.0]
    if hits:
        return min(hits, key=lambda cp: cp.energy)
    return min(results, key=lambda cp: cp.energy)


def find_endpoint(
    instance: KirchhoffInstance,
    rho: float,
    config: SolverConfig | None = None,
    direction: StatePair | None = None,
) -> StatePair:
    """Scale a coupling-active direction until the energy is negative beyond rho.

    Doubles t until the energy at ``t * direction`` is negative and the
    product norm exceeds rho.  The default direction is the all-ones pair.
    Raises :class:`SolverFailure` when no sign change occurs before t
    exceeds 1e30, which signals a missing superlinear coupling.
    """
    config = config or SolverConfig()
    model = instance.model
    if direction is None:
        d = np.ones(2 * model.n)
    else:
        d = instance.state_vector(direction)
    if not np.any(d):
        raise SolverFailure("endpoint direction is identically zero")
    t = 1.0
    while t <= 1e30:
        x = t * d
        if model.energy(x) < 0.0 and model.x_norm(x) > rho:
            return instance.state(x[: model.n], x[model.n :])
        t *= 2.0
    raise SolverFailure(
        "no negative-energy endpoint before t = 1e30; "
        "the coupling term never dominates along this direction"
    )


def _redistribute(model, path: np.ndarray) -> np.ndarray:
    """Re-space path nodes at uniform product-norm arc length (endpoints fixed)."""
    n_nodes = path.shape[0]
    seg = path[1:] - path[:-1]
    lengths = np.array([model.x_norm(s) for s in seg])
    total = float(lengths.sum())
    if total <= 0.0:
        return path
    cum = np.concatenate([[0.0], np.cumsum(lengths)])
    targets = np.linspace(0.0, total, n_nodes)
    out = np.empty_like(path)
    out[0], out[-1] = path[0], path[-1]
    j = 0
    for i in range(1, n_nodes - 1):
        s = targets[i]
        while j < len(lengths) - 1 and cum[j + 1] < s:
            j += 1
        span = lengths[j] if lengths[j] > 0.0 else 1.0
        frac = (s - cum[j]) / span
        out[i] = path[j] + frac * seg[j]
    return out


def mountain_pass(
    instance: KirchhoffInstance,
    endpoint: StatePair,
    config: SolverConfig | None = None,
    geometry: MountainPassGeometry | None = None,
) -> CriticalPoint:
    """Path-deformation saddle search between the origin and a negative-energy endpoint.

    Discretises the segment into ``path_points`` nodes and repeats: locate
    the path maximum, take one backtracking descent step on that node,
    re-space the nodes at uniform arc length.  Stops when the gradient at the
    path maximum drops below tolerance; a damped Newton polish accelerates
    the endgame.  When barrier ``geometry`` is supplied, a path maximum that
    collapses below half the barrier value is reported as a geometry failure.
    """
    config = config or SolverConfig()
    model = instance.model
    e_vec = instance.state_vector(endpoint)
    n_nodes = config.path_points
    path = np.outer(np.linspace(0.0, 1.0, n_nodes), e_vec)
    energies = model.batch_energy(path)
    step = 1.0
    barrier = geometry.g_at_zstar if geometry is not None else None

    def profile(path, energies):
        seg = path[1:] - path[:-1]
        lens = np.array([model.x_norm(s) for s in seg])
        cum = np.concatenate([[0.0], np.cumsum(lens)])
        ts = cum / cum[-1] if cum[-1] > 0 else np.linspace(0, 1, len(energies))
        return [(i, float(t), float(e)) for i, (t, e) in enumerate(zip(ts, energies))]

    def accept(x, iters, message=""):
        def checks(c):
            e = model.energy(c)
            if not math.isfinite(e) or e <= 0.0:
                return False
            if barrier is not None and e < barrier - 1e-8:
                return False
            return True

        cp = _polished_candidate(instance, x, config, "mountain-pass", iters,
                                 config.rng_seed, checks=checks, message=message)
        cp.path_profile = profile(path, energies)
        return cp

    last_polish = -10**9
    for it in range(config.max_iters):
        j = 1 + int(np.argmax(energies[1:-1]))
        g = model.grad(path[j])
        gn = float(np.linalg.norm(g))
        if gn < config.grad_tol:
            return accept(path[j], it)
        if gn < config.polish_trigger and it - last_polish >= 25:
            last_polish = it
            cp = accept(path[j], it)
            if cp.verified and cp.energy > 0.0:
                return cp
        accepted = False
        t = step
        while t > 1e-18:
            cand = path[j] - t * g
            ec = model.energy(cand)
            if ec <= energies[j] - config.armijo_slope * t * gn * gn:
                accepted = True
                break
            t *= config.backtrack
        if not accepted:
            cp = accept(path[j], it, message="descent-stalled-at-path-maximum")
            return cp
        path[j] = cand
        energies[j] = ec
        step = min(t / config.backtrack, 1e12)
        path = _redistribute(model, path)
        energies = model.batch_energy(path)
        if barrier is not None and barrier > 0.0:
            if float(np.max(energies[1:-1])) < barrier / 2.0:
                cp = verify(instance, path[j], config, method="mountain-pass",
                            iterations=it, seed=config.rng_seed,
                            message="path-maximum-collapsed-below-barrier")
                cp.path_profile = profile(path, energies)
                return cp
    j = 1 + int(np.argmax(energies[1:-1]))
    cp = verify(instance, path[j], config, method="mountain-pass",
                iterations=config.max_iters, seed=config.rng_seed, message="max_iters")
    cp.path_profile = profile(path, energies)
    return cp


def _component_data(instance, component: str):
    model = instance.model
    n = model.n
    if component == "u":
        lam = instance.params.lambda1
        sl = slice(0, n)
        g_own, g_other = instance.g1_arr, instance.g2_arr
    elif component == "v":
        lam = instance.params.lambda2
        sl = slice(n, 2 * n)
        g_own, g_other = instance.g2_arr, instance.g1_arr
    else:
        raise ParameterError(f"component must be 'u' or 'v', got {component!r}")
    return n, lam, sl, g_own, g_other


def _single_vertex_magnitude(model, sl, n, i) -> float:
    """Positive stationary scale of the energy along one basis direction."""

    def slope(t: float) -> float:
        x = np.zeros(2 * n)
        x[sl][i] = t
        return float(model.grad(x)[sl][i])

    lo = None
    hi = None
    prev_t, prev_s = None, None
    for t in np.geomspace(1e-6, 1e6, 121):
        s = slope(t)
        if prev_s is not None and prev_s < 0.0 <= s:
            lo, hi = prev_t, t
            break
        prev_t, prev_s = t, s
    if lo is None:
        return 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if slope(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _scalar_embed(sl, n, coeffs) -> np.ndarray:
    x = np.zeros(2 * n)
    x[sl] = coeffs
    return x


def _frozen_support_solve(model, sl, n, start: np.ndarray, tol: float) -> np.ndarray | None:
    """Newton on the gradient restricted to the nonzero pattern of ``start``."""
    support = np.flatnonzero(start)
    if len(support) == 0:
        return None

    def reduced(c_s: np.ndarray) -> np.ndarray:
        c = np.zeros(n)
        c[support] = c_s
        return model.grad(_scalar_embed(sl, n, c))[sl][support]

    sol, ok = newton_polish(reduced, start[support], tol=tol)
    if not ok:
        return None
    c = np.zeros(n)
    c[support] = sol
    return c


def scalar_solve(instance: KirchhoffInstance, component: str, config: SolverConfig | None = None) -> CriticalPoint:
    """Minimise the one-component reduction and return the embedded semi-trivial pair.

    The reduction is coercive whenever r < p, so multi-start descent plus a
    Newton polish reaches a global minimiser in practice.  The returned point
    is verified against the full system; if the opposite forcing term is not
    identically zero the embedding cannot solve the full system and the
    verdict says so.
    """
    config = config or SolverConfig()
    model = instance.model
    n, lam, sl, g_own, g_other = _component_data(instance, component)
    if np.any(g_other != 0.0):
        warnings.warn(
            f"the opposite forcing term is not identically zero; a ({component}, 0)-type "
            "embedding cannot satisfy the full system",
            UserWarning,
            stacklevel=2,
        )
    mags = np.array([_single_vertex_magnitude(model, sl, n, i) for i in range(n)])
    starts: list[np.ndarray] = []
    for i in range(n):
        for scale in (0.1, 0.5, 1.0, 2.0):
            for sign in (1.0, -1.0):
                c = np.zeros(n)
                c[i] = sign * scale * mags[i]
                starts.append(c)
    starts.append(mags.copy())
    starts.append(-mags)
    seeds = np.random.SeedSequence(config.rng_seed + 1).spawn(config.restarts)
    scale = float(np.mean(mags))
    for seed in seeds:
        rng = np.random.default_rng(seed)
        starts.append(rng.standard_normal(n) * scale)

    opposite = slice(n, 2 * n) if component == "u" else slice(0, n)

    def pin(x: np.ndarray) -> np.ndarray:
        x = x.copy()
        x[opposite] = 0.0
        return x

    def reduced_grad(c: np.ndarray) -> np.ndarray:
        return model.grad(_scalar_embed(sl, n, c))[sl]

    def run(start: np.ndarray) -> CriticalPoint:
        x0 = _scalar_embed(sl, n, start)
        x, e, iters, status = _armijo_descent(model, x0, config, min(config.max_iters, 5000), project=pin)
        polished, ok = newton_polish(reduced_grad, x[sl], tol=min(config.grad_tol * 1e-3, 1e-12))
        cand = _scalar_embed(sl, n, polished) if ok and np.all(np.isfinite(polished)) else pin(x)
        return verify(instance, cand, config, method=f"scalar-{component}",
                      iterations=iters, seed=config.rng_seed)

    results = _map_restarts(run, starts, config.threads)
    verified = [cp for cp in results if cp.verified]
    if verified:
        return min(verified, key=lambda cp: cp.energy)
    return min(results, key=lambda cp: cp.grad_norm)


def scalar_multiplicity(
    instance: KirchhoffInstance, component: str, config: SolverConfig | None = None
) -> list[CriticalPoint]:
    """Search for many distinct nonzero critical points of the even reduction.

    Requires both forcing terms to vanish (so the reduced energy is even) and
    a positive parameter for the chosen component.  Restarts run from scaled
    basis vectors, all small sign patterns (with zero entries frozen and the
    remaining coordinates solved by Newton) and random states; results are
    closed under negation and deduplicated by product-norm distance.  The
    search is heuristic: it can undercount, and callers compare the pair
    count against the domain dimension.
    """
    config = config or SolverConfig()
    model = instance.model
    n, lam, sl, g_own, g_other = _component_data(instance, component)
    if np.any(g_own != 0.0) or np.any(g_other != 0.0):
        raise ParameterError("multiplicity search requires both forcing terms to vanish")
    if not lam > 0.0:
        raise ParameterError(f"multiplicity search requires a positive parameter for {component}")
    mags = np.array([_single_vertex_magnitude(model, sl, n, i) for i in range(n)])
    newton_tol = min(config.grad_tol * 1e-3, 1e-12)

    candidates: list[np.ndarray] = []

    def consider(c: np.ndarray | None):
        if c is None or not np.all(np.isfinite(c)):
            return
        candidates.append(c)

    # descent + polish from scaled basis vectors
    basis_starts = []
    for i in range(n):
        for scale in (0.1, 0.5, 1.0, 2.0):
            c = np.zeros(n)
            c[i] = scale * mags[i]
            basis_starts.append(c)

    opposite = slice(n, 2 * n) if component == "u" else slice(0, n)

    def pin(x: np.ndarray) -> np.ndarray:
        x = x.copy()
        x[opposite] = 0.0
        return x

    def reduced_grad(c: np.ndarray) -> np.ndarray:
        return model.grad(_scalar_embed(sl, n, c))[sl]

    def descend(start: np.ndarray) -> np.ndarray | None:
        x0 = _scalar_embed(sl, n, start)
        x, _, _, _ = _armijo_descent(model, x0, config, min(config.max_iters, 2000), project=pin)
        polished, ok = newton_polish(reduced_grad, x[sl], tol=newton_tol)
        return polished if ok else None

    for c in _map_restarts(descend, basis_starts, config.threads):
        consider(c)

    # frozen-support sign patterns reach saddles of the even reduction
    if n <= 8:
        patterns = itertools.product((-1.0, 0.0, 1.0), repeat=n)
    else:
        patterns = []
    pattern_starts = [
        np.array(sigma) * mags for sigma in patterns if any(s != 0.0 for s in sigma)
    ]
    for start in pattern_starts:
        consider(_frozen_support_solve(model, sl, n, start, newton_tol))

    # random Newton restarts
    seeds = np.random.SeedSequence(config.rng_seed + 2).spawn(config.restarts)
    scale = float(np.mean(mags))

    def random_newton(seed) -> np.ndarray | None:
        rng = np.random.default_rng(seed)
        start = rng.standard_normal(n) * scale
        sol, ok = newton_polish(reduced_grad, start, tol=newton_tol)
        return sol if ok else None

    for c in _map_restarts(random_newton, list(seeds), config.threads):
        consider(c)

    # antipodal closure: the reduced energy is even
    candidates += [-c for c in candidates]

    points: list[CriticalPoint] = []
    for c in sorted(candidates, key=lambda c: tuple(c)):
        cp = verify(instance, _scalar_embed(sl, n, c), config, method=f"scalar-multiplicity-{component}",
                    seed=config.rng_seed)
        if not cp.verified or cp.classification == "trivial":
            continue
        x_new = instance.state_vector(cp.state)
        duplicate = False
        for kept in points:
            if model.x_norm(instance.state_vector(kept.state) - x_new) < config.dedup_radius:
                duplicate = True
                break
        if not duplicate:
            points.append(cp)
    return points
