"""The weighted summation operator ``(Sf)(xi) = w(xi) sum_{xi' <= xi} u(xi') f(xi')``.

Norm estimation maximizes ``||Sf||_q`` over the unit sphere of the source norm,
restricted to ``f >= 0`` (the kernel is nonnegative, so ``|Sf| <= S|f|``). Each
step replaces ``f`` by the source-norm maximizer of ``<grad, .>`` where
``grad = S^*((Sf)^{q-1})``: for the ``l_p`` source this is the classical
``h^{1/(p-1)}`` power step, for the mixed ``l_q(l_p)`` source its level-wise
analogue. By convexity of ``||S.||_q`` the ratio never decreases along a start;
a backtracking line search on ``f + t(d - f)`` guards against rounding.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .bounds import lower_certificate
from .config import get_settings
from .generators import make_rng
from .models.base import InvalidExponent, NonFiniteIterate, TooLarge
from .models.requests import SolverOptions
from .models.results import NormEstimate, StartLabel
from .models.tree import Exponents, RootedTree, WeightPair
from .tree import lr_norm, path_sums, path_to_root, subtree_sums, vertex_vector


logger = logging.getLogger(__name__)

BACKTRACK_STEPS = 12
MONOTONE_SLACK = 1e-12


def apply_summation(t: RootedTree, wt: WeightPair, f: Sequence[float]) -> np.ndarray:
    """``g(xi) = w(xi) sum_{xi' <= xi} u(xi') f(xi')`` in one top-down pass."""
    f = vertex_vector(t, f, "f")
    return wt.w_array * path_sums(t, wt.u_array * f)


def adjoint_apply(t: RootedTree, wt: WeightPair, y: Sequence[float]) -> np.ndarray:
    """``h(eta) = u(eta) sum_{xi >= eta} w(xi) y(xi)`` in one bottom-up pass."""
    y = vertex_vector(t, y, "y")
    return wt.u_array * subtree_sums(t, wt.w_array * y)


def lp_norm(f: Sequence[float], r: float) -> float:
    """The global ``l_r`` norm, max-factored."""
    return lr_norm(f, r)


def mixed_norm(t: RootedTree, f: Sequence[float], p: float, q: float) -> float:
    """``(sum_j ||f restricted to level j||_p^q)^{1/q}``."""
    if not (1 < p < np.inf and 1 < q < np.inf):
        raise InvalidExponent(f"mixed norm needs 1 < p, q < inf, got p={p}, q={q}")
    f = vertex_vector(t, f, "f")
    return lr_norm([lr_norm(f[level], p) for level in t.levels], q)


def dense_matrix(t: RootedTree, wt: WeightPair) -> np.ndarray:
    """The explicit kernel ``K[xi, xi'] = w(xi) u(xi') [xi' <= xi]``."""
    K = np.zeros((t.n, t.n))
    for xi in range(t.n):
        path = list(path_to_root(t, xi))
        K[xi, path] = wt.w_array[xi] * wt.u_array[path]
    return K


def rayleigh_ratio(t: RootedTree, wt: WeightPair, e: Exponents, f: Sequence[float]) -> float:
    """``||Sf||_q / ||f||_p`` (0 for ``f = 0``)."""
    denom = lp_norm(f, e.p)
    return lp_norm(apply_summation(t, wt, f), e.q) / denom if denom > 0 else 0.0


def mixed_rayleigh_ratio(t: RootedTree, wt: WeightPair, e: Exponents, f: Sequence[float]) -> float:
    """``||Sf||_q / ||f||_{l_q(l_p)}`` (0 for ``f = 0``)."""
    denom = mixed_norm(t, f, e.p, e.q)
    return lp_norm(apply_summation(t, wt, f), e.q) / denom if denom > 0 else 0.0


def _lp_dual_map(h: np.ndarray, p: float) -> Optional[np.ndarray]:
    """Unit-``l_p`` maximizer of ``<h, .>`` for ``h >= 0``: ``h^{p'-1}`` normalized."""
    peak = h.max(initial=0.0)
    if peak <= 0:
        return None
    d = (h / peak) ** (1.0 / (p - 1))
    return d / lr_norm(d, p)


def _mixed_dual_map(t: RootedTree, h: np.ndarray, p: float, q: float) -> Optional[np.ndarray]:
    """Unit-``l_q(l_p)`` maximizer of ``<h, .>`` for ``h >= 0``.

    Within level ``j`` the direction is ``h^{p'-1}`` normalized in ``l_p``; the
    level amplitudes are ``(||h_j||_{p'} / ||(||h_j||_{p'})_j||_{q'})^{q'-1}``.
    Zero level blocks get amplitude 0.
    """
    peak = h.max(initial=0.0)
    if peak <= 0:
        return None
    h = h / peak
    p_prime = p / (p - 1)
    q_prime = q / (q - 1)
    level_norms = np.array([lr_norm(h[level], p_prime) for level in t.levels])
    total = lr_norm(level_norms, q_prime)
    d = np.zeros_like(h)
    for level, block_norm in zip(t.levels, level_norms):
        if block_norm > 0:
            direction = (h[level] / block_norm) ** (p_prime - 1)
            d[level] = direction * (block_norm / total) ** (q_prime - 1)
    return d / mixed_norm(t, d, p, q)


@dataclass
class _StartResult:
    label: StartLabel
    value: float
    f: np.ndarray
    iterations: int
    converged: bool
    history: list[float] = field(default_factory=list)


def _ascend(
    apply: Callable[[np.ndarray], np.ndarray],
    adjoint: Callable[[np.ndarray], np.ndarray],
    source_norm: Callable[[np.ndarray], float],
    dual_map: Callable[[np.ndarray], Optional[np.ndarray]],
    q: float,
    f0: np.ndarray,
    label: StartLabel,
    max_iter: int,
    tol: float,
) -> _StartResult:
    scale = source_norm(f0)
    f = f0 / scale
    g = apply(f)
    if not np.all(np.isfinite(g)):
        raise NonFiniteIterate(f"non-finite image of start {label.kind}; rescale the weights")
    ratio = lr_norm(g, q)
    history = [ratio]
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        g_norm = lr_norm(g, q)
        if g_norm == 0:
            converged = True
            break
        d = dual_map(adjoint((g / g_norm) ** (q - 1)))
        if d is None:
            converged = True
            break
        candidate, g_candidate, value = d, apply(d), 0.0
        for _ in range(BACKTRACK_STEPS):
            if not np.all(np.isfinite(g_candidate)):
                raise NonFiniteIterate(f"non-finite iterate at step {iterations} of start {label.kind}")
            value = lr_norm(g_candidate, q)
            if value >= ratio * (1 - MONOTONE_SLACK):
                break
            mixed = 0.5 * (f + candidate)
            candidate = mixed / source_norm(mixed)
            g_candidate = apply(candidate)
        if value < ratio:
            # no step improves: f is a fixed point up to rounding
            converged = value >= ratio * (1 - MONOTONE_SLACK)
            break
        improvement = value - ratio
        f, g, ratio = candidate, g_candidate, value
        history.append(ratio)
        if improvement < tol * ratio:
            converged = True
            break
    return _StartResult(
        label=label, value=ratio, f=f, iterations=iterations, converged=converged, history=history
    )


def _random_starts(n: int, opts: SolverOptions) -> list[tuple[StartLabel, np.ndarray]]:
    starts = []
    for k, child in enumerate(np.random.SeedSequence(opts.seed).spawn(opts.restarts)):
        rng = make_rng(child)
        starts.append((StartLabel(kind="random", index=0, seed=k), rng.random(n) + 1e-3))
    return starts


def _collect_starts(
    t: RootedTree,
    wt: WeightPair,
    e: Exponents,
    opts: SolverOptions,
    source_norm: Callable[[np.ndarray], float],
    extra: Sequence[tuple[StartLabel, np.ndarray]] = (),
) -> list[tuple[StartLabel, np.ndarray]]:
    starts: list[tuple[StartLabel, np.ndarray]] = []
    if opts.include_certificate_starts:
        for xi in range(t.n):
            f = lower_certificate(t, wt, e, xi)
            if source_norm(f) > 0:
                starts.append((StartLabel(kind="certificate", index=0, vertex=xi), f))
    starts.append((StartLabel(kind="constant", index=0), np.ones(t.n)))
    starts.extend(_random_starts(t.n, opts))
    for f in opts.extra_starts:
        arr = np.maximum(vertex_vector(t, f, "start"), 0.0)
        if source_norm(arr) > 0:
            starts.append((StartLabel(kind="supplied", index=0), arr))
    starts.extend(extra)
    return [(label.model_copy(update={"index": i}), f) for i, (label, f) in enumerate(starts)]


def _run_starts(
    t: RootedTree,
    wt: WeightPair,
    e: Exponents,
    opts: SolverOptions,
    source_norm: Callable[[np.ndarray], float],
    dual_map: Callable[[np.ndarray], Optional[np.ndarray]],
    extra: Sequence[tuple[StartLabel, np.ndarray]] = (),
) -> NormEstimate:
    if not np.any(wt.u_array) or not np.any(wt.w_array):
        logger.info("u or w vanishes identically; the operator is zero")
        ones = np.ones(t.n)
        return NormEstimate(
            value=0.0,
            maximizer=tuple(ones / source_norm(ones)),
            iterations=0,
            restarts_used=0,
            converged=True,
            start_labels=StartLabel(kind="constant", index=0),
            regime=e.regime,
        )

    def apply(f: np.ndarray) -> np.ndarray:
        return apply_summation(t, wt, f)

    def adjoint(y: np.ndarray) -> np.ndarray:
        return adjoint_apply(t, wt, y)

    best: Optional[_StartResult] = None
    total_iterations = 0
    starts = _collect_starts(t, wt, e, opts, source_norm, extra)
    for label, f0 in starts:
        result = _ascend(apply, adjoint, source_norm, dual_map, e.q, f0, label, opts.max_iter, opts.tol)
        total_iterations += result.iterations
        logger.debug(
            f"start {label.index} ({label.kind}): ratio {result.value:.12g} after "
            f"{result.iterations} iterations, converged={result.converged}"
        )
        if best is None or result.value > best.value:
            best = result
    assert best is not None
    return NormEstimate(
        value=lp_norm(apply(best.f), e.q) / source_norm(best.f),
        maximizer=tuple(float(x) for x in best.f),
        iterations=total_iterations,
        restarts_used=len(starts),
        converged=best.converged,
        start_labels=best.label,
        regime=e.regime,
        history=tuple(best.history),
    )


def operator_norm(
    t: RootedTree,
    wt: WeightPair,
    e: Exponents,
    opts: Optional[SolverOptions] = None,
) -> NormEstimate:
    """Certified lower bound on the ``l_p -> l_q`` norm of ``S``.

    Starts are the root-path certificates (when enabled, which makes the
    result at least the tree bound ``M``), the constant vector, seeded random
    vectors and any caller-supplied vectors; the best ratio wins, ties going to
    the earliest start.
    """
    opts = opts or SolverOptions()
    if e.regime != "p<q":
        logger.info(f"estimating the operator norm in regime {e.regime}")

    def source_norm(f: np.ndarray) -> float:
        return lr_norm(f, e.p)

    def dual_map(h: np.ndarray) -> Optional[np.ndarray]:
        return _lp_dual_map(h, e.p)

    return _run_starts(t, wt, e, opts, source_norm, dual_map)


def mixed_operator_norm(
    t: RootedTree,
    wt: WeightPair,
    e: Exponents,
    opts: Optional[SolverOptions] = None,
    include_lp_start: bool = True,
) -> NormEstimate:
    """Certified lower bound on the ``l_q(l_p) -> l_q`` norm of ``S``.

    For ``p <= q`` the ``l_p`` maximizer is added as a start: its mixed norm is
    at most its ``l_p`` norm, so this estimate dominates :func:`operator_norm`.
    """
    opts = opts or SolverOptions()

    def source_norm(f: np.ndarray) -> float:
        return mixed_norm(t, f, e.p, e.q)

    def dual_map(h: np.ndarray) -> Optional[np.ndarray]:
        return _mixed_dual_map(t, h, e.p, e.q)

    extra: list[tuple[StartLabel, np.ndarray]] = []
    if include_lp_start and e.regime != "p>q":
        lp_estimate = operator_norm(t, wt, e, opts)
        if lp_estimate.value > 0:
            extra.append((StartLabel(kind="lp-maximizer", index=0), np.asarray(lp_estimate.maximizer)))
    return _run_starts(t, wt, e, opts, source_norm, dual_map, extra)


def brute_force_norm(
    t: RootedTree,
    wt: WeightPair,
    e: Exponents,
    samples: Optional[int] = None,
    seed: int = 0,
) -> float:
    """Reference value of the ``l_p -> l_q`` norm on tiny trees.

    Takes the best of ``samples`` seeded random nonnegative directions, refines
    it by cyclic bounded scalar searches on each coordinate (scipy's bounded
    Brent method, golden-section steps with parabolic acceleration) until a
    sweep gains less than 1e-9, then polishes with L-BFGS-B on ``f >= 0``.
    """
    settings = get_settings()
    if t.n > settings.brute_force_max_vertices:
        raise TooLarge(t.n, settings.brute_force_max_vertices)
    samples = samples or settings.brute_force_samples
    K = dense_matrix(t, wt)
    if not K.any():
        return 0.0

    def ratio(f: np.ndarray) -> float:
        denom = lr_norm(f, e.p)
        return lr_norm(K @ f, e.q) / denom if denom > 0 else 0.0

    rng = make_rng(seed)
    best_f = np.ones(t.n)
    best = ratio(best_f)
    batch = 10_000
    for start in range(0, samples, batch):
        X = rng.random((min(batch, samples - start), t.n))
        values = np.linalg.norm(X @ K.T, ord=e.q, axis=1) / np.linalg.norm(X, ord=e.p, axis=1)
        k = int(np.argmax(values))
        if values[k] > best:
            best, best_f = float(values[k]), X[k].copy()
    for i in range(t.n):
        f = np.zeros(t.n)
        f[i] = 1.0
        if ratio(f) > best:
            best, best_f = ratio(f), f

    f = best_f / best_f.max()
    for _ in range(500):
        before = best
        for i in range(t.n):
            upper = 4.0 * f.max()

            def neg_ratio(x: float, i: int = i) -> float:
                g = f.copy()
                g[i] = x
                return -ratio(g)

            res = minimize_scalar(neg_ratio, bounds=(0.0, upper), method="bounded", options={"xatol": 1e-12})
            if -res.fun > best:
                f[i] = res.x
                best = -res.fun
            f = f / f.max()
        if best - before < 1e-9:
            break

    polish = minimize(lambda x: -ratio(x), f, method="L-BFGS-B", bounds=[(0.0, None)] * t.n)
    if np.all(polish.x >= 0) and -polish.fun > best:
        best = ratio(polish.x)
    logger.debug(f"brute-force oracle: {best:.12g} on {t.n} vertices")
    return best
