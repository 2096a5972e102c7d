"""Closed-form bound quantities for the summation operator.

* :func:`theorem1_bound`: ``M = max_xi ||u||_{p'}([xi_0, xi]) * ||w||_q(A_xi)``,
  equivalent to the ``l_p -> l_q`` norm for ``1 < p < q``.
* :func:`bennett_bound`: the chain criterion for ``p <= q``.
* :func:`theorem2_bound` / :func:`theorem2_vertex_form`: level and vertex forms
  of the mixed-norm quantity on regular trees.
* :func:`lower_certificate`: explicit root-path functions whose Rayleigh ratio
  is at least the corresponding term of ``M``.

Maxima break ties at the smallest vertex id or level.
"""

import logging
from typing import Optional, Sequence

import numpy as np

from .models.base import DepthMismatch, InvalidExponent, LengthMismatch
from .models.profile import LevelProfile, LevelWeights
from .models.results import BoundReport
from .models.tree import Exponents, RootedTree, WeightPair
from .tree import check_nonnegative, path_norms, subtree_norms


logger = logging.getLogger(__name__)


def _report(terms: np.ndarray, *, by_level: bool = False) -> BoundReport:
    idx = int(np.argmax(terms))
    return BoundReport(
        value=float(terms[idx]),
        argmax_vertex=None if by_level else idx,
        argmax_level=idx if by_level else None,
        per_vertex_terms=tuple(float(x) for x in terms),
    )


def _suffix_norms(x: np.ndarray, r: float) -> np.ndarray:
    """``(sum_{n >= m} x_n^r)^{1/r}`` for every m, max-factored."""
    peak = np.maximum.accumulate(x[::-1])[::-1]
    out = np.zeros_like(x)
    acc = 0.0
    scale = 0.0
    for m in range(len(x) - 1, -1, -1):
        if peak[m] > 0:
            acc = acc * (scale / peak[m]) ** r if scale > 0 else 0.0
            scale = peak[m]
            acc += (x[m] / scale) ** r
            out[m] = scale * acc ** (1.0 / r)
    return out


def _prefix_norms(x: np.ndarray, r: float) -> np.ndarray:
    return _suffix_norms(x[::-1], r)[::-1]


def theorem1_bound(t: RootedTree, wt: WeightPair, e: Exponents) -> BoundReport:
    """``max_xi ||u||_{p'}([xi_0, xi]) * ||w||_q(A_xi)``.

    Valid for any exponents; the two-sided estimate it stands for needs ``p < q``.
    """
    if e.regime != "p<q":
        logger.info(f"tree bound evaluated outside its regime ({e.regime})")
    terms = path_norms(t, wt.u_array, e.p_prime) * subtree_norms(t, wt.w_array, e.q)
    return _report(terms)


def lower_certificate(t: RootedTree, wt: WeightPair, e: Exponents, xi: int) -> np.ndarray:
    """``f(eta) = u(eta)^{p'/p}`` on ``[xi_0, xi]``, zero elsewhere.

    For every ``zeta >= xi`` the sum ``sum_{eta <= zeta} u f`` is at least
    ``||u||_{p'}^{p'}`` over the path, while ``||f||_p = ||u||_{p'}^{p'/p}``; hence the
    Rayleigh ratio of ``f`` is at least ``||u||_{p'}([xi_0, xi]) * ||w||_q(A_xi)``.
    """
    xi = t.check_vertex(xi)
    f = np.zeros(t.n)
    v: Optional[int] = xi
    while v is not None:
        f[v] = wt.u_array[v] ** (e.p_prime / e.p)
        v = t.parent[v]
    return f


def bennett_bound(u_seq: Sequence[float], w_seq: Sequence[float], e: Exponents) -> BoundReport:
    """``max_m (sum_{n >= m} w_n^q)^{1/q} (sum_{n <= m} u_n^{p'})^{1/p'}``."""
    if len(u_seq) != len(w_seq):
        raise LengthMismatch(f"u has {len(u_seq)} entries but w has {len(w_seq)}")
    if e.regime == "p>q":
        raise InvalidExponent(f"the chain criterion needs p <= q, got p={e.p}, q={e.q}")
    u = check_nonnegative(np.asarray(u_seq, dtype=np.float64), "u")
    w = check_nonnegative(np.asarray(w_seq, dtype=np.float64), "w")
    terms = _suffix_norms(w, e.q) * _prefix_norms(u, e.p_prime)
    return _report(terms)


def theorem2_bound(profile: LevelProfile, lw: LevelWeights, e: Exponents) -> BoundReport:
    """``max_j u_j (sum_{i >= j} w_i^q S(i)/S(j))^{1/q}`` over levels ``0..D``."""
    if lw.depth != profile.depth:
        raise DepthMismatch(f"level weights have depth {lw.depth}, profile has depth {profile.depth}")
    S = np.asarray(profile.S)
    u = np.asarray(lw.u_levels)
    w = np.asarray(lw.w_levels)
    # w_i^q S(i) = (w_i S(i)^{1/q})^q keeps the suffix sum in max-factored form
    tails = _suffix_norms(w * S ** (1.0 / e.q), e.q)
    terms = u * tails / S ** (1.0 / e.q)
    return _report(terms, by_level=True)


def theorem2_vertex_form(t: RootedTree, wt: WeightPair, e: Exponents) -> BoundReport:
    """``max_xi u(xi) * ||w||_q(A_xi)``."""
    return _report(wt.u_array * subtree_norms(t, wt.w_array, e.q))


def lemma_block_quantity(t: RootedTree, wt: WeightPair, e: Exponents) -> BoundReport:
    """The vertex-form quantity on an arbitrary tree (used on reduced trees)."""
    return theorem2_vertex_form(t, wt, e)


def sigma_decay_ratio(t: RootedTree, w: Sequence[float], q: float) -> float:
    """Largest ``||w||_q(A_eta) / ||w||_q(A_xi)`` over edges ``xi -> eta`` (0/0 read as 0)."""
    norms = subtree_norms(t, w, q)
    child = np.arange(t.n)[t.parent_index >= 0]
    if child.size == 0:
        return 0.0
    up = norms[t.parent_index[child]]
    ratios = np.divide(norms[child], up, out=np.zeros(child.size), where=up > 0)
    return float(ratios.max())


def satisfies_sigma_decay(t: RootedTree, w: Sequence[float], q: float, sigma: float) -> bool:
    """Whether every child subtree norm is at most ``sigma`` times its parent's."""
    return sigma_decay_ratio(t, w, q) <= sigma

