"""Sigma-sets, the sigma-partition of a tree, and the reduced tree built from it.

For ``0 < sigma < 1`` the sigma-set of ``xi`` keeps every ``eta >= xi`` whose
subtree ``w``-norm is at least ``sigma`` times that of ``xi``. Since subtree
norms do not increase along descent the set is ancestor-closed within
``A_xi``, so it induces a subtree. The partition carves such subtrees round by
round from the minimal vertices of what is left; the reduced tree has one
vertex per block, joined when one block succeeds another, with block norms
of ``u`` and ``w`` as weights.
"""

import logging
import math
from typing import Optional, Sequence

import numpy as np

from .bounds import lemma_block_quantity, sigma_decay_ratio, theorem1_bound
from .config import get_settings
from .models.base import InvalidExponent, InvalidSigma
from .models.requests import SolverOptions
from .models.results import Block, BoundReport, CheckReport, CheckResult, SigmaPartition
from .models.tree import Exponents, RootedTree, WeightPair
from .summation import operator_norm
from .tree import build_tree, lr_norm, maximal_vertices, path_between, subtree_norms, vertex_set_is_subtree


logger = logging.getLogger(__name__)

EXACT_SLACK = 1e-12


def _check_sigma(sigma: float) -> None:
    if not 0 < sigma < 1:
        raise InvalidSigma(sigma)


def sigma_set(
    t: RootedTree,
    w: Sequence[float],
    q: float,
    xi: int,
    sigma: float,
    norms: Optional[np.ndarray] = None,
) -> frozenset[int]:
    """``{eta >= xi : ||w||_q(A_eta) >= sigma * ||w||_q(A_xi)}``.

    When ``||w||_q(A_xi) = 0`` the set is ``{xi}``.

    Args:
        norms: precomputed subtree norms of ``w``; computed when omitted.
    """
    _check_sigma(sigma)
    xi = t.check_vertex(xi)
    norms = subtree_norms(t, w, q) if norms is None else norms
    if norms[xi] == 0:
        return frozenset([xi])
    threshold = sigma * norms[xi]
    found = []
    stack = [xi]
    while stack:
        v = stack.pop()
        found.append(v)
        stack.extend(c for c in t.children[v] if norms[c] >= threshold)
    return frozenset(found)


def build_partition(t: RootedTree, w: Sequence[float], q: float, sigma: float) -> SigmaPartition:
    """Partition ``t`` into sigma-set blocks.

    Round 0 carves the sigma-set of the root. Each later round carves the
    sigma-set of every minimal vertex of the remaining forest, in ascending id
    order. Remaining components are always full subtrees of ``t``, so the
    global subtree norms apply throughout.
    """
    _check_sigma(sigma)
    norms = subtree_norms(t, w, q)
    membership = [-1] * t.n
    blocks: list[Block] = []
    roots = [t.root]
    round_ = 0
    degenerate = 0
    while roots:
        next_roots = []
        for eta in sorted(roots):
            vertices = sigma_set(t, w, q, eta, sigma, norms=norms)
            is_degenerate = bool(norms[eta] == 0)
            degenerate += is_degenerate
            for v in vertices:
                membership[v] = len(blocks)
            block = Block(root=eta, vertices=tuple(sorted(vertices)), round=round_, degenerate=is_degenerate)
            blocks.append(block)
            next_roots.extend(c for v in vertices for c in t.children[v] if c not in vertices)
        roots = next_roots
        round_ += 1
    if degenerate:
        logger.info(f"{degenerate} blocks use the zero-norm singleton convention")
    logger.debug(f"sigma={sigma}: {len(blocks)} blocks in {round_} rounds")
    return SigmaPartition(sigma=sigma, q=q, blocks=tuple(blocks), membership=tuple(membership))


def reduce(t: RootedTree, wt: WeightPair, e: Exponents, partition: SigmaPartition) -> SigmaPartition:
    """Attach the reduced tree and the block weights ``u_hat``, ``w_hat``."""
    if partition.q != e.q:
        raise InvalidExponent(f"partition was built for q={partition.q}, exponents give q={e.q}")
    parents: list[Optional[int]] = [
        None if t.parent[block.root] is None else partition.membership[t.parent[block.root]]  # type: ignore[index]
        for block in partition.blocks
    ]
    u_hat = tuple(lr_norm(wt.u_array[list(b.vertices)], e.p_prime) for b in partition.blocks)
    w_hat = tuple(lr_norm(wt.w_array[list(b.vertices)], e.q) for b in partition.blocks)
    return partition.model_copy(
        update={"reduced": build_tree(parents), "u_hat": u_hat, "w_hat": w_hat, "p": e.p}
    )


def reduced_weights(partition: SigmaPartition) -> WeightPair:
    """The block weights as a weight pair on the reduced tree."""
    if partition.u_hat is None or partition.w_hat is None:
        raise ValueError("partition has not been reduced")
    return WeightPair(u=partition.u_hat, w=partition.w_hat)


def lift_to_blocks(partition: SigmaPartition, f: Sequence[float], p: float) -> np.ndarray:
    """``F(m) = ||f||_p(A_m)``; any ``f`` on the tree maps to ``F`` with ``||F||_p = ||f||_p``."""
    arr = np.asarray(f, dtype=np.float64)
    return np.array([lr_norm(arr[list(b.vertices)], p) for b in partition.blocks])


def block_bound_quantity(t: RootedTree, wt: WeightPair, e: Exponents, sigma: float) -> BoundReport:
    """``max_xi ||u||_{p'}(A_{xi,sigma}) * ||w||_q(A_xi)``."""
    norms = subtree_norms(t, wt.w_array, e.q)
    terms = np.zeros(t.n)
    for xi in range(t.n):
        block = sorted(sigma_set(t, wt.w_array, e.q, xi, sigma, norms=norms))
        terms[xi] = lr_norm(wt.u_array[block], e.p_prime) * norms[xi]
    idx = int(np.argmax(terms))
    return BoundReport(value=float(terms[idx]), argmax_vertex=idx, per_vertex_terms=tuple(terms.tolist()))


def succession_ratios(t: RootedTree, partition: SigmaPartition, norms: np.ndarray) -> list[float]:
    """Child-block root norm over parent-block root norm, one per reduced-tree edge (0/0 read as 0)."""
    ratios = []
    for block in partition.blocks[1:]:
        parent_block = partition.blocks[partition.membership[t.parent[block.root]]]  # type: ignore[index]
        top = norms[parent_block.root]
        ratios.append(float(norms[block.root] / top) if top > 0 else 0.0)
    return ratios


def _check_partition_structure(
    t: RootedTree, partition: SigmaPartition, w: np.ndarray, norms: np.ndarray
) -> list[CheckResult]:
    seen: list[int] = []
    connected = True
    for m, block in enumerate(partition.blocks):
        vertices = set(block.vertices)
        seen.extend(block.vertices)
        if not vertex_set_is_subtree(t, vertices) or t.parent[block.root] in vertices:
            connected = False
        if any(partition.membership[v] != m for v in vertices):
            connected = False
    exact = sorted(seen) == list(range(t.n))

    matches_sigma_sets = all(
        set(block.vertices) == sigma_set(t, w, partition.q, block.root, partition.sigma, norms=norms)
        for block in partition.blocks
    )

    succession = True
    if partition.reduced is not None:
        D = partition.reduced
        for k, block in enumerate(partition.blocks):
            up = t.parent[block.root]
            expected = None if up is None else partition.membership[up]
            if D.parent[k] != expected:
                succession = False
    return [
        CheckResult(
            name="partition",
            passed=exact and connected,
            detail="disjoint blocks covering every vertex, each a subtree rooted at its minimum",
        ),
        CheckResult(
            name="blocks_are_sigma_sets",
            passed=matches_sigma_sets,
            detail="every block equals the sigma-set of its root",
        ),
        CheckResult(
            name="succession_edges",
            passed=succession,
            skipped=partition.reduced is None,
            detail="reduced-tree edges are exactly the succession relation",
        ),
    ]


def verify_partition(
    t: RootedTree,
    wt: WeightPair,
    e: Exponents,
    partition: SigmaPartition,
    sigma: Optional[float] = None,
    opts: Optional[SolverOptions] = None,
) -> CheckReport:
    """Check every property of a sigma-partition.

    ``succession_ratio``: child-block root norm below ``sigma`` times the parent
    block's. ``vmax_card``: at most ``sigma^{-q}`` maximal vertices in every
    sigma-set. ``partition``: an exact partition into subtrees. ``domination``:
    the solver norm on the tree does not exceed the solver norm on the reduced
    tree (small instances only). ``reduced_subtree_identity``,
    ``reduced_sigma_decay`` and ``reduced_block_quantity`` check the reduced
    tree against the original.
    """
    sigma = partition.sigma if sigma is None else sigma
    _check_sigma(sigma)
    if not partition.is_reduced:
        partition = reduce(t, wt, e, partition)
    settings = get_settings()
    assert partition.reduced is not None and partition.w_hat is not None
    D = partition.reduced
    norms = subtree_norms(t, wt.w_array, e.q)
    checks: list[CheckResult] = []

    ratios = succession_ratios(t, partition, norms)
    worst_ratio = max(ratios, default=0.0)
    checks.append(
        CheckResult(
            name="succession_ratio",
            passed=all(r < sigma for r in ratios),
            measured=worst_ratio,
            bound=sigma,
            detail=f"{len(ratios)} reduced-tree edges",
        )
    )

    card_bound = sigma ** (-e.q)
    worst_card = 0
    for xi in range(t.n):
        vs = sigma_set(t, wt.w_array, e.q, xi, sigma, norms=norms)
        worst_card = max(worst_card, len(maximal_vertices(t, vs)))
    checks.append(
        CheckResult(
            name="vmax_card",
            passed=worst_card <= card_bound * (1 + EXACT_SLACK),
            measured=float(worst_card),
            bound=card_bound,
            detail="largest number of maximal vertices over all sigma-sets",
        )
    )

    checks.extend(_check_partition_structure(t, partition, wt.w_array, norms))

    reduced_norms = subtree_norms(D, partition.w_hat, e.q)
    root_norms = np.array([norms[b.root] for b in partition.blocks])
    gap = np.abs(reduced_norms - root_norms)
    rel = float(np.max(np.divide(gap, root_norms, out=gap.copy(), where=root_norms > 0)))
    checks.append(
        CheckResult(
            name="reduced_subtree_identity",
            passed=rel <= 1e-12,
            measured=rel,
            bound=1e-12,
            detail="reduced subtree norms equal the original subtree norms at block roots",
        )
    )

    decay = sigma_decay_ratio(D, partition.w_hat, e.q)
    checks.append(
        CheckResult(name="reduced_sigma_decay", passed=decay < sigma, measured=decay, bound=sigma)
    )

    reduced_wt = reduced_weights(partition)
    lemma_value = lemma_block_quantity(D, reduced_wt, e).value
    block_value = block_bound_quantity(t, wt, e, sigma).value
    checks.append(
        CheckResult(
            name="reduced_block_quantity",
            passed=lemma_value <= block_value * (1 + 1e-12),
            measured=lemma_value,
            bound=block_value,
        )
    )

    if t.n <= settings.domination_check_max_vertices:
        opts = opts or SolverOptions()
        on_tree = operator_norm(t, wt, e, opts)
        lifted = lift_to_blocks(partition, on_tree.maximizer, e.p)
        on_reduced = operator_norm(
            D, reduced_wt, e, opts.model_copy(update={"extra_starts": opts.extra_starts + (tuple(lifted),)})
        )
        slack = settings.domination_slack * max(on_tree.value, on_reduced.value, 1e-300)
        checks.append(
            CheckResult(
                name="domination",
                passed=on_tree.value <= on_reduced.value + slack,
                measured=on_tree.value,
                bound=on_reduced.value,
                detail="solver norm on the tree vs solver norm on the reduced tree",
            )
        )
    else:
        checks.append(
            CheckResult(
                name="domination",
                passed=True,
                skipped=True,
                detail=f"skipped above {settings.domination_check_max_vertices} vertices",
            )
        )
    return CheckReport(checks=tuple(checks))


def uw_block_bound_check(t: RootedTree, wt: WeightPair, e: Exponents, sigma: float) -> CheckReport:
    """Check the path-cover estimate of ``||u||_{p'}`` over every sigma-set.

    ``path_cover``: the sigma-set of ``xi`` is the union of the paths from
    ``xi`` to its maximal vertices. ``path_cover_inequality``: its ``u^{p'}`` mass
    is at most the summed masses of those paths. ``quantified_path``: some
    single path carries at least a ``sigma^q`` share. ``traced_constant``:
    ``||u||_{p'}(A_{xi,sigma}) ||w||_q(A_xi) <= sigma^{-q/p'-1} M``.
    """
    _check_sigma(sigma)
    r = e.p_prime
    u_pow = wt.u_array**r
    norms = subtree_norms(t, wt.w_array, e.q)
    M = theorem1_bound(t, wt, e).value
    constant = sigma ** (-e.q / r - 1)
    cover_ok = True
    worst_cover = worst_quantified = worst_traced = 0.0

    for xi in range(t.n):
        vs = sigma_set(t, wt.w_array, e.q, xi, sigma, norms=norms)
        vmax = maximal_vertices(t, vs)
        paths = [path_between(t, xi, zeta) for zeta in sorted(vmax)]
        covered = set().union(*paths) if paths else set()
        cover_ok &= covered == vs
        mass = float(np.sum(u_pow[sorted(vs)]))
        path_masses = [float(np.sum(u_pow[list(path)])) for path in paths]
        if mass > 0:
            worst_cover = max(worst_cover, mass / sum(path_masses))
            worst_quantified = max(worst_quantified, mass / (sigma ** (-e.q) * max(path_masses)))
        lhs = lr_norm(wt.u_array[sorted(vs)], r) * norms[xi]
        if lhs > 0:
            worst_traced = max(worst_traced, lhs / (constant * M))

    return CheckReport(
        checks=(
            CheckResult(
                name="path_cover", passed=cover_ok, detail="sigma-sets are unions of root-to-maximal paths"
            ),
            CheckResult(
                name="path_cover_inequality",
                passed=worst_cover <= 1 + EXACT_SLACK,
                measured=worst_cover,
                bound=1.0,
            ),
            CheckResult(
                name="quantified_path",
                passed=worst_quantified <= 1 + EXACT_SLACK,
                measured=worst_quantified,
                bound=1.0,
            ),
            CheckResult(
                name="traced_constant",
                passed=worst_traced <= 1 + EXACT_SLACK,
                measured=worst_traced,
                bound=1.0,
                detail=f"constant sigma^(-q/p'-1) = {constant:.6g}",
            ),
        )
    )


def sigma_card_bound(sigma: float, q: float) -> float:
    """``sigma^{-q}``, the bound on maximal vertices of a sigma-set."""
    _check_sigma(sigma)
    return math.pow(sigma, -q)
