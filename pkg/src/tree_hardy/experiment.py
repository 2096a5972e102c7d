"""Ratio studies over ensembles of trees.

Every instance gets its own seed sequence derived from the master seed and
its instance id, so results do not depend on evaluation order or on the
number of worker threads. Records come back sorted by ``(instance_id, p, q)``.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Iterator, Optional

import numpy as np

from .bounds import theorem1_bound, theorem2_bound, theorem2_vertex_form
from .config import get_settings
from .generators import (
    gen_chain,
    gen_random_tree,
    gen_regular_tree,
    gen_star,
    gen_weight_pair,
    is_level_constant,
    level_weights_of,
)
from .models.base import HardyError
from .models.profile import LevelProfile
from .models.records import ExperimentRecord, ExperimentResult, PartitionStats, RatioSummary
from .models.requests import (
    ChainEnsemble,
    EnsembleSpec,
    ExperimentConfig,
    RandomEnsemble,
    RegularEnsemble,
    StarEnsemble,
)
from .models.tree import Exponents, RootedTree, WeightPair
from .partition import build_partition, sigma_set, succession_ratios
from .summation import mixed_operator_norm, operator_norm
from .tree import maximal_vertices, subtree_norms


logger = logging.getLogger(__name__)


@dataclass
class Instance:
    instance_id: int
    ensemble: str
    tree: Optional[RootedTree]
    weights: Optional[WeightPair]
    profile: Optional[LevelProfile] = None
    n: int = 0
    error: Optional[str] = None


def instance_seed(master: int, instance_id: int) -> np.random.SeedSequence:
    """The seed sequence of one instance, independent of every other instance."""
    return np.random.SeedSequence(master, spawn_key=(instance_id,))


def _shapes(spec: EnsembleSpec) -> Iterator[tuple[str, Optional[tuple[int, ...]], int]]:
    """``(kind, branching, n)`` per shape; ``n`` is the vertex count the shape asks for."""
    tree = spec.tree
    if isinstance(tree, ChainEnsemble):
        yield from (("chain", None, n) for n in tree.sizes)
    elif isinstance(tree, StarEnsemble):
        yield from (("star", None, m + 1) for m in tree.sizes)
    elif isinstance(tree, RegularEnsemble):
        for b in tree.branchings:
            width, n = 1, 1
            for children in b:
                width *= max(children, 0)
                n += width
            yield "regular", tuple(b), n
    else:
        yield from (("random", None, n) for n in tree.sizes)


def _build_tree(
    spec: EnsembleSpec, profile: Optional[LevelProfile], n: int, seed: np.random.SeedSequence
) -> RootedTree:
    tree = spec.tree
    if isinstance(tree, ChainEnsemble):
        return gen_chain(n)
    if isinstance(tree, StarEnsemble):
        return gen_star(n - 1)
    if isinstance(tree, RegularEnsemble):
        assert profile is not None
        return gen_regular_tree(profile)
    assert isinstance(tree, RandomEnsemble)
    return gen_random_tree(n, seed, tree.model)


def iter_instances(config: ExperimentConfig) -> Iterator[Instance]:
    """Instances in id order: ensembles, then shapes, then ``count`` draws.

    A shape that cannot be generated yields instances carrying ``error``
    instead of a tree, so one bad ensemble entry does not stop the run.
    """
    instance_id = 0
    for spec in config.ensembles:
        for kind, branching, n in _shapes(spec):
            for _ in range(spec.count):
                tree_seed, weight_seed = instance_seed(config.seed, instance_id).spawn(2)
                try:
                    profile = LevelProfile(branching=branching) if branching is not None else None
                    t = _build_tree(spec, profile, n, tree_seed)
                    wt = gen_weight_pair(t, weight_seed, spec.u, spec.w)
                except (HardyError, ValueError) as err:
                    logger.warning(f"instance {instance_id} ({kind}) could not be generated: {err}")
                    yield Instance(instance_id, kind, None, None, n=max(n, 0), error=str(err))
                else:
                    yield Instance(instance_id, kind, t, wt, profile, n=t.n)
                instance_id += 1


def partition_stats(t: RootedTree, wt: WeightPair, q: float, sigma: float) -> PartitionStats:
    """Block count, largest maximal-vertex count and succession ratio range."""
    partition = build_partition(t, wt.w_array, q, sigma)
    norms = subtree_norms(t, wt.w_array, q)
    max_card = max(
        len(maximal_vertices(t, sigma_set(t, wt.w_array, q, xi, sigma, norms=norms))) for xi in range(t.n)
    )
    ratios = succession_ratios(t, partition, norms)
    return PartitionStats(
        sigma=sigma,
        block_count=partition.block_count,
        max_vmax_card=max_card,
        min_succession_ratio=min(ratios, default=None),
        max_succession_ratio=max(ratios, default=None),
    )


def evaluate_instance(instance: Instance, config: ExperimentConfig) -> list[ExperimentRecord]:
    """One record per exponent pair; failures become records carrying ``error``."""
    if instance.tree is None or instance.weights is None:
        return [
            ExperimentRecord(
                instance_id=instance.instance_id,
                ensemble=instance.ensemble,
                n=instance.n,
                p=p,
                q=q,
                error=instance.error or "instance was not generated",
            )
            for p, q in config.exponents
        ]
    t, wt = instance.tree, instance.weights
    records = []
    for p, q in config.exponents:
        started = time.perf_counter()
        base = ExperimentRecord(instance_id=instance.instance_id, ensemble=instance.ensemble, n=t.n, p=p, q=q)
        try:
            e = Exponents(p=p, q=q)
            M = theorem1_bound(t, wt, e).value
            estimate = operator_norm(t, wt, e, config.solver)
            stats = [partition_stats(t, wt, q, sigma) for sigma in config.sigmas]
            update: dict[str, Any] = {
                "M": M,
                "norm_lb": estimate.value,
                "ratio": estimate.value / M if M > 0 else None,
                "restarts": estimate.restarts_used,
                "iters": estimate.iterations,
                "converged": estimate.converged,
                "block_count": stats[0].block_count,
                "max_vmax_card": stats[0].max_vmax_card,
                "partitions": stats,
            }
            if config.mixed and instance.profile is not None:
                mixed = mixed_operator_norm(t, wt, e, config.solver)
                update["mixed_norm_lb"] = mixed.value
                update["theorem2_vertex_value"] = theorem2_vertex_form(t, wt, e).value
                if is_level_constant(t, wt.u) and is_level_constant(t, wt.w):
                    level_value = theorem2_bound(instance.profile, level_weights_of(t, wt), e).value
                    update["theorem2_value"] = level_value
                    update["mixed_ratio"] = mixed.value / level_value if level_value > 0 else None
            record = base.model_copy(update=update)
        except HardyError as err:
            logger.warning(f"instance {instance.instance_id} at (p={p}, q={q}) failed: {err}")
            record = base.model_copy(update={"error": str(err)})
        records.append(record.model_copy(update={"wall_ms": 1000 * (time.perf_counter() - started)}))
    return records


def summarize(records: list[ExperimentRecord]) -> list[RatioSummary]:
    """Ratio statistics per exponent pair, in first-seen order."""
    groups: dict[tuple[float, float], list[ExperimentRecord]] = {}
    for record in records:
        groups.setdefault((record.p, record.q), []).append(record)
    summary = []
    for (p, q), group in groups.items():
        ratios = [r.ratio for r in group if r.ratio is not None]
        mixed = [r.mixed_ratio for r in group if r.mixed_ratio is not None]
        summary.append(
            RatioSummary(
                p=p,
                q=q,
                count=len(group),
                min_ratio=min(ratios) if ratios else None,
                median_ratio=float(np.median(ratios)) if ratios else None,
                max_ratio=max(ratios) if ratios else None,
                min_mixed_ratio=min(mixed) if mixed else None,
                max_mixed_ratio=max(mixed) if mixed else None,
                failures=sum(1 for r in group if r.error),
            )
        )
    return summary


def run_experiment(config: ExperimentConfig, workers: Optional[int] = None) -> ExperimentResult:
    """Evaluate every instance of ``config`` and summarize the ratios."""
    workers = workers or get_settings().workers
    instances = list(iter_instances(config))
    logger.info(
        f"Running {len(instances)} instances x {len(config.exponents)} exponent pairs on {workers} workers"
    )
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            batches = list(pool.map(lambda inst: evaluate_instance(inst, config), instances))
    else:
        batches = [evaluate_instance(inst, config) for inst in instances]
    records = sorted((r for batch in batches for r in batch), key=lambda r: r.sort_key)
    failures = sum(1 for r in records if r.error)
    if failures:
        logger.warning(f"{failures} of {len(records)} records failed")
    logger.info(f"Finished {len(records)} records")
    return ExperimentResult(records=records, summary=summarize(records))
