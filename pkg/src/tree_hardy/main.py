"""MCP tool server exposing the tree-hardy computations."""

import logging
from typing import Any, Dict, Optional

from fastmcp import FastMCP
from pydantic import ValidationError

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
    profile_of,
)
from .models.base import HardyError
from .models.documents import TreeDocument
from .models.profile import LevelProfile
from .models.requests import SolverOptions, parse_weight_law
from .models.tree import Exponents, RootedTree, WeightPair
from .partition import build_partition, reduce, verify_partition
from .serialization import document_to_instance, instance_to_document, partition_to_dict
from .summation import mixed_operator_norm, operator_norm


logger = logging.getLogger(__name__)

settings = get_settings()

# Create the FastMCP server instance
mcp = FastMCP(settings.server_name)


def _instance(document: Dict[str, Any]) -> tuple[RootedTree, WeightPair]:
    return document_to_instance(TreeDocument.model_validate(document))


@mcp.tool()
async def compute_operator_norm(
    document: Dict[str, Any],
    p: float,
    q: float,
    mixed: bool = False,
    restarts: Optional[int] = None,
    seed: int = 0,
) -> Dict[str, Any]:
    """Estimate the l_p -> l_q norm of the weighted summation operator on a tree.

    Args:
        document: Tree file document ``{"root": id, "vertices": [{"id", "parent", "u", "w"}, ...]}``
        p: Source exponent, 1 < p < inf
        q: Target exponent, 1 < q < inf
        mixed: Use the level-mixed l_q(l_p) source norm instead of l_p
        restarts: Random starts (default from settings)
        seed: Seed of the random starts

    Returns:
        Certified lower bound, maximizer and convergence metadata
    """
    try:
        t, wt = _instance(document)
        e = Exponents(p=p, q=q)
        opts = SolverOptions(seed=seed) if restarts is None else SolverOptions(seed=seed, restarts=restarts)
        estimate = mixed_operator_norm(t, wt, e, opts) if mixed else operator_norm(t, wt, e, opts)
        return estimate.model_dump(mode="json")
    except (HardyError, ValidationError) as e:
        raise Exception(f"Failed to compute operator norm: {e}")
    except Exception as e:
        raise Exception(f"Unexpected error computing operator norm: {e}")


@mcp.tool()
async def compute_bounds(document: Dict[str, Any], p: float, q: float) -> Dict[str, Any]:
    """Evaluate the bound quantities of a tree instance.

    Returns the tree bound ``M`` with its argmax vertex, the vertex form, and
    the level form when the tree is exactly regular with level-constant weights.
    """
    try:
        t, wt = _instance(document)
        e = Exponents(p=p, q=q)
        result: Dict[str, Any] = {
            "M": theorem1_bound(t, wt, e).model_dump(exclude={"per_vertex_terms"}),
            "vertex_form": theorem2_vertex_form(t, wt, e).model_dump(exclude={"per_vertex_terms"}),
        }
        profile = profile_of(t)
        if profile is not None and is_level_constant(t, wt.u) and is_level_constant(t, wt.w):
            result["level_form"] = theorem2_bound(profile, level_weights_of(t, wt), e).model_dump()
        return result
    except (HardyError, ValidationError) as e:
        raise Exception(f"Failed to compute bounds: {e}")
    except Exception as e:
        raise Exception(f"Unexpected error computing bounds: {e}")


@mcp.tool()
async def compute_sigma_partition(
    document: Dict[str, Any],
    p: float,
    q: float,
    sigma: Optional[float] = None,
) -> Dict[str, Any]:
    """Build the sigma-partition and reduced tree of an instance and verify it.

    Args:
        document: Tree file document
        p: Source exponent (used for the reduced u weights)
        q: Target exponent
        sigma: Partition parameter in (0, 1) (default from settings)

    Returns:
        Blocks, membership, the reduced tree document and the named checks
    """
    try:
        t, wt = _instance(document)
        e = Exponents(p=p, q=q)
        sigma = settings.sigma if sigma is None else sigma
        partition = reduce(t, wt, e, build_partition(t, wt.w_array, e.q, sigma))
        report = verify_partition(t, wt, e, partition, sigma)
        result = partition_to_dict(partition)
        result["passed"] = report.passed
        result["checks"] = [c.model_dump() for c in report.checks]
        return result
    except (HardyError, ValidationError) as e:
        raise Exception(f"Failed to build sigma-partition: {e}")
    except Exception as e:
        raise Exception(f"Unexpected error building sigma-partition: {e}")


@mcp.tool()
async def generate_instance(
    shape: str,
    size: Optional[int] = None,
    branching: Optional[list[int]] = None,
    u: str = "constant:1",
    w: str = "constant:1",
    seed: int = 0,
) -> Dict[str, Any]:
    """Generate a tree instance.

    Args:
        shape: One of "chain", "star", "regular" or "random"
        size: Vertex count (chain, random) or leaf count (star)
        branching: Children per level for "regular", e.g. [2, 2, 2]
        u: Weight law of u: "constant:c", "geometric:rho", "loguniform:lo:hi" or "levels:a,b,..."
        w: Weight law of w, same syntax
        seed: Seed of the random tree and weights

    Returns:
        The tree file document
    """
    try:
        if shape == "regular":
            t = gen_regular_tree(LevelProfile(branching=tuple(branching or ())))
        elif size is None:
            raise ValueError(f"shape {shape!r} needs a size")
        elif shape == "chain":
            t = gen_chain(size)
        elif shape == "star":
            t = gen_star(size)
        elif shape == "random":
            t = gen_random_tree(size, seed)
        else:
            raise ValueError(f"unknown shape {shape!r}")
        wt = gen_weight_pair(t, seed, parse_weight_law(u), parse_weight_law(w))
        return instance_to_document(t, wt).model_dump()
    except (HardyError, ValidationError, ValueError) as e:
        raise Exception(f"Failed to generate {shape} instance: {e}")
    except Exception as e:
        raise Exception(f"Unexpected error generating {shape} instance: {e}")
