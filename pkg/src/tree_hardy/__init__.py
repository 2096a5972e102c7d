"""tree-hardy - weighted summation operators on rooted trees.

Operator norms, their two-sided bound quantities, and the sigma-partition
machinery, with a command line and an MCP tool server.
"""

__version__ = "0.1.0"
__author__ = "tree-hardy contributors"
__description__ = "Weighted summation (discrete Hardy) operators on rooted trees"

from .main import mcp

__all__ = ["mcp"]
