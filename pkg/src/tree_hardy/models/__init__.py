"""Data models for tree-hardy."""

# Errors
from .base import (
    HardyError, InvalidTree, MultipleRoots, CycleDetected, DanglingParent,
    InvalidVertex, InvalidExponent, DimensionMismatch, LengthMismatch,
    DepthMismatch, InvalidSize, SizeCapExceeded, InfeasibleModel, InvalidLaw,
    InvalidSigma, TooLarge, InvalidInputFile, NonFiniteIterate, NegativeEntry,
)

# Tree models
from .tree import RootedTree, WeightPair, Exponents

# Regular-tree models
from .profile import LevelProfile, LevelWeights

# Result models
from .results import (
    StartLabel, NormEstimate, BoundReport, Block, SigmaPartition,
    CheckResult, CheckReport,
)

# Request models
from .requests import (
    ConstantLaw, GeometricLaw, LogUniformLaw, LevelsLaw, WeightLaw,
    parse_weight_law, UniformAttachment, BoundedBranching, RandomTreeModel,
    SolverOptions, ChainEnsemble, StarEnsemble, RegularEnsemble,
    RandomEnsemble, EnsembleSpec, ExperimentConfig,
)

# Experiment records
from .records import CSV_COLUMNS, PartitionStats, ExperimentRecord, RatioSummary, ExperimentResult

# File documents
from .documents import VertexRecord, TreeDocument

__all__ = [
    # Errors
    "HardyError", "InvalidTree", "MultipleRoots", "CycleDetected", "DanglingParent",
    "InvalidVertex", "InvalidExponent", "DimensionMismatch", "LengthMismatch",
    "DepthMismatch", "InvalidSize", "SizeCapExceeded", "InfeasibleModel", "InvalidLaw",
    "InvalidSigma", "TooLarge", "InvalidInputFile", "NonFiniteIterate", "NegativeEntry",

    # Tree models
    "RootedTree", "WeightPair", "Exponents",

    # Regular-tree models
    "LevelProfile", "LevelWeights",

    # Result models
    "StartLabel", "NormEstimate", "BoundReport", "Block", "SigmaPartition",
    "CheckResult", "CheckReport",

    # Request models
    "ConstantLaw", "GeometricLaw", "LogUniformLaw", "LevelsLaw", "WeightLaw",
    "parse_weight_law", "UniformAttachment", "BoundedBranching", "RandomTreeModel",
    "SolverOptions", "ChainEnsemble", "StarEnsemble", "RegularEnsemble",
    "RandomEnsemble", "EnsembleSpec", "ExperimentConfig",

    # Experiment records
    "CSV_COLUMNS", "PartitionStats", "ExperimentRecord", "RatioSummary", "ExperimentResult",

    # File documents
    "VertexRecord", "TreeDocument",
]
