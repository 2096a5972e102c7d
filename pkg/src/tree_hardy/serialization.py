"""Reading and writing instances, partitions, DOT drawings and result tables."""

import csv
import io
import json
import logging
from pathlib import Path
from typing import Any, Iterable, Optional, TextIO, Union

from pydantic import ValidationError

from .models.base import InvalidInputFile
from .models.documents import TreeDocument, VertexRecord
from .models.records import CSV_COLUMNS, ExperimentRecord, ExperimentResult
from .models.requests import ExperimentConfig
from .models.results import SigmaPartition
from .models.tree import RootedTree, WeightPair
from .tree import build_tree


logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def instance_to_document(t: RootedTree, wt: WeightPair) -> TreeDocument:
    """The file document of a tree and its weights."""
    return TreeDocument(
        root=t.root,
        vertices=[
            VertexRecord(id=v, parent=t.parent[v], u=wt.u[v], w=wt.w[v])
            for v in range(t.n)
        ],
    )


def document_to_instance(doc: TreeDocument) -> tuple[RootedTree, WeightPair]:
    """Build the tree and weights of a document, relabelling its root to 0.

    When the root is not 0 it takes id 0 and every id below it moves up by
    one; all other ids are kept.
    """
    n = len(doc.vertices)

    def relabel(v: int) -> int:
        if doc.root == 0:
            return v
        if v == doc.root:
            return 0
        return v + 1 if v < doc.root else v

    if doc.root != 0:
        logger.info(f"relabelling root {doc.root} to 0")
    parents: list[Optional[int]] = [None] * n
    u = [0.0] * n
    w = [0.0] * n
    for record in doc.vertices:
        if record.parent is not None and not 0 <= record.parent < n:
            raise InvalidInputFile(f"vertex {record.id} has parent {record.parent} outside 0..{n - 1}")
        v = relabel(record.id)
        parents[v] = None if record.parent is None else relabel(record.parent)
        u[v] = record.u
        w[v] = record.w
    t = build_tree(parents)
    return t, WeightPair.for_tree(t, u, w)


def dumps_instance(t: RootedTree, wt: WeightPair) -> str:
    """Serialize an instance; floats use their shortest round-trip form."""
    return instance_to_document(t, wt).model_dump_json(indent=2) + "\n"


def loads_instance(text: str) -> tuple[RootedTree, WeightPair]:
    try:
        doc = TreeDocument.model_validate_json(text)
    except ValidationError as e:
        raise InvalidInputFile(f"invalid tree file: {e}") from e
    return document_to_instance(doc)


def save_instance(t: RootedTree, wt: WeightPair, path: PathLike) -> None:
    Path(path).write_text(dumps_instance(t, wt), encoding="utf-8")
    logger.info(f"Wrote {t.n}-vertex instance to {path}")


def load_instance(path: PathLike) -> tuple[RootedTree, WeightPair]:
    """Read a tree+weights file.

    Raises:
        InvalidInputFile: unreadable file or schema violation.
        InvalidTree: the parent links do not form a rooted tree.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InvalidInputFile(f"cannot read {path}: {e}") from e
    return loads_instance(text)


def load_experiment_config(path: PathLike) -> ExperimentConfig:
    try:
        return ExperimentConfig.model_validate_json(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise InvalidInputFile(f"cannot read {path}: {e}") from e
    except ValidationError as e:
        raise InvalidInputFile(f"invalid experiment config {path}: {e}") from e


def partition_to_dict(partition: SigmaPartition) -> dict[str, Any]:
    """JSON-ready view of a partition; the reduced tree uses the file format."""
    out: dict[str, Any] = {
        "sigma": partition.sigma,
        "q": partition.q,
        "block_count": partition.block_count,
        "blocks": [b.model_dump() for b in partition.blocks],
        "membership": list(partition.membership),
    }
    if partition.reduced is not None and partition.u_hat is not None and partition.w_hat is not None:
        reduced_wt = WeightPair(u=partition.u_hat, w=partition.w_hat)
        out["reduced"] = instance_to_document(partition.reduced, reduced_wt).model_dump()
    return out


def to_dot(t: RootedTree, wt: Optional[WeightPair] = None, partition: Optional[SigmaPartition] = None) -> str:
    """Graphviz drawing; vertices are labelled ``id``, ``u=`` and ``w=``.

    With a partition every block becomes a cluster subgraph.
    """
    lines = ["digraph tree {", "  node [shape=box, fontsize=10];"]

    def node(v: int) -> str:
        label = str(v)
        if wt is not None:
            label += f"\\nu={wt.u[v]:.6g}\\nw={wt.w[v]:.6g}"
        return f'    {v} [label="{label}"];'

    if partition is None:
        lines.extend(node(v) for v in range(t.n))
    else:
        for m, block in enumerate(partition.blocks):
            lines.append(f"  subgraph cluster_{m} {{")
            lines.append(f'    label="block {m}";')
            lines.extend(node(v) for v in block.vertices)
            lines.append("  }")
    for v, p in enumerate(t.parent):
        if p is not None:
            lines.append(f"  {p} -> {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_records_csv(records: Iterable[ExperimentRecord], stream: TextIO) -> None:
    """Write the result table.

    The columns are exactly :data:`CSV_COLUMNS`; an ``error`` column is added
    only when some record failed.
    """
    records = list(records)
    columns = list(CSV_COLUMNS)
    if any(r.error for r in records):
        columns.append("error")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for record in records:
        row = record.model_dump()
        writer.writerow([_cell(row[c]) for c in columns])


def records_to_csv(records: Iterable[ExperimentRecord]) -> str:
    buffer = io.StringIO()
    write_records_csv(records, buffer)
    return buffer.getvalue()


def result_to_json(result: ExperimentResult) -> str:
    return json.dumps(result.model_dump(mode="json"), indent=2) + "\n"
