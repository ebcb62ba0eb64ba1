"""
Loader for graph classification sets in the TU text format (MUTAG).

Expected files, optionally prefixed with ``<NAME>_``:
    A.txt                 one ``i, j`` edge per line, 1-indexed global node ids
    graph_indicator.txt   line k holds the graph id of node k
    graph_labels.txt      line g holds the label of graph g
"""
import logging
from collections import defaultdict
from pathlib import Path
from typing import List, Tuple, Union

from persistence.models import Graph

from .exceptions import DataGenError, InconsistentIndices, InvalidLabelSet, ParseError
from .models import LabeledGraphSet

logger = logging.getLogger(__name__)


def _locate(directory: Path, suffix: str) -> Path:
    exact = directory / suffix
    if exact.exists():
        return exact
    matches = sorted(directory.glob(f"*_{suffix}"))
    if not matches:
        raise DataGenError(f"No {suffix} in {directory}")
    if len(matches) > 1:
        raise DataGenError(f"Several *_{suffix} files in {directory}: {[m.name for m in matches]}")
    return matches[0]


def _read_int_rows(path: Path, width: int) -> List[Tuple[int, ...]]:
    rows = []
    with path.open() as handle:
        for line_no, line in enumerate(handle, start=1):
            text = line.strip()
            if not text:
                continue
            fields = [f.strip() for f in text.split(",")]
            if len(fields) != width:
                raise ParseError(path, line_no, f"expected {width} value(s), got {len(fields)}")
            try:
                rows.append(tuple(int(f) for f in fields))
            except ValueError:
                raise ParseError(path, line_no, f"not an integer: {text!r}") from None
    return rows


def _normalize_labels(raw: List[int]) -> Tuple[int, ...]:
    values = set(raw)
    if values <= {0, 1}:
        return tuple(raw)
    if values <= {-1, 1}:
        return tuple(1 if v == 1 else 0 for v in raw)
    raise InvalidLabelSet(f"Expected labels in {{-1, 1}} or {{0, 1}}, got {sorted(values)}")


def load_mutag(directory: Union[str, Path]) -> LabeledGraphSet:
    """
    Load simple undirected graphs with binary labels.

    Duplicate (including reversed) edges collapse to one; self-loops are dropped
    with a warning.

    Raises:
        ParseError: malformed line, with file and line number
        InconsistentIndices: edges or indicators that disagree with each other
    """
    directory = Path(directory)
    edge_rows = _read_int_rows(_locate(directory, "A.txt"), 2)
    indicator = [row[0] for row in _read_int_rows(_locate(directory, "graph_indicator.txt"), 1)]
    raw_labels = [row[0] for row in _read_int_rows(_locate(directory, "graph_labels.txt"), 1)]

    n_graphs = len(raw_labels)
    if indicator and (min(indicator) < 1 or max(indicator) > n_graphs):
        raise InconsistentIndices(
            f"Graph indicator references graphs outside 1..{n_graphs}"
        )
    members = defaultdict(list)
    for node, graph_id in enumerate(indicator, start=1):
        members[graph_id].append(node)
    empty = [g for g in range(1, n_graphs + 1) if g not in members]
    if empty:
        raise InconsistentIndices(f"Graphs without nodes: {empty[:10]}")

    local = {}
    for graph_id, nodes in members.items():
        for position, node in enumerate(nodes):
            local[node] = position

    edges = defaultdict(set)
    self_loops = 0
    for u, v in edge_rows:
        if u not in local or v not in local:
            raise InconsistentIndices(f"Edge ({u}, {v}) references a node outside 1..{len(indicator)}")
        graph_u, graph_v = indicator[u - 1], indicator[v - 1]
        if graph_u != graph_v:
            raise InconsistentIndices(f"Edge ({u}, {v}) joins graphs {graph_u} and {graph_v}")
        if u == v:
            self_loops += 1
            continue
        a, b = local[u], local[v]
        edges[graph_u].add((min(a, b), max(a, b)))
    if self_loops:
        logger.warning(f"Dropped {self_loops} self-loop rows from {directory}")

    graphs = tuple(
        Graph(len(members[g]), frozenset(edges[g])) for g in range(1, n_graphs + 1)
    )
    labels = _normalize_labels(raw_labels)
    logger.info(f"Loaded {len(graphs)} graphs from {directory}")
    return LabeledGraphSet(graphs, labels)
