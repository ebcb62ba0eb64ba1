"""
CSV file formats for diagrams and diagram datasets.
"""
import csv
import json
import logging
import numbers
from pathlib import Path
from typing import Union

from .exceptions import DiagramFormatError, InvalidPoint
from .models import DiagramDataset, DiagramPoint, ExtType, Label, PersistenceDiagram

logger = logging.getLogger(__name__)

DIAGRAM_HEADER = ["birth", "death", "hom_dim", "ext_type"]
MANIFEST_HEADER = ["path", "label"]

PathLike = Union[str, Path]


def write_diagram(diagram: PersistenceDiagram, path: PathLike) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(DIAGRAM_HEADER)
        for point in diagram.points:
            writer.writerow(
                [repr(float(point.birth)), repr(float(point.death)), point.hom_dim, point.ext_type.value]
            )


def read_diagram(path: PathLike, label: Label = None) -> PersistenceDiagram:
    path = Path(path)
    points = []
    with path.open(newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header != DIAGRAM_HEADER:
            raise DiagramFormatError(f"{path}: expected header {','.join(DIAGRAM_HEADER)}")
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                birth, death, hom_dim, ext_code = row
                points.append(
                    DiagramPoint(float(birth), float(death), int(hom_dim), ExtType(ext_code))
                )
            except (ValueError, InvalidPoint) as exc:
                raise DiagramFormatError(f"{path}:{line_no}: {exc}") from exc
    return PersistenceDiagram(tuple(points), label)


def _format_label(label: Label) -> str:
    if label is None:
        return ""
    if isinstance(label, numbers.Integral):
        return str(int(label))
    return repr(float(label))


def _parse_label(text: str) -> Label:
    if text == "":
        return None
    try:
        return int(text)
    except ValueError:
        return float(text)


def write_dataset(directory: PathLike, dataset: DiagramDataset) -> Path:
    """Write a manifest, one CSV per diagram, the split and dataset metadata."""
    directory = Path(directory)
    (directory / "diagrams").mkdir(parents=True, exist_ok=True)
    with (directory / "manifest.csv").open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(MANIFEST_HEADER)
        for index, diagram in enumerate(dataset.diagrams):
            relative = Path("diagrams") / f"{index:06d}.csv"
            write_diagram(diagram, directory / relative)
            writer.writerow([relative.as_posix(), _format_label(diagram.label)])
    (directory / "split.json").write_text(json.dumps(dataset.split, indent=2, sort_keys=True) + "\n")
    (directory / "dataset.json").write_text(json.dumps(dataset.metadata, indent=2, sort_keys=True) + "\n")
    logger.info(f"Wrote {len(dataset)} diagrams to {directory}")
    return directory


def read_dataset(directory: PathLike) -> DiagramDataset:
    directory = Path(directory)
    manifest = directory / "manifest.csv"
    if not manifest.exists():
        raise DiagramFormatError(f"No manifest.csv in {directory}")
    diagrams = []
    with manifest.open(newline="") as handle:
        reader = csv.reader(handle)
        if next(reader, None) != MANIFEST_HEADER:
            raise DiagramFormatError(f"{manifest}: expected header path,label")
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise DiagramFormatError(f"{manifest}:{line_no}: expected 2 columns")
            diagrams.append(read_diagram(directory / row[0], _parse_label(row[1])))
    split_path = directory / "split.json"
    split = json.loads(split_path.read_text()) if split_path.exists() else {}
    meta_path = directory / "dataset.json"
    metadata = json.loads(meta_path.read_text()) if meta_path.exists() else {}
    return DiagramDataset(tuple(diagrams), split, metadata)
