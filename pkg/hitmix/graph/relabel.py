import logging
from typing import Iterable

from hitmix.errors import GraphFormatError
from hitmix.io.inputs import numbered_lines

# Set up logging
logger = logging.getLogger(__name__)


def relabel_edge_list(stream: Iterable[str | bytes]) -> tuple[list[str], dict[str, int]]:
    """Map arbitrary vertex names to dense ids in order of first appearance."""
    mapping: dict[str, int] = {}
    edge_lines = []
    for line_number, line in numbered_lines(stream):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = stripped.split()
        if len(tokens) != 2:
            raise GraphFormatError(f"expected two vertex names, found {len(tokens)} tokens", line_number)
        ids = [mapping.setdefault(name, len(mapping)) for name in tokens]
        edge_lines.append(f"{ids[0]} {ids[1]}")

    if not edge_lines:
        raise GraphFormatError("edge list contains no edges")
    logger.info(f"Relabeled {len(mapping)} vertex names across {len(edge_lines)} edges")
    return edge_lines, mapping


def relabel_seeds(stream: Iterable[str | bytes], mapping: dict[str, int]) -> list[int]:
    seeds = []
    for line_number, line in numbered_lines(stream):
        name = line.strip()
        if not name or name.startswith("#"):
            continue
        if name not in mapping:
            raise GraphFormatError(f"seed {name!r} does not appear in the edge list", line_number)
        seeds.append(mapping[name])
    return seeds
