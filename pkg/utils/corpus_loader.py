"""
Lamination Corpus Loader Module
Read and write the line-oriented lamination corpus format

Each non-comment line holds four floats: two boundary angles (radians), the
leaf weight and a reserved field that must be 0. Text after `#` is ignored.
"""
import logging
from pathlib import Path
from typing import Iterable, List, Tuple

from utils.errors import LaminationError

logger = logging.getLogger(__name__)

LeafRow = Tuple[float, float, float]


def parse_corpus_line(line: str, line_number: int = 0) -> List[float]:
    """
    Parse one corpus line

    Returns:
        [] for blank and comment lines, otherwise [alpha, beta, weight]

    Raises:
        LaminationError: wrong field count, non-numeric field or nonzero reserved field
    """
    content = line.split("#", 1)[0].strip()
    if not content:
        return []
    fields = content.split()
    if len(fields) != 4:
        raise LaminationError(f"line {line_number}: expected 4 fields, got {len(fields)}")
    try:
        alpha, beta, weight, reserved = (float(value) for value in fields)
    except ValueError as e:
        raise LaminationError(f"line {line_number}: {e}") from e
    if reserved != 0.0:
        raise LaminationError(f"line {line_number}: reserved field must be 0, got {reserved}")
    return [alpha, beta, weight]


def read_corpus(path: str) -> List[LeafRow]:
    """
    Read leaf rows from a corpus file

    Raises:
        FileNotFoundError: path does not exist
        LaminationError: malformed line
    """
    corpus_path = Path(path)
    if not corpus_path.exists():
        raise FileNotFoundError(f"Lamination file not found: {path}")

    rows = []
    with open(corpus_path, "r", encoding="utf-8") as f:
        for number, line in enumerate(f, start=1):
            parsed = parse_corpus_line(line, number)
            if parsed:
                rows.append(tuple(parsed))
    logger.debug("loaded %d leaves from %s", len(rows), path)
    return rows


def write_corpus(rows: Iterable[LeafRow], path: str, header: str = "") -> None:
    """Write leaf rows with repr-exact floats so a re-read gives the same lamination."""
    corpus_path = Path(path)
    corpus_path.parent.mkdir(parents=True, exist_ok=True)
    with open(corpus_path, "w", encoding="utf-8") as f:
        for comment in header.splitlines():
            f.write(f"# {comment}\n")
        for alpha, beta, weight in rows:
            f.write(f"{float(alpha)!r} {float(beta)!r} {float(weight)!r} 0\n")
