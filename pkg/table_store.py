"""
Cache persistence for count tables, polygon word lists and matrix dumps.

Every write goes through atomic_write(): the data lands in a temporary file
next to the target and is moved into place only when it was written fully.
"""
import csv
import logging
import os
import re
from contextlib import contextmanager
from pathlib import Path
from typing import Iterable, Optional, Set

from TaxiBounds.almbound import TransferMatrix
from TaxiBounds.count_table import CountTable
from TaxiBounds.errors import ComputationError
from TaxiBounds.gjbound import TaxiPolygon

logger = logging.getLogger(__name__)

TABLE_HEADER = ["n", "count"]
MATRIX_HEADER = ["i", "j", "count"]
_POLYGON_FILE = re.compile(r"^polygons_le(\d+)\.txt$")


@contextmanager
def atomic_write(path: Path):
    """
    Context manager yielding a text handle whose contents replace path on success.

    Usage:
        with atomic_write(path) as handle:
            handle.write("...")
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(f".{path.name}.{os.getpid()}.tmp")
    try:
        with open(tmp, "w", newline="") as handle:
            yield handle
        os.replace(tmp, path)
    except Exception:
        if tmp.exists():
            tmp.unlink()
        raise


def write_count_table(table: CountTable, path: Path) -> Path:
    with atomic_write(path) as handle:
        writer = csv.writer(handle)
        writer.writerow(TABLE_HEADER)
        for n, count in table.rows():
            writer.writerow([n, count])
    return Path(path)


def read_count_table(path: Path, name: str, start: int = 1) -> CountTable:
    """
    Raises:
        ComputationError: on a bad header, a non-integer cell or a gap in n
    """
    with open(path, newline="") as handle:
        rows = list(csv.reader(handle))
    if not rows or rows[0] != TABLE_HEADER:
        raise ComputationError(f"Corrupt count table {path}: expected header {','.join(TABLE_HEADER)}")
    values = {}
    for line, row in enumerate(rows[1:], start=2):
        try:
            n, count = (int(cell) for cell in row)
        except ValueError:
            raise ComputationError(f"Corrupt count table {path}: line {line} is not 'n,count'")
        values[n] = count
    try:
        table = CountTable(name=name, values=values, start=start)
    except ValueError as e:
        raise ComputationError(f"Corrupt count table {path}: {e}")
    if not table.is_contiguous():
        raise ComputationError(f"Corrupt count table {path}: missing entries below n={table.max_n}")
    return table


def write_polygons(polygons: Iterable[TaxiPolygon], path: Path) -> Path:
    with atomic_write(path) as handle:
        for word in sorted(p.word for p in polygons):
            handle.write(word + "\n")
    return Path(path)


def read_polygons(path: Path) -> Set[TaxiPolygon]:
    polygons = set()
    with open(path) as handle:
        for line, text in enumerate(handle, start=1):
            word = text.strip()
            if not word or set(word) - set("st"):
                raise ComputationError(f"Corrupt polygon list {path}: line {line} is not a word over s, t")
            polygons.add(TaxiPolygon(word))
    return polygons


def dump_matrix(matrix: TransferMatrix, path: Path) -> Path:
    """Write A(m, n) as CSV triples i,j,count."""
    with atomic_write(path) as handle:
        writer = csv.writer(handle)
        writer.writerow(MATRIX_HEADER)
        for i, j, count in matrix.triples():
            writer.writerow([i, j, count])
    logger.info(f"✓ Wrote A({matrix.m},{matrix.n}) with {matrix.nnz} nonzero entries to {path}")
    return Path(path)


class TableStore:
    """Cache directory holding count tables (name.csv) and polygon lists (polygons_le{max_len}.txt)."""

    def __init__(self, root: Path):
        self.root = Path(root)

    def table_path(self, name: str) -> Path:
        return self.root / f"{name}.csv"

    def polygon_path(self, max_len: int) -> Path:
        return self.root / f"polygons_le{max_len}.txt"

    def save_table(self, table: CountTable) -> Path:
        path = write_count_table(table, self.table_path(table.name))
        logger.debug(f"Cached table '{table.name}' up to n={table.max_n} at {path}")
        return path

    def load_table(self, name: str, start: int = 1) -> Optional[CountTable]:
        path = self.table_path(name)
        if not path.exists():
            return None
        return read_count_table(path, name, start)

    def save_polygons(self, polygons: Iterable[TaxiPolygon], max_len: int) -> Path:
        return write_polygons(polygons, self.polygon_path(max_len))

    def load_polygons(self, max_len: int) -> Optional[Set[TaxiPolygon]]:
        """Polygons of length <= max_len from the smallest cached list that covers them."""
        if not self.root.exists():
            return None
        covering = sorted(
            int(match.group(1))
            for match in (_POLYGON_FILE.match(p.name) for p in self.root.iterdir())
            if match and int(match.group(1)) >= max_len
        )
        if not covering:
            return None
        polygons = read_polygons(self.polygon_path(covering[0]))
        return {p for p in polygons if p.length <= max_len}
