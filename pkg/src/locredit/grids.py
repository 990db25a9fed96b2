"""Similarity grids: m×n score matrices over receiving × sending outcomes."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ContractError

GRID_KINDS = ("taxonomic", "semantic", "final")


@dataclass(frozen=True)
class SimilarityGrid:
    """Scores between receiving-course outcomes (rows) and sending-course
    outcomes (columns).

    Cells are in [0, 1] for taxonomic and final grids and [−1, 1] for
    semantic grids.  ``neutral_cells`` flags cells that carry the neutral
    0.5 because an outcome could not be assigned a level.
    """

    kind: str
    row_ids: tuple[str, ...]
    col_ids: tuple[str, ...]
    cells: tuple[tuple[float, ...], ...]
    neutral_cells: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self):
        if self.kind not in GRID_KINDS:
            raise ContractError(f"unknown grid kind {self.kind!r}")
        if not self.row_ids or not self.col_ids:
            raise ContractError("grid must have at least one row and one column")
        if len(set(self.row_ids)) != len(self.row_ids):
            raise ContractError("duplicate row ids")
        if len(set(self.col_ids)) != len(self.col_ids):
            raise ContractError("duplicate column ids")
        if len(self.cells) != len(self.row_ids):
            raise ContractError(
                f"grid has {len(self.cells)} rows, expected {len(self.row_ids)}")
        for row in self.cells:
            if len(row) != len(self.col_ids):
                raise ContractError(
                    f"grid row has {len(row)} cells, expected {len(self.col_ids)}")

    @property
    def m(self) -> int:
        return len(self.row_ids)

    @property
    def n(self) -> int:
        return len(self.col_ids)

    def cell(self, i: int, j: int) -> float:
        return self.cells[i][j]

    def row_max(self, i: int) -> tuple[int, float]:
        """Best column index and value in row i; ties pick the lowest index."""
        row = self.cells[i]
        best_j = 0
        for j in range(1, len(row)):
            if row[j] > row[best_j]:
                best_j = j
        return best_j, row[best_j]

    def same_shape_as(self, other: "SimilarityGrid") -> bool:
        return self.row_ids == other.row_ids and self.col_ids == other.col_ids
