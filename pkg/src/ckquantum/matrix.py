"""Sparse matrices over any exact ring (1-based indices)."""

from __future__ import annotations

from typing import Callable


class SparseMatrix:
    """``rows x cols`` matrix stored as ``{(i, j): entry}`` with no zeros."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: dict | None = None):
        self.rows = rows
        self.cols = cols
        self.entries = {k: v for k, v in (entries or {}).items() if v}

    @classmethod
    def identity(cls, n: int, one) -> "SparseMatrix":
        return cls(n, n, {(i, i): one for i in range(1, n + 1)})

    def __getitem__(self, pos):
        return self.entries.get(pos, 0)

    def get(self, i, j, zero):
        return self.entries.get((i, j), zero)

    @property
    def shape(self):
        return (self.rows, self.cols)

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows,
                            {(j, i): v for (i, j), v in self.entries.items()})

    @property
    def T(self):
        return self.transpose()

    def map(self, fn: Callable) -> "SparseMatrix":
        return SparseMatrix(self.rows, self.cols,
                            {k: fn(v) for k, v in self.entries.items()})

    def _rowmap(self):
        rows: dict = {}
        for (i, j), v in self.entries.items():
            rows.setdefault(i, []).append((j, v))
        return rows

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        right = other._rowmap()
        out: dict = {}
        for (i, a), x in self.entries.items():
            for j, y in right.get(a, ()):
                key = (i, j)
                prev = out.get(key)
                out[key] = x * y if prev is None else prev + x * y
        return SparseMatrix(self.rows, other.cols, out)

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out[k] + v if k in out else v
        return SparseMatrix(self.rows, self.cols, out)

    def __neg__(self):
        return self.map(lambda v: -v)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "SparseMatrix":
        return self.map(lambda v: v * c)

    def kron(self, other: "SparseMatrix") -> "SparseMatrix":
        """Kronecker product; index ``(i, k)`` maps to ``(i-1)*m + k``."""
        m, n = other.rows, other.cols
        out = {}
        for (i, j), x in self.entries.items():
            for (k, l), y in other.entries.items():
                out[((i - 1) * m + k, (j - 1) * n + l)] = x * y
        return SparseMatrix(self.rows * m, self.cols * n, out)

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def is_zero(self) -> bool:
        return not self.entries

    def to_rows(self, zero=0) -> list[list]:
        return [[self.entries.get((i, j), zero) for j in range(1, self.cols + 1)]
                for i in range(1, self.rows + 1)]

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"
