"""Multi-indices and truncated index sets.

Every chaos expansion in this package is indexed by finitely supported
multi-indices alpha = (a_1, ..., a_d) of non-negative integers.  The
canonical form drops trailing zeros, so (1, 0) and (1,) denote the same
index.  Truncated index sets collect all indices with total degree <= K
supported on the first N dimensions, ordered graded-lexicographically:
degree first, then lexicographic with the earliest dimension dominating,
e.g. for K = N = 2:

    (), (1), (0,1), (2), (1,1), (0,2)

The ordering is stable across runs and fully determined by (K, N), so any
persisted artifact that records (K, N) can reconstruct positions.
"""

from __future__ import annotations

import math
from typing import Iterable, Iterator


class MultiIndex(tuple):
    """Canonical finitely supported multi-index (trailing zeros dropped)."""

    degree: int

    def __new__(cls, entries: Iterable[int] = ()) -> "MultiIndex":
        vals = tuple(int(e) for e in entries)
        if any(e < 0 for e in vals):
            raise ValueError(f"multi-index entries must be non-negative, got {vals}")
        while vals and vals[-1] == 0:
            vals = vals[:-1]
        self = super().__new__(cls, vals)
        self.degree = sum(vals)
        return self

    @property
    def dims(self) -> int:
        """Number of supported dimensions (index of last nonzero entry)."""
        return len(self)

    def entry(self, j: int) -> int:
        """Entry at 1-based position j (0 beyond the stored support)."""
        return self[j - 1] if 1 <= j <= len(self) else 0

    def __add__(self, other: "MultiIndex") -> "MultiIndex":  # type: ignore[override]
        n = max(len(self), len(other))
        return MultiIndex(self.entry(j) + other.entry(j) for j in range(1, n + 1))

    def sub_checked(self, other: "MultiIndex") -> "MultiIndex | None":
        """Entrywise self - other, or None when any entry would go negative."""
        n = max(len(self), len(other))
        diff = [self.entry(j) - other.entry(j) for j in range(1, n + 1)]
        if any(e < 0 for e in diff):
            return None
        return MultiIndex(diff)

    def factorial(self) -> int:
        """alpha! = a_1! * a_2! * ... (exact integer arithmetic)."""
        out = 1
        for e in self:
            out *= math.factorial(e)
        return out

    def weight(self) -> float:
        """(2N)^alpha = prod over 1-based positions j of (2j)^{a_j}.

        Computed exactly in integer arithmetic; raises OverflowError when
        the result exceeds the float range (these values feed norms and
        variances, so silent saturation is never acceptable).
        """
        out = 1
        for j, e in enumerate(self, start=1):
            out *= (2 * j) ** e
        try:
            return float(out)
        except OverflowError as exc:
            raise OverflowError(f"weight of {self!r} exceeds float range") from exc

    def grlex_key(self) -> tuple:
        """Sort key realizing the graded-lexicographic order."""
        return (self.degree, tuple(-e for e in self))

    def to_text(self) -> str:
        return "(" + ",".join(str(e) for e in self) + ")"

    @classmethod
    def from_text(cls, text: str) -> "MultiIndex":
        text = text.strip()
        if not (text.startswith("(") and text.endswith(")")):
            raise ValueError(f"malformed multi-index text: {text!r}")
        body = text[1:-1].strip()
        if not body:
            return cls()
        return cls(int(p) for p in body.split(","))

    def __repr__(self) -> str:
        return f"MultiIndex{tuple(self)!r}"


ZERO_INDEX = MultiIndex()


def unit_index(k: int) -> MultiIndex:
    """epsilon_k: 1 in the k-th (1-based) slot, zero elsewhere."""
    if k < 1:
        raise ValueError(f"unit index position must be >= 1, got {k}")
    return MultiIndex((0,) * (k - 1) + (1,))


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    # First entry descending gives graded-lex order within a fixed degree.
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


class IndexSet:
    """All multi-indices with degree <= max_degree in the first max_dims dims.

    Members are stored in graded-lexicographic order; position 0 is always
    the zero index and the cardinality is binomial(N + K, K).
    """

    def __init__(self, max_degree: int, max_dims: int, _members=None):
        if max_degree < 0:
            raise ValueError(f"max_degree must be >= 0, got {max_degree}")
        if max_dims < 1:
            raise ValueError(f"max_dims must be >= 1, got {max_dims}")
        self.max_degree = int(max_degree)
        self.max_dims = int(max_dims)
        if _members is None:
            _members = tuple(
                MultiIndex(c)
                for d in range(self.max_degree + 1)
                for c in _compositions(d, self.max_dims)
            )
        self.members: tuple[MultiIndex, ...] = _members
        self._pos = {m: i for i, m in enumerate(self.members)}

    @classmethod
    def enumerate(cls, max_degree: int, max_dims: int) -> "IndexSet":
        return cls(max_degree, max_dims)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[MultiIndex]:
        return iter(self.members)

    def __contains__(self, alpha) -> bool:
        a = MultiIndex(alpha)
        return a.degree <= self.max_degree and a.dims <= self.max_dims

    def position(self, alpha: MultiIndex) -> int:
        try:
            return self._pos[MultiIndex(alpha)]
        except KeyError:
            raise KeyError(f"{alpha!r} not in IndexSet(K={self.max_degree}, N={self.max_dims})")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IndexSet)
            and self.max_degree == other.max_degree
            and self.max_dims == other.max_dims
        )

    def __hash__(self) -> int:
        return hash((self.max_degree, self.max_dims))

    def positions_by_degree(self) -> list[list[int]]:
        """Member positions grouped by total degree, ascending."""
        groups: list[list[int]] = [[] for _ in range(self.max_degree + 1)]
        for i, m in enumerate(self.members):
            groups[m.degree].append(i)
        return groups

    def to_text(self) -> str:
        lines = [f"K={self.max_degree} N={self.max_dims}"]
        lines.extend(m.to_text() for m in self.members)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "IndexSet":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        header = lines[0].split()
        kv = dict(part.split("=") for part in header)
        out = cls(int(kv["K"]), int(kv["N"]))
        listed = tuple(MultiIndex.from_text(ln) for ln in lines[1:])
        if listed and listed != out.members:
            raise ValueError("index list does not match canonical enumeration")
        return out

    def __repr__(self) -> str:
        return f"IndexSet(K={self.max_degree}, N={self.max_dims}, size={len(self)})"


def enumerate_indices(max_degree: int, max_dims: int) -> IndexSet:
    """Canonical graded-lexicographic index set for degree/dimension caps."""
    return IndexSet(max_degree, max_dims)


def leading_indices(dim: int, count: int) -> list[MultiIndex]:
    """First `count` d-dimensional multi-indices in graded-lex order.

    Position j (0-based) of this list is the multi-index alpha^{(j+1)} used
    to build the j+1-th tensor basis function.
    """
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    out: list[MultiIndex] = []
    degree = 0
    while len(out) < count:
        for c in _compositions(degree, dim):
            out.append(MultiIndex(c))
            if len(out) == count:
                return out
        degree += 1
    return out
