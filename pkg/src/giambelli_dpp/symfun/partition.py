"""Young diagrams and their Frobenius coordinates."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache


@dataclass(frozen=True)
class Partition:
    """A Young diagram stored as its nonzero, weakly decreasing rows."""

    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        if any(p < 0 for p in parts):
            raise ValueError(f"negative part in {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"parts not weakly decreasing: {parts}")
        if 0 in parts:
            raise ValueError(f"zero part in the middle of {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __getitem__(self, i: int) -> int:
        # zero-padded row access, 0-based
        return self.parts[i] if 0 <= i < len(self.parts) else 0

    def __iter__(self):
        return iter(self.parts)

    def __repr__(self):
        return f"Partition({list(self.parts)})"

    def transpose(self) -> "Partition":
        if not self.parts:
            return Partition()
        return Partition(tuple(sum(1 for p in self.parts if p >= i)
                               for i in range(1, self.parts[0] + 1)))

    @property
    def rank(self) -> int:
        """Number of diagonal boxes."""
        return sum(1 for i, p in enumerate(self.parts, start=1) if p >= i)

    def to_frobenius(self) -> "FrobeniusCoords":
        d = self.rank
        conj = self.transpose()
        return FrobeniusCoords(tuple(self.parts[i] - i - 1 for i in range(d)),
                               tuple(conj.parts[i] - i - 1 for i in range(d)))

    def to_json(self) -> str:
        return json.dumps(list(self.parts))

    @classmethod
    def from_json(cls, text: str) -> "Partition":
        return cls(tuple(json.loads(text)))


@dataclass(frozen=True)
class FrobeniusCoords:
    """Arms ``p`` and legs ``q`` of the diagonal hooks, both strictly decreasing."""

    p: tuple[int, ...] = ()
    q: tuple[int, ...] = ()

    def __post_init__(self):
        p = tuple(int(v) for v in self.p)
        q = tuple(int(v) for v in self.q)
        if len(p) != len(q):
            raise ValueError("arms and legs must have the same length")
        for name, seq in (("arms", p), ("legs", q)):
            if any(v < 0 for v in seq):
                raise ValueError(f"negative {name}: {seq}")
            if any(seq[i] <= seq[i + 1] for i in range(len(seq) - 1)):
                raise ValueError(f"{name} not strictly decreasing: {seq}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def d(self) -> int:
        return len(self.p)

    def to_partition(self) -> Partition:
        d = self.d
        if d == 0:
            return Partition()
        # rows 1..d are p_i + i; rows below the diagonal block come from legs
        rows = [self.p[i] + i + 1 for i in range(d)]
        length = self.q[0] + 1
        for r in range(d, length):
            # row r (0-based) has as many boxes as columns j < d with q_j + j >= r
            rows.append(sum(1 for j in range(d) if self.q[j] + j >= r))
        return Partition(tuple(rows))

    def to_json(self) -> str:
        return json.dumps({"p": list(self.p), "q": list(self.q)})

    @classmethod
    def from_json(cls, text: str) -> "FrobeniusCoords":
        obj = json.loads(text)
        return cls(tuple(obj["p"]), tuple(obj["q"]))


def to_frobenius(lam: Partition) -> FrobeniusCoords:
    return lam.to_frobenius()


def from_frobenius(p, q) -> Partition:
    return FrobeniusCoords(tuple(p), tuple(q)).to_partition()


def transpose(lam: Partition) -> Partition:
    return lam.transpose()


def hook(p: int, q: int) -> Partition:
    """The diagram ``(p | q) = (p + 1, 1^q)``."""
    return Partition((p + 1,) + (1,) * q)


@lru_cache(maxsize=None)
def _partitions(n: int, largest: int) -> tuple[tuple[int, ...], ...]:
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def partitions_of(n: int) -> list[Partition]:
    return [Partition(p) for p in _partitions(n, n)]


def partitions_up_to(n: int) -> list[Partition]:
    return [lam for k in range(n + 1) for lam in partitions_of(k)]
