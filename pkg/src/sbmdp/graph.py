"""Immutable symmetric graphs over a binary or censored edge alphabet.

Graphs store the strict upper triangle only, in row-major pair order, as an
int8 array. Entries of simple graphs are {0, 1}; censored graphs carry
{-1, 0, +1} where 0 means "no edge" and the sign is the edge label. The
diagonal is implicitly zero and queries are symmetric.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import (
    AlphabetViolation,
    DuplicateEdge,
    IndexOutOfRange,
    ParseError,
    ShapeMismatch,
)

SIMPLE = "simple"
CENSORED = "censored"

ALPHABETS = {SIMPLE: (0, 1), CENSORED: (-1, 0, 1)}


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


def pair_rank(i: int, j: int, n: int) -> int:
    """Row-major rank of the unordered pair {i, j} (i < j) in the upper triangle."""
    if i > j:
        i, j = j, i
    return i * (2 * n - i - 1) // 2 + (j - i - 1)


class Graph:
    """Symmetric graph with copy-on-write entry mutation.

    Instances are immutable (the backing array is write-locked), hashable,
    and safe to share between workers.
    """

    __slots__ = ("n", "alphabet", "_values", "_hash")

    def __init__(self, n: int, alphabet: str, values: np.ndarray):
        if alphabet not in ALPHABETS:
            raise AlphabetViolation(f"unknown alphabet tag {alphabet!r}")
        if values.shape != (pair_count(n),):
            raise ShapeMismatch(
                f"expected {pair_count(n)} upper-triangle values, got {values.shape}"
            )
        allowed = ALPHABETS[alphabet]
        if values.size and not np.isin(values, allowed).all():
            raise AlphabetViolation(f"values outside alphabet {allowed}")
        self.n = n
        self.alphabet = alphabet
        arr = np.asarray(values, dtype=np.int8).copy()
        arr.flags.writeable = False
        self._values = arr
        self._hash = None

    @classmethod
    def empty(cls, n: int, alphabet: str = SIMPLE) -> "Graph":
        return cls(n, alphabet, np.zeros(pair_count(n), dtype=np.int8))

    @classmethod
    def from_dense(cls, dense: np.ndarray, alphabet: str = SIMPLE) -> "Graph":
        dense = np.asarray(dense)
        n = dense.shape[0]
        iu = np.triu_indices(n, 1)
        return cls(n, alphabet, dense[iu].astype(np.int8))

    @property
    def values(self) -> np.ndarray:
        """Read-only upper-triangle entries in row-major pair order."""
        return self._values

    def _check_pair(self, i: int, j: int) -> tuple[int, int]:
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise IndexOutOfRange(f"pair ({i}, {j}) outside [0, {self.n})")
        if i == j:
            raise IndexOutOfRange("diagonal entries are fixed at zero")
        return (i, j) if i < j else (j, i)

    def entry(self, i: int, j: int) -> int:
        if i == j:
            if not 0 <= i < self.n:
                raise IndexOutOfRange(f"vertex {i} outside [0, {self.n})")
            return 0
        i, j = self._check_pair(i, j)
        return int(self._values[pair_rank(i, j, self.n)])

    def set_entry(self, i: int, j: int, v: int) -> "Graph":
        """Return a copy of this graph with entry {i, j} replaced by ``v``."""
        i, j = self._check_pair(i, j)
        if v not in ALPHABETS[self.alphabet]:
            raise AlphabetViolation(f"value {v} not in {self.alphabet} alphabet")
        values = self._values.copy()
        values[pair_rank(i, j, self.n)] = v
        return Graph(self.n, self.alphabet, values)

    def hamming_distance(self, other: "Graph") -> int:
        """Number of unordered pairs whose entries differ."""
        if self.n != other.n or self.alphabet != other.alphabet:
            raise ShapeMismatch("graphs differ in size or alphabet")
        return int(np.count_nonzero(self._values != other._values))

    def to_dense(self, dtype=np.float64) -> np.ndarray:
        """Dense symmetric adjacency matrix with zero diagonal."""
        a = np.zeros((self.n, self.n), dtype=dtype)
        iu = np.triu_indices(self.n, 1)
        a[iu] = self._values
        a[(iu[1], iu[0])] = self._values
        return a

    def degrees(self) -> np.ndarray:
        """Row sums of the dense adjacency, computed without materializing it."""
        iu = np.triu_indices(self.n, 1)
        vals = self._values.astype(np.float64)
        deg = np.bincount(iu[0], weights=vals, minlength=self.n)
        deg += np.bincount(iu[1], weights=vals, minlength=self.n)
        return deg.astype(np.int64)

    def edges(self) -> Iterator[tuple[int, int, int]]:
        """Yield (i, j, value) for nonzero entries, i < j, in row-major order."""
        nz = np.nonzero(self._values)[0]
        for rank in nz:
            i, j = _unrank(int(rank), self.n)
            yield i, j, int(self._values[rank])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and self.alphabet == other.alphabet
            and np.array_equal(self._values, other._values)
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.alphabet, self._values.tobytes()))
        return self._hash

    def __repr__(self) -> str:
        nnz = int(np.count_nonzero(self._values))
        return f"Graph(n={self.n}, alphabet={self.alphabet!r}, edges={nnz})"


def _unrank(rank: int, n: int) -> tuple[int, int]:
    # invert pair_rank by walking rows; rows shrink so this is O(n) worst case
    i = 0
    row = n - 1
    while rank >= row:
        rank -= row
        i += 1
        row -= 1
    return i, i + 1 + rank


@dataclass(frozen=True)
class GraphDelta:
    """A set of entry flips, each (i, j, new_value) with i < j and distinct pairs."""

    flips: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        seen = set()
        for i, j, _ in self.flips:
            if i >= j:
                raise IndexOutOfRange("delta positions must satisfy i < j")
            if (i, j) in seen:
                raise DuplicateEdge(f"position ({i}, {j}) flipped twice")
            seen.add((i, j))

    def apply(self, g: Graph) -> Graph:
        values = g.values.copy()
        for i, j, v in self.flips:
            g._check_pair(i, j)
            if v not in ALPHABETS[g.alphabet]:
                raise AlphabetViolation(f"value {v} not in {g.alphabet} alphabet")
            values[pair_rank(i, j, g.n)] = v
        return Graph(g.n, g.alphabet, values)

    def __len__(self) -> int:
        return len(self.flips)


def neighbors_at_distance(g: Graph, k: int) -> Iterator[Graph]:
    """Lazily yield every graph at Hamming distance exactly ``k`` from ``g``.

    At each chosen position every alphabet value other than the current one
    is substituted, hence a censored position contributes two alternatives.
    Deterministic order: positions lexicographic, values ascending.
    """
    m = pair_count(g.n)
    if k < 1 or k > m:
        return
    alphabet = ALPHABETS[g.alphabet]
    base = g.values
    for positions in itertools.combinations(range(m), k):
        alternatives = [
            [v for v in alphabet if v != base[pos]] for pos in positions
        ]
        for combo in itertools.product(*alternatives):
            values = base.copy()
            values[list(positions)] = combo
            yield Graph(g.n, g.alphabet, values)


def neighbors_within(g: Graph, radius: int) -> Iterator[Graph]:
    """Lazily yield every graph at Hamming distance 1..radius from ``g``.

    Graphs come out in nondecreasing distance order, each exactly once, so
    bounded searches can stop early.
    """
    if radius < 0:
        raise IndexOutOfRange("radius must be nonnegative")
    for k in range(1, radius + 1):
        yield from neighbors_at_distance(g, k)


def write_edge_list(g: Graph) -> str:
    """Serialize to the text edge-list format.

    Header line is ``n <count> <alphabet_tag>``; each body line is ``i j``
    for simple graphs and ``i j <label>`` for censored ones. ASCII,
    newline-separated, space-delimited, no trailing whitespace.
    """
    lines = [f"n {g.n} {g.alphabet}"]
    for i, j, v in g.edges():
        if g.alphabet == SIMPLE:
            lines.append(f"{i} {j}")
        else:
            lines.append(f"{i} {j} {v}")
    return "\n".join(lines) + "\n"


def read_edge_list(text: str) -> Graph:
    """Parse the edge-list format produced by :func:`write_edge_list`."""
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty input", line=1)
    header = lines[0].split()
    if len(header) != 3 or header[0] != "n":
        raise ParseError(f"bad header {lines[0]!r}", line=1)
    try:
        n = int(header[1])
    except ValueError:
        raise ParseError(f"bad vertex count {header[1]!r}", line=1) from None
    alphabet = header[2]
    if alphabet not in ALPHABETS:
        raise ParseError(f"unknown alphabet tag {alphabet!r}", line=1)
    if n < 0:
        raise ParseError("vertex count must be nonnegative", line=1)
    values = np.zeros(pair_count(n), dtype=np.int8)
    seen = np.zeros(pair_count(n), dtype=bool)
    for lineno, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        parts = raw.split()
        if len(parts) not in (2, 3):
            raise ParseError(f"expected 'i j [label]', got {raw!r}", line=lineno)
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"bad vertex index in {raw!r}", line=lineno) from None
        if not (0 <= i < n and 0 <= j < n) or i == j:
            raise IndexOutOfRange(f"line {lineno}: pair ({i}, {j}) invalid for n={n}")
        if len(parts) == 3:
            try:
                v = int(parts[2])
            except ValueError:
                raise ParseError(f"bad label in {raw!r}", line=lineno) from None
        else:
            v = 1
        if v == 0 or v not in ALPHABETS[alphabet]:
            raise ParseError(f"label {v} invalid for {alphabet} graph", line=lineno)
        rank = pair_rank(i, j, n)
        if seen[rank]:
            raise DuplicateEdge(f"pair ({i}, {j}) listed twice", line=lineno)
        seen[rank] = True
        values[rank] = v
    return Graph(n, alphabet, values)


def random_delta(
    g: Graph, flips: int, rng: np.random.Generator
) -> GraphDelta:
    """Sample a delta of exactly ``flips`` distinct positions with changed values."""
    m = pair_count(g.n)
    if flips > m:
        raise IndexOutOfRange(f"cannot flip {flips} of {m} positions")
    positions = rng.choice(m, size=flips, replace=False)
    out = []
    alphabet = ALPHABETS[g.alphabet]
    for pos in sorted(int(p) for p in positions):
        i, j = _unrank(pos, g.n)
        current = int(g.values[pos])
        choices = [v for v in alphabet if v != current]
        v = choices[int(rng.integers(len(choices)))]
        out.append((i, j, v))
    return GraphDelta(tuple(out))
