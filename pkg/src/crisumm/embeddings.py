"""Word-embedding tables in the text word2vec format, plus cosine similarity."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class EmbeddingFormatError(ValueError):
    """Raised when an embedding file does not match the declared shape."""


@dataclass(frozen=True)
class EmbeddingTable:
    """Immutable word -> dense-vector map; vectors are float64 arrays."""

    dimension: int
    vectors: dict[str, np.ndarray]

    def __post_init__(self) -> None:
        if self.dimension < 1:
            raise ValueError(f"dimension must be >= 1, got {self.dimension}")
        for word, vec in self.vectors.items():
            if vec.shape != (self.dimension,):
                raise ValueError(
                    f"vector for {word!r} has shape {vec.shape}, expected "
                    f"({self.dimension},)"
                )
            if not np.isfinite(vec).all():
                raise ValueError(f"vector for {word!r} has non-finite values")

    def get(self, word: str) -> np.ndarray | None:
        return self.vectors.get(word)

    def __contains__(self, word: str) -> bool:
        return word in self.vectors

    def __len__(self) -> int:
        return len(self.vectors)


def load_word2vec_text(path: str | Path) -> EmbeddingTable:
    """Parse a text word2vec file: header "V D", then V lines "word x1 .. xD".

    Words are lowercased; on a duplicate word the first occurrence
    wins. Any arity or numeric problem is reported with its line
    number.
    """
    path = Path(path)
    vectors: dict[str, np.ndarray] = {}
    with path.open(encoding="utf-8") as fh:
        header = fh.readline()
        parts = header.split()
        if len(parts) != 2:
            raise EmbeddingFormatError(
                f"{path.name}:1: header must be 'vocab_size dimension'"
            )
        try:
            vocab_size, dimension = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise EmbeddingFormatError(
                f"{path.name}:1: non-integer header field"
            ) from exc
        if vocab_size < 0 or dimension < 1:
            raise EmbeddingFormatError(
                f"{path.name}:1: header values out of range"
            )
        rows = 0
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            rows += 1
            if rows > vocab_size:
                raise EmbeddingFormatError(
                    f"{path.name}:{lineno}: more rows than the declared "
                    f"vocabulary size {vocab_size}"
                )
            fields = line.split()
            if len(fields) != dimension + 1:
                raise EmbeddingFormatError(
                    f"{path.name}:{lineno}: expected {dimension + 1} fields, "
                    f"got {len(fields)}"
                )
            word = fields[0].lower()
            try:
                values = [float(x) for x in fields[1:]]
            except ValueError as exc:
                raise EmbeddingFormatError(
                    f"{path.name}:{lineno}: non-numeric vector component"
                ) from exc
            if not all(math.isfinite(v) for v in values):
                raise EmbeddingFormatError(
                    f"{path.name}:{lineno}: non-finite vector component"
                )
            if word not in vectors:
                vectors[word] = np.array(values, dtype=np.float64)
        if rows < vocab_size:
            raise EmbeddingFormatError(
                f"{path.name}: declared {vocab_size} rows but found {rows}"
            )
    return EmbeddingTable(dimension=dimension, vectors=vectors)


def save_word2vec_text(table: EmbeddingTable, path: str | Path) -> None:
    """Write a table back out at full precision (bit-exact on reload)."""
    with Path(path).open("w", encoding="utf-8") as fh:
        fh.write(f"{len(table.vectors)} {table.dimension}\n")
        for word in sorted(table.vectors):
            components = " ".join(repr(float(v)) for v in table.vectors[word])
            fh.write(f"{word} {components}\n")


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity in [-1, 1]; zero-norm inputs score 0.

    Equal vectors return exactly 1.0, which keeps self-similarity of
    downstream aggregate scores exact.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    num = float(np.dot(a, b))
    da = float(np.dot(a, a))
    db = float(np.dot(b, b))
    if da == 0.0 or db == 0.0:
        return 0.0
    if num == da and num == db:
        # ||a - b||^2 = da + db - 2*num = 0, i.e. the vectors coincide.
        return 1.0
    value = num / math.sqrt(da * db)
    return max(-1.0, min(1.0, value))
