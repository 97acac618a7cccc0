"""Static token embeddings and phrase-level cosine similarity.

The file format is the plain word2vec/GloVe text layout: an optional
``V d`` header line followed by ``token v1 ... vd`` lines.
"""
import logging
import math
from pathlib import Path
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, TextIO

import numpy as np

from mcse._text import normalize_term
from mcse.exceptions import EmbeddingFormatError

logger = logging.getLogger(__name__)

DEMO_EMBEDDINGS_PATH = Path(__file__).parent / "assets" / "demo_embeddings.txt"


class PhraseVector(NamedTuple):
    vector: np.ndarray
    count: int


class EmbeddingStore:
    """Token -> vector table.

    Treat instances as immutable; the phrase-vector cache is an internal
    memo and does not change any result.

    Parameters
    ----------
    tokens : sequence of str
        Normalized tokens, one per row of ``vectors``.
    vectors : array of shape (n_tokens, dim)
    """

    def __init__(self, tokens: Sequence[str], vectors):
        vectors = np.asarray(vectors, dtype=np.float64)
        if vectors.ndim != 2 or vectors.shape[0] != len(tokens):
            raise ValueError("vectors must be a 2-D array with one row per token")
        if vectors.shape[1] < 1:
            raise ValueError("dimension must be positive")
        if not np.all(np.isfinite(vectors)):
            raise ValueError("embedding vectors must be finite")
        self.dim = vectors.shape[1]
        self.index: Dict[str, int] = {}
        for i, tok in enumerate(tokens):
            self.index[normalize_term(tok) or tok.lower()] = i
        self.vectors = vectors
        self.vectors.setflags(write=False)
        self._cache: Dict[str, PhraseVector] = {}

    def __len__(self):
        return len(self.index)

    def __contains__(self, token):
        return token.lower() in self.index

    def __getitem__(self, token) -> np.ndarray:
        return self.vectors[self.index[token.lower()]]

    @classmethod
    def from_dict(cls, table: Dict[str, Iterable[float]]) -> "EmbeddingStore":
        tokens = list(table)
        return cls(tokens, np.array([list(table[t]) for t in tokens], dtype=np.float64))

    def phrase_vector(self, phrase: str) -> PhraseVector:
        cached = self._cache.get(phrase)
        if cached is not None:
            return cached
        rows = [self.index[t] for t in normalize_term(phrase).split() if t in self.index]
        if rows:
            result = PhraseVector(self.vectors[rows].mean(axis=0), len(rows))
        else:
            result = PhraseVector(np.zeros(self.dim), 0)
        if len(self._cache) < 200_000:
            self._cache[phrase] = result
        return result

    def oov_count(self, phrases: Iterable[str]) -> int:
        """Number of phrases with no in-vocabulary token."""
        return sum(1 for p in phrases if self.phrase_vector(p).count == 0)


def load_embeddings(source: TextIO, name: Optional[str] = None) -> EmbeddingStore:
    """Parse a text-format embedding table.

    A first line of exactly two integers is read as a ``V d`` header. Without
    one, the dimension is taken from the first vector line. Duplicate tokens
    keep the last vector.

    Raises
    ------
    EmbeddingFormatError
        For a dimension mismatch, a non-numeric or non-finite component, or
        an empty stream.
    """
    dim = None
    positions: Dict[str, int] = {}
    tokens: List[str] = []
    rows: List[List[float]] = []
    first = True
    for lineno, line in enumerate(source, start=1):
        parts = line.split()
        if not parts:
            continue
        if first:
            first = False
            if len(parts) == 2 and parts[0].isdigit() and parts[1].isdigit():
                dim = int(parts[1])
                if dim < 1:
                    raise EmbeddingFormatError("header dimension must be positive", line=lineno, source=name)
                continue
        token, values = parts[0], parts[1:]
        if dim is None:
            if not values:
                raise EmbeddingFormatError("vector line has no components", line=lineno, source=name)
            dim = len(values)
        if len(values) != dim:
            raise EmbeddingFormatError(
                f"expected {dim} components for {token!r}, found {len(values)}", line=lineno, source=name
            )
        try:
            vec = [float(v) for v in values]
        except ValueError as exc:
            raise EmbeddingFormatError(f"non-numeric component for {token!r}: {exc}", line=lineno, source=name)
        if not all(math.isfinite(v) for v in vec):
            raise EmbeddingFormatError(f"non-finite component for {token!r}", line=lineno, source=name)
        key = token.lower()
        if key in positions:
            logger.warning("line %d: duplicate token %r, keeping the later vector", lineno, token)
            rows[positions[key]] = vec
        else:
            positions[key] = len(tokens)
            tokens.append(key)
            rows.append(vec)
    if not tokens:
        raise EmbeddingFormatError("embedding table is empty", source=name)
    return EmbeddingStore(tokens, np.array(rows, dtype=np.float64))


def read_embeddings(path=None) -> EmbeddingStore:
    """Load an embedding file; ``None`` loads the bundled demo table."""
    path = Path(path) if path is not None else DEMO_EMBEDDINGS_PATH
    with open(path, encoding="utf-8") as fh:
        return load_embeddings(fh, name=str(path))


def phrase_vector(phrase: str, store: EmbeddingStore) -> PhraseVector:
    """Mean of the in-vocabulary token vectors of ``phrase``; zero vector if none."""
    return store.phrase_vector(phrase)


def _cosine01(u: np.ndarray, v: np.ndarray) -> float:
    uu = float(u @ u)
    vv = float(v @ v)
    if uu == 0.0 or vv == 0.0:
        return 0.0
    cos = float(u @ v) / math.sqrt(uu * vv)
    return min(1.0, max(0.0, cos))


def similarity(a: str, b: str, store: EmbeddingStore) -> float:
    """Cosine similarity of two phrases' mean vectors, clamped to [0, 1].

    Phrases without any in-vocabulary token score 0 against everything.
    """
    return _cosine01(store.phrase_vector(a).vector, store.phrase_vector(b).vector)


def similarity_matrix(rows: Sequence[str], cols: Sequence[str], store: EmbeddingStore) -> np.ndarray:
    """Vectorized :func:`similarity` over all ``rows`` x ``cols`` phrase pairs."""
    out = np.zeros((len(rows), len(cols)))
    if not rows or not cols:
        return out

    r = np.array([store.phrase_vector(p).vector for p in rows])
    c = np.array([store.phrase_vector(p).vector for p in cols])
    denom = np.sqrt(np.outer(np.einsum("ij,ij->i", r, r), np.einsum("ij,ij->i", c, c)))
    nonzero = denom > 0
    out[nonzero] = (r @ c.T)[nonzero] / denom[nonzero]
    np.clip(out, 0.0, 1.0, out=out)
    return out
