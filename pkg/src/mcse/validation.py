"""Input checks shared by the estimators and the CLI."""
import numbers
from typing import List, Optional, Tuple

import numpy as np


def check_texts(X, name="X") -> List[str]:
    """Return ``X`` as a list of report strings.

    A bare string is rejected; wrap a single report in a list.
    """
    if isinstance(X, (str, bytes)):
        raise TypeError(f"{name} must be a sequence of report strings, not a single string")
    if isinstance(X, np.ndarray):
        if X.ndim != 1:
            raise ValueError(f"{name} must be one-dimensional, got shape {X.shape}")
        X = X.tolist()
    try:
        texts = list(X)
    except TypeError:
        raise TypeError(f"{name} must be an iterable of strings, got {type(X).__name__}") from None
    for i, t in enumerate(texts):
        if not isinstance(t, str):
            raise TypeError(f"{name}[{i}] is {type(t).__name__}, expected str")
    return texts


def check_pairs(X, y=None) -> List[Tuple[str, str]]:
    """Normalize report pairs to ``[(reference, candidate), ...]``.

    With ``y`` given, ``X`` holds candidates and ``y`` the matching
    references (the ``score(X, y)`` convention). Otherwise ``X`` is a
    sequence of ``(reference, candidate)`` pairs.
    """
    if y is not None:
        candidates = check_texts(X, "X")
        references = check_texts(y, "y")
        if len(candidates) != len(references):
            raise ValueError(
                f"X and y have inconsistent lengths: {len(candidates)} != {len(references)}"
            )
        return list(zip(references, candidates))
    if isinstance(X, (str, bytes)):
        raise TypeError("X must be a sequence of (reference, candidate) pairs")
    pairs = []
    for i, item in enumerate(X):
        if isinstance(item, (str, bytes)) or len(item) != 2:
            raise ValueError(f"X[{i}] is not a (reference, candidate) pair")
        ref, cand = item
        if not isinstance(ref, str) or not isinstance(cand, str):
            raise TypeError(f"X[{i}] must hold two strings")
        pairs.append((ref, cand))
    return pairs


def check_threshold(threshold) -> float:
    if not isinstance(threshold, numbers.Real) or not 0.0 < float(threshold) < 1.0:
        raise ValueError(f"threshold must be a number strictly between 0 and 1, got {threshold!r}")
    return float(threshold)


def check_positive_int(value, name, minimum=1) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


def check_n_jobs(n_jobs: Optional[int]) -> int:
    if n_jobs is None:
        return 1
    if n_jobs == -1:
        import os

        return os.cpu_count() or 1
    return check_positive_int(n_jobs, "n_jobs")
