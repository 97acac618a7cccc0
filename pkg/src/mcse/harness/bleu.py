"""Sentence-level BLEU baseline.

Default configuration is BLEU-2 (uniform weights over 1- and 2-gram modified
precisions) without smoothing. With ``smooth=True`` a zero match count at
some order is replaced by ``epsilon`` before taking the geometric mean.
"""
import logging
import math
import re
from collections import Counter
from typing import Dict, Sequence

logger = logging.getLogger(__name__)

DEFAULT_EPSILON = 1e-9
_BLEU_TOKEN = re.compile(r"\w+|[^\w\s]")


def bleu_tokenize(text: str):
    """Lowercase, words and punctuation marks as separate tokens."""
    return _BLEU_TOKEN.findall(text.lower())


def _ngrams(tokens, n):
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def modified_precision(reference: Sequence[str], candidate: Sequence[str], n: int):
    """Clipped n-gram matches and the candidate n-gram total."""
    cand = _ngrams(candidate, n)
    ref = _ngrams(reference, n)
    matches = sum(min(count, ref[g]) for g, count in cand.items())
    return matches, max(len(candidate) - n + 1, 0)


def brevity_penalty(ref_len: int, cand_len: int) -> float:
    if cand_len == 0:
        return 0.0
    if cand_len >= ref_len:
        return 1.0
    return math.exp(1.0 - ref_len / cand_len)


def bleu(
    reference: Sequence[str],
    candidate: Sequence[str],
    max_n: int = 2,
    smooth: bool = False,
    epsilon: float = DEFAULT_EPSILON,
) -> float:
    """BLEU score of ``candidate`` against a single ``reference`` token list.

    Examples
    --------
    >>> bleu("no acute disease".split(), "no disease".split())
    0.0
    >>> bleu("a b c".split(), "a b c".split())
    1.0
    """
    if max_n < 1:
        raise ValueError("max_n must be at least 1")
    if not candidate:
        logger.info("empty candidate, BLEU is 0")
        return 0.0
    log_sum = 0.0
    for n in range(1, max_n + 1):
        matches, total = modified_precision(reference, candidate, n)
        if matches == 0:
            if not smooth:
                return 0.0
            precision = epsilon / max(total, 1)
        else:
            precision = matches / total
        log_sum += math.log(precision)
    return brevity_penalty(len(reference), len(candidate)) * math.exp(log_sum / max_n)


def bleu_variant(max_n: int = 2, smooth: bool = False, epsilon: float = DEFAULT_EPSILON) -> Dict[str, object]:
    """Metadata describing a BLEU configuration, for recording next to scores."""
    return {
        "max_n": max_n,
        "weights": "uniform",
        "smoothing": "epsilon" if smooth else "none",
        "epsilon": epsilon if smooth else None,
        "tokenizer": "lowercase-words-and-punctuation",
    }
