"""Shared normalization rules for lexicon terms, report tokens and embedding keys."""
import re

# hyphen, slash and the common unicode dashes act as token separators
_SEPARATORS = re.compile(r"[-/‐-―]")
_WHITESPACE = re.compile(r"\s+")


def strip_boundary_punct(token):
    """Remove non-alphanumeric characters from both ends of ``token``."""
    start, end = 0, len(token)
    while start < end and not token[start].isalnum():
        start += 1
    while end > start and not token[end - 1].isalnum():
        end -= 1
    return token[start:end]


def normalize_term(text):
    """Normalize a term: lowercase, split on hyphens/slashes, strip punctuation, collapse spaces.

    >>> normalize_term("Mild-to-Moderate")
    'mild to moderate'
    >>> normalize_term("  Pleural   effusion. ")
    'pleural effusion'
    """
    pieces = _SEPARATORS.sub(" ", text.lower()).split()
    return " ".join(p for p in map(strip_boundary_punct, pieces) if p)


def normalize_text(text):
    """Normalize running text while keeping sentence punctuation.

    Lowercases, turns hyphens and slashes into spaces and collapses whitespace.
    Extraction gives the same entities on the result as on the original.
    """
    return _WHITESPACE.sub(" ", _SEPARATORS.sub(" ", text.lower())).strip()
