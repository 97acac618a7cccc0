"""Categorized medical vocabulary and the token-level gazetteer matcher built from it.

Lexicon files are UTF-8 TSV::

    # comment
    pleural effusion<TAB>disease
    mild-to-moderate<TAB>modifier<TAB>mild to moderate

Surfaces are normalized on load (see :func:`mcse._text.normalize_term`), so
matching runs over normalized token sequences rather than raw characters.
"""
import io
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Sequence, TextIO, Tuple

from mcse._text import normalize_term
from mcse.exceptions import LexiconError

logger = logging.getLogger(__name__)

CATEGORIES = (
    "disease",
    "chemical",
    "anatomy",
    "procedure",
    "equipment",
    "modifier",
    "negation_trigger",
    "scope_terminator",
)

# A surface listed under several categories is tagged with the first one here.
CATEGORY_PRIORITY = (
    "disease",
    "chemical",
    "procedure",
    "equipment",
    "anatomy",
    "negation_trigger",
    "scope_terminator",
    "modifier",
)

ENTITY_CATEGORIES = frozenset({"disease", "chemical", "anatomy", "procedure", "equipment"})
KEPT_CATEGORIES = frozenset({"disease", "chemical"})

DEMO_LEXICON_PATH = Path(__file__).parent / "assets" / "demo_lexicon.tsv"


@dataclass(frozen=True, order=True)
class LexiconEntry:
    surface: str
    category: str
    canonical: Optional[str] = None

    def __post_init__(self):
        if not self.surface or self.surface != self.surface.strip() or self.surface != self.surface.lower():
            raise ValueError(f"surface must be normalized, got {self.surface!r}")
        if self.category not in CATEGORIES:
            raise ValueError(f"unknown category {self.category!r}")


@dataclass(frozen=True)
class MedicalLexicon:
    """Immutable set of :class:`LexiconEntry` indexed by category."""

    entries: FrozenSet[LexiconEntry]
    by_category: Dict[str, FrozenSet[LexiconEntry]] = field(init=False, repr=False, compare=False)
    _surface_categories: Dict[str, FrozenSet[str]] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        entries = frozenset(self.entries)
        buckets = {c: set() for c in CATEGORIES}
        surfaces = {}
        for entry in entries:
            buckets[entry.category].add(entry)
            surfaces.setdefault(entry.surface, set()).add(entry.category)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "by_category", {c: frozenset(b) for c, b in buckets.items()})
        object.__setattr__(
            self, "_surface_categories", {s: frozenset(c) for s, c in surfaces.items()}
        )

    def __len__(self):
        return len(self.entries)

    def __contains__(self, surface):
        return normalize_term(surface) in self._surface_categories

    def categories_of(self, surface) -> FrozenSet[str]:
        return self._surface_categories.get(normalize_term(surface), frozenset())

    def category_of(self, surface) -> Optional[str]:
        """Single category used for tagging, resolved by ``CATEGORY_PRIORITY``."""
        cats = self.categories_of(surface)
        for cat in CATEGORY_PRIORITY:
            if cat in cats:
                return cat
        return None

    def surfaces(self, category=None) -> List[str]:
        if category is None:
            return sorted(self._surface_categories)
        return sorted(e.surface for e in self.by_category[category])

    @classmethod
    def from_entries(cls, entries: Iterable[Tuple]) -> "MedicalLexicon":
        """Build from ``(surface, category[, canonical])`` tuples, normalizing surfaces."""
        built = {}
        for item in entries:
            surface, category, *rest = item
            canonical = normalize_term(rest[0]) if rest and rest[0] else None
            entry = LexiconEntry(normalize_term(surface), category, canonical or None)
            built[(entry.surface, entry.category)] = entry
        return cls(frozenset(built.values()))


def load_lexicon(source: TextIO, name: Optional[str] = None) -> MedicalLexicon:
    """Parse a lexicon TSV stream.

    Parameters
    ----------
    source : text stream
        Lines of ``surface<TAB>category[<TAB>canonical]``; blank lines and
        ``#`` comments are skipped.
    name : str, optional
        Used in error messages.

    Raises
    ------
    LexiconError
        On a wrong field count, an unknown category, a surface that normalizes
        to nothing, or when no entries were found.
    """
    entries = {}
    for lineno, raw in enumerate(source, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) not in (2, 3):
            raise LexiconError(
                f"expected 2 or 3 tab-separated fields, found {len(fields)}", line=lineno, source=name
            )
        surface = normalize_term(fields[0])
        category = fields[1].strip().lower()
        if category not in CATEGORIES:
            raise LexiconError(f"unknown category {fields[1].strip()!r}", line=lineno, source=name)
        if not surface:
            raise LexiconError(f"surface {fields[0]!r} is empty after normalization", line=lineno, source=name)
        canonical = normalize_term(fields[2]) if len(fields) == 3 else ""
        key = (surface, category)
        if key in entries:
            logger.warning("line %d: duplicate entry %r/%s, keeping the later one", lineno, surface, category)
        entries[key] = LexiconEntry(surface, category, canonical or None)
    if not entries:
        raise LexiconError("lexicon is empty", source=name)
    return MedicalLexicon(frozenset(entries.values()))


def read_lexicon(path=None) -> MedicalLexicon:
    """Load a lexicon file; ``None`` loads the bundled demo lexicon."""
    path = Path(path) if path is not None else DEMO_LEXICON_PATH
    with open(path, encoding="utf-8") as fh:
        return load_lexicon(fh, name=str(path))


def dump_lexicon(lexicon: MedicalLexicon, out: Optional[TextIO] = None) -> str:
    """Serialize to TSV in sorted order. Returns the text and writes it to ``out`` if given."""
    buf = io.StringIO()
    for entry in sorted(lexicon.entries):
        row = [entry.surface, entry.category]
        if entry.canonical:
            row.append(entry.canonical)
        buf.write("\t".join(row) + "\n")
    text = buf.getvalue()
    if out is not None:
        out.write(text)
    return text


class Match(NamedTuple):
    """Half-open token range ``[start, end)`` tagged with a lexicon category."""

    start: int
    end: int
    surface: str
    category: str


class EntityMatcher:
    """Leftmost-longest gazetteer over token sequences.

    Patterns are stored in a token trie; scanning tries every start position
    left to right, keeps the longest pattern found there, and resumes after it,
    so returned matches never overlap.
    """

    _END = object()

    def __init__(self, lexicon: MedicalLexicon):
        if not len(lexicon):
            raise LexiconError("cannot compile a matcher from an empty lexicon")
        self.lexicon = lexicon
        trie: dict = {}
        for surface in lexicon.surfaces():
            node = trie
            for tok in surface.split(" "):
                node = node.setdefault(tok, {})
            node[self._END] = (surface, lexicon.category_of(surface))
        self._trie = trie

    def scan(self, tokens: Sequence[str]) -> List[Match]:
        """Match normalized ``tokens``; returns non-overlapping matches sorted by start."""
        matches = []
        end_key = self._END
        n = len(tokens)
        i = 0
        while i < n:
            node = self._trie.get(tokens[i])
            best = None
            j = i
            while node is not None:
                j += 1
                hit = node.get(end_key)
                if hit is not None:
                    best = (j, hit)
                if j >= n:
                    break
                node = node.get(tokens[j])
            if best is None:
                i += 1
                continue
            end, (surface, category) = best
            matches.append(Match(i, end, surface, category))
            i = end
        return matches


def compile_matcher(lexicon: MedicalLexicon) -> EntityMatcher:
    return EntityMatcher(lexicon)
