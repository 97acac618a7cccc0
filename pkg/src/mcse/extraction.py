"""Report text -> clinical entities.

The pipeline is sentence segmentation, tokenization, gazetteer matching,
modifier attachment, negation detection and a final filtering pass that keeps
only disease/chemical findings.
"""
import re
from dataclasses import dataclass, replace
from typing import List, NamedTuple, Optional, Sequence, Tuple

from mcse._text import strip_boundary_punct
from mcse.lexicon import ENTITY_CATEGORIES, KEPT_CATEGORIES, EntityMatcher, Match, MedicalLexicon

MODIFIER_WINDOW = 4
NEGATION_WINDOW = 6
CONNECTIVES = frozenset({"to"})

_DELIMITER = re.compile(r"[.;!?]+(?=\s|$)|[;!?]+")
_LIST_MARKER = re.compile(r"^\d+[.)]?$")
_LEADING_MARKER = re.compile(r"^\d+[.)]\s+")
_RAW_TOKEN = re.compile(r"[^\s\-/‐-―]+")


class Token(NamedTuple):
    raw: str
    norm: str
    start: int
    end: int


@dataclass(frozen=True)
class TokenizedReport:
    """Sentences of tokens. Token offsets point into the original report text."""

    text: str
    sentences: Tuple[Tuple[Token, ...], ...]

    def norms(self, index: int) -> List[str]:
        return [t.norm for t in self.sentences[index]]


@dataclass(frozen=True)
class EntitySpan:
    sentence: int
    start: int
    end: int
    head: str
    category: str
    modifiers: Tuple[str, ...] = ()
    negated: bool = False
    # first token of the attached modifier run; equals start when there is none
    modifier_start: Optional[int] = None


@dataclass(frozen=True)
class ClinicalEntity:
    phrase: str
    head: str
    category: str
    negated: bool = False

    def to_dict(self):
        return {"phrase": self.phrase, "head": self.head, "category": self.category, "negated": self.negated}

    @classmethod
    def from_phrase(cls, phrase: str, category: str = "disease") -> "ClinicalEntity":
        """Convenience constructor for tests and fixtures; the head is the phrase minus any negation prefix."""
        negated = phrase.startswith("no ")
        return cls(phrase, phrase[3:] if negated else phrase, category, negated)


def _sentence_bounds(text: str) -> List[Tuple[int, int]]:
    bounds = []
    pos = 0
    for m in _DELIMITER.finditer(text):
        bounds.append((pos, m.start()))
        pos = m.end()
    bounds.append((pos, len(text)))

    out = []
    for start, end in bounds:
        chunk = text[start:end]
        stripped = chunk.strip()
        if not stripped or _LIST_MARKER.match(stripped):
            continue
        start += len(chunk) - len(chunk.lstrip())
        end = start + len(stripped)
        marker = _LEADING_MARKER.match(stripped)
        if marker:
            start += marker.end()
        out.append((start, end))
    return out


def segment_sentences(text: str) -> List[str]:
    """Split report text into sentences.

    Sentences end at ``.``, ``;``, ``!`` or ``?``; a period only counts when
    followed by whitespace or the end of text, so ``6.5 cm`` stays whole.
    Numbered-list markers such as ``1.`` are dropped.

    >>> segment_sentences("No edema; no effusion.")
    ['No edema', 'no effusion']
    """
    return [text[s:e] for s, e in _sentence_bounds(text)]


def tokenize(sentence: str, offset: int = 0) -> List[Token]:
    """Whitespace/hyphen/slash tokenization with boundary punctuation stripped.

    Offsets are relative to ``sentence`` shifted by ``offset``.
    """
    tokens = []
    for m in _RAW_TOKEN.finditer(sentence):
        raw = m.group()
        core = strip_boundary_punct(raw)
        if not core:
            continue
        lead = raw.index(core)
        start = offset + m.start() + lead
        tokens.append(Token(core, core.lower(), start, start + len(core)))
    return tokens


def tokenize_report(text: str) -> TokenizedReport:
    sentences = []
    for start, end in _sentence_bounds(text):
        toks = tokenize(text[start:end], offset=start)
        if toks:
            sentences.append(tuple(toks))
    return TokenizedReport(text, tuple(sentences))


def _scan(report: TokenizedReport, matcher: EntityMatcher) -> List[List[Match]]:
    return [matcher.scan(report.norms(i)) for i in range(len(report.sentences))]


def match_entities(report: TokenizedReport, matcher: EntityMatcher) -> List[EntitySpan]:
    """Entity-category gazetteer hits; modifier and trigger matches are not entities."""
    spans = []
    for si, matches in enumerate(_scan(report, matcher)):
        for m in matches:
            if m.category in ENTITY_CATEGORIES:
                spans.append(EntitySpan(si, m.start, m.end, m.surface, m.category, modifier_start=m.start))
    return spans


def _matches_of(report, lexicon, categories):
    """Per-sentence matches restricted to ``categories``, rescanned with the lexicon's matcher."""
    matcher = _matcher_for(lexicon)
    return [[m for m in ms if m.category in categories] for ms in _scan(report, matcher)]


_MATCHER_CACHE = {}


def _matcher_for(lexicon: MedicalLexicon) -> EntityMatcher:
    key = id(lexicon)
    cached = _MATCHER_CACHE.get(key)
    if cached is None or cached.lexicon is not lexicon:
        cached = EntityMatcher(lexicon)
        _MATCHER_CACHE.clear()
        _MATCHER_CACHE[key] = cached
    return cached


def attach_modifiers(
    spans: Sequence[EntitySpan],
    report: TokenizedReport,
    lexicon: MedicalLexicon,
    window: int = MODIFIER_WINDOW,
    _matches=None,
) -> List[EntitySpan]:
    """Attach the run of modifier terms immediately preceding each span.

    The run may hold at most ``window`` tokens and may contain the connective
    "to" between two modifiers ("mild to moderate"). A modifier token is
    attached to at most one span.
    """
    per_sentence = _matches if _matches is not None else _matches_of(report, lexicon, {"modifier"})
    by_end = [{m.end: m for m in ms if m.category == "modifier"} for ms in per_sentence]
    consumed = set()
    out = []
    for span in spans:
        sent = report.sentences[span.sentence]
        mods_by_end = by_end[span.sentence]
        run: List[Match] = []
        pos = span.start
        pending_connective = None
        while pos > 0:
            mod = mods_by_end.get(pos)
            if mod is not None and (span.sentence, mod.start) not in consumed:
                if span.start - mod.start > window:
                    break
                run.insert(0, mod)
                pending_connective = None
                pos = mod.start
                continue
            if run and pending_connective is None and sent[pos - 1].norm in CONNECTIVES:
                pending_connective = pos - 1
                pos -= 1
                continue
            break
        # a connective is only kept when a modifier precedes it
        first = run[0].start if run else span.start
        words = []
        for i in range(first, span.start):
            words.append(sent[i].norm)
        for m in run:
            consumed.add((span.sentence, m.start))
        out.append(replace(span, modifiers=tuple(words), modifier_start=first))
    return out


def detect_negation(
    spans: Sequence[EntitySpan],
    report: TokenizedReport,
    lexicon: MedicalLexicon,
    window: int = NEGATION_WINDOW,
    _matches=None,
) -> List[EntitySpan]:
    """NegEx-style forward scope.

    A span is negated when a negation trigger ends at most ``window`` tokens
    before the span's first token (modifiers included) in the same sentence,
    with no scope terminator in between.
    """
    per_sentence = (
        _matches
        if _matches is not None
        else _matches_of(report, lexicon, {"negation_trigger", "scope_terminator"})
    )
    out = []
    for span in spans:
        anchor = span.start if span.modifier_start is None else span.modifier_start
        negated = False
        for m in per_sentence[span.sentence]:
            if m.start >= anchor:
                break
            if m.category == "negation_trigger" and anchor - m.end <= window:
                negated = True
            elif m.category == "scope_terminator":
                negated = False
        out.append(replace(span, negated=negated))
    return out


def filter_and_finalize(spans: Sequence[EntitySpan], lexicon: MedicalLexicon) -> List[ClinicalEntity]:
    """Keep disease/chemical spans and render them as de-duplicated entity phrases."""
    seen = set()
    entities = []
    for span in sorted(spans, key=lambda s: (s.sentence, s.start)):
        if span.category not in KEPT_CATEGORIES:
            continue
        words = (["no"] if span.negated else []) + list(span.modifiers) + [span.head]
        phrase = " ".join(words)
        if phrase in seen:
            continue
        seen.add(phrase)
        entities.append(ClinicalEntity(phrase, span.head, span.category, span.negated))
    return entities


def extract(
    text: str,
    lexicon: MedicalLexicon,
    matcher: Optional[EntityMatcher] = None,
    modifier_window: int = MODIFIER_WINDOW,
    negation_window: int = NEGATION_WINDOW,
) -> List[ClinicalEntity]:
    """Run the full extraction pipeline on one report.

    Examples
    --------
    >>> from mcse.lexicon import read_lexicon
    >>> lex = read_lexicon()
    >>> [e.phrase for e in extract("There is no pneumothorax.", lex)]
    ['no pneumothorax']
    """
    if matcher is None:
        matcher = _matcher_for(lexicon)
    report = tokenize_report(text)
    scanned = _scan(report, matcher)
    spans = [
        EntitySpan(si, m.start, m.end, m.surface, m.category, modifier_start=m.start)
        for si, ms in enumerate(scanned)
        for m in ms
        if m.category in ENTITY_CATEGORIES
    ]
    spans = attach_modifiers(spans, report, lexicon, modifier_window, _matches=scanned)
    spans = detect_negation(spans, report, lexicon, negation_window, _matches=scanned)
    return filter_and_finalize(spans, lexicon)
