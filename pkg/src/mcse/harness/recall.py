"""Entity-recall check of the extractor against expert present/absent annotations."""
import json
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, TextIO, Tuple

from mcse._text import normalize_term
from mcse.exceptions import AnnotationError
from mcse.extraction import ClinicalEntity

PRESENCE = ("present", "absent")


@dataclass(frozen=True)
class AnnotationRecord:
    report_id: str
    entities: Tuple[Tuple[str, str], ...]

    def __post_init__(self):
        for phrase, presence in self.entities:
            if presence not in PRESENCE:
                raise ValueError(f"presence must be 'present' or 'absent', got {presence!r}")


@dataclass
class RecallReport:
    # None when no entity of that class was annotated
    present_recall: Optional[float]
    absent_recall: Optional[float]
    counts: Dict[str, Dict[str, Tuple[int, int]]] = field(default_factory=dict)

    def totals(self, presence):
        annotated = sum(c[presence][0] for c in self.counts.values())
        recognized = sum(c[presence][1] for c in self.counts.values())
        return annotated, recognized

    def to_dict(self):
        pa, pr = self.totals("present")
        aa, ar = self.totals("absent")
        return {
            "present_recall": self.present_recall,
            "absent_recall": self.absent_recall,
            "present": {"annotated": pa, "recognized": pr},
            "absent": {"annotated": aa, "recognized": ar},
            "per_report": {
                rid: {k: {"annotated": a, "recognized": r} for k, (a, r) in c.items()}
                for rid, c in sorted(self.counts.items())
            },
        }


def load_annotations(source: TextIO, name: Optional[str] = None) -> List[AnnotationRecord]:
    """Read JSON-lines ``{"id", "entities": [{"phrase", "presence"}]}`` records."""
    records = []
    for lineno, line in enumerate(source, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            rid = str(obj["id"])
            ents = tuple(
                (normalize_term(e["phrase"]), str(e["presence"]).lower()) for e in obj["entities"]
            )
            records.append(AnnotationRecord(rid, ents))
        except (ValueError, KeyError, TypeError) as exc:
            raise AnnotationError(f"bad annotation record: {exc}", line=lineno, source=name) from None
    return records


def _token_sets(entities: Iterable, negated: bool):
    out = []
    for e in entities:
        if isinstance(e, str):
            e = ClinicalEntity.from_phrase(e)
        if e.negated != negated:
            continue
        phrase = e.phrase[3:] if e.negated and e.phrase.startswith("no ") else e.phrase
        out.append(frozenset(phrase.split()))
    return out


def entity_recall(
    extracted: Mapping[str, Sequence], annotations: Sequence[AnnotationRecord]
) -> RecallReport:
    """Per-class recall of annotated entities.

    An annotated present entity is recognized when its tokens are a subset of
    the tokens of some non-negated extracted entity. An absent entity must
    instead be covered by a negated extracted entity, ignoring the "no "
    prefix. Recall is pooled over all reports.
    """
    missing = sorted({a.report_id for a in annotations} - set(extracted))
    if missing:
        raise KeyError(f"no extracted entities for report ids: {', '.join(missing)}")
    counts = {}
    for record in annotations:
        positive = _token_sets(extracted[record.report_id], negated=False)
        negative = _token_sets(extracted[record.report_id], negated=True)
        tally = {"present": [0, 0], "absent": [0, 0]}
        for phrase, presence in record.entities:
            tokens = frozenset(normalize_term(phrase).split())
            pool = positive if presence == "present" else negative
            tally[presence][0] += 1
            if any(tokens <= cand for cand in pool):
                tally[presence][1] += 1
        prev = counts.get(record.report_id)
        if prev is not None:
            for k in tally:
                tally[k] = [tally[k][0] + prev[k][0], tally[k][1] + prev[k][1]]
        counts[record.report_id] = {k: tuple(v) for k, v in tally.items()}

    def ratio(presence):
        annotated = sum(c[presence][0] for c in counts.values())
        recognized = sum(c[presence][1] for c in counts.values())
        return recognized / annotated if annotated else None

    return RecallReport(ratio("present"), ratio("absent"), counts)
