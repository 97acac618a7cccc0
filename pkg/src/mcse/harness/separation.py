"""Label-sequence separation check.

Reports with identical CheXpert label vectors should score high against
each other. Reports whose positive findings do not overlap should score low.
"""
import csv
import io
import itertools
import logging
from dataclasses import dataclass, field
from statistics import fmean
from typing import Dict, List, Mapping, Optional, Sequence, TextIO, Tuple

from mcse.embeddings import EmbeddingStore
from mcse.exceptions import LabelFormatError
from mcse.extraction import extract
from mcse.lexicon import EntityMatcher, MedicalLexicon
from mcse.scorer import mcse

logger = logging.getLogger(__name__)

LABEL_NAMES = (
    "Atelectasis",
    "Cardiomegaly",
    "Consolidation",
    "Edema",
    "Enlarged Cardiomediastinum",
    "Fracture",
    "Lung Lesion",
    "Lung Opacity",
    "No Finding",
    "Pleural Effusion",
    "Pleural Other",
    "Pneumonia",
    "Pneumothorax",
    "Support Devices",
)

PRESENT, ABSENT, AMBIGUOUS = 1, 0, -1
DEFAULT_THRESHOLD = 0.70

_CELL_VALUES = {"": None, "1": 1, "1.0": 1, "0": 0, "0.0": 0, "-1": -1, "-1.0": -1}


@dataclass(frozen=True)
class LabelVector:
    """Fourteen CheXpert slots in ``LABEL_NAMES`` order; ``None`` is blank."""

    values: Tuple[Optional[int], ...]

    def __post_init__(self):
        if len(self.values) != len(LABEL_NAMES):
            raise ValueError(f"expected {len(LABEL_NAMES)} label values, got {len(self.values)}")
        for v in self.values:
            if v not in (None, PRESENT, ABSENT, AMBIGUOUS):
                raise ValueError(f"invalid label value {v!r}")

    @classmethod
    def from_mapping(cls, labels: Mapping[str, Optional[int]]) -> "LabelVector":
        unknown = set(labels) - set(LABEL_NAMES)
        if unknown:
            raise KeyError(f"unknown labels: {sorted(unknown)}")
        return cls(tuple(labels.get(name) for name in LABEL_NAMES))

    def __getitem__(self, name: str) -> Optional[int]:
        return self.values[LABEL_NAMES.index(name)]

    @property
    def present(self) -> frozenset:
        return frozenset(n for n, v in zip(LABEL_NAMES, self.values) if v == PRESENT)

    def sort_key(self):
        return tuple(-9 if v is None else v for v in self.values)


def load_labels(source: TextIO, name: Optional[str] = None) -> List[Tuple[str, LabelVector]]:
    """Read a label CSV: an ``id`` column followed by the 14 label columns.

    Cells may be ``1``, ``0``, ``-1`` or empty. Unknown columns are ignored
    with a warning.
    """
    reader = csv.reader(source)
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise LabelFormatError("label file is empty", source=name) from None
    if not header or header[0].lower() != "id":
        raise LabelFormatError("first column must be 'id'", line=1, source=name)
    missing = [n for n in LABEL_NAMES if n not in header]
    if missing:
        raise LabelFormatError(f"missing label columns: {', '.join(missing)}", line=1, source=name)
    extra = [h for h in header[1:] if h not in LABEL_NAMES]
    if extra:
        logger.warning("ignoring unknown label columns: %s", ", ".join(extra))
    positions = [header.index(n) for n in LABEL_NAMES]

    records = []
    for rowno, row in enumerate(reader, start=2):
        if not row or not any(c.strip() for c in row):
            continue
        if len(row) < len(header):
            row = row + [""] * (len(header) - len(row))
        values = []
        for label, pos in zip(LABEL_NAMES, positions):
            cell = row[pos].strip()
            if cell not in _CELL_VALUES:
                raise LabelFormatError(
                    f"invalid value {cell!r} in column {label!r}", line=rowno, source=name
                )
            values.append(_CELL_VALUES[cell])
        records.append((row[0].strip(), LabelVector(tuple(values))))
    return records


def select_pairs(
    records: Sequence[Tuple[str, LabelVector]],
) -> Tuple[List[Tuple[str, ...]], List[Tuple[str, str]]]:
    """Pick same-label groups and opposite-label pairs.

    Groups are sets of two or more reports with identical label vectors.
    Opposite pairs join an anchor report that has one or two present labels
    with any report that has at least one present label and no present label
    in common with the anchor. Output order is independent of input order.
    """
    ids = [rid for rid, _ in records]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate report ids in label records")
    by_vector: Dict[LabelVector, List[str]] = {}
    for rid, vec in records:
        by_vector.setdefault(vec, []).append(rid)
    groups = [
        tuple(sorted(members))
        for vec, members in sorted(by_vector.items(), key=lambda kv: kv[0].sort_key())
        if len(members) >= 2
    ]

    pairs = set()
    for a_id, a_vec in records:
        if not 1 <= len(a_vec.present) <= 2:
            continue
        for b_id, b_vec in records:
            if b_id == a_id or not b_vec.present or a_vec.present & b_vec.present:
                continue
            pairs.add(tuple(sorted((a_id, b_id))))
    return groups, sorted(pairs)


@dataclass(frozen=True)
class SeparationPoint:
    point_id: str
    kind: str  # "same" or "opposite"
    mean_mcse: float
    n_pairs: int


@dataclass
class SeparationReport:
    threshold: float
    points: List[SeparationPoint] = field(default_factory=list)

    def of_kind(self, kind):
        return [p for p in self.points if p.kind == kind]

    def count(self, kind, above):
        return sum(1 for p in self.of_kind(kind) if (p.mean_mcse > self.threshold) == above)

    def summary(self):
        out = {"threshold": self.threshold}
        for kind in ("same", "opposite"):
            pts = self.of_kind(kind)
            out[kind] = {
                "points": len(pts),
                "mean": fmean(p.mean_mcse for p in pts) if pts else None,
                "min": min((p.mean_mcse for p in pts), default=None),
                "max": max((p.mean_mcse for p in pts), default=None),
                "above": self.count(kind, True),
                "below": self.count(kind, False),
            }
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["point_id", "class", "mean_mcse", "n_pairs"])
        for p in self.points:
            writer.writerow([p.point_id, p.kind, repr(p.mean_mcse), p.n_pairs])
        return buf.getvalue()


def evaluate_separation(
    reports: Mapping[str, str],
    groups_and_pairs,
    lexicon: MedicalLexicon,
    matcher: Optional[EntityMatcher],
    store: EmbeddingStore,
    threshold: float = DEFAULT_THRESHOLD,
) -> SeparationReport:
    """Score same-label groups (all ordered pairs) and opposite pairs (both directions)."""
    if not 0.0 < threshold < 1.0:
        raise ValueError("threshold must lie strictly between 0 and 1")
    groups, pairs = groups_and_pairs
    needed = {rid for g in groups for rid in g} | {rid for p in pairs for rid in p}
    unknown = sorted(needed - set(reports))
    if unknown:
        raise KeyError(f"no report text for ids: {', '.join(unknown)}")
    entities = {rid: extract(reports[rid], lexicon, matcher) for rid in sorted(needed)}

    def score(ref_id, cand_id):
        return mcse(entities[ref_id], entities[cand_id], store).mcse

    report = SeparationReport(threshold)
    for k, group in enumerate(groups, start=1):
        scores = [score(a, b) for a, b in itertools.permutations(group, 2)]
        report.points.append(SeparationPoint(f"group{k:03d}", "same", fmean(scores), len(scores)))
    for a, b in pairs:
        scores = [score(a, b), score(b, a)]
        report.points.append(SeparationPoint(f"{a}|{b}", "opposite", fmean(scores), 2))
    return report
