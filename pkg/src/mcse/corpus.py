"""Batch scoring of report pairs, optionally across worker processes.

Results always come back in input order, so output does not depend on the
number of workers.
"""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from statistics import fmean
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from mcse.embeddings import EmbeddingStore
from mcse.extraction import ClinicalEntity, extract
from mcse.harness.bleu import DEFAULT_EPSILON, bleu, bleu_tokenize, bleu_variant
from mcse.lexicon import EntityMatcher, MedicalLexicon, compile_matcher
from mcse.scorer import ScoreReport, mcse


@dataclass(frozen=True)
class BleuOptions:
    max_n: int = 2
    smooth: bool = False
    epsilon: float = DEFAULT_EPSILON

    def variant(self):
        return bleu_variant(self.max_n, self.smooth, self.epsilon)


@dataclass
class PairResult:
    pair_id: Optional[str]
    report: ScoreReport
    bleu: float
    reference_entities: List[ClinicalEntity]
    candidate_entities: List[ClinicalEntity]

    def to_dict(self):
        out = {} if self.pair_id is None else {"id": self.pair_id}
        out.update(self.report.to_dict())
        out["bleu"] = self.bleu
        return out


def score_pair(
    reference: str,
    candidate: str,
    lexicon: MedicalLexicon,
    matcher: EntityMatcher,
    store: EmbeddingStore,
    bleu_options: BleuOptions = BleuOptions(),
    pair_id: Optional[str] = None,
) -> PairResult:
    ref_ents = extract(reference, lexicon, matcher)
    cand_ents = extract(candidate, lexicon, matcher)
    report = mcse(ref_ents, cand_ents, store)
    b = bleu(
        bleu_tokenize(reference),
        bleu_tokenize(candidate),
        max_n=bleu_options.max_n,
        smooth=bleu_options.smooth,
        epsilon=bleu_options.epsilon,
    )
    return PairResult(pair_id, report, b, ref_ents, cand_ents)


_WORKER: Dict[str, object] = {}


def _init_worker(lexicon, store, bleu_options):
    _WORKER["lexicon"] = lexicon
    _WORKER["matcher"] = compile_matcher(lexicon)
    _WORKER["store"] = store
    _WORKER["bleu"] = bleu_options


def _score_in_worker(item):
    pair_id, ref, cand = item
    return score_pair(
        ref, cand, _WORKER["lexicon"], _WORKER["matcher"], _WORKER["store"], _WORKER["bleu"], pair_id
    )


def score_pairs(
    pairs: Iterable[Tuple[Optional[str], str, str]],
    lexicon: MedicalLexicon,
    store: EmbeddingStore,
    matcher: Optional[EntityMatcher] = None,
    bleu_options: BleuOptions = BleuOptions(),
    n_jobs: Optional[int] = 1,
) -> List[PairResult]:
    """Score ``(pair_id, reference_text, candidate_text)`` triples in order."""
    items = list(pairs)
    n_jobs = 1 if n_jobs is None else n_jobs
    if n_jobs <= 1 or len(items) < 2:
        matcher = matcher or compile_matcher(lexicon)
        return [score_pair(r, c, lexicon, matcher, store, bleu_options, pid) for pid, r, c in items]
    chunksize = max(1, len(items) // (n_jobs * 4))
    with ProcessPoolExecutor(
        max_workers=n_jobs, initializer=_init_worker, initargs=(lexicon, store, bleu_options)
    ) as pool:
        return list(pool.map(_score_in_worker, items, chunksize=chunksize))


def summarize(results: Sequence[PairResult]) -> Dict[str, object]:
    return {
        "n_pairs": len(results),
        "mean_mcse": fmean(r.report.mcse for r in results) if results else None,
        "mean_bleu": fmean(r.bleu for r in results) if results else None,
    }
