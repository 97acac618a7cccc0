"""scikit-learn compatible wrappers.

``ClinicalEntityExtractor`` is a stateless transformer from report texts to
entity lists. ``MCSEScorer`` scores candidate reports against references and
follows the ``score(X, y)`` convention: ``X`` holds candidates, ``y`` references.
"""
from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from mcse.corpus import BleuOptions, score_pairs
from mcse.embeddings import EmbeddingStore, read_embeddings
from mcse.extraction import MODIFIER_WINDOW, NEGATION_WINDOW, extract
from mcse.lexicon import MedicalLexicon, compile_matcher, read_lexicon
from mcse.scorer import mcse
from mcse.validation import check_n_jobs, check_pairs, check_positive_int, check_texts

_OUTPUTS = ("entities", "phrases", "dicts")


def _resolve_lexicon(lexicon):
    if lexicon is None or isinstance(lexicon, (str, Path)):
        return read_lexicon(lexicon)
    if isinstance(lexicon, MedicalLexicon):
        return lexicon
    raise TypeError(f"lexicon must be a path, a MedicalLexicon or None, got {type(lexicon).__name__}")


def _resolve_embeddings(embeddings):
    if embeddings is None or isinstance(embeddings, (str, Path)):
        return read_embeddings(embeddings)
    if isinstance(embeddings, EmbeddingStore):
        return embeddings
    raise TypeError(
        f"embeddings must be a path, an EmbeddingStore or None, got {type(embeddings).__name__}"
    )


class ClinicalEntityExtractor(TransformerMixin, BaseEstimator):
    """Extract clinical entities from each report.

    Parameters
    ----------
    lexicon : path, MedicalLexicon or None
        ``None`` uses the bundled demo lexicon.
    modifier_window : int
        Longest modifier run, in tokens, attached in front of an entity.
    negation_window : int
        Maximum token distance between a negation trigger and the entity.
    output : {"entities", "phrases", "dicts"}
        Element type of each returned list.

    Examples
    --------
    >>> ClinicalEntityExtractor(output="phrases").fit_transform(["No pneumothorax."])
    [['no pneumothorax']]
    """

    def __init__(self, lexicon=None, modifier_window=MODIFIER_WINDOW, negation_window=NEGATION_WINDOW, output="entities"):
        self.lexicon = lexicon
        self.modifier_window = modifier_window
        self.negation_window = negation_window
        self.output = output

    def fit(self, X=None, y=None):
        check_positive_int(self.modifier_window, "modifier_window", minimum=0)
        check_positive_int(self.negation_window, "negation_window", minimum=0)
        if self.output not in _OUTPUTS:
            raise ValueError(f"output must be one of {_OUTPUTS}, got {self.output!r}")
        self.lexicon_ = _resolve_lexicon(self.lexicon)
        self.matcher_ = compile_matcher(self.lexicon_)
        return self

    def transform(self, X):
        check_is_fitted(self, "matcher_")
        out = []
        for text in check_texts(X):
            ents = extract(text, self.lexicon_, self.matcher_, self.modifier_window, self.negation_window)
            if self.output == "phrases":
                ents = [e.phrase for e in ents]
            elif self.output == "dicts":
                ents = [e.to_dict() for e in ents]
            out.append(ents)
        return out

    def __sklearn_tags__(self):
        tags = super().__sklearn_tags__()
        tags.input_tags.string = True
        tags.input_tags.two_d_array = False
        tags.requires_fit = True
        return tags


class MCSEScorer(BaseEstimator):
    """Semantic similarity between candidate and reference reports.

    Parameters
    ----------
    lexicon : path, MedicalLexicon or None
        ``None`` uses the bundled demo lexicon.
    embeddings : path, EmbeddingStore or None
        ``None`` uses the bundled demo embedding table.
    n_jobs : int or None
        Worker processes for batch scoring; ``-1`` uses all CPUs.
    """

    def __init__(self, lexicon=None, embeddings=None, n_jobs=None):
        self.lexicon = lexicon
        self.embeddings = embeddings
        self.n_jobs = n_jobs

    def fit(self, X=None, y=None):
        check_n_jobs(self.n_jobs)
        self.lexicon_ = _resolve_lexicon(self.lexicon)
        self.matcher_ = compile_matcher(self.lexicon_)
        self.store_ = _resolve_embeddings(self.embeddings)
        return self

    def score_entities(self, reference, candidate):
        """:class:`~mcse.scorer.ScoreReport` for two already-extracted entity lists."""
        check_is_fitted(self, "store_")
        return mcse(reference, candidate, self.store_)

    def reports(self, X, y=None):
        """Full per-pair results (entities, score report, BLEU) for report pairs."""
        check_is_fitted(self, "store_")
        pairs = check_pairs(X, y)
        return score_pairs(
            ((None, r, c) for r, c in pairs),
            self.lexicon_,
            self.store_,
            matcher=self.matcher_,
            bleu_options=BleuOptions(),
            n_jobs=check_n_jobs(self.n_jobs),
        )

    def score_samples(self, X, y=None):
        """MCSE per pair as a 1-D array.

        ``X`` is a sequence of ``(reference, candidate)`` pairs, or candidates
        when references are passed as ``y``.
        """
        return np.array([r.report.mcse for r in self.reports(X, y)], dtype=np.float64)

    def score(self, X, y):
        """Mean MCSE of candidates ``X`` against references ``y``."""
        scores = self.score_samples(X, y)
        return float(scores.mean()) if scores.size else float("nan")
