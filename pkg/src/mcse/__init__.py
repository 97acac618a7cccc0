"""Medical corpus similarity evaluation (MCSE) for clinical report text."""
from mcse.embeddings import EmbeddingStore, load_embeddings, read_embeddings, similarity
from mcse.estimators import ClinicalEntityExtractor, MCSEScorer
from mcse.extraction import ClinicalEntity, extract
from mcse.lexicon import MedicalLexicon, compile_matcher, load_lexicon, read_lexicon
from mcse.scorer import ScoreReport, mcse, mcse_from_matrix

__version__ = "0.1.0"

__all__ = [
    "ClinicalEntity",
    "ClinicalEntityExtractor",
    "EmbeddingStore",
    "MCSEScorer",
    "MedicalLexicon",
    "ScoreReport",
    "compile_matcher",
    "extract",
    "load_embeddings",
    "load_lexicon",
    "mcse",
    "mcse_from_matrix",
    "read_embeddings",
    "read_lexicon",
    "similarity",
]
