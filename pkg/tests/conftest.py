import json
from pathlib import Path

import pytest

from mcse.embeddings import EmbeddingStore, read_embeddings
from mcse.lexicon import compile_matcher, read_lexicon

FIXTURES = Path(__file__).parent / "fixtures"
ASSETS = Path(__file__).resolve().parents[1] / "src" / "mcse" / "assets"

GOLDEN_TEXT = (ASSETS / "golden_report.txt").read_text(encoding="utf-8")
GOLDEN_ENTITIES = {
    "fluid overload",
    "inflammation",
    "aspiration pneumonitis",
    "minor atelectasis",
    "mild to moderate pulmonary edema",
    "left basilar consolidation",
    "patchy right basilar opacities",
    "interstitial abnormality",
}
# right-hand column of the golden comparison that must not leak through
GOLDEN_NOISE = {
    "interval", "clearance", "left basilar", "consolidation", "patchy", "right basilar", "opacities", "minor",
    "atelectasis", "clinical", "recurrent", "aspiration", "pneumonitis", "right lung base", "increased",
    "recurrence", "fluid", "overload", "associated with", "atypical", "infectious process", "waxing", "waning",
    "presentation",
}
WORKED_CANDIDATE = "Stable multiple bilateral pulmonary masses and right middle lobe collapse due to hilar adenopathy."
BLEU_PAIR_REFERENCE = "Pulmonary edema, cardiomegaly, likely pleural effusions."
BLEU_PAIR_CANDIDATE = "Moderately severe bilateral pulmonary edema with no large pleural effusion."


@pytest.fixture(scope="session")
def lexicon():
    return read_lexicon()


@pytest.fixture(scope="session")
def matcher(lexicon):
    return compile_matcher(lexicon)


@pytest.fixture(scope="session")
def store():
    return read_embeddings()


@pytest.fixture
def basis_store():
    return EmbeddingStore.from_dict({"a": [1, 0, 0], "b": [0, 1, 0], "c": [0, 0, 1]})


def read_jsonl(path):
    return [json.loads(line) for line in Path(path).read_text(encoding="utf-8").splitlines() if line.strip()]
