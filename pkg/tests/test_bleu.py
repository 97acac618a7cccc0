import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import BLEU_PAIR_CANDIDATE, BLEU_PAIR_REFERENCE
from mcse.harness.bleu import bleu, bleu_tokenize, bleu_variant, brevity_penalty, modified_precision
from oracles import hand_bleu


def test_tokenize_keeps_punctuation():
    assert bleu_tokenize("Edema, likely.") == ["edema", ",", "likely", "."]


def test_identity():
    toks = bleu_tokenize(BLEU_PAIR_CANDIDATE)
    assert bleu(toks, toks) == 1.0
    assert bleu(toks, toks, max_n=4) == 1.0


def test_no_bigram_overlap():
    assert bleu("no acute disease".split(), "no disease".split()) == 0.0


def test_clipping():
    assert modified_precision(["the", "cat"], ["the", "the", "the"], 1) == (1, 3)


def test_brevity_penalty():
    assert brevity_penalty(3, 3) == 1.0
    assert brevity_penalty(4, 2) == pytest.approx(0.36787944117144233)
    assert brevity_penalty(4, 0) == 0.0


def test_empty_candidate():
    assert bleu(["a"], []) == 0.0


def test_bad_order():
    with pytest.raises(ValueError):
        bleu(["a"], ["a"], max_n=0)


@pytest.mark.parametrize("max_n, smooth, eps", [(2, False, None), (4, True, 0.1), (2, True, 0.1)])
def test_reference_pair_matches_hand_computation(max_n, smooth, eps):
    ref, cand = bleu_tokenize(BLEU_PAIR_REFERENCE), bleu_tokenize(BLEU_PAIR_CANDIDATE)
    got = bleu(ref, cand, max_n=max_n, smooth=smooth, epsilon=eps or 1e-9)
    assert got == pytest.approx(hand_bleu(ref, cand, max_n, eps), abs=1e-12)


def test_reference_pair_reported_variant():
    ref, cand = bleu_tokenize(BLEU_PAIR_REFERENCE), bleu_tokenize(BLEU_PAIR_CANDIDATE)
    assert bleu(ref, cand, max_n=4, smooth=True, epsilon=0.1) == pytest.approx(0.047, abs=0.003)


def test_variant_metadata():
    assert bleu_variant(4, True, 0.1)["smoothing"] == "epsilon"
    assert bleu_variant()["epsilon"] is None


words = st.lists(st.sampled_from("abcde"), min_size=1, max_size=10)


@settings(max_examples=300, deadline=None)
@given(words, words, st.integers(1, 4))
def test_against_oracle(ref, cand, n):
    assert bleu(ref, cand, max_n=n) == pytest.approx(hand_bleu(ref, cand, n), abs=1e-12)
    assert 0.0 <= bleu(ref, cand, max_n=n, smooth=True, epsilon=0.1) <= 1.0
