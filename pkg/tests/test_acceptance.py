"""Acceptance criteria 1-8, one PASS/FAIL line per criterion."""
import json
import random
import subprocess
import sys
import time
from pathlib import Path

import numpy as np

from conftest import (
    GOLDEN_ENTITIES,
    GOLDEN_NOISE,
    GOLDEN_TEXT,
    BLEU_PAIR_CANDIDATE,
    BLEU_PAIR_REFERENCE,
    read_jsonl,
)
from mcse.cli import main
from mcse.corpus import BleuOptions, score_pairs
from mcse.embeddings import EmbeddingStore
from mcse.extraction import extract
from mcse.harness.bleu import bleu, bleu_tokenize
from mcse.harness.recall import entity_recall, load_annotations
from mcse.harness.separation import evaluate_separation, load_labels, select_pairs
from mcse.lexicon import MedicalLexicon
from mcse.scorer import SimilarityMatrix, column_score, mcse, mcse_from_matrix
from oracles import hand_bleu, literal_mcse

ASSETS = Path(__import__("mcse").__file__).parent / "assets"
FIXTURES = Path(__file__).parent / "fixtures"


def verdict(capsys, n, ok, detail):
    with capsys.disabled():
        print(f"\n[criterion {n}] {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, detail


def test_criterion_1_worked_matrix(capsys, tmp_path):
    out_file = tmp_path / "matrix.json"
    start = time.perf_counter()
    code = main(["reproduce", "table2", "--format", "json", "--out", str(out_file)])
    elapsed = time.perf_counter() - start
    data = json.loads(out_file.read_text())
    cols = [c["s"] for c in data["columns"]]
    ok = (
        code == 0
        and all(abs(got - want) <= 0.001 for got, want in zip(cols, [0.548, 0.563, 0.545]))
        and len(cols) == 3
        and abs(data["mcse"] - 0.552) <= 0.002
        and elapsed < 1.0
    )
    detail = f"S={[round(c, 4) for c in cols]} MCSE={data['mcse']:.4f} in {elapsed:.3f}s"
    verdict(capsys, 1, ok, detail)


def test_criterion_2_golden_report(capsys, tmp_path):
    report = tmp_path / "golden_report.txt"
    report.write_text(GOLDEN_TEXT)
    out_file = tmp_path / "ents.json"
    start = time.perf_counter()
    code = main(["extract", "--input", str(report), "--out", str(out_file)])
    elapsed = time.perf_counter() - start
    phrases = [e["phrase"] for e in json.loads(out_file.read_text())]
    ok = (
        code == 0
        and len(phrases) == 8
        and set(phrases) == GOLDEN_ENTITIES
        and not set(phrases) & GOLDEN_NOISE
        and elapsed < 1.0
    )
    verdict(capsys, 2, ok, f"{len(phrases)} entities, noise-free, {elapsed:.3f}s")


def test_criterion_3_oracle_equivalence(capsys):
    rng = np.random.default_rng(2024)
    checked, worst = 0, 0.0
    while checked < 10_000:
        rows, cols = int(rng.integers(1, 6)), int(rng.integers(0, 6))
        values = rng.integers(0, 101, size=(rows, cols)) / 100
        for matched in range(0, 6):
            m = matched + cols
            if m == 0:
                continue
            got = mcse_from_matrix(values, matched, m)
            want = literal_mcse(values.tolist(), matched, m)
            worst = max(worst, abs(got - want))
            checked += 1
    verdict(capsys, 3, worst <= 1e-12, f"{checked} cases, max |diff| = {worst:.2e}")


def _random_case(rng, vocab):
    def phrases(k):
        return [" ".join(rng.choice(vocab, size=int(rng.integers(1, 4)))) for _ in range(k)]

    return phrases(int(rng.integers(0, 7))), phrases(int(rng.integers(0, 7)))


def test_criterion_4_invariants(capsys):
    rng = np.random.default_rng(11)
    vocab = [f"t{i}" for i in range(10)]
    runs = 1_000
    failures = {"range": 0, "identity": 0, "permutation": 0, "monotonicity": 0, "floor": 0}
    py = random.Random(5)
    for k in range(runs):
        store = EmbeddingStore.from_dict({t: rng.uniform(-1, 1, 6).round(2) for t in vocab + ["fresh"]})
        ref, cand = _random_case(rng, vocab)
        base = mcse(ref, cand, store).mcse
        failures["range"] += not 0.0 <= base <= 1.0
        if ref:
            failures["identity"] += mcse(ref, ref, store).mcse != 1.0
        r2, c2 = ref[:], cand[:]
        py.shuffle(r2)
        py.shuffle(c2)
        failures["permutation"] += mcse(r2, c2, store).mcse != base
        if base < 1.0:
            failures["monotonicity"] += not mcse(ref + ["fresh"], cand + ["fresh"], store).mcse > base
        column = rng.integers(1, 101, size=int(rng.integers(1, 9))) / 100
        s = column_score(SimilarityMatrix.from_values(column.reshape(-1, 1)), 0)
        failures["floor"] += not 0.5 <= s < 1.0
    ok = not any(failures.values())
    verdict(capsys, 4, ok, f"{runs} random cases per invariant, failures {failures}")


def test_criterion_5_separation(capsys, lexicon, matcher, store):
    with open(ASSETS / "synthetic_labels.csv", encoding="utf-8") as fh:
        records = load_labels(fh)
    reports = {r["id"]: r["text"] for r in read_jsonl(ASSETS / "synthetic_reports.jsonl")}
    groups, pairs = select_pairs(records)
    result = evaluate_separation(reports, (groups, pairs), lexicon, matcher, store)
    same = [p.mean_mcse for p in result.of_kind("same")]
    opposite = [p.mean_mcse for p in result.of_kind("opposite")]
    below = sum(v < 0.70 for v in opposite) / len(opposite)
    ok = len(groups) == 12 and np.mean(same) > np.mean(opposite) and min(same) > 0.70 and below >= 0.90
    detail = (
        f"{len(same)} groups (min {min(same):.3f}, mean {np.mean(same):.3f}), "
        f"{len(opposite)} opposite pairs (mean {np.mean(opposite):.3f}, {below:.1%} below 0.70)"
    )
    verdict(capsys, 5, ok, detail)


def test_criterion_6_recall(capsys, lexicon, matcher):
    reports = {r["id"]: r["text"] for r in read_jsonl(FIXTURES / "recall_reports.jsonl")}
    with open(FIXTURES / "recall_annotations.jsonl", encoding="utf-8") as fh:
        annotations = load_annotations(fh)
    extracted = {rid: extract(t, lexicon, matcher) for rid, t in reports.items()}
    result = entity_recall(extracted, annotations)
    ok = len(reports) == 10 and result.present_recall == 9 / 12 and result.absent_recall == 8 / 10
    verdict(capsys, 6, ok, f"present {result.totals('present')[::-1]} absent {result.totals('absent')[::-1]}")


def test_criterion_7_bleu(capsys):
    ident = bleu_tokenize(BLEU_PAIR_CANDIDATE)
    identity = bleu(ident, ident) == 1.0
    proc = subprocess.run(
        [sys.executable, "-m", "mcse", "score", "--ref-text", BLEU_PAIR_REFERENCE, "--cand-text", BLEU_PAIR_CANDIDATE,
         "--bleu-order", "4", "--bleu-smooth", "--bleu-epsilon", "0.1"],
        capture_output=True, text=True,
    )
    out = json.loads(proc.stdout)
    pair_ok = abs(out["bleu"] - 0.047) <= 0.03 and out["bleu_variant"]["smoothing"] == "epsilon"
    ref, cand = "no acute disease".split(), "no disease".split()
    hand_zero = bleu(ref, cand) == hand_bleu(ref, cand, 2) == 0.0
    ref, cand = "a b c d".split(), "a b c".split()
    hand_nonzero = bleu(ref, cand) == hand_bleu(ref, cand, 2)
    ok = identity and pair_ok and hand_zero and hand_nonzero
    verdict(capsys, 7, ok, f"identity {identity}, reference pair {out['bleu']:.4f} ({out['bleu_variant']}), hand examples {hand_zero and hand_nonzero}")


def _throughput_assets(lexicon):
    rng = np.random.default_rng(99)
    letters = np.array(list("abcdefghijklmnopqrstuvwxyz"))

    def word():
        return "".join(rng.choice(letters, size=int(rng.integers(5, 10))))

    entries = [(e.surface, e.category) for e in lexicon.entries]
    seen = {s for s, _ in entries}
    while len(entries) < 50_000:
        surface = " ".join(word() for _ in range(int(rng.integers(1, 4))))
        if surface not in seen:
            seen.add(surface)
            entries.append((surface, "disease" if rng.random() < 0.6 else "chemical"))
    big_lexicon = MedicalLexicon.from_entries(entries)

    vocab = sorted({tok for s in seen for tok in s.split()})
    while len(vocab) < 100_000:
        vocab.append(word() + str(len(vocab)))
    store = EmbeddingStore(vocab[:100_000], rng.standard_normal((100_000, 100)))
    return big_lexicon, store


def test_criterion_8_throughput(capsys, lexicon):
    big_lexicon, store = _throughput_assets(lexicon)
    texts = [r["text"] for r in read_jsonl(ASSETS / "synthetic_reports.jsonl")]
    rnd = random.Random(8)

    def report():
        parts = []
        while sum(len(p.split()) for p in parts) < 60:
            parts.append(rnd.choice(texts))
        return " ".join(parts)

    pairs = [(f"p{i:04d}", report(), report()) for i in range(1_000)]
    avg_tokens = np.mean([len(r.split()) for _, r, _ in pairs])
    options = BleuOptions()
    start = time.perf_counter()
    serial = score_pairs(pairs, big_lexicon, store, bleu_options=options, n_jobs=1)
    elapsed = time.perf_counter() - start
    parallel = score_pairs(pairs, big_lexicon, store, bleu_options=options, n_jobs=2)

    def dump(results):
        return json.dumps([r.to_dict() for r in results], sort_keys=True).encode()

    identical = dump(serial) == dump(parallel)
    ok = elapsed < 10.0 and identical and len(big_lexicon) >= 50_000 and len(store) == 100_000
    detail = (
        f"1000 pairs (avg {avg_tokens:.0f} tokens), {len(big_lexicon)}-term lexicon, "
        f"{len(store)}-token table: {elapsed:.2f}s single-threaded, parallel output identical {identical}"
    )
    verdict(capsys, 8, ok, detail)
