"""Generate the bundled demo embedding table (assets/demo_embeddings.txt).

The vectors are synthetic but structured: every medical token shares a
common domain direction, tokens of one topic share a topic centroid, and
each token adds its own noise. General English words get noise only. The
output is deterministic for a fixed seed.

    python tools/build_demo_embeddings.py [--dim 50] [--seed 13]
"""
import argparse
import json
import re
from pathlib import Path

import numpy as np

ASSETS = Path(__file__).resolve().parents[1] / "src" / "mcse" / "assets"

TOPICS = {
    "pleural": "pleural effusion effusions empyema hemothorax thickening plaques costophrenic angle angles blunting "
               "fissure loculated layering parapneumonic hydropneumothorax pleura",
    "airspace": "pneumonia consolidation consolidations infiltrate infiltrates opacity opacities opacification airspace "
                "pneumonitis aspiration bronchopneumonia infection inflammation infectious bronchograms air disease",
    "atelectasis": "atelectasis collapse volume volumes loss subsegmental compressive linear plate lobe lobes lingula "
                   "low",
    "cardiac": "cardiomegaly edema congestion vascular redistribution overload fluid heart failure cardiac "
               "enlargement cardiomediastinal venous hypertension silhouette interstitial enlarged size",
    "air_leak": "pneumothorax pneumomediastinum pneumoperitoneum emphysema subcutaneous bullae hyperinflation copd "
                "hyperinflated",
    "neoplasm": "nodule nodules mass masses lesion tumor malignancy metastases metastatic granuloma granulomas "
                "calcified calcification adenopathy lymphadenopathy hilar sarcoidosis spiculated hilum hila",
    "bone": "fracture fractures rib ribs spine scoliosis kyphosis osseous demineralized healed clavicle displaced "
            "nondisplaced sternotomy vertebral",
    "device": "tube line catheter pacemaker wires clips leads port stent defibrillator endotracheal nasogastric "
              "tracheostomy picc central swan ganz jugular svc carina stomach",
    "chronic": "fibrosis scarring bronchiectasis tuberculosis abnormality abnormalities chronic old",
    "mediastinum": "mediastinal mediastinum widening widened aorta aortic arch trachea tortuous contours",
    "chemical": "amiodarone barium contrast heparin iodine methotrexate oxygen warfarin talc asbestos nitrofurantoin "
                "material",
    "severity": "mild moderate severe small large tiny trace minimal massive moderately extensive minor bulky "
                "overt",
    "location": "left right bilateral basilar bibasilar upper lower middle apical apex apices perihilar retrocardiac zone "
                "base bases posterior anterior lateral medial",
    "course": "stable new likely probable possible persistent worsening improving resolving recurrent acute early "
              "superimposed unchanged increased decreased interval",
    "pattern": "patchy focal diffuse diffusely multifocal hazy streaky dense triangular scattered innumerable multiple "
               "ill defined atypical",
    "negation": "no without not free absence negative clear denies",
}

GENERAL_MEDICAL = ("pulmonary lung lungs chest thorax findings finding evidence process cardiopulmonary radiograph "
                   "ct mri ultrasound examination study film prior comparison position tip terminates courses "
                   "placement diaphragm hemidiaphragm soft tissues bronchi ventricle junction")

GENERAL = """
a an the of in on at to for with and or but however although though except which that this these those there is are
was were be been being has have had it its as by from into than then also could would should may might can will
suggest suggesting suggests consistent compatible concerning seen noted demonstrated identified present remain remains
again otherwise seen better given context clinical correlation suggested regarding any possibility recurrence
considered associated less more most probably likely given waxing waning presentation clearance measuring measures
cm mm again persists over beyond above below within about both each other one two three four five six
appearance appear appears similar standard place expected positions position normal top due reflect reflects
concern concerning compared since now still further additional area areas region regions side sides portion
course edge off lead projects greater remainder examination recent better demonstrated
"""


def _tokens(text):
    return [t for t in re.findall(r"[a-z0-9]+", text.lower())]


def vocabulary():
    vocab = set(_tokens(GENERAL)) | set(_tokens(GENERAL_MEDICAL))
    for words in TOPICS.values():
        vocab |= set(_tokens(words))
    for line in (ASSETS / "demo_lexicon.tsv").read_text(encoding="utf-8").splitlines():
        if line and not line.startswith("#") and "\t" in line:
            vocab |= set(_tokens(line.split("\t")[0]))
    for path in ASSETS.glob("*.txt"):
        if path.name != "demo_embeddings.txt":
            vocab |= set(_tokens(path.read_text(encoding="utf-8")))
    for path in ASSETS.glob("*.jsonl"):
        for line in path.read_text(encoding="utf-8").splitlines():
            if line.strip():
                vocab |= set(_tokens(json.loads(line).get("text", "")))
    return sorted(vocab)


def build(dim=50, seed=13):
    rng = np.random.default_rng(seed)

    def unit():
        v = rng.standard_normal(dim)
        return v / np.linalg.norm(v)

    domain = unit()
    centroids = {name: unit() for name in TOPICS}
    topic_of = {}
    for name, words in TOPICS.items():
        for tok in _tokens(words):
            topic_of.setdefault(tok, name)
    medical = set(topic_of) | set(_tokens(GENERAL_MEDICAL))

    table = {}
    for tok in vocabulary():
        noise = unit()
        if tok in topic_of:
            vec = 0.45 * domain + 0.75 * centroids[topic_of[tok]] + 0.45 * noise
        elif tok in medical:
            vec = 0.55 * domain + 0.8 * noise
        else:
            vec = noise
        table[tok] = vec
    return table


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dim", type=int, default=50)
    parser.add_argument("--seed", type=int, default=13)
    parser.add_argument("--out", type=Path, default=ASSETS / "demo_embeddings.txt")
    args = parser.parse_args()
    table = build(args.dim, args.seed)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(f"{len(table)} {args.dim}\n")
        for tok, vec in table.items():
            fh.write(tok + " " + " ".join(f"{x:.5f}" for x in vec) + "\n")
    print(f"wrote {len(table)} vectors of dimension {args.dim} to {args.out}")


if __name__ == "__main__":
    main()
