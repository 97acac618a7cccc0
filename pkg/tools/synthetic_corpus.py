"""Source of the bundled synthetic label corpus (assets/synthetic_labels.csv, synthetic_reports.jsonl).

Twelve label groups, three reports each. Reports within a group describe the
same findings with small wording changes; groups differ in their findings.
Run this file to regenerate the two asset files.
"""
import csv
import json
from pathlib import Path

LABELS = [
    "Atelectasis", "Cardiomegaly", "Consolidation", "Edema", "Enlarged Cardiomediastinum",
    "Fracture", "Lung Lesion", "Lung Opacity", "No Finding", "Pleural Effusion",
    "Pleural Other", "Pneumonia", "Pneumothorax", "Support Devices",
]

GROUPS = [
    ({"Pleural Effusion": 1}, [
        "Moderate left pleural effusion is new. No pneumothorax. Heart size is normal.",
        "There is a moderate left pleural effusion. There is no pneumothorax. The cardiac silhouette is normal.",
        "Moderate left pleural effusion with blunting of the costophrenic angle. No pneumothorax is seen.",
    ]),
    ({"Pneumonia": 1, "Consolidation": 1}, [
        "Focal consolidation in the right lower lobe concerning for pneumonia. Air bronchograms are present.",
        "Right lower lobe focal consolidation with air bronchograms, compatible with pneumonia.",
        "New focal consolidation at the right base consistent with pneumonia. Air bronchograms.",
    ]),
    ({"Cardiomegaly": 1, "Edema": 1}, [
        "Moderate cardiomegaly. Mild pulmonary edema with vascular congestion.",
        "The heart is enlarged with moderate cardiomegaly. There is mild pulmonary edema and vascular congestion.",
        "Moderate cardiomegaly and mild pulmonary edema. Vascular congestion is noted.",
    ]),
    ({"Pneumothorax": 1}, [
        "Small right apical pneumothorax. Lungs otherwise clear.",
        "There is a small right apical pneumothorax. Subcutaneous emphysema in the chest wall.",
        "Small right apical pneumothorax is again seen. Subcutaneous emphysema.",
    ]),
    ({"Atelectasis": 1}, [
        "Bibasilar subsegmental atelectasis. Low lung volumes.",
        "Low lung volumes with bibasilar subsegmental atelectasis.",
        "Bibasilar subsegmental atelectasis, unchanged. Linear atelectasis at the left base.",
    ]),
    ({"Support Devices": 1, "Pneumothorax": 0}, [
        "Endotracheal tube terminates 4 cm above the carina. Nasogastric tube in the stomach. No pneumothorax.",
        "The endotracheal tube is in standard position. A nasogastric tube courses below the diaphragm. There is no pneumothorax.",
        "Right internal jugular central line tip in the SVC. Endotracheal tube in place. No pneumothorax.",
    ]),
    ({"No Finding": 1}, [
        "The lungs are clear. No focal consolidation, pleural effusion or pneumothorax. Heart size is normal.",
        "No focal consolidation, pleural effusion, or pneumothorax. The cardiomediastinal silhouette is normal.",
        "Clear lungs. There is no focal consolidation, pleural effusion or pneumothorax.",
    ]),
    ({"Lung Lesion": 1, "Lung Opacity": 1}, [
        "A 2 cm spiculated pulmonary nodule in the left upper lobe. Hilar lymphadenopathy.",
        "Spiculated pulmonary nodule measuring 2 cm in the left upper lobe with hilar lymphadenopathy.",
        "Left upper lobe spiculated pulmonary nodule is again seen. Hilar lymphadenopathy persists.",
    ]),
    ({"Fracture": 1}, [
        "Acute displaced fractures of the left posterior ribs. Old healed fracture of the clavicle.",
        "There are acute displaced fractures of the left posterior ribs. Old healed fracture of the right clavicle.",
        "Acute displaced fractures of left posterior ribs are seen. Old healed fracture.",
    ]),
    ({"Edema": 1, "Pleural Effusion": 1, "Cardiomegaly": 1}, [
        "Severe cardiomegaly. Moderate interstitial edema. Small bilateral pleural effusions.",
        "Severe cardiomegaly with moderate interstitial edema and small bilateral pleural effusions.",
        "There is severe cardiomegaly, moderate interstitial edema, and small bilateral pleural effusions.",
    ]),
    ({"Enlarged Cardiomediastinum": 1, "Pleural Other": 1}, [
        "Mediastinal widening is new. Right apical pleural thickening.",
        "New mediastinal widening. Right apical pleural thickening is stable.",
        "There is mediastinal widening. Right apical pleural thickening is again noted.",
    ]),
    ({"Pneumonia": 1, "Pleural Effusion": 1, "Atelectasis": -1}, [
        "Left lower lobe pneumonia with a small parapneumonic effusion. Possible atelectasis.",
        "Left lower lobe pneumonia and small parapneumonic effusion. Possible atelectasis.",
        "Pneumonia in the left lower lobe with small parapneumonic effusion, possible atelectasis.",
    ]),
]


def records():
    for g, (labels, texts) in enumerate(GROUPS, start=1):
        for k, text in enumerate(texts, start=1):
            yield f"g{g:02d}_r{k}", labels, text


def main(out_dir=Path(__file__).resolve().parents[1] / "src" / "mcse" / "assets"):
    with open(out_dir / "synthetic_labels.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id"] + LABELS)
        for rid, labels, _ in records():
            writer.writerow([rid] + ["" if labels.get(n) is None else str(labels[n]) for n in LABELS])
    with open(out_dir / "synthetic_reports.jsonl", "w", encoding="utf-8") as fh:
        for rid, _, text in records():
            fh.write(json.dumps({"id": rid, "text": text}) + "\n")


if __name__ == "__main__":
    main()
