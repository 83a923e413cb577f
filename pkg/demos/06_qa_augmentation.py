"""
Augmenting QA samples with generated influences
===============================================

Each cause-effect question triggers exactly four 1-hop generations: what the
cause helps, what it hurts, what helps the effect, and what hurts it. The
generations join into an auxiliary input sequence written next to the plain
one, plus a sidecar with the two loss weights a downstream trainer needs.
"""

import json
import tempfile
from pathlib import Path

from eigenkit import (
    Passage,
    QASample,
    ScriptedGenerator,
    TrainerConfig,
    augment_queries,
    augment_sample,
    emit_training_files,
    score_predictions,
)

passage = Passage(
    "sunlight-1",
    (
        "A plant sits on a sunny windowsill.",
        "Light falls on its leaves through the day.",
    ),
)
sample = QASample(
    "q-1",
    passage,
    cause_event="more sunlight",
    effect_event="plants grow taller",
    label="helps",
    hop_count=1,
    question_type="in-para",
)

# The four queries, in their fixed order.
for query in augment_queries(sample):
    print(query)

# Answer them with a scripted generator and assemble both sequences.
q1, q2, q3, q4 = augment_queries(sample)
generator = ScriptedGenerator({
    q1: "plants trap sunlight",
    q2: "less shade on the ground",
    q3: "more photosynthesis",
    q4: "cloudy skies",
})
augmented = augment_sample(sample, generator)
print()
print("primary:  ", augmented.primary_sequence)
print("augmented:", augmented.augmented_sequence)

# Training files: one record per question plus the loss-weight sidecar.
out_dir = Path(tempfile.mkdtemp())
train_path, config_path = emit_training_files([augmented], TrainerConfig(), out_dir)
print()
print(train_path.name, "->", json.loads(train_path.read_text())["question_id"])
print(config_path.name, "->", config_path.read_text().strip())

# Accuracy scoring with hop and question-type breakdowns.
gold = [
    QASample("t1", passage, "a", "b", "helps", 1, "in-para"),
    QASample("t2", passage, "a", "b", "hurts", 2, "in-para"),
    QASample("t3", passage, "a", "b", "no_effect", 1, "out-of-para"),
    QASample("t4", passage, "a", "b", "helps", 3, "exogenous"),
]
report = score_predictions({"t1": "helps", "t2": "helps", "t3": "no_effect", "t4": "helps"}, gold)
print()
print(report.render_text())
