"""
Scoring generated influences
============================

Four automatic metrics, all on a 0-100 scale: BLEU-1..4, ROUGE-L, a
simplified exact-match METEOR, and polarity agreement (does the generation
push the same direction as the reference, per a fixed 22-word lexicon).
"""

from eigenkit import (
    Hop,
    RelationKind,
    bleu,
    evaluate_corpus,
    meteor_simple,
    polarity_of,
    report_text,
    rouge_l,
)

# Sentence-level metric examples.
print("BLEU-1 ", round(bleu("more plants grow", ["more plants"], 1), 2))
print("ROUGE-L", round(rouge_l("more rabbits", "more babies"), 2))
print("METEOR ", round(meteor_simple("more rain", "more snow"), 2))

# Identical strings score a clean 100 on BLEU and ROUGE.
print("identity BLEU", bleu("plants grow taller", ["plants grow taller"]))

# Polarity looks at the first direction word it can find.
print(polarity_of("more oil is refined"))      # increasing
print(polarity_of("less water in the soil"))   # decreasing
print(polarity_of("there is not oil refined")) # neutral: no lexicon word

# A corpus report with per-(relation, hop) breakdown cells.
samples = [
    ("more plants grow", "more plants", RelationKind.HELPS, Hop(1)),
    ("more rain", "more snow", RelationKind.HELPS, Hop(1)),
    ("more rabbits", "more babies", RelationKind.HURTS, Hop(2)),
    ("less light", "less light", RelationKind.HURTS, Hop(2)),
]
print()
print(report_text(evaluate_corpus(samples)))
