"""Automatic metrics for generated event influences.

Sentence-level BLEU (epsilon-smoothed), ROUGE-L, a simplified exact-match
METEOR, and a lexicon-based polarity agreement check, aggregated into corpus
reports with per-(relation, hop) breakdown cells. All scores live on a 0-100
scale.
"""

from __future__ import annotations

import math
import re
import string
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Optional, Sequence

from .errors import InputError
from .graph import Hop, RelationKind

_EPSILON = 1e-9


class EmptyInput(InputError):
    """An aggregate was requested over zero samples."""


class EmptyCandidate(InputError):
    """The candidate text tokenized to nothing."""


class EmptyReferences(InputError):
    """No usable reference text was supplied."""


# ---------------------------------------------------------------------------
# polarity
# ---------------------------------------------------------------------------


class Polarity(Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"
    NEUTRAL = "neutral"


@dataclass(frozen=True)
class PolarityLexicon:
    increasing: frozenset[str]
    decreasing: frozenset[str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "increasing", frozenset(self.increasing))
        object.__setattr__(self, "decreasing", frozenset(self.decreasing))
        overlap = self.increasing & self.decreasing
        if overlap:
            raise ValueError(f"lexicon classes overlap: {sorted(overlap)}")


DEFAULT_LEXICON = PolarityLexicon(
    increasing=frozenset(
        {
            "helps",
            "more",
            "higher",
            "increase",
            "increases",
            "stronger",
            "faster",
            "greater",
            "longer",
            "larger",
            "helping",
        }
    ),
    decreasing=frozenset(
        {
            "hurts",
            "less",
            "lower",
            "decrease",
            "decreases",
            "weaker",
            "slower",
            "smaller",
            "hurting",
            "softer",
            "fewer",
        }
    ),
)

_POLARITY_WORD = re.compile(r"[a-z0-9]+")


def polarity_of(text: str, lexicon: PolarityLexicon = DEFAULT_LEXICON) -> Polarity:
    """Class of the first lexicon word in the text; Neutral when none appears.

    Case and surrounding punctuation never matter.
    """
    for word in _POLARITY_WORD.findall(text.lower()):
        if word in lexicon.increasing:
            return Polarity.INCREASING
        if word in lexicon.decreasing:
            return Polarity.DECREASING
    return Polarity.NEUTRAL


def polarity_match_rate(
    pairs: Iterable[tuple[str, str]],
    lexicon: PolarityLexicon = DEFAULT_LEXICON,
) -> float:
    """Percentage of (candidate, reference) pairs whose polarity classes agree."""
    pairs = list(pairs)
    if not pairs:
        raise EmptyInput("no pairs to score")
    hits = sum(
        1 for candidate, reference in pairs if polarity_of(candidate, lexicon) is polarity_of(reference, lexicon)
    )
    return 100.0 * hits / len(pairs)


# ---------------------------------------------------------------------------
# overlap metrics
# ---------------------------------------------------------------------------


def _tokens(text: str) -> list[str]:
    out = []
    for raw in text.lower().split():
        token = raw.strip(string.punctuation)
        if token:
            out.append(token)
    return out


def _ngrams(tokens: Sequence[str], n: int) -> list[tuple[str, ...]]:
    return [tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1)]


def bleu(candidate: str, references: Sequence[str], max_n: int = 4) -> float:
    """Sentence BLEU: geometric mean of modified n-gram precisions times brevity.

    Zero match counts are floored at 1e-9 instead of zeroing the whole score.
    Orders longer than the candidate itself are left out of the mean, so an
    identical candidate and reference score exactly 100 at any length.
    """
    if not 1 <= max_n <= 4:
        raise ValueError(f"max_n must be in 1..4, got {max_n}")
    cand = _tokens(candidate)
    if not cand:
        raise EmptyCandidate("candidate tokenized to nothing")
    refs = [tokens for tokens in (_tokens(r) for r in references) if tokens]
    if not refs:
        raise EmptyReferences("no nonempty reference")

    log_sum = 0.0
    orders = 0
    for n in range(1, max_n + 1):
        cand_ngrams = _ngrams(cand, n)
        if not cand_ngrams:
            continue
        counts = Counter(cand_ngrams)
        ceiling: dict[tuple[str, ...], int] = {}
        for ref in refs:
            for ngram, count in Counter(_ngrams(ref, n)).items():
                if count > ceiling.get(ngram, 0):
                    ceiling[ngram] = count
        clipped = sum(min(count, ceiling.get(ngram, 0)) for ngram, count in counts.items())
        log_sum += math.log(max(clipped, _EPSILON) / len(cand_ngrams))
        orders += 1
    geometric = math.exp(log_sum / orders)

    cand_len = len(cand)
    ref_len = min((len(ref) for ref in refs), key=lambda length: (abs(length - cand_len), length))
    brevity = 1.0 if cand_len >= ref_len else math.exp(1 - ref_len / cand_len)
    return 100.0 * brevity * geometric


def _lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    previous = [0] * (len(b) + 1)
    for token in a:
        current = [0]
        for j, other in enumerate(b, start=1):
            if token == other:
                current.append(previous[j - 1] + 1)
            else:
                current.append(max(previous[j], current[j - 1]))
        previous = current
    return previous[-1]


def rouge_l(candidate: str, reference: str, *, beta: float = 1.2) -> float:
    """Longest-common-subsequence F-measure, recall-weighted by beta."""
    cand = _tokens(candidate)
    if not cand:
        raise EmptyCandidate("candidate tokenized to nothing")
    ref = _tokens(reference)
    if not ref:
        raise EmptyReferences("reference tokenized to nothing")
    lcs = _lcs_length(cand, ref)
    if lcs == 0:
        return 0.0
    precision = lcs / len(cand)
    recall = lcs / len(ref)
    beta_sq = beta * beta
    return 100.0 * (1 + beta_sq) * precision * recall / (recall + beta_sq * precision)


def meteor_simple(candidate: str, reference: str) -> float:
    """Exact-match unigram METEOR with the standard chunk fragmentation penalty.

    Alignment is greedy left to right (each reference token used at most
    once); F_mean weighs recall 9:1 and the penalty is 0.5 * (chunks/matches)^3.
    """
    cand = _tokens(candidate)
    if not cand:
        raise EmptyCandidate("candidate tokenized to nothing")
    ref = _tokens(reference)
    if not ref:
        raise EmptyReferences("reference tokenized to nothing")

    taken = [False] * len(ref)
    pairs: list[tuple[int, int]] = []
    for i, token in enumerate(cand):
        for j, other in enumerate(ref):
            if not taken[j] and other == token:
                taken[j] = True
                pairs.append((i, j))
                break
    matches = len(pairs)
    if matches == 0:
        return 0.0

    chunks = 0
    previous: tuple[int, int] | None = None
    for i, j in pairs:
        if previous is None or i != previous[0] + 1 or j != previous[1] + 1:
            chunks += 1
        previous = (i, j)

    precision = matches / len(cand)
    recall = matches / len(ref)
    f_mean = 10 * precision * recall / (recall + 9 * precision)
    penalty = 0.5 * (chunks / matches) ** 3
    return 100.0 * f_mean * (1 - penalty)


# ---------------------------------------------------------------------------
# corpus reports
# ---------------------------------------------------------------------------

CONVENTION = "cells are arithmetic means of per-sample scores; METEOR is exact-match simplified"

EvalSample = tuple[str, str, Optional[RelationKind], Optional[Hop]]


@dataclass(frozen=True)
class MetricScores:
    bleu_1: float
    bleu_2: float
    bleu_3: float
    bleu_4: float
    meteor: float
    rouge_l: float
    polarity_match: float

    def as_dict(self) -> dict[str, float]:
        return {
            "bleu_1": self.bleu_1,
            "bleu_2": self.bleu_2,
            "bleu_3": self.bleu_3,
            "bleu_4": self.bleu_4,
            "meteor": self.meteor,
            "rouge_l": self.rouge_l,
            "polarity_match": self.polarity_match,
        }


@dataclass(frozen=True)
class MetricReport:
    overall: MetricScores
    breakdown: Mapping[tuple[RelationKind, Hop], MetricScores]
    sample_count: int
    convention: str = CONVENTION

    def __post_init__(self) -> None:
        object.__setattr__(self, "breakdown", dict(self.breakdown))


def _sentence_scores(
    candidate: str,
    reference: str,
    lexicon: PolarityLexicon,
) -> tuple[list[float], bool]:
    """Per-sample metric values plus the polarity agreement flag.

    Pairs where either side tokenizes to nothing score zero on the overlap
    metrics rather than aborting the whole corpus run.
    """
    match = polarity_of(candidate, lexicon) is polarity_of(reference, lexicon)
    if not _tokens(candidate) or not _tokens(reference):
        return [0.0] * 6, match
    values = [bleu(candidate, [reference], n) for n in range(1, 5)]
    values.append(meteor_simple(candidate, reference))
    values.append(rouge_l(candidate, reference))
    return values, match


def _aggregate(rows: list[tuple[list[float], bool]]) -> MetricScores:
    count = len(rows)
    means = [sum(row[0][i] for row in rows) / count for i in range(6)]
    polarity = 100.0 * sum(1 for row in rows if row[1]) / count
    return MetricScores(means[0], means[1], means[2], means[3], means[4], means[5], polarity)


def evaluate_corpus(
    samples: Iterable[EvalSample],
    *,
    lexicon: PolarityLexicon = DEFAULT_LEXICON,
) -> MetricReport:
    """Score a corpus of (candidate, reference, relation, hop) samples.

    Samples lacking a relation or hop annotation count toward the overall
    scores only; breakdown cells exist exactly for annotated (relation, hop)
    pairs present in the input.
    """
    items = list(samples)
    if not items:
        raise EmptyInput("no samples to evaluate")

    scored: list[tuple[list[float], bool]] = []
    cells: dict[tuple[RelationKind, Hop], list[tuple[list[float], bool]]] = {}
    for candidate, reference, relation, hop in items:
        row = _sentence_scores(candidate, reference, lexicon)
        scored.append(row)
        if relation is not None and hop is not None:
            cells.setdefault((relation, hop), []).append(row)

    breakdown = {key: _aggregate(rows) for key, rows in cells.items()}
    return MetricReport(_aggregate(scored), breakdown, len(items))


_COLUMNS = ("BLEU-1", "BLEU-2", "BLEU-3", "BLEU-4", "METEOR", "ROUGE-L", "Polarity")
_RELATION_ORDER = {kind: index for index, kind in enumerate(RelationKind)}


def report_text(report: MetricReport) -> str:
    """Aligned plain-text report: overall row plus one row per breakdown cell."""
    rows: list[tuple[str, MetricScores]] = [("overall", report.overall)]
    for relation, hop in sorted(report.breakdown, key=lambda key: (_RELATION_ORDER[key[0]], key[1].count)):
        rows.append((f"{relation.surface} at {hop.count}-hop", report.breakdown[(relation, hop)]))
    label_width = max(len(label) for label, _ in rows)
    header = " " * label_width + "".join(f"{column:>9}" for column in _COLUMNS)
    lines = [header]
    for label, scores in rows:
        values = scores.as_dict().values()
        lines.append(label.ljust(label_width) + "".join(f"{value:9.2f}" for value in values))
    lines.append("")
    lines.append(f"samples: {report.sample_count}")
    lines.append(f"convention: {report.convention}")
    return "\n".join(lines) + "\n"


def report_dict(report: MetricReport) -> dict:
    """JSON-ready view of a report."""
    return {
        "overall": report.overall.as_dict(),
        "breakdown": {
            f"{relation.surface}@{hop.count}-hop": scores.as_dict()
            for (relation, hop), scores in sorted(
                report.breakdown.items(), key=lambda item: (_RELATION_ORDER[item[0][0]], item[0][1].count)
            )
        },
        "samples": report.sample_count,
        "convention": report.convention,
    }
