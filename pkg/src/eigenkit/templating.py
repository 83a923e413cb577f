"""Rendering and parsing of the single-string generation queries.

A query is "<passage> what does <source> <relation> at <h>-hop?", where the
passage prefix and the hop clause each drop out independently for ablated
runs. parse_query is the exact inverse for any query whose source text does
not itself contain the " what does " frame.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .derivation import Passage
from .errors import InputError
from .graph import Hop, RelationKind


class EmptySource(InputError):
    """The source event text was empty or all whitespace."""


class MalformedQuery(InputError):
    """A query string did not match the template frame."""


FRAME = "what does"
_FRAME_MARKER = f" {FRAME} "
_HOP_SUFFIX = re.compile(r" at (\d+)-hop$")
# Longest surface first so suffix matching can never confuse the four forms.
_SURFACES = sorted((kind.surface for kind in RelationKind), key=len, reverse=True)


def _squash(text: str) -> str:
    return " ".join(text.split())


def render_query(
    passage: Passage | None,
    source: str,
    relation: RelationKind,
    hop: Hop | None,
) -> str:
    """Render one query string.

    Passage sentences are joined by single spaces; whitespace runs inside any
    part are collapsed so the output never contains consecutive spaces and
    ends with exactly one question mark.
    """
    source = _squash(source)
    if not source:
        raise EmptySource("source event text is empty")
    parts: list[str] = []
    if passage is not None:
        parts.append(" ".join(_squash(sentence) for sentence in passage.sentences))
    parts.extend([FRAME, source, relation.surface])
    if hop is not None:
        parts.append(f"at {hop.count}-hop")
    return " ".join(parts) + "?"


@dataclass(frozen=True)
class ParsedQuery:
    passage_text: str | None
    source: str
    relation: RelationKind
    hop: Hop | None


def parse_query(query: str) -> ParsedQuery:
    """Recover (passage text, source, relation, hop) from a rendered query.

    The frame is located at its last occurrence, so passages that themselves
    contain "what does" still split correctly. Raises MalformedQuery when the
    frame or relation cannot be found.
    """
    if not query.endswith("?"):
        raise MalformedQuery("query does not end with a question mark")
    body = query[:-1]
    frame_at = body.rfind(_FRAME_MARKER)
    if frame_at >= 0:
        passage_text: str | None = body[:frame_at]
        rest = body[frame_at + len(_FRAME_MARKER):]
    elif body.startswith(FRAME + " "):
        passage_text = None
        rest = body[len(FRAME) + 1:]
    else:
        raise MalformedQuery(f"no {FRAME!r} frame in {query!r}")

    hop: Hop | None = None
    hop_match = _HOP_SUFFIX.search(rest)
    if hop_match:
        hop = Hop(int(hop_match.group(1)))
        rest = rest[: hop_match.start()]

    for surface in _SURFACES:
        if rest.endswith(" " + surface):
            source = rest[: -len(surface) - 1]
            if not source:
                raise MalformedQuery(f"empty source in {query!r}")
            return ParsedQuery(passage_text, source, RelationKind.from_surface(surface), hop)
    raise MalformedQuery(f"no relation surface in {query!r}")
