"""Whitespace tokenization shared by the lexicon matcher and number finder."""

from __future__ import annotations

# Stripped from token edges before dictionary lookups. Hyphens and inner
# quotes survive so forms like על-תנאי and ש"ח keep their surface.
EDGE_PUNCT = ".,;:!?()[]{}\"'«»“”„׳"


def strip_token(token: str) -> str:
    return token.strip(EDGE_PUNCT)


def stripped_tokens(text: str) -> list[str]:
    return [strip_token(t) for t in text.split()]
