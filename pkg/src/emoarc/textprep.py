"""Text to lowercase letter-only tokens.

URLs (``scheme://...`` or ``www....`` runs up to the next whitespace) are cut
first, then letter/digit runs containing a digit are dropped and the rest
is split on every non-letter character, which removes punctuation and the
``#``/``@`` sigils of tweets.  Letters are the Unicode ``L*`` categories, so Arabic and Spanish words survive.
Combining marks are removed after NFC composition so that diacritised Arabic
words stay in one piece.  No stemming, stopword removal or elongation
squashing is done.
"""

from __future__ import annotations

import unicodedata

import regex

URL_RE = regex.compile(r"(?:\b[a-z][a-z0-9+.\-]*://|\bwww\.)\S*", regex.IGNORECASE)
_MARKS_RE = regex.compile(r"\p{Mn}+")
# alphanumeric runs holding any digit ("2nd", "100", "b4") are dropped whole
_NUMERIC_RE = regex.compile(r"[\p{L}\p{N}]*\p{N}[\p{L}\p{N}]*")
# uppercase letters with no lowercase form act as separators
_LETTERS_RE = regex.compile(r"[\p{L}--\p{Lu}--\p{Lt}]+", regex.V1)

TokenList = list


def tokenize(text: str) -> list[str]:
    """Lowercase letter-only tokens of ``text``.

    >>> tokenize("I LOVED it!! http://x.co/ab 100%")
    ['i', 'loved', 'it']
    """
    if not text:
        return []
    text = URL_RE.sub(" ", text)
    text = unicodedata.normalize("NFC", text.lower())
    text = _MARKS_RE.sub("", text)
    text = _NUMERIC_RE.sub(" ", text)
    return _LETTERS_RE.findall(text)


def tokenize_all(texts) -> list[list[str]]:
    return [tokenize(t) for t in texts]
