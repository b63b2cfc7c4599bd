"""Category-tagged tokenization and dictionary word segmentation.

Every character of the input belongs to exactly one category: Mandarin
(single CJK ideographs), English (ASCII letter runs), ITN (rendered numbers,
percentages, currency), Punctuation (single CJK/ASCII marks) or Other
(whitespace, emoji, anything else). Other runs are skipped by the tokenizer
but the spans of the emitted tokens still reconstruct the source exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable


class TokenCategory(Enum):
    MANDARIN = "mandarin"
    PUNCTUATION = "punctuation"
    ITN = "itn"
    ENGLISH = "english"
    OTHER = "other"


# CJK Unified Ideographs plus Extension A.
_CJK_RANGES = ((0x4E00, 0x9FFF), (0x3400, 0x4DBF))

# Single punctuation marks, CJK and ASCII.
PUNCTUATION_MARKS = frozenset("。？！，、；：“”‘’（）《》" + ".,?!;:\"'()")

# Always ITN: digits, percent, currency.
_ITN_CHARS = frozenset("0123456789%￥$")
# ITN only when joining two digits ("3.5", "12:30", "2024-08").
_ITN_GLUE = frozenset(".:-")


def _is_cjk(ch: str) -> bool:
    o = ord(ch)
    return any(lo <= o <= hi for lo, hi in _CJK_RANGES)


def _is_ascii_letter(ch: str) -> bool:
    return "a" <= ch <= "z" or "A" <= ch <= "Z"


def _is_ascii_digit(ch: str) -> bool:
    return "0" <= ch <= "9"


def classify_char(ch: str) -> TokenCategory:
    """Context-free category of a single character.

    '.', ':' and '-' are promoted to ITN by tokenize_text when they sit
    between digits; on their own '.' and ':' are punctuation and '-' is Other.
    """
    if _is_cjk(ch):
        return TokenCategory.MANDARIN
    if _is_ascii_letter(ch):
        return TokenCategory.ENGLISH
    if ch in _ITN_CHARS:
        return TokenCategory.ITN
    if ch in PUNCTUATION_MARKS:
        return TokenCategory.PUNCTUATION
    return TokenCategory.OTHER


@dataclass(frozen=True)
class Token:
    """A classified span of source text; start/end are str offsets."""

    text: str
    category: TokenCategory
    start: int
    end: int


def tokenize_text(text: str) -> list[Token]:
    """Split text into category-tagged tokens, skipping Other content.

    Mandarin and punctuation tokens are single characters, English tokens are
    maximal ASCII-letter runs, ITN tokens are maximal runs of digits/%/￥/$
    with '.', ':' or '-' glued in when they join two digits.
    """
    tokens: list[Token] = []
    n = len(text)
    i = 0
    while i < n:
        ch = text[i]
        if _is_cjk(ch):
            tokens.append(Token(ch, TokenCategory.MANDARIN, i, i + 1))
            i += 1
        elif _is_ascii_letter(ch):
            j = i + 1
            while j < n and _is_ascii_letter(text[j]):
                j += 1
            tokens.append(Token(text[i:j], TokenCategory.ENGLISH, i, j))
            i = j
        elif ch in _ITN_CHARS:
            j = i + 1
            while j < n:
                nxt = text[j]
                if nxt in _ITN_CHARS:
                    j += 1
                elif (
                    nxt in _ITN_GLUE
                    and _is_ascii_digit(text[j - 1])
                    and j + 1 < n
                    and _is_ascii_digit(text[j + 1])
                ):
                    j += 1
                else:
                    break
            tokens.append(Token(text[i:j], TokenCategory.ITN, i, j))
            i = j
        elif ch in PUNCTUATION_MARKS:
            tokens.append(Token(ch, TokenCategory.PUNCTUATION, i, i + 1))
            i += 1
        else:
            i += 1
    return tokens


class Lexicon:
    """Immutable word list for maximum matching; shareable across threads."""

    def __init__(self, words: Iterable[str]):
        self.entries = frozenset(w for w in words if w)
        self.max_word_len = max((len(w) for w in self.entries), default=1)

    def __contains__(self, word: str) -> bool:
        return word in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    @classmethod
    def from_file(cls, path: str | Path) -> "Lexicon":
        """Load a UTF-8 word-per-line file; blank lines and # comments allowed."""
        words = []
        with open(path, encoding="utf-8") as f:
            for line in f:
                word = line.strip()
                if word and not word.startswith("#"):
                    words.append(word)
        return cls(words)


EMPTY_LEXICON = Lexicon(())


def segment_words(text: str, lexicon: Lexicon) -> list[str]:
    """Forward maximum matching with single-character fallback.

    The concatenation of the output always equals the input, so word lists
    can be mapped back to character offsets by prefix sums.
    """
    words: list[str] = []
    n = len(text)
    i = 0
    while i < n:
        length = min(lexicon.max_word_len, n - i)
        while length > 1 and text[i : i + length] not in lexicon:
            length -= 1
        words.append(text[i : i + length])
        i += length
    return words
