"""Word-level LZ78-style indexing.

Each distinct word is registered at the 1-based position of its first
occurrence; later repeats are emitted as a back-reference to that position.
The rendered form prefixes a repeated word with the decimal index
(``"2your"``), and an escape byte (0x1B) marks words that would otherwise be
mistaken for a back-reference.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import NamedTuple

from .errors import MalformedIndex

ESC = "\x1b"
_ESCAPED_LEADS = frozenset("0123456789" + ESC)

_SPLIT = re.compile(r"(\s+)")
_PREFIX = re.compile(r"([0-9]+)")


class Token(NamedTuple):
    back_ref: int
    word: str


@dataclass(frozen=True)
class IndexedMessage:
    """Token stream plus the whitespace needed to rebuild the text exactly.

    ``separators`` holds the runs between consecutive words; whitespace before
    the first word and after the last one lives in ``leading``/``trailing``.
    """

    tokens: tuple[Token, ...] = ()
    separators: tuple[str, ...] = ()
    leading: str = ""
    trailing: str = ""

    def words(self) -> list[str]:
        return [t.word for t in self.tokens]


def _split(text: str) -> tuple[str, list[str], list[str], str]:
    parts = _SPLIT.split(text)
    # parts alternates word, ws, word, ...; the ends may be empty strings
    leading = ""
    trailing = ""
    if parts and parts[0] == "":
        parts.pop(0)
        if parts:
            leading = parts.pop(0)
    if parts and parts[-1] == "":
        parts.pop()
        if parts:
            trailing = parts.pop()
    words = parts[0::2]
    seps = parts[1::2]
    return leading, words, seps, trailing


def index_encode(text: str) -> IndexedMessage:
    leading, words, seps, trailing = _split(text)
    first_seen: dict[str, int] = {}
    firsts = [first_seen.setdefault(w, pos) for pos, w in enumerate(words, start=1)]
    tokens = tuple(Token(0 if ref == pos else ref, w)
                   for pos, (ref, w) in enumerate(zip(firsts, words), start=1))
    return IndexedMessage(tokens, tuple(seps), leading, trailing)


def _needs_escape(word: str) -> bool:
    return word[0] in _ESCAPED_LEADS


def render_token(tok: Token) -> str:
    word = ESC + tok.word if _needs_escape(tok.word) else tok.word
    if tok.back_ref:
        return f"{tok.back_ref}{word}"
    return word


def _join(leading: str, words: list[str], seps, trailing: str) -> str:
    if not words:
        return leading + trailing
    body = [""] * (2 * len(words) - 1)
    body[0::2] = words
    body[1::2] = seps
    return leading + "".join(body) + trailing


def render(msg: IndexedMessage) -> str:
    return _join(msg.leading, [render_token(t) for t in msg.tokens], msg.separators,
                 msg.trailing)


def parse(rendered: str) -> IndexedMessage:
    """Recover the token stream from rendered text, validating every reference."""
    leading, chunks, seps, trailing = _split(rendered)
    tokens: list[Token] = []
    for pos, chunk in enumerate(chunks, start=1):
        lead = chunk[0]
        if lead not in _ESCAPED_LEADS:
            tokens.append(Token(0, chunk))
            continue
        if lead == ESC:
            if len(chunk) == 1:
                raise MalformedIndex(f"token {pos}: bare escape character")
            tokens.append(Token(0, chunk[1:]))
            continue
        m = _PREFIX.match(chunk)
        ref = int(m.group(1))
        word = chunk[m.end():]
        if word.startswith(ESC):
            word = word[1:]
        if not word:
            raise MalformedIndex(f"token {pos}: back-reference {ref} has no word")
        if not 1 <= ref < pos:
            raise MalformedIndex(f"token {pos}: back-reference {ref} out of range")
        target = tokens[ref - 1]
        if target.back_ref != 0 or target.word != word:
            raise MalformedIndex(
                f"token {pos}: back-reference {ref} does not point at {word!r}"
            )
        tokens.append(Token(ref, word))
    return IndexedMessage(tuple(tokens), tuple(seps), leading, trailing)


def decode(rendered: str) -> str:
    msg = parse(rendered)
    return _join(msg.leading, [t.word for t in msg.tokens], msg.separators, msg.trailing)
