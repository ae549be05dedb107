"""Synonym identification over a pluggable lexicon.

The lexicon file replaces a full WordNet install: a JSON document mapping
base words to synonym lemmas, plus a stopword list and ordered suffix-strip
stemming rules.  A bundled agriculture lexicon ships in ``farmgate.data``;
any larger WordNet-derived file in the same format can be dropped in.

Synonym identification runs in three phases: tokenize and drop stopwords,
stem the retained keywords, then look each stem up in the lexicon.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

from farmgate.model import FarmgateError


class LexiconError(FarmgateError, ValueError):
    """The lexicon document violates a structural invariant."""


_WORD_RE = re.compile(r"[a-z0-9]+")

#: Minimum stem length left after stripping a suffix.
MIN_STEM = 3


@dataclass(frozen=True)
class Lexicon:
    """Immutable synonym dictionary with stopwords and stemming rules."""

    entries: Mapping[str, tuple[str, ...]]
    stopwords: frozenset[str]
    stem_rules: tuple[tuple[str, str], ...]
    _by_stem: Mapping[str, tuple[str, ...]] = field(default=None, repr=False, compare=False)

    def __post_init__(self) -> None:
        for word, synonyms in self.entries.items():
            if word in self.stopwords:
                raise LexiconError(f"base word {word!r} must not appear in the stopword list")
            if not synonyms:
                raise LexiconError(f"base word {word!r} has an empty synonym list")
            if len(set(synonyms)) != len(synonyms):
                raise LexiconError(f"base word {word!r} has duplicate synonyms")
        # Secondary index keyed by stemmed base word, so inflected entries
        # (e.g. "grasses" in a source file) stay reachable after stemming.
        by_stem: dict[str, tuple[str, ...]] = {}
        for word, synonyms in self.entries.items():
            stemmed = _stem(word, self.stem_rules)
            by_stem.setdefault(stemmed, synonyms)
        object.__setattr__(self, "entries", MappingProxyType(dict(self.entries)))
        object.__setattr__(self, "_by_stem", MappingProxyType(by_stem))

    def synonyms(self, keyword: str) -> tuple[str, ...]:
        """Synonym lemmas for a (stemmed) keyword; empty when unknown."""
        hit = self.entries.get(keyword)
        if hit is not None:
            return hit
        return self._by_stem.get(keyword, ())

    def stem(self, word: str) -> str:
        return _stem(word, self.stem_rules)


#: Ordered longest-suffix-first strip rules applied once per word.
DEFAULT_STEM_RULES: tuple[tuple[str, str], ...] = (
    ("ies", "y"),
    ("ing", ""),
    ("es", ""),
    ("ed", ""),
    ("s", ""),
)


def _stem(word: str, rules: tuple[tuple[str, str], ...]) -> str:
    for suffix, replacement in rules:
        if word.endswith(suffix):
            stem = word[: len(word) - len(suffix)] + replacement
            if len(stem) >= MIN_STEM:
                return stem
    return word


def tokenize(text: str) -> list[str]:
    """Lowercase word tokens; punctuation splits, never survives."""
    return _WORD_RE.findall(text.lower())


@dataclass(frozen=True)
class SynonymMatrix:
    """One row per retained keyword, in original word order."""

    rows: tuple[tuple[str, tuple[str, ...]], ...]

    def keywords(self) -> list[str]:
        return [kw for kw, _ in self.rows]

    def as_dict_rows(self) -> list[dict]:
        return [{"keyword": kw, "synonyms": list(syns)} for kw, syns in self.rows]


def identify_synonyms(text: str, lexicon: Lexicon) -> SynonymMatrix:
    """Build the synonym matrix for free text.

    Stopwords are dropped before stemming; every retained keyword gets a row
    even when the lexicon has no synonyms for it (empty list).
    """
    rows: list[tuple[str, tuple[str, ...]]] = []
    for word in tokenize(text):
        if word in lexicon.stopwords:
            continue
        keyword = lexicon.stem(word)
        rows.append((keyword, lexicon.synonyms(keyword)))
    return SynonymMatrix(rows=tuple(rows))


def lexicon_from_dict(doc: dict) -> Lexicon:
    if not isinstance(doc, dict) or "entries" not in doc:
        raise LexiconError("lexicon document must be an object with an 'entries' key")
    entries = {
        str(word).lower(): tuple(str(s) for s in syns) for word, syns in doc["entries"].items()
    }
    stopwords = frozenset(str(w).lower() for w in doc.get("stopwords", []))
    raw_rules = doc.get("stem_rules")
    if raw_rules is None:
        stem_rules = DEFAULT_STEM_RULES
    else:
        stem_rules = tuple((str(a), str(b)) for a, b in raw_rules)
    return Lexicon(entries=entries, stopwords=stopwords, stem_rules=stem_rules)


def load_lexicon(path: str | Path) -> Lexicon:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise LexiconError(f"{path}: not valid JSON: {exc}") from exc
    return lexicon_from_dict(doc)


def load_bundled_lexicon() -> Lexicon:
    path = resources.files("farmgate.data").joinpath("lexicon.json")
    return load_lexicon(str(path))
