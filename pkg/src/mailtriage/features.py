"""Feature construction: bag-of-words count vectors and keyword indicators.

The vocabulary is the sorted union of training tokens (built after
augmentation so synonym-introduced words are representable). Count vectors
keep raw occurrence counts; the keyword vector is a binary indicator over
the flattened per-category keyword list, matched against cleaned text the
same way labeling matches.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .corpus import CleanEmail
from .labeling import CategorySpec, normalize_keyword
from .textprep import TokenSeq


class FeatureError(ValueError):
    """Unusable feature-construction input."""


@dataclass(frozen=True)
class Vocabulary:
    terms: tuple[str, ...]
    index: dict[str, int]

    @classmethod
    def from_terms(cls, terms: Sequence[str]) -> "Vocabulary":
        terms = tuple(terms)
        if len(set(terms)) != len(terms):
            raise FeatureError("vocabulary terms contain duplicates")
        if list(terms) != sorted(terms):
            raise FeatureError("vocabulary terms must be sorted")
        return cls(terms=terms, index={t: i for i, t in enumerate(terms)})

    def __len__(self) -> int:
        return len(self.terms)


def build_vocabulary(docs: Iterable[TokenSeq | tuple[str, ...]]) -> Vocabulary:
    """Sorted unique union of all tokens across the training documents."""
    terms: set[str] = set()
    for doc in docs:
        terms.update(doc)
    if not terms:
        raise FeatureError("cannot build a vocabulary from an empty corpus")
    return Vocabulary.from_terms(sorted(terms))


def bow_vector(tokens: TokenSeq | tuple[str, ...], vocab: Vocabulary) -> np.ndarray:
    """Occurrence counts per vocabulary term; out-of-vocabulary tokens ignored."""
    vec = np.zeros(len(vocab), dtype=np.int64)
    index = vocab.index
    for token in tokens:
        pos = index.get(token)
        if pos is not None:
            vec[pos] += 1
    return vec


def flatten_keywords(categories: Sequence[CategorySpec]) -> list[str]:
    """All keywords in (rank, list-position) order, as configured."""
    ordered = sorted(categories, key=lambda c: c.rank)
    return [kw for cat in ordered for kw in cat.keywords]


def keyword_vector_for(text: str, keywords: Sequence[str]) -> np.ndarray:
    """Binary presence of each (cleaned, lowercased) keyword in the text."""
    haystack = text.lower()
    vec = np.zeros(len(keywords), dtype=np.int64)
    for i, keyword in enumerate(keywords):
        if normalize_keyword(keyword) in haystack:
            vec[i] = 1
    return vec


def keyword_vector(email: CleanEmail, categories: Sequence[CategorySpec]) -> np.ndarray:
    """Keyword indicators over the flattened category keyword list."""
    return keyword_vector_for(email.text, flatten_keywords(categories))
