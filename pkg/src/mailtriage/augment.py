"""Synonym-replacement augmentation and per-category rebalancing.

New training sentences are generated by swapping a fraction of lexicon-known
tokens for synonyms, and every category is topped up with such variants
until it reaches a fixed quota (default 200), originals always kept. Source
sentences are cycled round-robin so every original contributes before any
contributes twice.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .rng import subrng
from .textprep import TokenSeq


class AugmentError(ValueError):
    """Invalid augmentation configuration or unusable input."""


@dataclass(frozen=True)
class AugmentConfig:
    target_per_class: int = 200
    replace_fraction: float = 0.3
    seed: int = 7

    def __post_init__(self) -> None:
        if self.target_per_class < 1:
            raise AugmentError("target_per_class must be >= 1")
        if not 0.0 < self.replace_fraction <= 1.0:
            raise AugmentError("replace_fraction must be in (0, 1]")
        if self.seed < 0:
            raise AugmentError("seed must be non-negative")


@dataclass(frozen=True)
class SynonymLexicon:
    # word -> sorted synonyms; sorted so a seeded choice is deterministic.
    entries: dict[str, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for word, synonyms in self.entries.items():
            if word != word.lower() or any(s != s.lower() for s in synonyms):
                raise AugmentError(f"lexicon entry {word!r} is not all lowercase")
            if not synonyms or set(synonyms) == {word}:
                raise AugmentError(f"word {word!r} has no synonym other than itself")


@dataclass(frozen=True)
class TokenizedSample:
    """A preprocessed training sentence with its category label."""

    id: str
    category: str
    tokens: tuple[str, ...]


def _make_lexicon(raw: dict[str, Sequence[str]]) -> SynonymLexicon:
    entries = {}
    for word, synonyms in raw.items():
        cleaned = tuple(sorted({s for s in synonyms if s and s != word}))
        if cleaned:
            entries[word.lower()] = cleaned
    return SynonymLexicon(entries=entries)


# A small IT-helpdesk thesaurus over preprocessed (lemmatized) vocabulary.
DEFAULT_THESAURUS = _make_lexicon(
    {
        "work": ("function", "operate"),
        "internet": ("web", "online"),
        "wifi": ("wireless",),
        "password": ("passcode", "credential"),
        "issue": ("problem", "trouble"),
        "problem": ("issue", "trouble"),
        "error": ("fault", "failure"),
        "help": ("assistance", "support"),
        "connect": ("link", "join"),
        "email": ("mail", "message"),
        "laptop": ("notebook", "computer"),
        "computer": ("pc", "machine"),
        "account": ("profile", "login"),
        "access": ("entry", "reach"),
        "fix": ("repair", "correct"),
        "load": ("open", "start"),
        "install": ("setup", "deploy"),
        "reset": ("restart", "reboot"),
        "slow": ("sluggish", "laggy"),
        "broken": ("faulty", "damaged"),
        "crash": ("fail", "freeze"),
        "course": ("class", "module"),
        "submit": ("upload", "send"),
        "assignment": ("coursework", "homework"),
        "student": ("learner", "undergraduate"),
        "staff": ("employee", "colleague"),
        "campus": ("site", "building"),
        "phone": ("mobile", "handset"),
        "screen": ("display", "monitor"),
        "open": ("launch", "load"),
        "launch": ("open", "run"),
        "expire": ("lapse", "end"),
        "renew": ("refresh", "extend"),
        "signal": ("reception", "coverage"),
        "drop": ("cut", "lose"),
        "forget": ("lose", "misplace"),
        "urgent": ("critical", "important"),
        "morning": ("today", "afternoon"),
        "try": ("attempt", "retry"),
        "need": ("require", "want"),
        "please": ("kindly",),
        "quickly": ("fast", "soon"),
    }
)


def load_thesaurus(path: str | Path) -> SynonymLexicon:
    """Parse a flat thesaurus file, one "word: syn1, syn2" entry per line."""
    raw: dict[str, list[str]] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        if ":" not in line:
            raise AugmentError(f"{path}:{lineno}: expected 'word: synonym1, synonym2'")
        word, _, rest = line.partition(":")
        word = word.strip().lower()
        synonyms = [s.strip().lower() for s in rest.split(",") if s.strip()]
        if not word or not synonyms:
            raise AugmentError(f"{path}:{lineno}: empty word or synonym list")
        raw[word] = synonyms
    return _make_lexicon(raw)


def save_thesaurus(lexicon: SynonymLexicon, path: str | Path) -> None:
    lines = [f"{word}: {', '.join(syns)}" for word, syns in sorted(lexicon.entries.items())]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def synonym_replace(
    tokens: TokenSeq | tuple[str, ...],
    lexicon: SynonymLexicon,
    replace_fraction: float,
    rng: np.random.Generator,
) -> TokenSeq:
    """Swap ceil(fraction * eligible) lexicon-known tokens for synonyms.

    Positions are chosen uniformly without replacement and every other token
    stays put; with no eligible token the input comes back unchanged.
    """
    out = list(tokens)
    eligible = [i for i, t in enumerate(out) if t in lexicon.entries]
    if not eligible:
        return out
    n_swap = math.ceil(replace_fraction * len(eligible))
    chosen = rng.choice(len(eligible), size=n_swap, replace=False)
    for j in sorted(int(c) for c in chosen):
        pos = eligible[j]
        synonyms = lexicon.entries[out[pos]]
        out[pos] = synonyms[int(rng.integers(len(synonyms)))]
    return out


def rebalance(
    samples: Sequence[TokenizedSample],
    cfg: AugmentConfig,
    lexicon: SynonymLexicon,
    category_order: Sequence[str],
) -> list[TokenizedSample]:
    """Top every category up to cfg.target_per_class with synonym variants.

    All originals are kept (categories already at or above target gain
    nothing); output is grouped per category in the given rank order. Each
    category draws from its own sub-seeded generator, so per-category results
    do not depend on the other categories' sizes.
    """
    by_category: dict[str, list[TokenizedSample]] = {name: [] for name in category_order}
    for sample in samples:
        if sample.category not in by_category:
            raise AugmentError(f"sample {sample.id!r} has unknown category {sample.category!r}")
        by_category[sample.category].append(sample)

    result: list[TokenizedSample] = []
    for rank, name in enumerate(category_order):
        originals = by_category[name]
        if not originals:
            raise AugmentError(f"category {name!r} has no samples; cannot augment from nothing")
        result.extend(originals)
        needed = cfg.target_per_class - len(originals)
        if needed <= 0:
            continue
        rng = subrng(cfg.seed, "augment", rank)
        for k in range(needed):
            source = originals[k % len(originals)]
            variant = synonym_replace(source.tokens, lexicon, cfg.replace_fraction, rng)
            result.append(
                TokenizedSample(id=f"{source.id}#aug{k}", category=name, tokens=tuple(variant))
            )
    return result
