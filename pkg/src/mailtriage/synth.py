"""Synthetic helpdesk corpus generator.

Stands in for real (private) ticket data. Every email mixes shared filler
words, a pool of ambiguous tech vocabulary common to all categories, and
the category's own signal words; the category's keyword is injected with a
configurable probability, generic connectivity words ("internet",
"connection", "network") are sprinkled across all categories the way real
queries mention them, and a cross-talk keyword from another category can be
mixed in as noise. Ground-truth labels travel out-of-band next to the
generated records.

Vocabulary lists are curated so that neither filler nor another category's
signal words can spell out a foreign keyword, even across adjacent tokens;
with injection probability 1 and zero noise/sprinkle, keyword labeling
recovers the ground truth exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .corpus import RawEmail
from .labeling import DEFAULT_CATEGORIES, CategorySpec
from .rng import subrng


class SynthError(ValueError):
    """Invalid generator specification."""


FILLER_WORDS: tuple[str, ...] = (
    "hi", "hello", "good", "morning", "afternoon", "please", "help", "thanks",
    "regards", "kind", "student", "staff", "campus", "library", "trying",
    "issue", "problem", "error", "message", "working", "suddenly", "today",
    "yesterday", "since", "week", "urgent", "possible", "appreciate",
    "advise", "cheers", "query", "still", "again", "unable", "cant", "keeps",
    "getting", "anyone", "know", "broken", "stopped", "need", "asap",
)

# Ambiguous tech words every category uses; these blur the categories the
# way real helpdesk language does.
SHARED_TECH_WORDS: tuple[str, ...] = (
    "install", "software", "app", "update", "login", "account", "open",
    "load", "screen", "device", "click", "restart",
)

# Distinctive per-category vocabulary (keywords are merged in separately).
SIGNAL_WORDS: dict[str, tuple[str, ...]] = {
    "Adobe": ("photoshop", "illustrator", "acrobat", "premiere", "pdf", "export"),
    "AppsAnywhere": ("player", "solidworks", "matlab", "validate", "portal", "packaged"),
    "Blackboard": ("course", "module", "assignment", "quiz", "lecture", "grades"),
    "password": ("reset", "forgot", "authenticator", "locked", "verification", "code"),
    "WiFi": ("router", "halls", "disconnects", "coverage", "dorm", "roaming"),
}


@dataclass(frozen=True)
class SynthSpec:
    categories: tuple[str, ...]
    keywords: dict[str, tuple[str, ...]]  # per-category injectable keywords
    counts: dict[str, int]
    signal: dict[str, tuple[str, ...]]  # includes the category's own keywords
    filler: tuple[str, ...] = FILLER_WORDS
    keyword_prob: float = 0.85
    crosstalk_prob: float = 0.12
    # generic words that are also keywords of the last-rank category; they
    # show up everywhere in real queries without changing first-match labels
    common_keywords: tuple[str, ...] = ()
    common_prob: float = 0.0  # independent appearance chance per common word
    second_keyword_prob: float = 0.5  # chance of a second own-keyword mention
    signal_share: float = 0.3  # chance each position draws a signal word
    seed: int = 7
    min_len: int = 5
    max_len: int = 40

    def __post_init__(self) -> None:
        if not self.categories:
            raise SynthError("no categories to generate")
        for name in self.categories:
            if self.counts.get(name, 0) < 1:
                raise SynthError(f"category {name!r} needs a count >= 1")
            if not self.keywords.get(name):
                raise SynthError(f"category {name!r} has no injectable keywords")
            if not self.signal.get(name):
                raise SynthError(f"category {name!r} has no signal vocabulary")
        for prob in (
            self.keyword_prob,
            self.crosstalk_prob,
            self.common_prob,
            self.second_keyword_prob,
            self.signal_share,
        ):
            if not 0.0 <= prob <= 1.0:
                raise SynthError("probabilities must be in [0, 1]")
        if self.common_prob > 0 and not self.common_keywords:
            raise SynthError("common_prob needs common_keywords")
        if not 1 <= self.min_len <= self.max_len:
            raise SynthError("need 1 <= min_len <= max_len")


# Default per-category volumes keep the real corpus' imbalance shape.
DEFAULT_COUNTS = {"Adobe": 20, "AppsAnywhere": 12, "Blackboard": 90, "password": 48, "WiFi": 45}

DEFAULT_KEYWORD_PROB = 0.9
DEFAULT_CROSSTALK_PROB = 0.15
DEFAULT_COMMON_PROB = 0.3


def default_spec(
    categories: Sequence[CategorySpec] = DEFAULT_CATEGORIES,
    counts: dict[str, int] | None = None,
    keyword_prob: float = DEFAULT_KEYWORD_PROB,
    crosstalk_prob: float = DEFAULT_CROSSTALK_PROB,
    common_prob: float | None = None,
    seed: int = 7,
) -> SynthSpec:
    ordered = sorted(categories, key=lambda c: c.rank)
    keywords = {c.name: tuple(c.keywords) for c in ordered}
    signal = {}
    for cat in ordered:
        extra = SIGNAL_WORDS.get(cat.name, ())
        merged = tuple(
            dict.fromkeys(tuple(k.lower() for k in cat.keywords) + extra + SHARED_TECH_WORDS)
        )
        signal[cat.name] = merged

    # Keywords of the last-rank category double as generic connectivity
    # vocabulary: real queries of every kind mention them ("over wifi",
    # "since the internet upgrade") and, being last in rank, they can never
    # change a first-match label.
    generic = tuple(k.lower() for k in ordered[-1].keywords)
    if common_prob is None:
        common_prob = DEFAULT_COMMON_PROB if generic else 0.0
    return SynthSpec(
        categories=tuple(c.name for c in ordered),
        keywords=keywords,
        counts=dict(counts or DEFAULT_COUNTS),
        signal=signal,
        keyword_prob=keyword_prob,
        crosstalk_prob=crosstalk_prob,
        common_keywords=generic if common_prob > 0 else (),
        common_prob=common_prob if generic else 0.0,
        seed=seed,
    )


def generate_corpus(spec: SynthSpec) -> tuple[list[RawEmail], dict[str, str]]:
    """Emit the spec'd number of emails per category plus ground-truth labels.

    Deterministic under the spec seed. All generated mail is incoming; the
    subject is the first few tokens and the body the rest.
    """
    rng = subrng(spec.seed, "synth")
    emails: list[RawEmail] = []
    truth: dict[str, str] = {}
    serial = 0
    for name in spec.categories:
        signal = spec.signal[name]
        for _ in range(spec.counts[name]):
            serial += 1
            length = int(rng.integers(spec.min_len, spec.max_len + 1))
            tokens = []
            for _ in range(length):
                if rng.random() < spec.signal_share:
                    tokens.append(signal[int(rng.integers(len(signal)))])
                else:
                    tokens.append(spec.filler[int(rng.integers(len(spec.filler)))])
            if rng.random() < spec.keyword_prob:
                own = spec.keywords[name]
                kw = own[int(rng.integers(len(own)))]
                pos = int(rng.integers(len(tokens) + 1))
                tokens[pos:pos] = kw.lower().split()
                if len(own) > 1 and rng.random() < spec.second_keyword_prob:
                    kw = own[int(rng.integers(len(own)))]
                    pos = int(rng.integers(len(tokens) + 1))
                    tokens[pos:pos] = kw.lower().split()
            for kw in spec.common_keywords:  # independent per-word sprinkle
                if rng.random() < spec.common_prob:
                    pos = int(rng.integers(len(tokens) + 1))
                    tokens[pos:pos] = kw.lower().split()
            # Cross-talk: real queries routinely mention another category's
            # keyword ("my blackboard password", "adobe license").
            others = [c for c in spec.categories if c != name]
            if others and rng.random() < spec.crosstalk_prob:
                other = others[int(rng.integers(len(others)))]
                kw = spec.keywords[other][int(rng.integers(len(spec.keywords[other])))]
                pos = int(rng.integers(len(tokens) + 1))
                tokens[pos:pos] = kw.lower().split()

            email_id = f"synth-{serial:04d}"
            split_at = min(4, max(1, len(tokens) // 4))
            emails.append(
                RawEmail(
                    id=email_id,
                    thread_id=f"thread-{serial:04d}",
                    direction="incoming",
                    subject=" ".join(tokens[:split_at]),
                    body=" ".join(tokens[split_at:]),
                    timestamp=None,
                )
            )
            truth[email_id] = name
    return emails, truth
