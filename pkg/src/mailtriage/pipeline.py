"""Composed pipeline stages shared by the CLI, the HTTP service, and the
comparison runner, so every surface classifies through identical code.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .augment import AugmentConfig, SynonymLexicon, TokenizedSample, rebalance
from .corpus import CleanEmail, RawEmail, clean, filter_incoming
from .features import Vocabulary, bow_vector, build_vocabulary, flatten_keywords, keyword_vector_for
from .labeling import CategorySpec, LabeledEmail, build_labeled_corpus
from .models import MlpModel, TrainConfig, TreeModel, predict, train_mlp, train_tree, tree_predict
from .textprep import DEFAULT_RULES, DEFAULT_STOPWORDS, LemmaRules, preprocess


def clean_corpus(emails: Sequence[RawEmail]) -> list[CleanEmail]:
    """Incoming emails only, each normalised to one clean string."""
    return [clean(e) for e in filter_incoming(list(emails))]


def label_corpus(
    emails: Sequence[RawEmail], categories: Sequence[CategorySpec]
) -> tuple[list[LabeledEmail], dict[str, int]]:
    return build_labeled_corpus(clean_corpus(emails), list(categories))


def truth_labeled(emails: Sequence[RawEmail], truth: dict[str, str]) -> list[LabeledEmail]:
    """Attach out-of-band ground-truth labels (synthetic corpora) to clean text."""
    return [LabeledEmail(email=e, category=truth[e.id]) for e in clean_corpus(emails)]


def tokenize_labeled(
    labeled: Sequence[LabeledEmail],
    rules: LemmaRules = DEFAULT_RULES,
    stoplist: frozenset[str] = DEFAULT_STOPWORDS,
) -> list[TokenizedSample]:
    return [
        TokenizedSample(
            id=item.email.id,
            category=item.category,
            tokens=tuple(preprocess(item.email.text, rules, stoplist)),
        )
        for item in labeled
    ]


def train_nn_from_samples(
    samples: Sequence[TokenizedSample],
    categories: Sequence[CategorySpec],
    cfg: TrainConfig,
    hidden_units: int = 40,
    dropout_rate: float = 0.5,
) -> MlpModel:
    """Build the vocabulary from the given samples and train the network."""
    names = [c.name for c in sorted(categories, key=lambda c: c.rank)]
    vocab = build_vocabulary(s.tokens for s in samples)
    x = np.stack([bow_vector(s.tokens, vocab) for s in samples]).astype(np.float64)
    y = [names.index(s.category) for s in samples]
    return train_mlp(x, y, cfg, names, vocab, hidden_units=hidden_units, dropout_rate=dropout_rate)


def train_tree_from_labeled(
    labeled: Sequence[LabeledEmail],
    categories: Sequence[CategorySpec],
    max_depth: int | None = None,
) -> TreeModel:
    """Train the keyword-vector baseline on cleaned email text."""
    ordered = sorted(categories, key=lambda c: c.rank)
    names = [c.name for c in ordered]
    keywords = flatten_keywords(ordered)
    x = np.stack([keyword_vector_for(item.email.text, keywords) for item in labeled])
    y = [names.index(item.category) for item in labeled]
    return train_tree(x, y, max_depth, categories=names, feature_names=keywords)


def classify_clean(
    model: MlpModel | TreeModel,
    email: CleanEmail,
    rules: LemmaRules = DEFAULT_RULES,
    stoplist: frozenset[str] = DEFAULT_STOPWORDS,
) -> tuple[str, float]:
    """Category and confidence for one clean email, for either model kind."""
    if isinstance(model, MlpModel):
        tokens = preprocess(email.text, rules, stoplist)
        return predict(model, bow_vector(tokens, model.vocab).astype(np.float64))
    if isinstance(model, TreeModel):
        return tree_predict(model, keyword_vector_for(email.text, model.feature_names))
    raise TypeError(f"cannot classify with {type(model).__name__}")


def classify_text(
    model: MlpModel | TreeModel,
    subject: str,
    body: str,
    rules: LemmaRules = DEFAULT_RULES,
    stoplist: frozenset[str] = DEFAULT_STOPWORDS,
) -> tuple[str, float]:
    """Clean raw subject/body text server-side, then classify."""
    email = clean(RawEmail(id="query", thread_id="", direction="incoming", subject=subject, body=body))
    return classify_clean(model, email, rules, stoplist)


def augment_samples(
    samples: Sequence[TokenizedSample],
    categories: Sequence[CategorySpec],
    cfg: AugmentConfig,
    lexicon: SynonymLexicon,
) -> list[TokenizedSample]:
    order = [c.name for c in sorted(categories, key=lambda c: c.rank)]
    return rebalance(samples, cfg, lexicon, order)
