"""Synonym replacement and rebalancing tests."""
import json

import numpy as np
import pytest

from mailtriage.augment import (
    AugmentConfig,
    AugmentError,
    DEFAULT_THESAURUS,
    SynonymLexicon,
    TokenizedSample,
    load_thesaurus,
    rebalance,
    save_thesaurus,
    synonym_replace,
)

CATEGORIES = ("alpha", "beta", "gamma", "delta", "epsilon")


def _lexicon(**entries):
    return SynonymLexicon(entries={k: tuple(sorted(v)) for k, v in entries.items()})


def _samples(counts: dict[str, int]) -> list[TokenizedSample]:
    out = []
    for name, n in counts.items():
        for i in range(n):
            out.append(
                TokenizedSample(
                    id=f"{name}{i}", category=name, tokens=("internet", "not", "work", name)
                )
            )
    return out


def test_synonym_replace_forced_single_substitution():
    rng = np.random.default_rng(0)
    lex = _lexicon(work=("function",))
    assert synonym_replace(["internet", "not", "work"], lex, 1.0, rng) == [
        "internet", "not", "function",
    ]


def test_synonym_replace_empty_lexicon_is_identity():
    rng = np.random.default_rng(0)
    tokens = ["internet", "not", "work"]
    assert synonym_replace(tokens, SynonymLexicon(entries={}), 0.5, rng) == tokens


def test_synonym_replace_deterministic_under_seed():
    lex = DEFAULT_THESAURUS
    tokens = ["internet", "not", "work", "password", "slow", "laptop"]
    out1 = synonym_replace(tokens, lex, 0.5, np.random.default_rng(42))
    out2 = synonym_replace(tokens, lex, 0.5, np.random.default_rng(42))
    assert out1 == out2


def test_synonym_replace_counts_ceil_of_fraction():
    lex = _lexicon(a=("x",), b=("y",), c=("z",))
    tokens = ["a", "b", "c", "keep"]
    out = synonym_replace(tokens, lex, 0.5, np.random.default_rng(1))
    changed = sum(1 for before, after in zip(tokens, out) if before != after)
    assert changed == 2  # ceil(0.5 * 3)
    assert out[3] == "keep"


def test_synonym_replace_preserves_positions():
    lex = _lexicon(work=("function",))
    tokens = ["work", "not", "work"]
    out = synonym_replace(tokens, lex, 1.0, np.random.default_rng(3))
    assert out[1] == "not"
    assert all(t == "function" for t in (out[0], out[2]))


def test_rebalance_five_categories_to_1000():
    samples = _samples({name: 30 + 5 * i for i, name in enumerate(CATEGORIES)})
    cfg = AugmentConfig(target_per_class=200, replace_fraction=0.3, seed=7)
    out = rebalance(samples, cfg, DEFAULT_THESAURUS, CATEGORIES)
    assert len(out) == 1000
    per = {name: 0 for name in CATEGORIES}
    for s in out:
        per[s.category] += 1
    assert all(v == 200 for v in per.values())


def test_rebalance_tops_up_and_keeps_surplus():
    samples = _samples({"alpha": 50, "beta": 250})
    cfg = AugmentConfig(target_per_class=200, seed=1)
    out = rebalance(samples, cfg, DEFAULT_THESAURUS, ("alpha", "beta"))
    alphas = [s for s in out if s.category == "alpha"]
    betas = [s for s in out if s.category == "beta"]
    assert len(alphas) == 200  # 50 originals + 150 variants
    assert len(betas) == 250  # nothing dropped, nothing added
    assert sum(1 for s in alphas if "#aug" not in s.id) == 50
    assert all("#aug" not in s.id for s in betas)


def test_rebalance_round_robin_sources():
    samples = _samples({"alpha": 3, "beta": 2})
    cfg = AugmentConfig(target_per_class=8, seed=5)
    out = rebalance(samples, cfg, DEFAULT_THESAURUS, ("alpha", "beta"))
    variant_sources = [s.id.split("#")[0] for s in out if "#aug" in s.id and s.category == "alpha"]
    assert variant_sources == ["alpha0", "alpha1", "alpha2", "alpha0", "alpha1"]


def test_rebalance_errors_on_empty_category():
    samples = _samples({"alpha": 3})
    cfg = AugmentConfig(target_per_class=5, seed=1)
    with pytest.raises(AugmentError, match="beta"):
        rebalance(samples, cfg, DEFAULT_THESAURUS, ("alpha", "beta"))


def test_rebalance_errors_on_unknown_category():
    samples = _samples({"alpha": 3, "zeta": 1})
    cfg = AugmentConfig(target_per_class=5, seed=1)
    with pytest.raises(AugmentError, match="zeta"):
        rebalance(samples, cfg, DEFAULT_THESAURUS, ("alpha",))


def test_rebalance_originals_unchanged_and_labels_inherited():
    samples = _samples({"alpha": 4, "beta": 6})
    cfg = AugmentConfig(target_per_class=20, seed=9)
    out = rebalance(samples, cfg, DEFAULT_THESAURUS, ("alpha", "beta"))
    originals = {s.id: s for s in samples}
    for s in out:
        if "#aug" in s.id:
            source = originals[s.id.split("#")[0]]
            assert s.category == source.category
            assert len(s.tokens) == len(source.tokens)
        else:
            assert s == originals[s.id]


def test_rebalance_byte_identical_under_seed():
    samples = _samples({name: 10 for name in CATEGORIES})
    cfg = AugmentConfig(target_per_class=40, replace_fraction=0.4, seed=33)
    dump = lambda out: json.dumps([[s.id, s.category, list(s.tokens)] for s in out])
    first = dump(rebalance(samples, cfg, DEFAULT_THESAURUS, CATEGORIES))
    second = dump(rebalance(samples, cfg, DEFAULT_THESAURUS, CATEGORIES))
    assert first == second


def test_rebalance_category_counts_invariant():
    samples = _samples({"alpha": 3, "beta": 120})
    cfg = AugmentConfig(target_per_class=100, seed=2)
    out = rebalance(samples, cfg, DEFAULT_THESAURUS, ("alpha", "beta"))
    per = {"alpha": 0, "beta": 0}
    for s in out:
        per[s.category] += 1
    assert per == {"alpha": 100, "beta": 120}  # max(original, target)


def test_config_validation():
    with pytest.raises(AugmentError):
        AugmentConfig(target_per_class=0)
    with pytest.raises(AugmentError):
        AugmentConfig(replace_fraction=0.0)
    with pytest.raises(AugmentError):
        AugmentConfig(replace_fraction=1.5)


def test_lexicon_rejects_self_only_synonyms():
    with pytest.raises(AugmentError):
        SynonymLexicon(entries={"work": ("work",)})
    with pytest.raises(AugmentError):
        SynonymLexicon(entries={"Work": ("job",)})


def test_thesaurus_file_round_trip(tmp_path):
    path = tmp_path / "thesaurus.txt"
    save_thesaurus(DEFAULT_THESAURUS, path)
    assert load_thesaurus(path) == DEFAULT_THESAURUS


def test_thesaurus_parse_errors(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("word-without-colon\n")
    with pytest.raises(AugmentError):
        load_thesaurus(bad)
    empty = tmp_path / "empty.txt"
    empty.write_text("word:\n")
    with pytest.raises(AugmentError):
        load_thesaurus(empty)
