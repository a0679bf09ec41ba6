"""Token-level text preparation: tokenize, lemmatize, drop stop-words.

The lemmatizer is a small rule-based suffix stripper: an exception table is
consulted first, then ordered suffix rules with minimum-stem guards, with a
restoration table adding back a trailing "e" where stripping removed it
("changing" -> "chang" -> "change"). Rules are re-applied until the token
stops changing so that e.g. "settings" reduces the same way "setting" does.

The stop-word list deliberately keeps negations ("not", "no", "never"):
"internet not working" must survive as "internet not work".
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

TokenSeq = list[str]


@dataclass(frozen=True)
class LemmaRules:
    # (suffix, replacement, min_stem_len); first applicable rule fires.
    suffix_rules: tuple[tuple[str, str, int], ...]
    exceptions: dict[str, str]
    restore_e: frozenset[str]


_SUFFIX_RULES: tuple[tuple[str, str, int], ...] = (
    ("ies", "y", 2),
    ("sses", "ss", 1),
    ("ss", "ss", 1),  # leave -ss words alone ("class", "address")
    ("ing", "", 3),
    ("ed", "", 3),
    ("es", "", 2),
    ("s", "", 2),
)

# Irregulars, mapped to base forms so the stop list can be stated in bases.
_EXCEPTIONS: dict[str, str] = {
    "am": "be", "is": "be", "are": "be", "was": "be", "were": "be",
    "been": "be", "being": "be",
    "has": "have", "had": "have",
    "does": "do", "did": "do", "done": "do", "doing": "do",
    "went": "go", "gone": "go", "goes": "go", "going": "go",
    "got": "get", "gotten": "get", "getting": "get",
    "made": "make", "making": "make",
    "said": "say", "says": "say",
    "came": "come", "coming": "come",
    "gave": "give", "given": "give", "giving": "give",
    "took": "take", "taken": "take", "taking": "take",
    "found": "find", "left": "leave", "sent": "send", "kept": "keep",
    "told": "tell", "ran": "run", "running": "run", "saw": "see", "seen": "see",
    "tried": "try", "tries": "try", "trying": "try",
    "cannot": "cannot",
}

# Stems that lost a final "e" to suffix stripping ("chang" + "e" -> "change").
_RESTORE_E: frozenset[str] = frozenset(
    {
        "chang", "mak", "tak", "giv", "us", "shar", "stor", "sav", "mov",
        "remov", "updat", "upgrad", "creat", "delet", "issu", "manag",
        "expir", "requir", "receiv", "provid", "resolv", "schedul",
        "configur", "complet", "enabl", "disabl", "renam", "restor",
        "includ", "licens", "messag", "not", "pag",
    }
)

DEFAULT_RULES = LemmaRules(
    suffix_rules=_SUFFIX_RULES,
    exceptions=_EXCEPTIONS,
    restore_e=_RESTORE_E,
)

# Curated English function words in base form plus the inflected auxiliary
# forms that appear before lemmatization. Negations are excluded on purpose.
DEFAULT_STOPWORDS: frozenset[str] = frozenset(
    """
    a about above after again all am an and any are as at be because been
    being below between both but by can could did do does doing down during
    each few for from further had has have having he her here hers herself
    him himself his how i if in into is it its itself just me more most my
    myself of off on once only or other our ours ourselves out over own same
    she should so some such than that the their theirs them themselves then
    there these they this those through to too under until up us very was
    we were what when where which while who whom why will with would you
    your yours yourself yourselves im ive id thats theres youre youve hes
    shes
    """.split()
)


def tokenize(text: str) -> TokenSeq:
    """Lowercase and split on whitespace, dropping empty pieces."""
    return text.lower().split()


def _apply_rules_once(token: str, rules: LemmaRules) -> str:
    for suffix, replacement, min_stem in rules.suffix_rules:
        if token.endswith(suffix):
            stem = token[: len(token) - len(suffix)]
            if len(stem) < min_stem:
                continue
            result = stem + replacement
            if not replacement and stem in rules.restore_e:
                result = stem + "e"
            return result
    return token


def lemmatize(token: str, rules: LemmaRules = DEFAULT_RULES) -> str:
    """Reduce a lowercase token to its base form.

    The exception table wins outright; otherwise suffix rules run to a fixed
    point (each pass applies the first rule whose suffix and stem guard fit).
    Never returns an empty string.
    """
    if token in rules.exceptions:
        return rules.exceptions[token]
    current = token
    for _ in range(len(token)):
        if current in rules.exceptions:
            return rules.exceptions[current]
        stripped = _apply_rules_once(current, rules)
        if stripped == current:
            break
        current = stripped
    return current


def remove_stopwords(tokens: TokenSeq, stoplist: frozenset[str] | set[str] = DEFAULT_STOPWORDS) -> TokenSeq:
    return [t for t in tokens if t not in stoplist]


def preprocess(
    text: str,
    rules: LemmaRules = DEFAULT_RULES,
    stoplist: frozenset[str] | set[str] = DEFAULT_STOPWORDS,
) -> TokenSeq:
    """tokenize -> lemmatize each token -> remove stop-words."""
    return remove_stopwords([lemmatize(t, rules) for t in tokenize(text)], stoplist)


def load_stopwords(path: str | Path) -> frozenset[str]:
    """One word per line; blank lines and '#' comments ignored."""
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        word = line.strip().lower()
        if word and not word.startswith("#"):
            words.add(word)
    return frozenset(words)


def load_lemma_exceptions(path: str | Path) -> dict[str, str]:
    """Lines of "word<TAB>lemma"; merged over the built-in exceptions by callers."""
    table: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
            raise ValueError(f"{path}:{lineno}: expected 'word<TAB>lemma'")
        table[parts[0].strip().lower()] = parts[1].strip().lower()
    return table
