"""Keyword-driven category assignment.

Each clean email is assigned to the first category (by rank) whose keywords
occur in its text; unmatched emails are dropped. Matching is plain
case-insensitive substring matching, and keywords pass through the same
punctuation-deleting normalisation as email text, so hyphenated variants
like "wi-fi" keep working.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from .corpus import CleanEmail, normalize_text


class LabelingError(ValueError):
    """Invalid category configuration or unusable labeling outcome."""


@dataclass(frozen=True)
class CategorySpec:
    name: str
    keywords: tuple[str, ...]
    rank: int
    template_id: str


@dataclass(frozen=True)
class LabeledEmail:
    email: CleanEmail
    category: str


# The five shipped categories, in rank order. The "license" spelling is kept
# as configured; users can add variants such as "licence".
DEFAULT_CATEGORIES: tuple[CategorySpec, ...] = (
    CategorySpec("Adobe", ("Adobe", "Creative Cloud"), 0, "adobe"),
    CategorySpec("AppsAnywhere", ("AppsAnywhere", "license", "cloudpaging"), 1, "appsanywhere"),
    CategorySpec("Blackboard", ("blackboard",), 2, "blackboard"),
    CategorySpec(
        "password",
        ("password", "mfa", "multifactor", "multi-factor", "multi factor"),
        3,
        "password",
    ),
    CategorySpec(
        "WiFi",
        ("wifi", "wi-fi", "network", "eduroam", "connection", "internet", "remote access"),
        4,
        "wifi",
    ),
)


def normalize_keyword(keyword: str) -> str:
    """Apply the email cleaning rules plus lowercasing to a keyword."""
    return normalize_text(keyword).lower()


def validate_categories(categories: list[CategorySpec] | tuple[CategorySpec, ...]) -> None:
    if not categories:
        raise LabelingError("no categories configured")
    names = [c.name for c in categories]
    if len(set(names)) != len(names):
        raise LabelingError("category names must be unique")
    ranks = sorted(c.rank for c in categories)
    if ranks != list(range(len(categories))):
        raise LabelingError("category ranks must be unique and contiguous from 0")
    for cat in categories:
        if not cat.keywords:
            raise LabelingError(f"category {cat.name!r} has no keywords")
        if any(not normalize_keyword(k) for k in cat.keywords):
            raise LabelingError(f"category {cat.name!r} has an empty keyword after cleaning")


def load_categories(path: str | Path) -> list[CategorySpec]:
    """Read a category config file: a JSON list of {name, rank, keywords, template_id}."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise LabelingError(f"category config {path}: invalid JSON ({exc.msg})") from exc
    if not isinstance(data, list):
        raise LabelingError(f"category config {path}: expected a JSON list")
    categories = []
    for entry in data:
        try:
            categories.append(
                CategorySpec(
                    name=str(entry["name"]),
                    keywords=tuple(str(k) for k in entry["keywords"]),
                    rank=int(entry["rank"]),
                    template_id=str(entry["template_id"]),
                )
            )
        except (KeyError, TypeError) as exc:
            raise LabelingError(f"category config {path}: malformed entry {entry!r}") from exc
    categories.sort(key=lambda c: c.rank)
    validate_categories(categories)
    return categories


def save_categories(categories: list[CategorySpec] | tuple[CategorySpec, ...], path: str | Path) -> None:
    data = [
        {"name": c.name, "rank": c.rank, "keywords": list(c.keywords), "template_id": c.template_id}
        for c in sorted(categories, key=lambda c: c.rank)
    ]
    Path(path).write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")


def match_category(
    email: CleanEmail, categories: list[CategorySpec] | tuple[CategorySpec, ...]
) -> str | None:
    """Return the lowest-rank category with a keyword in the email, else None."""
    text = email.text.lower()
    for cat in sorted(categories, key=lambda c: c.rank):
        for keyword in cat.keywords:
            if normalize_keyword(keyword) in text:
                return cat.name
    return None


def build_labeled_corpus(
    emails: list[CleanEmail], categories: list[CategorySpec] | tuple[CategorySpec, ...]
) -> tuple[list[LabeledEmail], dict[str, int]]:
    """Label every matching email with its first-match category.

    Unmatched emails are dropped. Returns the labeled subset plus per-category
    counts (all configured categories present, zeros included). Raises when
    nothing matches at all.
    """
    validate_categories(categories)
    ordered = sorted(categories, key=lambda c: c.rank)
    labeled: list[LabeledEmail] = []
    counts: Counter[str] = Counter()
    for email in emails:
        category = match_category(email, ordered)
        if category is not None:
            labeled.append(LabeledEmail(email=email, category=category))
            counts[category] += 1
    if not labeled:
        raise LabelingError("no email matched any category keyword; nothing to train on")
    return labeled, {c.name: counts.get(c.name, 0) for c in ordered}
