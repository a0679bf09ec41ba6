"""Confidence-gated auto-reply composition.

The predicted category's snippet is embedded into a generic shell template
when the classifier is confident enough; otherwise the plain generic reply
goes out rather than risking irrelevant advice. The threshold comparison is
on the top-class probability (>= threshold means tailored); the opposite
reading is available behind a flag for experimentation.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .corpus import CleanEmail
from .labeling import CategorySpec
from .models import MlpModel, TreeModel
from .pipeline import classify_clean

MARKER = "{snippet}"

DEFAULT_THRESHOLD = 0.75


class TemplateError(ValueError):
    """Invalid reply-template configuration."""


@dataclass(frozen=True)
class TemplateSet:
    shell: str  # contains MARKER exactly once
    snippets: dict[str, str]  # template_id -> tailored paragraph

    def __post_init__(self) -> None:
        if self.shell.count(MARKER) != 1:
            raise TemplateError(f"generic shell must contain {MARKER!r} exactly once")
        for template_id, snippet in self.snippets.items():
            if MARKER in snippet:
                raise TemplateError(f"snippet {template_id!r} must not contain {MARKER!r}")


@dataclass(frozen=True)
class ReplyDecision:
    category: str | None
    confidence: float
    tailored: bool
    rendered: str


DEFAULT_TEMPLATES = TemplateSet(
    shell=(
        "Hello,\n"
        "\n"
        "Thank you for contacting the IT service desk. Your query has been\n"
        "logged and a member of the team will follow up as soon as possible.\n"
        "\n"
        "{snippet}\n"
        "\n"
        "Kind regards,\n"
        "IT Service Desk\n"
    ),
    snippets={
        "adobe": (
            "While you wait: Adobe sign-in problems are usually caused by an\n"
            "expired Creative Cloud licence. Signing out of the Creative Cloud\n"
            "app and back in with your university account often refreshes it."
        ),
        "appsanywhere": (
            "While you wait: AppsAnywhere launches need the Cloudpaging Player\n"
            "installed and validated. Re-open the portal, click Validate, and\n"
            "retry the launch before anything else."
        ),
        "blackboard": (
            "While you wait: most Blackboard errors clear after signing out,\n"
            "clearing the browser cache, and signing back in. The service\n"
            "status page lists any ongoing outages."
        ),
        "password": (
            "While you wait: you can reset a forgotten password yourself at\n"
            "the self-service portal. Have your MFA device ready to confirm\n"
            "the change."
        ),
        "wifi": (
            "While you wait: for eduroam problems, forget the network on your\n"
            "device and reconnect with your full university email address as\n"
            "the username."
        ),
    },
)


def load_templates(path: str | Path) -> TemplateSet:
    """Read a template file: {"generic_shell": str, "snippets": {id: text}}."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise TemplateError(f"template file {path}: invalid JSON ({exc.msg})") from exc
    if not isinstance(data, dict) or "generic_shell" not in data or "snippets" not in data:
        raise TemplateError(f"template file {path}: need 'generic_shell' and 'snippets'")
    return TemplateSet(
        shell=str(data["generic_shell"]),
        snippets={str(k): str(v) for k, v in data["snippets"].items()},
    )


def save_templates(templates: TemplateSet, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps({"generic_shell": templates.shell, "snippets": templates.snippets}, indent=2)
        + "\n",
        encoding="utf-8",
    )


def validate_templates(templates: TemplateSet, categories: Sequence[CategorySpec]) -> None:
    """Every category must have its snippet before any reply is composed."""
    missing = [c.template_id for c in categories if c.template_id not in templates.snippets]
    if missing:
        raise TemplateError(f"no snippet for template id(s): {', '.join(sorted(missing))}")


def render(templates: TemplateSet, snippet: str | None) -> str:
    """Fill the shell marker, or remove it cleanly for the generic reply."""
    rendered = templates.shell.replace(MARKER, snippet if snippet is not None else "")
    if snippet is None:
        rendered = re.sub(r"\n{3,}", "\n\n", rendered)
    return rendered


def build_reply(
    category: str,
    confidence: float,
    templates: TemplateSet,
    categories: Sequence[CategorySpec],
    threshold: float = DEFAULT_THRESHOLD,
    invert: bool = False,
) -> ReplyDecision:
    """Decide tailored vs generic from an already-computed classification.

    Default rule: tailored iff confidence >= threshold. ``invert`` flips the
    comparison (tailor only when confidence < threshold), the literal
    low-error reading, kept for experimentation.
    """
    validate_templates(templates, categories)
    tailored = (confidence < threshold) if invert else (confidence >= threshold)
    if tailored:
        by_name = {c.name: c.template_id for c in categories}
        rendered = render(templates, templates.snippets[by_name[category]])
    else:
        rendered = render(templates, None)
    return ReplyDecision(
        category=category, confidence=confidence, tailored=tailored, rendered=rendered
    )


def compose_reply(
    email: CleanEmail,
    model: MlpModel | TreeModel,
    templates: TemplateSet,
    categories: Sequence[CategorySpec],
    threshold: float = DEFAULT_THRESHOLD,
    invert: bool = False,
) -> ReplyDecision:
    """Classify one clean email and compose the matching reply."""
    category, confidence = classify_clean(model, email)
    return build_reply(category, confidence, templates, categories, threshold, invert)
