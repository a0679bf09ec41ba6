"""Raw email ingestion and normalisation.

Reads helpdesk email exports (JSONL or CSV), keeps only incoming traffic,
and flattens each email into one clean text string: subject and body
concatenated, punctuation deleted outright, whitespace collapsed. Casing
is preserved here; lowercasing happens during tokenization.
"""
from __future__ import annotations

import csv
import json
import string
from dataclasses import dataclass
from pathlib import Path

# Deleted, not replaced by spaces, so "wi-fi" -> "wifi" and "can't" -> "cant".
PUNCTUATION = string.punctuation
_DELETE_PUNCT = str.maketrans("", "", PUNCTUATION)

DIRECTIONS = ("incoming", "outgoing")
CSV_COLUMNS = ("id", "thread_id", "direction", "subject", "body", "timestamp")
_REQUIRED = ("id", "thread_id", "direction", "subject", "body")


class CorpusError(ValueError):
    """Unreadable or malformed corpus data."""


@dataclass(frozen=True)
class RawEmail:
    id: str
    thread_id: str
    direction: str
    subject: str
    body: str
    timestamp: str | None = None


@dataclass(frozen=True)
class CleanEmail:
    id: str
    text: str


def normalize_text(text: str) -> str:
    """Delete punctuation and collapse runs of whitespace to single spaces."""
    return " ".join(text.translate(_DELETE_PUNCT).split())


def _email_from_record(record: dict, where: str) -> RawEmail:
    for field in _REQUIRED:
        if field not in record or record[field] is None:
            raise CorpusError(f"{where}: missing field '{field}'")
    direction = str(record["direction"])
    if direction not in DIRECTIONS:
        raise CorpusError(
            f"{where}: unknown direction {direction!r} (expected one of {DIRECTIONS})"
        )
    timestamp = record.get("timestamp")
    if timestamp is not None:
        timestamp = str(timestamp) or None
    return RawEmail(
        id=str(record["id"]),
        thread_id=str(record["thread_id"]),
        direction=direction,
        subject=str(record["subject"]),
        body=str(record["body"]),
        timestamp=timestamp,
    )


def ingest(path: str | Path, fmt: str | None = None) -> list[RawEmail]:
    """Load a corpus file into RawEmail records, preserving input order.

    ``fmt`` is "jsonl" or "csv"; when omitted it is inferred from the file
    suffix (.csv means CSV, anything else JSONL).
    """
    path = Path(path)
    if fmt is None:
        fmt = "csv" if path.suffix.lower() == ".csv" else "jsonl"
    if fmt not in ("jsonl", "csv"):
        raise CorpusError(f"unknown corpus format {fmt!r}")
    if not path.exists():
        raise CorpusError(f"corpus file not found: {path}")

    emails: list[RawEmail] = []
    if fmt == "jsonl":
        with path.open(encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    record = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise CorpusError(f"line {lineno}: invalid JSON ({exc.msg})") from exc
                if not isinstance(record, dict):
                    raise CorpusError(f"line {lineno}: expected a JSON object")
                emails.append(_email_from_record(record, f"line {lineno}"))
    else:
        with path.open(encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh)
            for rownum, row in enumerate(reader, start=2):  # row 1 is the header
                record = {k: v for k, v in row.items() if k is not None}
                if record.get("timestamp") == "":
                    record["timestamp"] = None
                emails.append(_email_from_record(record, f"row {rownum}"))

    seen: set[str] = set()
    for email in emails:
        if email.id in seen:
            raise CorpusError(f"duplicate email id {email.id!r}")
        seen.add(email.id)
    return emails


def write_jsonl(emails: list[RawEmail], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for email in emails:
            fh.write(
                json.dumps(
                    {
                        "id": email.id,
                        "thread_id": email.thread_id,
                        "direction": email.direction,
                        "subject": email.subject,
                        "body": email.body,
                        "timestamp": email.timestamp,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )


def filter_incoming(emails: list[RawEmail]) -> list[RawEmail]:
    """Keep only incoming emails, preserving order."""
    return [e for e in emails if e.direction == "incoming"]


def clean(email: RawEmail) -> CleanEmail:
    """Concatenate subject and body and normalise into one clean string.

    The timestamp is dropped at this point. Raises CorpusError when nothing
    survives cleaning.
    """
    text = normalize_text(f"{email.subject} {email.body}")
    if not text:
        raise CorpusError(f"email {email.id!r}: empty after cleaning")
    return CleanEmail(id=email.id, text=text)
