"""Crawl-log ingestion and third-party tracking analytics.

Crawl logs are JSON Lines, one page visit per line, carrying the cookies
observed and the third-party request domains.  Third-party status is
recomputed here from registrable domains rather than trusted from the
logger, so one identity rule governs the whole analysis.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Collection, Iterable, Mapping, Sequence

import numpy as np

from .errors import MalformedRecord, MalformedUrl, UnknownTopic
from .stats import Summary, summary
from .urls import PageUrl, normalize, registrable_domain

HOMEPAGE_TOPIC = "homepage"

ADVERTISING = "Advertising"
CONTENT_SOCIAL = "Content & Social"
ANALYTICS = "Analytics"
FINGERPRINTING = "Fingerprinting"
UNKNOWN = "Unknown"

CATEGORIES = (ADVERTISING, CONTENT_SOCIAL, ANALYTICS, FINGERPRINTING)

# upstream service-list category names -> our four analysis buckets
_UPSTREAM_CATEGORY_MAP = {
    "Advertising": ADVERTISING,
    "Analytics": ANALYTICS,
    "Fingerprinting": FINGERPRINTING,
    "FingerprintingInvasive": FINGERPRINTING,
    "FingerprintingGeneral": FINGERPRINTING,
    "Content": CONTENT_SOCIAL,
    "Social": CONTENT_SOCIAL,
}


@dataclass(frozen=True)
class Cookie:
    name: str
    cookie_domain: str
    is_third_party: bool


@dataclass(frozen=True)
class TpRequest:
    request_domain: str
    is_third_party: bool


@dataclass(frozen=True)
class CrawlRecord:
    page_url: PageUrl
    site: str
    topic: str  # a configured topic name, or "homepage"
    crawl_id: str
    cookies: tuple[Cookie, ...]
    requests: tuple[TpRequest, ...]
    redirects: int


def _clean_domain(domain: str) -> str:
    return domain.strip().lower().lstrip(".")


def ingest_logs(
    lines: Iterable[str],
    topics: Collection[str] | None = None,
) -> list[CrawlRecord]:
    """Parse crawl-log lines into records.

    When *topics* is given, any record whose topic is neither in the set
    nor "homepage" raises UnknownTopic.  is_third_party flags in the input
    are recomputed against the record's site.
    """
    records: list[CrawlRecord] = []
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedRecord(f"line {lineno}: not JSON: {exc}") from exc
        try:
            record = _parse_record(obj)
        except (KeyError, TypeError, ValueError, MalformedUrl) as exc:
            raise MalformedRecord(f"line {lineno}: {exc}") from exc
        if (
            topics is not None
            and record.topic != HOMEPAGE_TOPIC
            and record.topic not in topics
        ):
            raise UnknownTopic(f"line {lineno}: topic {record.topic!r} is not configured")
        records.append(record)
    return records


def _parse_record(obj: dict) -> CrawlRecord:
    if not isinstance(obj, dict):
        raise ValueError("record must be an object")
    site = registrable_domain(_clean_domain(str(obj["site"])))
    if not site:
        raise ValueError("empty site")
    cookies = []
    for c in obj.get("cookies", []):
        domain = _clean_domain(str(c["cookie_domain"]))
        cookies.append(
            Cookie(
                name=str(c.get("name", "")),
                cookie_domain=domain,
                is_third_party=registrable_domain(domain) != site,
            )
        )
    requests = []
    for r in obj.get("requests", []):
        domain = _clean_domain(str(r["request_domain"]))
        requests.append(
            TpRequest(
                request_domain=domain,
                is_third_party=registrable_domain(domain) != site,
            )
        )
    redirects = int(obj.get("redirects", 0))
    if redirects < 0:
        raise ValueError("redirects must be non-negative")
    return CrawlRecord(
        page_url=normalize(str(obj["page_url"])),
        site=site,
        topic=str(obj["topic"]),
        crawl_id=str(obj.get("crawl_id", "")),
        cookies=tuple(cookies),
        requests=tuple(requests),
        redirects=redirects,
    )


def read_crawl_log(path: str | Path, topics: Collection[str] | None = None) -> list[CrawlRecord]:
    with open(path, encoding="utf-8") as fh:
        return ingest_logs(fh, topics)


def record_third_parties(record: CrawlRecord) -> frozenset[str]:
    """Registrable domains of every third party seen on the visit."""
    domains = {
        registrable_domain(c.cookie_domain) for c in record.cookies if c.is_third_party
    }
    domains.update(
        registrable_domain(r.request_domain) for r in record.requests if r.is_third_party
    )
    return frozenset(domains)


def cookie_stats_by_topic(records: Sequence[CrawlRecord]) -> dict[str, Summary]:
    """Distribution of per-visit third-party cookie counts, per topic."""
    per_topic: dict[str, list[int]] = {}
    for r in records:
        count = sum(c.is_third_party for c in r.cookies)
        per_topic.setdefault(r.topic, []).append(count)
    return {topic: summary(counts) for topic, counts in sorted(per_topic.items())}


# --- tracker categorization --------------------------------------------------

@dataclass(frozen=True)
class DisconnectList:
    """Registrable tracker domain -> category."""

    entries: Mapping[str, str]


def load_disconnect_tsv(text: str) -> DisconnectList:
    """Parse the canonical two-column (domain, category) TSV."""
    entries: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise MalformedRecord(f"line {lineno}: expected 'domain<TAB>category'")
        domain, category = _clean_domain(parts[0]), parts[1].strip()
        if category not in CATEGORIES:
            raise MalformedRecord(f"line {lineno}: unknown category {category!r}")
        entries.setdefault(domain, category)
    return DisconnectList(entries)


def load_disconnect_file(path: str | Path) -> DisconnectList:
    return load_disconnect_tsv(Path(path).read_text("utf-8"))


def convert_disconnect_services(document: str | bytes) -> DisconnectList:
    """Flatten the upstream nested services JSON into canonical entries.

    Content and Social merge into one bucket; categories outside the four
    analysed ones are dropped.  The first category claiming a domain wins.
    """
    if isinstance(document, bytes):
        document = document.decode("utf-8")
    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise MalformedRecord(f"not valid JSON: {exc}") from exc
    entries: dict[str, str] = {}
    for upstream_name, services in data.get("categories", {}).items():
        category = _UPSTREAM_CATEGORY_MAP.get(upstream_name)
        if category is None:
            continue
        for service in services:
            for _, site_map in service.items():
                for _, domains in site_map.items():
                    if not isinstance(domains, list):
                        continue
                    for domain in domains:
                        reg = registrable_domain(_clean_domain(str(domain)))
                        entries.setdefault(reg, category)
    return DisconnectList(entries)


def disconnect_to_tsv(dl: DisconnectList) -> str:
    lines = [f"{domain}\t{category}" for domain, category in sorted(dl.entries.items())]
    return "\n".join(lines) + "\n" if lines else ""


def categorize(tp_domain: str, dl: DisconnectList) -> str:
    """Category of a third-party domain; subdomains inherit parent entries."""
    host = _clean_domain(tp_domain)
    reg = registrable_domain(host)
    probe = host
    while True:
        category = dl.entries.get(probe)
        if category is not None:
            return category
        if probe == reg or "." not in probe:
            return UNKNOWN
        probe = probe.split(".", 1)[1]


def category_breakdown(
    records: Sequence[CrawlRecord],
    dl: DisconnectList,
    sites: Collection[str] | None = None,
) -> dict[str, dict[str, int]]:
    """Distinct third parties per category for each topic.

    Pass *sites* to restrict the statistic to a subset of sites (e.g. the
    most trafficked ones).  All five category keys are always present.
    """
    tps_by_topic: dict[str, set[str]] = {}
    for r in records:
        if sites is not None and r.site not in sites:
            continue
        tps_by_topic.setdefault(r.topic, set()).update(record_third_parties(r))
    out: dict[str, dict[str, int]] = {}
    for topic, tps in sorted(tps_by_topic.items()):
        counts = dict.fromkeys(CATEGORIES + (UNKNOWN,), 0)
        for tp in tps:
            counts[categorize(tp, dl)] += 1
        out[topic] = counts
    return out


NEW_MARKER = "new"


def percent_diff_vs_homepage(
    breakdown: Mapping[str, Mapping[str, int]],
) -> dict[str, dict[str, float | str]]:
    """Per-topic percent change of category counts relative to the homepage row.

    A category absent on homepages but present on a topic has no base to
    divide by and is reported as the string "new".
    """
    if HOMEPAGE_TOPIC not in breakdown:
        raise ValueError("breakdown lacks a homepage row")
    home = breakdown[HOMEPAGE_TOPIC]
    out: dict[str, dict[str, float | str]] = {}
    for topic, counts in breakdown.items():
        if topic == HOMEPAGE_TOPIC:
            continue
        row: dict[str, float | str] = {}
        for category in CATEGORIES + (UNKNOWN,):
            base = home.get(category, 0)
            value = counts.get(category, 0)
            if base == 0:
                row[category] = NEW_MARKER if value > 0 else 0.0
            else:
                row[category] = 100.0 * (value - base) / base
        out[topic] = row
    return out


# --- the topic x third-party matrix ------------------------------------------

@dataclass(frozen=True, eq=False)
class TrackingMatrix:
    """Binary presence of each third party on each topic's pages."""

    topics: tuple[str, ...]
    third_parties: tuple[str, ...]
    cells: np.ndarray

    def to_dict(self) -> dict:
        return {
            "topics": list(self.topics),
            "third_parties": list(self.third_parties),
            "cells": [[int(c) for c in row] for row in self.cells],
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "TrackingMatrix":
        topics = tuple(obj["topics"])
        tps = tuple(obj["third_parties"])
        cells = np.asarray(obj["cells"], dtype=int)
        if cells.shape != (len(topics), len(tps)):
            raise ValueError("cells shape does not match labels")
        return cls(topics, tps, cells)

    def equals(self, other: "TrackingMatrix") -> bool:
        return (
            self.topics == other.topics
            and self.third_parties == other.third_parties
            and np.array_equal(self.cells, other.cells)
        )


def build_tracking_matrix(
    records: Sequence[CrawlRecord],
    topics: Collection[str] | None = None,
) -> TrackingMatrix:
    """Rows are topics (lexicographic), columns third parties (lexicographic).

    Configured topics without records appear as zero rows, so matrices from
    different crawls line up.
    """
    row_labels = {r.topic for r in records}
    if topics is not None:
        row_labels.update(topics)
    tps: set[str] = set()
    presence: dict[str, set[str]] = {t: set() for t in row_labels}
    for r in records:
        observed = record_third_parties(r)
        tps.update(observed)
        presence[r.topic].update(observed)
    topic_order = tuple(sorted(row_labels))
    tp_order = tuple(sorted(tps))
    cells = np.zeros((len(topic_order), len(tp_order)), dtype=int)
    tp_index = {tp: j for j, tp in enumerate(tp_order)}
    for i, topic in enumerate(topic_order):
        for tp in presence.get(topic, ()):
            cells[i, tp_index[tp]] = 1
    return TrackingMatrix(topic_order, tp_order, cells)


def top_tp_coverage(
    records: Sequence[CrawlRecord],
    k: int,
) -> list[tuple[str, dict[str, float]]]:
    """Per-topic page coverage of the k third parties setting the most cookies.

    Coverage of a third party on a topic is the percentage of that topic's
    visits where the third party appears.  Ranking ties break by name.
    """
    if k < 1:
        raise ValueError("k must be positive")
    cookie_counts: Counter = Counter()
    for r in records:
        for c in r.cookies:
            if c.is_third_party:
                cookie_counts[registrable_domain(c.cookie_domain)] += 1
    pool = {tp for r in records for tp in record_third_parties(r)}
    ranked = sorted(pool, key=lambda tp: (-cookie_counts.get(tp, 0), tp))[:k]
    visits_by_topic: dict[str, int] = Counter(r.topic for r in records)
    out = []
    for tp in ranked:
        coverage = {}
        for topic, visits in sorted(visits_by_topic.items()):
            present = sum(1 for r in records if r.topic == topic and tp in record_third_parties(r))
            coverage[topic] = 100.0 * present / visits
        out.append((tp, coverage))
    return out


def preferential_attachment(m: TrackingMatrix) -> list[tuple[str, str]]:
    """Third parties present in exactly one topic row, homepage excluded.

    These are trackers whose interest is the audience of one section, not
    the site in general; the homepage row says nothing about that, so it
    does not participate in the count.
    """
    topic_rows = [i for i, t in enumerate(m.topics) if t != HOMEPAGE_TOPIC]
    pairs: list[tuple[str, str]] = []
    for j, tp in enumerate(m.third_parties):
        col = m.cells[topic_rows, j] if topic_rows else np.zeros(0, dtype=int)
        if int(col.sum()) == 1:
            row = topic_rows[int(np.argmax(col))]
            pairs.append((tp, m.topics[row]))
    return sorted(pairs)
