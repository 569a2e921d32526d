"""Local-vs-global expansion strategies, link matching, and the daily harness.

The local strategy expands a hashtag from that day's contextual vector; the
global strategy merges all daily vectors over a range once (max weight per
ngram) and applies the same fixed set to every day. A link matches when its
normalized title or description contains the hashtag, its word-broken form,
or any expansion ngram as a contiguous token run. Per-day match counts are
classified into four behaviors against a threshold, and a hashtag-day is
included iff its local count clears the threshold.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from datetime import date, timedelta
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple

from socialqe.index import HashtagIndex
from socialqe.ingest import LinkMetadata, normalize_and_tokenize
from socialqe.retrieval import broken_phrase

LOCAL = "local"
GLOBAL = "global"

GLOBAL_ONLY_HIGH = "GLOBAL_ONLY_HIGH"
LOCAL_ONLY_HIGH = "LOCAL_ONLY_HIGH"
BOTH_HIGH = "BOTH_HIGH"
BOTH_LOW = "BOTH_LOW"

CATEGORIES = (GLOBAL_ONLY_HIGH, LOCAL_ONLY_HIGH, BOTH_HIGH, BOTH_LOW)


@dataclass(frozen=True, slots=True)
class ExpansionSet:
    """Ranked expansion ngrams for one hashtag under one strategy.

    scope is the day (local) or the inclusive day range (global) the set was
    computed from; weights[i] is ngrams[i]'s score under that strategy (the
    day weight locally, the merged weight globally).
    """

    hashtag: str
    strategy: str
    scope: tuple[date, date]
    ngrams: tuple[str, ...]
    weights: tuple[float, ...]


@dataclass(frozen=True, slots=True)
class LinkMatch:
    """A matched link plus its witness: which phrase hit which field."""

    meta: LinkMetadata
    field: str
    phrase: str


@dataclass(frozen=True, slots=True)
class MatchSeries:
    hashtag: str
    strategy: str
    counts: dict[date, int]


class Classification(NamedTuple):
    category: str
    include: bool


@dataclass(frozen=True, slots=True)
class BehaviorVerdict:
    hashtag: str
    day: date
    local_count: int
    global_count: int
    category: str
    include: bool


@dataclass(frozen=True, slots=True)
class ComparisonResult:
    """Everything run_comparison produces for one hashtag set over one range."""

    day_range: tuple[date, date]
    series: dict[str, tuple[MatchSeries, MatchSeries]]
    verdicts: dict[tuple[str, date], BehaviorVerdict]
    totals: dict[date, tuple[int, int]]


def days_in(day_range: tuple[date, date]) -> list[date]:
    first, last = day_range
    if first > last:
        raise ValueError(f"day range {first}..{last} is reversed")
    return [first + timedelta(days=i) for i in range((last - first).days + 1)]


def _check_covered(index: HashtagIndex, day_range: tuple[date, date]):
    if index.span is None:
        raise ValueError("index has no span; nothing to evaluate")
    if day_range[0] < index.span[0] or day_range[1] > index.span[1]:
        raise ValueError(
            f"range {day_range[0]}..{day_range[1]} outside index span "
            f"{index.span[0]}..{index.span[1]}"
        )


def local_expansions(
    index: HashtagIndex, hashtag: str, day: date, n: int = 10
) -> ExpansionSet:
    """Top-n ngrams of that day's contextual vector; empty when no vector."""
    _check_covered(index, (day, day))
    entry = index.entries.get((hashtag, day))
    top = entry.vector[:n] if entry else ()
    return ExpansionSet(
        hashtag=hashtag,
        strategy=LOCAL,
        scope=(day, day),
        ngrams=tuple(e.ngram for e in top),
        weights=tuple(e.weight for e in top),
    )


def global_expansions(
    index: HashtagIndex,
    hashtag: str,
    day_range: tuple[date, date],
    n: int = 10,
    merge: str = "max",
) -> ExpansionSet:
    """One fixed top-n set for the whole range.

    Each ngram's merged score is its best daily weight (or the sum across
    days with merge="sum"). Order ties resolve by earliest best day, then the
    rank it held in that day's vector, then the ngram, which makes a one-day
    range reproduce local_expansions exactly.
    """
    _check_covered(index, day_range)
    if merge not in ("max", "sum"):
        raise ValueError(f"unknown merge mode {merge!r}")
    best: dict[str, tuple[float, int, int]] = {}
    for day in days_in(day_range):
        entry = index.entries.get((hashtag, day))
        if entry is None:
            continue
        ordinal = day.toordinal()
        for e in entry.vector:
            cand = (-e.weight, ordinal, e.rank)
            cur = best.get(e.ngram)
            if cur is None:
                best[e.ngram] = cand
            elif merge == "max":
                if cand < cur:
                    best[e.ngram] = cand
            else:
                best[e.ngram] = (cur[0] + cand[0], *cur[1:])
    ranked = sorted((key, ngram) for ngram, key in best.items())[:n]
    return ExpansionSet(
        hashtag=hashtag,
        strategy=GLOBAL,
        scope=day_range,
        ngrams=tuple(ngram for _, ngram in ranked),
        weights=tuple(-key[0] for key, _ in ranked),
    )


def _contains(hay: tuple[str, ...], needle: tuple[str, ...]) -> bool:
    if not needle or len(needle) > len(hay):
        return False
    first = needle[0]
    span = len(needle)
    for i in range(len(hay) - span + 1):
        if hay[i] == first and hay[i : i + span] == needle:
            return True
    return False


def match_links(
    day_links: Iterable[LinkMetadata],
    hashtag: str,
    expansions: ExpansionSet,
    lexicon: frozenset[str] | set[str],
    stopwords: frozenset[str] | set[str],
) -> list[LinkMatch]:
    """Links whose title or description contains any query phrase.

    Phrases tried in order: the raw hashtag token, its word-broken form, then
    each expansion ngram; the first hit is recorded as the witness. Matching
    is containment of the phrase's token run inside the normalized field
    tokens (both sides stopword-filtered). Input order is preserved and
    duplicate canonical URLs are checked once.
    """
    needles: list[tuple[str, tuple[str, ...]]] = []
    seen_needles = set()

    def add_needle(phrase: str):
        tokens = tuple(t for t in phrase.split() if t not in stopwords)
        if tokens and tokens not in seen_needles:
            seen_needles.add(tokens)
            needles.append((" ".join(tokens), tokens))

    add_needle(hashtag)
    add_needle(broken_phrase(hashtag, lexicon, stopwords))
    for ngram in expansions.ngrams:
        add_needle(ngram)

    matched = []
    seen_urls = set()
    for meta in day_links:
        if meta.url.full in seen_urls:
            continue
        seen_urls.add(meta.url.full)
        fields = (
            ("title", tuple(normalize_and_tokenize(meta.title, stopwords))),
            ("description", tuple(normalize_and_tokenize(meta.description, stopwords))),
        )
        hit = None
        for phrase, tokens in needles:
            for field_name, hay in fields:
                if _contains(hay, tokens):
                    hit = LinkMatch(meta=meta, field=field_name, phrase=phrase)
                    break
            if hit:
                break
        if hit:
            matched.append(hit)
    return matched


def classify_behavior(
    local_count: int, global_count: int, threshold: int
) -> Classification:
    """Four-way day classification; include iff the local count is high."""
    if threshold < 1:
        raise ValueError("threshold must be >= 1")
    local_high = local_count >= threshold
    global_high = global_count >= threshold
    if local_high and global_high:
        category = BOTH_HIGH
    elif local_high:
        category = LOCAL_ONLY_HIGH
    elif global_high:
        category = GLOBAL_ONLY_HIGH
    else:
        category = BOTH_LOW
    return Classification(category=category, include=local_high)


def run_comparison(
    index: HashtagIndex,
    hashtags: Iterable[str],
    day_range: tuple[date, date] | None = None,
    n: int | None = None,
    metadata: Mapping[str, LinkMetadata] | None = None,
    threshold: int | None = None,
    merge: str = "max",
) -> ComparisonResult:
    """Count matched links per day under both strategies for each hashtag.

    Candidate links for a day are every link seen in the corpus that day that
    has metadata. Defaults come from the index: its span, its params'
    expansion_size and threshold, and its stored metadata.
    """
    if day_range is None:
        if index.span is None:
            raise ValueError("index has no span; pass an explicit day range")
        day_range = index.span
    _check_covered(index, day_range)
    if n is None:
        n = index.params.expansion_size
    if threshold is None:
        threshold = index.params.threshold
    if metadata is None:
        metadata = index.metadata
    tags = sorted(set(hashtags))
    days = days_in(day_range)

    day_candidates: dict[date, list[LinkMetadata]] = {}
    for day in days:
        day_candidates[day] = [
            metadata[full] for full in index.links_on(day) if full in metadata
        ]

    series: dict[str, tuple[MatchSeries, MatchSeries]] = {}
    verdicts: dict[tuple[str, date], BehaviorVerdict] = {}
    totals = {day: (0, 0) for day in days}
    for tag in tags:
        global_set = global_expansions(index, tag, day_range, n, merge)
        local_counts: dict[date, int] = {}
        global_counts: dict[date, int] = {}
        for day in days:
            local_set = local_expansions(index, tag, day, n)
            candidates = day_candidates[day]
            local_n = len(
                match_links(candidates, tag, local_set, index.lexicon, index.stopwords)
            )
            global_n = len(
                match_links(candidates, tag, global_set, index.lexicon, index.stopwords)
            )
            local_counts[day] = local_n
            global_counts[day] = global_n
            category, include = classify_behavior(local_n, global_n, threshold)
            verdicts[(tag, day)] = BehaviorVerdict(
                hashtag=tag,
                day=day,
                local_count=local_n,
                global_count=global_n,
                category=category,
                include=include,
            )
            lt, gt = totals[day]
            totals[day] = (lt + local_n, gt + global_n)
        series[tag] = (
            MatchSeries(hashtag=tag, strategy=LOCAL, counts=local_counts),
            MatchSeries(hashtag=tag, strategy=GLOBAL, counts=global_counts),
        )
    return ComparisonResult(
        day_range=day_range, series=series, verdicts=verdicts, totals=totals
    )


def write_comparison_csvs(result: ComparisonResult, out_dir: str | Path) -> list[Path]:
    """One CSV per hashtag plus totals.csv; returns the paths written."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    days = days_in(result.day_range)
    written = []
    for tag in sorted(result.series):
        path = out / f"{tag}.csv"
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(["day", "local_count", "global_count", "category", "include"])
            for day in days:
                v = result.verdicts[(tag, day)]
                writer.writerow(
                    [
                        day.isoformat(),
                        v.local_count,
                        v.global_count,
                        v.category,
                        str(v.include).lower(),
                    ]
                )
        written.append(path)
    totals_path = out / "totals.csv"
    with open(totals_path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["day", "local_total", "global_total"])
        for day in days:
            lt, gt = result.totals[day]
            writer.writerow([day.isoformat(), lt, gt])
    written.append(totals_path)
    return written


def read_series_csv(path: str | Path) -> tuple[MatchSeries, MatchSeries]:
    """Parse one per-hashtag CSV back into its (local, global) series."""
    path = Path(path)
    tag = path.stem
    local_counts: dict[date, int] = {}
    global_counts: dict[date, int] = {}
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        for row in reader:
            day = date.fromisoformat(row["day"])
            local_counts[day] = int(row["local_count"])
            global_counts[day] = int(row["global_count"])
    return (
        MatchSeries(hashtag=tag, strategy=LOCAL, counts=local_counts),
        MatchSeries(hashtag=tag, strategy=GLOBAL, counts=global_counts),
    )
