"""Tweet stream ingestion: parsing, normalization, tokenization, URL and hashtag handling.

Input corpora are UTF-8 line-delimited JSON, one record per line with fields
``id``, ``user_id``, ``created_at`` (ISO-8601 UTC), ``text``, ``is_retweet``,
``retweet_of`` (required iff is_retweet), ``urls`` and ``hashtags``.
Everything in this module is pure given its configuration and safe to call
from multiple threads; a stream parser instance is single-consumer.
"""

from __future__ import annotations

import json
import re
import unicodedata
from dataclasses import dataclass, field
from datetime import date, datetime, timezone
from pathlib import Path
from typing import Iterable, Iterator, Mapping
from urllib.parse import parse_qsl, urlencode, urlsplit, urlunsplit

# Small general-purpose English list plus the usual Twitter debris (rt, via, amp).
DEFAULT_STOPWORDS = frozenset("""
    a about after again all also am an and any are as at be because been before
    being but by can could did do does doing down for from had has have having
    he her here hers him his how i if in into is it its itself just me more
    most my no nor not of off on once only or other our ours out over own she
    so some such than that the their theirs them then there these they this
    those through to too under until up very was we were what when where which
    while who whom why will with you your yours
    i'm i've i'll it's he's she's that's there's they're we're you're don't
    doesn't didn't isn't aren't wasn't weren't can't won't couldn't shouldn't
    wouldn't
    s t m d ll re ve o y u
    rt via amp
""".split())

# Query parameters stripped during URL canonicalization; a trailing '*' marks a prefix.
DEFAULT_TRACKING_PARAMS = ("utm_*", "fbclid", "gclid")

_URL_RE = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)
_MENTION_RE = re.compile(r"@\w+")
_HASHTAG_RE = re.compile(r"#\w+")
# Letters/digits only; intra-word apostrophes and hyphens survive, everything
# else separates tokens (underscore included).
_WORD_RE = re.compile(r"[^\W_]+(?:['’-][^\W_]+)*")


@dataclass(frozen=True, slots=True)
class CanonicalUrl:
    """A normalized absolute URL used as a link identity key.

    ``full`` is the canonical form (lowercased scheme/host, fragment stripped,
    tracking parameters removed); ``file_name`` is the last path segment, empty
    when the path ends in '/'.
    """

    full: str
    host: str
    path: str
    file_name: str


@dataclass(frozen=True, slots=True)
class TweetRecord:
    """One post from the stream. ``is_retweet`` is true iff ``retweet_of`` is set."""

    tweet_id: str
    account_id: str
    timestamp: datetime
    text: str
    hashtags: tuple[str, ...]
    links: tuple[CanonicalUrl, ...]
    is_retweet: bool = False
    retweet_of: str | None = None

    @property
    def day(self) -> date:
        ts = self.timestamp
        if ts.tzinfo is not None:
            ts = ts.astimezone(timezone.utc)
        return ts.date()


@dataclass(frozen=True, slots=True)
class LinkMetadata:
    """Crawled title/description for one canonical link. Either field may be empty."""

    url: CanonicalUrl
    title: str = ""
    description: str = ""


@dataclass(slots=True)
class ParseStats:
    """Line accounting for one stream pass: lines == parsed + skipped."""

    lines: int = 0
    parsed: int = 0
    skipped: int = 0


def _tracking_matcher(tracking_params: Iterable[str]):
    exact = set()
    prefixes = []
    for p in tracking_params:
        if p.endswith("*"):
            prefixes.append(p[:-1])
        else:
            exact.add(p)
    prefixes = tuple(prefixes)

    def is_tracking(name: str) -> bool:
        return name in exact or any(name.startswith(pre) for pre in prefixes)

    return is_tracking


def canonicalize_url(
    raw: str,
    tracking_params: Iterable[str] = DEFAULT_TRACKING_PARAMS,
    aliases: Mapping[str, str] | None = None,
) -> CanonicalUrl:
    """Normalize an absolute URL into its canonical identity.

    Lowercases scheme and host, strips the fragment, and drops tracking query
    parameters. Idempotent: canonicalizing a canonical URL is a no-op. An
    optional alias map substitutes known shortened URLs before parsing.

    Raises ValueError for anything that does not parse as an absolute URL.
    """
    if aliases:
        raw = aliases.get(raw, raw)
    raw = raw.strip()
    try:
        parts = urlsplit(raw)
    except ValueError as exc:
        raise ValueError(f"unparseable URL {raw!r}: {exc}") from None
    if not parts.scheme or not parts.netloc:
        raise ValueError(f"not an absolute URL: {raw!r}")
    is_tracking = _tracking_matcher(tracking_params)
    pairs = [
        (k, v)
        for k, v in parse_qsl(parts.query, keep_blank_values=True)
        if not is_tracking(k)
    ]
    query = urlencode(pairs)
    netloc = parts.netloc.lower()
    full = urlunsplit((parts.scheme.lower(), netloc, parts.path, query, ""))
    host = parts.hostname or ""
    file_name = parts.path.rsplit("/", 1)[-1]
    return CanonicalUrl(full=full, host=host, path=parts.path, file_name=file_name)


def url_from_canonical(full: str) -> CanonicalUrl:
    """Rebuild a CanonicalUrl from an already-canonical string.

    Used by the index loader: no re-filtering, so URLs built under a custom
    tracking-parameter config survive a round trip untouched.
    """
    parts = urlsplit(full)
    return CanonicalUrl(
        full=full,
        host=parts.hostname or "",
        path=parts.path,
        file_name=parts.path.rsplit("/", 1)[-1],
    )


def normalize_and_tokenize(
    text: str, stopwords: frozenset[str] | set[str] = DEFAULT_STOPWORDS
) -> list[str]:
    """Lowercase and tokenize free text, dropping URLs, @-mentions and #tags.

    Unicode is NFC-folded first; non-letter/digit codepoints separate tokens
    except intra-word apostrophes and hyphens. Stopwords are removed, order is
    preserved. Deterministic for equal input and configuration.
    """
    if not text:
        return []
    text = unicodedata.normalize("NFC", text)
    text = _URL_RE.sub(" ", text)
    text = _MENTION_RE.sub(" ", text)
    text = _HASHTAG_RE.sub(" ", text)
    text = text.lower()
    return [t for t in _WORD_RE.findall(text) if t not in stopwords]


def word_break_hashtag(tag: str, lexicon: frozenset[str] | set[str]) -> list[str]:
    """Segment a hashtag body into lexicon words.

    Picks the segmentation with the fewest segments, breaking ties by the
    lexicographically smallest token sequence. Falls back to the whole tag as
    a single token when no full segmentation exists (the function is total).
    """
    if not tag:
        return []
    n = len(tag)
    max_len = 0
    for w in lexicon:
        if len(w) > max_len:
            max_len = len(w)
    if max_len == 0:
        return [tag]
    # best[i] = (segment count, tokens) for tag[:i]; tuple order gives the tie-break.
    best: list[tuple[int, tuple[str, ...]] | None] = [None] * (n + 1)
    best[0] = (0, ())
    for i in range(1, n + 1):
        chosen = None
        for j in range(max(0, i - max_len), i):
            prev = best[j]
            if prev is None:
                continue
            piece = tag[j:i]
            if piece in lexicon:
                cand = (prev[0] + 1, prev[1] + (piece,))
                if chosen is None or cand < chosen:
                    chosen = cand
        best[i] = chosen
    final = best[n]
    if final is None:
        return [tag]
    return list(final[1])


def _normalize_hashtag(h: object) -> str | None:
    if not isinstance(h, str):
        return None
    h = unicodedata.normalize("NFC", h.strip().lstrip("#")).lower()
    if not h or any(c.isspace() for c in h):
        return None
    return h


def _parse_timestamp(value: object) -> datetime | None:
    if not isinstance(value, str) or not value:
        return None
    try:
        ts = datetime.fromisoformat(value.replace("Z", "+00:00"))
    except ValueError:
        return None
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc).replace(microsecond=0)


def _parse_line(
    line: str,
    tracking_params: Iterable[str],
    aliases: Mapping[str, str] | None,
) -> TweetRecord | None:
    line = line.strip()
    if not line:
        return None
    try:
        obj = json.loads(line)
    except json.JSONDecodeError:
        return None
    if not isinstance(obj, dict):
        return None
    tweet_id = obj.get("id")
    account_id = obj.get("user_id")
    if not isinstance(tweet_id, str) or not tweet_id:
        return None
    if not isinstance(account_id, str) or not account_id:
        return None
    timestamp = _parse_timestamp(obj.get("created_at"))
    if timestamp is None:
        return None
    text = obj.get("text", "")
    if not isinstance(text, str):
        return None
    is_retweet = obj.get("is_retweet", False)
    if not isinstance(is_retweet, bool):
        return None
    retweet_of = obj.get("retweet_of")
    if retweet_of is not None and not isinstance(retweet_of, str):
        return None
    if is_retweet != bool(retweet_of):
        return None
    raw_tags = obj.get("hashtags", [])
    raw_urls = obj.get("urls", [])
    if not isinstance(raw_tags, list) or not isinstance(raw_urls, list):
        return None
    hashtags = []
    for h in raw_tags:
        norm = _normalize_hashtag(h)
        if norm is not None:
            hashtags.append(norm)
    links = []
    for u in raw_urls:
        if not isinstance(u, str):
            continue
        try:
            links.append(canonicalize_url(u, tracking_params, aliases))
        except ValueError:
            continue  # bad link: drop the link, keep the tweet
    return TweetRecord(
        tweet_id=tweet_id,
        account_id=account_id,
        timestamp=timestamp,
        text=text,
        hashtags=tuple(hashtags),
        links=tuple(links),
        is_retweet=is_retweet,
        retweet_of=retweet_of if is_retweet else None,
    )


def parse_stream(
    lines: Iterable[str],
    stats: ParseStats | None = None,
    tracking_params: Iterable[str] = DEFAULT_TRACKING_PARAMS,
    aliases: Mapping[str, str] | None = None,
) -> Iterator[TweetRecord]:
    """Yield TweetRecords from a line-delimited stream in input order.

    Malformed lines (bad JSON, missing or inconsistent fields, blank lines)
    are skipped, never fatal; pass a ParseStats to observe the skip count.
    """
    if stats is None:
        stats = ParseStats()
    for line in lines:
        stats.lines += 1
        record = _parse_line(line, tracking_params, aliases)
        if record is None:
            stats.skipped += 1
            continue
        stats.parsed += 1
        yield record


def parse_metadata(
    lines: Iterable[str],
    tracking_params: Iterable[str] = DEFAULT_TRACKING_PARAMS,
    aliases: Mapping[str, str] | None = None,
) -> dict[str, LinkMetadata]:
    """Read link metadata JSONL (url/title/description) keyed by canonical URL.

    Malformed lines and unparseable URLs are skipped; on duplicate canonical
    URLs the last record wins.
    """
    out: dict[str, LinkMetadata] = {}
    for line in lines:
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError:
            continue
        if not isinstance(obj, dict) or not isinstance(obj.get("url"), str):
            continue
        try:
            url = canonicalize_url(obj["url"], tracking_params, aliases)
        except ValueError:
            continue
        title = obj.get("title", "")
        description = obj.get("description", "")
        if not isinstance(title, str) or not isinstance(description, str):
            continue
        out[url.full] = LinkMetadata(url=url, title=title, description=description)
    return out


def load_wordlist(path: str | Path) -> frozenset[str]:
    """Load a one-entry-per-line UTF-8 word list (stopwords or lexicon)."""
    words = set()
    with open(path, encoding="utf-8") as f:
        for line in f:
            w = line.strip().lower()
            if w:
                words.add(w)
    return frozenset(words)
