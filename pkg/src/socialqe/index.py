"""Date-keyed hashtag index: build, query, and deterministic persistence.

The index connects each (hashtag, day) to its contextual vector, the links
that co-occurred with it that day (each carrying the link's vote counters and
social signature), and same-day hashtags with nearby SimHash fingerprints.
After build the structure is immutable and safe for concurrent readers.

On disk an index is a directory:

    meta                 key=value: span, engine params, config provenance
    stopwords.txt        one word per line, sorted
    lexicon.txt          one word per line, sorted
    metadata.jsonl       {"description","title","url"} per line, sorted by url
    aggregates/DAY       day kind value <8 counters>   (hashtag and link rows)
    vectors/DAY          day cv|ss key n ngram weight ngram weight ...
    links/DAY            day hashtag url <8 counters>  (in ranked link order)
    similar/DAY          day hashtag other distance    (in ascending distance)

All files are UTF-8, tab-separated, and framed by a `#socialqe <section> 1`
header and `#end <row count>` footer so truncation is detectable. Counter
column order everywhere: tweet_frequency, retweet_frequency, total_frequency,
tweet_votes, retweet_votes, total_votes, link_tweet_votes, link_retweet_votes.
Writes are fully sorted, so equal indexes produce byte-identical trees.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from typing import Iterable, Mapping

from socialqe.config import EngineParams
from socialqe.ingest import (
    DEFAULT_STOPWORDS,
    CanonicalUrl,
    LinkMetadata,
    TweetRecord,
    normalize_and_tokenize,
    url_from_canonical,
    word_break_hashtag,
)
from socialqe.signatures import (
    RankedNgram,
    build_vector,
    hamming64,
    vector_fingerprint,
)
from socialqe.votes import (
    HASHTAG,
    LINK,
    NGRAM,
    DailyAggregate,
    ElementKey,
    VoteRecord,
    element_weight,
    extract_ngrams,
)

FORMAT_VERSION = 1

_COUNTER_FIELDS = (
    "tweet_frequency",
    "retweet_frequency",
    "total_frequency",
    "tweet_votes",
    "retweet_votes",
    "total_votes",
    "link_tweet_votes",
    "link_retweet_votes",
)


class IndexFormatError(ValueError):
    """Raised when a persisted index is unreadable: bad version, framing, or rows."""


@dataclass(frozen=True, slots=True)
class LinkAssociation:
    """A link tied to a hashtag-day: the link's own day counters and signature."""

    url: CanonicalUrl
    votes: VoteRecord
    signature: tuple[RankedNgram, ...]


@dataclass(frozen=True, slots=True)
class DayEntry:
    """Everything the index knows about one hashtag on one day."""

    hashtag: str
    day: date
    vector: tuple[RankedNgram, ...]
    links: tuple[LinkAssociation, ...]
    similar: tuple[tuple[str, int], ...]


@dataclass(eq=True, slots=True)
class HashtagIndex:
    span: tuple[date, date] | None
    params: EngineParams
    stopwords: frozenset[str]
    lexicon: frozenset[str]
    day_records: dict[date, dict[ElementKey, VoteRecord]]
    entries: dict[tuple[str, date], DayEntry]
    metadata: dict[str, LinkMetadata]
    provenance: tuple[tuple[str, str], ...] = ()
    _fingerprints: dict = field(
        init=False, default_factory=dict, compare=False, repr=False
    )

    def entry(self, hashtag: str, day: date) -> DayEntry:
        found = self.entries.get((hashtag, day))
        if found is None:
            raise LookupError(f"no entry for hashtag {hashtag!r} on {day.isoformat()}")
        return found

    def has_entry(self, hashtag: str, day: date) -> bool:
        return (hashtag, day) in self.entries

    def days(self) -> list[date]:
        return sorted(self.day_records)

    def hashtags_on(self, day: date) -> list[str]:
        return sorted(h for (h, d) in self.entries if d == day)

    def links_on(self, day: date) -> list[str]:
        """Canonical URLs of every link seen that day, sorted."""
        records = self.day_records.get(day, {})
        return sorted(key.value for key in records if key.kind == LINK)

    def fingerprint(self, hashtag: str, day: date) -> int:
        cached = self._fingerprints.get((hashtag, day))
        if cached is None:
            cached = vector_fingerprint(self.entry(hashtag, day).vector)
            self._fingerprints[(hashtag, day)] = cached
        return cached


def similar_hashtags(
    index: HashtagIndex, hashtag: str, day: date, max_distance: int | None = None
) -> list[tuple[str, int]]:
    """Same-day hashtags within a fingerprint Hamming distance, nearest first.

    With max_distance None, returns the list frozen at build time (built with
    params.max_distance); otherwise recomputes against the given radius. The
    queried hashtag is never in its own result. Ties break lexicographically.
    """
    entry = index.entry(hashtag, day)
    if max_distance is None:
        return list(entry.similar)
    own = index.fingerprint(hashtag, day)
    found = []
    for other in index.hashtags_on(day):
        if other == hashtag:
            continue
        distance = hamming64(own, index.fingerprint(other, day))
        if distance <= max_distance:
            found.append((distance, other))
    found.sort()
    return [(other, distance) for distance, other in found]


def _dedupe(values: Iterable[str]) -> list[str]:
    seen = set()
    out = []
    for v in values:
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out


def build_index(
    corpus: Iterable[TweetRecord],
    metadata: Mapping[str, LinkMetadata] | Iterable[LinkMetadata] | None = None,
    params: EngineParams | None = None,
    span: tuple[date, date] | None = None,
    stopwords: frozenset[str] = DEFAULT_STOPWORDS,
    lexicon: frozenset[str] = frozenset(),
    provenance: Iterable[tuple[str, str]] = (),
) -> HashtagIndex:
    """Aggregate a tweet stream into a HashtagIndex.

    Deterministic given the corpus as a set: ingestion order and sharding do
    not affect the result. With span None the span is inferred from the
    corpus (an empty corpus then yields an empty index with no span); with an
    explicit span any tweet outside it is a hard error naming the tweet.

    Per day, ngram vote records are re-aggregated twice over restricted tweet
    subsets: per hashtag (its contextual vector) and per co-occurring link
    (its social signature). Day-level aggregates keep only hashtag and link
    elements; day-level ngram counters are never materialized.
    """
    if params is None:
        params = EngineParams()

    by_day: dict[date, list[TweetRecord]] = {}
    for tweet in corpus:
        day = tweet.day
        if span is not None and not (span[0] <= day <= span[1]):
            raise ValueError(
                f"tweet {tweet.tweet_id} dated {day.isoformat()} falls outside "
                f"span {span[0].isoformat()}..{span[1].isoformat()}"
            )
        by_day.setdefault(day, []).append(tweet)

    if span is None and by_day:
        span = (min(by_day), max(by_day))
    if span is not None:
        if span[0] > span[1]:
            raise ValueError(f"span start {span[0]} after end {span[1]}")
        if (span[1] - span[0]).days + 1 > 366:
            raise ValueError("span longer than 366 days")

    if metadata is None:
        metadata_map: dict[str, LinkMetadata] = {}
    elif isinstance(metadata, Mapping):
        metadata_map = dict(metadata)
    else:
        metadata_map = {m.url.full: m for m in metadata}

    weight_args = (
        params.tweet_weight,
        params.retweet_weight,
        params.vote_weight,
        params.link_weight,
    )
    day_records: dict[date, dict[ElementKey, VoteRecord]] = {}
    entries: dict[tuple[str, date], DayEntry] = {}
    corpus_links: set[str] = set()
    break_cache: dict[str, str] = {}

    for day in sorted(by_day):
        tweets = by_day[day]
        day_agg = DailyAggregate(day)
        cooccur: dict[str, set[str]] = {}
        url_objects: dict[str, CanonicalUrl] = {}

        for tweet in tweets:
            if not tweet.hashtags and not tweet.links:
                continue
            keys = [ElementKey(HASHTAG, h) for h in tweet.hashtags]
            for url in tweet.links:
                keys.append(ElementKey(LINK, url.full))
                url_objects.setdefault(url.full, url)
            day_agg.add_elements(
                keys, tweet.account_id, tweet.is_retweet, bool(tweet.links)
            )
            if tweet.hashtags and tweet.links:
                fulls = [u.full for u in tweet.links]
                for h in tweet.hashtags:
                    cooccur.setdefault(h, set()).update(fulls)

        finalized = day_agg.finalize()
        if not finalized:
            continue
        day_records[day] = finalized
        corpus_links.update(url_objects)
        day_hashtags = sorted(k.value for k in finalized if k.kind == HASHTAG)
        sig_links: set[str] = set()
        for fulls in cooccur.values():
            sig_links.update(fulls)

        # Second pass: ngram tallies restricted to each hashtag's (and each
        # co-occurring link's) own tweets. Tweets that cannot contribute are
        # never tokenized; that is the build's main cost lever.
        hashtag_aggs: dict[str, DailyAggregate] = {}
        link_aggs: dict[str, DailyAggregate] = {}
        for tweet in tweets:
            relevant = [u.full for u in tweet.links if u.full in sig_links]
            if not tweet.hashtags and not relevant:
                continue
            tokens = normalize_and_tokenize(tweet.text, stopwords)
            nkeys = [
                ElementKey(NGRAM, g)
                for g in extract_ngrams(tokens, params.max_ngram)
            ]
            has_link = bool(tweet.links)
            for h in _dedupe(tweet.hashtags):
                agg = hashtag_aggs.get(h)
                if agg is None:
                    agg = hashtag_aggs[h] = DailyAggregate(day)
                agg.add_elements(nkeys, tweet.account_id, tweet.is_retweet, has_link)
            for full in _dedupe(relevant):
                agg = link_aggs.get(full)
                if agg is None:
                    agg = link_aggs[full] = DailyAggregate(day)
                agg.add_elements(nkeys, tweet.account_id, tweet.is_retweet, has_link)

        vectors: dict[str, tuple[RankedNgram, ...]] = {}
        for h in day_hashtags:
            agg = hashtag_aggs.get(h)
            restricted = agg.finalize() if agg is not None else {}
            broken = break_cache.get(h)
            if broken is None:
                broken = " ".join(word_break_hashtag(h, lexicon))
                break_cache[h] = broken
            vectors[h] = tuple(
                build_vector(
                    restricted, params.vector_size, {h, broken}, *weight_args
                )
            )

        signatures: dict[str, tuple[RankedNgram, ...]] = {}
        for full in sorted(sig_links):
            agg = link_aggs.get(full)
            restricted = agg.finalize() if agg is not None else {}
            signatures[full] = tuple(
                build_vector(restricted, params.vector_size, frozenset(), *weight_args)
            )

        fingerprints = {h: vector_fingerprint(vectors[h]) for h in day_hashtags}
        for h in day_hashtags:
            near = []
            own = fingerprints[h]
            for other in day_hashtags:
                if other == h:
                    continue
                distance = hamming64(own, fingerprints[other])
                if distance <= params.max_distance:
                    near.append((distance, other))
            near.sort()

            ranked_links = []
            for full in cooccur.get(h, ()):
                votes = finalized[ElementKey(LINK, full)]
                ranked_links.append(
                    (-element_weight(votes, *weight_args), full, votes)
                )
            ranked_links.sort(key=lambda item: (item[0], item[1]))
            entries[(h, day)] = DayEntry(
                hashtag=h,
                day=day,
                vector=vectors[h],
                links=tuple(
                    LinkAssociation(url_objects[full], votes, signatures[full])
                    for _, full, votes in ranked_links
                ),
                similar=tuple((other, distance) for distance, other in near),
            )

    return HashtagIndex(
        span=span,
        params=params,
        stopwords=stopwords,
        lexicon=lexicon,
        day_records=day_records,
        entries=entries,
        metadata={
            full: meta for full, meta in metadata_map.items() if full in corpus_links
        },
        provenance=tuple(sorted(provenance)),
    )


# --- persistence ---


def _format_weight(w: float) -> str:
    return f"{w:.6f}"


def _write_section(path: Path, section: str, rows: list[str]):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(f"#socialqe\t{section}\t{FORMAT_VERSION}\n")
        for row in rows:
            f.write(row)
            f.write("\n")
        f.write(f"#end\t{len(rows)}\n")


def _read_section(path: Path, section: str) -> list[str]:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IndexFormatError(f"{path}: unreadable: {exc}") from None
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    else:
        raise IndexFormatError(f"{path}: truncated: missing final newline")
    if not lines:
        raise IndexFormatError(f"{path}: empty file")
    header = lines[0].split("\t")
    if len(header) != 3 or header[0] != "#socialqe" or header[1] != section:
        raise IndexFormatError(f"{path}: line 1: bad header {lines[0]!r}")
    if header[2] != str(FORMAT_VERSION):
        raise IndexFormatError(
            f"{path}: line 1: unsupported format version {header[2]!r}"
        )
    if len(lines) < 2 or not lines[-1].startswith("#end\t"):
        raise IndexFormatError(f"{path}: line {len(lines)}: missing #end footer")
    declared = lines[-1].split("\t")[1]
    rows = lines[1:-1]
    if declared != str(len(rows)):
        raise IndexFormatError(
            f"{path}: line {len(lines)}: footer declares {declared} rows, "
            f"found {len(rows)}"
        )
    return rows


def _counter_row(votes: VoteRecord) -> list[str]:
    return [str(getattr(votes, name)) for name in _COUNTER_FIELDS]


def _parse_counters(fields_: list[str], path: Path, lineno: int) -> VoteRecord:
    if len(fields_) != 8:
        raise IndexFormatError(f"{path}: line {lineno}: expected 8 counters")
    try:
        values = [int(v) for v in fields_]
        return VoteRecord(**dict(zip(_COUNTER_FIELDS, values)))
    except ValueError as exc:
        raise IndexFormatError(f"{path}: line {lineno}: {exc}") from None


def _vector_row(day: date, kind: str, key: str, vec: tuple[RankedNgram, ...]) -> str:
    fields_ = [day.isoformat(), kind, key, str(len(vec))]
    for entry in vec:
        fields_.append(entry.ngram)
        fields_.append(_format_weight(entry.weight))
    return "\t".join(fields_)


def _parse_vector_row(
    row: str, path: Path, lineno: int
) -> tuple[str, str, str, tuple[RankedNgram, ...]]:
    fields_ = row.split("\t")
    if len(fields_) < 4:
        raise IndexFormatError(f"{path}: line {lineno}: short vector row")
    day_s, kind, key, count_s = fields_[:4]
    try:
        count = int(count_s)
    except ValueError:
        raise IndexFormatError(
            f"{path}: line {lineno}: bad entry count {count_s!r}"
        ) from None
    if len(fields_) != 4 + 2 * count:
        raise IndexFormatError(
            f"{path}: line {lineno}: expected {count} (ngram, weight) pairs"
        )
    entries = []
    for i in range(count):
        ngram = fields_[4 + 2 * i]
        try:
            weight = float(fields_[5 + 2 * i])
        except ValueError:
            raise IndexFormatError(
                f"{path}: line {lineno}: bad weight {fields_[5 + 2 * i]!r}"
            ) from None
        entries.append(RankedNgram(rank=i + 1, ngram=ngram, weight=weight))
    return day_s, kind, key, tuple(entries)


def save_index(index: HashtagIndex, out_dir: str | Path):
    """Write the index directory; refuses a non-empty target."""
    out = Path(out_dir)
    if out.exists() and any(out.iterdir()):
        raise ValueError(f"refusing to write index into non-empty {out}")
    out.mkdir(parents=True, exist_ok=True)
    for sub in ("aggregates", "vectors", "links", "similar"):
        (out / sub).mkdir()

    meta_rows = []
    if index.span is None:
        meta_rows.append("span_start=none")
        meta_rows.append("span_end=none")
    else:
        meta_rows.append(f"span_start={index.span[0].isoformat()}")
        meta_rows.append(f"span_end={index.span[1].isoformat()}")
    for key, value in index.params.to_entries():
        meta_rows.append(f"{key}={value}")
    for key, value in index.provenance:
        meta_rows.append(f"config.{key}={value}")
    _write_section(out / "meta", "meta", meta_rows)

    _write_section(out / "stopwords.txt", "stopwords", sorted(index.stopwords))
    _write_section(out / "lexicon.txt", "lexicon", sorted(index.lexicon))
    _write_section(
        out / "metadata.jsonl",
        "metadata",
        [
            json.dumps(
                {
                    "url": full,
                    "title": index.metadata[full].title,
                    "description": index.metadata[full].description,
                },
                ensure_ascii=False,
                sort_keys=True,
            )
            for full in sorted(index.metadata)
        ],
    )

    entries_by_day: dict[date, list[DayEntry]] = {}
    for (h, day), entry in index.entries.items():
        entries_by_day.setdefault(day, []).append(entry)

    for day in sorted(index.day_records):
        day_s = day.isoformat()
        records = index.day_records[day]
        agg_rows = []
        for key in sorted(records):
            agg_rows.append(
                "\t".join([day_s, key.kind, key.value, *_counter_row(records[key])])
            )
        _write_section(out / "aggregates" / day_s, "aggregates", agg_rows)

        day_entries = sorted(entries_by_day.get(day, []), key=lambda e: e.hashtag)
        vec_rows = [_vector_row(day, "cv", e.hashtag, e.vector) for e in day_entries]
        signatures: dict[str, tuple[RankedNgram, ...]] = {}
        link_rows = []
        sim_rows = []
        for e in day_entries:
            for assoc in e.links:
                signatures[assoc.url.full] = assoc.signature
                link_rows.append(
                    "\t".join(
                        [day_s, e.hashtag, assoc.url.full, *_counter_row(assoc.votes)]
                    )
                )
            for other, distance in e.similar:
                sim_rows.append("\t".join([day_s, e.hashtag, other, str(distance)]))
        vec_rows.extend(
            _vector_row(day, "ss", full, signatures[full])
            for full in sorted(signatures)
        )
        if vec_rows:
            _write_section(out / "vectors" / day_s, "vectors", vec_rows)
        if link_rows:
            _write_section(out / "links" / day_s, "links", link_rows)
        if sim_rows:
            _write_section(out / "similar" / day_s, "similar", sim_rows)


def _parse_day_name(path: Path) -> date:
    try:
        return date.fromisoformat(path.name)
    except ValueError:
        raise IndexFormatError(f"{path}: not a YYYY-MM-DD day file") from None


def load_index(index_dir: str | Path) -> HashtagIndex:
    """Read an index directory back; structurally equal to what was saved."""
    root = Path(index_dir)
    if not (root / "meta").exists():
        raise IndexFormatError(f"{root}: no meta file; not an index directory")

    meta: dict[str, str] = {}
    provenance = []
    for lineno, row in enumerate(_read_section(root / "meta", "meta"), 2):
        if "=" not in row:
            raise IndexFormatError(f"{root / 'meta'}: line {lineno}: bad row {row!r}")
        key, _, value = row.partition("=")
        if key.startswith("config."):
            provenance.append((key[len("config.") :], value))
        else:
            meta[key] = value

    if meta.get("span_start", "none") == "none":
        span = None
    else:
        try:
            span = (
                date.fromisoformat(meta["span_start"]),
                date.fromisoformat(meta["span_end"]),
            )
        except (KeyError, ValueError) as exc:
            raise IndexFormatError(f"{root / 'meta'}: bad span: {exc}") from None
    try:
        params = EngineParams.from_mapping(meta)
    except ValueError as exc:
        raise IndexFormatError(f"{root / 'meta'}: {exc}") from None

    stopwords = frozenset(_read_section(root / "stopwords.txt", "stopwords"))
    lexicon = frozenset(_read_section(root / "lexicon.txt", "lexicon"))

    metadata: dict[str, LinkMetadata] = {}
    meta_path = root / "metadata.jsonl"
    for lineno, row in enumerate(_read_section(meta_path, "metadata"), 2):
        try:
            obj = json.loads(row)
            metadata[obj["url"]] = LinkMetadata(
                url=url_from_canonical(obj["url"]),
                title=obj["title"],
                description=obj["description"],
            )
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise IndexFormatError(f"{meta_path}: line {lineno}: {exc}") from None

    day_records: dict[date, dict[ElementKey, VoteRecord]] = {}
    for path in sorted((root / "aggregates").iterdir()):
        day = _parse_day_name(path)
        records: dict[ElementKey, VoteRecord] = {}
        for lineno, row in enumerate(_read_section(path, "aggregates"), 2):
            fields_ = row.split("\t")
            if len(fields_) != 11:
                raise IndexFormatError(f"{path}: line {lineno}: expected 11 fields")
            day_s, kind, value = fields_[:3]
            if day_s != day.isoformat():
                raise IndexFormatError(f"{path}: line {lineno}: day mismatch {day_s}")
            if kind not in (HASHTAG, LINK, NGRAM):
                raise IndexFormatError(f"{path}: line {lineno}: bad kind {kind!r}")
            records[ElementKey(kind, value)] = _parse_counters(
                fields_[3:], path, lineno
            )
        day_records[day] = records

    vectors: dict[tuple[date, str], tuple[RankedNgram, ...]] = {}
    signatures: dict[tuple[date, str], tuple[RankedNgram, ...]] = {}
    for path in sorted((root / "vectors").iterdir()):
        day = _parse_day_name(path)
        for lineno, row in enumerate(_read_section(path, "vectors"), 2):
            day_s, kind, key, vec = _parse_vector_row(row, path, lineno)
            if day_s != day.isoformat():
                raise IndexFormatError(f"{path}: line {lineno}: day mismatch {day_s}")
            if kind == "cv":
                vectors[(day, key)] = vec
            elif kind == "ss":
                signatures[(day, key)] = vec
            else:
                raise IndexFormatError(f"{path}: line {lineno}: bad kind {kind!r}")

    links: dict[tuple[date, str], list[LinkAssociation]] = {}
    for path in sorted((root / "links").iterdir()):
        day = _parse_day_name(path)
        for lineno, row in enumerate(_read_section(path, "links"), 2):
            fields_ = row.split("\t")
            if len(fields_) != 11:
                raise IndexFormatError(f"{path}: line {lineno}: expected 11 fields")
            day_s, hashtag, full = fields_[:3]
            if day_s != day.isoformat():
                raise IndexFormatError(f"{path}: line {lineno}: day mismatch {day_s}")
            sig = signatures.get((day, full))
            if sig is None:
                raise IndexFormatError(
                    f"{path}: line {lineno}: link {full!r} has no ss row"
                )
            links.setdefault((day, hashtag), []).append(
                LinkAssociation(
                    url=url_from_canonical(full),
                    votes=_parse_counters(fields_[3:], path, lineno),
                    signature=sig,
                )
            )

    similar: dict[tuple[date, str], list[tuple[str, int]]] = {}
    for path in sorted((root / "similar").iterdir()):
        day = _parse_day_name(path)
        for lineno, row in enumerate(_read_section(path, "similar"), 2):
            fields_ = row.split("\t")
            if len(fields_) != 4:
                raise IndexFormatError(f"{path}: line {lineno}: expected 4 fields")
            day_s, hashtag, other, dist_s = fields_
            if day_s != day.isoformat():
                raise IndexFormatError(f"{path}: line {lineno}: day mismatch {day_s}")
            try:
                distance = int(dist_s)
            except ValueError:
                raise IndexFormatError(
                    f"{path}: line {lineno}: bad distance {dist_s!r}"
                ) from None
            similar.setdefault((day, hashtag), []).append((other, distance))

    entries: dict[tuple[str, date], DayEntry] = {}
    for (day, hashtag), vec in vectors.items():
        entries[(hashtag, day)] = DayEntry(
            hashtag=hashtag,
            day=day,
            vector=vec,
            links=tuple(links.get((day, hashtag), ())),
            similar=tuple(similar.get((day, hashtag), ())),
        )

    return HashtagIndex(
        span=span,
        params=params,
        stopwords=stopwords,
        lexicon=lexicon,
        day_records=day_records,
        entries=entries,
        metadata=metadata,
        provenance=tuple(provenance),
    )
