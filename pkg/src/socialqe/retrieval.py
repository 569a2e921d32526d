"""Query expansion and link scoring over the index.

A query is a hashtag on a day, expanded with its word-broken form and its
contextual-vector ngrams. Links are scored by a dot product between query
terms and binary-presence term vectors over the link's title, description,
and file name, taking the best field; the final ranking multiplies that text
score by the link's social vote weight.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass
from datetime import date
from typing import Mapping

from socialqe.index import HashtagIndex
from socialqe.ingest import LinkMetadata, CanonicalUrl, normalize_and_tokenize, word_break_hashtag
from socialqe.votes import element_weight, extract_ngrams

DOC_FIELDS = ("title", "description", "file_name")

# File names segment on anything non-alphabetic: digits and punctuation are
# separators, and pure-digit chunks (article ids) vanish outright.
_FILE_WORD_RE = re.compile(r"[^\W\d_]+")


@dataclass(frozen=True, slots=True)
class ExpandedQuery:
    """Weighted query terms for one hashtag-day; never empty."""

    hashtag: str
    day: date
    terms: dict[str, float]


@dataclass(frozen=True, slots=True)
class ScoredLink:
    """Text-similarity score of one link: max over the three field scores."""

    url: CanonicalUrl
    score: float
    field_scores: tuple[float, float, float]


@dataclass(frozen=True, slots=True)
class RerankedLink:
    """Final rerank row: total = text score x social vote weight."""

    url: CanonicalUrl
    total: float
    text_score: float
    field_scores: tuple[float, float, float]
    social_weight: float


def sim(q: Mapping[str, float], d: Mapping[str, float]) -> float:
    """Dot product over shared terms.

    Terms are summed in sorted order, so sim(q, d) == sim(d, q) exactly, not
    just within rounding.
    """
    if len(d) < len(q):
        q, d = d, q
    shared = [t for t in q if t in d]
    shared.sort()
    return sum(q[t] * d[t] for t in shared)


def file_name_tokens(
    file_name: str, stopwords: frozenset[str] | set[str]
) -> list[str]:
    """Alphabetic word runs of a file name, lowercased, stopwords dropped."""
    name = unicodedata.normalize("NFC", file_name).lower()
    return [t for t in _FILE_WORD_RE.findall(name) if t not in stopwords]


def doc_term_vector(
    meta: LinkMetadata,
    field: str,
    stopwords: frozenset[str] | set[str],
    max_ngram: int = 4,
) -> dict[str, float]:
    """Binary-presence ngram vector for one document field."""
    if field == "title":
        tokens = normalize_and_tokenize(meta.title, stopwords)
    elif field == "description":
        tokens = normalize_and_tokenize(meta.description, stopwords)
    elif field == "file_name":
        tokens = file_name_tokens(meta.url.file_name, stopwords)
    else:
        raise ValueError(f"unknown document field {field!r}")
    return dict.fromkeys(extract_ngrams(tokens, max_ngram), 1.0)


def broken_phrase(
    hashtag: str,
    lexicon: frozenset[str] | set[str],
    stopwords: frozenset[str] | set[str],
) -> str:
    """Word-broken hashtag as a stopword-free phrase; falls back to the tag.

    Document tokens have stopwords removed, so the query phrase must drop
    them too or "basket of deplorables" could never match any title.
    """
    words = [w for w in word_break_hashtag(hashtag, lexicon) if w not in stopwords]
    if not words:
        return hashtag
    return " ".join(words)


def expand_query(
    index: HashtagIndex,
    hashtag: str,
    day: date,
    k: int = 10,
    include_similar: bool = False,
) -> ExpandedQuery:
    """Build the weighted term set for a hashtag-day.

    The word-broken hashtag enters at weight 1.0; the top-k vector ngrams
    enter max-normalized so the strongest ngram also weighs 1.0. With
    include_similar, word-broken forms of same-day similar hashtags join at
    weight 1.0. Raises LookupError when the entry is missing.
    """
    entry = index.entry(hashtag, day)
    terms: dict[str, float] = {}
    top = entry.vector[:k]
    if top:
        peak = top[0].weight
        if peak > 0:
            for e in top:
                terms[e.ngram] = max(terms.get(e.ngram, 0.0), e.weight / peak)
    terms[broken_phrase(hashtag, index.lexicon, index.stopwords)] = 1.0
    if include_similar:
        for other, _ in entry.similar:
            terms[broken_phrase(other, index.lexicon, index.stopwords)] = 1.0
    return ExpandedQuery(hashtag=hashtag, day=day, terms=terms)


def sqe_score(
    query: ExpandedQuery,
    meta: LinkMetadata,
    stopwords: frozenset[str] | set[str],
    max_ngram: int = 4,
) -> ScoredLink:
    """Score one link against the query: best of title/description/file_name."""
    scores = tuple(
        sim(query.terms, doc_term_vector(meta, f, stopwords, max_ngram))
        for f in DOC_FIELDS
    )
    return ScoredLink(url=meta.url, score=max(scores), field_scores=scores)


def sprf_rerank(
    index: HashtagIndex,
    hashtag: str,
    day: date,
    k: int = 10,
    expansion_k: int | None = None,
    include_similar: bool = False,
) -> list[RerankedLink]:
    """Re-rank a hashtag-day's links by text score times social vote weight.

    Links without crawled metadata still participate through their file
    names. Sorted by total descending, URL ascending on ties, truncated to k.
    Raises LookupError when the entry is missing.
    """
    entry = index.entry(hashtag, day)
    if expansion_k is None:
        expansion_k = index.params.expansion_size
    query = expand_query(index, hashtag, day, expansion_k, include_similar)
    p = index.params
    rows = []
    for assoc in entry.links:
        meta = index.metadata.get(assoc.url.full)
        if meta is None:
            meta = LinkMetadata(url=assoc.url)
        scored = sqe_score(query, meta, index.stopwords, p.max_ngram)
        social = element_weight(
            assoc.votes, p.tweet_weight, p.retweet_weight, p.vote_weight, p.link_weight
        )
        rows.append(
            RerankedLink(
                url=assoc.url,
                total=scored.score * social,
                text_score=scored.score,
                field_scores=scored.field_scores,
                social_weight=social,
            )
        )
    rows.sort(key=lambda r: (-r.total, r.url.full))
    return rows[:k]
