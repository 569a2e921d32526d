"""Account-deduplicated vote counting and element weighting.

An *element* is anything counted per UTC day: a hashtag, a canonical link, or
a word ngram. Each account contributes at most one tweet vote and one retweet
vote to an element per day, however many times it posts. Frequencies count
every occurrence; votes count distinct accounts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date
from typing import Iterable, Iterator, NamedTuple

from socialqe.ingest import TweetRecord, normalize_and_tokenize

HASHTAG = "hashtag"
LINK = "link"
NGRAM = "ngram"

_KINDS = frozenset({HASHTAG, LINK, NGRAM})


class ElementKey(NamedTuple):
    """Identity of a counted element: kind is one of hashtag/link/ngram."""

    kind: str
    value: str


@dataclass(frozen=True, slots=True)
class VoteRecord:
    """Finalized per-day counters for one element.

    Frequencies count occurrences; votes count distinct accounts. totalVotes
    is the size of the union of tweeting and retweeting accounts, so it is
    bounded by tweet_votes + retweet_votes but not necessarily their sum.
    Link votes count accounts that posted the element together with a link.
    """

    tweet_frequency: int = 0
    retweet_frequency: int = 0
    total_frequency: int = 0
    tweet_votes: int = 0
    retweet_votes: int = 0
    total_votes: int = 0
    link_tweet_votes: int = 0
    link_retweet_votes: int = 0

    def __post_init__(self):
        for name in self.__dataclass_fields__:
            if getattr(self, name) < 0:
                raise ValueError(f"negative counter {name}")
        if self.total_frequency != self.tweet_frequency + self.retweet_frequency:
            raise ValueError("total_frequency must equal tweet + retweet frequency")
        if self.tweet_votes > self.tweet_frequency:
            raise ValueError("tweet_votes exceeds tweet_frequency")
        if self.retweet_votes > self.retweet_frequency:
            raise ValueError("retweet_votes exceeds retweet_frequency")
        if not (
            max(self.tweet_votes, self.retweet_votes)
            <= self.total_votes
            <= self.tweet_votes + self.retweet_votes
        ):
            raise ValueError("total_votes outside the union bounds")
        if self.link_tweet_votes > self.tweet_votes:
            raise ValueError("link_tweet_votes exceeds tweet_votes")
        if self.link_retweet_votes > self.retweet_votes:
            raise ValueError("link_retweet_votes exceeds retweet_votes")


def element_weight(
    votes: VoteRecord,
    tweet_weight: float = 0.8,
    retweet_weight: float = 0.2,
    vote_weight: float = 0.35,
    link_weight: float = 0.5,
) -> float:
    """Dampened importance of an element for one day.

    Tweet votes count for more than retweet votes, and votes made alongside a
    link get their own (higher) multiplier. log1p keeps zero counts at weight
    zero and compresses large ones. Strictly increasing in each vote counter
    while its multiplier is positive; exactly 0 when all four are 0.
    """
    if min(
        votes.tweet_votes,
        votes.retweet_votes,
        votes.link_tweet_votes,
        votes.link_retweet_votes,
    ) < 0:
        raise ValueError("vote counters must be nonnegative")
    plain = math.log1p(votes.tweet_votes * tweet_weight) + math.log1p(
        votes.retweet_votes * retweet_weight
    )
    linked = math.log1p(votes.link_tweet_votes * tweet_weight) + math.log1p(
        votes.link_retweet_votes * retweet_weight
    )
    return plain * vote_weight + linked * link_weight


def extract_ngrams(tokens: list[str], max_len: int = 4) -> list[str]:
    """Contiguous space-joined ngrams in length-major order.

    All 1-grams first in text order, then 2-grams, and so on up to max_len.
    ["free", "speech"] gives ["free", "speech", "free speech"].
    """
    out = []
    n = len(tokens)
    for size in range(1, max_len + 1):
        if size > n:
            break
        for i in range(n - size + 1):
            out.append(" ".join(tokens[i : i + size]))
    return out


class _ElementState:
    """Mutable per-element accumulator; exact account sets, no approximation."""

    __slots__ = (
        "tweet_frequency",
        "retweet_frequency",
        "tweet_accounts",
        "retweet_accounts",
        "link_tweet_accounts",
        "link_retweet_accounts",
    )

    def __init__(self):
        self.tweet_frequency = 0
        self.retweet_frequency = 0
        self.tweet_accounts: set[str] = set()
        self.retweet_accounts: set[str] = set()
        self.link_tweet_accounts: set[str] = set()
        self.link_retweet_accounts: set[str] = set()

    def add(self, account_id: str, is_retweet: bool, has_link: bool):
        if is_retweet:
            self.retweet_frequency += 1
            self.retweet_accounts.add(account_id)
            if has_link:
                self.link_retweet_accounts.add(account_id)
        else:
            self.tweet_frequency += 1
            self.tweet_accounts.add(account_id)
            if has_link:
                self.link_tweet_accounts.add(account_id)

    def merge(self, other: "_ElementState"):
        self.tweet_frequency += other.tweet_frequency
        self.retweet_frequency += other.retweet_frequency
        self.tweet_accounts |= other.tweet_accounts
        self.retweet_accounts |= other.retweet_accounts
        self.link_tweet_accounts |= other.link_tweet_accounts
        self.link_retweet_accounts |= other.link_retweet_accounts

    def finalize(self) -> VoteRecord:
        tf = self.tweet_frequency
        rf = self.retweet_frequency
        return VoteRecord(
            tweet_frequency=tf,
            retweet_frequency=rf,
            total_frequency=tf + rf,
            tweet_votes=len(self.tweet_accounts),
            retweet_votes=len(self.retweet_accounts),
            total_votes=len(self.tweet_accounts | self.retweet_accounts),
            link_tweet_votes=len(self.link_tweet_accounts),
            link_retweet_votes=len(self.link_retweet_accounts),
        )


class DailyAggregate:
    """Vote accumulator for a single UTC day.

    accumulate() takes whole tweets and counts their hashtags, links and text
    ngrams; add_elements() counts an explicit element set for one post (used
    for restricted per-context tallies). merge() combines aggregates from
    disjoint or overlapping partitions of the same day's stream and is
    associative and commutative with the empty aggregate as identity, because
    the underlying account sets merge by union.
    """

    __slots__ = ("day", "_elements")

    def __init__(self, day: date):
        self.day = day
        self._elements: dict[ElementKey, _ElementState] = {}

    def __len__(self) -> int:
        return len(self._elements)

    def _state(self, key: ElementKey) -> _ElementState:
        state = self._elements.get(key)
        if state is None:
            state = _ElementState()
            self._elements[key] = state
        return state

    def add_elements(
        self,
        keys: Iterable[ElementKey],
        account_id: str,
        is_retweet: bool,
        has_link: bool,
    ):
        """Count one post's elements.

        A key repeated within one post bumps its frequency once per
        occurrence; the vote side is naturally idempotent (account sets).
        """
        for key in keys:
            if key.kind not in _KINDS:
                raise ValueError(f"unknown element kind {key.kind!r}")
            self._state(key).add(account_id, is_retweet, has_link)

    def accumulate(
        self,
        tweet: TweetRecord,
        ngrams: list[str] | None = None,
        stopwords=None,
        max_ngram: int = 4,
    ):
        """Count a tweet's hashtags, links, and text ngrams for this day.

        Pass precomputed ngrams to skip tokenization (builders tokenize each
        tweet once and reuse the result across aggregates).
        """
        if tweet.day != self.day:
            raise ValueError(f"tweet dated {tweet.day} fed to aggregate {self.day}")
        keys = [ElementKey(HASHTAG, h) for h in tweet.hashtags]
        keys.extend(ElementKey(LINK, u.full) for u in tweet.links)
        if ngrams is None:
            if stopwords is None:
                tokens = normalize_and_tokenize(tweet.text)
            else:
                tokens = normalize_and_tokenize(tweet.text, stopwords)
            ngrams = extract_ngrams(tokens, max_ngram)
        keys.extend(ElementKey(NGRAM, g) for g in ngrams)
        self.add_elements(keys, tweet.account_id, tweet.is_retweet, bool(tweet.links))

    def merge(self, other: "DailyAggregate") -> "DailyAggregate":
        """Fold another aggregate for the same day into this one; returns self."""
        if other.day != self.day:
            raise ValueError(f"cannot merge day {other.day} into {self.day}")
        for key, state in other._elements.items():
            mine = self._elements.get(key)
            if mine is None:
                fresh = _ElementState()
                fresh.merge(state)
                self._elements[key] = fresh
            else:
                mine.merge(state)
        return self

    def finalize(self) -> dict[ElementKey, VoteRecord]:
        """Snapshot current counts as immutable VoteRecords."""
        return {key: state.finalize() for key, state in self._elements.items()}

    def keys(self) -> Iterator[ElementKey]:
        return iter(self._elements)

    def vote_record(self, key: ElementKey) -> VoteRecord:
        state = self._elements.get(key)
        if state is None:
            return VoteRecord()
        return state.finalize()
