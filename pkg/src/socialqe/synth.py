"""Deterministic synthetic tweet corpora for tests and benchmarks.

A scenario is a declarative description of events: which accounts post which
phrases under which hashtag on which days, plus optional background noise.
Generation is a pure function of (spec, seed): the same pair always produces
byte-identical corpus and metadata files.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from datetime import date, datetime, timedelta, timezone
from pathlib import Path
from typing import Iterator, NamedTuple


@dataclass(frozen=True, slots=True)
class LinkTemplate:
    url: str
    title: str = ""
    description: str = ""


@dataclass(frozen=True, slots=True)
class EventSpec:
    """One posting pattern: on each listed day, each account posts every phrase.

    An empty hashtag means plain link-sharing tweets. phrase_accounts, when
    given, caps how many of the event's accounts post each phrase (index i
    of phrases gets accounts 0..phrase_accounts[i]-1), which is how scenarios
    produce vectors with varied weights. Every tweet carries all the event's
    links. retweet_accounts adds that many distinct accounts retweeting the
    first original tweet of each phrase.
    """

    hashtag: str
    days: tuple[date, ...]
    phrases: tuple[str, ...]
    accounts: int
    links: tuple[LinkTemplate, ...] = ()
    phrase_accounts: tuple[int, ...] = ()
    retweet_accounts: int = 0
    pool: str = ""

    def account_pool(self) -> str:
        return self.pool or self.hashtag or "anon"


@dataclass(frozen=True, slots=True)
class ScenarioSpec:
    name: str
    start: date
    end: date
    events: tuple[EventSpec, ...] = ()
    noise_rate: int = 0
    noise_vocabulary: tuple[str, ...] = ()
    noise_accounts: int = 0
    lexicon: tuple[str, ...] = ()


class SynthOutput(NamedTuple):
    corpus: Path
    metadata: Path
    lexicon: Path
    hashtags: Path
    config: Path


def validate_spec(spec: ScenarioSpec):
    if spec.start > spec.end:
        raise ValueError(f"scenario {spec.name}: start after end")
    for i, event in enumerate(spec.events):
        label = f"scenario {spec.name} event {i}"
        if event.accounts < 1:
            raise ValueError(f"{label}: accounts must be >= 1")
        if not event.phrases:
            raise ValueError(f"{label}: needs at least one phrase")
        for day in event.days:
            if not spec.start <= day <= spec.end:
                raise ValueError(f"{label}: day {day} outside scenario range")
        if event.phrase_accounts:
            if len(event.phrase_accounts) != len(event.phrases):
                raise ValueError(f"{label}: phrase_accounts length mismatch")
            for count in event.phrase_accounts:
                if not 1 <= count <= event.accounts:
                    raise ValueError(
                        f"{label}: phrase account count {count} outside 1..accounts"
                    )
        if event.retweet_accounts < 0:
            raise ValueError(f"{label}: negative retweet_accounts")
    if spec.noise_rate > 0 and (not spec.noise_vocabulary or spec.noise_accounts < 1):
        raise ValueError(
            f"scenario {spec.name}: noise needs a vocabulary and accounts"
        )
    if spec.noise_rate < 0:
        raise ValueError(f"scenario {spec.name}: negative noise_rate")


def _timestamp(day: date, seq: int) -> str:
    t = datetime(
        day.year,
        day.month,
        day.day,
        hour=seq % 24,
        minute=(seq * 7) % 60,
        second=(seq * 13) % 60,
        tzinfo=timezone.utc,
    )
    return t.strftime("%Y-%m-%dT%H:%M:%SZ")


def iter_tweet_objects(spec: ScenarioSpec, seed: int) -> Iterator[dict]:
    """Yield tweet dicts in generation order. Deterministic per (spec, seed)."""
    validate_spec(spec)
    rng = random.Random(seed)
    tweet_n = 0
    day = spec.start
    while day <= spec.end:
        seq = 0
        for event in spec.events:
            if day not in event.days:
                continue
            pool = event.account_pool()
            urls = [link.url for link in event.links]
            tags = [event.hashtag] if event.hashtag else []
            for p, phrase in enumerate(event.phrases):
                count = (
                    event.phrase_accounts[p] if event.phrase_accounts else event.accounts
                )
                first_id = None
                for a in range(count):
                    tweet_n += 1
                    tid = f"t{tweet_n:08d}"
                    if first_id is None:
                        first_id = tid
                    yield {
                        "id": tid,
                        "user_id": f"{pool}-{a:04d}",
                        "created_at": _timestamp(day, seq),
                        "text": phrase,
                        "is_retweet": False,
                        "urls": urls,
                        "hashtags": tags,
                    }
                    seq += 1
                for a in range(event.retweet_accounts):
                    tweet_n += 1
                    yield {
                        "id": f"t{tweet_n:08d}",
                        "user_id": f"{pool}-rt{a:04d}",
                        "created_at": _timestamp(day, seq),
                        "text": f"RT {phrase}",
                        "is_retweet": True,
                        "retweet_of": first_id,
                        "urls": urls,
                        "hashtags": tags,
                    }
                    seq += 1
        for _ in range(spec.noise_rate):
            tweet_n += 1
            yield {
                "id": f"t{tweet_n:08d}",
                "user_id": f"noise-{rng.randrange(spec.noise_accounts):04d}",
                "created_at": _timestamp(day, seq),
                "text": rng.choice(spec.noise_vocabulary),
                "is_retweet": False,
                "urls": [],
                "hashtags": [],
            }
            seq += 1
        day += timedelta(days=1)


def scenario_metadata(spec: ScenarioSpec) -> list[dict]:
    """Link metadata records for every event link, sorted by URL (last wins)."""
    by_url: dict[str, dict] = {}
    for event in spec.events:
        for link in event.links:
            by_url[link.url] = {
                "url": link.url,
                "title": link.title,
                "description": link.description,
            }
    return [by_url[u] for u in sorted(by_url)]


def scenario_hashtags(spec: ScenarioSpec) -> list[str]:
    return sorted({e.hashtag for e in spec.events if e.hashtag})


def gen_synthetic_corpus(
    spec: ScenarioSpec, seed: int, out_dir: str | Path
) -> SynthOutput:
    """Write corpus.jsonl, metadata.jsonl, lexicon.txt, hashtags.txt, config.txt.

    config.txt points build-index at the lexicon, so the generated directory
    is a self-contained pipeline input.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = SynthOutput(
        corpus=out / "corpus.jsonl",
        metadata=out / "metadata.jsonl",
        lexicon=out / "lexicon.txt",
        hashtags=out / "hashtags.txt",
        config=out / "config.txt",
    )
    with open(paths.corpus, "w", encoding="utf-8", newline="\n") as f:
        for obj in iter_tweet_objects(spec, seed):
            f.write(json.dumps(obj, ensure_ascii=False, sort_keys=True))
            f.write("\n")
    with open(paths.metadata, "w", encoding="utf-8", newline="\n") as f:
        for obj in scenario_metadata(spec):
            f.write(json.dumps(obj, ensure_ascii=False, sort_keys=True))
            f.write("\n")
    paths.lexicon.write_text(
        "".join(w + "\n" for w in sorted(set(spec.lexicon))), encoding="utf-8"
    )
    paths.hashtags.write_text(
        "".join(h + "\n" for h in scenario_hashtags(spec)), encoding="utf-8"
    )
    paths.config.write_text(
        f"# generated for scenario {spec.name}\nlexicon=lexicon.txt\n",
        encoding="utf-8",
    )
    return paths
