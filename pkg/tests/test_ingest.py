import json
import random

import pytest

from socialqe.ingest import (
    DEFAULT_STOPWORDS,
    ParseStats,
    canonicalize_url,
    normalize_and_tokenize,
    parse_metadata,
    parse_stream,
    url_from_canonical,
    word_break_hashtag,
)


def tweet_obj(**over):
    base = {
        "id": "1",
        "user_id": "u1",
        "created_at": "2017-01-15T12:00:00Z",
        "text": "hello world",
        "hashtags": [],
        "urls": [],
        "is_retweet": False,
    }
    base.update(over)
    return base


class TestCanonicalize:
    def test_lowercases_scheme_and_host(self):
        c = canonicalize_url("HTTP://Politico.Com/Story/A")
        assert c.full == "http://politico.com/Story/A"
        assert c.host == "politico.com"
        assert c.path == "/Story/A"

    def test_strips_fragment_and_tracking(self):
        c = canonicalize_url("https://ex.com/a?utm_source=x&id=3&fbclid=y#frag")
        assert c.full == "https://ex.com/a?id=3"

    def test_file_name_is_last_path_segment(self):
        assert canonicalize_url("http://ex.com/2017/06/grenfell-tower-fire").file_name == "grenfell-tower-fire"
        assert canonicalize_url("http://ex.com/dir/").file_name == ""
        assert canonicalize_url("http://ex.com").file_name == ""

    def test_scheme_required(self):
        with pytest.raises(ValueError):
            canonicalize_url("not a url")
        with pytest.raises(ValueError):
            canonicalize_url("//ex.com/a")

    def test_idempotent(self):
        rng = random.Random(11)
        hosts = ["News.Example.COM", "ex.com", "a.b.co"]
        for _ in range(200):
            raw = "https://{}/{}?{}#sec".format(
                rng.choice(hosts),
                "/".join(f"p{rng.randrange(9)}" for _ in range(rng.randint(0, 3))),
                "&".join(f"k{i}={rng.randrange(5)}" for i in range(rng.randint(0, 3))),
            )
            once = canonicalize_url(raw)
            again = canonicalize_url(once.full)
            assert again == once

    def test_url_from_canonical_preserves_query(self):
        # loader path: must not re-filter params that a custom config kept
        c = url_from_canonical("https://ex.com/a?utm_source=kept")
        assert c.full == "https://ex.com/a?utm_source=kept"
        assert c.file_name == "a"


class TestTokenizer:
    def test_strips_urls_mentions_hashtags(self):
        text = "Free speech! #CharlieHebdo https://t.co/abc @someone"
        assert normalize_and_tokenize(text, DEFAULT_STOPWORDS) == ["free", "speech"]

    def test_retweet_prefix_dropped_as_stopword(self):
        assert normalize_and_tokenize("RT @user: Sad day", DEFAULT_STOPWORDS) == ["sad", "day"]

    def test_empty_and_symbol_only(self):
        assert normalize_and_tokenize("", DEFAULT_STOPWORDS) == []
        assert normalize_and_tokenize("!!! ... ???", DEFAULT_STOPWORDS) == []

    def test_duplicates_retained_in_order(self):
        toks = normalize_and_tokenize("goal goal GOAL", frozenset())
        assert toks == ["goal", "goal", "goal"]

    def test_apostrophe_kept_inside_word(self):
        toks = normalize_and_tokenize("Trump's rally", frozenset())
        assert toks == ["trump's", "rally"]

    def test_www_url_stripped(self):
        assert normalize_and_tokenize("see www.ex.com/a now", DEFAULT_STOPWORDS) == ["see", "now"]


class TestWordBreak:
    LEX = frozenset(
        ["basket", "of", "deplorables", "london", "fire", "grenfell", "a", "an",
         "and", "ba", "sket", "na", "tional"]
    )

    def test_known_compound(self):
        assert word_break_hashtag("basketofdeplorables", self.LEX) == ["basket", "of", "deplorables"]

    def test_single_word(self):
        assert word_break_hashtag("london", self.LEX) == ["london"]

    def test_unsegmentable_falls_back_whole(self):
        assert word_break_hashtag("xqzw", self.LEX) == ["xqzw"]

    def test_fewest_segments_wins(self):
        # "basket" (1 segment) beats "ba sket" (2)
        assert word_break_hashtag("basket", self.LEX) == ["basket"]

    def test_lexicographic_among_equal_counts(self):
        lex = frozenset(["ab", "cd", "abc", "d"])
        # two 2-segment parses: ab|cd and abc|d; lexicographically smaller tuple wins
        assert word_break_hashtag("abcd", lex) == ["ab", "cd"]

    def test_empty_tag(self):
        assert word_break_hashtag("", self.LEX) == []

    def test_segments_concatenate_back(self):
        rng = random.Random(3)
        words = sorted(self.LEX)
        for _ in range(100):
            tag = "".join(rng.choice(words) for _ in range(rng.randint(1, 4)))
            parts = word_break_hashtag(tag, self.LEX)
            assert "".join(parts) == tag


class TestParseStream:
    def test_valid_lines(self):
        lines = [
            json.dumps(tweet_obj(id="1", text="a")),
            json.dumps(tweet_obj(id="2", user_id="u2", text="b",
                                 hashtags=["#Tag"], urls=["http://ex.com/x"])),
        ]
        out = list(parse_stream(lines))
        assert [t.tweet_id for t in out] == ["1", "2"]
        assert out[1].hashtags == ("tag",)
        assert out[1].links[0].full == "http://ex.com/x"

    def test_malformed_lines_counted_and_skipped(self):
        stats = ParseStats()
        lines = [
            json.dumps(tweet_obj(id="1")),
            "{not json",
            json.dumps({"id": "3"}),  # missing required fields
            json.dumps(tweet_obj(id="4", created_at="yesterday")),
            json.dumps(tweet_obj(id="5")),
        ]
        out = list(parse_stream(lines, stats=stats))
        assert [t.tweet_id for t in out] == ["1", "5"]
        assert stats.parsed == 2
        assert stats.skipped == 3

    def test_retweet_flag_consistency(self):
        good = tweet_obj(id="1", is_retweet=True, retweet_of="9")
        bad = tweet_obj(id="2", is_retweet=True)  # no source id
        out = list(parse_stream([json.dumps(good), json.dumps(bad)]))
        assert [t.tweet_id for t in out] == ["1"]
        assert out[0].retweet_of == "9"

    def test_bad_url_dropped_tweet_kept(self):
        line = json.dumps(tweet_obj(id="1", urls=["http://ok.com/a", "not-a-url"]))
        (t,) = parse_stream([line])
        assert [u.full for u in t.links] == ["http://ok.com/a"]

    def test_day_property_uses_utc(self):
        line = json.dumps(tweet_obj(id="1", created_at="2017-01-15T23:30:00-02:00"))
        (t,) = parse_stream([line])
        assert str(t.day) == "2017-01-16"

    def test_empty_stream(self):
        assert list(parse_stream([])) == []


class TestParseMetadata:
    def test_last_record_wins_per_url(self):
        lines = [
            json.dumps({"url": "http://ex.com/a", "title": "old", "description": ""}),
            json.dumps({"url": "http://EX.com/a#f", "title": "new", "description": "d"}),
        ]
        meta = parse_metadata(lines)
        assert len(meta) == 1
        (m,) = meta.values()
        assert m.title == "new"
        assert m.description == "d"

    def test_missing_fields_default_empty(self):
        meta = parse_metadata([json.dumps({"url": "http://ex.com/a"})])
        (m,) = meta.values()
        assert (m.title, m.description) == ("", "")
