# Exact Haar values: Weingarten sums, direct averaging on S_m, the circle rule, moments, and the value cache.
from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
import redis

from qgkernel import cache
from qgkernel.cache import ValueCache, get_redis, reset_redis
from qgkernel.catalog import all_words, haar_state
from qgkernel.errors import UnsupportedError
from qgkernel.groups import make_group, parse_group
from qgkernel.haar import (
    HaarMethod,
    HaarOracle,
    all_partitions_value,
    char_moment,
    direct_average_value,
    haar_value,
)
from qgkernel.words import antipode, coproduct_expand, parse_word


# Helper: h(w) from group and word strings
def h(group: str, word: str) -> Fraction:
    g = parse_group(group)
    return haar_value(g, parse_word(word, g))


# Helper: in-memory stand-in for the two Redis calls the cache makes
class FakeRedis:
    def __init__(self) -> None:
        self.store: dict[str, str] = {}

    def get(self, key):
        return self.store.get(key)

    def set(self, key, value, nx=False):
        if nx and key in self.store:
            return None
        self.store[key] = value
        return True


# Second moments of a diagonal entry: 1/n on O_n+, O_n and U_n+
@pytest.mark.parametrize("n", [2, 3, 4])
def test_second_moment(n):
    assert h(f"o+:{n}", "1,1;1,1") == Fraction(1, n)
    assert h(f"o:{n}", "1,1;1,1") == Fraction(1, n)
    assert h(f"u+:{n}", "1,1;1,1*") == Fraction(1, n)


# Fourth moments: 2/(n(n+1)) free, 3/(n(n+2)) classical
@pytest.mark.parametrize("n", [2, 3, 5])
def test_fourth_moment(n):
    assert h(f"o+:{n}", "1,1;1,1;1,1;1,1") == Fraction(2, n * (n + 1))
    assert h(f"o:{n}", "1,1;1,1;1,1;1,1") == Fraction(3, n * (n + 2))


# Known small values
def test_reference_values():
    assert h("o+:2", "1,1;1,1;1,1;1,1") == Fraction(1, 3)
    assert h("o:2", "1,1;1,1;1,1;1,1") == Fraction(3, 8)
    assert h("s:4", "1,1;2,2") == Fraction(1, 12)
    assert h("s+:4", "1,1") == Fraction(1, 4)
    assert h("o+:1", "1,1;1,1;1,1;1,1") == 1


# Odd degree and color-imbalanced words vanish
def test_vanishing_words():
    assert h("o+:3", "1,1;1,2;2,2") == 0
    assert h("u+:2", "1,1;1,1") == 0
    assert h("u:2", "1,1;1,1*;1,1") == 0


# Free and classical values differ first at degree 4 on crossing patterns
def test_crossing_pattern_distinguishes_free_from_classical():
    word = "1,1;2,2;1,1;2,2"
    assert h("o+:2", word) != h("o:2", word)
    assert h("u+:2", "1,1;2,2*;1,1*;2,2") != h("u:2", "1,1;2,2*;1,1*;2,2")


# The circle rule counts z against z*
def test_torus():
    assert h("t", "1,1;1,1*") == 1
    assert h("t", "1,1;1,1") == 0
    assert h("t", "1") == 1
    assert h("t", "1,1*;1,1;1,1;1,1*") == 1


# Direct averaging agrees with the ALL-partition Weingarten sum, including the singular case m < degree
@pytest.mark.parametrize("m,degree", [(3, 3), (2, 3)])
def test_direct_average_matches_weingarten(m, degree):
    g = make_group("s", m)
    for w in all_words(g, degree):
        assert direct_average_value(g, w) == all_partitions_value(g, w), str(w)


# Invariance under the coproduct on a full small word set
def test_left_invariance_identity_o_plus_2():
    g = make_group("o+", 2)
    state = haar_state(g)
    for w in all_words(g, 4):
        lhs = sum((state(a) * state(b) for a, b in coproduct_expand(w)), Fraction(0))
        assert lhs == state(w)


# Method validation
def test_method_errors():
    with pytest.raises(UnsupportedError):
        HaarOracle(make_group("o+", 2), HaarMethod.DIRECT_AVERAGE)
    with pytest.raises(UnsupportedError):
        HaarOracle(make_group("t"), HaarMethod.WEINGARTEN)
    with pytest.raises(UnsupportedError):
        HaarOracle(parse_group("free(o+:2,o+:2)"))
    assert HaarOracle(make_group("s", 4)).method == HaarMethod.DIRECT_AVERAGE


# Character moments of O_2+ are Catalan numbers at even order
def test_catalan_moments():
    g = make_group("o+", 2)
    assert [char_moment(g, k) for k in range(9)] == [1, 0, 1, 0, 2, 0, 5, 0, 14]


# Classical and permutation moments
def test_classical_moments():
    assert char_moment(make_group("o", 2), 2) == 1
    assert char_moment(make_group("s", 4), 1) == 1
    assert char_moment(make_group("s", 4), 2) == 2
    assert char_moment(make_group("s+", 4), 3) == 5
    assert char_moment(make_group("t"), 3) == 0
    assert char_moment(make_group("u+", 3), 0) == 1


# The oracle memoizes by group and printed word
def test_oracle_memo():
    g = make_group("o+", 3)
    oracle = HaarOracle(g)
    w = parse_word("1,1;1,2;2,1;2,2", g)
    first = oracle(w)
    assert len(oracle.cache) == 1
    assert oracle(w) == first
    assert oracle.value(w, use_cache=False) == first


# With a Redis tier present, values are written once and read back exactly
def test_value_cache_redis_tier(monkeypatch):
    fake = FakeRedis()
    monkeypatch.setattr(cache, "get_redis", lambda: fake)
    writer = ValueCache("haar:test")
    writer.put("o+:2|1,1;1,1", Fraction(1, 2))
    assert fake.store == {"qgk:v1:haar:test:o+:2|1,1;1,1": "1/2"}
    writer.put("o+:2|1,1;1,1", Fraction(7, 9))
    assert fake.store["qgk:v1:haar:test:o+:2|1,1;1,1"] == "1/2"
    reader = ValueCache("haar:test")
    assert reader.get("o+:2|1,1;1,1") == Fraction(1, 2)
    fake.store["qgk:v1:haar:test:bad"] = "not-a-number"
    assert reader.get("bad") is None


# An unreachable Redis fails open
def test_redis_fail_open(fresh_settings):
    fresh_settings(QGK_REDIS_ENABLED="true", QGK_REDIS_URL="redis://127.0.0.1:1/0")
    assert get_redis() is None
    assert get_redis() is None


# Consistent index constraints on S_m count fixed points
def test_direct_average_counts():
    g = make_group("s", 5)
    assert direct_average_value(g, parse_word("2,1;2,1", g)) == Fraction(1, 5)
    assert direct_average_value(g, parse_word("2,1;3,1", g)) == 0
    for i, j in itertools.product(range(1, 6), repeat=2):
        assert direct_average_value(g, parse_word(f"{i},{j}", g)) == Fraction(1, 5)


# Rows and columns of u are orthonormal in expectation
@pytest.mark.parametrize("group", ["o+:3", "o:3", "o+:4"])
def test_quadratic_relations(group):
    n = parse_group(group).n
    for i, j in itertools.product(range(1, n + 1), repeat=2):
        rows = sum((h(group, f"{i},{k};{j},{k}") for k in range(1, n + 1)), Fraction(0))
        cols = sum((h(group, f"{k},{i};{k},{j}") for k in range(1, n + 1)), Fraction(0))
        assert rows == cols == (1 if i == j else 0)


# The Haar state is invariant under the antipode
@pytest.mark.parametrize("group,degree", [("o+:2", 4), ("u+:2", 3), ("s+:3", 3)])
def test_antipode_invariance(group, degree):
    g = parse_group(group)
    state = haar_state(g)
    for w in all_words(g, degree):
        assert state(antipode(w)) == state(w), str(w)


# The shared tier connects once per process and is forgotten by reset_redis
def test_redis_connects_once(fresh_settings, monkeypatch):
    calls = []

    class PingingRedis(FakeRedis):
        def ping(self):
            return True

    def from_url(url, **kwargs):
        calls.append(url)
        return PingingRedis()

    monkeypatch.setattr(redis.Redis, "from_url", from_url)
    fresh_settings(QGK_REDIS_ENABLED="true", QGK_REDIS_URL="redis://cache.local:6379/2")
    client = get_redis()
    assert isinstance(client, PingingRedis)
    assert get_redis() is client
    assert calls == ["redis://cache.local:6379/2"]
    reset_redis()
    assert get_redis() is not client
    assert len(calls) == 2
