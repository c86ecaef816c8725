# Group catalog: experiment pairs, net presets, word corpora and the unitary-split check.
from __future__ import annotations

import numpy as np
import pytest

from qgkernel.amenability import CharacterNet
from qgkernel.catalog import (
    all_words,
    build_net,
    experiment_pair,
    load_words,
    random_words,
    second_rotation,
    usplit_check,
)
from qgkernel.errors import ArgumentError, UnsupportedError
from qgkernel.groups import make_group, parse_group
from qgkernel.morphisms import fixed_vector
from qgkernel.schemas import NetSpec


# Small exhaustive check: h_{U_2+} factors through T * O_2+
def test_usplit_full_word_set():
    report = usplit_check(2, 3)
    assert report.passed
    assert report.words_checked == 1 + 8 + 64 + 512
    assert report.max_discrepancy.as_fraction() == 0


# Larger word sets fall back to a seeded sample
def test_usplit_sampled():
    report = usplit_check(3, 4, sample=30, seed=1)
    assert report.words_checked == 30
    assert report.passed


def test_second_rotation_is_orthogonal():
    r = second_rotation(4)
    assert r.dot(r.T).tolist() == np.eye(4, dtype=int).tolist()
    assert all(x != 0 for x in fixed_vector(r))


# U_4+ at degree four: a 500-word sample
@pytest.mark.slow
def test_usplit_n4_sample():
    report = usplit_check(4, 4, sample=500, seed=0)
    assert report.words_checked == 500
    assert report.passed, report.worst_word


# Pairs are defined on O_n+ only; block splitting needs an even n
def test_experiment_pair_errors():
    with pytest.raises(UnsupportedError):
        experiment_pair("perm+blocksplit", make_group("o+", 3))
    with pytest.raises(UnsupportedError):
        experiment_pair("classical+fixlast", make_group("o", 3))
    with pytest.raises(ArgumentError):
        experiment_pair("bogus", make_group("o+", 3))
    tau1, tau2 = experiment_pair("haar", make_group("u+", 2))
    assert tau1 is tau2


def test_words_file(tmp_path):
    path = tmp_path / "words.txt"
    path.write_text("# header\n1,1;2,2\n\n  1,2 + -1*2,1  # antisymmetric\n")
    g = make_group("o+", 2)
    words = load_words(path, g)
    assert len(words) == 2 and str(words[0]) == "1,1;2,2"
    assert len(words[1]) == 2
    empty = tmp_path / "empty.txt"
    empty.write_text("# nothing\n")
    with pytest.raises(ArgumentError):
        load_words(empty, g)


# Seeded corpora are reproducible and respect the degree range
def test_random_words():
    g = make_group("u+", 2)
    a = random_words(g, 25, 4, seed=3)
    assert [str(w) for w in a] == [str(w) for w in random_words(g, 25, 4, seed=3)]
    assert all(1 <= w.degree <= 4 for w in a)
    with pytest.raises(UnsupportedError):
        random_words(parse_group("free(t,o+:2)"), 3, 2)
    assert len(all_words(make_group("o+", 2), 2)) == 21


# The convolved preset multiplies sample counts
def test_convolved_net():
    group, net, target = build_net(NetSpec(preset="o-convolved", n=3, sizes=[4, 6], seed=2))
    assert group.name == "o+:3"
    assert [theta.k for theta in net] == [16, 36]
    assert all(isinstance(theta, CharacterNet) for theta in net)
    assert target.group.name == "o+:3"
