# Copyright 2020-2023 Cambridge Quantum Computing
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

from fractions import Fraction
from functools import lru_cache
import math
from typing import Any, Callable, Dict, List, Tuple

from hypothesis import given, settings
import hypothesis.strategies as st
from hypothesis.strategies._internal import SearchStrategy
import numpy as np
import pytest

from pytket.extensions.sift.taxonomy import (
    Mapping,
    NotAnnotated,
    Taxonomy,
    TaxonRecord,
    WeightProfile,
    align,
    annotate,
    attribute_similarity,
    levenshtein,
    name_similarity,
    record_similarity,
    similarity_matrix,
)

from strategies import taxonomies  # type: ignore

words = st.text(alphabet="abc", max_size=7)


def levenshtein_oracle(a: str, b: str) -> int:
    @lru_cache(maxsize=None)
    def dist(i: int, j: int) -> int:
        if i == 0 or j == 0:
            return i + j
        return min(
            dist(i - 1, j) + 1,
            dist(i, j - 1) + 1,
            dist(i - 1, j - 1) + (a[i - 1] != b[j - 1]),
        )

    return dist(len(a), len(b))


@pytest.mark.parametrize(
    "a,b,distance",
    [
        ("car", "cat", 1),
        ("", "abc", 3),
        ("x", "x", 0),
        ("kitten", "sitting", 3),
        ("Lift", "lift", 1),
        ("über", "uber", 1),
    ],
)
def test_levenshtein(a: str, b: str, distance: int) -> None:
    assert levenshtein(a, b) == distance
    assert levenshtein(b, a) == distance


@given(words, words)
@settings(max_examples=300, deadline=None)
def test_levenshtein_matches_oracle(a: str, b: str) -> None:
    assert levenshtein(a, b) == levenshtein_oracle(a, b)


@given(words, words, words)
@settings(max_examples=200, deadline=None)
def test_levenshtein_triangle(a: str, b: str, c: str) -> None:
    assert levenshtein(a, c) <= levenshtein(a, b) + levenshtein(b, c)


def test_name_similarity() -> None:
    assert name_similarity("car", "cat") == pytest.approx(2 / 3)
    assert name_similarity("lift", "lift") == 1.0
    assert name_similarity("", "abc") == 0.0
    assert name_similarity("", "") == 1.0


def test_attribute_similarity() -> None:
    assert attribute_similarity(0, 0) == 1.0
    assert attribute_similarity(2, 4) == 0.5
    assert attribute_similarity(0, 5) == 0.0
    assert attribute_similarity(4, 2) == 0.5


def test_record_similarity(t1_annotated: Taxonomy) -> None:
    r = t1_annotated[0]
    assert record_similarity(r, r) == 1.0
    d, e = t1_annotated.find("D"), t1_annotated.find("E")
    # brothersLeft 0 vs 1 and a one-letter name change
    assert record_similarity(d, e) == pytest.approx(4 / 6)
    names_only = WeightProfile(0, 0, 0, 0, 0, 1)
    assert record_similarity(d, e, names_only) == 0.0
    r1 = TaxonRecord(1, 2, 0, 0, 3, "cart")
    r2 = TaxonRecord(1, 4, 0, 0, 3, "card")
    assert record_similarity(r1, r2, names_only) == pytest.approx(
        name_similarity("cart", "card")
    )
    children_only = WeightProfile(0, 1, 0, 0, 0, 0)
    assert record_similarity(r1, r2, children_only) == 0.5


def test_record_similarity_weight_scaling() -> None:
    r1 = TaxonRecord(1, 2, 1, 0, 3, "cart")
    r2 = TaxonRecord(2, 4, 0, 0, 1, "card")
    w = WeightProfile(1, 2, 0.5, 1, 3, 2)
    scaled = WeightProfile(*(10 * x for x in w.as_tuple()))
    assert record_similarity(r1, r2, w) == pytest.approx(
        record_similarity(r1, r2, scaled)
    )
    assert record_similarity(r1, r2, w) == pytest.approx(
        record_similarity(r2, r1, w)
    )


def test_similarity_matrix(t1_annotated: Taxonomy) -> None:
    m = similarity_matrix(t1_annotated, t1_annotated)
    assert m.shape == (6, 6)
    assert np.all(np.diag(m) == 1.0)
    for i, r in enumerate(t1_annotated):
        for j, s in enumerate(t1_annotated):
            assert m[i, j] == pytest.approx(record_similarity(r, s))
    assert similarity_matrix(t1_annotated, annotate(Taxonomy())).shape == (6, 0)


def test_align_self(t1_annotated: Taxonomy) -> None:
    for threshold in (0.0, 0.99):
        mappings = align(t1_annotated, t1_annotated, threshold=threshold)
        assert [(m.c, m.c_prime) for m in mappings] == [
            (n, n) for n in "ABDECF"
        ]
        assert all(m.n == 1.0 and m.relation == "=" for m in mappings)
        assert [m.source for m in mappings] == list(range(6))


def test_align_below_threshold() -> None:
    a = annotate(Taxonomy.from_pairs([(0, "A")]))
    z = annotate(Taxonomy.from_pairs([(0, "Z")]))
    assert align(a, z, threshold=0.9) == []
    (m,) = align(a, z, threshold=0.8)
    assert m.n == pytest.approx(5 / 6)
    assert (m.c, m.c_prime) == ("A", "Z")


def test_align_tie_breaks() -> None:
    depth_only = WeightProfile(1, 0, 0, 0, 0, 0)
    t2 = annotate(Taxonomy.from_pairs([(0, "C"), (0, "D")]))
    # equal scores and no exact name: earliest target wins
    (m,) = align(annotate(Taxonomy.from_pairs([(0, "B")])), t2, depth_only, 0.0)
    assert m.c_prime == "C"
    # exact name wins a tie on the score
    (m,) = align(annotate(Taxonomy.from_pairs([(0, "D")])), t2, depth_only, 0.0)
    assert (m.c_prime, m.target) == ("D", 1)
    same = annotate(Taxonomy.from_pairs([(0, "A"), (1, "A"), (1, "A")]))
    mappings = align(same, same, depth_only, threshold=0.0)
    assert [m.c_prime for m in mappings] == ["A#0", "A#1", "A#1"]


def test_align_duplicate_names_get_labels() -> None:
    pairs = [(0, "A"), (1, "B"), (2, "D"), (1, "C"), (2, "D")]
    t = annotate(Taxonomy.from_pairs(pairs))
    mappings = align(t, t, threshold=0.0)
    assert [(m.c, m.c_prime) for m in mappings] == [
        ("A", "A"),
        ("B", "B"),
        ("D#2", "D#2"),
        ("C", "C"),
        ("D#4", "D#2"),
    ]


def test_align_errors(t1: Taxonomy, t1_annotated: Taxonomy) -> None:
    with pytest.raises(NotAnnotated):
        align(t1, t1_annotated)
    with pytest.raises(ValueError):
        align(t1_annotated, t1_annotated, threshold=1.1)
    with pytest.raises(ValueError):
        align(t1_annotated, t1_annotated, threshold=-0.5)
    empty = annotate(Taxonomy())
    assert align(empty, t1_annotated) == []
    assert align(t1_annotated, empty) == []


@given(taxonomies(max_size=40, unique_names=True))
@settings(max_examples=100, deadline=None)
def test_self_alignment_is_identity(t: Taxonomy) -> None:
    a = annotate(t)
    mappings = align(a, a, WeightProfile.uniform(), 0.0)
    assert [(m.source, m.target) for m in mappings] == [(i, i) for i in range(len(a))]
    assert all(m.n == 1.0 for m in mappings)


@given(taxonomies(max_size=20), taxonomies(max_size=20))
@settings(max_examples=100, deadline=None)
def test_scores_in_range(t: Taxonomy, u: Taxonomy) -> None:
    a, b = annotate(t), annotate(u)
    m = similarity_matrix(a, b)
    assert np.all((0.0 <= m) & (m <= 1.0))
    assert np.allclose(m, similarity_matrix(b, a).T)
    for mapping in align(a, b, threshold=0.5):
        assert mapping.n >= 0.5
        assert math.isclose(mapping.n, m[mapping.source, mapping.target])


def test_align_ties_ignore_rounding_noise() -> None:
    # both candidates score 5/6, reached through different components
    t1 = Taxonomy((TaxonRecord(0, 0, 3, 1, 3, "bc"),), annotated=True)
    t2 = Taxonomy(
        (
            TaxonRecord(0, 0, 3, 0, 3, "x"),
            TaxonRecord(0, 0, 3, 1, 3, "a"),
            TaxonRecord(0, 0, 3, 2, 3, "y"),
            TaxonRecord(0, 0, 3, 3, 3, "abc"),
        ),
        annotated=True,
    )
    m = similarity_matrix(t1, t2)
    assert m[0, 1] == pytest.approx(5 / 6)
    assert m[0, 3] == pytest.approx(5 / 6)
    assert m[0, 0] < m[0, 1] and m[0, 2] < m[0, 1]
    (mapping,) = align(t1, t2, threshold=0.0)
    assert (mapping.target, mapping.c_prime) == (1, "a")
    assert mapping.n == pytest.approx(5 / 6)


def test_extreme_weights(t1_annotated: Taxonomy) -> None:
    huge = WeightProfile(*[1e308] * 6)
    mappings = align(t1_annotated, t1_annotated, huge, 0.0)
    assert [(m.source, m.target) for m in mappings] == [(i, i) for i in range(6)]
    assert all(m.n == 1.0 for m in mappings)
    assert np.array_equal(
        similarity_matrix(t1_annotated, t1_annotated, huge),
        similarity_matrix(t1_annotated, t1_annotated),
    )
    r1 = TaxonRecord(2, name="x")
    r2 = TaxonRecord(4, name="y")
    tiny = WeightProfile(5e-324, 0, 0, 0, 0, 0)
    assert record_similarity(r1, r2, tiny) == 0.5
    assert record_similarity(r1, r2, tiny) == record_similarity(
        r1, r2, WeightProfile(1, 0, 0, 0, 0, 0)
    )


@st.composite
def named_taxonomies(
    draw: Callable[[SearchStrategy[Any]], Any],
    max_size: int = 15,
) -> Taxonomy:
    """Annotated taxonomies with short, often similar names."""
    t = draw(taxonomies(max_size=max_size))
    return annotate(Taxonomy.from_pairs((r.depth, draw(words)) for r in t))


@st.composite
def weight_profiles(
    draw: Callable[[SearchStrategy[Any]], Any],
    with_name: bool = True,
) -> WeightProfile:
    values = draw(
        st.lists(st.integers(min_value=0, max_value=10), min_size=6, max_size=6)
    )
    if not with_name:
        values[5] = 0
    if not any(values):
        values[draw(st.integers(min_value=0, max_value=4))] = 1
    return WeightProfile.from_sequence(values)


scales = st.one_of(
    st.integers(min_value=1, max_value=10**6).map(float),
    st.integers(min_value=-1000, max_value=1000).map(lambda k: 2.0**k),
)


@given(named_taxonomies(), named_taxonomies(), weight_profiles(), scales)
@settings(max_examples=200, deadline=None)
def test_align_weight_scale_invariance(
    a: Taxonomy, b: Taxonomy, w: WeightProfile, scale: float
) -> None:
    scaled = WeightProfile(*(scale * x for x in w.as_tuple()))
    for threshold in (0.0, 0.75):
        expected = align(a, b, w, threshold)
        got = align(a, b, scaled, threshold)
        assert [(m.source, m.target, m.n) for m in got] == [
            (m.source, m.target, m.n) for m in expected
        ]


def exact_name_similarity(a: str, b: str) -> Fraction:
    longest = max(len(a), len(b))
    if longest == 0:
        return Fraction(1)
    return Fraction(longest - levenshtein_oracle(a, b), longest)


def name_only_oracle(a: Taxonomy, b: Taxonomy) -> List[int]:
    """Best target by exact normalised edit distance. Only an identical name
    scores 1, so the earliest best candidate always wins."""
    targets = []
    for r in a:
        sims = [exact_name_similarity(r.name, s.name) for s in b]
        targets.append(sims.index(max(sims)))
    return targets


@given(named_taxonomies(), named_taxonomies())
@settings(max_examples=200, deadline=None)
def test_align_name_only_is_name_matching(a: Taxonomy, b: Taxonomy) -> None:
    mappings = align(a, b, WeightProfile(0, 0, 0, 0, 0, 1), 0.0)
    if not len(b):
        assert mappings == []
        return
    assert [m.source for m in mappings] == list(range(len(a)))
    assert [m.target for m in mappings] == name_only_oracle(a, b)
    for m in mappings:
        assert m.n == name_similarity(a[m.source].name, b[m.target].name)


def renamed(t: Taxonomy, names: Dict[str, str]) -> Taxonomy:
    return annotate(Taxonomy.from_pairs((r.depth, names[r.name]) for r in t))


@given(
    named_taxonomies(),
    named_taxonomies(),
    weight_profiles(with_name=False),
    st.data(),
)
@settings(max_examples=200, deadline=None)
def test_align_without_names_ignores_renaming(
    a: Taxonomy, b: Taxonomy, w: WeightProfile, data: st.DataObject
) -> None:
    old = sorted({r.name for r in a} | {r.name for r in b})
    order = data.draw(st.permutations(range(len(old))))
    names = {name: f"taxon{k}" for name, k in zip(old, order)}

    def key(mappings: List[Mapping]) -> List[Tuple[int, int, float]]:
        return [(m.source, m.target, m.n) for m in mappings]

    for threshold in (0.0, 0.75):
        assert key(align(renamed(a, names), renamed(b, names), w, threshold)) == key(
            align(a, b, w, threshold)
        )
