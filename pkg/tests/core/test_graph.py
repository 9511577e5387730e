"""二部グラフとタイプロファイルのテスト"""

from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tiestrength.core.errors import (
    DuplicateEventError,
    InputError,
    UnknownPersonError,
    UnsortedProfileError,
)
from tiestrength.core.graph import (
    TieProfile,
    all_ties,
    build_graph,
    common_events,
    event_size_histogram,
    incidence_matrix,
    tie_profile,
    tie_profiles,
)
from tiestrength.core.records import EventRecord

PEOPLE = ["p0", "p1", "p2", "p3", "p4", "p5"]

events_strategy = st.lists(
    st.lists(st.sampled_from(PEOPLE), min_size=1, max_size=5, unique=True),
    max_size=8,
)


def _records(events):
    return [EventRecord(f"E{k}", tuple(m), k) for k, m in enumerate(events)]


def test_build_graph_empty():
    """空のイベント列からのグラフ構築をテスト"""
    g = build_graph([])
    assert g.num_people == 0
    assert g.num_events == 0
    assert all_ties(g) == []
    assert event_size_histogram(g) == {}


def test_build_graph_adjacency(graph_factory):
    """人物とイベントの隣接関係をテスト"""
    # ケース1: 2人のイベント1つ
    g = graph_factory([["u", "v"]])
    assert g.num_people == 2
    assert g.num_events == 1
    assert g.events_of("u") == (0,)
    assert g.events_of("v") == (0,)

    # ケース2: 2つのイベント
    g = graph_factory([["u", "v", "w"], ["u", "v"]])
    assert g.num_people == 3
    assert g.num_events == 2
    assert [g.event_label(j) for j in g.events_of("u")] == ["E1", "E2"]
    assert g.members("E1") == (0, 1, 2)


def test_build_graph_duplicates(caplog):
    """重複イベントIDと重複参加者の扱いをテスト"""
    with pytest.raises(DuplicateEventError):
        build_graph([EventRecord("E1", ("u", "v")), EventRecord("E1", ("u",))])

    g = build_graph([EventRecord("E1", ("u", "v", "u"))])
    assert g.event_size("E1") == 2
    assert g.duplicate_participants == 1
    assert "重複参加者" in caplog.text

    with pytest.raises(InputError):
        build_graph([EventRecord("E1", ("u", ""))])


def test_unknown_person(graph_factory):
    """存在しない人物の指定がエラーになることをテスト"""
    g = graph_factory([["u", "v"]])
    with pytest.raises(UnknownPersonError):
        common_events(g, "u", "nobody")
    with pytest.raises(UnknownPersonError):
        g.person_id(5)
    with pytest.raises(InputError):
        common_events(g, "u", "u")


def test_common_events(graph_factory):
    """共通イベントの計算をテスト"""
    g = graph_factory([["u", "v"]])
    assert common_events(g, "u", "v") == {0}

    g = graph_factory([["u", "w"], ["v", "w"]])
    assert common_events(g, "u", "v") == frozenset()

    g = graph_factory([["u", "v", "w"], ["u", "v"], ["u", "w"]])
    assert {g.event_label(j) for j in common_events(g, "u", "v")} == {"E1", "E2"}


def test_tie_profile(graph_factory):
    """タイプロファイルの計算をテスト"""
    g = graph_factory([["u", "v", "w"], ["u", "v"]])
    assert tie_profile(g, "u", "v") == TieProfile((2, 3))
    assert str(tie_profile(g, "u", "v")) == "(2,3)"

    g = graph_factory([["u", "w"], ["v", "w"]])
    assert tie_profile(g, "u", "v") == TieProfile(())

    g = graph_factory(
        [["u", "v", "a", "b", "c"], ["u", "v"], ["u", "v"]],
    )
    assert tie_profile(g, "u", "v").sizes == (2, 2, 5)


def test_tie_profile_validation():
    """プロファイルの検証をテスト"""
    with pytest.raises(UnsortedProfileError):
        TieProfile((3, 2))
    with pytest.raises(InputError):
        TieProfile((1, 2))
    assert TieProfile.from_sizes([5, 2, 2]).sizes == (2, 2, 5)
    assert TieProfile((2, 3)).sort_key == (2, (2, 3))


def test_all_ties(graph_factory):
    """タイの列挙をテスト"""
    g = graph_factory([["u", "v", "w"]])
    assert all_ties(g) == [(0, 1), (0, 2), (1, 2)]

    g = graph_factory([["u", "v"], ["x", "y"]])
    labeled = [(g.person_label(i), g.person_label(j)) for i, j in all_ties(g)]
    assert labeled == [("u", "v"), ("x", "y")]


def test_event_size_histogram(graph_factory):
    """イベント人数のヒストグラムをテスト"""
    g = graph_factory([["a", "b"], ["c", "d"], ["a", "c", "e"]])
    assert event_size_histogram(g) == {2: 2, 3: 1}


def test_event_size_histogram_random():
    """ランダムなイベント列でヒストグラムの総数がイベント数と一致することをテスト"""
    rng = np.random.default_rng(0)
    records = []
    for k in range(100):
        size = int(rng.integers(1, 6))
        members = rng.choice(len(PEOPLE), size=size, replace=False)
        records.append(EventRecord(f"E{k}", tuple(PEOPLE[int(i)] for i in members)))
    g = build_graph(records)
    histogram = event_size_histogram(g)
    assert sum(histogram.values()) == 100
    for size, count in histogram.items():
        assert count == sum(1 for r in records if len(r.participants) == size)


def test_incidence_matrix(graph_factory):
    """接続行列をテスト"""
    g = graph_factory([["u", "v"], ["v", "w"]])
    b = incidence_matrix(g).toarray()
    assert b.shape == (3, 2)
    assert b.tolist() == [[1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]


def test_perturbations(graph_factory):
    """摂動用の変換が新しいグラフを返すことをテスト"""
    g = graph_factory([["u", "v", "w"], ["u", "v"]])

    added = g.with_event(EventRecord("E9", ("u", "x"), 9))
    assert added.num_events == 3
    assert g.num_events == 2
    assert "x" in added.people

    removed = g.without_event("E2")
    assert removed.num_events == 1
    assert removed.people == g.people

    shrunk = g.without_attendee("E1", "w")
    assert shrunk.event_size("E1") == 2
    assert shrunk.people == g.people
    assert shrunk.events_of("w") == ()

    restricted = g.restrict_to_events(["E2"])
    assert restricted.people == ("u", "v")
    assert restricted.events == ("E2",)


def test_relabel(graph_factory):
    """ラベルの付け替えでプロファイルが保たれることをテスト"""
    g = graph_factory([["u", "v", "w"], ["u", "v"]])
    h = g.relabel(
        {"u": "c", "v": "a", "w": "b"},
        {"E1": "X", "E2": "Y"},
        event_order=[1, 0],
    )
    assert h.people == ("a", "b", "c")
    assert h.events == ("Y", "X")
    assert tie_profile(h, "c", "a") == tie_profile(g, "u", "v")
    assert h.event_time(0) == g.event_time(1)


def test_records_round_trip(graph_factory):
    """to_records から同じグラフを再構築できることをテスト"""
    g = graph_factory([["u", "v"], ["v", "w"]], times=[3, 5])
    h = build_graph(g.to_records(), people=g.people)
    assert h.people == g.people
    assert h.event_members == g.event_members
    assert [h.event_time(j) for j in range(h.num_events)] == [3, 5]


@settings(max_examples=60, deadline=None)
@given(events_strategy)
def test_adjacency_is_symmetric(events):
    """人物→イベントとイベント→人物の隣接が対称であることをテスト"""
    g = build_graph(_records(events))
    for j in range(g.num_events):
        for i in g.members(j):
            assert j in g.event_set_of(i)
    for i in range(g.num_people):
        for j in g.events_of(i):
            assert i in g.members(j)


@settings(max_examples=60, deadline=None)
@given(events_strategy)
def test_tie_profiles_match_pairwise(events):
    """一括計算したプロファイルがペアごとの計算と一致することをテスト"""
    g = build_graph(_records(events))
    profiles = tie_profiles(g)
    assert list(profiles) == all_ties(g)
    for i, j in combinations(range(g.num_people), 2):
        profile = tie_profile(g, i, j)
        assert profile == profiles.get((i, j), TieProfile(()))
        assert list(profile.sizes) == sorted(profile.sizes)
        assert tie_profile(g, j, i) == profile


@settings(max_examples=80, deadline=None)
@given(events_strategy, st.data())
def test_removing_unrelated_event_keeps_profile(events, data):
    """u も v も参加しないイベントを削除してもプロファイルが変わらないことをテスト"""
    g = build_graph(_records(events), people=PEOPLE)
    u, v = data.draw(
        st.lists(st.sampled_from(PEOPLE), min_size=2, max_size=2, unique=True)
    )
    unrelated = [
        j
        for j in range(g.num_events)
        if g.person_id(u) not in g.members(j) and g.person_id(v) not in g.members(j)
    ]
    before = tie_profile(g, u, v)
    for j in unrelated:
        h = g.without_event(g.event_label(j))
        assert tie_profile(h, u, v) == before
        assert len(common_events(h, u, v)) == len(before.sizes)
