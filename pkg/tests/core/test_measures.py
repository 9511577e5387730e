"""Tie strength 尺度のテスト"""

import math
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tiestrength.core.errors import (
    ConfigError,
    ConvergenceError,
    MissingTimestampError,
)
from tiestrength.core.graph import build_graph, tie_profile
from tiestrength.core.measures import (
    Aggregator,
    MeasureKind,
    MeasureSpec,
    characterized_form,
    score_adamic_adar,
    score_all,
    score_common,
    score_delta,
    score_jaccard,
    score_katz,
    score_linear,
    score_max,
    score_pair,
    score_preferential,
    score_proportional,
    score_row,
    score_rwr,
    score_simrank,
    score_temporal,
)
from tiestrength.core.records import EventRecord

PEOPLE = ["p0", "p1", "p2", "p3", "p4"]

events_strategy = st.lists(
    st.lists(st.sampled_from(PEOPLE), min_size=1, max_size=4, unique=True),
    min_size=1,
    max_size=6,
)


def _graph(events):
    return build_graph(
        [EventRecord(f"E{k}", tuple(m), k) for k, m in enumerate(events)],
        people=PEOPLE,
    )


def _katz_by_walks(g, u, v, gamma, max_length):
    """人物→イベント→人物のウォークを列挙して Katz を求めるオラクル"""
    target = g.person_id(v)

    def walk(person, length):
        total = 0.0
        if length > 0 and person == target:
            total += gamma ** (-length)
        if length + 2 > max_length:
            return total
        for event in g.events_of(person):
            for nxt in g.members(event):
                total += walk(nxt, length + 2)
        return total

    return walk(g.person_id(u), 0)


# --- 閉形式の尺度 ---


def test_score_common(graph_factory):
    """Common Neighbors をテスト"""
    assert score_common(graph_factory([["u", "v"]]), "u", "v") == 1
    assert score_common(graph_factory([["u", "w"], ["v", "w"]]), "u", "v") == 0
    g = graph_factory(
        [["u", "v"], ["u", "v", "w"], ["u", "v", "a", "b", "c", "d", "e"]]
    )
    assert score_common(g, "u", "v") == 3


def test_score_jaccard(graph_factory):
    """Jaccard 係数をテスト"""
    assert score_jaccard(graph_factory([["u", "v"]]), "u", "v") == 1.0

    g = graph_factory([["u"], ["u", "v"], ["v"]])
    assert score_jaccard(g, "u", "v") == pytest.approx(1 / 3)

    # 両者ともイベントに参加していない
    g = graph_factory([], people=["u", "v"])
    assert score_jaccard(g, "u", "v") == 0.0


def test_score_delta(graph_factory):
    """Delta をテスト"""
    assert score_delta(graph_factory([["u", "v"]]), "u", "v") == 1.0
    assert score_delta(graph_factory([["u", "v", "w"]]), "u", "v") == pytest.approx(
        1 / 3
    )
    g = graph_factory([["u", "v"], ["u", "v", "w"]])
    assert score_delta(g, "u", "v") == pytest.approx(4 / 3)


def test_score_adamic_adar(graph_factory):
    """Adamic-Adar（自然対数）をテスト"""
    assert score_adamic_adar(graph_factory([["u", "v"]]), "u", "v") == pytest.approx(
        1.4427, abs=1e-4
    )
    assert score_adamic_adar(graph_factory([["u", "w"], ["v"]]), "u", "v") == 0.0
    g = graph_factory([["u", "v"], ["u", "v"]])
    assert score_adamic_adar(g, "u", "v") == pytest.approx(2.8854, abs=1e-4)


def test_score_linear_and_max(graph_factory):
    """Linear と Max をテスト"""
    assert score_linear(graph_factory([["u", "v"]]), "u", "v") == 0.5

    g = graph_factory([["u", "v"], ["u", "v", "w", "x"]])
    assert score_linear(g, "u", "v") == pytest.approx(0.75)
    assert score_max(g, "u", "v") == 0.5

    g = graph_factory([["u", "v", "a"], ["u", "v", "b"], ["u", "v", "c"]])
    assert score_max(g, "u", "v") == pytest.approx(1 / 3)

    g = graph_factory([["u", "w"], ["v", "w"]])
    assert score_linear(g, "u", "v") == 0.0
    assert score_max(g, "u", "v") == 0.0


def test_score_preferential(graph_factory):
    """Preferential Attachment をテスト"""
    g = graph_factory([["u", "a"], ["u", "b"], ["v", "a"], ["v", "b"], ["v", "c"]])
    assert score_preferential(g, "u", "v") == 6
    g = graph_factory([["u", "a"]], people=["u", "a", "v"])
    assert score_preferential(g, "u", "v") == 0
    assert score_preferential(graph_factory([["u", "v"]]), "u", "v") == 1


# --- Katz ---


def test_score_katz_single_event(pair_event_graph):
    """2人イベントでの Katz をテスト"""
    spec = MeasureSpec(kind="katz", katz_gamma=2.0, katz_max_walk_length=2)
    assert score_katz(pair_event_graph, "u", "v", spec) == pytest.approx(0.25)

    spec = spec.with_overrides(katz_max_walk_length=4)
    assert score_katz(pair_event_graph, "u", "v", spec) == pytest.approx(0.375)


def test_score_katz_no_path(graph_factory):
    """L 以内に経路がないペアは0になることをテスト"""
    g = graph_factory([["u", "w"], ["v", "x"]])
    spec = MeasureSpec(kind="katz")
    assert score_katz(g, "u", "v", spec) == 0.0


@settings(max_examples=25, deadline=None)
@given(events_strategy, st.sampled_from([2, 4, 6]))
def test_score_katz_matches_walk_enumeration(events, max_length):
    """Katz がウォークの列挙と一致することをテスト"""
    g = _graph(events)
    spec = MeasureSpec(kind="katz", katz_gamma=3.0, katz_max_walk_length=max_length)
    for u, v in combinations(PEOPLE, 2):
        expected = _katz_by_walks(g, u, v, 3.0, max_length)
        assert score_katz(g, u, v, spec) == pytest.approx(expected, rel=1e-9, abs=1e-12)


# --- RWR ---


def test_score_rwr_line(graph_factory):
    """3人の直線グラフで RWR が線形方程式の解と一致することをテスト"""
    g = graph_factory([["u", "w"], ["w", "v"]])
    alpha = 0.15
    spec = MeasureSpec(kind="rwr", rwr_alpha=alpha)

    # 頂点の並び: u, w, v, P1, P2
    adjacency = np.zeros((5, 5))
    for person, event in [(0, 3), (1, 3), (1, 4), (2, 4)]:
        adjacency[person, event] = adjacency[event, person] = 1.0
    transition = adjacency / adjacency.sum(axis=1, keepdims=True)
    restart = np.array([1.0, 0, 0, 0, 0])
    stationary = np.linalg.solve(
        np.eye(5) - (1 - alpha) * transition.T, alpha * restart
    )

    assert score_rwr(g, "u", "v", spec) == pytest.approx(stationary[2], abs=1e-7)
    assert score_rwr(g, "u", "w", spec) == pytest.approx(stationary[1], abs=1e-7)


def test_score_rwr_symmetry_and_reachability(graph_factory, pair_event_graph):
    """RWR の対称性と到達不能ペアをテスト"""
    spec = MeasureSpec(kind="rwr")
    assert score_rwr(pair_event_graph, "u", "v", spec) == pytest.approx(
        score_rwr(pair_event_graph, "v", "u", spec)
    )

    g = graph_factory([["u", "w"], ["v", "x"]])
    assert score_rwr(g, "u", "v", spec) == 0.0


# --- SimRank ---


def test_score_simrank(graph_factory, pair_event_graph):
    """SimRank の不動点をテスト"""
    spec = MeasureSpec(kind="simrank", simrank_gamma=0.8)
    assert score_simrank(pair_event_graph, "u", "u", spec) == 1.0
    assert score_simrank(pair_event_graph, "u", "v", spec) == pytest.approx(0.8)

    # 2人で2つのイベントを共有: x = γ/4 (2 + 2x) の解 γ/(2-γ)
    g = graph_factory([["u", "v"], ["u", "v"]])
    assert score_simrank(g, "u", "v", spec) == pytest.approx(2 / 3, abs=1e-7)

    g = graph_factory([["u", "w"]], people=["u", "w", "v"])
    assert score_simrank(g, "u", "v", spec) == 0.0


# --- Proportional / Temporal ---


def test_score_proportional(pair_event_graph):
    """Proportional の不動点をテスト"""
    spec = MeasureSpec(kind="proportional", epsilon=0.4)
    table = score_proportional(pair_event_graph, spec)
    assert table.get(0, 1) == pytest.approx(1 - 0.4 / 2, abs=1e-8)
    assert table.residual is not None and table.residual < spec.tolerance

    assert len(score_proportional(build_graph([]), spec)) == 0


def test_score_temporal(pair_event_graph, graph_factory):
    """Temporal Proportional をテスト"""
    spec = MeasureSpec(kind="temporal", epsilon=0.5)
    assert score_temporal(pair_event_graph, spec).get(0, 1) == pytest.approx(0.75)

    # 最初のイベントの値は初期値に依存しない
    g = graph_factory([["a", "b", "c", "d"]])
    expected = 0.5 / 4 + 0.5 / 3
    for init in (1e-6, 0.3, 0.0):
        table = score_temporal(g, spec.with_overrides(temporal_init=init))
        assert table.get(0, 1) == pytest.approx(expected)

    # 共に参加していないペアは表に含まれない（0として扱う）
    g = graph_factory([["u", "w"], ["v", "x"]])
    table = score_temporal(g, spec)
    assert table.get(g.person_id("u"), g.person_id("v")) == 0.0


def test_score_temporal_event_order():
    """同時刻のイベントは入力順ではなくイベントIDの順に処理されることをテスト"""
    spec = MeasureSpec(kind="temporal")
    first = EventRecord("B", ("u", "v", "w"), 1)
    second = EventRecord("A", ("u", "v"), 1)
    g = build_graph([first, second])
    h = build_graph([second, first])
    assert score_temporal(g, spec).scores == score_temporal(h, spec).scores


def test_score_temporal_requires_timestamps():
    """タイムスタンプがない場合のエラーをテスト"""
    g = build_graph([EventRecord("E1", ("u", "v"))])
    with pytest.raises(MissingTimestampError):
        score_temporal(g, MeasureSpec(kind="temporal"))


def test_convergence_error(pair_event_graph):
    """反復回数が足りない場合に残差付きのエラーになることをテスト"""
    for kind in ("rwr", "simrank", "proportional"):
        spec = MeasureSpec(kind=kind, max_iterations=1, tolerance=1e-15)
        with pytest.raises(ConvergenceError) as exc_info:
            score_all(pair_event_graph, spec)
        assert exc_info.value.iterations == 1
        assert exc_info.value.residual > 0
        assert exc_info.value.exit_code == 4


# --- 共通インターフェース ---


def test_score_all(triangle_graph, graph_factory):
    """全タイのスコア表をテスト"""
    table = score_all(triangle_graph, MeasureSpec(kind="delta"))
    assert len(table) == 3
    assert all(v == pytest.approx(1 / 3) for v in table.scores.values())

    g = graph_factory([["u", "v"], ["x", "y"]])
    table = score_all(g, MeasureSpec(kind="common"))
    assert table.labeled() == {("u", "v"): 1.0, ("x", "y"): 1.0}
    assert table.get(g.person_id("u"), g.person_id("x")) == 0.0


@pytest.mark.parametrize("kind", [k.value for k in MeasureKind])
def test_score_all_empty_graph(kind):
    """空グラフではどの尺度も空の表になることをテスト"""
    assert len(score_all(build_graph([]), MeasureSpec(kind=kind))) == 0


def test_score_all_wide_pairs(graph_factory):
    """共通イベントのないペアも評価できることをテスト"""
    g = graph_factory([["u", "a"], ["v", "a"], ["v", "b"]])
    table = score_all(g, MeasureSpec(kind="preferential"), pairs=[("u", "v")])
    assert table.get(g.person_id("u"), g.person_id("v")) == 2.0

    table = score_all(g, MeasureSpec(kind="delta"), pairs=[("u", "v")])
    assert (g.person_id("u"), g.person_id("v")) not in table


@pytest.mark.parametrize("kind", ["delta", "jaccard", "katz", "rwr", "simrank"])
def test_score_all_independent_of_threads(kind):
    """スレッド数によって結果が変わらないことをテスト"""
    g = _graph([["p0", "p1", "p2"], ["p1", "p3"], ["p2", "p3", "p4"], ["p0", "p4"]])
    spec = MeasureSpec(kind=kind)
    assert score_all(g, spec, threads=1).scores == score_all(g, spec, threads=4).scores


@pytest.mark.parametrize("kind", [k.value for k in MeasureKind])
def test_score_row_matches_score_pair(kind):
    """score_row が score_pair / score_all と一致することをテスト"""
    g = _graph([["p0", "p1", "p2"], ["p1", "p3"], ["p2", "p3", "p4"], ["p0", "p4"]])
    spec = MeasureSpec(kind=kind)
    row = score_row(g, "p1", spec)
    assert sorted(row) == [0, 2, 3, 4]
    for j, value in row.items():
        if kind in ("proportional", "temporal"):
            expected = score_all(g, spec).get(1, j)
        else:
            expected = score_pair(g, "p1", j, spec)
        assert value == pytest.approx(expected, abs=1e-9)


# --- 特徴づけ ---


def test_characterized_form():
    """(g, h) 形式をテスト"""
    common = characterized_form("common")
    assert common is not None
    assert common.g is Aggregator.SUM
    assert common.h(7) == 1.0

    max_form = characterized_form(MeasureKind.MAX)
    assert max_form is not None
    assert max_form.g is Aggregator.MAX
    assert max_form.h(4) == 0.25

    assert characterized_form("jaccard") is None


def test_single_event_bounds():
    """1イベント分の強さの上下限をテスト"""
    assert characterized_form("delta").bound_violations(10) == []
    assert characterized_form("common").bound_violations(10) == []
    assert characterized_form("linear").bound_violations(10) == [2]
    assert characterized_form("max").bound_violations(10) == [2]
    assert characterized_form("adamic-adar").bound_violations(10) == [2]
    assert characterized_form("delta").total_single_event(5) == pytest.approx(1.0)


@settings(max_examples=50, deadline=None)
@given(
    events_strategy,
    st.sampled_from(["common", "delta", "adamic-adar", "linear", "max"]),
)
def test_characterized_form_matches_scorer(events, kind):
    """特徴づけ形式がプロファイルだけからスコアを再現することをテスト"""
    g = _graph(events)
    form = characterized_form(kind)
    spec = MeasureSpec(kind=kind)
    for u, v in combinations(PEOPLE, 2):
        expected = form.evaluate(tie_profile(g, u, v))
        assert math.isclose(score_pair(g, u, v, spec), expected, abs_tol=1e-12)


# --- MeasureSpec ---


def test_measure_spec_validation():
    """パラメータの範囲チェックをテスト"""
    with pytest.raises(ConfigError):
        MeasureSpec(kind="katz", katz_gamma=1.0)
    with pytest.raises(ConfigError):
        MeasureSpec(kind="katz", katz_max_walk_length=3)
    with pytest.raises(ConfigError):
        MeasureSpec(kind="rwr", rwr_alpha=1.0)
    with pytest.raises(ConfigError):
        MeasureSpec(kind="temporal", temporal_init=-1.0)
    with pytest.raises(ConfigError):
        MeasureSpec(kind="unknown")
    with pytest.raises(ConfigError):
        MeasureSpec(kind="delta").with_overrides(gamma=2)


def test_measure_kind_parse():
    """尺度名の解決をテスト"""
    assert MeasureKind.parse("AA") is MeasureKind.ADAMIC_ADAR
    assert MeasureKind.parse("adamic_adar") is MeasureKind.ADAMIC_ADAR
    assert MeasureKind.parse(" Delta ") is MeasureKind.DELTA
    assert MeasureKind.TEMPORAL.display_name == "Temporal Proportional"
    assert MeasureSpec(kind="delta").to_dict()["kind"] == "delta"
