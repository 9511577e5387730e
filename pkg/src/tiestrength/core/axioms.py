"""Tie strength の公理を機械的に検査するモジュール。

ランダムに生成した小さなグラフに公理ごとの摂動を加え、尺度の値が
公理どおりに振る舞うかを確かめます。違反が見つかった場合は、再実行で
同じ違反を再現できる反例（グラフ・ペア・摂動・観測値）を返します。

公理の充足を証明するものではなく、有限回の反証の試みです。
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
import yaml

from tiestrength.core.errors import ConfigError, InputError, TieStrengthError
from tiestrength.core.graph import BipartiteGraph, build_graph
from tiestrength.core.measures import (
    ITERATIVE_KINDS,
    MeasureKind,
    MeasureSpec,
    characterized_form,
    score_all,
    score_pair,
    score_row,
)
from tiestrength.core.records import EventRecord

logger = logging.getLogger(__name__)

# A7 で「同じ既存の強さ」とみなす丸め桁数と出力の許容差
A7_KEY_DIGITS = 9
A7_OUTPUT_TOLERANCE = 1e-9

ADDED_EVENT_ID = "added"
FORCED_EVENT_ID = "forced"


class AxiomId(str, Enum):
    """公理の識別子。"""

    A1 = "A1"
    A2 = "A2"
    A3 = "A3"
    A4 = "A4"
    A5 = "A5"
    A6 = "A6"
    A7 = "A7"
    A8 = "A8"

    @property
    def title(self) -> str:
        return AXIOM_TITLES[self]


AXIOM_TITLES: Dict[AxiomId, str] = {
    AxiomId.A1: "Isomorphism",
    AxiomId.A2: "Baseline",
    AxiomId.A3: "Frequency",
    AxiomId.A4: "Intimacy",
    AxiomId.A5: "Larger events create more ties",
    AxiomId.A6: "Conditional independence of vertices",
    AxiomId.A7: "Conditional independence of events",
    AxiomId.A8: "Submodularity",
}


class BaselineMode(str, Enum):
    """A2 の判定モード。

    strict は空グラフで0・2人だけのイベントで1を要求し、
    positive は空グラフで0・2人だけのイベントで正の値を要求します。
    """

    STRICT = "strict"
    POSITIVE = "positive"


class VerdictStatus(str, Enum):
    PASS = "pass"
    VIOLATED = "violated"
    INAPPLICABLE = "inapplicable"


def _row(*marks: int) -> Dict[AxiomId, bool]:
    return {axiom: bool(mark) for axiom, mark in zip(AxiomId, marks)}


# 公表されている公理充足表（1 = 満たす, 0 = 満たさない）
PUBLISHED_TABLE: Dict[MeasureKind, Dict[AxiomId, bool]] = {
    MeasureKind.COMMON: _row(1, 1, 1, 1, 1, 1, 1, 1),
    MeasureKind.JACCARD: _row(1, 1, 1, 1, 1, 0, 0, 0),
    MeasureKind.DELTA: _row(1, 1, 1, 1, 1, 1, 1, 1),
    MeasureKind.ADAMIC_ADAR: _row(1, 1, 1, 1, 1, 1, 1, 1),
    MeasureKind.KATZ: _row(1, 0, 1, 1, 1, 1, 0, 0),
    MeasureKind.PREFERENTIAL: _row(1, 1, 0, 1, 1, 1, 0, 0),
    MeasureKind.RWR: _row(1, 0, 0, 0, 1, 1, 0, 0),
    MeasureKind.SIMRANK: _row(1, 0, 0, 0, 0, 0, 0, 0),
    MeasureKind.MAX: _row(1, 1, 1, 1, 1, 1, 1, 1),
    MeasureKind.LINEAR: _row(1, 1, 1, 1, 1, 1, 1, 1),
    MeasureKind.PROPORTIONAL: _row(1, 0, 0, 1, 0, 1, 0, 0),
}


def equality_tolerance(spec: MeasureSpec) -> float:
    """等値・不等式判定の絶対許容差。"""
    if spec.kind in ITERATIVE_KINDS:
        return max(1e-12, 100 * spec.tolerance)
    return 1e-12


def _slack(a: float, b: float, tol: float) -> float:
    return tol + 1e-12 * max(abs(a), abs(b))


def _close(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= _slack(a, b, tol)


def _at_least(a: float, b: float, tol: float) -> bool:
    """a >= b（許容差込み）。"""
    return a >= b - _slack(a, b, tol)


# --- 検査インスタンス ---


@dataclass
class Perturbation:
    """グラフに加える摂動。

    Attributes:
        kind: 摂動の種類
        params: 再現に必要なパラメータ（YAML にそのまま書ける値のみ）
    """

    kind: str
    params: Dict[str, Any] = field(default_factory=dict)

    @property
    def event(self) -> EventRecord:
        return EventRecord.from_dict(self.params["event"])

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, **self.params}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Perturbation":
        params = {k: v for k, v in data.items() if k != "kind"}
        return cls(kind=data["kind"], params=params)


@dataclass
class Instance:
    """1回の検査の入力（元のグラフ、注目するペア、摂動）。"""

    records: List[EventRecord]
    people: List[str]
    pair: Tuple[str, str]
    perturbation: Perturbation

    def graph(self) -> BipartiteGraph:
        return build_graph(self.records, people=self.people)

    def protected_people(self) -> List[str]:
        protected = list(self.pair)
        if self.perturbation.kind == "remove_attendee":
            protected.append(self.perturbation.params["person"])
        return protected

    def protected_events(self) -> List[str]:
        params = self.perturbation.params
        if self.perturbation.kind in ("remove_attendee", "remove_unrelated_event"):
            return [params["event_id"]]
        return []

    def without_event(self, event_id: str) -> Optional["Instance"]:
        """イベントを1件除いたインスタンス。除けない場合は None。"""
        if event_id in self.protected_events():
            return None
        records = [r for r in self.records if r.event_id != event_id]
        params = dict(self.perturbation.params)
        if self.perturbation.kind == "relabel":
            params["event_map"] = {
                k: v for k, v in params["event_map"].items() if k != event_id
            }
            params["event_order"] = [e for e in params["event_order"] if e != event_id]
        return Instance(
            records,
            list(self.people),
            self.pair,
            Perturbation(self.perturbation.kind, params),
        )

    def without_person(self, label: str) -> Optional["Instance"]:
        """人物を1人除いたインスタンス。除けない場合は None。"""
        if label in self.protected_people():
            return None
        records = [
            EventRecord(
                r.event_id, tuple(p for p in r.participants if p != label), r.time
            )
            for r in self.records
        ]
        params = dict(self.perturbation.params)
        if "event" in params:
            event = self.perturbation.event
            params["event"] = EventRecord(
                event.event_id,
                tuple(p for p in event.participants if p != label),
                event.time,
            ).to_dict()
        if self.perturbation.kind == "relabel":
            params["person_map"] = {
                k: v for k, v in params["person_map"].items() if k != label
            }
        return Instance(
            records,
            [p for p in self.people if p != label],
            self.pair,
            Perturbation(self.perturbation.kind, params),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "events": [r.to_dict() for r in self.records],
            "people": list(self.people),
            "pair": list(self.pair),
            "perturbation": self.perturbation.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Instance":
        return cls(
            records=[EventRecord.from_dict(r) for r in data["events"]],
            people=[str(p) for p in data["people"]],
            pair=(str(data["pair"][0]), str(data["pair"][1])),
            perturbation=Perturbation.from_dict(data["perturbation"]),
        )


@dataclass
class Counterexample:
    """公理違反の再現可能な証拠。

    A7 は2つの観測の食い違いとして表れるため、インスタンスを2つ持ちます。
    """

    axiom: AxiomId
    spec: MeasureSpec
    instances: List[Instance]
    observed: Dict[str, Any] = field(default_factory=dict)
    mode: BaselineMode = BaselineMode.POSITIVE

    def to_dict(self) -> Dict[str, Any]:
        return {
            "axiom": self.axiom.value,
            "measure": self.spec.to_dict(),
            "mode": self.mode.value,
            "instances": [inst.to_dict() for inst in self.instances],
            "observed": dict(self.observed),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Counterexample":
        return cls(
            axiom=AxiomId(data["axiom"]),
            spec=MeasureSpec(**data["measure"]),
            instances=[Instance.from_dict(i) for i in data["instances"]],
            observed=dict(data.get("observed", {})),
            mode=BaselineMode(data.get("mode", BaselineMode.POSITIVE.value)),
        )


@dataclass
class Verdict:
    """1つの公理の判定結果。

    Attributes:
        axiom: 公理
        status: 判定
        trials: 評価できた試行回数
        skipped: 尺度の評価に失敗した、または前提を満たすグラフを作れなかった試行回数
        counterexample: 違反時の反例
        reason: 適用できない場合の理由
    """

    axiom: AxiomId
    status: VerdictStatus
    trials: int = 0
    skipped: int = 0
    counterexample: Optional[Counterexample] = None
    reason: str = ""

    @property
    def symbol(self) -> str:
        return {
            VerdictStatus.PASS: "✓",
            VerdictStatus.VIOLATED: "x",
            VerdictStatus.INAPPLICABLE: "-",
        }[self.status]

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "axiom": self.axiom.value,
            "title": self.axiom.title,
            "status": self.status.value,
            "trials": self.trials,
            "skipped": self.skipped,
        }
        if self.reason:
            data["reason"] = self.reason
        if self.counterexample is not None:
            data["counterexample"] = self.counterexample.to_dict()
        return data


# --- グラフ生成 ---


@dataclass(frozen=True)
class GraphSampler:
    """小さなランダム二部グラフの生成器。

    試行ごとの乱数列は (seed, 公理, 試行番号) から決まるため、
    同じ設定なら同じ系列が得られ、試行を並列に実行しても結果は変わりません。
    corpus を与えると、ランダムなグラフの代わりに corpus から選んだ
    イベントの部分集合を基本グラフにします。

    Attributes:
        seed: 乱数シード
        max_people: 人数の上限
        max_events: イベント数の上限
        max_event_size: 1イベントの参加人数の上限
        corpus: 基本グラフを切り出すイベントログ（空ならランダム生成）
    """

    seed: int = 0
    max_people: int = 8
    max_events: int = 6
    max_event_size: int = 5
    corpus: Tuple[EventRecord, ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.max_people < 2:
            raise ConfigError(f"max_people は2以上である必要があります: {self.max_people}")
        if self.max_events < 1:
            raise ConfigError(f"max_events は1以上である必要があります: {self.max_events}")
        if self.max_event_size < 2:
            raise ConfigError(
                f"max_event_size は2以上である必要があります: {self.max_event_size}"
            )
        object.__setattr__(self, "corpus", tuple(self.corpus))

    @cached_property
    def _corpus_graph(self) -> BipartiteGraph:
        return build_graph(self.corpus)

    def rng(self, stream: int, trial: int) -> np.random.Generator:
        return np.random.default_rng(np.random.SeedSequence([self.seed, stream, trial]))

    def draw_records(
        self, rng: np.random.Generator, min_people: int = 2
    ) -> Optional[Tuple[List[EventRecord], List[str]]]:
        """イベントレコードと人物ラベルを生成します。

        イベントの時刻はイベント番号で、すべて異なります。
        """
        if self.corpus:
            return self._draw_from_corpus(rng, min_people)
        if self.max_people < min_people:
            return None
        n = int(rng.integers(min_people, self.max_people + 1))
        people = [f"p{k}" for k in range(n)]
        m = int(rng.integers(1, self.max_events + 1))
        records = []
        for j in range(m):
            size = int(rng.integers(1, min(self.max_event_size, n) + 1))
            members = sorted(int(k) for k in rng.choice(n, size=size, replace=False))
            records.append(EventRecord(f"e{j}", tuple(people[k] for k in members), j))
        return records, people

    def _draw_from_corpus(
        self, rng: np.random.Generator, min_people: int
    ) -> Optional[Tuple[List[EventRecord], List[str]]]:
        # 人物ラベルと時刻は corpus のまま、イベントIDだけ振り直す
        graph = self._corpus_graph
        m = int(rng.integers(1, min(self.max_events, graph.num_events) + 1))
        chosen = [int(j) for j in rng.choice(graph.num_events, size=m, replace=False)]
        sub = graph.restrict_to_events(chosen)
        if sub.num_people < min_people:
            return None
        records = [
            EventRecord(f"e{k}", r.participants, r.time)
            for k, r in enumerate(sub.to_records())
        ]
        return records, list(sub.people)

    def graphs(self, count: int, stream: int = 0) -> Iterator[BipartiteGraph]:
        """count 個のランダムグラフ。"""
        for k in range(count):
            drawn = self.draw_records(self.rng(stream, k))
            if drawn is not None:
                records, people = drawn
                yield build_graph(records, people=people)

    def to_dict(self) -> Dict[str, int]:
        data = {
            "seed": self.seed,
            "max_people": self.max_people,
            "max_events": self.max_events,
            "max_event_size": self.max_event_size,
        }
        if self.corpus:
            data["corpus_events"] = len(self.corpus)
        return data


def _next_time(records: Sequence[EventRecord]) -> int:
    times = [r.time for r in records if r.time is not None]
    return max(times) + 1 if times else 0


def _pick(rng: np.random.Generator, items: Sequence[str], count: int) -> List[str]:
    return [items[int(k)] for k in rng.choice(len(items), size=count, replace=False)]


def _event_with(
    rng: np.random.Generator,
    sampler: GraphSampler,
    people: Sequence[str],
    required: Sequence[str],
    event_id: str,
    time: int,
) -> EventRecord:
    """required 全員と、その他からランダムに選んだ人が参加するイベント。"""
    others = [p for p in people if p not in required]
    room = min(sampler.max_event_size - len(required), len(others))
    extra = int(rng.integers(0, room + 1)) if room > 0 else 0
    participants = list(required) + _pick(rng, others, extra)
    return EventRecord(event_id, tuple(participants), time)


def _draw_instance(
    axiom: AxiomId, sampler: GraphSampler, rng: np.random.Generator
) -> Optional[Instance]:
    if axiom is AxiomId.A5:
        sizes = sorted(
            (int(rng.integers(2, sampler.max_event_size + 1)) for _ in range(2)),
            reverse=True,
        )
        params = {"larger": sizes[0], "smaller": sizes[1]}
        return Instance([], [], ("p0", "p1"), Perturbation("compare_events", params))

    min_people = 3 if axiom is AxiomId.A4 else 2
    drawn = sampler.draw_records(rng, min_people=min_people)
    if drawn is None:
        return None
    records, people = drawn
    u, v = _pick(rng, people, 2)
    time = _next_time(records)

    if axiom is AxiomId.A1:
        person_perm = rng.permutation(len(people))
        event_perm = rng.permutation(len(records))
        order = rng.permutation(len(records))
        params = {
            "person_map": {p: f"r{int(k)}" for p, k in zip(people, person_perm)},
            "event_map": {
                r.event_id: f"s{int(k)}" for r, k in zip(records, event_perm)
            },
            "event_order": [records[int(k)].event_id for k in order],
        }
        return Instance(records, people, (u, v), Perturbation("relabel", params))

    if axiom in (AxiomId.A3, AxiomId.A7, AxiomId.A8):
        event = _event_with(rng, sampler, people, [u, v], ADDED_EVENT_ID, time)
        params = {"event": event.to_dict()}
        return Instance(records, people, (u, v), Perturbation("add_event", params))

    if axiom is AxiomId.A4:
        if sampler.max_event_size < 3:
            return None
        candidates = [
            r
            for r in records
            if u in r.participants and v in r.participants and len(r.participants) >= 3
        ]
        if not candidates:
            w = _pick(rng, [p for p in people if p not in (u, v)], 1)[0]
            forced = _event_with(rng, sampler, people, [u, v, w], FORCED_EVENT_ID, time)
            records = [*records, forced]
            candidates = [forced]
        target = candidates[int(rng.integers(0, len(candidates)))]
        w = _pick(rng, [p for p in target.participants if p not in (u, v)], 1)[0]
        params = {"event_id": target.event_id, "person": w}
        perturbation = Perturbation("remove_attendee", params)
        return Instance(records, people, (u, v), perturbation)

    # A6: u が参加しないイベントを追加または削除する
    unrelated = [r for r in records if u not in r.participants]
    if unrelated and rng.random() < 0.5:
        target = unrelated[int(rng.integers(0, len(unrelated)))]
        params = {"event_id": target.event_id}
        perturbation = Perturbation("remove_unrelated_event", params)
    else:
        others = [p for p in people if p != u]
        size = int(rng.integers(1, min(sampler.max_event_size, len(others)) + 1))
        event = EventRecord(ADDED_EVENT_ID, tuple(_pick(rng, others, size)), time)
        perturbation = Perturbation("add_unrelated_event", {"event": event.to_dict()})
    return Instance(records, people, (u, v), perturbation)


# --- 公理ごとの評価 ---


def _single_event_total(size: int, spec: MeasureSpec) -> float:
    """size 人の単一イベントだけからなるグラフの全ペアのスコアの和。"""
    people = [f"p{k}" for k in range(size)]
    g = build_graph([EventRecord("P", tuple(people), 0)])
    return math.fsum(score_all(g, spec).scores.values())


def _evaluate_single(
    axiom: AxiomId, inst: Instance, spec: MeasureSpec, mode: BaselineMode, tol: float
) -> Tuple[bool, Dict[str, Any]]:
    u, v = inst.pair
    p = inst.perturbation

    if axiom is AxiomId.A1:
        g = inst.graph()
        order = [g.event_id(e) for e in p.params["event_order"]]
        h = g.relabel(p.params["person_map"], p.params["event_map"], order)
        before = score_pair(g, u, v, spec)
        mapping = p.params["person_map"]
        after = score_pair(h, mapping[u], mapping[v], spec)
        return not _close(before, after, tol), {"original": before, "relabeled": after}

    if axiom is AxiomId.A2:
        empty = score_pair(build_graph([], people=[u, v]), u, v, spec)
        single = score_pair(build_graph([EventRecord("P", (u, v), 0)]), u, v, spec)
        if mode is BaselineMode.STRICT:
            violated = not (_close(empty, 0.0, tol) and _close(single, 1.0, tol))
        else:
            violated = not (_close(empty, 0.0, tol) and single > 0.0)
        return violated, {"empty": empty, "single_event": single}

    if axiom is AxiomId.A3:
        g = inst.graph()
        before = score_pair(g, u, v, spec)
        after = score_pair(g.with_event(p.event), u, v, spec)
        return not _at_least(after, before, tol), {"before": before, "after": after}

    if axiom is AxiomId.A4:
        g = inst.graph()
        before = score_pair(g, u, v, spec)
        after = score_pair(
            g.without_attendee(p.params["event_id"], p.params["person"]), u, v, spec
        )
        return not _at_least(after, before, tol), {"before": before, "after": after}

    if axiom is AxiomId.A5:
        larger = _single_event_total(p.params["larger"], spec)
        smaller = _single_event_total(p.params["smaller"], spec)
        return not _at_least(larger, smaller, tol), {
            "larger_total": larger,
            "smaller_total": smaller,
        }

    if axiom is AxiomId.A6:
        g = inst.graph()
        if p.kind == "remove_unrelated_event":
            h = g.without_event(p.params["event_id"])
        else:
            h = g.with_event(p.event)
        before = score_row(g, u, spec)
        after = score_row(h, u, spec)
        for j in sorted(before):
            label = g.person_label(j)
            changed = after[h.person_id(label)]
            if not _close(before[j], changed, tol):
                return True, {"person": label, "before": before[j], "after": changed}
        return False, {}

    if axiom is AxiomId.A8:
        g = inst.graph()
        event = p.event
        before = score_pair(g, u, v, spec)
        alone = score_pair(build_graph([event], people=inst.people), u, v, spec)
        after = score_pair(g.with_event(event), u, v, spec)
        violated = not _at_least(before + alone, after, tol)
        return violated, {"before": before, "event_alone": alone, "after": after}

    raise ValueError(f"単独では評価できない公理です: {axiom.value}")


@dataclass(frozen=True)
class _Observation:
    existing: float
    key: Tuple[float, int]
    result: float


def _observe(inst: Instance, spec: MeasureSpec) -> _Observation:
    """A7 用に (既存の強さ, |P|) と追加後の強さを観測します。"""
    u, v = inst.pair
    g = inst.graph()
    event = inst.perturbation.event
    existing = score_pair(g, u, v, spec)
    result = score_pair(g.with_event(event), u, v, spec)
    key = (round(existing, A7_KEY_DIGITS), len(event.participants))
    return _Observation(existing, key, result)


def _conflict(a: _Observation, b: _Observation, tol: float) -> bool:
    """2つの観測が「既存の強さと |P| だけで決まる単調関数」と矛盾するか。"""
    if a.key[1] != b.key[1]:
        return False
    out_tol = max(A7_OUTPUT_TOLERANCE, tol)
    if a.key[0] == b.key[0]:
        return not _close(a.result, b.result, out_tol)
    low, high = (a, b) if a.key[0] < b.key[0] else (b, a)
    return not _at_least(high.result, low.result, out_tol)


def _evaluate(
    axiom: AxiomId,
    instances: Sequence[Instance],
    spec: MeasureSpec,
    mode: BaselineMode,
    tol: float,
) -> Tuple[bool, Dict[str, Any]]:
    if axiom is AxiomId.A7:
        first, second = (_observe(inst, spec) for inst in instances)
        observed = {
            "first_existing": first.existing,
            "first_result": first.result,
            "second_existing": second.existing,
            "second_result": second.result,
            "event_size": first.key[1],
        }
        return _conflict(first, second, tol), observed
    return _evaluate_single(axiom, instances[0], spec, mode, tol)


def _violated(
    axiom: AxiomId, instances: Sequence[Instance], spec: MeasureSpec, mode: BaselineMode
) -> bool:
    try:
        violated, _ = _evaluate(axiom, instances, spec, mode, equality_tolerance(spec))
    except TieStrengthError:
        return False
    return violated


# --- 探索 ---


@dataclass
class _SearchResult:
    counterexample: Optional[Counterexample]
    trials: int
    skipped: int
    last_error: str = ""


def _search(
    axiom: AxiomId,
    spec: MeasureSpec,
    sampler: GraphSampler,
    trials: int,
    mode: BaselineMode,
) -> _SearchResult:
    tol = equality_tolerance(spec)
    stream = list(AxiomId).index(axiom) + 1
    result = _SearchResult(None, 0, 0)
    seen: Dict[int, List[Tuple[_Observation, Instance]]] = {}

    for trial in range(trials):
        inst = _draw_instance(axiom, sampler, sampler.rng(stream, trial))
        if inst is None:
            result.skipped += 1
            result.last_error = "サンプル範囲では前提を満たすグラフを作れません"
            continue
        try:
            if axiom is AxiomId.A7:
                obs = _observe(inst, spec)
                bucket = seen.setdefault(obs.key[1], [])
                for other_obs, other in bucket:
                    if _conflict(other_obs, obs, tol):
                        instances = [other, inst]
                        _, observed = _evaluate(axiom, instances, spec, mode, tol)
                        result.trials += 1
                        result.counterexample = Counterexample(
                            axiom, spec, instances, observed, mode
                        )
                        return result
                bucket.append((obs, inst))
                violated = False
            else:
                violated, observed = _evaluate(axiom, [inst], spec, mode, tol)
        except TieStrengthError as e:
            # 尺度の評価に失敗した試行は違反として扱わない
            logger.debug(f"{axiom.value} 試行 {trial}: 尺度を評価できません: {e}")
            result.skipped += 1
            result.last_error = str(e)
            continue

        result.trials += 1
        if violated:
            result.counterexample = Counterexample(axiom, spec, [inst], observed, mode)
            return result
    return result


def shrink_counterexample(counterexample: Counterexample) -> Counterexample:
    """違反が残る範囲でイベント、次に人物を取り除いて反例を小さくします。"""
    axiom, spec, mode = counterexample.axiom, counterexample.spec, counterexample.mode
    current = list(counterexample.instances)

    # イベントも人物も除けなくなるまで繰り返す
    changed = True
    while changed:
        changed = False
        for phase in ("events", "people"):
            for k, inst in enumerate(current):
                if phase == "events":
                    candidates = [inst.without_event(r.event_id) for r in inst.records]
                else:
                    candidates = [inst.without_person(p) for p in inst.people]
                for candidate in candidates:
                    if candidate is None:
                        continue
                    trial = current[:k] + [candidate] + current[k + 1 :]
                    if _violated(axiom, trial, spec, mode):
                        current = trial
                        changed = True
                        break
                if changed:
                    break
            if changed:
                break

    _, observed = _evaluate(axiom, current, spec, mode, equality_tolerance(spec))
    return Counterexample(axiom, spec, current, observed, mode)


def check_axiom(
    axiom: AxiomId,
    spec: MeasureSpec,
    sampler: GraphSampler,
    trials: int,
    mode: BaselineMode = BaselineMode.POSITIVE,
    shrink: bool = False,
) -> Verdict:
    """1つの公理をランダムな摂動で検査します。

    A2 は決定的な2つのグラフで1回だけ評価します。

    Args:
        axiom: 公理
        spec: 尺度
        sampler: グラフ生成器
        trials: 試行回数（1以上）
        mode: A2 の判定モード
        shrink: 反例を縮小するかどうか

    Returns:
        最初に見つかった違反、または Pass
    """
    if trials < 1:
        raise ConfigError(f"trials は1以上である必要があります: {trials}")

    if axiom is AxiomId.A2:
        inst = Instance([], ["u", "v"], ("u", "v"), Perturbation("baseline"))
        try:
            tol = equality_tolerance(spec)
            violated, observed = _evaluate(axiom, [inst], spec, mode, tol)
        except TieStrengthError as e:
            return Verdict(axiom, VerdictStatus.INAPPLICABLE, 0, 1, reason=str(e))
        if violated:
            cx = Counterexample(axiom, spec, [inst], observed, mode)
            return Verdict(axiom, VerdictStatus.VIOLATED, 1, 0, cx)
        return Verdict(axiom, VerdictStatus.PASS, 1, 0)

    result = _search(axiom, spec, sampler, trials, mode)
    if result.counterexample is not None:
        cx = result.counterexample
        if shrink:
            cx = shrink_counterexample(cx)
        return Verdict(axiom, VerdictStatus.VIOLATED, result.trials, result.skipped, cx)
    if result.trials == 0:
        return Verdict(
            axiom,
            VerdictStatus.INAPPLICABLE,
            0,
            result.skipped,
            reason=result.last_error,
        )
    return Verdict(axiom, VerdictStatus.PASS, result.trials, result.skipped)


def find_counterexample(
    axiom: AxiomId,
    spec: MeasureSpec,
    sampler: GraphSampler,
    budget: int,
    mode: BaselineMode = BaselineMode.POSITIVE,
) -> Optional[Counterexample]:
    """最大 budget 個のインスタンスから反例を探し、見つかれば縮小して返します。"""
    if budget < 1:
        raise ConfigError(f"budget は1以上である必要があります: {budget}")
    verdict = check_axiom(axiom, spec, sampler, budget, mode, shrink=True)
    return verdict.counterexample


def replay_counterexample(
    counterexample: Counterexample,
) -> Tuple[bool, Dict[str, Any]]:
    """保存された反例を同じ MeasureSpec で再評価します。

    Returns:
        (違反が再現したか, 観測値)
    """
    spec = counterexample.spec
    return _evaluate(
        counterexample.axiom,
        counterexample.instances,
        spec,
        counterexample.mode,
        equality_tolerance(spec),
    )


# --- 補題の検査 ---


@dataclass
class LemmaCheck:
    """公理から導かれる性質の検査結果。"""

    name: str
    applicable: bool
    passed: bool = True
    checked: int = 0
    failures: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "applicable": self.applicable,
            "passed": self.passed,
            "checked": self.checked,
            "failures": list(self.failures),
        }


def check_zero_without_common_events(
    spec: MeasureSpec, sampler: GraphSampler, trials: int, max_failures: int = 5
) -> LemmaCheck:
    """共通イベントのないペアの強さが0で、すべての強さが非負であることを確認します。

    A3 と A6 を満たすとされる尺度にだけ適用します。
    """
    name = "zero_without_common_events"
    expected = PUBLISHED_TABLE.get(spec.kind)
    if expected is None or not (expected[AxiomId.A3] and expected[AxiomId.A6]):
        return LemmaCheck(name, applicable=False)

    tol = equality_tolerance(spec)
    check = LemmaCheck(name, applicable=True)
    for g in sampler.graphs(trials, stream=100):
        try:
            rows = {i: score_row(g, i, spec) for i in range(g.num_people)}
        except TieStrengthError as e:
            logger.debug(f"補題の検査で尺度を評価できません: {e}")
            continue
        check.checked += 1
        for i, row in rows.items():
            for j, value in row.items():
                shares = bool(g.event_set_of(i) & g.event_set_of(j))
                if value < -tol or (not shares and not _close(value, 0.0, tol)):
                    check.passed = False
                    if len(check.failures) < max_failures:
                        check.failures.append(
                            f"{g.person_label(i)}-{g.person_label(j)}: {value!r} "
                            f"(events={[r.to_dict() for r in g.to_records()]})"
                        )
    return check


def check_single_event_totals(
    kind: Union[MeasureKind, str], max_size: int
) -> LemmaCheck:
    """単一イベントの強さの合計 f(k) = C(k,2)·h(k) の単調性と 1 <= f(k) <= C(k,2) を確認します。"""
    name = "single_event_totals"
    form = characterized_form(kind)
    if form is None:
        return LemmaCheck(name, applicable=False)

    check = LemmaCheck(name, applicable=True)
    totals = [form.total_single_event(k) for k in range(2, max_size + 1)]
    check.checked = len(totals)
    for k, (low, high) in enumerate(zip(totals, totals[1:]), 2):
        if high < low:
            check.passed = False
            check.failures.append(f"f({k + 1}) < f({k}): {high!r} < {low!r}")
    for k in form.bound_violations(max_size):
        check.passed = False
        check.failures.append(
            f"f({k}) = {form.total_single_event(k)!r} が [1, {math.comb(k, 2)}] の範囲外です"
        )
    return check


# --- レポート ---


@dataclass(frozen=True)
class Discrepancy:
    """公表されている判定と観測した判定の食い違い。"""

    axiom: AxiomId
    expected: bool
    observed: VerdictStatus

    def describe(self) -> str:
        if self.expected:
            return f"{self.axiom.value}: 満たすとされていますが違反が見つかりました"
        return f"{self.axiom.value}: 満たさないとされていますが反例が見つかりませんでした"


@dataclass
class AxiomReport:
    """1つの尺度に対する全公理の検査結果。"""

    spec: MeasureSpec
    sampler: GraphSampler
    trials: int
    baseline_mode: BaselineMode
    verdicts: Dict[AxiomId, Verdict]
    baseline_modes: Dict[BaselineMode, Verdict] = field(default_factory=dict)
    lemmas: List[LemmaCheck] = field(default_factory=list)

    def symbols(self) -> List[str]:
        return [self.verdicts[a].symbol for a in AxiomId]

    def discrepancies(self) -> List[Discrepancy]:
        """公表表と食い違うセル。適用できなかった公理は含みません。"""
        expected = PUBLISHED_TABLE.get(self.spec.kind)
        if expected is None:
            return []
        result = []
        for axiom in AxiomId:
            verdict = self.verdicts[axiom]
            if verdict.status is VerdictStatus.INAPPLICABLE:
                continue
            passed = verdict.status is VerdictStatus.PASS
            if passed != expected[axiom]:
                result.append(Discrepancy(axiom, expected[axiom], verdict.status))
        return result

    def to_dict(self) -> Dict[str, Any]:
        expected = PUBLISHED_TABLE.get(self.spec.kind)
        return {
            "measure": self.spec.to_dict(),
            "sampler": self.sampler.to_dict(),
            "trials": self.trials,
            "baseline_mode": self.baseline_mode.value,
            "verdicts": [self.verdicts[a].to_dict() for a in AxiomId],
            "baseline_modes": {
                mode.value: verdict.status.value
                for mode, verdict in self.baseline_modes.items()
            },
            "published": (
                {a.value: expected[a] for a in AxiomId}
                if expected is not None
                else None
            ),
            "discrepancies": [d.describe() for d in self.discrepancies()],
            "lemmas": [lemma.to_dict() for lemma in self.lemmas],
        }


def check_all_axioms(
    spec: MeasureSpec,
    sampler: GraphSampler,
    trials: int,
    mode: BaselineMode = BaselineMode.POSITIVE,
    threads: int = 1,
    shrink: bool = True,
) -> AxiomReport:
    """全公理を検査してレポートを作成します。

    公理ごとの検査は独立しているため並列に実行できます。
    結果は threads に依存しません。
    """
    logger.info(f"{spec.kind.display_name} の公理を検査します（試行 {trials} 回）")

    def run(axiom: AxiomId) -> Verdict:
        return check_axiom(axiom, spec, sampler, trials, mode, shrink=shrink)

    axioms = list(AxiomId)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            verdicts = list(executor.map(run, axioms))
    else:
        verdicts = [run(a) for a in axioms]

    baseline_modes = {
        m: check_axiom(AxiomId.A2, spec, sampler, 1, m) for m in BaselineMode
    }
    lemmas = [
        check_zero_without_common_events(spec, sampler, trials),
        check_single_event_totals(spec.kind, sampler.max_event_size),
    ]
    report = AxiomReport(
        spec=spec,
        sampler=sampler,
        trials=trials,
        baseline_mode=mode,
        verdicts=dict(zip(axioms, verdicts)),
        baseline_modes=baseline_modes,
        lemmas=lemmas,
    )
    for discrepancy in report.discrepancies():
        logger.info(f"{spec.kind.display_name}: {discrepancy.describe()}")
    return report


def write_report(report: AxiomReport, path: Union[str, Path]) -> None:
    """レポートを YAML で書き出します。"""
    with open(path, "w", encoding="utf-8") as f:
        yaml.safe_dump(report.to_dict(), f, sort_keys=False, allow_unicode=True)
    logger.debug(f"公理レポートを書き出しました: {path}")


def write_counterexample(
    counterexample: Counterexample, path: Union[str, Path]
) -> None:
    """反例を YAML で書き出します。"""
    with open(path, "w", encoding="utf-8") as f:
        yaml.safe_dump(counterexample.to_dict(), f, sort_keys=False, allow_unicode=True)
    logger.debug(f"反例を書き出しました: {path}")


def load_counterexample(path: Union[str, Path]) -> Counterexample:
    """``write_counterexample`` で書き出した反例を読み込みます。

    Raises:
        InputError: 読み込めない、または形式が不正な場合
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f)
        return Counterexample.from_dict(data)
    except (OSError, yaml.YAMLError) as e:
        raise InputError(f"反例ファイルを読み込めません: {path}: {e}") from e
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"反例ファイルの形式が不正です: {path}: {e}") from e
