"""人物×イベントの二部グラフを扱うモジュール。

イベントログから不変の二部グラフを構築し、ペアごとの共通イベントと
タイプロファイル（共通イベントの人数を昇順に並べた列）を導出します。
"""

import logging
from collections import Counter, defaultdict
from dataclasses import dataclass
from itertools import combinations
from typing import (
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import numpy as np
import scipy.sparse as sp

from tiestrength.core.errors import (
    DuplicateEventError,
    InputError,
    UnknownPersonError,
    UnsortedProfileError,
)
from tiestrength.core.records import EventRecord

logger = logging.getLogger(__name__)

# 人物はインデックスでもラベルでも指定できる
PersonRef = Union[int, str]
Tie = Tuple[int, int]


@dataclass(frozen=True, order=False)
class TieProfile:
    """ペアに共通するイベントの人数を昇順に並べた列。

    Attributes:
        sizes: 各共通イベントの参加人数（昇順、すべて2以上）
    """

    sizes: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        sizes = tuple(int(s) for s in self.sizes)
        object.__setattr__(self, "sizes", sizes)
        if any(a > b for a, b in zip(sizes, sizes[1:])):
            raise UnsortedProfileError(sizes)
        if any(s < 2 for s in sizes):
            raise InputError(f"プロファイルの要素は2以上である必要があります: {sizes}")

    @classmethod
    def from_sizes(cls, sizes: Iterable[int]) -> "TieProfile":
        """任意の順序の人数列からプロファイルを作成します。"""
        return cls(tuple(sorted(sizes)))

    @property
    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        """列挙順（長さ昇順、次に辞書順）のキー。"""
        return len(self.sizes), self.sizes

    def __len__(self) -> int:
        return len(self.sizes)

    def __iter__(self) -> Iterator[int]:
        return iter(self.sizes)

    def __getitem__(self, index: int) -> int:
        return self.sizes[index]

    def __str__(self) -> str:
        return "(" + ",".join(str(s) for s in self.sizes) + ")"


class BipartiteGraph:
    """構築後に変更できない人物×イベントの二部グラフ。

    人物とイベントは0始まりの連続したインデックスで管理し、
    元のラベルはシンボルテーブルに保持します。
    """

    def __init__(
        self,
        people: Sequence[str],
        events: Sequence[str],
        times: Sequence[Optional[int]],
        event_members: Sequence[Sequence[int]],
        duplicate_participants: int = 0,
    ) -> None:
        self._people: Tuple[str, ...] = tuple(people)
        self._events: Tuple[str, ...] = tuple(events)
        self._times: Tuple[Optional[int], ...] = tuple(times)
        self._event_members: Tuple[Tuple[int, ...], ...] = tuple(
            tuple(m) for m in event_members
        )
        self.duplicate_participants = duplicate_participants

        self._person_index: Dict[str, int] = {p: i for i, p in enumerate(self._people)}
        self._event_index: Dict[str, int] = {e: j for j, e in enumerate(self._events)}

        person_events: List[List[int]] = [[] for _ in self._people]
        for j, members in enumerate(self._event_members):
            for i in members:
                person_events[i].append(j)
        self._person_events: Tuple[Tuple[int, ...], ...] = tuple(
            tuple(evs) for evs in person_events
        )
        self._person_event_sets: Tuple[FrozenSet[int], ...] = tuple(
            frozenset(evs) for evs in self._person_events
        )

    # --- シンボルテーブル ---

    @property
    def people(self) -> Tuple[str, ...]:
        return self._people

    @property
    def events(self) -> Tuple[str, ...]:
        return self._events

    @property
    def num_people(self) -> int:
        return len(self._people)

    @property
    def num_events(self) -> int:
        return len(self._events)

    def person_id(self, person: PersonRef) -> int:
        """人物の参照をインデックスに解決します。

        Raises:
            UnknownPersonError: 存在しない人物の場合
        """
        if isinstance(person, (int, np.integer)) and not isinstance(person, bool):
            if 0 <= int(person) < len(self._people):
                return int(person)
            raise UnknownPersonError(person)
        if person in self._person_index:
            return self._person_index[person]
        raise UnknownPersonError(person)

    def event_id(self, event: Union[int, str]) -> int:
        """イベントの参照をインデックスに解決します。"""
        if isinstance(event, int) and 0 <= event < len(self._events):
            return event
        if isinstance(event, str) and event in self._event_index:
            return self._event_index[event]
        raise InputError(f"グラフに存在しないイベントです: {event}")

    def person_label(self, index: int) -> str:
        return self._people[index]

    def event_label(self, index: int) -> str:
        return self._events[index]

    def event_time(self, index: int) -> Optional[int]:
        return self._times[index]

    # --- 隣接関係 ---

    def events_of(self, person: PersonRef) -> Tuple[int, ...]:
        """人物が参加したイベントのインデックス（昇順）。"""
        return self._person_events[self.person_id(person)]

    def event_set_of(self, person: PersonRef) -> FrozenSet[int]:
        return self._person_event_sets[self.person_id(person)]

    def members(self, event: Union[int, str]) -> Tuple[int, ...]:
        """イベントの参加者インデックス（入力順）。"""
        return self._event_members[self.event_id(event)]

    def event_size(self, event: Union[int, str]) -> int:
        return len(self.members(event))

    @property
    def event_members(self) -> Tuple[Tuple[int, ...], ...]:
        return self._event_members

    # --- 変換（新しいグラフを返す） ---

    def to_records(self) -> List[EventRecord]:
        """イベントレコードのリストに戻します。"""
        return [
            EventRecord(
                event_id=label,
                participants=tuple(self._people[i] for i in members),
                time=self._times[j],
            )
            for j, (label, members) in enumerate(
                zip(self._events, self._event_members)
            )
        ]

    def with_event(self, record: EventRecord) -> "BipartiteGraph":
        """イベントを1件追加したグラフ。"""
        return build_graph([*self.to_records(), record], people=self._people)

    def without_event(self, event: Union[int, str]) -> "BipartiteGraph":
        """イベントを1件削除したグラフ（人物はシンボルテーブルに残る）。"""
        j = self.event_id(event)
        records = [r for k, r in enumerate(self.to_records()) if k != j]
        return build_graph(records, people=self._people)

    def without_attendee(
        self, event: Union[int, str], person: PersonRef
    ) -> "BipartiteGraph":
        """イベントから参加者を1人除いたグラフ。"""
        j = self.event_id(event)
        label = self._people[self.person_id(person)]
        records = self.to_records()
        target = records[j]
        records[j] = EventRecord(
            event_id=target.event_id,
            participants=tuple(p for p in target.participants if p != label),
            time=target.time,
        )
        return build_graph(records, people=self._people)

    def relabel(
        self,
        person_map: Mapping[str, str],
        event_map: Optional[Mapping[str, str]] = None,
        event_order: Optional[Sequence[int]] = None,
    ) -> "BipartiteGraph":
        """人物・イベントのラベルを付け替えた同型グラフ。

        Args:
            person_map: 旧ラベル -> 新ラベル（全単射）
            event_map: 旧イベントID -> 新イベントID（省略時はそのまま）
            event_order: 新グラフでのイベントの並び（旧インデックスの順列）
        """
        event_map = event_map or {}
        order = list(event_order) if event_order is not None else range(self.num_events)
        records = self.to_records()
        relabeled = [
            EventRecord(
                event_id=event_map.get(records[j].event_id, records[j].event_id),
                participants=tuple(person_map[p] for p in records[j].participants),
                time=records[j].time,
            )
            for j in order
        ]
        people = sorted(person_map[p] for p in self._people)
        return build_graph(relabeled, people=people)

    def restrict_to_events(self, events: Iterable[Union[int, str]]) -> "BipartiteGraph":
        """指定イベントと、その参加者だけからなる部分グラフ。"""
        keep = sorted({self.event_id(e) for e in events})
        records = self.to_records()
        return build_graph([records[j] for j in keep])

    def __repr__(self) -> str:
        return (
            f"BipartiteGraph(people={self.num_people}, events={self.num_events})"
        )


def build_graph(
    events: Iterable[EventRecord], people: Optional[Iterable[str]] = None
) -> BipartiteGraph:
    """イベントレコードから二部グラフを構築します。

    Args:
        events: イベントレコード
        people: イベントに参加していなくてもシンボルテーブルに含める人物

    Returns:
        構築されたグラフ

    Raises:
        DuplicateEventError: イベントIDが重複している場合
        InputError: 参加者ラベルが空文字列の場合
    """
    person_index: Dict[str, int] = {}
    labels: List[str] = []

    def intern(label: str) -> int:
        if not label:
            raise InputError("参加者ラベルが空です")
        if label not in person_index:
            person_index[label] = len(labels)
            labels.append(label)
        return person_index[label]

    for label in people or ():
        intern(label)

    seen_events: Dict[str, int] = {}
    event_labels: List[str] = []
    times: List[Optional[int]] = []
    members: List[Tuple[int, ...]] = []
    duplicates = 0

    for record in events:
        if record.event_id in seen_events:
            raise DuplicateEventError(record.event_id)
        seen_events[record.event_id] = len(event_labels)

        attendees: List[int] = []
        present = set()
        for label in record.participants:
            i = intern(label)
            if i in present:
                duplicates += 1
                logger.warning(
                    f"イベント {record.event_id} の重複参加者をまとめました: {label}"
                )
                continue
            present.add(i)
            attendees.append(i)

        event_labels.append(record.event_id)
        times.append(record.time)
        members.append(tuple(attendees))

    graph = BipartiteGraph(labels, event_labels, times, members, duplicates)
    logger.debug(
        f"グラフを構築しました: 人物={graph.num_people}, イベント={graph.num_events}, "
        f"重複参加者={duplicates}"
    )
    return graph


def distinct_pair(g: BipartiteGraph, u: PersonRef, v: PersonRef) -> Tie:
    i, j = g.person_id(u), g.person_id(v)
    if i == j:
        raise InputError(f"異なる2人を指定してください: {g.person_label(i)}")
    return i, j


def common_events(g: BipartiteGraph, u: PersonRef, v: PersonRef) -> FrozenSet[int]:
    """u と v の両方が参加したイベントのインデックス集合。"""
    i, j = distinct_pair(g, u, v)
    return g.event_set_of(i) & g.event_set_of(j)


def tie_profile(g: BipartiteGraph, u: PersonRef, v: PersonRef) -> TieProfile:
    """u と v のタイプロファイル。"""
    return TieProfile.from_sizes(g.event_size(e) for e in common_events(g, u, v))


def all_ties(g: BipartiteGraph) -> List[Tie]:
    """共通イベントを1件以上持つペアを (i, j), i < j の辞書順で列挙します。"""
    ties = set()
    for members in g.event_members:
        ties.update(combinations(sorted(members), 2))
    return sorted(ties)


def tie_profiles(g: BipartiteGraph) -> Dict[Tie, TieProfile]:
    """全タイのプロファイルをイベントの1回の走査でまとめて求めます。"""
    sizes: Dict[Tie, List[int]] = defaultdict(list)
    for members in g.event_members:
        size = len(members)
        for pair in combinations(sorted(members), 2):
            sizes[pair].append(size)
    return {pair: TieProfile.from_sizes(sizes[pair]) for pair in sorted(sizes)}


def event_size_histogram(g: BipartiteGraph) -> Dict[int, int]:
    """参加人数ごとのイベント数（人数昇順）。"""
    counts = Counter(len(members) for members in g.event_members)
    return dict(sorted(counts.items()))


def incidence_matrix(g: BipartiteGraph) -> sp.csr_matrix:
    """人物×イベントの接続行列（疎行列）。"""
    rows: List[int] = []
    cols: List[int] = []
    for j, members in enumerate(g.event_members):
        rows.extend(members)
        cols.extend([j] * len(members))
    data = np.ones(len(rows), dtype=float)
    return sp.csr_matrix(
        (data, (rows, cols)), shape=(g.num_people, g.num_events), dtype=float
    )
