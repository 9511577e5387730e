"""Tie strength 尺度モジュール。

12種類の尺度を共通のインターフェース（ペア単位の ``score_pair`` と
表全体の ``score_all``）で提供します。公理をすべて満たす尺度については
``characterized_form`` で g(h(|P_1|), ..., h(|P_k|)) 形式の (g, h) を返します。
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from enum import Enum
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from tiestrength.core.errors import ConfigError, ConvergenceError, MissingTimestampError
from tiestrength.core.graph import (
    BipartiteGraph,
    PersonRef,
    Tie,
    TieProfile,
    distinct_pair,
    all_ties,
    common_events,
    incidence_matrix,
    tie_profiles,
)

logger = logging.getLogger(__name__)


class MeasureKind(str, Enum):
    """尺度の種類（値はCLIで使う名前）。"""

    COMMON = "common"
    JACCARD = "jaccard"
    DELTA = "delta"
    ADAMIC_ADAR = "adamic-adar"
    LINEAR = "linear"
    PREFERENTIAL = "preferential"
    KATZ = "katz"
    RWR = "rwr"
    SIMRANK = "simrank"
    MAX = "max"
    PROPORTIONAL = "proportional"
    TEMPORAL = "temporal"

    @classmethod
    def parse(cls, name: "str | MeasureKind") -> "MeasureKind":
        """名前から尺度を解決します（大文字小文字・区切り文字は区別しない）。

        Raises:
            ConfigError: 未知の尺度名の場合
        """
        if isinstance(name, MeasureKind):
            return name
        normalized = name.strip().lower().replace("_", "-")
        aliases = {
            "adamicadar": "adamic-adar",
            "aa": "adamic-adar",
            "pref": "preferential",
        }
        normalized = aliases.get(normalized, normalized)
        for kind in cls:
            if kind.value == normalized:
                return kind
        choices = ", ".join(k.value for k in cls)
        raise ConfigError(f"未知の尺度です: {name} (選択肢: {choices})")

    @property
    def display_name(self) -> str:
        return MEASURE_LABELS[self]


MEASURE_LABELS: Dict[MeasureKind, str] = {
    MeasureKind.COMMON: "Common Neighbors",
    MeasureKind.JACCARD: "Jaccard Index",
    MeasureKind.DELTA: "Delta",
    MeasureKind.ADAMIC_ADAR: "Adamic-Adar",
    MeasureKind.LINEAR: "Linear",
    MeasureKind.PREFERENTIAL: "Preferential Attachment",
    MeasureKind.KATZ: "Katz",
    MeasureKind.RWR: "Random Walk with Restart",
    MeasureKind.SIMRANK: "SimRank",
    MeasureKind.MAX: "Max",
    MeasureKind.PROPORTIONAL: "Proportional",
    MeasureKind.TEMPORAL: "Temporal Proportional",
}

# 反復計算で値を求める尺度
ITERATIVE_KINDS = frozenset(
    {
        MeasureKind.RWR,
        MeasureKind.SIMRANK,
        MeasureKind.PROPORTIONAL,
        MeasureKind.TEMPORAL,
    }
)

# 共通イベントを持たないペアにも値を返す尺度
WIDE_SUPPORT_KINDS = frozenset(
    {
        MeasureKind.JACCARD,
        MeasureKind.PREFERENTIAL,
        MeasureKind.RWR,
        MeasureKind.SIMRANK,
    }
)


@dataclass(frozen=True)
class MeasureSpec:
    """尺度とその数値パラメータ。

    Attributes:
        kind: 尺度の種類
        katz_gamma: Katz の減衰底（> 1）
        katz_max_walk_length: Katz で数えるウォーク長の上限（2以上の偶数）
        rwr_alpha: RWR のリスタート確率（0 < α < 1）
        simrank_gamma: SimRank の減衰係数（0 < γ < 1）
        epsilon: Proportional / Temporal の ε（0 < ε < 1）
        temporal_init: Temporal の初期値（>= 0）
        tolerance: 反復計算の収束判定値
        max_iterations: 反復計算の最大回数
    """

    kind: MeasureKind
    katz_gamma: float = 2.0
    katz_max_walk_length: int = 6
    rwr_alpha: float = 0.15
    simrank_gamma: float = 0.8
    epsilon: float = 0.5
    temporal_init: float = 1e-6
    tolerance: float = 1e-9
    max_iterations: int = 1000

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", MeasureKind.parse(self.kind))
        if not self.katz_gamma > 1:
            raise ConfigError(f"katz_gamma は1より大きい必要があります: {self.katz_gamma}")
        length = self.katz_max_walk_length
        if int(length) != length or length < 2 or length % 2:
            raise ConfigError(
                f"katz_max_walk_length は2以上の偶数である必要があります: {length}"
            )
        for name in ("rwr_alpha", "simrank_gamma", "epsilon"):
            value = getattr(self, name)
            if not 0 < value < 1:
                raise ConfigError(f"{name} は0より大きく1未満である必要があります: {value}")
        if self.temporal_init < 0:
            raise ConfigError(
                f"temporal_init は0以上である必要があります: {self.temporal_init}"
            )
        if not self.tolerance > 0:
            raise ConfigError(f"tolerance は正の値である必要があります: {self.tolerance}")
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise ConfigError(
                f"max_iterations は1以上の整数である必要があります: {self.max_iterations}"
            )

    def with_overrides(self, **overrides: Any) -> "MeasureSpec":
        """一部のパラメータを差し替えた新しい MeasureSpec を返します。"""
        unknown = set(overrides) - set(PARAMETER_FIELDS) - {"kind"}
        if unknown:
            raise ConfigError(f"未知のパラメータです: {', '.join(sorted(unknown))}")
        return replace(self, **overrides)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["kind"] = self.kind.value
        return data


PARAMETER_FIELDS: Tuple[str, ...] = (
    "katz_gamma",
    "katz_max_walk_length",
    "rwr_alpha",
    "simrank_gamma",
    "epsilon",
    "temporal_init",
    "tolerance",
    "max_iterations",
)


@dataclass
class TieScoreTable:
    """ペアごとのスコア表。

    キーは人物インデックスの組 (i, j), i < j。表にないペアのスコアは0とします。

    Attributes:
        spec: 計算に使った MeasureSpec
        people: 人物ラベル（インデックス順）
        scores: (i, j) -> スコア
        residual: 反復計算の最終残差（反復しない尺度は None）
        iterations: 反復回数
    """

    spec: MeasureSpec
    people: Tuple[str, ...]
    scores: Dict[Tie, float] = field(default_factory=dict)
    residual: Optional[float] = None
    iterations: Optional[int] = None

    @staticmethod
    def key(i: int, j: int) -> Tie:
        return (i, j) if i < j else (j, i)

    def get(self, i: int, j: int) -> float:
        return self.scores.get(self.key(i, j), 0.0)

    def items(self) -> List[Tuple[Tie, float]]:
        return sorted(self.scores.items())

    def __len__(self) -> int:
        return len(self.scores)

    def __contains__(self, pair: object) -> bool:
        if not isinstance(pair, tuple) or len(pair) != 2:
            return False
        return self.key(*pair) in self.scores

    def labeled(self) -> Dict[Tuple[str, str], float]:
        """ラベルの組（辞書順で小さい方が先）をキーにした表。"""
        result: Dict[Tuple[str, str], float] = {}
        for (i, j), score in self.scores.items():
            a, b = sorted((self.people[i], self.people[j]))
            result[(a, b)] = score
        return dict(sorted(result.items()))

    def max_score(self) -> float:
        return max(self.scores.values(), default=0.0)


class Aggregator(str, Enum):
    """特徴づけ形式の g。"""

    SUM = "sum"
    MAX = "max"

    def __call__(self, values: Sequence[float]) -> float:
        if not values:
            return 0.0
        if self is Aggregator.SUM:
            return math.fsum(values)
        return max(values)


@dataclass(frozen=True)
class CharacterizedMeasure:
    """TS = g(h(|P_1|), ..., h(|P_k|)) 形式で表される尺度。

    Attributes:
        kind: 尺度の種類
        h: イベント人数 n (>= 2) から1イベント分の強さへの関数
        g: 集約関数
        h_label: h の表記
    """

    kind: MeasureKind
    h: Callable[[int], float]
    g: Aggregator
    h_label: str

    def evaluate(self, profile: TieProfile) -> float:
        """タイプロファイルに g∘h を適用します。"""
        return self.g([self.h(n) for n in profile])

    def total_single_event(self, k: int) -> float:
        """k人の単一イベントが生む強さの合計 f(k) = C(k,2)·h(k)。"""
        return math.comb(k, 2) * self.h(k)

    def bound_violations(self, max_size: int) -> List[int]:
        """1 >= h(n) >= 1/C(n,2) を満たさない n の一覧。"""
        return [
            n
            for n in range(2, max_size + 1)
            if not (1.0 >= self.h(n) >= 1.0 / math.comb(n, 2))
        ]


_CHARACTERIZED: Dict[MeasureKind, CharacterizedMeasure] = {
    MeasureKind.COMMON: CharacterizedMeasure(
        MeasureKind.COMMON, lambda n: 1.0, Aggregator.SUM, "1"
    ),
    MeasureKind.DELTA: CharacterizedMeasure(
        MeasureKind.DELTA, lambda n: 1.0 / math.comb(n, 2), Aggregator.SUM, "1/C(n,2)"
    ),
    MeasureKind.ADAMIC_ADAR: CharacterizedMeasure(
        MeasureKind.ADAMIC_ADAR, lambda n: 1.0 / math.log(n), Aggregator.SUM, "1/ln(n)"
    ),
    MeasureKind.LINEAR: CharacterizedMeasure(
        MeasureKind.LINEAR, lambda n: 1.0 / n, Aggregator.SUM, "1/n"
    ),
    MeasureKind.MAX: CharacterizedMeasure(
        MeasureKind.MAX, lambda n: 1.0 / n, Aggregator.MAX, "1/n"
    ),
}


def characterized_form(kind: "MeasureKind | str") -> Optional[CharacterizedMeasure]:
    """尺度の (g, h) 形式を返します。特徴づけられない尺度は None。"""
    return _CHARACTERIZED.get(MeasureKind.parse(kind))


# --- ペア単位の閉形式尺度 ---


def _common_sizes(g: BipartiteGraph, u: PersonRef, v: PersonRef) -> List[int]:
    return [g.event_size(e) for e in sorted(common_events(g, u, v))]


def score_common(g: BipartiteGraph, u: PersonRef, v: PersonRef) -> float:
    """共通イベント数。"""
    return float(len(common_events(g, u, v)))


def score_jaccard(g: BipartiteGraph, u: PersonRef, v: PersonRef) -> float:
    """|Γ(u)∩Γ(v)| / |Γ(u)∪Γ(v)|。和集合が空なら0。"""
    i, j = distinct_pair(g, u, v)
    a, b = g.event_set_of(i), g.event_set_of(j)
    union = len(a | b)
    if union == 0:
        return 0.0
    return len(a & b) / union


def score_delta(g: BipartiteGraph, u: PersonRef, v: PersonRef) -> float:
    """共通イベントごとの 1/C(|P|,2) の和。"""
    return math.fsum(1.0 / math.comb(n, 2) for n in _common_sizes(g, u, v))


def score_adamic_adar(g: BipartiteGraph, u: PersonRef, v: PersonRef) -> float:
    """共通イベントごとの 1/ln|P| の和（自然対数）。"""
    return math.fsum(1.0 / math.log(n) for n in _common_sizes(g, u, v))


def score_linear(g: BipartiteGraph, u: PersonRef, v: PersonRef) -> float:
    """共通イベントごとの 1/|P| の和。"""
    return math.fsum(1.0 / n for n in _common_sizes(g, u, v))


def score_max(g: BipartiteGraph, u: PersonRef, v: PersonRef) -> float:
    """共通イベントの 1/|P| の最大値。共通イベントがなければ0。"""
    return max((1.0 / n for n in _common_sizes(g, u, v)), default=0.0)


def score_preferential(g: BipartiteGraph, u: PersonRef, v: PersonRef) -> float:
    """|Γ(u)|·|Γ(v)|。"""
    i, j = distinct_pair(g, u, v)
    return float(len(g.events_of(i)) * len(g.events_of(j)))


# --- Katz ---


def _cooccurrence_matrix(g: BipartiteGraph) -> sp.csr_matrix:
    """人物→イベント→人物の長さ2ウォーク数の行列 B·Bᵀ。"""
    b = incidence_matrix(g)
    return (b @ b.T).tocsr()


def _katz_row(a: sp.csr_matrix, i: int, spec: MeasureSpec) -> np.ndarray:
    """人物 i から各人物への減衰付きウォーク数の和。"""
    x = np.zeros(a.shape[0])
    x[i] = 1.0
    total = np.zeros(a.shape[0])
    for step in range(1, spec.katz_max_walk_length // 2 + 1):
        x = a @ x
        total += x * spec.katz_gamma ** (-2 * step)
    return total


def score_katz(
    g: BipartiteGraph, u: PersonRef, v: PersonRef, spec: MeasureSpec
) -> float:
    """長さ 2, 4, ..., L のウォークを γ^(-長さ) で重み付けして数えます。"""
    i, j = distinct_pair(g, u, v)
    return float(_katz_row(_cooccurrence_matrix(g), i, spec)[j])


# --- Random Walk with Restart ---


def _transition_matrix(g: BipartiteGraph) -> Tuple[sp.csr_matrix, np.ndarray]:
    """人物とイベントを頂点とする二部グラフ上の遷移行列と、行き止まり頂点のマスク。

    頂点の並びは人物 (0..n-1) の後にイベント (n..n+m-1)。
    """
    offset = g.num_people
    size = offset + g.num_events
    rows: List[int] = []
    cols: List[int] = []
    for j, members in enumerate(g.event_members):
        for i in members:
            rows.extend((i, offset + j))
            cols.extend((offset + j, i))
    adjacency = sp.csr_matrix(
        (np.ones(len(rows)), (rows, cols)), shape=(size, size), dtype=float
    )
    degree = np.asarray(adjacency.sum(axis=1)).ravel()
    inverse = np.divide(1.0, degree, out=np.zeros_like(degree), where=degree > 0)
    return (sp.diags(inverse) @ adjacency).tocsr(), degree == 0


def _rwr_vector(
    g: BipartiteGraph,
    i: int,
    spec: MeasureSpec,
    transition: Optional[Tuple[sp.csr_matrix, np.ndarray]] = None,
    target: Optional[int] = None,
) -> np.ndarray:
    """人物 i から出発するリスタート付きランダムウォークの定常分布。"""
    matrix, dangling = transition or _transition_matrix(g)
    alpha = spec.rwr_alpha
    restart = np.zeros(matrix.shape[0])
    restart[i] = 1.0
    transposed = matrix.T.tocsr()
    pi = restart.copy()
    residual = math.inf
    for _ in range(spec.max_iterations):
        nxt = alpha * restart + (1 - alpha) * (transposed @ pi)
        # 行き止まり頂点の確率質量は出発点に戻す
        nxt[i] += (1 - alpha) * pi[dangling].sum()
        residual = float(np.abs(nxt - pi).sum())
        pi = nxt
        if residual < spec.tolerance:
            return pi
    pair = (
        g.person_label(i),
        g.person_label(target) if target is not None else "*",
    )
    raise ConvergenceError("rwr", residual, spec.max_iterations, pair)


def score_rwr(
    g: BipartiteGraph, u: PersonRef, v: PersonRef, spec: MeasureSpec
) -> float:
    """u から出発したウォークが人物 v にいる定常確率（非対称）。"""
    i, j = distinct_pair(g, u, v)
    return float(_rwr_vector(g, i, spec, target=j)[j])


# --- SimRank ---


def _simrank_matrices(
    g: BipartiteGraph, spec: MeasureSpec
) -> Tuple[np.ndarray, np.ndarray, float, int]:
    """二部グラフ版 SimRank の人物側・イベント側の類似度行列。"""
    b = incidence_matrix(g).toarray()
    people_degree = b.sum(axis=1)
    event_degree = b.sum(axis=0)
    people_norm = np.outer(people_degree, people_degree)
    event_norm = np.outer(event_degree, event_degree)
    gamma = spec.simrank_gamma

    people = np.eye(g.num_people)
    events = np.eye(g.num_events)
    residual = 0.0
    for iteration in range(1, spec.max_iterations + 1):
        new_people = np.divide(
            gamma * (b @ events @ b.T),
            people_norm,
            out=np.zeros_like(people_norm),
            where=people_norm > 0,
        )
        np.fill_diagonal(new_people, 1.0)
        new_events = np.divide(
            gamma * (b.T @ people @ b),
            event_norm,
            out=np.zeros_like(event_norm),
            where=event_norm > 0,
        )
        np.fill_diagonal(new_events, 1.0)
        residual = max(
            float(np.abs(new_people - people).max(initial=0.0)),
            float(np.abs(new_events - events).max(initial=0.0)),
        )
        people, events = new_people, new_events
        if residual < spec.tolerance:
            return people, events, residual, iteration
    raise ConvergenceError("simrank", residual, spec.max_iterations)


def score_simrank(
    g: BipartiteGraph, u: PersonRef, v: PersonRef, spec: MeasureSpec
) -> float:
    """SimRank 類似度。u = v なら1。"""
    i, j = g.person_id(u), g.person_id(v)
    if i == j:
        return 1.0
    people, _, _, _ = _simrank_matrices(g, spec)
    return float(people[i, j])


# --- Proportional / Temporal Proportional ---


def score_proportional(g: BipartiteGraph, spec: MeasureSpec) -> TieScoreTable:
    """Proportional 尺度の不動点を同期更新で求めます。

    有向の初期値は TS⁰(u,v) = Σ 1/|P|（共通イベント）とし、
    収束後に両方向の値を平均して対称化します。

    Raises:
        ConvergenceError: max_iterations 回で収束しなかった場合
    """
    profiles = tie_profiles(g)
    table = TieScoreTable(spec=spec, people=g.people, residual=0.0, iterations=0)
    if not profiles:
        return table

    ties = list(profiles)
    count = len(ties)
    src = np.array([i for i, _ in ties] + [j for _, j in ties], dtype=np.int64)
    inverse_sum = np.array(
        [math.fsum(1.0 / n for n in profiles[t]) for t in ties] * 2
    )
    events_in_common = np.array([len(profiles[t]) for t in ties] * 2, dtype=float)
    eps = spec.epsilon

    ts = inverse_sum.copy()
    base = eps * inverse_sum
    residual = math.inf
    for iteration in range(1, spec.max_iterations + 1):
        denominator = np.bincount(src, weights=ts, minlength=g.num_people)[src]
        updated = base + (1 - eps) * events_in_common * ts / denominator
        residual = float(np.abs(updated - ts).max())
        ts = updated
        if residual < spec.tolerance:
            table.scores = {
                t: float((ts[k] + ts[k + count]) / 2) for k, t in enumerate(ties)
            }
            table.residual = residual
            table.iterations = iteration
            logger.debug(
                f"Proportional が {iteration} 回で収束しました: 残差={residual:.3e}"
            )
            return table
    raise ConvergenceError("proportional", residual, spec.max_iterations)


def score_temporal(g: BipartiteGraph, spec: MeasureSpec) -> TieScoreTable:
    """Temporal Proportional 尺度。

    イベントを (時刻, イベントID) の昇順に処理し、参加者の有向ペアを
    直前の値から更新します。最後に両方向の値を平均して対称化します。

    Raises:
        MissingTimestampError: タイムスタンプのないイベントがある場合
    """
    for j in range(g.num_events):
        if g.event_time(j) is None:
            raise MissingTimestampError(g.event_label(j))

    order = sorted(
        range(g.num_events), key=lambda j: (g.event_time(j), g.event_label(j))
    )
    eps = spec.epsilon
    init = spec.temporal_init
    directed: Dict[Tie, float] = {}

    for j in order:
        members = sorted(g.members(j))
        size = len(members)
        if size < 2:
            continue
        previous = {
            (u, v): directed.get((u, v), init)
            for u in members
            for v in members
            if u != v
        }
        for u in members:
            denominator = math.fsum(previous[(u, w)] for w in members if w != u)
            for v in members:
                if v == u:
                    continue
                if denominator > 0:
                    share = previous[(u, v)] / denominator
                else:
                    share = 1.0 / (size - 1)
                directed[(u, v)] = eps / size + (1 - eps) * share

    scores = {
        (u, v): (value + directed[(v, u)]) / 2
        for (u, v), value in sorted(directed.items())
        if u < v
    }
    return TieScoreTable(
        spec=spec, people=g.people, scores=scores, residual=None, iterations=len(order)
    )


# --- 共通インターフェース ---

PairScorer = Callable[[BipartiteGraph, PersonRef, PersonRef], float]

_PAIR_SCORERS: Dict[MeasureKind, PairScorer] = {
    MeasureKind.COMMON: score_common,
    MeasureKind.JACCARD: score_jaccard,
    MeasureKind.DELTA: score_delta,
    MeasureKind.ADAMIC_ADAR: score_adamic_adar,
    MeasureKind.LINEAR: score_linear,
    MeasureKind.MAX: score_max,
    MeasureKind.PREFERENTIAL: score_preferential,
}


def score_pair(
    g: BipartiteGraph, u: PersonRef, v: PersonRef, spec: MeasureSpec
) -> float:
    """任意の尺度で u から v へのスコアを求めます（RWR は有向値）。"""
    kind = spec.kind
    if kind in _PAIR_SCORERS:
        return _PAIR_SCORERS[kind](g, u, v)
    if kind is MeasureKind.KATZ:
        return score_katz(g, u, v, spec)
    if kind is MeasureKind.RWR:
        return score_rwr(g, u, v, spec)
    if kind is MeasureKind.SIMRANK:
        return score_simrank(g, u, v, spec)
    i, j = distinct_pair(g, u, v)
    if kind is MeasureKind.PROPORTIONAL:
        return score_proportional(g, spec).get(i, j)
    return score_temporal(g, spec).get(i, j)


def score_row(g: BipartiteGraph, u: PersonRef, spec: MeasureSpec) -> Dict[int, float]:
    """u から他の全員へのスコア（人物インデックス -> スコア）。

    反復計算の尺度も1回の計算で全員分を求めます。RWR は u からの有向値です。
    """
    i = g.person_id(u)
    others = [j for j in range(g.num_people) if j != i]
    kind = spec.kind
    if kind is MeasureKind.KATZ:
        row = _katz_row(_cooccurrence_matrix(g), i, spec)
        return {j: float(row[j]) for j in others}
    if kind is MeasureKind.RWR:
        vector = _rwr_vector(g, i, spec)
        return {j: float(vector[j]) for j in others}
    if kind is MeasureKind.SIMRANK:
        people, _, _, _ = _simrank_matrices(g, spec)
        return {j: float(people[i, j]) for j in others}
    if kind is MeasureKind.PROPORTIONAL:
        table = score_proportional(g, spec)
        return {j: table.get(i, j) for j in others}
    if kind is MeasureKind.TEMPORAL:
        table = score_temporal(g, spec)
        return {j: table.get(i, j) for j in others}
    scorer = _PAIR_SCORERS[kind]
    return {j: scorer(g, i, j) for j in others}


def _target_pairs(
    g: BipartiteGraph,
    spec: MeasureSpec,
    pairs: Optional[Iterable[Tuple[PersonRef, PersonRef]]],
) -> List[Tie]:
    targets = set(all_ties(g))
    if pairs is not None and spec.kind in WIDE_SUPPORT_KINDS:
        for u, v in pairs:
            i, j = distinct_pair(g, u, v)
            targets.add(TieScoreTable.key(i, j))
    return sorted(targets)


def score_all(
    g: BipartiteGraph,
    spec: MeasureSpec,
    pairs: Optional[Iterable[Tuple[PersonRef, PersonRef]]] = None,
    threads: int = 1,
) -> TieScoreTable:
    """グラフの全タイ（と、対応する尺度では指定ペア）のスコア表を求めます。

    Args:
        g: 二部グラフ
        spec: 尺度
        pairs: 共通イベントがなくても評価するペア
            （Jaccard / Preferential / RWR / SimRank のみ有効）
        threads: ペア単位の計算に使うスレッド数。結果はスレッド数に依存しない

    Returns:
        スコア表
    """
    kind = spec.kind
    logger.debug(f"{kind.display_name} のスコアを計算します")
    if kind is MeasureKind.PROPORTIONAL:
        return score_proportional(g, spec)
    if kind is MeasureKind.TEMPORAL:
        return score_temporal(g, spec)

    targets = _target_pairs(g, spec, pairs)
    table = TieScoreTable(spec=spec, people=g.people)
    if not targets:
        return table

    if kind is MeasureKind.KATZ:
        a = _cooccurrence_matrix(g)
        rows = {i: _katz_row(a, i, spec) for i in sorted({i for i, _ in targets})}
        table.scores = {(i, j): float(rows[i][j]) for i, j in targets}
        return table

    if kind is MeasureKind.RWR:
        transition = _transition_matrix(g)
        people = sorted({p for pair in targets for p in pair})
        vectors = {i: _rwr_vector(g, i, spec, transition) for i in people}
        table.scores = {
            (i, j): float((vectors[i][j] + vectors[j][i]) / 2) for i, j in targets
        }
        return table

    if kind is MeasureKind.SIMRANK:
        similarity, _, residual, iterations = _simrank_matrices(g, spec)
        table.scores = {(i, j): float(similarity[i, j]) for i, j in targets}
        table.residual, table.iterations = residual, iterations
        return table

    scorer = _PAIR_SCORERS[kind]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            values = list(executor.map(lambda t: scorer(g, t[0], t[1]), targets))
    else:
        values = [scorer(g, i, j) for i, j in targets]
    table.scores = dict(zip(targets, values))
    return table
