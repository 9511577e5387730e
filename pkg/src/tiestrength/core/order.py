"""タイプロファイルの半順序モジュール。

プロファイル a が b 以上であるとは、a の長さが b 以上で、かつ先頭から
b の長さ分の要素がすべて b 以下であることを指します
（イベントが多いほど、イベントが小さいほど強いタイ）。

比較不能ペアの集計、尺度と半順序の衝突集計、線形拡大の構成を提供します。
"""

import csv
import logging
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Sequence, Tuple, TypeVar, Union

import numpy as np

from tiestrength.core.errors import MissingScoreError
from tiestrength.core.graph import BipartiteGraph, Tie, TieProfile, tie_profiles
from tiestrength.core.measures import TieScoreTable

logger = logging.getLogger(__name__)

ProfileLike = Union[TieProfile, Sequence[int]]

# 一度に評価する支配判定行列の要素数の目安
_BLOCK_CELLS = 1 << 22

T = TypeVar("T")


class OrderRelation(str, Enum):
    """2つのプロファイルの関係。"""

    LESS = "less"
    GREATER = "greater"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


def _as_profile(profile: ProfileLike) -> TieProfile:
    if isinstance(profile, TieProfile):
        return profile
    return TieProfile(tuple(profile))


def dominates(a: ProfileLike, b: ProfileLike) -> bool:
    """a >= b（半順序の意味で）かどうか。"""
    a, b = _as_profile(a), _as_profile(b)
    if len(a) < len(b):
        return False
    return all(x <= y for x, y in zip(a.sizes, b.sizes))


def compare_profiles(a: ProfileLike, b: ProfileLike) -> OrderRelation:
    """2つのプロファイルを比較します。

    Args:
        a: 昇順のプロファイル
        b: 昇順のプロファイル

    Returns:
        a から見た b との関係

    Raises:
        UnsortedProfileError: 昇順でない列が渡された場合
    """
    a, b = _as_profile(a), _as_profile(b)
    if a.sizes == b.sizes:
        return OrderRelation.EQUAL
    if dominates(a, b):
        return OrderRelation.GREATER
    if dominates(b, a):
        return OrderRelation.LESS
    return OrderRelation.INCOMPARABLE


@dataclass
class CensusResult:
    """ペア集計の結果。

    Attributes:
        total: 調べたタイペアの数
        count: 比較不能（または衝突）と判定したペアの数
        weak_disagreements: 半順序では厳密に大小があるのにスコアが等しいペアの数
        label: データセット名など出力用のラベル
    """

    total: int
    count: int
    weak_disagreements: int = 0
    label: str = ""

    @property
    def percentage(self) -> float:
        if self.total == 0:
            return 0.0
        return 100.0 * self.count / self.total

    def to_row(self) -> List[str]:
        return [self.label, str(self.total), str(self.count), f"{self.percentage:.2f}"]


def _padded(profiles: Sequence[TieProfile]) -> np.ndarray:
    """末尾を十分大きな値で埋めた行列。

    埋めた行列では「a >= b」が「全要素で a <= b」と同値になります。
    """
    width = max((len(p) for p in profiles), default=0)
    fill = np.iinfo(np.int64).max
    matrix = np.full((len(profiles), max(width, 1)), fill, dtype=np.int64)
    for row, profile in enumerate(profiles):
        matrix[row, : len(profile)] = profile.sizes
    return matrix


def _dominance_block(padded: np.ndarray, start: int, stop: int) -> np.ndarray:
    """行 start..stop-1 が各列のプロファイル以上かどうかの真偽値行列。"""
    return np.all(padded[start:stop, None, :] <= padded[None, :, :], axis=2)


def _blocks(count: int, width: int) -> List[Tuple[int, int]]:
    size = max(1, _BLOCK_CELLS // max(1, count * width))
    return [(s, min(s + size, count)) for s in range(0, count, size)]


def _group_profiles(
    profiles: Dict[Tie, TieProfile],
) -> Tuple[List[TieProfile], Dict[TieProfile, List[Tie]]]:
    groups: Dict[TieProfile, List[Tie]] = defaultdict(list)
    for tie, profile in profiles.items():
        groups[profile].append(tie)
    unique = sorted(groups, key=lambda p: p.sort_key)
    return unique, groups


def _map_blocks(
    func: Callable[[Tuple[int, int]], T], blocks: List[Tuple[int, int]], threads: int
) -> List[T]:
    if threads > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            return list(executor.map(func, blocks))
    return [func(b) for b in blocks]


def incomparability_census(
    g: BipartiteGraph, threads: int = 1, label: str = ""
) -> CensusResult:
    """半順序で比較できないタイペアを数えます。

    同じプロファイルのペアは比較可能（等しい）として数えます。
    プロファイルの種類ごとにまとめ、ブロック単位で支配関係を評価するため
    全ペアを展開しません。

    Args:
        g: 二部グラフ
        threads: ブロックの並列評価に使うスレッド数
        label: 結果に付けるラベル

    Returns:
        集計結果（total は C(タイ数, 2)）
    """
    profiles = tie_profiles(g)
    ties = len(profiles)
    total = ties * (ties - 1) // 2
    unique, groups = _group_profiles(profiles)
    counts = np.array([len(groups[p]) for p in unique], dtype=np.int64)
    padded = _padded(unique)

    def count_block(bounds: Tuple[int, int]) -> int:
        start, stop = bounds
        ge = _dominance_block(padded, start, stop)
        le = np.all(padded[None, :, :] <= padded[start:stop, None, :], axis=2)
        comparable = ge | le
        rows = np.arange(start, stop)[:, None]
        cols = np.arange(len(unique))[None, :]
        incomparable = ~comparable & (cols > rows)
        weighted = counts[start:stop, None] * counts[None, :]
        return int((weighted * incomparable).sum())

    blocks = _blocks(len(unique), padded.shape[1])
    partial = _map_blocks(count_block, blocks, threads)
    count = sum(partial)
    logger.debug(
        f"比較不能ペアを集計しました: タイ={ties}, プロファイル種類={len(unique)}, "
        f"比較不能={count}"
    )
    return CensusResult(total=total, count=count, label=label)


def conflict_census(
    g: BipartiteGraph, scores: TieScoreTable, threads: int = 1, label: str = ""
) -> CensusResult:
    """半順序と尺度の順位が食い違うタイペアを数えます。

    半順序で厳密に大きいタイのスコアが厳密に小さいペアだけを衝突とし、
    スコアが等しいペアは ``weak_disagreements`` に別途数えます。

    Raises:
        MissingScoreError: スコア表に含まれないタイがある場合
    """
    profiles = tie_profiles(g)
    for i, j in profiles:
        if (i, j) not in scores:
            raise MissingScoreError((g.person_label(i), g.person_label(j)))

    ties = len(profiles)
    total = ties * (ties - 1) // 2
    unique, groups = _group_profiles(profiles)
    values = [
        np.sort(np.array([scores.get(i, j) for i, j in groups[p]], dtype=float))
        for p in unique
    ]
    padded = _padded(unique)

    def count_block(bounds: Tuple[int, int]) -> Tuple[int, int]:
        start, stop = bounds
        ge = _dominance_block(padded, start, stop)
        conflicts = weak = 0
        for offset, row in enumerate(ge):
            p = start + offset
            below = [values[q] for q in np.flatnonzero(row) if q != p]
            if not below:
                continue
            dominated = np.concatenate(below)
            left = np.searchsorted(values[p], dominated, side="left")
            right = np.searchsorted(values[p], dominated, side="right")
            conflicts += int(left.sum())
            weak += int((right - left).sum())
        return conflicts, weak

    blocks = _blocks(len(unique), padded.shape[1])
    partial = _map_blocks(count_block, blocks, threads)
    count = sum(c for c, _ in partial)
    weak = sum(w for _, w in partial)
    logger.debug(
        f"{scores.spec.kind.display_name} の衝突を集計しました: "
        f"衝突={count}, スコア同値={weak}"
    )
    return CensusResult(total=total, count=count, weak_disagreements=weak, label=label)


def append_census_record(result: CensusResult, path: Union[str, Path]) -> None:
    """集計結果を1行追記します（新規ファイルにはヘッダーを書きます）。"""
    path = Path(path)
    is_new = not path.exists() or path.stat().st_size == 0
    with open(path, "a", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        if is_new:
            writer.writerow(["label", "total", "count", "percentage"])
        writer.writerow(result.to_row())


# --- 線形拡大 ---


@dataclass
class ExtensionTable:
    """プロファイルから実数値への写像（半順序の線形拡大）。

    値は厳密な有理数で保持し、値が等しい比較不能なプロファイルは
    (長さ, 辞書順) のキーで順位を決めます。
    """

    values: Dict[TieProfile, Fraction] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.values)

    def __contains__(self, profile: object) -> bool:
        return profile in self.values

    def value(self, profile: ProfileLike) -> Fraction:
        return self.values[_as_profile(profile)]

    def rank_key(self, profile: TieProfile) -> Tuple[Fraction, int, Tuple[int, ...]]:
        """値が同じときは (長さ, 辞書順) で順位を決めるキー。"""
        return (self.values[profile], *profile.sort_key)

    def ranking(self) -> List[TieProfile]:
        """弱い順に並べたプロファイル。"""
        return sorted(self.values, key=self.rank_key)

    def write_csv(self, path: Union[str, Path]) -> None:
        """順位・プロファイル・値（有理数と小数）をCSVで書き出します。"""
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(["rank", "profile", "value", "decimal"])
            for rank, profile in enumerate(self.ranking(), 1):
                value = self.values[profile]
                writer.writerow([rank, str(profile), str(value), f"{float(value):.9g}"])


def build_linear_extension(profiles: Iterable[ProfileLike]) -> ExtensionTable:
    """半順序と矛盾しない値をプロファイルに割り当てます。

    プロファイルを (長さ, 辞書順) に処理し、空のプロファイルは0、
    1イベントのプロファイル (n) は 1/(n-1) とします。それ以外は
    割り当て済みで厳密に下にある値の最大と、厳密に上にある値の最小の
    中点を取ります。下がなければ上の値の半分、上がなければ下の値 + 1、
    どちらもなければ1とします。

    Args:
        profiles: プロファイルの集まり（重複は1つにまとめる）

    Returns:
        線形拡大の表
    """
    unique = sorted({_as_profile(p) for p in profiles}, key=lambda p: p.sort_key)
    padded = _padded(unique)
    assigned: List[Fraction] = []

    for k, profile in enumerate(unique):
        if len(profile) == 0:
            assigned.append(Fraction(0))
            continue
        if len(profile) == 1:
            assigned.append(Fraction(1, profile[0] - 1))
            continue

        # unique は重複なしなので、ここでの支配関係はすべて厳密
        is_below = np.all(padded[k] <= padded[:k], axis=1)
        is_above = np.all(padded[:k] <= padded[k], axis=1)
        below = [assigned[q] for q in np.flatnonzero(is_below)]
        above = [assigned[q] for q in np.flatnonzero(is_above)]
        if below and above:
            value = (max(below) + min(above)) / 2
        elif above:
            value = min(above) / 2
        elif below:
            value = max(below) + 1
        else:
            value = Fraction(1)
        assigned.append(value)

    table = ExtensionTable(values=dict(zip(unique, assigned)))
    logger.debug(f"線形拡大を構成しました: プロファイル={len(table)}")
    return table


def verify_linear_extension(
    table: ExtensionTable,
) -> Tuple[bool, List[Tuple[TieProfile, TieProfile]]]:
    """表が半順序の線形拡大になっているかを全ペアで確認します。

    Returns:
        (成否, 違反ペアのリスト)。違反ペアは (上であるべき側, 下であるべき側)
    """
    profiles = sorted(table.values, key=lambda p: p.sort_key)
    padded = _padded(profiles)
    violations: List[Tuple[TieProfile, TieProfile]] = []
    for start, stop in _blocks(len(profiles), padded.shape[1]):
        ge = _dominance_block(padded, start, stop)
        for offset, row in enumerate(ge):
            a = profiles[start + offset]
            for q in np.flatnonzero(row):
                b = profiles[q]
                if b != a and not table.rank_key(a) > table.rank_key(b):
                    violations.append((a, b))
    return not violations, violations
