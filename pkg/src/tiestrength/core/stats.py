"""尺度間の順位相関モジュール。"""

import csv
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.stats import kendalltau

from tiestrength.core.errors import InputError, TieStrengthError
from tiestrength.core.graph import BipartiteGraph, Tie
from tiestrength.core.measures import MeasureKind, MeasureSpec, TieScoreTable, score_all

logger = logging.getLogger(__name__)

# scipy の kendalltau に渡す変種（同順位を補正する τ-b）
TAU_VARIANT = "b"
TAU_METADATA = "# statistic: kendall_tau_b"


def aligned_scores(
    a: TieScoreTable, b: TieScoreTable, keys: Optional[Sequence[Tie]] = None
) -> Tuple[List[Tie], np.ndarray, np.ndarray]:
    """2つの表をキーの和集合で並べます。表にないキーは0として読みます。"""
    if keys is None:
        keys = sorted(set(a.scores) | set(b.scores))
    x = np.array([a.scores.get(k, 0.0) for k in keys], dtype=float)
    y = np.array([b.scores.get(k, 0.0) for k in keys], dtype=float)
    return list(keys), x, y


def kendall_tau(
    a: TieScoreTable, b: TieScoreTable, keys: Optional[Sequence[Tie]] = None
) -> float:
    """Kendall の τ-b。

    どちらかの順位がすべて同値の場合は0を返します。

    Args:
        a: スコア表
        b: スコア表
        keys: 比較するキー（省略時は両表のキーの和集合）

    Raises:
        InputError: キーが2つ未満の場合
    """
    keys, x, y = aligned_scores(a, b, keys)
    if len(keys) < 2:
        raise InputError(f"Kendall の τ には2つ以上のタイが必要です: {len(keys)}")
    tau, _ = kendalltau(x, y, variant=TAU_VARIANT)
    if math.isnan(tau):
        return 0.0
    return float(tau)


@dataclass
class TauMatrix:
    """尺度ごとの τ 行列。

    Attributes:
        kinds: 行・列の尺度（入力順）
        values: τ の正方行列。計算に失敗した尺度の行・列は NaN
        missing: 計算に失敗した尺度とその理由
    """

    kinds: List[MeasureKind]
    values: np.ndarray
    missing: Dict[MeasureKind, str] = field(default_factory=dict)

    def get(self, a: MeasureKind, b: MeasureKind) -> float:
        return float(self.values[self.kinds.index(a), self.kinds.index(b)])

    def least_correlated(self) -> Optional[MeasureKind]:
        """他の尺度との τ の平均が最も小さい尺度。"""
        if len(self.kinds) < 2:
            return None
        masked = self.values.copy()
        np.fill_diagonal(masked, np.nan)
        with np.errstate(invalid="ignore"):
            means = np.nanmean(masked, axis=1)
        if np.all(np.isnan(means)):
            return None
        return self.kinds[int(np.nanargmin(means))]


def tau_matrix(
    g: BipartiteGraph,
    specs: Sequence[MeasureSpec],
    wide: bool = False,
    threads: int = 1,
) -> TauMatrix:
    """複数の尺度の τ 行列を求めます。

    既定では共通イベントを持つペアだけを比較します。``wide`` を指定すると
    全ペアを対象にし、共通イベントがなくても値を持つ尺度の差が表れます。

    Args:
        g: 二部グラフ
        specs: 尺度（2つ以上）
        wide: 全ペアを比較対象にするかどうか
        threads: スコア計算のスレッド数

    Returns:
        τ 行列。スコア計算に失敗した尺度は行・列が NaN になり ``missing`` に記録される
    """
    if len(specs) < 2:
        raise InputError(f"τ 行列には2つ以上の尺度が必要です: {len(specs)}")

    pairs = (
        [(i, j) for i in range(g.num_people) for j in range(i + 1, g.num_people)]
        if wide
        else None
    )
    tables: List[Optional[TieScoreTable]] = []
    missing: Dict[MeasureKind, str] = {}
    for spec in specs:
        try:
            tables.append(score_all(g, spec, pairs=pairs, threads=threads))
        except TieStrengthError as e:
            logger.warning(f"{spec.kind.display_name} のスコア計算に失敗しました: {e}")
            missing[spec.kind] = str(e)
            tables.append(None)

    keys: Optional[List[Tie]] = pairs
    if keys is None:
        keys = sorted({k for t in tables if t is not None for k in t.scores})

    size = len(specs)
    values = np.full((size, size), np.nan)
    for r in range(size):
        for c in range(r, size):
            a, b = tables[r], tables[c]
            if a is None or b is None:
                continue
            tau = 1.0 if r == c else kendall_tau(a, b, keys)
            values[r, c] = values[c, r] = tau
    return TauMatrix(kinds=[s.kind for s in specs], values=values, missing=missing)


def write_tau_matrix(matrix: TauMatrix, path: Union[str, Path]) -> None:
    """τ 行列をCSVで書き出します（欠損は NA）。

    1行目は統計量を示すコメント行（`# statistic: kendall_tau_b`）です。
    """
    with open(path, "w", newline="", encoding="utf-8") as f:
        f.write(TAU_METADATA + "\n")
        writer = csv.writer(f, lineterminator="\n")
        names = [k.value for k in matrix.kinds]
        writer.writerow(["measure", *names])
        for name, row in zip(names, matrix.values):
            writer.writerow(
                [name, *("NA" if math.isnan(v) else f"{v:.6f}" for v in row)]
            )
