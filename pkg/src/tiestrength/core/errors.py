"""例外クラス定義モジュール。

CLIの終了コードは例外クラスの ``exit_code`` で決まります。
"""

from typing import Optional, Tuple


class TieStrengthError(Exception):
    """パッケージ共通の基底例外。"""

    exit_code = 1


class ConfigError(TieStrengthError):
    """パラメータや指定オプションが不正な場合の例外。"""

    exit_code = 2


class InputError(TieStrengthError):
    """入力データが不正な場合の例外。"""

    exit_code = 3


class DuplicateEventError(InputError):
    """同じイベントIDが複数回出現した場合の例外。"""

    def __init__(self, event_id: str):
        super().__init__(f"イベントIDが重複しています: {event_id}")
        self.event_id = event_id


class UnknownPersonError(InputError):
    """グラフに存在しない人物が指定された場合の例外。"""

    def __init__(self, person: object):
        super().__init__(f"グラフに存在しない人物です: {person}")
        self.person = person


class MissingTimestampError(InputError):
    """時刻を必要とする尺度でタイムスタンプが欠けている場合の例外。"""

    def __init__(self, event_id: str):
        super().__init__(f"イベントにタイムスタンプがありません: {event_id}")
        self.event_id = event_id


class MissingScoreError(InputError):
    """スコア表に必要なタイのスコアが存在しない場合の例外。"""

    def __init__(self, tie: Tuple[str, str]):
        super().__init__(f"タイのスコアがありません: {tie[0]} - {tie[1]}")
        self.tie = tie


class UnsortedProfileError(InputError):
    """タイプロファイルが昇順に並んでいない場合の例外。"""

    def __init__(self, sizes: Tuple[int, ...]):
        super().__init__(f"プロファイルが昇順ではありません: {sizes}")
        self.sizes = sizes


class ConvergenceError(TieStrengthError):
    """反復計算が最大反復回数内に収束しなかった場合の例外。"""

    exit_code = 4

    def __init__(
        self,
        measure: str,
        residual: float,
        iterations: int,
        pair: Optional[Tuple[str, str]] = None,
    ):
        target = f" (ペア: {pair[0]} - {pair[1]})" if pair else ""
        super().__init__(
            f"{measure} が {iterations} 回の反復で収束しませんでした{target}: "
            f"残差={residual:.3e}"
        )
        self.measure = measure
        self.residual = residual
        self.iterations = iterations
        self.pair = pair
