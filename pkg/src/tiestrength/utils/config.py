"""実行設定モジュール。

YAML の設定ファイルは次の2セクションからなります。

    measure:   # MeasureSpec のパラメータ
      katz_gamma: 2.0
      epsilon: 0.5
    run:       # 実行時の既定値
      seed: 42
      trials: 1000
      threads: 4

コマンドラインで明示したオプションは設定ファイルより優先されます。
"""

import json
import logging
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Union

import yaml

from tiestrength.core.axioms import BaselineMode
from tiestrength.core.errors import ConfigError
from tiestrength.core.measures import PARAMETER_FIELDS, MeasureSpec

logger = logging.getLogger(__name__)

# run セクションで指定できるキーと既定値
RUN_DEFAULTS: Dict[str, Any] = {
    "format": None,
    "seed": 0,
    "trials": 1000,
    "budget": 10000,
    "mode": "positive",
    "threads": None,
    "max_people": 8,
    "max_events": 6,
    "max_event_size": 5,
    "width_scale": 4.0,
}

# 値の型と下限（None は下限なし）
_RUN_INTS: Dict[str, Optional[int]] = {
    "seed": 0,
    "trials": 1,
    "budget": 1,
    "threads": 1,
    "max_people": 2,
    "max_events": 1,
    "max_event_size": 2,
}
_MEASURE_INTS = ("katz_max_walk_length", "max_iterations")


def _as_float(name: str, value: Any) -> float:
    # PyYAML は "1e-9" のように小数点のない指数表記を文字列として読む
    if isinstance(value, bool):
        raise ConfigError(f"{name} は数値である必要があります: {value!r}")
    try:
        return float(value)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"{name} は数値である必要があります: {value!r}") from e


def _as_int(name: str, value: Any, minimum: Optional[int] = None) -> int:
    number = _as_float(name, value)
    if not number.is_integer():
        raise ConfigError(f"{name} は整数である必要があります: {value!r}")
    result = int(number)
    if minimum is not None and result < minimum:
        raise ConfigError(f"{name} は{minimum}以上である必要があります: {value!r}")
    return result


def coerce_measure_value(name: str, value: Any) -> Any:
    """measure セクションの値を MeasureSpec のフィールドの型に揃えます。"""
    if name in _MEASURE_INTS:
        return _as_int(name, value)
    return _as_float(name, value)


def coerce_run_value(name: str, value: Any) -> Any:
    """run セクションの値を検証し、型を揃えます。

    Raises:
        ConfigError: 型や値の範囲が不正な場合
    """
    if value is None and RUN_DEFAULTS[name] is None:
        return None
    if name in _RUN_INTS:
        return _as_int(name, value, _RUN_INTS[name])
    if name == "width_scale":
        number = _as_float(name, value)
        if not number > 0:
            raise ConfigError(f"width_scale は正の値である必要があります: {value!r}")
        return number
    if name == "mode":
        choices = [m.value for m in BaselineMode]
        if value not in choices:
            raise ConfigError(f"mode は {choices} のいずれかである必要があります: {value!r}")
        return value
    if name == "format":
        if value is not None and not isinstance(value, str):
            raise ConfigError(f"format は文字列である必要があります: {value!r}")
        return value
    return value


@dataclass
class FileConfig:
    """設定ファイルの内容。"""

    measure: Dict[str, Any] = field(default_factory=dict)
    run: Dict[str, Any] = field(default_factory=dict)


def load_config_file(path: Union[str, Path]) -> FileConfig:
    """YAML の設定ファイルを読み込みます。

    Raises:
        ConfigError: 読み込めない場合、または未知のキーを含む場合
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
    except (OSError, yaml.YAMLError) as e:
        raise ConfigError(f"設定ファイルを読み込めません: {path}: {e}") from e

    if not isinstance(data, dict):
        raise ConfigError(f"設定ファイルの最上位はマッピングである必要があります: {path}")
    unknown = set(data) - {"measure", "run"}
    if unknown:
        raise ConfigError(f"設定ファイルに未知のセクションがあります: {sorted(unknown)}")

    measure = data.get("measure") or {}
    run = data.get("run") or {}
    if not isinstance(measure, dict) or not isinstance(run, dict):
        raise ConfigError(f"measure / run はマッピングである必要があります: {path}")
    unknown = set(measure) - set(PARAMETER_FIELDS)
    if unknown:
        raise ConfigError(f"measure に未知のキーがあります: {sorted(unknown)}")
    unknown = set(run) - set(RUN_DEFAULTS)
    if unknown:
        raise ConfigError(f"run に未知のキーがあります: {sorted(unknown)}")

    measure = {k: coerce_measure_value(k, v) for k, v in measure.items()}
    run = {k: coerce_run_value(k, v) for k, v in run.items()}

    logger.debug(f"設定ファイルを読み込みました: {path}")
    return FileConfig(measure=measure, run=run)


def resolve_run_option(
    name: str, explicit: Any, file_config: Optional[FileConfig] = None
) -> Any:
    """オプションの値を「明示指定 > 設定ファイル > 既定値」の順で決定します。

    Raises:
        ConfigError: 決定した値が不正な場合
    """
    if explicit is not None:
        return coerce_run_value(name, explicit)
    if file_config is not None and file_config.run.get(name) is not None:
        return coerce_run_value(name, file_config.run[name])
    if name == "threads":
        return os.cpu_count() or 1
    return RUN_DEFAULTS[name]


def resolve_spec(
    kind: str,
    overrides: Mapping[str, Any],
    file_config: Optional[FileConfig] = None,
) -> MeasureSpec:
    """尺度名・明示パラメータ・設定ファイルから MeasureSpec を作成します。

    Raises:
        ConfigError: 尺度名やパラメータが不正な場合
    """
    params: Dict[str, Any] = {}
    if file_config is not None:
        params.update(file_config.measure)
    params.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return MeasureSpec(kind=kind, **params)  # type: ignore[arg-type]
    except TypeError as e:
        raise ConfigError(f"MeasureSpec のパラメータが不正です: {e}") from e


@dataclass
class RunConfig:
    """1回の実行の完全な設定。

    Attributes:
        command: サブコマンド名
        input: 入力ファイル
        input_format: 入力形式
        specs: 使用する尺度（既定値を展開済み）
        seed: 乱数シード
        trials: 公理検査の試行回数
        budget: 反例探索の上限
        baseline_mode: A2 の判定モード
        threads: スレッド数
        outputs: 出力ファイル
        options: その他のオプション
    """

    command: str
    input: Optional[str] = None
    input_format: Optional[str] = None
    specs: List[MeasureSpec] = field(default_factory=list)
    seed: Optional[int] = None
    trials: Optional[int] = None
    budget: Optional[int] = None
    baseline_mode: Optional[str] = None
    threads: int = 1
    outputs: Dict[str, str] = field(default_factory=dict)
    options: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["specs"] = [spec.to_dict() for spec in self.specs]
        return data

    def to_json(self) -> str:
        """キーをソートした1行の JSON。"""
        return json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False)

    def log(self) -> None:
        logger.info(f"RunConfig: {self.to_json()}")
