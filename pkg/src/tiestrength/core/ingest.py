"""イベントログの読み込みと分析結果の書き出しを行うモジュール。

入力形式:
    jsonl: 1行1イベント ``{"event_id": ..., "participants": [...], "time": ...}``
    csv:   1行1参加 ``event_id,person[,time]``（先頭のヘッダー行は任意）
"""

import csv
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Iterator, List, Mapping, Optional, Tuple, Union

import jinja2

from tiestrength.core.errors import ConfigError, InputError
from tiestrength.core.measures import TieScoreTable
from tiestrength.core.records import EventRecord

logger = logging.getLogger(__name__)

FORMATS = ("jsonl", "csv")

_EXTENSIONS = {
    ".jsonl": "jsonl",
    ".ndjson": "jsonl",
    ".json": "jsonl",
    ".csv": "csv",
}

EDGE_HEADER = ["person_a", "person_b", "score"]

TEMPLATE_DIR = Path(__file__).parent.parent / "templates"


def infer_format(path: Union[str, Path], fmt: Optional[str] = None) -> str:
    """入力形式を決定します（指定がなければ拡張子から推定）。

    Raises:
        ConfigError: 形式を決められない場合
    """
    if fmt is not None:
        fmt = fmt.lower()
        if fmt not in FORMATS:
            raise ConfigError(f"未知の入力形式です: {fmt} (選択肢: {', '.join(FORMATS)})")
        return fmt
    suffix = Path(path).suffix.lower()
    if suffix not in _EXTENSIONS:
        raise ConfigError(
            f"拡張子から入力形式を推定できません: {path} (--format を指定してください)"
        )
    return _EXTENSIONS[suffix]


def _parse_time(value: Any, where: str) -> Optional[int]:
    if value is None or value == "":
        return None
    if isinstance(value, bool):
        raise InputError(f"{where}: time は整数である必要があります: {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value.strip())
        except ValueError:
            pass
    raise InputError(f"{where}: time は整数である必要があります: {value!r}")


def _dedup(event_id: str, participants: List[str]) -> Tuple[str, ...]:
    unique: List[str] = []
    for label in participants:
        if label in unique:
            logger.warning(f"イベント {event_id} の重複参加者をまとめました: {label}")
            continue
        unique.append(label)
    if not unique:
        logger.warning(f"参加者のいないイベントです: {event_id}")
    return tuple(unique)


def _iter_jsonl(path: Path) -> Iterator[EventRecord]:
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            where = f"{path}:{lineno}"
            try:
                data = json.loads(line)
            except json.JSONDecodeError as e:
                raise InputError(f"{where}: JSON として読めません: {e.msg}") from e
            if not isinstance(data, dict):
                raise InputError(f"{where}: 1行に1つのオブジェクトが必要です")

            event_id = data.get("event_id")
            if event_id is None or str(event_id) == "":
                raise InputError(f"{where}: event_id がありません")
            participants = data.get("participants", [])
            if not isinstance(participants, list) or not all(
                isinstance(p, str) and p for p in participants
            ):
                raise InputError(f"{where}: participants は空でない文字列のリストです")

            yield EventRecord(
                event_id=str(event_id),
                participants=_dedup(str(event_id), participants),
                time=_parse_time(data.get("time"), where),
            )


@dataclass
class _PendingEvent:
    participants: List[str]
    time: Optional[int]


def _iter_csv(path: Path) -> Iterator[EventRecord]:
    """1行1参加の CSV を読みます。

    空行と `#` で始まる行は読み飛ばし、最初のデータ行が `event_id` で
    始まる場合はヘッダーとして扱います。
    """
    pending: Dict[str, _PendingEvent] = {}
    seen_row = False
    with open(path, "r", encoding="utf-8", newline="") as f:
        for lineno, row in enumerate(csv.reader(f), 1):
            if not row or all(not cell.strip() for cell in row):
                continue
            where = f"{path}:{lineno}"
            cells = [cell.strip() for cell in row]
            if cells[0].startswith("#"):
                continue
            if not seen_row:
                seen_row = True
                if cells[0].lower() == "event_id":
                    continue
            if len(cells) > 3:
                raise InputError(f"{where}: 列が多すぎます（event_id,person[,time]）")
            event_id = cells[0]
            if not event_id:
                raise InputError(f"{where}: event_id がありません")
            person = cells[1] if len(cells) > 1 else ""
            time = _parse_time(cells[2] if len(cells) > 2 else None, where)

            event = pending.setdefault(event_id, _PendingEvent([], time))
            if time is not None:
                if event.time is None:
                    event.time = time
                elif event.time != time:
                    logger.warning(
                        f"{where}: イベント {event_id} の時刻が食い違います"
                        f"（{event.time} を採用）"
                    )
            # 人物が空の行は参加者のいないイベントを表す
            if person:
                event.participants.append(person)

    for event_id, event in pending.items():
        yield EventRecord(
            event_id=event_id,
            participants=_dedup(event_id, event.participants),
            time=event.time,
        )


def parse_events(
    path: Union[str, Path], fmt: Optional[str] = None
) -> List[EventRecord]:
    """イベントログを読み込みます。

    Args:
        path: 入力ファイル
        fmt: "jsonl" または "csv"（省略時は拡張子から推定）

    Returns:
        ファイル順のイベントレコード

    Raises:
        ConfigError: 形式を決められない場合
        InputError: ファイルが読めない、または内容が不正な場合（行番号付き）
    """
    path = Path(path)
    fmt = infer_format(path, fmt)
    if not path.is_file():
        raise InputError(f"入力ファイルが見つかりません: {path}")
    reader = _iter_jsonl if fmt == "jsonl" else _iter_csv
    records = list(reader(path))
    logger.info(f"{len(records)} 件のイベントを読み込みました: {path}")
    return records


def export_edges(scores: TieScoreTable, path: Union[str, Path]) -> None:
    """スコア表を ``person_a,person_b,score`` 形式で書き出します。

    person_a < person_b（辞書順）で、行はラベルの組の昇順です。
    """
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(EDGE_HEADER)
        for (a, b), score in scores.labeled().items():
            writer.writerow([a, b, f"{score:.9g}"])
    logger.debug(f"{len(scores)} 件のタイを書き出しました: {path}")


def read_edges(path: Union[str, Path]) -> Dict[Tuple[str, str], float]:
    """``export_edges`` で書き出したファイルを読み込みます。"""
    edges: Dict[Tuple[str, str], float] = {}
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header != EDGE_HEADER:
            raise InputError(f"エッジファイルのヘッダーが不正です: {path}")
        for lineno, row in enumerate(reader, 2):
            if len(row) != 3:
                raise InputError(f"{path}:{lineno}: 3列が必要です")
            try:
                edges[(row[0], row[1])] = float(row[2])
            except ValueError as e:
                raise InputError(f"{path}:{lineno}: スコアが数値ではありません") from e
    return edges


def _dot_escape(value: str) -> str:
    return str(value).replace("\\", "\\\\").replace('"', '\\"')


def _dot_environment() -> jinja2.Environment:
    env = jinja2.Environment(
        loader=jinja2.FileSystemLoader(str(TEMPLATE_DIR)),
        trim_blocks=True,
        lstrip_blocks=True,
        keep_trailing_newline=True,
    )
    env.filters["dot_escape"] = _dot_escape
    return env


def render_dot(
    scores: TieScoreTable, width_scale: float = 4.0, name: str = "ties"
) -> str:
    """スコア表を無向グラフ記述に変換します。

    線の太さは width_scale · score / 最大スコア です。

    Raises:
        ConfigError: width_scale が正でない場合
    """
    if not width_scale > 0:
        raise ConfigError(f"width_scale は正の値である必要があります: {width_scale}")

    labeled = scores.labeled()
    if not labeled:
        logger.warning("スコア表が空のため、空のグラフを出力します")
    top = max(labeled.values(), default=0.0)
    if labeled and top <= 0:
        logger.warning("最大スコアが0以下のため、線の太さを0にします")

    edges = [
        {
            "source": a,
            "target": b,
            "width": f"{(width_scale * score / top) if top > 0 else 0.0:.6g}",
        }
        for (a, b), score in labeled.items()
    ]
    nodes = sorted({label for pair in labeled for label in pair})
    template = _dot_environment().get_template("graph.dot.j2")
    return template.render(name=name, nodes=nodes, edges=edges)


def export_dot(
    scores: TieScoreTable, path: Union[str, Path], width_scale: float = 4.0
) -> None:
    """スコア表をグラフ記述ファイルとして書き出します。"""
    content = render_dot(scores, width_scale)
    with open(path, "w", encoding="utf-8") as f:
        f.write(content)
    logger.debug(f"グラフ記述を書き出しました: {path}")


def export_histogram(histogram: Mapping[int, int], path: Union[str, Path]) -> None:
    """イベント人数のヒストグラムを ``size,events`` 形式で書き出します。"""
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["size", "events"])
        for size, count in sorted(histogram.items()):
            writer.writerow([size, count])
