"""イベントレコード定義モジュール。"""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple


@dataclass(frozen=True)
class EventRecord:
    """1件のイベント（取り込み単位）。

    Attributes:
        event_id: イベントID
        participants: 参加者ラベルのタプル（入力順）
        time: 任意のタイムスタンプ（整数、順序のみ意味を持つ）
    """

    event_id: str
    participants: Tuple[str, ...] = field(default_factory=tuple)
    time: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        """JSON/YAML 出力用の辞書に変換します。"""
        record: Dict[str, Any] = {
            "event_id": self.event_id,
            "participants": list(self.participants),
        }
        if self.time is not None:
            record["time"] = self.time
        return record

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "EventRecord":
        """``to_dict`` の逆変換。"""
        return cls(
            event_id=str(data["event_id"]),
            participants=tuple(str(p) for p in data.get("participants", [])),
            time=data.get("time"),
        )
