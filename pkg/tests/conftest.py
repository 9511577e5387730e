"""pytest共通設定"""
import json
import tempfile
from pathlib import Path
from typing import Callable, List, Optional, Sequence

import pytest

from tiestrength.core.graph import BipartiteGraph, build_graph
from tiestrength.core.records import EventRecord

SAMPLE_CORPUS = Path(__file__).parent.parent / "data" / "stage_sample.jsonl"


def make_graph(
    events: Sequence[Sequence[str]],
    times: Optional[Sequence[int]] = None,
    people: Optional[Sequence[str]] = None,
) -> BipartiteGraph:
    """参加者リストの列からグラフを作成する（イベントIDは E1, E2, ...）"""
    records = [
        EventRecord(
            f"E{k}", tuple(members), times[k - 1] if times is not None else k
        )
        for k, members in enumerate(events, 1)
    ]
    return build_graph(records, people=people)


@pytest.fixture
def temp_output_dir():
    """一時的な出力ディレクトリを提供するフィクスチャ"""
    with tempfile.TemporaryDirectory() as tmpdirname:
        yield Path(tmpdirname)


@pytest.fixture
def graph_factory() -> Callable[..., BipartiteGraph]:
    """参加者リストからグラフを作るフィクスチャ"""
    return make_graph


@pytest.fixture
def pair_event_graph() -> BipartiteGraph:
    """2人だけのイベントが1つあるグラフ"""
    return make_graph([["u", "v"]])


@pytest.fixture
def triangle_graph() -> BipartiteGraph:
    """3人のイベントが1つあるグラフ"""
    return make_graph([["a", "b", "c"]])


@pytest.fixture
def sample_corpus_path() -> Path:
    """同梱のサンプルコーパス"""
    return SAMPLE_CORPUS


@pytest.fixture
def write_jsonl(temp_output_dir) -> Callable[[List[dict], str], Path]:
    """イベントのリストを JSONL ファイルに書き出すフィクスチャ"""

    def _write(events: List[dict], name: str = "events.jsonl") -> Path:
        path = temp_output_dir / name
        with open(path, "w", encoding="utf-8") as f:
            for event in events:
                f.write(json.dumps(event, ensure_ascii=False) + "\n")
        return path

    return _write
