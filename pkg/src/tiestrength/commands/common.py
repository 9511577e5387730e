"""サブコマンド共通のオプションとヘルパー。"""

import logging
from contextlib import contextmanager
from typing import Any, Callable, Iterator, List, Optional, Sequence, Tuple

import click
from rich.console import Console

from tiestrength.core.errors import ConfigError, TieStrengthError
from tiestrength.core.graph import BipartiteGraph, build_graph
from tiestrength.core.ingest import FORMATS, parse_events
from tiestrength.core.measures import MeasureKind
from tiestrength.core.records import EventRecord
from tiestrength.utils.config import FileConfig

logger = logging.getLogger(__name__)

# 結果表示用（ログは標準エラーに出る）
console = Console(highlight=False)

F = Callable[..., Any]


class CommandError(click.ClickException):
    """ドメイン例外を終了コード付きで CLI に伝える例外。"""

    def __init__(self, message: str, exit_code: int):
        super().__init__(message)
        self.exit_code = exit_code


@contextmanager
def handle_errors() -> Iterator[None]:
    """TieStrengthError を CommandError に変換します。"""
    try:
        yield
    except TieStrengthError as e:
        logger.debug("エラーの詳細", exc_info=True)
        raise CommandError(str(e), e.exit_code) from e


def file_config(ctx: click.Context) -> Optional[FileConfig]:
    """グループで読み込んだ設定ファイル（なければ None）。"""
    obj = ctx.obj or {}
    config = obj.get("CONFIG")
    return config if isinstance(config, FileConfig) else None


def _apply(func: F, options: Sequence[Callable[[F], F]]) -> F:
    for option in reversed(options):
        func = option(func)
    return func


def input_options(func: F) -> F:
    """入力ファイルの引数と --format。"""
    return _apply(
        func,
        [
            click.argument(
                "input_path", metavar="INPUT", type=click.Path(dir_okay=False)
            ),
            click.option(
                "--format",
                "input_format",
                type=click.Choice(FORMATS),
                default=None,
                help="入力形式（省略時は拡張子から推定）",
            ),
        ],
    )


def measure_option(func: F) -> F:
    """尺度の指定（1つ）。"""
    return click.option(
        "--measure",
        "-m",
        "measure",
        required=True,
        help=f"尺度名 ({', '.join(k.value for k in MeasureKind)})",
    )(func)


def parameter_options(func: F) -> F:
    """MeasureSpec の各パラメータ。省略時は設定ファイルか既定値を使います。"""
    return _apply(
        func,
        [
            click.option("--katz-gamma", type=float, default=None, help="Katz の減衰底"),
            click.option(
                "--katz-max-walk-length",
                "--katz-max-len",
                "katz_max_walk_length",
                type=int,
                default=None,
                help="Katz で数えるウォーク長の上限（偶数）",
            ),
            click.option(
                "--rwr-alpha", type=float, default=None, help="RWR のリスタート確率"
            ),
            click.option(
                "--simrank-gamma", type=float, default=None, help="SimRank の減衰係数"
            ),
            click.option(
                "--epsilon", type=float, default=None, help="Proportional / Temporal の ε"
            ),
            click.option(
                "--temporal-init", type=float, default=None, help="Temporal の初期値"
            ),
            click.option("--tolerance", type=float, default=None, help="収束判定値"),
            click.option(
                "--max-iterations", type=int, default=None, help="最大反復回数"
            ),
        ],
    )


def threads_option(func: F) -> F:
    return click.option(
        "--threads",
        type=click.IntRange(min=1),
        default=None,
        help="並列計算のスレッド数（デフォルト: CPU数）",
    )(func)


def load_input(
    input_path: str, input_format: Optional[str]
) -> Tuple[List[EventRecord], BipartiteGraph]:
    """イベントログを読み込み、グラフを構築します。"""
    records = parse_events(input_path, input_format)
    return records, build_graph(records)


def parse_pairs(values: Sequence[str]) -> List[Tuple[str, str]]:
    """``a,b`` 形式のペア指定を分解します。"""
    pairs = []
    for value in values:
        parts = [part.strip() for part in value.split(",")]
        if len(parts) != 2 or not all(parts):
            raise ConfigError(f"ペアは 'a,b' の形式で指定してください: {value}")
        pairs.append((parts[0], parts[1]))
    return pairs


def parse_measures(values: Sequence[str]) -> List[MeasureKind]:
    """複数指定・カンマ区切りの尺度名を展開します。"""
    kinds = []
    for value in values:
        for name in value.split(","):
            if name.strip():
                kinds.append(MeasureKind.parse(name.strip()))
    return kinds
