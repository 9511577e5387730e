"""ロギングユーティリティモジュール。"""

import logging
from pathlib import Path
from typing import Optional, Union

from rich.console import Console
from rich.logging import RichHandler

# コンソール出力用のリッチハンドラー（ログは標準エラーへ）
console = Console(stderr=True)

# setup_logging が追加したハンドラーの目印
_HANDLER_MARK = "_tiestrength_handler"


def setup_logging(
    verbose: bool = False, log_file: Optional[Union[str, Path]] = None
) -> logging.Logger:
    """アプリケーションのロギング設定を行う。

    Args:
        verbose: 詳細なログ出力を有効にするかどうか
        log_file: ログファイルのパス（省略時はファイルに出力しない）

    Returns:
        設定済みのロガーオブジェクト
    """
    root_logger = logging.getLogger()
    root_logger.setLevel(logging.DEBUG if verbose else logging.INFO)

    # 同じプロセスで再設定された場合は以前のハンドラーを外す
    for handler in list(root_logger.handlers):
        if getattr(handler, _HANDLER_MARK, False):
            root_logger.removeHandler(handler)
            handler.close()

    # リッチハンドラーを設定 (コンソール出力用)
    console_handler = RichHandler(
        console=console,
        rich_tracebacks=True,
        show_time=False,
        show_path=False,
    )
    console_handler.setLevel(logging.DEBUG if verbose else logging.INFO)
    console_handler.setFormatter(logging.Formatter("%(message)s"))
    setattr(console_handler, _HANDLER_MARK, True)
    root_logger.addHandler(console_handler)

    if log_file is not None:
        path = Path(log_file)
        path.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(path, encoding="utf-8")
        file_handler.setLevel(logging.DEBUG)  # ファイルには常に詳細なログを出力
        file_handler.setFormatter(
            logging.Formatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s")
        )
        setattr(file_handler, _HANDLER_MARK, True)
        root_logger.addHandler(file_handler)
        # ファイルには詳細ログを残すため、ルートは DEBUG まで通す
        root_logger.setLevel(logging.DEBUG)

    logger = logging.getLogger("tiestrength")
    if log_file is not None:
        logger.debug(f"ログファイル: {log_file}")
    return logger
