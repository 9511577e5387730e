#!/usr/bin/env python
"""Tie strength 推定ツールの CLI。"""

import sys
from typing import Optional

import click
from rich.console import Console

from tiestrength import __version__
from tiestrength.commands.analysis import histogram, tau
from tiestrength.commands.axioms import axioms, replay
from tiestrength.commands.census import conflicts, linext, order_census
from tiestrength.commands.common import handle_errors
from tiestrength.commands.compute import compute, dot
from tiestrength.utils.config import load_config_file
from tiestrength.utils.logger import setup_logging

# コンソール設定
console = Console(stderr=True)


@click.group()
@click.version_option(version=__version__)
@click.option("--verbose", "-v", is_flag=True, help="Enable verbose output.")
@click.option(
    "--log-file",
    type=click.Path(dir_okay=False),
    default=None,
    help="詳細ログの出力先ファイル",
)
@click.option(
    "--config",
    "config_path",
    type=click.Path(dir_okay=False),
    default=None,
    help="尺度パラメータと実行時の既定値を記述した YAML ファイル",
)
@click.pass_context
def cli(
    ctx: click.Context,
    verbose: bool,
    log_file: Optional[str],
    config_path: Optional[str],
) -> None:
    """Person x event logs から tie strength を推定します。

    尺度の計算、公理の検査、半順序との比較などをサブコマンドで実行します。
    """
    # コンテキストオブジェクトにオプションを保存
    ctx.ensure_object(dict)
    ctx.obj["VERBOSE"] = verbose
    setup_logging(verbose, log_file)
    with handle_errors():
        ctx.obj["CONFIG"] = load_config_file(config_path) if config_path else None


# サブコマンドの登録
cli.add_command(compute)
cli.add_command(dot)
cli.add_command(axioms)
cli.add_command(replay)
cli.add_command(order_census)
cli.add_command(conflicts)
cli.add_command(linext)
cli.add_command(tau)
cli.add_command(histogram)


def main() -> int:
    """CLIエントリポイント。"""
    try:
        result = cli(standalone_mode=False)
        return result if isinstance(result, int) else 0
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.Abort:
        console.print("[bold red]中断しました[/bold red]")
        return 1
    except Exception as e:
        console.print(f"[bold red]Error: {e}[/bold red]")
        return 1


if __name__ == "__main__":
    sys.exit(main())
