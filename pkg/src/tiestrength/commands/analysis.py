"""尺度どうしの比較とデータの概観を表示するコマンド。"""

import logging
import math
from typing import Any, Optional, Tuple

import click
from rich.table import Table

from tiestrength.commands.common import (
    console,
    file_config,
    handle_errors,
    input_options,
    load_input,
    parameter_options,
    parse_measures,
    threads_option,
)
from tiestrength.core.graph import event_size_histogram
from tiestrength.core.ingest import export_histogram, infer_format
from tiestrength.core.measures import MeasureKind
from tiestrength.core.stats import tau_matrix, write_tau_matrix
from tiestrength.utils.config import RunConfig, resolve_run_option, resolve_spec

logger = logging.getLogger(__name__)


@click.command(name="tau")
@input_options
@click.option(
    "--measure",
    "-m",
    "measures",
    multiple=True,
    help="比較する尺度（複数指定・カンマ区切り可。デフォルト: 全尺度）",
)
@parameter_options
@click.option(
    "--wide",
    is_flag=True,
    help="共通イベントのないペアも含めた全ペアで比較する",
)
@click.option(
    "--output",
    "-o",
    type=click.Path(dir_okay=False),
    default=None,
    help="τ 行列の CSV 出力先",
)
@threads_option
@click.pass_context
def tau(
    ctx: click.Context,
    input_path: str,
    input_format: Optional[str],
    measures: Tuple[str, ...],
    wide: bool,
    output: Optional[str],
    threads: Optional[int],
    **params: Any,
) -> None:
    """尺度どうしの Kendall の τ-b 行列を求めます。"""
    config = file_config(ctx)
    with handle_errors():
        kinds = parse_measures(measures) if measures else list(MeasureKind)
        specs = [resolve_spec(kind.value, params, config) for kind in kinds]
        threads = resolve_run_option("threads", threads, config)
        input_format = resolve_run_option("format", input_format, config)
        RunConfig(
            command="tau",
            input=input_path,
            input_format=infer_format(input_path, input_format),
            specs=specs,
            threads=threads,
            outputs={"matrix": output} if output else {},
            options={"wide": wide},
        ).log()

        _, g = load_input(input_path, input_format)
        matrix = tau_matrix(g, specs, wide=wide, threads=threads)
        if output:
            write_tau_matrix(matrix, output)

    table = Table(title="Kendall の τ-b")
    table.add_column("尺度", style="cyan")
    for kind in matrix.kinds:
        table.add_column(kind.value, justify="right")
    for kind, row in zip(matrix.kinds, matrix.values):
        table.add_row(
            kind.value, *("NA" if math.isnan(v) else f"{v:.2f}" for v in row)
        )
    console.print(table)

    least = matrix.least_correlated()
    if least is not None:
        console.print(f"他の尺度との相関が最も低い尺度: {least.display_name}")
    for kind, reason in matrix.missing.items():
        console.print(f"{kind.value}: 計算できませんでした ({reason})", markup=False)


@click.command(name="histogram")
@input_options
@click.option(
    "--output",
    "-o",
    type=click.Path(dir_okay=False),
    default=None,
    help="ヒストグラムの CSV 出力先 (size,events)",
)
@click.pass_context
def histogram(
    ctx: click.Context,
    input_path: str,
    input_format: Optional[str],
    output: Optional[str],
) -> None:
    """イベントの参加人数ごとのイベント数を表示します。"""
    config = file_config(ctx)
    with handle_errors():
        input_format = resolve_run_option("format", input_format, config)
        RunConfig(
            command="histogram",
            input=input_path,
            input_format=infer_format(input_path, input_format),
            outputs={"histogram": output} if output else {},
        ).log()

        _, g = load_input(input_path, input_format)
        counts = event_size_histogram(g)
        if output:
            export_histogram(counts, output)

    table = Table(title=f"イベントの参加人数（{g.num_events} 件）")
    table.add_column("人数", justify="right", style="cyan")
    table.add_column("イベント数", justify="right", style="green")
    for size, count in sorted(counts.items()):
        table.add_row(str(size), str(count))
    console.print(table)
