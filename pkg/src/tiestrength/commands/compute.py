"""タイのスコアを計算して書き出すコマンド。"""

import logging
from typing import Any, Optional, Tuple

import click

from tiestrength.commands.common import (
    console,
    file_config,
    handle_errors,
    input_options,
    load_input,
    measure_option,
    parameter_options,
    parse_pairs,
    threads_option,
)
from tiestrength.core.ingest import export_dot, export_edges, infer_format
from tiestrength.core.measures import WIDE_SUPPORT_KINDS, score_all
from tiestrength.utils.config import RunConfig, resolve_run_option, resolve_spec

logger = logging.getLogger(__name__)


@click.command(name="compute")
@input_options
@measure_option
@parameter_options
@click.option(
    "--output",
    "-o",
    required=True,
    type=click.Path(dir_okay=False),
    help="エッジリストの出力先 (person_a,person_b,score)",
)
@click.option(
    "--pair",
    "pairs",
    multiple=True,
    help="共通イベントがなくても評価するペア 'a,b'（jaccard / preferential / rwr / simrank）",
)
@threads_option
@click.pass_context
def compute(
    ctx: click.Context,
    input_path: str,
    input_format: Optional[str],
    measure: str,
    output: str,
    pairs: Tuple[str, ...],
    threads: Optional[int],
    **params: Any,
) -> None:
    """全タイのスコアを計算し、エッジリストとして書き出します。"""
    config = file_config(ctx)
    with handle_errors():
        spec = resolve_spec(measure, params, config)
        threads = resolve_run_option("threads", threads, config)
        input_format = resolve_run_option("format", input_format, config)
        extra_pairs = parse_pairs(pairs)
        if extra_pairs and spec.kind not in WIDE_SUPPORT_KINDS:
            logger.warning(
                f"{spec.kind.display_name} は共通イベントのないペアを0とするため "
                "--pair を無視します"
            )
        RunConfig(
            command="compute",
            input=input_path,
            input_format=infer_format(input_path, input_format),
            specs=[spec],
            threads=threads,
            outputs={"edges": output},
            options={"pairs": [list(p) for p in extra_pairs]},
        ).log()

        _, g = load_input(input_path, input_format)
        table = score_all(g, spec, pairs=extra_pairs or None, threads=threads)
        if table.residual is not None:
            logger.debug(
                f"{spec.kind.display_name}: 残差={table.residual:.3g}, "
                f"反復={table.iterations}"
            )
        export_edges(table, output)

    console.print(f"{len(table)} 件のタイのスコアを書き出しました: {output}")


@click.command(name="dot")
@input_options
@measure_option
@parameter_options
@click.option(
    "--output",
    "-o",
    required=True,
    type=click.Path(dir_okay=False),
    help="グラフ記述ファイルの出力先",
)
@click.option(
    "--width-scale",
    type=float,
    default=None,
    help="最大スコアのタイの線の太さ（デフォルト: 4.0）",
)
@threads_option
@click.pass_context
def dot(
    ctx: click.Context,
    input_path: str,
    input_format: Optional[str],
    measure: str,
    output: str,
    width_scale: Optional[float],
    threads: Optional[int],
    **params: Any,
) -> None:
    """タイの強さを線の太さで表したグラフ記述を書き出します。"""
    config = file_config(ctx)
    with handle_errors():
        spec = resolve_spec(measure, params, config)
        threads = resolve_run_option("threads", threads, config)
        input_format = resolve_run_option("format", input_format, config)
        width_scale = resolve_run_option("width_scale", width_scale, config)
        RunConfig(
            command="dot",
            input=input_path,
            input_format=infer_format(input_path, input_format),
            specs=[spec],
            threads=threads,
            outputs={"dot": output},
            options={"width_scale": width_scale},
        ).log()

        _, g = load_input(input_path, input_format)
        table = score_all(g, spec, threads=threads)
        export_dot(table, output, width_scale=width_scale)

    console.print(f"グラフ記述を書き出しました: {output}")
