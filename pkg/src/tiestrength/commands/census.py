"""半順序に関する集計コマンド。"""

import logging
from typing import Any, Optional

import click
from rich.table import Table

from tiestrength.commands.common import (
    console,
    file_config,
    handle_errors,
    input_options,
    load_input,
    measure_option,
    parameter_options,
    threads_option,
)
from tiestrength.core.graph import tie_profiles
from tiestrength.core.ingest import infer_format
from tiestrength.core.measures import score_all
from tiestrength.core.order import (
    CensusResult,
    append_census_record,
    build_linear_extension,
    conflict_census,
    incomparability_census,
    verify_linear_extension,
)
from tiestrength.utils.config import RunConfig, resolve_run_option, resolve_spec

logger = logging.getLogger(__name__)

# 等しいプロファイルの扱い（集計結果の横に表示する）
EQUAL_PROFILES_NOTE = "equal profiles count as comparable"

_label_option = click.option(
    "--label", default=None, help="集計結果に付けるラベル（デフォルト: 入力ファイル名）"
)
_append_option = click.option(
    "--append",
    "append_path",
    type=click.Path(dir_okay=False),
    default=None,
    help="集計結果を追記する CSV (label,total,count,percentage)",
)


def _finish(
    result: CensusResult,
    noun: str,
    append_path: Optional[str],
    note: Optional[str] = None,
) -> None:
    line = f"{result.total} pairs, {result.count} {noun} ({result.percentage:.2f}%)"
    console.print(f"{line}; {note}" if note else line)
    if append_path:
        append_census_record(result, append_path)
        logger.info(f"集計結果を追記しました: {append_path}")


@click.command(name="order-census")
@input_options
@_label_option
@_append_option
@threads_option
@click.pass_context
def order_census(
    ctx: click.Context,
    input_path: str,
    input_format: Optional[str],
    label: Optional[str],
    append_path: Optional[str],
    threads: Optional[int],
) -> None:
    """半順序で比較できないタイペアを数えます。"""
    config = file_config(ctx)
    with handle_errors():
        threads = resolve_run_option("threads", threads, config)
        input_format = resolve_run_option("format", input_format, config)
        RunConfig(
            command="order-census",
            input=input_path,
            input_format=infer_format(input_path, input_format),
            threads=threads,
            outputs={"append": append_path} if append_path else {},
            options={"label": label},
        ).log()

        _, g = load_input(input_path, input_format)
        result = incomparability_census(
            g, threads=threads, label=label or click.format_filename(input_path)
        )
        _finish(result, "incomparable", append_path, EQUAL_PROFILES_NOTE)


@click.command(name="conflicts")
@input_options
@measure_option
@parameter_options
@_label_option
@_append_option
@threads_option
@click.pass_context
def conflicts(
    ctx: click.Context,
    input_path: str,
    input_format: Optional[str],
    measure: str,
    label: Optional[str],
    append_path: Optional[str],
    threads: Optional[int],
    **params: Any,
) -> None:
    """半順序と尺度の順位が食い違うタイペアを数えます。"""
    config = file_config(ctx)
    with handle_errors():
        spec = resolve_spec(measure, params, config)
        threads = resolve_run_option("threads", threads, config)
        input_format = resolve_run_option("format", input_format, config)
        RunConfig(
            command="conflicts",
            input=input_path,
            input_format=infer_format(input_path, input_format),
            specs=[spec],
            threads=threads,
            outputs={"append": append_path} if append_path else {},
            options={"label": label},
        ).log()

        _, g = load_input(input_path, input_format)
        scores = score_all(g, spec, threads=threads)
        result = conflict_census(
            g,
            scores,
            threads=threads,
            label=label or f"{click.format_filename(input_path)}:{spec.kind.value}",
        )
        _finish(result, "conflicts", append_path)
        console.print(f"{result.weak_disagreements} weak disagreements")


@click.command(name="linext")
@input_options
@click.option(
    "--output",
    "-o",
    type=click.Path(dir_okay=False),
    default=None,
    help="線形拡大の CSV 出力先 (rank,profile,value,decimal)",
)
@click.option("--top", type=click.IntRange(min=0), default=10, help="表示する上位件数")
@click.pass_context
def linext(
    ctx: click.Context,
    input_path: str,
    input_format: Optional[str],
    output: Optional[str],
    top: int,
) -> None:
    """入力に現れるタイプロファイルの線形拡大を構成します。

    空のプロファイルも含めて値を割り当て、半順序との整合を確認します。
    """
    config = file_config(ctx)
    with handle_errors():
        input_format = resolve_run_option("format", input_format, config)
        RunConfig(
            command="linext",
            input=input_path,
            input_format=infer_format(input_path, input_format),
            outputs={"extension": output} if output else {},
            options={"top": top},
        ).log()

        _, g = load_input(input_path, input_format)
        profiles = list(tie_profiles(g).values())
        table = build_linear_extension([(), *profiles])
        valid, violations = verify_linear_extension(table)
        if output:
            table.write_csv(output)

    # 強い順に表示する
    ranking = table.ranking()[::-1]
    view = Table(title=f"線形拡大（{len(table)} 種類のプロファイル）")
    view.add_column("順位", justify="right")
    view.add_column("プロファイル", style="cyan")
    view.add_column("値", justify="right", style="green")
    for rank, profile in enumerate(ranking[:top], 1):
        view.add_row(str(rank), str(profile), str(table.value(profile)))
    console.print(view)

    if not valid:
        for a, b in violations:
            logger.error(f"順序の違反: {a} は {b} より上である必要があります")
        raise click.ClickException(f"線形拡大の検証に失敗しました: {len(violations)} 件")
    console.print("半順序との整合を確認しました")
