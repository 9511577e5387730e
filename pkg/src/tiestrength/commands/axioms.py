"""尺度が公理を満たすかを検査するコマンド。"""

import logging
from typing import Any, Optional

import click
from rich.table import Table

from tiestrength.commands.common import (
    console,
    file_config,
    handle_errors,
    measure_option,
    parameter_options,
    threads_option,
)
from tiestrength.core.axioms import (
    AxiomId,
    AxiomReport,
    BaselineMode,
    Counterexample,
    GraphSampler,
    check_all_axioms,
    find_counterexample,
    load_counterexample,
    replay_counterexample,
    write_counterexample,
    write_report,
)
from tiestrength.core.ingest import FORMATS, infer_format, parse_events
from tiestrength.utils.config import RunConfig, resolve_run_option, resolve_spec

logger = logging.getLogger(__name__)


def _print_report(report: AxiomReport) -> None:
    table = Table(title="公理の検査結果")
    table.add_column("尺度", style="cyan")
    for axiom in AxiomId:
        table.add_column(axiom.value, justify="center")
    table.add_row(report.spec.kind.display_name, *report.symbols())
    console.print(table)

    for axiom in AxiomId:
        verdict = report.verdicts[axiom]
        if verdict.reason:
            console.print(f"{axiom.value}: 適用できません ({verdict.reason})")
    for discrepancy in report.discrepancies():
        console.print(f"公表表との差異: {discrepancy.describe()}")
    for lemma in report.lemmas:
        if lemma.applicable:
            status = "成立" if lemma.passed else "不成立"
            console.print(f"{lemma.name}: {status} ({lemma.checked} 件)")


def _print_counterexample(cx: Counterexample) -> None:
    console.print(f"{cx.axiom.value} ({cx.axiom.title}) の反例:")
    for k, inst in enumerate(cx.instances, 1):
        events = ", ".join(
            f"{r.event_id}{{{','.join(r.participants)}}}" for r in inst.records
        )
        console.print(
            f"  [{k}] ペア={inst.pair[0]},{inst.pair[1]} "
            f"摂動={inst.perturbation.kind} イベント: {events or '(なし)'}",
            markup=False,
        )
    for key, value in cx.observed.items():
        console.print(f"  {key} = {value}", markup=False)


@click.command(name="axioms")
@click.argument(
    "input_path", metavar="[INPUT]", required=False, type=click.Path(dir_okay=False)
)
@click.option(
    "--format",
    "input_format",
    type=click.Choice(FORMATS),
    default=None,
    help="入力形式（省略時は拡張子から推定）",
)
@measure_option
@parameter_options
@click.option("--trials", type=click.IntRange(min=1), default=None, help="試行回数")
@click.option("--seed", type=click.IntRange(min=0), default=None, help="乱数シード")
@click.option(
    "--mode",
    type=click.Choice([m.value for m in BaselineMode]),
    default=None,
    help="A2 の判定モード（positive: 2人イベントで正, strict: 2人イベントでちょうど1）",
)
@click.option("--max-people", type=click.IntRange(min=2), default=None)
@click.option("--max-events", type=click.IntRange(min=1), default=None)
@click.option("--max-event-size", type=click.IntRange(min=2), default=None)
@click.option(
    "--axiom",
    type=click.Choice([a.value for a in AxiomId]),
    default=None,
    help="1つの公理だけ反例を探索する",
)
@click.option(
    "--budget",
    type=click.IntRange(min=1),
    default=None,
    help="--axiom 指定時に調べるインスタンス数の上限",
)
@click.option(
    "--shrink/--no-shrink", default=True, help="見つかった反例を縮小するかどうか"
)
@click.option(
    "--output",
    "-o",
    type=click.Path(dir_okay=False),
    default=None,
    help="レポート（--axiom 指定時は反例）の YAML 出力先",
)
@threads_option
@click.pass_context
def axioms(
    ctx: click.Context,
    input_path: Optional[str],
    input_format: Optional[str],
    measure: str,
    trials: Optional[int],
    seed: Optional[int],
    mode: Optional[str],
    max_people: Optional[int],
    max_events: Optional[int],
    max_event_size: Optional[int],
    axiom: Optional[str],
    budget: Optional[int],
    shrink: bool,
    output: Optional[str],
    threads: Optional[int],
    **params: Any,
) -> None:
    """ランダムな摂動で公理 A1〜A8 を検査し、判定を表示します。

    INPUT を指定すると、そのイベントログから選んだイベントの部分集合を
    基本グラフとして使います。違反は結果であり、終了コードは0です。
    """
    config = file_config(ctx)
    with handle_errors():
        spec = resolve_spec(measure, params, config)
        threads = resolve_run_option("threads", threads, config)
        seed = resolve_run_option("seed", seed, config)
        trials = resolve_run_option("trials", trials, config)
        budget = resolve_run_option("budget", budget, config)
        baseline_mode = BaselineMode(resolve_run_option("mode", mode, config))
        input_format = resolve_run_option("format", input_format, config)

        corpus = parse_events(input_path, input_format) if input_path else []
        sampler = GraphSampler(
            seed=seed,
            max_people=resolve_run_option("max_people", max_people, config),
            max_events=resolve_run_option("max_events", max_events, config),
            max_event_size=resolve_run_option("max_event_size", max_event_size, config),
            corpus=tuple(corpus),
        )
        RunConfig(
            command="axioms",
            input=input_path,
            input_format=infer_format(input_path, input_format) if input_path else None,
            specs=[spec],
            seed=seed,
            trials=trials,
            budget=budget if axiom else None,
            baseline_mode=baseline_mode.value,
            threads=threads,
            outputs={"report": output} if output else {},
            options={"sampler": sampler.to_dict(), "axiom": axiom, "shrink": shrink},
        ).log()

        if axiom is not None:
            cx = find_counterexample(
                AxiomId(axiom), spec, sampler, budget, baseline_mode
            )
            if cx is None:
                console.print(f"{axiom}: {budget} 件の中に反例は見つかりませんでした")
                return
            _print_counterexample(cx)
            if output:
                write_counterexample(cx, output)
            return

        report = check_all_axioms(
            spec, sampler, trials, baseline_mode, threads=threads, shrink=shrink
        )
        _print_report(report)
        if output:
            write_report(report, output)
            console.print(f"レポートを書き出しました: {output}")


@click.command(name="replay")
@click.argument("counterexample_path", type=click.Path(dir_okay=False))
def replay(counterexample_path: str) -> None:
    """保存した反例を再評価し、違反が再現するかを表示します。

    反例が再現しない場合は終了コード1で終了します。
    """
    with handle_errors():
        cx = load_counterexample(counterexample_path)
        RunConfig(
            command="replay",
            input=counterexample_path,
            specs=[cx.spec],
            baseline_mode=cx.mode.value,
        ).log()
        reproduced, observed = replay_counterexample(cx)

    for key, value in observed.items():
        console.print(f"  {key} = {value}", markup=False)
    if not reproduced:
        raise click.ClickException(f"{cx.axiom.value} の違反は再現しませんでした")
    console.print(f"{cx.axiom.value} の違反を再現しました")
