"""
steinberg-kernel 메인 진입점

시나리오 하나를 실행하고 JSON 리포트를 stdout (또는 --out) 에 쓴다.
로그는 stderr 로만 나간다.
"""

import argparse
import json
import logging
import sys
import time
from typing import Any, Callable, Dict, List, Optional, Tuple

import structlog

from . import __version__, zoo
from .config import KernelConfig
from .coset_table import todd_coxeter
from .errors import BudgetExceeded, ConfigError, KernelError, SelectorError
from .grading import verify_grading_suite
from .jordan import peirce, verify_jp_suite
from .matrices import IndexSet, el_group, split_index, verify_elementary_relations
from .models import ScenarioConfig, SuiteReport
from .pegroup import (
    alternating_group,
    group_analyze,
    matches_fingerprint,
    pe_group,
    pe_relative_kernel,
    symmetric_group,
    verify_pe_quotient,
    verify_weyl,
)
from .rootsys import verify_root_suite
from .scalars import verify_ring_axioms
from .steinberg import (
    KINDS,
    Presentation,
    compare_st2_redundancy,
    evaluate_el,
    evaluate_pe,
    exploratory_cases,
    kernel_centrality_report,
    make_presentation,
    run_exploratory,
    verify_b_words,
    verify_phi_triangle,
)
from .tkk import tkk_build, verify_psi, verify_tkk_suite

COMMANDS = ("verify", "enumerate", "coset", "export", "explore")

EXIT_PASS, EXIT_FAIL, EXIT_BUDGET, EXIT_SELECTOR = 0, 1, 2, 3

REFERENCE_GROUPS: Dict[str, Tuple[int, Callable[[], Any]]] = {
    "S3": (6, lambda: symmetric_group(3)),
    "A4": (12, lambda: alternating_group(4)),
    "S4": (24, lambda: symmetric_group(4)),
    "A5": (60, lambda: alternating_group(5)),
    "S5": (120, lambda: symmetric_group(5)),
    "A6": (360, lambda: alternating_group(6)),
    "S6": (720, lambda: symmetric_group(6)),
}


def configure_logging(level: str = "INFO", renderer: str = "console") -> None:
    """구조화된 로깅 설정 (stderr)"""
    final = (
        structlog.processors.JSONRenderer()
        if renderer == "json"
        else structlog.dev.ConsoleRenderer(colors=sys.stderr.isatty())
    )
    structlog.configure(
        processors=[
            structlog.processors.add_log_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.TimeStamper(fmt="%Y-%m-%d %H:%M:%S"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            final,
        ],
        wrapper_class=structlog.make_filtering_bound_logger(getattr(logging, level.upper(), logging.INFO)),
        context_class=dict,
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )


# ----- selector -----


def _ring(scenario: ScenarioConfig):
    return zoo.ring(scenario.ring, scenario.ring_file)


def _pair(scenario: ScenarioConfig, default: Optional[str] = None):
    kind = scenario.pair or default
    if kind is None:
        raise SelectorError(f"Command {scenario.command} needs --pair")
    return zoo.pair(kind, _ring(scenario), scenario.size_i, scenario.size_j, scenario.n)


def _presentation(scenario: ScenarioConfig, config: KernelConfig) -> Presentation:
    kind = scenario.presentation
    if kind not in KINDS:
        raise SelectorError(f"Unknown presentation {kind!r}; known: {', '.join(KINDS)}")
    if kind == "linear":
        return make_presentation("linear", ring=_ring(scenario), n=scenario.n, config=config)
    if kind == "rect-EJ":
        return make_presentation(
            "rect-EJ", ring=_ring(scenario), p=scenario.size_i, q=scenario.size_j, config=config
        )
    if kind == "jordan-St":
        grading = zoo.grading(_pair(scenario), config)
        return make_presentation("jordan-St", grading=grading, config=config)
    return make_presentation("stJ", pair=_pair(scenario, default="full"), config=config)


# ----- 명령 -----


def _verify(scenario: ScenarioConfig, config: KernelConfig) -> List[SuiteReport]:
    suite = scenario.suite
    if suite == "ring":
        return [verify_ring_axioms(_ring(scenario), config)]
    if suite == "E":
        return [verify_elementary_relations(_ring(scenario), IndexSet.range(scenario.n), "E", config=config)]
    if suite in ("EJ", "exc2", "generation"):
        left, right, index = split_index(scenario.size_i, scenario.size_j)
        return [verify_elementary_relations(_ring(scenario), index, suite, (left, right), config)]
    if suite == "jp":
        return [verify_jp_suite(_pair(scenario), config)]
    if suite == "roots":
        three = zoo.grading(_pair(scenario), config).three_grading
        return [verify_root_suite(three.root_system, "axioms")] + [
            verify_root_suite(three, name) for name in ("grading", "3gra1", "3gra2")
        ]
    if suite == "peirce":
        pair = _pair(scenario)
        grading = zoo.grading(pair, config)
        return [peirce(pair, e, config).report for e in grading.idempotents.values()]
    if suite == "grading":
        return [verify_grading_suite(zoo.grading(_pair(scenario), config), config)]
    if suite == "tkk":
        return [verify_tkk_suite(tkk_build(_pair(scenario), config), config)]
    if suite == "psi":
        return [verify_psi(_ring(scenario), scenario.size_i, scenario.size_j, config)]
    if suite == "pe-quotient":
        return [verify_pe_quotient(_ring(scenario), scenario.size_i, scenario.size_j, config)]
    if suite == "weyl":
        return [verify_weyl(tkk_build(_pair(scenario, default="full"), config), config)]
    if suite == "phi":
        return [verify_phi_triangle(_ring(scenario), scenario.size_i, scenario.size_j, config)]
    if suite == "hom":
        presentation = _presentation(scenario, config)
        if presentation.kind in ("linear", "rect-EJ"):
            return [evaluate_el(presentation, config).report]
        return [evaluate_pe(presentation, config=config).report]
    if suite == "b-words":
        presentation = make_presentation("jordan-St", grading=zoo.grading(_pair(scenario), config), config=config)
        assert presentation.pair is not None
        algebra = tkk_build(presentation.pair, config)
        hom = evaluate_pe(presentation, algebra, config)
        reports = [hom.report, verify_b_words(presentation, hom, algebra, config)]
        if presentation.pair.kind in ("full", "rect"):
            el = evaluate_el(presentation, config)
            reports += [el.report, verify_b_words(presentation, el, config=config)]
        return reports
    if suite == "st2":
        return [compare_st2_redundancy(zoo.grading(_pair(scenario), config), config)]
    if suite == "relative":
        pair = _pair(scenario, default="full")
        result = pe_relative_kernel(pair, zoo.nil_ideal(pair), config)
        report = SuiteReport(suite="relative-kernel", subject=pair.name)
        report.record("well-defined", result.well_defined, {"conflicts": result.conflicts})
        report.record("normal", result.normal)
        report.record(
            "order-product",
            result.group.order * result.quotient_order == result.whole_order,
            result.to_dict(),
        )
        report.data.update(result.to_dict())
        return [report]
    raise SelectorError(f"Unknown suite {suite!r}")


def _enumerate(scenario: ScenarioConfig, config: KernelConfig) -> List[SuiteReport]:
    if scenario.group == "pe":
        group = pe_group(_pair(scenario), config)
    elif scenario.group == "el":
        group = el_group(_ring(scenario), IndexSet.range(scenario.n), config)
    else:
        raise SelectorError(f"Unknown group {scenario.group!r}; known: pe, el")
    analysis = group_analyze(group, config)
    report = SuiteReport(suite="enumerate", subject=group.name)
    report.data["group"] = analysis.to_dict()
    matches = []
    for name, (order, build) in REFERENCE_GROUPS.items():
        if order == group.order and matches_fingerprint(group, build(), config):
            matches.append(name)
    report.data["fingerprintMatches"] = matches
    return [report]


def _coset(scenario: ScenarioConfig, config: KernelConfig) -> Tuple[List[SuiteReport], bool]:
    presentation = _presentation(scenario, config)
    table = todd_coxeter(presentation, config=config)
    report = SuiteReport(suite="coset", subject=presentation.name)
    report.data.update(presentation=presentation.to_dict(), table=table.to_dict())
    if not table.complete:
        return [report], False
    report.record("relators-close", table.is_consistent())
    report.data["order"] = table.cosets
    if presentation.kind in ("linear", "rect-EJ"):
        hom = evaluate_el(presentation, config)
    else:
        hom = evaluate_pe(presentation, config=config)
    return [report, hom.report, kernel_centrality_report(presentation, hom, table, config)], True


def _export(scenario: ScenarioConfig, config: KernelConfig) -> List[SuiteReport]:
    presentation = _presentation(scenario, config)
    text = presentation.to_text()
    report = SuiteReport(suite="export", subject=presentation.name)
    report.data["presentation"] = presentation.to_dict()
    if scenario.out:
        with open(scenario.out, "w", encoding="utf-8") as f:
            f.write(text)
        report.data["path"] = scenario.out
    else:
        report.data["text"] = text
    return [report]


def _explore(config: KernelConfig) -> List[SuiteReport]:
    report = SuiteReport(suite="explore", subject="excluded cases")
    report.data["cases"] = [run_exploratory(case, config) for case in exploratory_cases()]
    return [report]


def run_scenario(scenario: ScenarioConfig, config: Optional[KernelConfig] = None) -> Tuple[int, dict]:
    """
    시나리오 실행

    Returns:
        (종료 코드, JSON 리포트). 0 = 전부 통과, 1 = 실패 있음, 2 = 예산 소진, 3 = selector 오류
    """
    config = config or KernelConfig()
    logger = structlog.get_logger()
    if scenario.max_cosets:
        config.budget.max_cosets = int(scenario.max_cosets)
    if scenario.max_group:
        config.budget.max_group_elements = int(scenario.max_group)
    config.validate()

    result: Dict[str, Any] = {
        "schemaVersion": config.report.schema_version,
        "version": __version__,
        "scenario": scenario.to_dict(),
        "config": config.to_dict(),
    }
    logger.info("Scenario started", scenario=str(scenario))
    started = time.perf_counter()
    code = EXIT_PASS
    reports: List[SuiteReport] = []
    try:
        if scenario.command == "verify":
            reports = _verify(scenario, config)
        elif scenario.command == "enumerate":
            reports = _enumerate(scenario, config)
        elif scenario.command == "coset":
            reports, complete = _coset(scenario, config)
            if not complete:
                code = EXIT_BUDGET
        elif scenario.command == "export":
            reports = _export(scenario, config)
        elif scenario.command == "explore":
            reports = _explore(config)
        else:
            raise SelectorError(f"Unknown command {scenario.command!r}; known: {', '.join(COMMANDS)}")
    except BudgetExceeded as e:
        logger.warning("Budget exhausted", budget=e.what, limit=e.limit, reached=e.reached)
        code = EXIT_BUDGET
        result["budget"] = {"what": e.what, "limit": e.limit, "reached": e.reached}
    except (SelectorError, ConfigError) as e:
        logger.error("Unresolvable scenario", error=str(e))
        code = EXIT_SELECTOR
        result["error"] = str(e)
    except KernelError as e:
        logger.error("Scenario input rejected", error=str(e), kind=type(e).__name__)
        code = EXIT_SELECTOR
        result["error"] = f"{type(e).__name__}: {e}"

    if code == EXIT_PASS and not all(r.passed for r in reports):
        code = EXIT_FAIL
    result["reports"] = [r.to_dict() for r in reports]
    result["failures"] = sum(r.failures for r in reports)
    result["status"] = {EXIT_PASS: "PASS", EXIT_FAIL: "FAIL", EXIT_BUDGET: "BUDGET", EXIT_SELECTOR: "ERROR"}[code]
    result["timings"] = {"seconds": round(time.perf_counter() - started, 3)}
    logger.info("Scenario finished", status=result["status"], failures=result["failures"])
    return code, result


def main(scenario: ScenarioConfig, config_path: Optional[str] = None) -> int:
    """
    메인 함수

    Args:
        scenario: 실행할 시나리오
        config_path: 설정 파일 경로 (optional)

    Returns:
        종료 코드
    """
    configure_logging()
    logger = structlog.get_logger()
    try:
        config = KernelConfig.load(config_path)
    except ConfigError as e:
        logger.error("Configuration rejected", error=str(e))
        return EXIT_SELECTOR
    configure_logging(config.logging.level, config.logging.renderer)

    try:
        code, result = run_scenario(scenario, config)
    except KeyboardInterrupt:
        logger.info("Interrupted")
        return EXIT_FAIL
    except Exception as e:
        logger.exception("Fatal error", error=str(e))
        return EXIT_FAIL

    payload = json.dumps(result, indent=config.report.indent, ensure_ascii=False)
    if scenario.out and scenario.command != "export":
        with open(scenario.out, "w", encoding="utf-8") as f:
            f.write(payload + "\n")
        logger.info("Report written", path=scenario.out)
    else:
        sys.stdout.write(payload + "\n")
    return code


def cli() -> None:
    """CLI 진입점"""
    parser = argparse.ArgumentParser(
        prog="steinberg-kernel",
        description="Jordan pairs, TKK algebras, PE groups and Steinberg presentations over small finite rings",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--pair", help="Pair kind: full, rect, hermitian, alternating, quadform")
    parser.add_argument("--ring", default="F2", help=f"Ring name: {', '.join(zoo.RINGS)}")
    parser.add_argument("--ring-file", help="Structure-constant ring JSON")
    parser.add_argument("--I", dest="size_i", type=int, default=1, help="|I| of rectangular pairs")
    parser.add_argument("--J", dest="size_j", type=int, default=1, help="|J| of rectangular pairs")
    parser.add_argument("--n", type=int, default=2, help="EL_n and St_n size, hermitian/alternating size or quadform rank")
    parser.add_argument("--suite", help="Verification suite for the verify command")
    parser.add_argument("--group", choices=("pe", "el"), help="Group for the enumerate command")
    parser.add_argument("--presentation", choices=KINDS, help="Presentation kind")
    parser.add_argument("--max-cosets", type=int, help="Override the coset budget")
    parser.add_argument("--max-group", type=int, help="Override the group element budget")
    parser.add_argument("--out", help="Write the report (or exported presentation) to this path")
    parser.add_argument("--config", "-c", help="Path to config file")
    parser.add_argument("--version", "-v", action="version", version=f"%(prog)s {__version__}")

    args = parser.parse_args()
    scenario = ScenarioConfig.from_dict(
        {
            "command": args.command,
            "pair": args.pair,
            "ring": args.ring,
            "ringFile": args.ring_file,
            "suite": args.suite,
            "group": args.group,
            "presentation": args.presentation,
            "I": args.size_i,
            "J": args.size_j,
            "n": args.n,
            "maxCosets": args.max_cosets,
            "maxGroup": args.max_group,
            "out": args.out,
        }
    )
    sys.exit(main(scenario, args.config))


if __name__ == "__main__":
    cli()
