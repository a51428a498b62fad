"""
fracdw - 多项 / 分布阶时间分数阶混合扩散-波动方程求解器
主程序入口
"""
import sys
import argparse
from datetime import datetime
from typing import Any, Dict, List, Optional

from core import execute_task, register_processor, summary_printer_processor, unregister_processor, TaskResult
from experiments import ExperimentConfig, TABLE_PRESETS
from experiments.benchmark import BenchSettings
from experiments.refinement import REFINE_AXES, REPORT_FORMATS
from experiments.verification import SUITES
from model.errors import FracdwError
from solver.solver_1d import BACKENDS
from utils.logger import logger


def _int_list(text: str) -> List[int]:
    """解析 "16,32,64" 形式的整数列表"""
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"需要逗号分隔的整数列表: {text}")


def _format_list(text: str) -> List[str]:
    formats = [item.strip() for item in text.split(",") if item.strip()]
    unknown = set(formats) - set(REPORT_FORMATS)
    if unknown:
        raise argparse.ArgumentTypeError(f"未知输出格式: {sorted(unknown)}（可选: {', '.join(REPORT_FORMATS)}）")
    return formats


def build_parser() -> argparse.ArgumentParser:
    """构造命令行解析器"""
    parser = argparse.ArgumentParser(
        prog="fracdw",
        description="多项 / 分布阶时间分数阶混合扩散-波动方程的紧致差分求解与收敛实验",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
示例:
  python main.py run --example ex1 --alpha 0.5 --beta 1.5 --refine time --n 16,32,64,128 --backend fast --out report.csv
  python main.py run --example ex2 --refine sigma --n 2,4,6,8 --fixed-n 65536
  python main.py run --table 1 --format csv,markdown,svg --out out/table1.csv
  python main.py run --config experiment.json --backend stepping
  python main.py verify                  # 运行全部不变量校验
  python main.py verify --only toeplitz_solver,dst_involution
  python main.py bench --fast-n 16384,32768,65536,131072 --m 16
        """
    )
    parser.add_argument(
        "--version", "-v",
        action="version",
        version="%(prog)s 0.1.0"
    )

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--quiet", "-q",
        action="store_true",
        help="静默模式，减少输出"
    )

    subparsers = parser.add_subparsers(dest="command", required=True)

    run = subparsers.add_parser("run", parents=[common], help="加密收敛实验")
    run.add_argument("--example", "-e", help="算例: ex1 / ex2 / ex3 / low_reg")
    run.add_argument("--alpha", type=float, help="次扩散项阶数 α1 ∈ (0, 1]")
    run.add_argument("--beta", type=float, help="波动项阶数 α2 ∈ (1, 2]")
    run.add_argument("--nu", type=float, help="low_reg 算例的时间正则指数 ν ≥ 1")
    run.add_argument("--refine", "-r", choices=REFINE_AXES, help="加密方向")
    run.add_argument("--n", type=_int_list, dest="resolutions", help="分辨率序列，如 16,32,64,128")
    run.add_argument("--fixed-n", type=int, help="非时间加密时的时间步数 N")
    run.add_argument("--fixed-m", type=int, help="非空间加密时的空间剖分数 M")
    run.add_argument("--j", type=int, dest="fixed_j", help="非 sigma 加密时分布阶的 J")
    run.add_argument("--backend", "-b", choices=sorted(BACKENDS), help="求解后端")
    run.add_argument("--out", "-o", dest="output", help="输出文件路径")
    run.add_argument("--format", "-f", type=_format_list, dest="formats", help="输出格式: csv,markdown,svg")
    run.add_argument("--l2", action="store_const", const=True, default=None, help="同时报告离散 L² 误差")
    run.add_argument("--config", "-c", help="JSON 实验文件，命令行参数优先")
    run.add_argument("--table", choices=sorted(TABLE_PRESETS), help="复现表格预设")

    verify = subparsers.add_parser("verify", parents=[common], help="不变量与性质校验")
    verify.add_argument("--seed", type=int, default=20240601, help="随机种子")
    verify.add_argument(
        "--only",
        type=lambda text: [item.strip() for item in text.split(",") if item.strip()],
        help=f"只运行指定校验: {', '.join(name for name, _ in SUITES)}"
    )

    bench = subparsers.add_parser("bench", parents=[common], help="复杂度诊断（N 翻倍计时）")
    bench.add_argument("--fast-n", type=_int_list, help="fast 后端的 N 序列")
    bench.add_argument("--stepping-n", type=_int_list, help="stepping 后端的 N 序列")
    bench.add_argument("--m", type=int, help="空间剖分数 M")

    return parser


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """解析命令行参数"""
    return build_parser().parse_args(argv)


def _run_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    keys = ["example", "alpha", "beta", "nu", "refine", "resolutions", "fixed_n", "fixed_m",
            "fixed_j", "backend", "output", "formats", "l2"]
    return {key: getattr(args, key) for key in keys}


def _bench_settings(args: argparse.Namespace) -> BenchSettings:
    defaults = BenchSettings.from_config()
    return BenchSettings(
        fast_n=args.fast_n or defaults.fast_n,
        stepping_n=args.stepping_n or defaults.stepping_n,
        m=args.m or defaults.m,
    )


def _apply_quiet(quiet: bool) -> None:
    """静默模式下不打印误差表"""
    if quiet:
        unregister_processor(summary_printer_processor)
    else:
        register_processor(summary_printer_processor)


def dispatch(args: argparse.Namespace) -> TaskResult:
    """把子命令翻译为 execute_task 调用"""
    if args.command == "run":
        overrides = _run_overrides(args)
        if args.table:
            return execute_task("table", table=args.table, overrides=overrides)
        if args.config:
            config = ExperimentConfig.from_file(args.config, overrides)
        else:
            config = ExperimentConfig.from_config(overrides)
        return execute_task("run", config=config)

    if args.command == "verify":
        return execute_task("verify", seed=args.seed, only=args.only)

    return execute_task("bench", settings=_bench_settings(args))


def print_banner() -> None:
    """打印启动横幅"""
    print()
    print("╔════════════════════════════════════════╗")
    print("║  fracdw - 分数阶扩散-波动方程求解器    ║")
    print("╚════════════════════════════════════════╝")
    print()


def print_result(result: TaskResult, quiet: bool = False) -> None:
    """打印任务执行结果"""
    if quiet:
        # 静默模式只输出关键信息
        status = "SUCCESS" if result.success else "FAILED"
        print(f"[{status}] {result.task_type}: {result.message}")
        return

    print()
    print("─" * 50)
    print("任务执行结果")
    print("─" * 50)
    print(f"  状态:   {'✅ 成功' if result.success else '❌ 失败'}")
    print(f"  类型:   {result.task_type}")
    print(f"  消息:   {result.message}")
    print(f"  开始:   {result.started_at.strftime('%Y-%m-%d %H:%M:%S')}")
    print(f"  结束:   {result.finished_at.strftime('%Y-%m-%d %H:%M:%S')}")
    print(f"  耗时:   {(result.finished_at - result.started_at).total_seconds():.2f} 秒")

    if result.details:
        print("  详情:")
        for key, value in result.details.items():
            print(f"    {key}: {value}")
    print("─" * 50)


def main(argv: Optional[List[str]] = None) -> int:
    """
    主函数

    Returns:
        int: 退出码 (0=成功, 1=失败)
    """
    args = parse_args(argv)

    if not args.quiet:
        print_banner()
        print(f"⏰ 启动时间: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")
        print(f"📋 子命令: {args.command}")
        print()

    _apply_quiet(args.quiet)

    try:
        result = dispatch(args)
    except FracdwError as e:
        # 配置错误等在进入任务之前即可发现
        logger.error(f"参数错误: {e}")
        print(f"❌ {e}")
        return 1
    except Exception as e:
        logger.critical(f"任务执行异常: {e}", exc_info=True)
        print(f"❌ 任务执行异常: {e}")
        return 1

    print_result(result, args.quiet)

    return 0 if result.success else 1


if __name__ == "__main__":
    sys.exit(main())
