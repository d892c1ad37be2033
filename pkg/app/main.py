"""
-*- coding: utf-8 -*-
@FileName: main.py
@DateTime: 2025/03/08 04:50:00
@Docs: 命令行入口
"""

import argparse
import sys
from pathlib import Path

from app.cli import register_commands
from app.core.config import load_run_config, settings
from app.core.exceptions import EXIT_OK, ConfigException, handle_exception
from app.services import PipelineService
from app.utils.logger import logger
from app.utils.metrics import metrics_collector


class CliArgumentParser(argparse.ArgumentParser):
    """参数错误按配置错误处理（退出码 1）"""

    def error(self, message: str):  # type: ignore[override]
        raise ConfigException(f"命令行参数错误: {message}")


def build_parser() -> argparse.ArgumentParser:
    """创建命令行解析器"""
    parser = CliArgumentParser(prog=settings.APP_NAME, description=settings.APP_DESCRIPTION)
    parser.add_argument("--config", type=Path, default=None, help="运行配置文件（key=value）")
    parser.add_argument("--out", type=Path, default=None, help="输出目录，覆盖 output_dir")
    parser.add_argument("--seed", type=int, default=None, help="随机种子，覆盖 seed")
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.APP_VERSION}")

    subparsers = parser.add_subparsers(dest="command", metavar="<command>", required=True)
    register_commands(subparsers)
    return parser


def main(argv: list[str] | None = None) -> int:
    """执行一条子命令并返回退出码"""
    try:
        args = build_parser().parse_args(argv)
        config = load_run_config(args.config, seed=args.seed, output_dir=args.out)
        logger.info(f"执行命令 {args.command}: 配置哈希 {config.config_hash()}, 输出目录 {config.output_dir}")
        service = PipelineService(config, command=args.command)
        args.handler(service, args)
        metrics_collector.write_textfile(config.output_dir)
    except Exception as exc:
        return handle_exception(exc)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
