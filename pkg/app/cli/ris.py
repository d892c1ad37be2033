"""
@FileName: ris.py
@DateTime: 2025/07/15
@Docs: RIS 波束扫描子命令
"""

import argparse
from pathlib import Path

from app.services import PipelineService


def cmd_ris_scan(service: PipelineService, args: argparse.Namespace) -> Path:
    """码本扫描并输出最佳码字"""
    path, report = service.run_ris_scan()
    print(
        f"best_power_dbm={report.best_power_dbm:.2f} ris_gain_db={report.ris_gain_db:.2f} report={path.as_posix()}"
    )
    return path


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("ris-scan", help="透射式RIS波束扫描")
    parser.set_defaults(handler=cmd_ris_scan)
