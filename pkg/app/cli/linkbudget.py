"""
@FileName: linkbudget.py
@DateTime: 2025/07/15
@Docs: 链路预算与材料衰减子命令
"""

import argparse
from pathlib import Path

from app.services import PipelineService


def cmd_linkbudget(service: PipelineService, args: argparse.Namespace) -> Path:
    """逐项链路预算报告"""
    path, report = service.run_linkbudget()
    print(f"receiver_power_dbm={report.receiver_power_dbm:.2f} report={path.as_posix()}")
    return path


def cmd_attenuation(service: PipelineService, args: argparse.Namespace) -> Path:
    """单一材料衰减报告"""
    path, report = service.run_attenuation(args.material, args.thickness)
    print(f"attenuation_db={report.attenuation_db:.2f} report={path.as_posix()}")
    return path


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("linkbudget", help="分区路径损耗模型的链路预算")
    parser.set_defaults(handler=cmd_linkbudget)

    parser = subparsers.add_parser("attenuation", help="材料衰减")
    parser.add_argument("--material", default=None, help="材料名称，缺省取配置中的 wall_material")
    parser.add_argument("--thickness", type=float, default=None, help="厚度（米），缺省取 wall_thickness_m")
    parser.set_defaults(handler=cmd_attenuation)
