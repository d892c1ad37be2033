"""
@FileName: __init__.py
@DateTime: 2025/07/15
@Docs: 子命令注册
"""

import argparse

from app.cli import har, linkbudget, ris

# 各模块子命令
COMMAND_MODULES = (linkbudget, ris, har)


def register_commands(subparsers: argparse._SubParsersAction) -> None:
    """注册所有子命令"""
    for module in COMMAND_MODULES:
        module.register(subparsers)


__all__ = ["register_commands"]
