"""
@FileName: har.py
@DateTime: 2025/07/15
@Docs: 活动识别相关子命令：合成、训练、评估与完整流水线
"""

import argparse
from pathlib import Path

from app.services import PipelineService


def cmd_synth(service: PipelineService, args: argparse.Namespace) -> Path:
    path, traces = service.run_synth()
    print(f"traces={len(traces)} dataset={path.as_posix()}")
    return path


def cmd_train(service: PipelineService, args: argparse.Namespace) -> Path:
    path, model = service.run_train()
    print(f"classes={len(model.class_labels)} model={path.as_posix()}")
    return path


def cmd_eval(service: PipelineService, args: argparse.Namespace) -> Path:
    path, report = service.run_eval()
    print(f"mean_accuracy={report.mean_accuracy:.4f} report={path.as_posix()}")
    return path


def cmd_pipeline(service: PipelineService, args: argparse.Namespace) -> Path:
    """合成 → 特征 → 交叉验证"""
    path, report = service.run_pipeline()
    print(f"mean_accuracy={report.cv.mean_accuracy:.4f} report={path.as_posix()}")
    return path


def register(subparsers: argparse._SubParsersAction) -> None:
    commands = (
        ("synth", "合成带标签的 CSI 数据集", cmd_synth),
        ("train", "在分层训练集上训练一对一 SVM", cmd_train),
        ("eval", "在留出测试集上评估模型", cmd_eval),
        ("pipeline", "端到端流水线与交叉验证", cmd_pipeline),
    )
    for name, help_text, handler in commands:
        parser = subparsers.add_parser(name, help=help_text)
        parser.set_defaults(handler=handler)
