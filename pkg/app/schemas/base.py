"""
@FileName: base.py
@DateTime: 2025/07/05
@Docs: 基础模式与报告封装
"""

from pathlib import Path
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from app.core.config import settings


class BaseSchema(BaseModel):
    """领域模式基类：禁止多余字段"""

    model_config = ConfigDict(extra="forbid")


class ArraySchema(BaseModel):
    """携带 numpy 数组字段的模式基类"""

    model_config = ConfigDict(extra="forbid", arbitrary_types_allowed=True)


class Provenance(BaseModel):
    """输出溯源信息"""

    tool: str = Field(default_factory=lambda: settings.APP_NAME, description="工具名称")
    version: str = Field(default_factory=lambda: settings.APP_VERSION, description="工具版本")
    config_hash: str = Field(description="运行配置哈希")
    command: str = Field(description="生成该输出的子命令")

    def csv_comment(self) -> str:
        """CSV 首行注释"""
        return (
            f"# provenance tool={self.tool} version={self.version} "
            f"config_hash={self.config_hash} command={self.command}"
        )


class ReportEnvelope[DataType](BaseModel):
    """报告封装：溯源 + 数据

    不含时间戳，同一配置重复运行输出逐字节一致。
    """

    provenance: Provenance
    data: DataType


def to_jsonable(value: Any) -> Any:
    """把 numpy 标量/数组递归转换为 JSON 可序列化对象"""
    if isinstance(value, BaseModel):
        return to_jsonable(value.model_dump())
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Path):
        return value.as_posix()
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    return value
