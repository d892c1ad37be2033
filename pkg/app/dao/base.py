"""
@FileName: base.py
@DateTime: 2025/07/13
@Docs: 基础文件DAO，负责 JSON/CSV 的确定性读写与溯源信息
"""

import json
from pathlib import Path
from typing import Any

import pandas as pd

from app.core.exceptions import ConfigException, ValidationException
from app.schemas.base import Provenance, ReportEnvelope, to_jsonable
from app.utils.logger import logger


class BaseFileDAO:
    """基础文件DAO：同一输入写出逐字节一致的文件"""

    def __init__(self, root: Path):
        self.root = Path(root)

    def resolve(self, name: str | Path) -> Path:
        """相对路径落在 root 下，绝对路径原样返回"""
        path = Path(name)
        return path if path.is_absolute() else self.root / path

    @staticmethod
    def _require(path: Path) -> Path:
        if not path.is_file():
            raise ConfigException(f"输入文件不存在: {path}", detail={"path": path.as_posix()})
        return path

    def write_json(self, name: str | Path, data: Any, provenance: Provenance) -> Path:
        """写出带溯源信息的 JSON（键排序，无时间戳）"""
        path = self.resolve(name)
        path.parent.mkdir(parents=True, exist_ok=True)
        envelope = ReportEnvelope[Any](provenance=provenance, data=to_jsonable(data))
        text = json.dumps(to_jsonable(envelope), sort_keys=True, indent=2, ensure_ascii=False)
        path.write_text(text + "\n", encoding="utf-8")
        logger.debug(f"写出 JSON: {path}")
        return path

    def read_json(self, name: str | Path) -> dict[str, Any]:
        """读取 JSON 报告，返回完整封装（provenance + data）"""
        path = self._require(self.resolve(name))
        try:
            payload = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise ValidationException(f"JSON 解析失败: {path}", detail=str(e)) from e
        if not isinstance(payload, dict) or "data" not in payload:
            raise ValidationException(f"缺少 data 字段: {path}")
        return payload

    def write_csv(
        self,
        name: str | Path,
        frame: pd.DataFrame,
        provenance: Provenance,
        header_comment: str = "",
        header: bool = True,
    ) -> Path:
        """写出 CSV，首行为溯源注释，可再附加一行注释"""
        path = self.resolve(name)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="") as fh:
            fh.write(provenance.csv_comment() + "\n")
            if header_comment:
                fh.write(header_comment + "\n")
            frame.to_csv(fh, index=False, header=header, lineterminator="\n")
        logger.debug(f"写出 CSV: {path} ({len(frame)} 行)")
        return path

    def read_csv(self, name: str | Path, **kwargs: Any) -> pd.DataFrame:
        """读取 CSV，跳过以 # 开头的注释行"""
        path = self._require(self.resolve(name))
        kwargs.setdefault("float_precision", "round_trip")
        try:
            return pd.read_csv(path, comment="#", **kwargs)
        except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
            raise ValidationException(f"CSV 解析失败: {path}", detail=str(e)) from e
