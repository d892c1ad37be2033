"""
@FileName: model_store.py
@DateTime: 2025/07/13
@Docs: 多分类 SVM 模型文件的读写与格式版本检查
"""

from pathlib import Path

from app.core.exceptions import SchemaVersionException
from app.dao.base import BaseFileDAO
from app.schemas.base import Provenance
from app.schemas.classify import MODEL_FORMAT_VERSION, SvmMulticlassModel
from app.utils.logger import logger


class ModelDAO(BaseFileDAO):
    """模型文件访问"""

    def save(self, name: str | Path, model: SvmMulticlassModel, provenance: Provenance) -> Path:
        path = self.write_json(name, model, provenance)
        logger.info(f"模型已保存: {path} ({len(model.binary_models)} 个二分类器)")
        return path

    def load(self, name: str | Path) -> SvmMulticlassModel:
        """读取模型

        Raises:
            SchemaVersionException: format_version 与当前版本不符
        """
        data = self.read_json(name)["data"]
        version = data.get("format_version") if isinstance(data, dict) else None
        if version != MODEL_FORMAT_VERSION:
            raise SchemaVersionException(
                f"模型格式版本 {version} 与当前版本 {MODEL_FORMAT_VERSION} 不一致",
                detail={"path": self.resolve(name).as_posix()},
            )
        return SvmMulticlassModel.model_validate(data)
