"""
@FileName: __init__.py
@DateTime: 2025/07/13
@Docs: DAO层统一导出
"""

from app.dao.base import BaseFileDAO
from app.dao.dataset import DatasetDAO
from app.dao.materials import MaterialDAO
from app.dao.model_store import ModelDAO
from app.dao.report import ReportDAO

__all__ = [
    "BaseFileDAO",
    "DatasetDAO",
    "MaterialDAO",
    "ModelDAO",
    "ReportDAO",
]
