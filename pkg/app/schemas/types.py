"""
@FileName: types.py
@DateTime: 2025/07/06
@Docs: 通用类型别名定义
"""

from app.core.config import Vector3

# 物理量（均为 float，别名仅用于标注单位）
type Dbm = float
type Db = float
type Dbi = float
type Hertz = float
type Meters = float

__all__ = ["Db", "Dbi", "Dbm", "Hertz", "Meters", "Vector3"]
