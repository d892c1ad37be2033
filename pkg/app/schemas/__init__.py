"""
@FileName: __init__.py
@DateTime: 2025/07/14
@Docs: Schemas包导出
"""

# 基础schemas
from app.schemas.base import *  # noqa: F403

# 分类与评估schemas
from app.schemas.classify import *  # noqa: F403

# CSI schemas
from app.schemas.csi import *  # noqa: F403

# 特征schemas
from app.schemas.features import *  # noqa: F403

# 流水线schemas
from app.schemas.pipeline import *  # noqa: F403

# 传播模型schemas
from app.schemas.propagation import *  # noqa: F403

# RIS schemas
from app.schemas.ris import *  # noqa: F403

# 类型schemas
from app.schemas.types import *  # noqa: F403
