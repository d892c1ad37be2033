"""
@FileName: __init__.py
@DateTime: 2025/07/14
@Docs: 服务层模块导出
"""

from app.services.pipeline import PipelineService

__all__ = ["PipelineService"]
