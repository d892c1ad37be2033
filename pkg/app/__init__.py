"""
@FileName: __init__.py
@DateTime: 2025/07/05
@Docs: 穿墙 RIS 辅助感知仿真器
"""
