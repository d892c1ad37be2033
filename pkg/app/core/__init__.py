"""
@FileName: __init__.py
@DateTime: 2025/07/05
@Docs: 配置与异常
"""
