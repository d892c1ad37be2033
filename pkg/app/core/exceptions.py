"""*- coding: utf-8 -*-.

@FileName: exceptions.py
@DateTime: 2025/03/08 04:45:00
@Docs: 应用程序异常处理.
"""

from typing import Any

from pydantic import ValidationError
from pydantic_settings import SettingsError

from app.core.config import settings
from app.utils.logger import logger

# 退出码
EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERIC = 2


class SimulationError(Exception):
    """仿真异常基类."""

    def __init__(
        self,
        exit_code: int = EXIT_NUMERIC,
        message: str = "数值计算失败",
        detail: str | dict[str, Any] | None = None,
    ) -> None:
        """初始化仿真异常.

        Args:
            exit_code: 命令行退出码
            message: 错误消息
            detail: 详细信息

        """
        self.exit_code = exit_code
        self.message = message
        self.detail = detail
        super().__init__(self.message)


# ==================== 配置/校验类（退出码 1） ====================
class ConfigException(SimulationError):
    """配置异常."""

    def __init__(
        self,
        message: str = "配置无效",
        detail: str | dict[str, Any] | None = None,
    ) -> None:
        super().__init__(exit_code=EXIT_VALIDATION, message=message, detail=detail)


class ValidationException(SimulationError):
    """数据验证异常."""

    def __init__(
        self,
        message: str = "数据验证失败",
        detail: str | dict[str, Any] | None = None,
    ) -> None:
        super().__init__(exit_code=EXIT_VALIDATION, message=message, detail=detail)


class ClassTooSmallException(ValidationException):
    """分层折分时某类样本数少于折数."""

    def __init__(
        self,
        message: str = "类别样本数少于折数",
        detail: str | dict[str, Any] | None = None,
    ) -> None:
        super().__init__(message=message, detail=detail)


class SchemaVersionException(ValidationException):
    """模型文件格式版本不匹配."""

    def __init__(
        self,
        message: str = "模型文件格式版本不匹配",
        detail: str | dict[str, Any] | None = None,
    ) -> None:
        super().__init__(message=message, detail=detail)


# ==================== 数值/定义域类（退出码 2） ====================
class DomainException(SimulationError):
    """输入超出定义域."""

    def __init__(
        self,
        message: str = "输入超出定义域",
        detail: str | dict[str, Any] | None = None,
    ) -> None:
        super().__init__(exit_code=EXIT_NUMERIC, message=message, detail=detail)


class InfeasibleException(DomainException):
    """反解无可行解."""

    def __init__(
        self,
        message: str = "目标不可达",
        detail: str | dict[str, Any] | None = None,
    ) -> None:
        super().__init__(message=message, detail=detail)


class DegenerateGeometryException(DomainException):
    """几何退化（距离为零等）."""

    def __init__(
        self,
        message: str = "几何配置退化",
        detail: str | dict[str, Any] | None = None,
    ) -> None:
        super().__init__(message=message, detail=detail)


class DimensionMismatchException(DomainException):
    """维度不匹配."""

    def __init__(
        self,
        message: str = "维度不匹配",
        detail: str | dict[str, Any] | None = None,
    ) -> None:
        super().__init__(message=message, detail=detail)


class TraceTooShortException(DomainException):
    """CSI 序列过短."""

    def __init__(
        self,
        message: str = "CSI 序列长度不足",
        detail: str | dict[str, Any] | None = None,
    ) -> None:
        super().__init__(message=message, detail=detail)


class SingleClassException(DomainException):
    """二分类训练集只含一个类别."""

    def __init__(
        self,
        message: str = "训练集只包含一个类别",
        detail: str | dict[str, Any] | None = None,
    ) -> None:
        super().__init__(message=message, detail=detail)


class EmptyDatasetException(DomainException):
    """数据集为空."""

    def __init__(
        self,
        message: str = "数据集为空",
        detail: str | dict[str, Any] | None = None,
    ) -> None:
        super().__init__(message=message, detail=detail)


def handle_exception(exc: BaseException) -> int:
    """统一异常处理器，返回命令行退出码.

    Args:
        exc: 捕获到的异常

    Returns:
        int: 退出码

    """
    if isinstance(exc, SimulationError):
        logger.error(f"{exc.message} - 详细信息: {exc.detail}")
        return exc.exit_code

    if isinstance(exc, ValidationError):
        error_details = [
            {
                "loc": error.get("loc", []),
                "msg": error.get("msg", ""),
                "type": error.get("type", ""),
            }
            for error in exc.errors()
        ]
        logger.error(f"配置验证失败: {error_details}")
        return EXIT_VALIDATION

    if isinstance(exc, SettingsError):
        logger.error(f"配置文件解析失败: {exc!s}")
        return EXIT_VALIDATION

    if isinstance(exc, (FileNotFoundError, IsADirectoryError, PermissionError)):
        logger.error(f"输入文件不可用: {exc!s}")
        return EXIT_VALIDATION

    logger.exception(f"未处理的异常: {exc!s}")
    if settings.IS_PRODUCTION:
        logger.error("请检查日志文件获取完整堆栈")
    return EXIT_NUMERIC
