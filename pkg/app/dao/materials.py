"""
@FileName: materials.py
@DateTime: 2025/07/13
@Docs: 材料数据库DAO（文本表）
"""

from pathlib import Path

from app.core.config import settings
from app.core.exceptions import ConfigException, ValidationException
from app.schemas.propagation import Material
from app.utils.logger import logger

# 数据库文件缺失时使用的内置表
BUILTIN_MATERIALS: dict[str, Material] = {
    m.name: m
    for m in (
        Material(
            name="concrete", permittivity_real=5.386, conductivity=0.11, fitted=True, permittivity_range=(3.58, 5.50)
        ),
        Material(name="concrete_low", permittivity_real=3.58, conductivity=0.11),
        Material(name="concrete_high", permittivity_real=5.50, conductivity=0.11),
        Material(name="brick", permittivity_real=3.75, conductivity=0.038),
        Material(name="plasterboard", permittivity_real=2.94, conductivity=0.0402),
        Material(name="wood", permittivity_real=1.99, conductivity=0.0309),
        Material(name="glass", permittivity_real=6.31, conductivity=0.0379),
    )
}


def parse_material_line(line: str, line_no: int = 0) -> Material | None:
    """解析一行 ``名称 ε′ᵣ σ [fitted] [range=lo:hi]``，空行与注释返回 None"""
    content = line.split("#", 1)[0].strip()
    if not content:
        return None
    tokens = content.split()
    if len(tokens) < 3:
        raise ValidationException(f"材料表第 {line_no} 行字段不足", detail={"line": line.rstrip()})

    fitted = False
    quoted: tuple[float, float] | None = None
    try:
        permittivity, conductivity = float(tokens[1]), float(tokens[2])
        for token in tokens[3:]:
            if token == "fitted":
                fitted = True
            elif token.startswith("range="):
                lo, hi = token.removeprefix("range=").split(":")
                quoted = (float(lo), float(hi))
            else:
                raise ValueError(f"未知字段 {token}")
    except ValueError as e:
        raise ValidationException(f"材料表第 {line_no} 行格式错误: {e}", detail={"line": line.rstrip()}) from e

    return Material(
        name=tokens[0],
        permittivity_real=permittivity,
        conductivity=conductivity,
        fitted=fitted,
        permittivity_range=quoted,
    )


class MaterialDAO:
    """材料数据库访问"""

    def __init__(self, path: Path | None = None):
        self.path = path or settings.DEFAULT_MATERIAL_DB
        self._materials: dict[str, Material] | None = None

    def _load(self) -> dict[str, Material]:
        if self._materials is not None:
            return self._materials
        if not self.path.is_file():
            logger.warning(f"材料数据库不存在，使用内置表: {self.path}")
            self._materials = dict(BUILTIN_MATERIALS)
            return self._materials

        materials: dict[str, Material] = {}
        for line_no, line in enumerate(self.path.read_text(encoding="utf-8").splitlines(), start=1):
            material = parse_material_line(line, line_no)
            if material is None:
                continue
            if material.name in materials:
                raise ValidationException(f"材料重复定义: {material.name}", detail={"line": line_no})
            materials[material.name] = material
        logger.debug(f"加载材料数据库 {self.path}: {len(materials)} 种")
        self._materials = materials
        return materials

    def get(self, name: str) -> Material:
        """按名称取材料

        Raises:
            ConfigException: 材料不存在
        """
        materials = self._load()
        if name not in materials:
            raise ConfigException(f"未知材料: {name}", detail={"available": sorted(materials)})
        return materials[name]

    def list_all(self) -> list[Material]:
        return [self._load()[name] for name in sorted(self._load())]
