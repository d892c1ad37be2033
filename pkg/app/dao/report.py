"""
@FileName: report.py
@DateTime: 2025/07/13
@Docs: 报告、相位配置与混淆矩阵的输出
"""

from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from app.dao.base import BaseFileDAO
from app.schemas.base import Provenance
from app.schemas.classify import ConfusionMatrix
from app.schemas.ris import PhaseProfile


class ReportDAO(BaseFileDAO):
    """报告文件访问"""

    def write_report(self, name: str | Path, data: Any, provenance: Provenance) -> Path:
        return self.write_json(name, data, provenance)

    def write_phase_profile(self, name: str | Path, profile: PhaseProfile, provenance: Provenance) -> Path:
        """行优先相位矩阵；1 比特配置写 0/1 电平，否则写弧度"""
        rows, cols = profile.shape
        if profile.quantization_bits == 1:
            values = np.where(profile.phases == 0.0, 0, 1)
            bits = "1"
        else:
            values = profile.phases
            bits = "continuous" if profile.is_continuous else str(profile.quantization_bits)
        header = f"# {rows} {cols} {bits}"
        return self.write_csv(name, pd.DataFrame(values), provenance, header_comment=header, header=False)

    def write_confusion(self, name: str | Path, confusion: ConfusionMatrix, provenance: Provenance) -> Path:
        """混淆矩阵 CSV，首列为真实类别"""
        frame = pd.DataFrame(confusion.counts, columns=confusion.labels)
        frame.insert(0, "truth", confusion.labels)
        return self.write_csv(name, frame, provenance)
