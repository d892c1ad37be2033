"""
@FileName: dataset.py
@DateTime: 2025/07/13
@Docs: CSI 数据集与特征矩阵的 CSV 读写
"""

from pathlib import Path

import numpy as np
import pandas as pd
from pydantic import TypeAdapter

from app.core.exceptions import ValidationException
from app.dao.base import BaseFileDAO
from app.schemas.base import Provenance
from app.schemas.csi import ActivityModel, CsiTrace, DatasetMetadata
from app.schemas.features import FEATURE_NAMES

DATASET_COLUMNS = ["trace_id", "activity", "sample_index", "amplitude"]

_activity_models_adapter = TypeAdapter(list[ActivityModel])


class DatasetDAO(BaseFileDAO):
    """数据集文件访问：长表 CSV + 元数据 JSON"""

    @staticmethod
    def metadata_path(dataset_path: Path) -> Path:
        return dataset_path.with_name(dataset_path.stem + "_meta.json")

    def save(
        self, name: str | Path, traces: list[CsiTrace], metadata: DatasetMetadata, provenance: Provenance
    ) -> Path:
        """按 trace_id,activity,sample_index,amplitude 写出，并在旁边写元数据"""
        lengths = [t.samples.size for t in traces]
        frame = pd.DataFrame(
            {
                "trace_id": np.repeat([t.trace_id for t in traces], lengths),
                "activity": np.repeat([t.activity for t in traces], lengths),
                "sample_index": np.concatenate([np.arange(n) for n in lengths]) if traces else [],
                "amplitude": np.concatenate([t.samples for t in traces]) if traces else [],
            },
            columns=DATASET_COLUMNS,
        )
        path = self.write_csv(name, frame, provenance)
        self.write_json(self.metadata_path(path), metadata, provenance)
        return path

    def load(self, name: str | Path) -> tuple[list[CsiTrace], DatasetMetadata]:
        """读回序列，顺序与写出时一致

        Raises:
            ConfigException: 文件不存在
            ValidationException: 列缺失或与元数据不符
        """
        path = self.resolve(name)
        frame = self.read_csv(path, dtype={"trace_id": str, "activity": str})
        missing = [c for c in DATASET_COLUMNS if c not in frame.columns]
        if missing:
            raise ValidationException(f"数据集缺少列: {missing}", detail={"path": path.as_posix()})
        metadata = DatasetMetadata.model_validate(self.read_json(self.metadata_path(path))["data"])

        traces = [
            CsiTrace(
                trace_id=str(trace_id),
                activity=group["activity"].iloc[0],
                sampling_rate=metadata.sampling_rate_hz,
                duration=metadata.duration_s,
                samples=group.sort_values("sample_index")["amplitude"].to_numpy(dtype=float),
            )
            for trace_id, group in frame.groupby("trace_id", sort=False)
        ]
        if len(traces) != metadata.trace_count:
            raise ValidationException(
                "数据集序列数与元数据不一致", detail={"csv": len(traces), "metadata": metadata.trace_count}
            )
        return traces, metadata

    def save_features(
        self, name: str | Path, matrix: np.ndarray, labels: list[str], provenance: Provenance
    ) -> Path:
        """特征矩阵 CSV：特征名列 + activity 列"""
        frame = pd.DataFrame(np.asarray(matrix, dtype=float), columns=list(FEATURE_NAMES))
        frame["activity"] = labels
        return self.write_csv(name, frame, provenance)

    def load_features(self, name: str | Path) -> tuple[np.ndarray, list[str]]:
        frame = self.read_csv(name, dtype={"activity": str})
        missing = [c for c in (*FEATURE_NAMES, "activity") if c not in frame.columns]
        if missing:
            raise ValidationException(f"特征文件缺少列: {missing}")
        return frame[list(FEATURE_NAMES)].to_numpy(dtype=float), frame["activity"].tolist()

    @staticmethod
    def load_activity_models(path: Path) -> list[ActivityModel]:
        """从 JSON 列表读取活动模型"""
        return _activity_models_adapter.validate_json(path.read_bytes())
