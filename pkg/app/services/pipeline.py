"""
@FileName: pipeline.py
@DateTime: 2025/07/14
@Docs: 编排服务：把运行配置组装为领域对象，串联各阶段并写出结果文件
"""

from pathlib import Path

import numpy as np

from app.core.config import RunConfig
from app.dao import DatasetDAO, MaterialDAO, ModelDAO, ReportDAO
from app.schemas.base import Provenance
from app.schemas.classify import CvReport, EvaluationReport, SvmHyperparameters, SvmMulticlassModel
from app.schemas.csi import ActivityModel, CsiTrace, DatasetMetadata
from app.schemas.pipeline import NoiseContext, PipelineReport
from app.schemas.propagation import AttenuationReport, LinkBudgetConfig, LinkBudgetReport, Obstruction
from app.schemas.ris import CascadeGeometry, RisArray, ScanReport
from app.services import classify, csi_synth, features, propagation, ris
from app.utils.batch_operations import BatchProcessor
from app.utils.logger import log_stage, logger
from app.utils.metrics import metrics_collector

# 输出文件名
LINKBUDGET_REPORT = "linkbudget.json"
ATTENUATION_REPORT = "attenuation.json"
SCAN_REPORT = "ris_scan.json"
PHASE_PROFILE_CSV = "ris_profile.csv"
DATASET_CSV = "dataset.csv"
FEATURES_CSV = "features.csv"
MODEL_JSON = "model.json"
EVAL_REPORT = "eval_report.json"
CONFUSION_CSV = "confusion.csv"
PIPELINE_REPORT = "pipeline_report.json"


class PipelineService:
    """单次命令的编排服务，持有配置、溯源信息与各 DAO"""

    def __init__(self, config: RunConfig, command: str, processor: BatchProcessor | None = None):
        self.config = config
        self.command = command
        self.provenance = Provenance(config_hash=config.config_hash(), command=command)
        self.processor = processor or BatchProcessor()
        self.materials = MaterialDAO(config.material_db)
        self.reports = ReportDAO(config.output_dir)
        self.datasets = DatasetDAO(config.output_dir)
        self.models = ModelDAO(config.output_dir)

    # ------------------- 领域对象组装 -------------------
    def link_budget_config(self) -> LinkBudgetConfig:
        c = self.config
        return LinkBudgetConfig(
            tx_power=c.tx_power_dbm,
            tx_gain=c.tx_gain_dbi,
            rx_gain=c.rx_gain_dbi,
            amplifier_gain=c.amplifier_gain_db,
            cable_loss=c.cable_loss_db,
            frequency=c.frequency_hz,
            distance=c.distance_m,
        )

    def obstructions(self) -> list[Obstruction]:
        """墙体开启时返回单面墙"""
        if not self.config.wall_enabled:
            return []
        material = self.materials.get(self.config.wall_material)
        return [Obstruction(material=material, thickness=self.config.wall_thickness_m)]

    def ris_array(self) -> RisArray:
        c = self.config
        return RisArray(
            rows=c.ris_rows,
            cols=c.ris_cols,
            element_spacing=c.spacing_m,
            design_frequency=c.ris_design_frequency_hz,
            center_position=c.ris_center,
            orientation=c.ris_normal,
        )

    def geometry(self) -> CascadeGeometry:
        return CascadeGeometry(
            tx_position=self.config.tx_position,
            rx_position=self.config.rx_position,
            ris=self.ris_array(),
            tx_side_obstructions=self.obstructions(),
        )

    def activity_models(self) -> list[ActivityModel]:
        if self.config.activity_models_file is None:
            return csi_synth.default_activity_models()
        return self.datasets.load_activity_models(self.config.activity_models_file)

    def noise_floor(self, mode: str | None = None) -> float:
        """按噪声模式换算噪声幅度"""
        c = self.config
        match mode or c.noise_mode:
            case "with_ris":
                return csi_synth.link_noise_floor(c.rx_power_with_ris_dbm, c.noise_reference_dbm, c.noise_scale)
            case "without_ris":
                return csi_synth.link_noise_floor(c.rx_power_without_ris_dbm, c.noise_reference_dbm, c.noise_scale)
            case _:
                return float(c.noise_floor or 0.0)

    def noise_context(self) -> NoiseContext:
        with_ris = self.noise_floor("with_ris")
        without_ris = self.noise_floor("without_ris")
        return NoiseContext(
            noise_reference_dbm=self.config.noise_reference_dbm,
            noise_scale=self.config.noise_scale,
            rx_power_with_ris_dbm=self.config.rx_power_with_ris_dbm,
            rx_power_without_ris_dbm=self.config.rx_power_without_ris_dbm,
            noise_floor_with_ris=with_ris,
            noise_floor_without_ris=without_ris,
            noise_floor_ratio=with_ris / without_ris if without_ris > 0 else 0.0,
        )

    def hyperparameters(self) -> SvmHyperparameters:
        c = self.config
        return SvmHyperparameters(
            C=c.svm_c, kernel=c.svm_kernel, gamma=c.svm_gamma, tolerance=c.svm_tolerance, max_passes=c.svm_max_passes
        )

    def dataset_path(self) -> Path:
        """显式配置的路径按当前目录解析，缺省位于 output_dir 下"""
        path = self.config.dataset_path
        return path.absolute() if path is not None else Path(DATASET_CSV)

    def model_path(self) -> Path:
        path = self.config.model_path
        return path.absolute() if path is not None else Path(MODEL_JSON)

    # ------------------- 内部步骤 -------------------
    def _synthesize(self, noise_floor: float) -> list[CsiTrace]:
        c = self.config
        return csi_synth.generate_dataset(
            self.activity_models(),
            c.per_activity_count,
            c.trace_duration_s,
            noise_floor,
            c.seed,
            sampling_rate=c.sampling_rate_hz,
            processor=self.processor,
        )

    def _metadata(self, traces: list[CsiTrace], noise_floor: float, mode: str) -> DatasetMetadata:
        c = self.config
        rx_power = {"with_ris": c.rx_power_with_ris_dbm, "without_ris": c.rx_power_without_ris_dbm}.get(mode)
        return DatasetMetadata(
            sampling_rate_hz=c.sampling_rate_hz,
            duration_s=c.trace_duration_s,
            per_activity_count=c.per_activity_count,
            seed=c.seed,
            noise_floor=noise_floor,
            noise_mode=mode,
            noise_reference_dbm=c.noise_reference_dbm if rx_power is not None else None,
            rx_power_dbm=rx_power,
            activity_models=self.activity_models(),
            trace_count=len(traces),
        )

    def _split_features(self) -> tuple[np.ndarray, list[str], np.ndarray, np.ndarray]:
        traces, _ = self.datasets.load(self.dataset_path())
        matrix, labels = features.extract_feature_matrix(traces)
        train_idx, test_idx = classify.stratified_split(labels, self.config.test_fraction, self.config.seed)
        return matrix, labels, train_idx, test_idx

    def _cross_validate(self, matrix: np.ndarray, labels: list[str]) -> CvReport:
        return classify.cross_validate(
            matrix, labels, self.config.cv_folds, self.hyperparameters(), self.config.seed, processor=self.processor
        )

    # ------------------- 命令 -------------------
    @log_stage("linkbudget")
    def run_linkbudget(self) -> tuple[Path, LinkBudgetReport]:
        report = propagation.link_budget_report(self.link_budget_config(), self.obstructions())
        metrics_collector.set_rx_power("link_budget", report.receiver_power_dbm)
        logger.info(f"链路预算: 接收功率 {report.receiver_power_dbm:.2f} dBm")
        return self.reports.write_report(LINKBUDGET_REPORT, report, self.provenance), report

    @log_stage("attenuation")
    def run_attenuation(
        self, material_name: str | None = None, thickness: float | None = None
    ) -> tuple[Path, AttenuationReport]:
        material = self.materials.get(material_name or self.config.wall_material)
        if thickness is None:
            thickness = self.config.wall_thickness_m
        report = propagation.attenuation_report(material, thickness)
        logger.info(f"材料衰减: {material.name} {report.attenuation_db:.2f} dB")
        return self.reports.write_report(ATTENUATION_REPORT, report, self.provenance), report

    @log_stage("ris-scan")
    def run_ris_scan(self) -> tuple[Path, ScanReport]:
        c = self.config
        codebook = ris.default_codebook(c.scan_azimuth_span_deg, c.scan_elevation_span_deg, c.scan_step_deg)
        report, profile = ris.beam_scan(
            self.geometry(), self.link_budget_config(), codebook, c.ris_bits, self.processor
        )
        metrics_collector.set_rx_power("ris_best", report.best_power_dbm)
        if c.export_profile:
            self.reports.write_phase_profile(PHASE_PROFILE_CSV, profile, self.provenance)
        return self.reports.write_report(SCAN_REPORT, report, self.provenance), report

    @log_stage("synth")
    def run_synth(self) -> tuple[Path, list[CsiTrace]]:
        floor = self.noise_floor()
        traces = self._synthesize(floor)
        path = self.datasets.save(
            self.dataset_path(), traces, self._metadata(traces, floor, self.config.noise_mode), self.provenance
        )
        matrix, labels = features.extract_feature_matrix(traces)
        self.datasets.save_features(FEATURES_CSV, matrix, labels, self.provenance)
        return path, traces

    @log_stage("train")
    def run_train(self) -> tuple[Path, SvmMulticlassModel]:
        matrix, labels, train_idx, _ = self._split_features()
        model = classify.train_multiclass(
            matrix[train_idx],
            [labels[i] for i in train_idx],
            self.hyperparameters(),
            seed=self.config.seed,
            processor=self.processor,
        )
        logger.info(f"训练完成: 训练集 {train_idx.size} 条")
        return self.models.save(self.model_path(), model, self.provenance), model

    @log_stage("eval")
    def run_eval(self) -> tuple[Path, EvaluationReport]:
        model = self.models.load(self.model_path())
        matrix, labels, _, test_idx = self._split_features()
        report = classify.evaluate(model, matrix[test_idx], [labels[i] for i in test_idx])
        metrics_collector.set_accuracy("holdout", report.mean_accuracy)
        logger.info(f"评估完成: 测试集 {report.test_size} 条, 平均准确率 {report.mean_accuracy:.4f}")
        self.reports.write_confusion(CONFUSION_CSV, report.confusion, self.provenance)
        return self.reports.write_report(EVAL_REPORT, report, self.provenance), report

    @log_stage("pipeline")
    def run_pipeline(self) -> tuple[Path, PipelineReport]:
        c = self.config
        dataset_path, traces = self.run_synth()
        matrix, labels = self.datasets.load_features(FEATURES_CSV)
        cv = self._cross_validate(matrix, labels)
        metrics_collector.set_accuracy(c.noise_mode, cv.mean_accuracy)

        without_ris_cv = None
        if c.compare_without_ris and c.noise_mode != "without_ris":
            baseline_traces = self._synthesize(self.noise_floor("without_ris"))
            baseline, baseline_labels = features.extract_feature_matrix(baseline_traces)
            without_ris_cv = self._cross_validate(baseline, baseline_labels)
            metrics_collector.set_accuracy("without_ris", without_ris_cv.mean_accuracy)

        budget = propagation.link_budget_report(self.link_budget_config(), self.obstructions())
        report = PipelineReport(
            noise_mode=c.noise_mode,
            noise_floor=self.noise_floor(),
            trace_count=len(traces),
            per_activity_count=c.per_activity_count,
            activities=sorted({t.activity for t in traces}),
            link_budget=budget,
            noise=self.noise_context(),
            cv=cv,
            without_ris_cv=without_ris_cv,
            accuracy_gain_with_ris=(
                cv.mean_accuracy - without_ris_cv.mean_accuracy if without_ris_cv is not None else None
            ),
        )
        self.reports.write_confusion(CONFUSION_CSV, cv.confusion, self.provenance)
        logger.info(f"流水线完成: 数据集 {dataset_path}, 平均准确率 {cv.mean_accuracy:.4f}")
        return self.reports.write_report(PIPELINE_REPORT, report, self.provenance), report
