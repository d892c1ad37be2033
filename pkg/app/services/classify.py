"""
@FileName: classify.py
@DateTime: 2025/07/12
@Docs: SMO 求解的 SVM、一对一多分类、分层折分与交叉验证
"""

import math
from collections.abc import Sequence
from itertools import combinations

import numpy as np
from scipy.spatial.distance import cdist

from app.core.exceptions import (
    ClassTooSmallException,
    DimensionMismatchException,
    DomainException,
    EmptyDatasetException,
    SingleClassException,
    ValidationException,
)
from app.schemas.classify import (
    ConfusionMatrix,
    CvReport,
    EvaluationReport,
    KernelKind,
    SvmBinaryModel,
    SvmHyperparameters,
    SvmMulticlassModel,
)
from app.schemas.features import FEATURE_NAMES
from app.services.features import fit_scaler
from app.utils.batch_operations import BatchProcessor
from app.utils.logger import logger

# 二次项非正时的替代值
_TAU = 1e-12


# --- 核函数 ---


def rbf_kernel(x: np.ndarray, y: np.ndarray, gamma: float) -> float:
    """exp(−γ·‖x−y‖²)"""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise DimensionMismatchException("核函数输入维度不一致", detail={"x": list(x.shape), "y": list(y.shape)})
    if gamma <= 0:
        raise DomainException("gamma 必须为正", detail={"gamma": gamma})
    diff = x - y
    return math.exp(-gamma * float(diff @ diff))


def kernel_matrix(a: np.ndarray, b: np.ndarray, kernel: KernelKind, gamma: float | None) -> np.ndarray:
    """完整 Gram 矩阵 K[i, j] = K(a_i, b_j)"""
    if kernel == "linear":
        return a @ b.T
    return np.exp(-gamma * cdist(a, b, "sqeuclidean"))


# --- 二分类 SMO ---


def smo_train(
    features: np.ndarray,
    labels: np.ndarray,
    C: float = 10.0,
    kernel: KernelKind = "rbf",
    gamma: float | None = 1.0,
    tolerance: float = 1e-3,
    max_passes: int = 200,
    seed: int = 0,
    track_objective: bool = False,
) -> SvmBinaryModel:
    """SMO 求解 SVM 对偶问题

    工作集按最大违反对加二阶信息选取，最大违反量 m − M ≤ tolerance 时停止，
    此时全部 KKT 条件在 tolerance 内成立。迭代上限为 max_passes × n，
    达到上限时返回当前解并标记 converged=False。

    Args:
        features: (n, d) 特征矩阵
        labels: 取值 ±1
        seed: 训练顺序的随机置换，决定并列时的选取

    Raises:
        SingleClassException: 只有一个类别
        DomainException: 超参数越界
    """
    X = np.asarray(features, dtype=float)
    y = np.asarray(labels, dtype=float).reshape(-1)
    if X.ndim != 2 or X.shape[0] != y.size:
        raise DimensionMismatchException("特征矩阵与标签数量不一致")
    if not np.all(np.isin(y, (-1.0, 1.0))):
        raise ValidationException("二分类标签必须为 ±1")
    if not (np.any(y > 0) and np.any(y < 0)):
        raise SingleClassException(detail={"samples": int(y.size)})
    if C <= 0 or tolerance <= 0:
        raise DomainException("C 与 tolerance 必须为正", detail={"C": C, "tolerance": tolerance})
    if kernel == "rbf" and (gamma is None or gamma <= 0):
        raise DomainException("rbf 核需要正的 gamma", detail={"gamma": gamma})

    n = y.size
    order = np.random.default_rng(seed).permutation(n)
    Xp, yp = X[order], y[order]
    K = kernel_matrix(Xp, Xp, kernel, gamma)
    diag = np.diag(K).copy()

    alpha = np.zeros(n)
    grad = -np.ones(n)  # ∇ = Qα − e
    history: list[float] = []
    max_iter = max_passes * n
    converged = False
    iterations = 0

    while iterations < max_iter:
        score = -yp * grad
        up = ((yp > 0) & (alpha < C)) | ((yp < 0) & (alpha > 0))
        low = ((yp > 0) & (alpha > 0)) | ((yp < 0) & (alpha < C))
        i = int(np.argmax(np.where(up, score, -np.inf)))
        m_up = score[i]
        m_low = float(np.min(np.where(low, score, np.inf)))
        if m_up - m_low <= tolerance:
            converged = True
            break

        b = m_up - score
        quad = diag[i] + diag - 2.0 * K[i]
        quad = np.where(quad > 0, quad, _TAU)
        gain = np.where(low & (b > 0), -(b * b) / quad, np.inf)
        j = int(np.argmin(gain))

        ai_old, aj_old = alpha[i], alpha[j]
        ai, aj = _update_pair(ai_old, aj_old, yp[i], yp[j], grad[i], grad[j], diag[i] + diag[j] - 2.0 * K[i, j], C)
        alpha[i], alpha[j] = ai, aj
        grad += yp * (K[i] * yp[i] * (ai - ai_old) + K[j] * yp[j] * (aj - aj_old))
        iterations += 1

        if track_objective:
            history.append(-0.5 * float(alpha @ (grad - 1.0)))

    if not converged:
        logger.warning(f"SMO 未在 {max_iter} 次迭代内收敛，返回当前解")

    score = -yp * grad
    free = (alpha > 0) & (alpha < C)
    if np.any(free):
        bias = float(np.mean(score[free]))
    else:
        up = ((yp > 0) & (alpha < C)) | ((yp < 0) & (alpha > 0))
        low = ((yp > 0) & (alpha > 0)) | ((yp < 0) & (alpha < C))
        bias = (float(np.max(score[up], initial=-np.inf)) + float(np.min(score[low], initial=np.inf))) / 2.0

    support = np.flatnonzero(alpha > 0)
    original = order[support]
    keep = np.argsort(original, kind="stable")
    support, original = support[keep], original[keep]

    return SvmBinaryModel(
        support_vectors=Xp[support],
        dual_coef=alpha[support] * yp[support],
        support_indices=original,
        bias=bias,
        kernel=kernel,
        gamma=gamma if kernel == "rbf" else None,
        C=C,
        converged=converged,
        iterations=iterations,
        dual_objective=-0.5 * float(alpha @ (grad - 1.0)),
        objective_history=history,
    )


def _update_pair(
    ai: float, aj: float, yi: float, yj: float, gi: float, gj: float, quad: float, C: float
) -> tuple[float, float]:
    """两变量子问题的解析解，裁剪到 [0, C] 且保持 Σαy 不变"""
    quad = quad if quad > 0 else _TAU
    if yi != yj:
        delta = (-gi - gj) / quad
        diff = ai - aj
        ai += delta
        aj += delta
        if diff > 0:
            if aj < 0:
                aj, ai = 0.0, diff
        elif ai < 0:
            ai, aj = 0.0, -diff
        if diff > 0:
            if ai > C:
                ai, aj = C, C - diff
        elif aj > C:
            aj, ai = C, C + diff
    else:
        delta = (gi - gj) / quad
        total = ai + aj
        ai -= delta
        aj += delta
        if total > C:
            if ai > C:
                ai, aj = C, total - C
        elif aj < 0:
            aj, ai = 0.0, total
        if total > C:
            if aj > C:
                aj, ai = C, total - C
        elif ai < 0:
            ai, aj = 0.0, total
    return ai, aj


def decision_function(model: SvmBinaryModel, features: np.ndarray) -> np.ndarray:
    """批量计算决策值"""
    X = np.atleast_2d(np.asarray(features, dtype=float))
    if X.shape[1] != model.feature_count:
        raise DimensionMismatchException(
            "特征维度与模型不一致", detail={"expected": model.feature_count, "actual": int(X.shape[1])}
        )
    K = kernel_matrix(X, model.support_vectors, model.kernel, model.gamma)
    return K @ model.dual_coef + model.bias


def kkt_violation(model: SvmBinaryModel, features: np.ndarray, labels: np.ndarray) -> float:
    """训练集上的最大 KKT 残差

    α=0 要求 y·f ≥ 1，0<α<C 要求 y·f = 1，α=C 要求 y·f ≤ 1。
    """
    y = np.asarray(labels, dtype=float).reshape(-1)
    margin = y * decision_function(model, features) - 1.0
    alpha = np.zeros(y.size)
    alpha[model.support_indices] = np.abs(model.dual_coef)
    at_zero = alpha <= 0
    at_bound = alpha >= model.C
    free = ~at_zero & ~at_bound
    residual = np.zeros(y.size)
    residual[at_zero] = np.maximum(0.0, -margin[at_zero])
    residual[free] = np.abs(margin[free])
    residual[at_bound] = np.maximum(0.0, margin[at_bound])
    return float(residual.max(initial=0.0))


# --- 一对一多分类 ---


def auto_gamma(standardized: np.ndarray) -> float:
    """γ = 1 / (特征数 × 标准化后训练特征的平均方差)"""
    d = standardized.shape[1]
    mean_var = float(np.mean(np.var(standardized, axis=0)))
    return 1.0 / (d * mean_var) if mean_var > 0 else 1.0 / d


def _feature_names(names: tuple[str, ...] | None, dimension: int) -> tuple[str, ...]:
    """缺省时 10 维使用标准特征名，其他维度按序号命名"""
    if names is not None:
        return names
    if dimension == len(FEATURE_NAMES):
        return FEATURE_NAMES
    return tuple(f"feature_{i}" for i in range(dimension))


def train_multiclass(
    features: np.ndarray,
    labels: Sequence[str],
    hyperparameters: SvmHyperparameters | None = None,
    seed: int = 0,
    feature_names: tuple[str, ...] | None = None,
    processor: BatchProcessor | None = None,
) -> SvmMulticlassModel:
    """拟合标准化参数并为每对类别 (a<b) 训练二分类器，+1 对应 a"""
    params = hyperparameters or SvmHyperparameters()
    X = np.asarray(features, dtype=float)
    y = np.asarray(labels)
    if X.shape[0] == 0:
        raise EmptyDatasetException("训练集为空")
    if X.shape[0] != y.size:
        raise DimensionMismatchException("特征矩阵与标签数量不一致")
    class_labels = sorted({str(v) for v in y})
    if len(class_labels) < 2:
        raise SingleClassException(detail={"labels": class_labels})

    scaler = fit_scaler(X)
    Z = scaler.transform(X)
    gamma = params.gamma if params.gamma is not None else auto_gamma(Z)
    pairs = list(combinations(class_labels, 2))

    def fit_pair(job: tuple[int, tuple[str, str]]) -> SvmBinaryModel:
        index, (a, b) = job
        mask = (y == a) | (y == b)
        model = smo_train(
            Z[mask],
            np.where(y[mask] == a, 1.0, -1.0),
            C=params.C,
            kernel=params.kernel,
            gamma=gamma,
            tolerance=params.tolerance,
            max_passes=params.max_passes,
            seed=seed + index,
        )
        return model.model_copy(update={"positive_label": a, "negative_label": b})

    processor = processor or BatchProcessor()
    binary = processor.map_ordered(fit_pair, list(enumerate(pairs)), description="一对一训练")
    return SvmMulticlassModel(
        class_labels=class_labels,
        binary_models=binary,
        scaler=scaler,
        feature_names=_feature_names(feature_names, X.shape[1]),
        hyperparameters=params.model_copy(update={"gamma": gamma if params.kernel == "rbf" else None}),
    )


def _check_dimension(model: SvmMulticlassModel, X: np.ndarray) -> None:
    if X.shape[1] != model.scaler.dimension:
        raise DimensionMismatchException(
            "特征维度与模型不一致", detail={"expected": model.scaler.dimension, "actual": int(X.shape[1])}
        )


def _vote(model: SvmMulticlassModel, decisions: np.ndarray) -> tuple[str, dict[str, int]]:
    votes = dict.fromkeys(model.class_labels, 0)
    strength = dict.fromkeys(model.class_labels, 0.0)
    for (a, b), f in zip(model.pairs, decisions, strict=True):
        winner = a if f > 0 else b
        votes[winner] += 1
        strength[winner] += abs(float(f))
    # 票数 → 胜出决策值绝对值之和 → 标签顺序
    best = max(model.class_labels, key=lambda c: (votes[c], strength[c], -model.class_labels.index(c)))
    return best, votes


def predict_batch(model: SvmMulticlassModel, features: np.ndarray) -> list[tuple[str, dict[str, int]]]:
    """按行预测，返回 (标签, 票数) 列表"""
    X = np.atleast_2d(np.asarray(features, dtype=float))
    _check_dimension(model, X)
    Z = model.scaler.transform(X)
    decisions = np.column_stack([decision_function(m, Z) for m in model.binary_models])
    return [_vote(model, row) for row in decisions]


def predict(model: SvmMulticlassModel, features: np.ndarray) -> tuple[str, dict[str, int]]:
    """单个特征向量的一对一投票预测"""
    x = np.asarray(features, dtype=float).reshape(-1)
    return predict_batch(model, x[None, :])[0]


# --- 折分与评估 ---


def _class_members(labels: np.ndarray) -> list[tuple[str, np.ndarray]]:
    return [(str(c), np.flatnonzero(labels == c)) for c in sorted({str(v) for v in labels})]


def stratified_kfold(labels: Sequence[str], k: int, seed: int) -> list[np.ndarray]:
    """分层 k 折：各类内部随机置换后轮转分配，累计偏移保持折大小均衡

    Raises:
        ValidationException: k < 2
        ClassTooSmallException: 某类样本数少于 k
    """
    if k < 2:
        raise ValidationException("折数必须不小于 2", detail={"k": k})
    y = np.asarray(labels)
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    offset = 0
    for label, members in _class_members(y):
        if members.size < k:
            raise ClassTooSmallException(detail={"class": label, "count": int(members.size), "k": k})
        for position, index in enumerate(rng.permutation(members)):
            folds[(offset + position) % k].append(int(index))
        offset += members.size
    return [np.sort(np.asarray(f, dtype=np.int64)) for f in folds]


def stratified_split(labels: Sequence[str], test_fraction: float, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """分层留出划分，每类取 round(数量 × test_fraction) 个测试样本"""
    if not 0 < test_fraction < 1:
        raise ValidationException("test_fraction 必须位于 (0, 1)", detail={"test_fraction": test_fraction})
    y = np.asarray(labels)
    rng = np.random.default_rng(seed)
    train: list[np.ndarray] = []
    test: list[np.ndarray] = []
    for label, members in _class_members(y):
        n_test = round(members.size * test_fraction)
        if n_test < 1 or n_test >= members.size:
            raise ClassTooSmallException(
                "类别样本数不足以同时划分训练与测试", detail={"class": label, "count": int(members.size)}
            )
        shuffled = rng.permutation(members)
        test.append(shuffled[:n_test])
        train.append(shuffled[n_test:])
    return np.sort(np.concatenate(train)), np.sort(np.concatenate(test))


def confusion_matrix(truth: Sequence[str], predicted: Sequence[str], labels: Sequence[str]) -> ConfusionMatrix:
    position = {label: i for i, label in enumerate(labels)}
    counts = np.zeros((len(labels), len(labels)), dtype=np.int64)
    for t, p in zip(truth, predicted, strict=True):
        counts[position[t], position[p]] += 1
    return ConfusionMatrix(labels=list(labels), counts=counts)


def accuracy_summary(confusion: ConfusionMatrix) -> tuple[dict[str, float], float, float]:
    """(各类准确率, 非加权平均, 总体正确率)，没有测试样本的类别不计入"""
    counts = confusion.counts
    rows = counts.sum(axis=1)
    per_class = {
        label: float(counts[i, i] / rows[i]) for i, label in enumerate(confusion.labels) if rows[i] > 0
    }
    total = int(rows.sum())
    if total == 0:
        raise EmptyDatasetException("混淆矩阵为空")
    macro = float(np.mean(list(per_class.values())))
    micro = float(np.trace(counts) / total)
    return per_class, macro, micro


def evaluate(model: SvmMulticlassModel, features: np.ndarray, labels: Sequence[str]) -> EvaluationReport:
    """在固定测试集上评估

    Raises:
        EmptyDatasetException: 测试集为空
    """
    if len(labels) == 0:
        raise EmptyDatasetException("测试集为空")
    unknown = sorted({str(v) for v in labels} - set(model.class_labels))
    if unknown:
        raise ValidationException("测试集包含模型未见过的类别", detail={"labels": unknown})
    predicted = [label for label, _ in predict_batch(model, features)]
    confusion = confusion_matrix([str(v) for v in labels], predicted, model.class_labels)
    per_class, macro, micro = accuracy_summary(confusion)
    return EvaluationReport(
        test_size=len(labels),
        confusion=confusion,
        per_class_accuracy=per_class,
        mean_accuracy=macro,
        micro_accuracy=micro,
    )


def cross_validate(
    features: np.ndarray,
    labels: Sequence[str],
    k: int = 5,
    hyperparameters: SvmHyperparameters | None = None,
    seed: int = 0,
    processor: BatchProcessor | None = None,
) -> CvReport:
    """分层 k 折交叉验证，每折在其余 k−1 折上重新拟合标准化参数与全部二分类器"""
    X = np.asarray(features, dtype=float)
    y = np.asarray([str(v) for v in labels])
    if X.shape[0] != y.size:
        raise DimensionMismatchException("特征矩阵与标签数量不一致")
    folds = stratified_kfold(y, k, seed)
    class_labels = sorted(set(y.tolist()))

    def run_fold(job: tuple[int, np.ndarray]) -> tuple[EvaluationReport, SvmMulticlassModel]:
        index, test_idx = job
        train_mask = np.ones(y.size, dtype=bool)
        train_mask[test_idx] = False
        model = train_multiclass(X[train_mask], y[train_mask].tolist(), hyperparameters, seed=seed + 1000 * index)
        return evaluate(model, X[test_idx], y[test_idx].tolist()), model

    results = (processor or BatchProcessor()).map_ordered(run_fold, list(enumerate(folds)), description="交叉验证")

    pooled = np.zeros((len(class_labels), len(class_labels)), dtype=np.int64)
    for report, _ in results:
        pooled += report.confusion.counts
    confusion = ConfusionMatrix(labels=class_labels, counts=pooled)
    per_class, macro, micro = accuracy_summary(confusion)
    per_fold = [report.micro_accuracy for report, _ in results]
    all_converged = all(m.converged for _, model in results for m in model.binary_models)
    logger.info(f"{k} 折交叉验证完成: 平均准确率 {np.mean(per_fold):.4f}, 总体 {micro:.4f}, 非加权 {macro:.4f}")

    return CvReport(
        fold_count=k,
        fold_sizes=[int(f.size) for f in folds],
        per_fold_accuracy=per_fold,
        mean_accuracy=float(np.mean(per_fold)),
        micro_accuracy=micro,
        macro_accuracy=macro,
        per_class_accuracy=per_class,
        confusion=confusion,
        gamma=results[0][1].hyperparameters.gamma,
        all_converged=all_converged,
    )
