"""Epsilon-tube support vector regression trained by pairwise SMO updates.

The dual over z = [alpha; alpha*] with box [0, C] and the balance constraint
sum(alpha - alpha*) = 0 is solved with maximal-violating-pair working-set
selection; convergence is declared when the KKT violation m(z) - M(z) drops
below the tolerance. Features are standardized with training statistics
stored in the model. Direction targets can be regressed directly in degrees
or through a sine/cosine pair recombined by atan2 (output_mode).
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from gaitradar.errors import ParameterError, TrainingError


@dataclass
class RegressionDataset:
    features: np.ndarray  # (F, C)
    targets_deg: np.ndarray  # (F,)
    split_tag: str = ""

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=float)
        self.targets_deg = np.asarray(self.targets_deg, dtype=float) % 360.0
        if self.features.shape[0] != self.targets_deg.shape[0]:
            raise ParameterError("feature and target counts differ")


def _kernel_matrix(kind, gamma, xa, xb):
    if kind == "linear":
        return xa @ xb.T
    if kind == "rbf":
        sq = np.sum(xa**2, axis=1)[:, None] + np.sum(xb**2, axis=1)[None, :] - 2.0 * xa @ xb.T
        return np.exp(-gamma * np.maximum(sq, 0.0))
    raise ParameterError(f"unknown kernel {kind!r}")


def _smo_epsilon_svr(kmat, targets, box_c, tube_eps, kkt_tol=1e-6, max_iter=500_000):
    """Solve the epsilon-SVR dual; returns (beta = alpha - alpha*, bias, z).

    Maximal-violating selection for the first index, second-order (largest
    guaranteed objective decrease) selection for its partner.
    """
    n = targets.shape[0]
    y = np.concatenate([np.ones(n), -np.ones(n)])
    p = np.concatenate([tube_eps - targets, tube_eps + targets])
    qbig = np.tile(kmat, (2, 2)) * np.outer(y, y)
    qdiag = np.diag(qbig).copy()
    z = np.zeros(2 * n)
    grad = p.copy()  # Qbig @ z + p at z = 0

    for _ in range(max_iter):
        viol = -y * grad
        up_mask = ((y > 0) & (z < box_c)) | ((y < 0) & (z > 0))
        low_mask = ((y > 0) & (z > 0)) | ((y < 0) & (z < box_c))
        up = np.where(up_mask)[0]
        low = np.where(low_mask)[0]
        i = up[np.argmax(viol[up])]
        m_up = viol[i]
        m_low = np.min(viol[low])
        if m_up - m_low <= kkt_tol:
            break
        # second-order partner: maximize (m_up - viol_j)^2 / a_ij over violators
        cand = low[viol[low] < m_up]
        b_vec = m_up - viol[cand]
        a_vec = np.maximum(qdiag[i] + qdiag[cand] - 2.0 * y[i] * y[cand] * qbig[cand, i], 1e-12)
        j = cand[np.argmax(b_vec * b_vec / a_vec)]
        a = max(qdiag[i] + qdiag[j] - 2.0 * y[i] * y[j] * qbig[i, j], 1e-12)
        t = (m_up - viol[j]) / a
        # box clipping along the feasible direction dz_i = y_i t, dz_j = -y_j t
        t = min(t, (box_c - z[i]) if y[i] > 0 else z[i])
        t = min(t, z[j] if y[j] > 0 else (box_c - z[j]))
        if t <= 0.0:
            break
        z[i] += y[i] * t
        z[j] -= y[j] * t
        grad += t * (qbig[:, i] * y[i] - qbig[:, j] * y[j])
    else:
        raise TrainingError("SMO did not reach the KKT tolerance")

    viol = -y * grad
    up = np.where(((y > 0) & (z < box_c)) | ((y < 0) & (z > 0)))[0]
    low = np.where(((y > 0) & (z > 0)) | ((y < 0) & (z < box_c)))[0]
    m_up = np.max(viol[up]) if up.size else 0.0
    m_low = np.min(viol[low]) if low.size else 0.0
    bias = 0.5 * (m_up + m_low)
    beta = z[:n] - z[n:]
    return beta, bias, z


@dataclass
class SvrCore:
    kernel: str
    gamma: float
    box_c: float
    tube_eps: float
    support_x: np.ndarray = None
    dual_coeffs: np.ndarray = None
    bias: float = 0.0

    def fit(self, x, t, kkt_tol=1e-6):
        kmat = _kernel_matrix(self.kernel, self.gamma, x, x)
        beta, bias, _ = _smo_epsilon_svr(kmat, t, self.box_c, self.tube_eps, kkt_tol)
        keep = np.abs(beta) > 1e-12
        self.support_x = x[keep]
        self.dual_coeffs = beta[keep]
        self.bias = float(bias)
        return self

    def predict(self, x):
        if self.support_x is None or self.support_x.size == 0:
            return np.full(x.shape[0], self.bias)
        kmat = _kernel_matrix(self.kernel, self.gamma, x, self.support_x)
        return kmat @ self.dual_coeffs + self.bias


@dataclass
class SvrModel:
    kernel: str
    gamma: float
    box_c: float
    tube_eps: float
    output_mode: str  # "degrees" or "angle_pair"
    feature_mean: np.ndarray
    feature_std: np.ndarray
    cores: list = field(default_factory=list)

    def standardize(self, features):
        return (np.asarray(features, dtype=float) - self.feature_mean) / self.feature_std


def train_svr(data: RegressionDataset, hyper: dict, rng=None, kkt_tol=1e-6) -> SvrModel:
    """Train an epsilon-SVR direction regressor.

    hyper keys: kernel ("rbf"/"linear"), gamma, box_c, tube_eps, output_mode.
    """
    x = np.asarray(data.features, dtype=float)
    if x.shape[0] < 1:
        raise ParameterError("need at least one sample")
    mean = x.mean(axis=0)
    std = x.std(axis=0)
    if np.all(std < 1e-12) and x.shape[0] > 1:
        raise TrainingError("all training features are identical")
    std = np.where(std < 1e-12, 1.0, std)
    xs = (x - mean) / std

    model = SvrModel(
        kernel=hyper.get("kernel", "rbf"),
        gamma=float(hyper.get("gamma", 1.0 / x.shape[1])),
        box_c=float(hyper.get("box_c", 100.0)),
        tube_eps=float(hyper.get("tube_eps", 1.0)),
        output_mode=hyper.get("output_mode", "degrees"),
        feature_mean=mean,
        feature_std=std,
    )
    if model.output_mode == "degrees":
        targets = [np.asarray(data.targets_deg, dtype=float)]
        tube = model.tube_eps
    elif model.output_mode == "angle_pair":
        th = np.radians(data.targets_deg)
        targets = [np.sin(th), np.cos(th)]
        tube = model.tube_eps / 90.0  # tube quoted in degrees; pair lives in [-1, 1]
    else:
        raise ParameterError(f"unknown output mode {model.output_mode!r}")

    for t in targets:
        core = SvrCore(model.kernel, model.gamma, model.box_c, tube)
        core.fit(xs, t, kkt_tol=kkt_tol)
        model.cores.append(core)
    return model


def predict(model, features) -> np.ndarray:
    """Predict directions in [0, 360) degrees; accepts SvrModel or MlpModel."""
    features = np.atleast_2d(np.asarray(features, dtype=float))
    raw = model_raw_outputs(model, features)
    if model.output_mode == "degrees":
        return np.asarray(raw[0]) % 360.0
    sin_p, cos_p = raw
    return np.degrees(np.arctan2(sin_p, cos_p)) % 360.0


def model_raw_outputs(model, features):
    """Raw per-head outputs prior to angle recombination."""
    if hasattr(model, "cores"):  # SVR
        xs = model.standardize(features)
        return [core.predict(xs) for core in model.cores]
    return model.raw_outputs(features)  # MLP implements its own
