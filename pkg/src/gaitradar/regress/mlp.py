"""Small fully connected regressor trained by full-batch gradient descent.

tanh hidden layers, linear output head(s), mean squared loss. Targets are
affinely normalized inside the model for conditioning; direction outputs
follow the same output_mode convention as the SVR (degrees or angle pair).
The backward pass is hand-written and checked against finite differences.
"""

from dataclasses import dataclass, field

import numpy as np

from gaitradar.errors import ParameterError, TrainingError


@dataclass
class MlpModel:
    layer_sizes: list
    weights: list
    biases: list
    output_mode: str
    feature_mean: np.ndarray
    feature_std: np.ndarray
    target_offset: np.ndarray
    target_scale: np.ndarray
    loss_history: list = field(default_factory=list)

    def raw_outputs(self, features):
        x = (np.asarray(features, dtype=float) - self.feature_mean) / self.feature_std
        h = _forward(self.weights, self.biases, x)[-1]
        out = h * self.target_scale + self.target_offset
        return [out[:, k] for k in range(out.shape[1])]


def _forward(weights, biases, x):
    acts = [x]
    for i, (w, b) in enumerate(zip(weights, biases)):
        z = acts[-1] @ w + b
        acts.append(np.tanh(z) if i < len(weights) - 1 else z)
    return acts


def mlp_loss_and_grads(weights, biases, x, t):
    """Mean squared loss and analytic gradients; exposed for gradient checks."""
    n = x.shape[0]
    acts = _forward(weights, biases, x)
    resid = acts[-1] - t
    loss = float(np.mean(resid**2))
    grad_w = [None] * len(weights)
    grad_b = [None] * len(biases)
    delta = 2.0 * resid / (n * t.shape[1])
    for i in reversed(range(len(weights))):
        grad_w[i] = acts[i].T @ delta
        grad_b[i] = delta.sum(axis=0)
        if i > 0:
            delta = (delta @ weights[i].T) * (1.0 - acts[i] ** 2)
    return loss, grad_w, grad_b


def train_mlp(data, hyper: dict, rng=None) -> MlpModel:
    """Train the MLP regressor.

    hyper keys: hidden (list of layer widths), learning_rate, epochs,
    output_mode. Full-batch descent with a fixed step; raises TrainingError
    (with the epoch) if the loss goes non-finite.
    """
    if rng is None:
        rng = np.random.default_rng(0)
    x = np.asarray(data.features, dtype=float)
    if x.shape[0] < 1:
        raise ParameterError("need at least one sample")
    mean, std = x.mean(axis=0), x.std(axis=0)
    std = np.where(std < 1e-12, 1.0, std)
    xs = (x - mean) / std

    output_mode = hyper.get("output_mode", "degrees")
    if output_mode == "degrees":
        t_raw = np.asarray(data.targets_deg, dtype=float)[:, None]
    elif output_mode == "angle_pair":
        th = np.radians(data.targets_deg)
        t_raw = np.stack([np.sin(th), np.cos(th)], axis=1)
    else:
        raise ParameterError(f"unknown output mode {output_mode!r}")
    t_off = t_raw.mean(axis=0)
    t_scale = np.maximum(t_raw.std(axis=0), 1e-6)
    t = (t_raw - t_off) / t_scale

    hidden = list(hyper.get("hidden", [32]))
    sizes = [x.shape[1]] + hidden + [t.shape[1]]
    weights = [rng.normal(0.0, np.sqrt(1.0 / sizes[i]), size=(sizes[i], sizes[i + 1])) for i in range(len(sizes) - 1)]
    biases = [np.zeros(sizes[i + 1]) for i in range(len(sizes) - 1)]

    lr = float(hyper.get("learning_rate", 0.05))
    epochs = int(hyper.get("epochs", 2000))
    history = []
    with np.errstate(over="ignore", invalid="ignore"):
        for epoch in range(epochs):
            loss, gw, gb = mlp_loss_and_grads(weights, biases, xs, t)
            if not np.isfinite(loss):
                raise TrainingError(f"training diverged at epoch {epoch}")
            history.append(loss)
            for i in range(len(weights)):
                weights[i] -= lr * gw[i]
                biases[i] -= lr * gb[i]

    return MlpModel(
        layer_sizes=sizes,
        weights=weights,
        biases=biases,
        output_mode=output_mode,
        feature_mean=mean,
        feature_std=std,
        target_offset=t_off,
        target_scale=t_scale,
        loss_history=history,
    )
