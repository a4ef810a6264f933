from gaitradar.regress.crossval import crossval_2fold
from gaitradar.regress.metrics import circular_error, mse_by_direction, prob_within
from gaitradar.regress.mlp import MlpModel, mlp_loss_and_grads, train_mlp
from gaitradar.regress.svr import RegressionDataset, SvrModel, predict, train_svr

__all__ = [
    "MlpModel",
    "RegressionDataset",
    "SvrModel",
    "circular_error",
    "crossval_2fold",
    "mlp_loss_and_grads",
    "mse_by_direction",
    "predict",
    "prob_within",
    "train_mlp",
    "train_svr",
]
