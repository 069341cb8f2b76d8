"""From-scratch numerical kernels for the hybrid sequence model.

Everything here is plain float64 numpy: sinusoidal positional encoding,
an LSTM cell with backpropagation through time, scaled dot-product
attention with hand-derived backward passes, the parallel
LSTM + transformer-encoder model with a fusion head, a small Adam
training loop with gradient checking, and a bit-exact JSON checkpoint
format.
"""

from .encoding import positional_encoding
from .lstm import lstm_step, lstm_forward, lstm_backward
from .attention import softmax, self_attention, multi_head_attention
from .model import (
    ModelConfig,
    HybridModel,
    init_params,
    hybrid_forward,
    hybrid_forward_cached,
    hybrid_backward,
)
from .training import (
    Normalization,
    TrainConfig,
    rmse,
    mae,
    train,
    evaluate,
    predict,
    gradient_check,
)
from .checkpoint import save_checkpoint, load_checkpoint, checkpoint_to_json, checkpoint_from_json

__all__ = [
    "positional_encoding",
    "lstm_step",
    "lstm_forward",
    "lstm_backward",
    "softmax",
    "self_attention",
    "multi_head_attention",
    "ModelConfig",
    "HybridModel",
    "init_params",
    "hybrid_forward",
    "hybrid_forward_cached",
    "hybrid_backward",
    "Normalization",
    "TrainConfig",
    "rmse",
    "mae",
    "train",
    "evaluate",
    "predict",
    "gradient_check",
    "save_checkpoint",
    "load_checkpoint",
    "checkpoint_to_json",
    "checkpoint_from_json",
]
