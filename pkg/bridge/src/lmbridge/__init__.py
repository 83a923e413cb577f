"""lmbridge: serve a causal LM behind the generation wire protocol, and fine-tune it."""

from .config import (
    DEFAULT_MODEL,
    DROPOUT_SWEEP,
    LEARNING_RATE_SWEEP,
    WEIGHT_DECAY_SWEEP,
    BridgeConfig,
)
from .decoding import generate_text, load_model_and_tokenizer
from .errors import BridgeError, CorpusError
from .finetune import finetune, load_passages, load_samples, render_example
from .service import create_app, serve

__version__ = "0.1.0"

__all__ = [
    "BridgeConfig",
    "BridgeError",
    "CorpusError",
    "DEFAULT_MODEL",
    "DROPOUT_SWEEP",
    "LEARNING_RATE_SWEEP",
    "WEIGHT_DECAY_SWEEP",
    "create_app",
    "finetune",
    "generate_text",
    "load_model_and_tokenizer",
    "load_passages",
    "load_samples",
    "render_example",
    "serve",
    "__version__",
]
