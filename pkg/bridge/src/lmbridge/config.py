"""Serving and fine-tuning configuration.

The defaults mirror the training recipe this service exists to host: the
355M medium pretrained model, learning rate 5e-05, dropout 0.1, five epochs,
an adaptive-moment optimizer. The recipe's hyperparameter search space is
published here as plain constants for callers who want to sweep; nothing in
this package runs a search automatically.
"""

from dataclasses import dataclass

DEFAULT_MODEL = "gpt2-medium"

# documented sweep options; the recipe does not say which value was picked
WEIGHT_DECAY_SWEEP = (0.1, 0.01, 0.05)
DROPOUT_SWEEP = (0.1, 0.2, 0.3)
LEARNING_RATE_SWEEP = (1e-05, 2e-05, 5e-05, 1e-06)


@dataclass(frozen=True)
class BridgeConfig:
    model_name: str = DEFAULT_MODEL
    learning_rate: float = 5e-05
    dropout: float = 0.1
    epochs: int = 5
    optimizer: str = "adam"
    weight_decay: float = 0.0
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.learning_rate <= 0:
            raise ValueError(f"learning_rate must be positive, got {self.learning_rate}")
        if self.epochs < 1:
            raise ValueError(f"epochs must be at least 1, got {self.epochs}")
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError(f"dropout must be in [0, 1), got {self.dropout}")
        if self.optimizer != "adam":
            raise ValueError(f"only the adam optimizer is supported, got {self.optimizer!r}")
        if self.weight_decay < 0:
            raise ValueError(f"weight_decay must not be negative, got {self.weight_decay}")
        if not self.model_name.strip():
            raise ValueError("model_name must be nonempty")
