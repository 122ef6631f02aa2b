"""Population-based and gradient optimizers for the weights of a softmax classifier layer."""

__version__ = "0.1.0"
