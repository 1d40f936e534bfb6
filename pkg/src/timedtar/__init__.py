"""Trace abstraction refinement for real-time programs over exact rationals."""
from .frontend import load_model, parse_model, print_model
from .synth import safe_init, synth_params, synth_robust
from .tar import Budget, Empty, Exhausted, NonEmpty, check_emptiness, explain

__version__ = "0.1.0"

__all__ = ["Budget", "Empty", "Exhausted", "NonEmpty", "check_emptiness", "explain",
           "load_model", "parse_model", "print_model", "safe_init", "synth_params",
           "synth_robust"]
