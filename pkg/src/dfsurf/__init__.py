"""Danielewski surfaces over (Q[x], x) through labelled rooted trees."""
from .labelled import LabelledTree, decide_equivalence, essentialize, validate
from .trees import RootedTree

__version__ = "0.1.0"

__all__ = ["LabelledTree", "RootedTree", "decide_equivalence", "essentialize", "validate"]
