"""Class numbers and class labels of positive definite ternary integral quadratic forms."""

from .ascent import FormulaOutOfContract, class_number
from .isometry import Label, label
from .kernels import BACKEND
from .lattice import parse_gram
from .stable import stable_report

__all__ = ["BACKEND", "FormulaOutOfContract", "Label", "class_number", "label", "parse_gram", "stable_report"]
__version__ = "0.1.0"
