"""Hilbert-space distortion of the cyclic lamplighter group C_2 wr C_n.

Submodules: ``group``, ``word_metric``, ``representations``, ``embedding``,
``analysis``, ``lower_bounds``, ``abelian_lp`` and ``cli``.
"""

from . import abelian_lp, analysis, embedding, group, lower_bounds, representations, word_metric
from .embedding import EmbeddingParams, fast_sq_dist
from .errors import (
    CommandError,
    ConsistencyError,
    DegenerateError,
    GenerationError,
    LamplighterError,
    SizeGuardError,
    UsageError,
)
from .group import GroupElement
from .word_metric import GeneratorSet

__version__ = "0.1.0"
