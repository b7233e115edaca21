"""Clause indexes used by the saturation loop."""

from hornet.index.features import (
    FeatureIndex,
    FeatureScheme,
    FeatureVector,
    fv_backward_candidates,
    fv_forward_candidates,
    fv_of,
)
from hornet.index.prefix_tree import PrefixTree, pt_unifiable

__all__ = [
    "FeatureIndex",
    "FeatureScheme",
    "FeatureVector",
    "PrefixTree",
    "fv_backward_candidates",
    "fv_forward_candidates",
    "fv_of",
    "pt_unifiable",
]
