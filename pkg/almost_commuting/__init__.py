from almost_commuting.almost_commuting import (
    ACInstance,
    RankTooHigh,
    common_invariant,
    extend_scalars,
    extend_weights,
)

__all__ = ["ACInstance", "RankTooHigh", "common_invariant", "extend_scalars", "extend_weights"]
