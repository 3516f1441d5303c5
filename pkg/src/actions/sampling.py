"""
Rank-guided action sampling with priority for rotations.
"""
import logging
import math
from typing import List, Optional, Sequence

import numpy as np

from src.actions.regression import build_Q, rank_Q
from src.actions.spec import ActionSpec
from src.config import SimConfig
from src.errors import EmptyActionSetError, RankDeficientError
from src.models.groups import GroupMaps
from src.models.particles import ParticleModel


logger = logging.getLogger(__name__)

ROTATE_WEIGHT = 4.0
SLIDE_WEIGHT = 1.0


def sample_actions(
    S: Sequence[ActionSpec],
    n_s: int,
    seed,
    max_extra: int,
    model: ParticleModel,
    maps: GroupMaps,
    M: float,
    c: np.ndarray,
    rank_tol: float = 1e-8,
    config: Optional[SimConfig] = None,
) -> List[ActionSpec]:
    """
    Select S2 so that the friction magnitudes are identifiable.

    Flow:
    1. Draw ceil(n_s / 3) rotate actions
    2. While rank(Q) < n_s, add one action (rotate weighted 4:1 over slide)
    3. Fail after max_extra additions

    Args:
        S: action set
        n_s: number of contact groups
        seed: seed or numpy Generator
        max_extra: additions allowed after the initial draw
        model, maps: object structure
        M, c: total mass and center of mass used to evaluate Q
        rank_tol: relative singular-value threshold

    Returns:
        Selected actions in selection order
    """
    if len(S) == 0:
        raise EmptyActionSetError("cannot sample from an empty action set")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    config = config or SimConfig()

    pool = list(S)
    rotates = [i for i, a in enumerate(pool) if a.is_rotate]
    initial = min(math.ceil(n_s / 3), len(pool))

    # 1. Initial rotations (fall back to any action when rotations run out)
    chosen: List[int] = []
    first = rotates if len(rotates) >= initial else list(range(len(pool)))
    if initial:
        chosen.extend(int(i) for i in rng.choice(first, size=initial, replace=False))

    def current_rank() -> int:
        if not chosen:
            return 0
        Q = build_Q([pool[i] for i in chosen], model, maps, M, c, config=config)
        return rank_Q(Q, rank_tol)

    # 2. Grow until full column rank
    rank = current_rank()
    extra = 0
    while rank < n_s:
        remaining = [i for i in range(len(pool)) if i not in chosen]
        if extra >= max_extra or not remaining:
            raise RankDeficientError(
                f"rank(Q) = {rank} < n_s = {n_s} after {extra} additional actions",
                rank=rank,
            )
        weights = np.array([ROTATE_WEIGHT if pool[i].is_rotate else SLIDE_WEIGHT for i in remaining])
        pick = int(rng.choice(remaining, p=weights / weights.sum()))
        chosen.append(pick)
        extra += 1
        rank = current_rank()
        logger.debug(f"Added {pool[pick].label()}: rank(Q) = {rank}/{n_s}")

    logger.info(f"Sampled {len(chosen)} actions ({extra} beyond the initial draw), rank(Q) = {rank}")
    return [pool[i] for i in chosen]
