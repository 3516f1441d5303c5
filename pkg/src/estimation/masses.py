"""
Per-group masses from the Hidden States.
"""
import logging
from dataclasses import dataclass
from typing import List

import numpy as np
from scipy.linalg import null_space
from scipy.optimize import nnls

from src.errors import UnidentifiableMassError
from src.models.groups import GroupMaps, HiddenStates
from src.models.particles import ParticleModel


logger = logging.getLogger(__name__)

RANK_TOL = 1e-10
ROW_TOL = 1e-12


@dataclass
class MassRecovery:
    m: np.ndarray
    residual: float
    cond: float
    equations: int


def mass_equations(H: HiddenStates, model: ParticleModel, maps: GroupMaps):
    """
    Linear equations in the per-group masses.

    Rows: total mass, the two first moments and the second moment about the model
    origin, then one friction-ratio row m_a s_k2 - m_b s_k1 = 0 per pair of contact
    groups in different mass groups that share a friction group.

    Moment coefficients are exact grid-cell sums (in units of the largest cell radius)
    and do not involve the estimated c, so an unsupported moment is an exact zero row and
    is dropped. Friction-ratio rows are scaled to the norm of the total-mass row.
    """
    n_m = maps.n_m
    cells = np.round(model.positions / model.spacing)
    radius = float(np.max(np.linalg.norm(cells, axis=1)))
    length = radius * model.spacing
    sq = np.einsum("ij,ij->i", cells, cells)
    G = maps.G_m

    counts = G.sum(axis=1)
    rows: List[np.ndarray] = [counts, G @ cells[:, 0] / radius, G @ cells[:, 1] / radius, G @ sq / radius**2]
    rhs: List[float] = [
        H.M,
        H.M * H.c[0] / length,
        H.M * H.c[1] / length,
        (H.I_cm + H.M * float(H.c @ H.c)) / length**2,
    ]

    if maps.n_s > 1:
        mass_of = maps.contact_group_mass()
        friction_of = maps.contact_group_friction()
        scale = float(np.linalg.norm(counts))
        for k1 in range(maps.n_s):
            for k2 in range(k1 + 1, maps.n_s):
                a, b = mass_of[k1], mass_of[k2]
                if a == b or friction_of[k1] != friction_of[k2]:
                    continue
                row = np.zeros(n_m)
                row[a] = H.s[k2]
                row[b] = -H.s[k1]
                norm = float(np.linalg.norm(row))
                if norm > 0:
                    rows.append(row * scale / norm)
                    rhs.append(0.0)

    lhs = np.array(rows)
    rhs = np.array(rhs)
    norms = np.linalg.norm(lhs, axis=1)
    keep = norms > ROW_TOL * norms.max()
    return lhs[keep], rhs[keep]


def recover_m(
    H: HiddenStates,
    model: ParticleModel,
    maps: GroupMaps,
    gravity: float = 9.81,
) -> MassRecovery:
    """
    Solve for the per-group masses with non-negativity enforced.

    Returns:
        MassRecovery with masses, residual norm and condition number

    Raises:
        UnidentifiableMassError: when the equations leave a null space
    """
    n_m = maps.n_m
    if n_m == 1:
        return MassRecovery(m=np.array([H.M / model.n_p]), residual=0.0, cond=1.0, equations=1)

    lhs, rhs = mass_equations(H, model, maps)
    null_dim = int(null_space(lhs, rcond=RANK_TOL).shape[1])
    if null_dim > 0:
        raise UnidentifiableMassError(
            f"{len(lhs)} independent-looking equations leave a {null_dim}-dimensional null space "
            f"for {n_m} mass groups",
            null_dim=null_dim,
        )

    sigma = np.linalg.svd(lhs, compute_uv=False)
    cond = float(sigma[0] / sigma[-1])
    m, residual = nnls(lhs, rhs)
    logger.info(f"Recovered masses {np.round(m, 6).tolist()} (cond {cond:.3g}, residual {residual:.3g})")
    return MassRecovery(m=m, residual=float(residual), cond=cond, equations=len(lhs))


def recover_mu(s: np.ndarray, m: np.ndarray, maps: GroupMaps, gravity: float = 9.81) -> np.ndarray:
    """Friction coefficient per friction group: mean of s_k / (m g) over its contact groups."""
    mu = np.zeros(maps.n_mu)
    if maps.n_s == 0:
        return mu
    mass_of = maps.contact_group_mass()
    friction_of = maps.contact_group_friction()
    weights = np.asarray(m, dtype=float)[mass_of] * gravity
    ratios = np.divide(np.asarray(s, dtype=float), weights, out=np.zeros(len(weights)), where=weights > 0)
    for f in range(maps.n_mu):
        members = friction_of == f
        if np.any(members):
            mu[f] = float(np.mean(ratios[members]))
    return mu
