"""
One-step prediction loss over the joint (m, mu) parameter space.

For every observed step the dynamics predict v_{t+1} from the observed state and input;
the loss sums the squared velocity errors. Everything that depends only on the observed
states (world positions, friction directions) is precomputed once, so one evaluation is
a handful of vectorized array operations. The gradient runs the chain rule through M,
c, I_cm, the lever arms and the per-particle friction magnitudes.
"""
from typing import Sequence, Tuple

import numpy as np

from src.config import SimConfig
from src.models.groups import GroupMaps, particle_masses
from src.models.particles import ParticleModel
from src.physics.dynamics import friction_directions
from src.physics.kinematics import cross, perp, rotation, world_positions
from src.physics.trajectory import Trajectory


class JointLoss:
    """
    Loss L(theta) with theta = concat(m, mu).

    Args:
        model: particle model
        maps: group maps
        trajectories: observed trajectories with their wrench inputs
        config: simulation config (gravity, velocity_epsilon; each trajectory keeps its dt)
    """

    def __init__(
        self,
        model: ParticleModel,
        maps: GroupMaps,
        trajectories: Sequence[Trajectory],
        config: SimConfig,
    ):
        if len(trajectories) == 0:
            raise ValueError("the joint loss needs at least one trajectory")
        self.model = model
        self.maps = maps
        self.config = config
        self.n_m = maps.n_m
        self.n_mu = maps.n_mu

        positions, dhats, rots, origins, refs, omegas, inputs, grasps, deltas, dts = ([] for _ in range(10))
        for traj in trajectories:
            T = traj.n_steps
            poses = traj.poses[:T]
            vels = traj.velocities[:T]
            P = np.stack([world_positions(model, p, traj.reference) for p in poses])
            levers = P - P[:, traj.reference : traj.reference + 1]
            V = vels[:, None, :2] + vels[:, 2, None, None] * perp(levers)
            positions.append(P)
            dhats.append(friction_directions(V, config.velocity_epsilon))
            rots.append(rotation(poses[:, 2]))
            origins.append(poses[:, :2])
            refs.append(np.full(T, traj.reference))
            omegas.append(vels[:, 2])
            inputs.append(traj.wrenches)
            grasps.append(traj.grasp_indices)
            deltas.append(traj.velocity_deltas())
            dts.append(np.full(T, traj.config.dt))

        self.P = np.concatenate(positions)  # (N, n, 2)
        self.dhat = np.concatenate(dhats)  # (N, n, 2)
        self.R = np.concatenate(rots)  # (N, 2, 2)
        self.origin = np.concatenate(origins)  # (N, 2)
        self.ref_body = model.positions[np.concatenate(refs)]  # (N, 2)
        self.omega = np.concatenate(omegas)  # (N,)
        self.u = np.concatenate(inputs)  # (N, 3)
        grasp = np.concatenate(grasps)
        self.P_grasp = self.P[np.arange(len(grasp)), grasp]  # (N, 2)
        self.delta = np.concatenate(deltas)  # (N, 3)
        self.dt = np.concatenate(dts)  # (N,)

        self.cross_dhat_P = cross(self.dhat, self.P)  # (N, n)
        self.u_torque = self.u[:, 2] + cross(self.u[:, :2], self.P_grasp)  # (N,)
        self.contact = maps.friction_assignment >= 0

    @property
    def dimension(self) -> int:
        return self.n_m + self.n_mu

    def split(self, theta: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        theta = np.asarray(theta, dtype=float)
        return theta[: self.n_m], theta[self.n_m :]

    def _hidden(self, theta: np.ndarray):
        m, mu = self.split(theta)
        masses = particle_masses(self.maps, m)
        M = masses.sum()
        c_body = masses @ self.model.positions / M
        offsets = self.model.positions - c_body
        I = masses @ np.einsum("ij,ij->i", offsets, offsets)
        mu_p = np.zeros(len(masses))
        mu_p[self.contact] = mu[self.maps.friction_assignment[self.contact]]
        s = mu_p * masses * self.config.gravity
        return m, mu, masses, M, c_body, I, mu_p, s

    def _forward(self, theta: np.ndarray):
        m, mu, masses, M, c_body, I, mu_p, s = self._hidden(theta)
        c = np.einsum("tij,tj->ti", self.R, c_body - self.ref_body) + self.origin  # (N, 2)
        G = np.einsum("i,tij->tj", s, self.dhat)  # (N, 2)
        Hs = self.cross_dhat_P @ s  # (N,)
        F = self.u[:, :2] - G
        tau = self.u_torque - Hs - cross(F, c)
        a_c = F / M
        alpha = tau / I
        d = self.origin - c
        w2 = self.omega ** 2
        a_xy = a_c + alpha[:, None] * perp(d) - w2[:, None] * d
        pred = self.dt[:, None] * np.column_stack([a_xy, alpha])
        residual = pred - self.delta
        cache = (masses, M, c_body, I, mu_p, s, c, F, tau, alpha, d, w2, residual)
        return float(np.sum(residual ** 2)), cache

    def value(self, theta: np.ndarray) -> float:
        return self._forward(theta)[0]

    def __call__(self, theta: np.ndarray) -> float:
        return self.value(theta)

    def value_and_grad(self, theta: np.ndarray) -> Tuple[float, np.ndarray]:
        """Loss and exact gradient with respect to concat(m, mu)."""
        loss, cache = self._forward(theta)
        masses, M, c_body, I, mu_p, s, c, F, tau, alpha, d, w2, residual = cache
        g = self.config.gravity
        n_m, n_mu = self.n_m, self.n_mu
        positions = self.model.positions
        offsets = positions - c_body
        sq = np.einsum("ij,ij->i", offsets, offsets)

        # Parameter derivatives of M, c_body, I and per-particle s
        G_m = self.maps.G_m
        dM = np.concatenate([G_m.sum(axis=1), np.zeros(n_mu)])  # (P,)
        dc_body = np.vstack([G_m @ offsets / M, np.zeros((n_mu, 2))])  # (P, 2)
        dI = np.concatenate([G_m @ sq, np.zeros(n_mu)])  # (P,)
        ds_m = G_m * (mu_p * g)[None, :]  # (n_m, n)
        ds_mu = self.maps.G_mu * (masses * g)[None, :]  # (n_mu, n)
        ds = np.vstack([ds_m, ds_mu])  # (P, n)

        # Per-step derivatives, parameters on the leading axis
        dc = np.einsum("tij,pj->pti", self.R, dc_body)  # (P, N, 2)
        dG = np.einsum("pi,tij->ptj", ds, self.dhat)  # (P, N, 2)
        dHs = ds @ self.cross_dhat_P.T  # (P, N)
        dF = -dG
        dtau = -dHs - cross(dF, c[None]) - cross(F[None], dc)
        da_c = dF / M - F[None] * (dM / M ** 2)[:, None, None]
        dalpha = dtau / I - tau[None] * (dI / I ** 2)[:, None]
        da_xy = (
            da_c
            + dalpha[..., None] * perp(d)[None]
            - alpha[None, :, None] * perp(dc)
            + w2[None, :, None] * dc
        )
        dpred = self.dt[None, :, None] * np.concatenate([da_xy, dalpha[..., None]], axis=-1)  # (P, N, 3)
        grad = 2.0 * np.einsum("ptk,tk->p", dpred, residual)
        return loss, grad
