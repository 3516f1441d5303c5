import math

import numpy as np
import pytest

from src.actions.spec import rotate
from src.actions.trajectories import kinematic_trajectory
from src.config import SimConfig
from src.errors import DivergenceError, InvalidShapeError, SingularInertiaError
from src.models.groups import HiddenStates, hidden_states_of
from src.physics.dynamics import (
    compute_accel,
    free_inputs,
    kinetic_energy,
    simulate,
    stable_dt_bound,
    step,
)
from src.physics.kinematics import ObjectState, WrenchInput, rotation, world_kinematics

from tests.conftest import make_l_object


def test_rotation_is_clockwise():
    R = rotation(math.pi / 2)
    np.testing.assert_allclose(R @ np.array([1.0, 0.0]), [0.0, -1.0], atol=1e-15)
    stacked = rotation(np.array([0.0, math.pi / 2]))
    assert stacked.shape == (2, 2, 2)
    np.testing.assert_allclose(stacked[1], R)


def test_translation_moves_every_particle_alike(l_object):
    model, _, _ = l_object
    state = ObjectState(np.array([2.0, 1.0, 0.3]), np.array([1.0, 0.0, 0.0]))
    _, velocities = world_kinematics(model, state)
    np.testing.assert_allclose(velocities, np.tile([1.0, 0.0], (model.n_p, 1)))


def test_rotation_center_is_at_rest(l_object):
    model, _, _ = l_object
    state = ObjectState(np.array([1.0, 0.0, 0.7]), np.array([0.0, 0.0, 2.0]))
    _, velocities = world_kinematics(model, state, reference=2)
    np.testing.assert_allclose(velocities[2], [0.0, 0.0])


def test_identity_pose_gives_body_positions(l_object):
    model, _, _ = l_object
    positions, _ = world_kinematics(model, ObjectState.at_rest())
    np.testing.assert_allclose(positions, model.positions)


def test_force_through_center_line_gives_no_torque(two_rod, sim_config):
    model, maps, params = two_rod
    H = hidden_states_of(model, maps, params)
    a = compute_accel(model, maps, H, ObjectState.at_rest(), WrenchInput(0, [6.0, 0.0, 0.0]), sim_config)
    np.testing.assert_allclose(a, [1.0, 0.0, 0.0], atol=1e-12)


def test_perpendicular_force_turns_the_rod(two_rod, sim_config):
    model, maps, params = two_rod
    H = hidden_states_of(model, maps, params)
    a = compute_accel(model, maps, H, ObjectState.at_rest(), WrenchInput(0, [0.0, 6.0, 0.0]), sim_config)
    np.testing.assert_allclose(a, [0.0, 1.0, 66 / 41], atol=1e-12)


def test_no_force_no_acceleration(two_rod, sim_config):
    model, maps, params = two_rod
    H = hidden_states_of(model, maps, params)
    state = ObjectState(np.zeros(3), np.array([0.3, -0.2, 0.5]))
    a = compute_accel(model, maps, H, state, WrenchInput(1, np.zeros(3)), sim_config)
    np.testing.assert_allclose(a, 0.0)


def test_grasp_point_invariance(sim_config):
    model, maps, params = make_l_object(mu=0.3)
    H = hidden_states_of(model, maps, params)
    state = ObjectState(np.array([0.2, -0.1, 0.4]), np.array([0.1, 0.05, -0.3]))
    positions, _ = world_kinematics(model, state)
    force = np.array([1.5, -0.7])
    torque = 0.2
    a_i = compute_accel(model, maps, H, state, WrenchInput(1, [*force, torque]), sim_config)
    lever = positions[1] - positions[3]
    compensated = torque + force[0] * lever[1] - force[1] * lever[0]
    a_j = compute_accel(model, maps, H, state, WrenchInput(3, [*force, compensated]), sim_config)
    np.testing.assert_allclose(a_i, a_j, atol=1e-12)


def test_angular_accel_linear_in_torque(two_rod, sim_config):
    model, maps, params = two_rod
    H = hidden_states_of(model, maps, params)
    alphas = [
        compute_accel(model, maps, H, ObjectState.at_rest(), WrenchInput(2, [0.5, 1.0, u_w]), sim_config)[2]
        for u_w in (0.0, 1.0, 2.0)
    ]
    assert alphas[2] - alphas[1] == pytest.approx(alphas[1] - alphas[0], abs=1e-12)


def test_singular_inertia(two_rod, sim_config):
    model, maps, _ = two_rod
    state = ObjectState.at_rest()
    with pytest.raises(SingularInertiaError):
        compute_accel(model, maps, HiddenStates(0.0, 1.0, [0, 0], [0, 0]), state, WrenchInput(0, [1, 0, 0]), sim_config)
    with pytest.raises(SingularInertiaError):
        compute_accel(model, maps, HiddenStates(1.0, 0.0, [0, 0], [0, 0]), state, WrenchInput(0, [0, 0, 1]), sim_config)


def test_step_uses_pre_update_velocity():
    config = SimConfig(dt=0.01)
    moved = step(ObjectState(np.zeros(3), np.array([1.0, 0.0, 0.0])), np.zeros(3), config)
    np.testing.assert_allclose(moved.pose, [0.01, 0.0, 0.0])
    np.testing.assert_allclose(moved.velocity, [1.0, 0.0, 0.0])

    pushed = step(ObjectState.at_rest(), np.array([1.0, 0.0, 0.0]), config)
    np.testing.assert_allclose(pushed.pose, 0.0)
    np.testing.assert_allclose(pushed.velocity, [0.01, 0.0, 0.0])


def test_constant_acceleration_matches_discrete_sums():
    config = SimConfig(dt=0.01)
    a = np.array([0.5, -0.25, 0.125])
    v0 = np.array([0.1, 0.2, -0.3])
    state = ObjectState(np.zeros(3), v0)
    n = 100
    for _ in range(n):
        state = step(state, a, config)
    dt = config.dt
    np.testing.assert_allclose(state.velocity, v0 + n * a * dt, atol=1e-12)
    np.testing.assert_allclose(state.pose, n * v0 * dt + a * dt * dt * n * (n - 1) / 2, atol=1e-12)


def test_frictionless_coasting(two_rod, sim_config):
    model, maps, params = two_rod
    H = hidden_states_of(model, maps, params)
    initial = ObjectState(np.zeros(3), np.array([0.2, 0.1, 0.0]))
    traj = simulate(model, maps, H, initial, free_inputs(0, 50), sim_config)
    np.testing.assert_allclose(traj.velocities, np.tile(initial.velocity, (51, 1)))
    np.testing.assert_allclose(traj.poses[-1], [0.1, 0.05, 0.0], atol=1e-12)


def test_sliding_friction_stops_translation():
    config = SimConfig(dt=0.01)
    model, maps, params = make_l_object(mu=0.1)
    H = hidden_states_of(model, maps, params, config.gravity)
    decel = 0.1 * config.gravity
    initial = ObjectState(np.zeros(3), np.array([10 * decel * config.dt, 0.0, 0.0]))
    traj = simulate(model, maps, H, initial, free_inputs(0, 20), config)

    speeds = np.linalg.norm(traj.velocities[:, :2], axis=1)
    assert np.all(np.diff(speeds) <= 1e-15)
    np.testing.assert_allclose(speeds[:11], initial.velocity[0] - decel * config.dt * np.arange(11), atol=1e-12)
    assert speeds[-1] < config.velocity_epsilon
    np.testing.assert_allclose(traj.velocities[:, 2], 0.0, atol=1e-12)


@pytest.mark.parametrize("speed", [0.05, 0.2, 1.0])
def test_friction_dissipates_below_stable_dt(speed):
    config = SimConfig(dt=0.01, velocity_epsilon=0.0)
    model, maps, params = make_l_object(mu=0.2)
    H = hidden_states_of(model, maps, params, config.gravity)
    assert config.dt < stable_dt_bound(H, maps, speed)

    velocity = speed * np.array([0.6, 0.8, 0.0])
    state = ObjectState(np.zeros(3), velocity)
    a = compute_accel(model, maps, H, state, WrenchInput(0, np.zeros(3)), config)
    after = step(state, a, config)
    assert kinetic_energy(model, H, after) <= kinetic_energy(model, H, state)


def test_simulate_is_deterministic(sim_config):
    model, maps, params = make_l_object(mu=0.3)
    H = hidden_states_of(model, maps, params)
    initial = ObjectState(np.zeros(3), np.array([0.1, 0.0, 0.5]))
    inputs = [WrenchInput(1, [0.5, 0.2, 0.01])] * 30
    first = simulate(model, maps, H, initial, inputs, sim_config)
    second = simulate(model, maps, H, initial, inputs, sim_config)
    np.testing.assert_array_equal(first.poses, second.poses)
    np.testing.assert_array_equal(first.velocities, second.velocities)


def test_simulate_errors(two_rod, sim_config):
    model, maps, params = two_rod
    H = hidden_states_of(model, maps, params)
    with pytest.raises(InvalidShapeError):
        simulate(model, maps, H, ObjectState.at_rest(), [], sim_config)
    with pytest.raises(DivergenceError) as info:
        simulate(model, maps, H, ObjectState.at_rest(), [WrenchInput(0, [np.inf, 0.0, 0.0])], sim_config)
    assert info.value.step == 0


def test_rereferenced_trajectory_describes_the_same_motion(l1):
    model, _, _ = l1
    traj = kinematic_trajectory(rotate(4, 0.3, 1.0), model)
    moved = traj.rereferenced(model, 0)
    assert moved.reference == 0
    assert traj.rereferenced(model, 4) is traj
    for t in (0, 50, traj.n_steps):
        positions, velocities = world_kinematics(model, traj.state(t), traj.reference)
        moved_positions, moved_velocities = world_kinematics(model, moved.state(t), 0)
        np.testing.assert_allclose(moved_positions, positions, atol=1e-12)
        np.testing.assert_allclose(moved_velocities, velocities, atol=1e-12)
    np.testing.assert_array_equal(moved.wrenches, traj.wrenches)
