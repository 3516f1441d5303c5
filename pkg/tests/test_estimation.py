import numpy as np
import pytest

from src.actions.regression import regression_blocks
from src.actions.sampling import sample_actions
from src.actions.spec import enumerate_actions, rotate, slide
from src.actions.trajectories import inverse_dynamics_wrench, kinematic_trajectory
from src.config import EstimatorConfig
from src.errors import (
    DegenerateGeometryError,
    InconsistentSamplesError,
    InsufficientExcitationError,
    MassDistError,
    NonPhysicalInertiaError,
    RankDeficientError,
    UnidentifiableMassError,
)
from src.estimation.friction import estimate_s_gd, estimate_s_lsq, loss_and_grad, preconditioner_factor
from src.estimation.inertia import PivotInertiaSample, check_not_collinear, fit_pivot_inertia, solve_com_inertia
from src.estimation.masses import mass_equations, recover_m, recover_mu
from src.estimation.pipeline import HiddenStatesEstimator, run_pipeline, stage
from src.harness.metrics import nad
from src.harness.synthetic import SyntheticSource
from src.models.catalog import builtin_object, catalog_names
from src.models.groups import GroupMaps, HiddenStates, ObjectParams, hidden_states_of
from src.models.particles import build_grid_model

from tests.conftest import make_two_rod


def observed(actions, model, maps, H):
    """Noiseless trajectories with the exact wrench."""
    return [
        inverse_dynamics_wrench(kinematic_trajectory(a, model), model, maps, H, a.grasp_particle)
        for a in actions
    ]


# =============================================================================
# Stage 1: pivot inertia, center of mass
# =============================================================================

def test_pivot_inertia_of_two_rod():
    sample = fit_pivot_inertia([(1.0, 1 / 27), (2.0, 2 / 27), (3.0, 3 / 27)], pivot_particle=0)
    assert sample.I_j == pytest.approx(27.0)
    assert sample.residual == pytest.approx(0.0, abs=1e-12)


def test_friction_offset_leaves_slope_alone():
    pairs = [(1.0, 1 / 27 - 0.01), (2.0, 2 / 27 - 0.01), (3.0, 3 / 27 - 0.01)]
    sample = fit_pivot_inertia(pairs)
    assert sample.I_j == pytest.approx(27.0)
    assert sample.intercept == pytest.approx(-0.01)


def test_pivot_inertia_needs_two_torque_levels():
    with pytest.raises(InsufficientExcitationError):
        fit_pivot_inertia([(1.0, 0.1), (1.0, 0.1), (1.0, 0.1)])


def test_negative_slope_is_not_physical():
    with pytest.raises(NonPhysicalInertiaError):
        fit_pivot_inertia([(1.0, 0.3), (2.0, 0.2), (3.0, 0.1)])


def test_center_of_mass_of_l_object():
    samples = [
        PivotInertiaSample(0, 6.0, 0.0, (0.0, 0.0)),
        PivotInertiaSample(2, 10.0, 0.0, (2.0, 0.0)),
        PivotInertiaSample(3, 8.0, 0.0, (0.0, 1.0)),
    ]
    c, I_cm, residual = solve_com_inertia(samples, 4.0)
    np.testing.assert_allclose(c, [0.75, 0.25], atol=1e-12)
    assert I_cm == pytest.approx(3.5)
    assert residual == pytest.approx(0.0, abs=1e-12)

    c2, I_cm2, _ = solve_com_inertia(samples + [samples[1]], 4.0)
    np.testing.assert_allclose(c2, c, atol=1e-12)
    assert I_cm2 == pytest.approx(I_cm)


def test_parallel_axis_samples_reproduce_com(rng):
    M, I_cm, c = 2.5, 0.8, np.array([0.3, -0.2])
    pivots = rng.uniform(-1.0, 1.0, size=(5, 2))
    samples = [PivotInertiaSample(i, I_cm + M * float((p - c) @ (p - c)), 0.0, p) for i, p in enumerate(pivots)]
    c_est, I_est, _ = solve_com_inertia(samples, M)
    np.testing.assert_allclose(c_est, c, atol=1e-10)
    assert I_est == pytest.approx(I_cm, abs=1e-10)


def test_collinear_pivots_are_degenerate():
    samples = [PivotInertiaSample(i, 27.0 - i, 0.0, (float(i), 0.0)) for i in range(4)]
    assert not check_not_collinear(np.array([s.pivot_position for s in samples]))
    with pytest.raises(DegenerateGeometryError):
        solve_com_inertia(samples, 6.0)


def test_inconsistent_inertias_rejected():
    samples = [
        PivotInertiaSample(0, 0.1, 0.0, (0.0, 0.0)),
        PivotInertiaSample(1, 0.1, 0.0, (1.0, 0.0)),
        PivotInertiaSample(2, 0.1, 0.0, (0.0, 1.0)),
    ]
    with pytest.raises(InconsistentSamplesError):
        solve_com_inertia(samples, 4.0)


# =============================================================================
# Stage 2: friction magnitudes
# =============================================================================

def test_loss_gradient_matches_finite_differences(rng):
    h = 1e-6
    for _ in range(100):
        n_s = int(rng.integers(1, 5))
        A = rng.standard_normal((12, n_s))
        B = rng.standard_normal(12)
        deltas = rng.standard_normal(12)
        s = rng.standard_normal(n_s)
        _, grad = loss_and_grad(s, A, B, deltas)
        numeric = np.array([
            (loss_and_grad(s + h * e, A, B, deltas)[0] - loss_and_grad(s - h * e, A, B, deltas)[0]) / (2 * h)
            for e in np.eye(n_s)
        ])
        np.testing.assert_allclose(grad, numeric, rtol=1e-6, atol=1e-6)


def test_loss_of_empty_data():
    loss, grad = loss_and_grad(np.zeros(2), np.zeros((0, 2)), np.zeros(0), np.zeros(0))
    assert loss == 0.0
    np.testing.assert_array_equal(grad, 0.0)


def test_closed_form_recovers_friction(l1):
    model, maps, params = l1
    H = hidden_states_of(model, maps, params)
    actions = sample_actions(enumerate_actions(model), maps.n_s, 0, 10, model, maps, H.M, H.c)
    A, B, deltas = regression_blocks(observed(actions, model, maps, H), model, maps, H.M, H.I_cm, H.c)
    result = estimate_s_lsq(A, B, deltas)
    np.testing.assert_allclose(result.s, H.s, rtol=1e-8)
    assert not result.warnings

    _, grad = loss_and_grad(result.s, A, B, deltas)
    assert np.linalg.norm(grad) < 1e-10 * max(1.0, np.linalg.norm(A.T @ deltas))


def test_frictionless_object_gives_zero_friction(two_rod):
    model, maps, params = two_rod
    H = hidden_states_of(model, maps, params)
    actions = [rotate(0, 0.2, 2.0), rotate(3, -0.2, 2.0)]
    A, B, deltas = regression_blocks(observed(actions, model, maps, H), model, maps, H.M, H.I_cm, H.c)
    np.testing.assert_allclose(estimate_s_lsq(A, B, deltas).s, 0.0, atol=1e-9)


def test_single_slide_cannot_separate_three_groups():
    model = build_grid_model([[1, 1, 1]], 0.05)
    maps = GroupMaps.from_assignments([0, 1, 2], [0, 0, 0])
    params = ObjectParams(m=[0.1, 0.2, 0.3], mu=[0.3])
    H = hidden_states_of(model, maps, params)
    A, B, deltas = regression_blocks(
        observed([slide(0, 0.5, 0.05, 1.0)], model, maps, H), model, maps, H.M, H.I_cm, H.c
    )
    with pytest.raises(RankDeficientError) as info:
        estimate_s_lsq(A, B, deltas)
    assert info.value.rank <= 2


def well_conditioned_problem(rng, n_s=3):
    A = rng.standard_normal((30, n_s))
    s_true = rng.uniform(0.5, 2.0, n_s)
    B = rng.standard_normal(30)
    return A, B, A @ s_true + B, s_true


def test_gradient_descent_from_zero_converges(rng):
    A, B, deltas, s_true = well_conditioned_problem(rng)
    result = estimate_s_gd(np.zeros(3), A, B, deltas, EstimatorConfig())
    assert result.converged
    assert result.iterations <= 500
    np.testing.assert_allclose(result.s, s_true, rtol=1e-6)
    assert np.all(np.diff(result.trace) <= 1e-12)
    np.testing.assert_allclose(result.s, estimate_s_lsq(A, B, deltas).s, rtol=1e-6)


def test_gradient_descent_at_optimum_stops_at_once(rng):
    A, B, deltas, _ = well_conditioned_problem(rng)
    s_star = estimate_s_lsq(A, B, deltas).s
    result = estimate_s_gd(s_star, A, B, deltas, EstimatorConfig())
    assert result.converged
    assert result.iterations == 1


def test_unstable_rate_is_halved(rng):
    A, B, deltas, s_true = well_conditioned_problem(rng)
    config = EstimatorConfig(learning_rate=10.0, max_iters=5000, preconditioner="none")
    result = estimate_s_gd(np.zeros(3), A, B, deltas, config)
    assert result.halvings and result.halvings[0] == 10.0
    assert result.learning_rate < 2.0 / np.linalg.eigvalsh(2.0 * A.T @ A)[-1]
    assert np.all(np.diff(result.trace) <= 1e-12)
    assert result.trace[-1] < result.trace[0]


def test_whitened_rate_bound_is_one(rng):
    A, B, deltas, s_true = well_conditioned_problem(rng)
    result = estimate_s_gd(np.zeros(3), A, B, deltas, EstimatorConfig(learning_rate=10.0))
    assert result.halvings == [10.0, 5.0, 2.5, 1.25]
    assert result.learning_rate == pytest.approx(0.625)
    assert result.converged
    np.testing.assert_allclose(result.s, s_true, rtol=1e-6)


@pytest.mark.parametrize("kind", ["cholesky", "diagonal", "none"])
def test_preconditioner_factor_is_well_formed(rng, kind):
    A = rng.standard_normal((30, 3)) * [1.0, 10.0, 100.0]
    T = preconditioner_factor(A, kind)
    assert T.shape == (3, 3)
    if kind == "cholesky":
        np.testing.assert_allclose(T.T @ A.T @ A @ T, np.eye(3), atol=1e-10)
    elif kind == "diagonal":
        np.testing.assert_allclose(np.diag(T.T @ A.T @ A @ T), 1.0)
    else:
        np.testing.assert_array_equal(T, np.eye(3))


def test_singular_normal_matrix_falls_back_to_diagonal():
    A = np.array([[1.0, 0.0], [2.0, 0.0], [0.0, 0.0]])
    T = preconditioner_factor(A, "cholesky")
    np.testing.assert_allclose(T, np.diag([1.0 / np.sqrt(5.0), 1.0]))


@pytest.mark.parametrize("name", catalog_names())
def test_gradient_descent_agrees_with_closed_form_on_catalog(name):
    model, maps, params = builtin_object(name)
    H = hidden_states_of(model, maps, params)
    actions = sample_actions(enumerate_actions(model), maps.n_s, 0, 10, model, maps, H.M, H.c)
    A, B, deltas = regression_blocks(observed(actions, model, maps, H), model, maps, H.M, H.I_cm, H.c)
    closed = estimate_s_lsq(A, B, deltas)
    descent = estimate_s_gd(np.zeros(maps.n_s), A, B, deltas, EstimatorConfig())
    assert descent.converged
    assert descent.iterations <= 500
    np.testing.assert_allclose(descent.s, H.s, rtol=1e-6)
    np.testing.assert_allclose(descent.s, closed.s, rtol=1e-6)


def test_gradient_descent_on_single_contact_group(hammer):
    model, maps, params = hammer
    H = hidden_states_of(model, maps, params)
    grasp = int(model.graspable_indices[0])
    A, B, deltas = regression_blocks(
        observed([slide(grasp, 0.0, 0.05, 1.0)], model, maps, H), model, maps, H.M, H.I_cm, H.c
    )
    result = estimate_s_gd(np.zeros(1), A, B, deltas, EstimatorConfig())
    assert result.converged
    np.testing.assert_allclose(result.s, H.s, rtol=1e-6)


# =============================================================================
# Stage 3: masses
# =============================================================================

def test_two_rod_masses(two_rod):
    model, maps, params = two_rod
    recovery = recover_m(hidden_states_of(model, maps, params), model, maps)
    np.testing.assert_allclose(recovery.m, [1.0, 2.0], rtol=1e-10)
    assert recovery.residual < 1e-10


@pytest.mark.parametrize("name", catalog_names())
def test_masses_invert_hidden_states(name):
    model, maps, params = builtin_object(name)
    H = hidden_states_of(model, maps, params)
    recovery = recover_m(H, model, maps)
    np.testing.assert_allclose(recovery.m, params.m, rtol=1e-8)
    np.testing.assert_allclose(recover_mu(H.s, recovery.m, maps), params.mu, rtol=1e-8)


def test_symmetric_rod_masses_from_exact_moments():
    model = build_grid_model([[1, 1, 1, 1, 1, 1]], 0.05)
    maps = GroupMaps.from_assignments([0, 1, 1, 1, 1, 0], [0] * 6)
    params = ObjectParams(m=[0.35, 1.1], mu=[0.2])
    H = hidden_states_of(model, maps, params)
    lhs, rhs = mass_equations(H, model, maps)
    assert not np.any(np.all(lhs == 0.0, axis=1))
    assert len(lhs) == 4  # count, x moment, second moment, friction ratio
    np.testing.assert_allclose(lhs @ params.m, rhs, rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(recover_m(H, model, maps).m, params.m, rtol=1e-10)


def test_rounding_noise_in_com_does_not_corrupt_masses(hammer):
    model, maps, params = hammer
    H = hidden_states_of(model, maps, params)
    jittered = HiddenStates(M=H.M, I_cm=H.I_cm, c=H.c + 1e-15, s=H.s)
    np.testing.assert_allclose(recover_m(jittered, model, maps).m, params.m, rtol=1e-8)


def test_single_mass_group_is_uniform(l_object):
    model, maps, _ = l_object
    H = HiddenStates(M=2.0, I_cm=123.0, c=[5.0, 5.0], s=[0.0])
    np.testing.assert_allclose(recover_m(H, model, maps).m, [0.5])


def test_five_mass_groups_are_unidentifiable():
    model = build_grid_model([[1, 1, 1, 1, 1]], 0.05)
    maps = GroupMaps.from_assignments(range(5), [0] * 5)
    params = ObjectParams(m=[0.1, 0.2, 0.3, 0.4, 0.5], mu=[0.0])
    with pytest.raises(UnidentifiableMassError) as info:
        recover_m(hidden_states_of(model, maps, params), model, maps)
    assert info.value.null_dim > 0


# =============================================================================
# Pipeline
# =============================================================================

def test_stage_tags_domain_errors():
    with pytest.raises(MassDistError) as info:
        with stage("friction"):
            raise RankDeficientError("low rank", rank=1)
    assert info.value.stage == "friction"
    assert str(info.value) == "[friction] low rank"


def test_pipeline_recovers_l1_masses(l1):
    model, maps, params = l1
    source = SyntheticSource(model, maps, params)
    report = run_pipeline(model, maps, source, seed=3, object_name="L1")
    H = hidden_states_of(model, maps, params)

    assert report.method == "hidden_states"
    assert nad(report.masses, params.m, maps) < 0.01
    np.testing.assert_allclose(report.hidden_states.c, H.c, atol=1e-8)
    assert report.hidden_states.I_cm == pytest.approx(H.I_cm, rel=1e-6)
    np.testing.assert_allclose(report.hidden_states.s, H.s, rtol=1e-6)
    np.testing.assert_allclose(report.s_closed_form, H.s, rtol=1e-6)
    assert report.converged
    assert all(value >= 0 for value in report.residuals.values())
    assert len(report.pivots) == 4
    assert report.runtime is not None


def test_object_level_estimates_ignore_friction(l1):
    model, maps, params = l1
    estimator = HiddenStatesEstimator(model, maps, seed=5)
    slippery = ObjectParams(m=params.m, mu=params.mu * 0.5)
    first = estimator.collect(SyntheticSource(model, maps, params))
    second = estimator.collect(SyntheticSource(model, maps, slippery))
    np.testing.assert_allclose(first.c, second.c, atol=1e-9)
    assert first.I_cm == pytest.approx(second.I_cm, rel=1e-9)
    assert first.pivots == second.pivots


def test_single_torque_level_fails_stage_one(l1):
    model, maps, params = l1
    estimator = HiddenStatesEstimator(model, maps, EstimatorConfig(torque_levels=1))
    with pytest.raises(InsufficientExcitationError) as info:
        estimator.collect(SyntheticSource(model, maps, params))
    assert info.value.stage == "pivot inertia"
    assert info.value.exit_code == 2


def test_collinear_graspable_particles_fail():
    model, maps, params = make_two_rod(mu=0.1)
    with pytest.raises(DegenerateGeometryError) as info:
        HiddenStatesEstimator(model, maps).collect(SyntheticSource(model, maps, params))
    assert info.value.stage == "pivot inertia"


def test_parallel_sweeps_match_serial(l1):
    model, maps, params = l1
    source = SyntheticSource(model, maps, params)
    serial = HiddenStatesEstimator(model, maps, EstimatorConfig(workers=1), seed=2).collect(source)
    parallel = HiddenStatesEstimator(model, maps, EstimatorConfig(workers=4), seed=2).collect(source)
    np.testing.assert_array_equal(serial.c, parallel.c)
    assert serial.I_cm == parallel.I_cm
    assert serial.selected == parallel.selected
