import numpy as np
import pytest

from src.errors import CatalogError, InconsistentGroupingError, InvalidParametersError, InvalidShapeError
from src.models.catalog import (
    builtin_object,
    catalog_descriptor,
    catalog_names,
    descriptor_from_object,
    load_descriptor,
    object_from_descriptor,
    resolve_object,
    save_descriptor,
)
from src.models.groups import GroupMaps, ObjectParams, hidden_states_of, particle_masses
from src.models.particles import build_grid_model


def test_row_mask_positions():
    model = build_grid_model([[1, 1, 1, 1]], 0.05)
    assert model.n_p == 4
    np.testing.assert_allclose(model.positions[:, 0], [0.0, 0.05, 0.10, 0.15])
    np.testing.assert_allclose(model.positions[:, 1], 0.0)


def test_origin_is_first_occupied_cell():
    model = build_grid_model([[0, 1, 1], [1, 1, 0]], 1.0)
    np.testing.assert_allclose(model.positions, [[0, 0], [1, 0], [-1, 1], [0, 1]])


def test_single_cell_mask_rejected():
    with pytest.raises(InvalidShapeError):
        build_grid_model([[0, 1, 0]], 1.0)


def test_masks_default_to_occupancy():
    model = build_grid_model([[1, 1], [1, 0]], 1.0)
    assert model.contact_mask.all()
    assert model.graspable_mask.all()
    np.testing.assert_array_equal(model.graspable_indices, [0, 1, 2])


def test_two_rod_hidden_states(two_rod):
    model, maps, params = two_rod
    H = hidden_states_of(model, maps, params)
    assert H.M == pytest.approx(6.0)
    np.testing.assert_allclose(H.c, [11 / 6, 0.0])
    assert H.I_cm == pytest.approx(41 / 6)
    np.testing.assert_allclose(H.s, 0.0)


def test_l_object_hidden_states(l_object):
    model, maps, params = l_object
    H = hidden_states_of(model, maps, params)
    assert H.M == pytest.approx(4.0)
    np.testing.assert_allclose(H.c, [0.75, 0.25])
    assert H.I_cm == pytest.approx(3.5)


def test_friction_magnitudes_per_contact_group():
    model = build_grid_model([[1, 1, 1, 1]], 1.0)
    maps = GroupMaps.from_assignments([0, 0, 1, 1], [0, 0, 1, 1])
    params = ObjectParams(m=[1.0, 2.0], mu=[0.5, 0.25])
    H = hidden_states_of(model, maps, params, gravity=10.0)
    np.testing.assert_allclose(H.s, [5.0, 5.0])
    np.testing.assert_allclose(H.particle_friction(maps), [5.0, 5.0, 5.0, 5.0])


def test_derived_contact_groups_follow_first_appearance():
    maps = GroupMaps.from_assignments([1, 0, 0, 1], [0, 0, -1, 0])
    np.testing.assert_array_equal(maps.contact_assignment, [0, 1, -1, 0])
    assert maps.n_s == 2
    np.testing.assert_array_equal(maps.contact_group_mass(), [1, 0])


def test_contact_group_spanning_mass_groups_rejected():
    model = build_grid_model([[1, 1]], 1.0)
    maps = GroupMaps.from_assignments([0, 1], [0, 0], contact=[0, 0])
    with pytest.raises(InconsistentGroupingError):
        hidden_states_of(model, maps, ObjectParams(m=[1.0, 1.0], mu=[0.1]))


def test_unused_group_index_rejected():
    with pytest.raises(InconsistentGroupingError):
        GroupMaps.from_assignments([0, 2], [0, 0])


def test_friction_without_contact_rejected():
    with pytest.raises(InconsistentGroupingError):
        GroupMaps(np.array([0, 0]), np.array([0, -1]), np.array([0, 0]))


def test_maps_must_match_contact_mask():
    model = build_grid_model([[1, 1]], 1.0, contact=[[1, 0]])
    maps = GroupMaps.from_assignments([0, 0], [0, 0])
    with pytest.raises(InconsistentGroupingError):
        maps.validate_for(model)


@pytest.mark.parametrize("m, mu", [([0.0, 1.0], [0.1]), ([1.0, -2.0], [0.1]), ([1.0, 1.0], [-0.1])])
def test_invalid_parameters_rejected(m, mu):
    with pytest.raises(InvalidParametersError):
        ObjectParams(m=m, mu=mu)


def test_parameter_count_checked(two_rod):
    model, maps, _ = two_rod
    with pytest.raises(InvalidParametersError):
        hidden_states_of(model, maps, ObjectParams(m=[1.0], mu=[0.0]))


def test_particle_masses(two_rod):
    _, maps, params = two_rod
    np.testing.assert_allclose(particle_masses(maps, params.m), [1, 1, 2, 2])


def test_catalog_objects_load():
    names = catalog_names()
    assert names == ["I1", "I2", "L1", "L2", "F1", "F2", "hammer", "wrench"]
    for name in names:
        model, maps, params = builtin_object(name)
        H = hidden_states_of(model, maps, params)
        assert H.M > 0 and H.I_cm > 0
        assert len(H.s) == maps.n_s


@pytest.mark.parametrize("name", catalog_names())
def test_catalog_parallel_axis(name):
    model, maps, params = builtin_object(name)
    H = hidden_states_of(model, maps, params)
    masses = particle_masses(maps, params.m)
    for j in range(model.n_p):
        about_j = masses @ np.sum((model.positions - model.positions[j]) ** 2, axis=1)
        shifted = H.I_cm + H.M * np.sum((model.positions[j] - H.c) ** 2)
        assert about_j == pytest.approx(shifted, rel=1e-9)


def test_hammer_contacts_only_at_head(hammer):
    model, maps, _ = hammer
    assert maps.n_s == 1
    assert 0 < len(model.contact_indices) < model.n_p


def test_unknown_catalog_name():
    with pytest.raises(CatalogError):
        builtin_object("teapot")
    with pytest.raises(CatalogError):
        resolve_object("teapot")


def test_descriptor_file_reproduces_object(tmp_path, l1):
    model, maps, params = l1
    path = tmp_path / "l1.json"
    save_descriptor(descriptor_from_object(model, maps, params, name="L1"), path)
    name, descriptor = resolve_object(str(path))
    assert name == "L1"
    model2, maps2, params2 = object_from_descriptor(descriptor)
    np.testing.assert_allclose(model2.positions, model.positions)
    np.testing.assert_array_equal(maps2.contact_assignment, maps.contact_assignment)
    np.testing.assert_allclose(params2.m, params.m)


def test_invalid_descriptor_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"spacing": 1.0}')
    with pytest.raises(CatalogError):
        load_descriptor(path)


@pytest.mark.parametrize("scale", [0.5, 3.0])
def test_hidden_states_scale_with_mass(l1, scale):
    model, maps, params = l1
    H = hidden_states_of(model, maps, params)
    scaled = hidden_states_of(model, maps, ObjectParams(m=params.m * scale, mu=params.mu))
    assert scaled.M == pytest.approx(scale * H.M)
    assert scaled.I_cm == pytest.approx(scale * H.I_cm)
    np.testing.assert_allclose(scaled.s, scale * H.s)
    np.testing.assert_allclose(scaled.c, H.c, atol=1e-12)


@pytest.mark.parametrize("quarter_turns", [1, 2, 3])
def test_rotated_layout_keeps_inertia_and_com_distances(quarter_turns):
    descriptor = catalog_descriptor("L1")
    occupancy = np.asarray(descriptor.occupancy, dtype=bool)
    groups = np.asarray(descriptor.mass_groups, dtype=int)
    _, maps, params = object_from_descriptor(descriptor)
    model = build_grid_model(occupancy, descriptor.spacing)

    turned = np.rot90(occupancy, quarter_turns)
    turned_model = build_grid_model(turned, descriptor.spacing)
    turned_maps = GroupMaps.from_assignments(np.rot90(groups, quarter_turns)[turned], [0] * turned_model.n_p)
    turned_params = ObjectParams(m=params.m, mu=[0.0])

    H = hidden_states_of(model, GroupMaps.from_assignments(maps.mass_assignment, [0] * model.n_p), turned_params)
    H_turned = hidden_states_of(turned_model, turned_maps, turned_params)
    assert H_turned.M == pytest.approx(H.M)
    assert H_turned.I_cm == pytest.approx(H.I_cm, rel=1e-12)
    np.testing.assert_allclose(
        np.sort(np.linalg.norm(turned_model.positions - H_turned.c, axis=1)),
        np.sort(np.linalg.norm(model.positions - H.c, axis=1)),
        atol=1e-12,
    )
