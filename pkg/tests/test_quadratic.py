import numpy as np
import pytest

from kappa_gen import kappa_batch, quaternion_tensor, quaternions
from pc4 import core
from pc4.core import ValidationError
from pc4.quadratic import (
    DissidentParams,
    KTuple,
    PlanarMapParams,
    build_pc_algebra,
    build_quadratic_algebra,
    check_dissident,
    delta_matrix,
    eps_matrix,
    eta,
    imaginary_space,
    is_planar,
    planar_map_matrix,
    xi,
)

e1, e2, e3 = np.eye(3)


def test_ktuple_validation_messages():
    with pytest.raises(ValidationError, match="lambda is zero"):
        KTuple([0, 0, 0], [0, 0, 0], [0, 0, 0], [1, 1, 1], 0.0)
    with pytest.raises(ValidationError, match="d not sorted"):
        KTuple([0, 0, 0], [0, 0, 0], [0, 0, 0], [2, 1, 3], 1.0)
    with pytest.raises(ValidationError, match="d not positive"):
        KTuple([0, 0, 0], [0, 0, 0], [0, 0, 0], [0, 1, 3], 1.0)
    with pytest.raises(ValidationError):
        KTuple([0, 0], [0, 0, 0], [0, 0, 0], [1, 1, 1], 1.0)
    with pytest.raises(ValidationError, match="missing"):
        KTuple.from_dict({"x": [0, 0, 0]})


def test_ktuple_round_trip():
    k = kappa_batch(1, seed=0)[0]
    assert KTuple.from_dict(k.to_dict()).allclose(k, 0.0)


def test_eps_delta_xi_eta():
    assert np.all(eps_matrix([0, 0, 0]) == 0)
    assert np.allclose(eps_matrix(e1) @ e2, e3)
    assert np.allclose(delta_matrix([1, 2, 3]), np.diag([1, 2, 3]))
    u = np.array([0.3, -1.0, 2.0])
    assert xi([1, 2, 3], u, u) == 0
    assert np.allclose(eta([1, 2, 3], [1, 2, 3], u, u), 0)
    assert np.allclose(eta([0, 0, 0], [1, 1, 1], e1, e2), e3)
    assert xi([0, 0, 1], e1, e2) == 1


def test_dissident_check():
    r = check_dissident([0, 0, 0], [1, 1, 1])
    assert r.passed and np.isclose(r.statistic, 1.0)
    assert not check_dissident([0, 0, 0], [0, 1, 1]).passed
    assert check_dissident([0.5, -1, 2], [0.2, 0.7, 1.5]).passed


def test_quadratic_algebra():
    H = build_quadratic_algebra(DissidentParams([0, 0, 0], [0, 0, 0], [1, 1, 1]))
    assert np.allclose(H.c, quaternion_tensor())
    rng = np.random.default_rng(1)
    B = build_quadratic_algebra(DissidentParams(rng.uniform(-2, 2, 3), rng.uniform(-2, 2, 3), [0.5, 1, 2]))
    for _ in range(10):
        a = rng.standard_normal(4)
        assert np.allclose(core.multiply(B, [1, 0, 0, 0], a), a)
        assert np.allclose(core.multiply(B, a, [1, 0, 0, 0]), a)
        v = np.concatenate([[0.0], a[1:]])
        assert np.allclose(core.multiply(B, v, v), [-(v @ v), 0, 0, 0])


def test_planar_maps():
    assert np.allclose(planar_map_matrix(PlanarMapParams([0, 0, 0], 1.0)), np.eye(4))
    T = planar_map_matrix(PlanarMapParams([1, 2, 3], 2.0), 4)
    assert np.allclose(T[0], [1, 1, 2, 3]) and np.allclose(T[1:, 1:], 2 * np.eye(3))
    assert np.isclose(np.linalg.det(T), 8.0)
    with pytest.raises(ValidationError):
        planar_map_matrix(PlanarMapParams([1, 2, 3], 2.0), 5)


def test_is_planar():
    H = quaternions()
    assert is_planar(H, planar_map_matrix(PlanarMapParams([0.4, -1, 2], -0.7)))
    T = np.eye(4)
    T[1, 0] = 1.0  # T(1) = 1 + e1
    assert not is_planar(H, T)
    assert not is_planar(H, np.diag([1.0, 1, 2, 3]))


def test_imaginary_space_of_quaternions():
    im = imaginary_space(quaternions())
    assert im.shape == (4, 3) and np.allclose(im[0], 0)


def test_pc_algebra_matches_isotope_route():
    from pc4.quadratic import dissident_params, planar_params
    for k in kappa_batch(20, seed=2):
        B = build_quadratic_algebra(dissident_params(k))
        T = planar_map_matrix(planar_params(k))
        assert np.abs(build_pc_algebra(k).c - core.isotope(B, T, T).c).max() <= 1e-12


def test_unitalized_algebra_is_the_quadratic_one():
    # L_e is the planar map, so undoing it recovers the underlying algebra for any z
    from pc4.quadratic import dissident_params
    for k in kappa_batch(10, seed=3):
        B = core.unitalize(build_pc_algebra(k), [1, 0, 0, 0])
        assert np.allclose(B.c, build_quadratic_algebra(dissident_params(k)).c, atol=1e-12)
