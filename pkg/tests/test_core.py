import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kappa_gen import kappa_batch, quaternion_tensor, quaternions
from pc4 import core
from pc4.core import AlgebraTable, ValidationError
from pc4.quadratic import KTuple, build_pc_algebra, omnipresent_idempotent, planar_map_matrix, PlanarMapParams

H = quaternions()
E = omnipresent_idempotent()
ONE, I, J, K = np.eye(4)


def perturbed(A, eps=0.1, seed=0):
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(A.c.shape)
    noise[:, 0, 0] = 0.0  # keep e e = e so idempotent-based checks still apply
    return AlgebraTable(A.c + eps * noise)


def test_table_validation():
    with pytest.raises(ValidationError):
        AlgebraTable(np.zeros((2, 3, 3)))
    with pytest.raises(ValidationError):
        AlgebraTable(np.full((2, 2, 2), np.nan))
    with pytest.raises(ValidationError):
        core.multiply(H, np.ones(3), ONE)


def test_quaternion_products():
    assert np.allclose(H.c, quaternion_tensor())
    assert np.allclose(core.multiply(H, I, J), K)
    assert np.allclose(core.commutator(H, I, J), 2 * K)


def test_omnipresent_idempotent_squares_to_itself():
    for k in kappa_batch(5, seed=1):
        assert np.allclose(core.multiply(build_pc_algebra(k), E, E), E, atol=1e-14)


def test_left_mult_of_e_is_planar_map():
    k = kappa_batch(1, seed=2)[0]
    L = core.left_mult_matrix(build_pc_algebra(k), E)
    assert np.allclose(L, planar_map_matrix(PlanarMapParams(k.z, k.lam)), atol=1e-14)
    assert np.isclose(np.linalg.det(L), k.lam ** 3)


def test_quaternion_norm_is_multiplicative():
    rng = np.random.default_rng(3)
    for a in rng.standard_normal((10, 4)):
        assert np.isclose(np.linalg.det(core.left_mult_matrix(H, a)), np.linalg.norm(a) ** 4)
        assert np.isclose(np.linalg.det(core.right_mult_matrix(H, a)), np.linalg.norm(a) ** 4)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=8, max_size=8))
def test_commutator_bullet_identities(vals):
    A = build_pc_algebra(kappa_batch(1, seed=4)[0])
    a, b = np.array(vals[:4]), np.array(vals[4:])
    assert np.allclose(core.commutator(A, a, a), 0)
    lhs = core.bullet(A, a, b) + core.commutator(A, a, b)
    assert np.allclose(lhs, 2 * core.multiply(A, a, b), atol=1e-9)


def test_centralizers():
    assert core.centralizer(H, ONE).rank == 4
    C = core.centralizer(H, I)
    assert C.rank == 2 and C.contains(ONE) and C.contains(I)
    assert core.centralizer(H, np.zeros(4)).degenerate
    for k in kappa_batch(5, seed=5):
        assert core.centralizer(build_pc_algebra(k), E).rank == 4


def test_generated_subalgebras():
    rng = np.random.default_rng(6)
    A = build_pc_algebra(kappa_batch(1, seed=6)[0])
    assert core.generated_subalgebra(A, E).rank == 1
    for x in rng.standard_normal((5, 4)):
        S = core.generated_subalgebra(H, x)
        assert S.rank == 2 and S.contains(ONE)
        assert core.generated_subalgebra(A, x).rank <= 2
    with pytest.raises(ValidationError):
        core.generated_subalgebra(H, np.zeros(4))


def test_identity_checks_on_known_algebras():
    assert core.check_third_power_assoc(H).statistic <= 1e-12
    assert core.check_polarized_identity(H).statistic <= 1e-12
    A = build_pc_algebra(kappa_batch(1, seed=7)[0])
    for check in (core.check_third_power_assoc, core.check_polarized_identity):
        assert check(A).passed
    assert core.check_omnipresent(A, E).passed
    assert core.check_omnipresent(H, ONE).passed
    assert core.check_idempotent_commutation(A, E).passed


def test_perturbed_tensor_fails_identities():
    P = perturbed(build_pc_algebra(kappa_batch(1, seed=8)[0]))
    r = core.check_third_power_assoc(P)
    assert not r.passed and r.max_residual > 1e-3
    assert not core.check_omnipresent(P, E).passed


def test_checks_are_seed_stable():
    A = build_pc_algebra(kappa_batch(1, seed=9)[0])
    assert core.check_polarized_identity(A, seed=4).to_dict() == core.check_polarized_identity(A, seed=4).to_dict()


def test_division_check():
    r = core.check_division_sampled(H)
    assert r.passed and np.isclose(r.statistic, 1.0)
    with pytest.raises(AttributeError):
        r.max_residual
    ones = AlgebraTable(np.ones((2, 2, 2)))
    assert not core.check_division_sampled(ones).passed


def test_centralizer_invariance():
    assert core.check_centralizer_invariance(H, ONE).statistic == 0
    A = build_pc_algebra(kappa_batch(1, seed=10)[0])
    assert core.check_centralizer_invariance(A, E).passed
    census = core.find_idempotents_newton(A, grid_density=3, n_random=20)
    for w in census.roots[:10]:
        assert core.check_centralizer_invariance(A, w).passed


def test_requires_idempotent():
    with pytest.raises(ValidationError):
        core.check_idempotent_commutation(H, I)
    with pytest.raises(ValidationError):
        core.is_exceptional_idempotent(H, 2 * ONE)


def test_newton_census_examples():
    assert np.allclose(core.find_idempotents_newton(H).roots, [ONE])
    zero = [0, 0, 0]
    unit = core.find_idempotents_newton(build_pc_algebra(KTuple(zero, zero, zero, [1, 1, 1], 1.0)))
    assert not unit.curve_flag and np.allclose(unit.roots, [E])
    sphere = core.find_idempotents_newton(build_pc_algebra(KTuple(zero, zero, zero, [1, 1, 1], 0.25)))
    assert sphere.curve_flag
    extra = sphere.roots[np.linalg.norm(sphere.roots - E, axis=1) > 1e-6]
    assert np.allclose(extra[:, 0], 2.0, atol=1e-8)
    assert np.allclose(np.linalg.norm(extra[:, 1:], axis=1), 4 * np.sqrt(2), atol=1e-8)


def test_newton_in_a_plane_finds_at_most_three():
    rng = np.random.default_rng(11)
    for k in kappa_batch(10, seed=11):
        A = build_pc_algebra(k)
        plane = rng.standard_normal((4, 2))
        census = core.find_idempotents_newton(A, subspace=plane, n_random=50)
        assert len(census) <= 3


def test_exceptional_idempotent():
    A = build_pc_algebra(kappa_batch(1, seed=12)[0])
    flag, info = core.is_exceptional_idempotent(A, E)
    assert not flag and info["centralizer_rank"] == 4
    with pytest.raises(ValidationError):
        core.is_exceptional_idempotent(AlgebraTable(np.ones((2, 2, 2))), [0.5, 0])


def test_isotopes():
    rng = np.random.default_rng(13)
    A = build_pc_algebra(kappa_batch(1, seed=13)[0])
    assert np.allclose(core.isotope(A, np.eye(4), np.eye(4)).c, A.c)
    T = rng.standard_normal((4, 4)) + 3 * np.eye(4)
    Ti = np.linalg.inv(T)
    assert np.allclose(core.isotope(core.isotope(A, T, T), Ti, Ti).c, A.c, atol=1e-10)
    with pytest.raises(ValidationError):
        core.isotope(A, np.zeros((4, 4)), np.eye(4))


def test_unitalize():
    assert np.allclose(core.unitalize(H, ONE).c, H.c)
    k = KTuple([0.3, 0.1, -0.4], [1, 0, 2], [0, 0, 0], [0.5, 1, 2], 1.7)
    A = build_pc_algebra(k)
    B = core.unitalize(A, E)
    assert np.allclose(core.identity_element(B), E, atol=1e-10)
    assert core.quadratic_defect(B, E) < 1e-10
    Le = core.left_mult_matrix(A, E)
    assert np.allclose(core.isotope(B, Le, Le).c, A.c, atol=1e-10)
    with pytest.raises(ValidationError):
        core.identity_element(A)


def test_morphisms():
    A = build_pc_algebra(kappa_batch(1, seed=14)[0])
    assert core.is_algebra_morphism(A, A, np.eye(4))[0]
    from scipy.spatial.transform import Rotation
    g = Rotation.from_rotvec([0.3, -0.2, 0.5]).as_matrix()
    phi = np.eye(4)
    phi[1:, 1:] = g
    B = build_pc_algebra(kappa_batch(1, seed=15)[0])
    ok, res = core.is_algebra_morphism(A, B, phi)
    assert not ok and res > 1e-3


def test_isotopy_morphism_criterion():
    T = planar_map_matrix(PlanarMapParams([0.5, 0, 0], 1.3))
    assert core.check_isotopy_morphism_criterion(H, H, T, T, np.eye(4))
    from scipy.spatial.transform import Rotation
    phi = np.eye(4)
    phi[1:, 1:] = Rotation.from_rotvec([0, 0, 0.7]).as_matrix()  # moves z = e1
    crit = core.check_isotopy_morphism_criterion(H, H, T, T, phi)
    assert not crit.holds and not crit.isotope_morphism
    assert crit.commutation_residual > 1e-3
    # a rotation about z itself fixes sigma and is a morphism of both
    phi[1:, 1:] = Rotation.from_rotvec([0.7, 0, 0]).as_matrix()
    crit = core.check_isotopy_morphism_criterion(H, H, T, T, phi)
    assert crit.holds and crit.isotope_morphism
    with pytest.raises(ValidationError):
        core.check_isotopy_morphism_criterion(AlgebraTable(np.ones((2, 2, 2))), AlgebraTable(np.ones((2, 2, 2))),
                                              np.eye(2), np.eye(2), np.eye(2))
