import numpy as np
import pytest

from bo_soliton.action_angle import (
    ActionAngles,
    aa_from_spectral,
    evolve_aa,
    explicit_solution,
    forward_map,
    inverse_map,
    m_from_aa,
    pi_u_resolvent,
)
from bo_soliton.errors import OrderingViolation
from bo_soliton.profiles import SolitonParameters, pi_u, profile_values
from bo_soliton.rational import evaluate
from bo_soliton.spectral import spectral_decompose
from conftest import random_params


def unit_aa(alpha=0.0):
    return ActionAngles(np.array([-np.pi]), np.array([alpha]))


def random_aa(rng, n):
    lam = -np.sort(rng.uniform(0.1, 3.0, n))[::-1]
    while n > 1 and np.min(np.diff(lam)) < 0.1:
        lam = -np.sort(rng.uniform(0.1, 3.0, n))[::-1]
    return ActionAngles(2 * np.pi * lam, rng.uniform(-5, 5, n))


class TestMFromAA:
    def test_unit_soliton(self):
        m = m_from_aa(unit_aa())
        assert abs(m[0, 0] - (-1j)) < 1e-15

    def test_angle_shifts_diagonal(self):
        m = m_from_aa(unit_aa(3.0))
        assert abs(m[0, 0] - (3.0 - 1j)) < 1e-15

    def test_im_m_negative_semidefinite(self, rng):
        for n in (2, 4, 6):
            m = m_from_aa(random_aa(rng, n))
            im_m = (m - m.conj().T) / 2j
            assert np.linalg.eigvalsh(im_m).max() < 1e-12

    def test_ordering_enforced(self):
        with pytest.raises(OrderingViolation):
            ActionAngles(np.array([-1.0, -2.0]), np.zeros(2))
        with pytest.raises(OrderingViolation):
            ActionAngles(np.array([-1.0, 1.0]), np.zeros(2))


class TestInverseMap:
    def test_unit_soliton(self):
        params = inverse_map(unit_aa())
        assert abs(params.zs[0] - (-1j)) < 1e-12

    def test_scaled_shifted(self):
        for x0, c in ((0.0, 1.0), (3.0, 0.5), (-2.0, 4.0)):
            aa = ActionAngles(np.array([-c * np.pi]), np.array([x0]))
            params = inverse_map(aa)
            assert abs(params.zs[0] - (x0 - 1j / c)) < 1e-12

    def test_roundtrip_from_actions(self, rng):
        # spectral_decompose after inverse_map returns the same coordinates
        for trial in range(100):
            n = 1 + trial % 8
            aa = random_aa(rng, n)
            params = inverse_map(aa)
            back = aa_from_spectral(spectral_decompose(params))
            assert np.abs(back.rs - aa.rs).max() < 1e-7
            assert np.abs(back.alphas - aa.alphas).max() < 1e-7


class TestEvolve:
    def test_identity_at_zero(self, rng):
        aa = random_aa(rng, 3)
        out = evolve_aa(aa, 0.0)
        assert np.array_equal(out.rs, aa.rs)
        assert np.array_equal(out.alphas, aa.alphas)

    def test_unit_speed(self):
        out = evolve_aa(unit_aa(), 5.0)
        assert out.alphas[0] == pytest.approx(5.0, abs=1e-14)

    def test_flow_composition(self, rng):
        aa = random_aa(rng, 4)
        s, t = 0.7, -2.3
        a = evolve_aa(evolve_aa(aa, s), t)
        b = evolve_aa(aa, s + t)
        assert np.array_equal(a.rs, b.rs)
        assert np.abs(a.alphas - b.alphas).max() < 1e-13 * (1 + np.abs(b.alphas).max())


class TestExplicitSolution:
    def test_traveling_wave(self):
        aa = unit_aa()
        for t in (0.0, 1.5, 5.0):
            xs = np.linspace(-20, 20, 81)
            u = explicit_solution(aa, t, xs)
            assert np.abs(u - 2.0 / ((xs - t) ** 2 + 1)).max() < 1e-13

    def test_matches_profile_at_zero(self, rng):
        params = random_params(rng, 4)
        aa = forward_map(params)
        xs = np.linspace(-20, 20, 201)
        u = explicit_solution(aa, 0.0, xs)
        assert np.abs(u - profile_values(params, xs)).max() < 1e-10

    def test_two_path_consistency(self, rng):
        # evolving coordinates then synthesizing equals the resolvent formula
        for n in (2, 4, 6):
            params = random_params(rng, n)
            aa = forward_map(params)
            xs = np.linspace(-50, 50, 501)
            for t in (0.1, 1.0, 10.0):
                u1 = explicit_solution(aa, t, xs)
                u2 = profile_values(inverse_map(evolve_aa(aa, t)), xs)
                assert np.abs(u1 - u2).max() < 1e-9


class TestPiUResolvent:
    def test_unit_soliton_algebra(self):
        sd = spectral_decompose(SolitonParameters((-1j,)))
        for x in (-3.0, 0.0, 2.5):
            assert abs(pi_u_resolvent(sd, x) - 1j / (x + 1j)) < 1e-13

    def test_matches_pi_u(self, rng):
        params = random_params(rng, 5)
        sd = spectral_decompose(params)
        f = pi_u(params)
        for x in rng.uniform(-50, 50, 50):
            assert abs(pi_u_resolvent(sd, x) - evaluate(f, x)) < 1e-9

    def test_decay(self, rng):
        params = random_params(rng, 3)
        sd = spectral_decompose(params)
        lam = np.abs(sd.lambdas)
        bound = 1.1 * np.sum(np.sqrt(lam)) * np.sum(1 / np.sqrt(lam))
        for x in (1e6, -1e6):
            assert abs(pi_u_resolvent(sd, x)) <= bound / abs(x)
