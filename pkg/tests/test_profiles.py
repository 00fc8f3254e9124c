import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvlab import profiles as pf
from curvlab.errors import GridMismatch, InvalidParams, ShootingFailed
from curvlab.spaces import CP2, S4


class TestStandardProfiles:
    def test_s4_values(self):
        std = pf.standard_profiles(S4)
        r = math.pi / 6
        assert np.allclose([std.phi(r), std.psi(r), std.xi(r)], [1.0, 2.0, 1.0])
        assert np.allclose(
            [std.phi(0.0), std.psi(0.0), std.xi(0.0)], [0.0, math.sqrt(3), math.sqrt(3)]
        )

    def test_cp2_values(self):
        std = pf.standard_profiles(CP2)
        r = math.pi / 4
        s2 = math.sqrt(2) / 2
        assert np.allclose([std.phi(r), std.psi(r), std.xi(r)], [s2, s2, 0.0], atol=1e-15)

    def test_derivatives_are_exact(self):
        std = pf.standard_profiles(S4)
        r = np.linspace(0.01, S4.L - 0.01, 50)
        h = 1e-6
        fd = (std.phi(r + h) - std.phi(r - h)) / (2 * h)
        assert np.abs(fd - std.dphi(r)).max() < 1e-9


class TestBump:
    def test_plateau_hit_exactly(self, s4_params):
        bump = s4_params.bump_minus
        # y = rho sqrt(a)/sqrt(a-1) = 0.2 * 2 = 0.4 for the S4 defaults
        assert bump.y == pytest.approx(0.4, abs=1e-15)
        f, df, _ = bump.evaluate(np.array([bump.r0, bump.r_max]))
        assert abs(f[0] - 0.4) < 1e-8 and abs(f[1] - 0.4) < 1e-15
        assert abs(df[0]) < 1e-8

    def test_initial_conditions(self, s4_params):
        bump = s4_params.bump_minus
        assert bump.f[0] == 0.0
        assert bump.df[0] == pytest.approx(1.0, abs=1e-12)

    def test_shape_invariants(self, s4_params):
        bump = s4_params.bump_minus
        assert (bump.df >= -1e-14).all()
        assert (bump.d2f <= 1e-14).all()
        # kappa > 0 on (0, r0); near r0 the C-infinity cutoff underflows
        # double precision, so sample up to a hair before that zone
        inside = np.linspace(1e-9, bump.r0 * (1 - 1e-4), 2000)
        assert (bump.kappa(inside) > 0).all()
        assert (bump.kappa(bump.r) >= 0).all()

    def test_invalid_when_y_exceeds_rmax(self):
        # y = rho*2 at a=4/3; rho=0.3 gives y=0.6 > pi/6
        with pytest.raises(InvalidParams):
            pf.build_bump(4.0 / 3.0, 0.6, 0.3, math.pi / 6)

    def test_shooting_fails_above_efficiency(self):
        # y just below r_max passes validation but exceeds the family's reach
        rho = 0.26
        assert rho * 2 < math.pi / 6
        with pytest.raises(ShootingFailed):
            pf.build_bump(4.0 / 3.0, 0.52, rho, math.pi / 6)


class TestValidation:
    def test_defaults_accepted(self):
        y_minus, y_plus = pf.validate_gz_params(S4, 4.0 / 3.0, 0.4)
        assert y_minus == pytest.approx(0.4)
        assert y_plus == pytest.approx(0.4)
        assert y_minus < math.pi / 6

    def test_b_above_bound_rejected(self):
        with pytest.raises(InvalidParams, match="b <"):
            pf.validate_gz_params(S4, 4.0 / 3.0, 0.6)

    def test_a_equal_one_rejected(self):
        with pytest.raises(InvalidParams, match="a > 1"):
            pf.validate_gz_params(S4, 1.0, 0.1)

    def test_a_above_four_thirds_rejected(self):
        with pytest.raises(InvalidParams, match="4/3"):
            pf.validate_gz_params(CP2, 1.5, 0.1)


class TestGZProfiles:
    def test_plateau_values(self, s4_params, gz_s4_1024):
        gz = gz_s4_1024
        mid = (gz.r >= s4_params.r0) & (gz.r <= S4.L - s4_params.r0)
        assert mid.any()
        b = s4_params.b
        assert np.abs(gz.phi[mid] - b).max() < 1e-14
        assert np.abs(gz.xi[mid] - b).max() < 1e-14
        assert (gz.psi == b).all()

    def test_psi_identically_b(self, gz_cp2_1024, cp2_params):
        assert (gz_cp2_1024.psi == cp2_params.b).all()

    def test_endpoint_values(self, gz_s4_1024):
        assert gz_s4_1024.phi[0] == 0.0
        assert gz_s4_1024.xi[-1] == 0.0

    def test_small_r_slope(self, gz_s4_1024, gz_cp2_1024):
        # phi(r) ~ slope * r with slope forced by the smoothness table
        for gz, slope in ((gz_s4_1024, 2.0), (gz_cp2_1024, 1.0)):
            r = gz.r[1:6]
            assert np.abs(gz.phi[1:6] / r - slope).max() < 1e-3
            assert abs(gz.dphi[0] - slope) < 1e-12

    def test_s4_reflection_symmetry(self, gz_s4_1024):
        gz = gz_s4_1024
        assert np.abs(gz.phi - gz.xi[::-1]).max() < 1e-15
        assert np.abs(gz.psi - gz.psi[::-1]).max() == 0.0

    def test_phi_below_sqrt_a_b(self, s4_params, gz_s4_1024):
        bound = math.sqrt(s4_params.a) * s4_params.b
        assert (gz_s4_1024.phi < bound).all()

    def test_space_mismatch_rejected(self, s4_params):
        with pytest.raises(InvalidParams):
            pf.gz_profiles(CP2, s4_params, 256)


class TestInterpolate:
    def test_affine_identities(self, gz_s4_1024):
        std = pf.standard_profiles(S4).sample(1024)
        p0 = pf.interpolate(0.0, gz_s4_1024, std)
        assert np.array_equal(p0.phi, gz_s4_1024.phi)
        p1 = pf.interpolate(1.0, gz_s4_1024, std)
        assert np.array_equal(p1.xi, std.xi)

    def test_midpoint_formula(self):
        # s = 1/2 with phi0 == b and phi1 = 2 sin r gives b/2 + sin r
        r = np.linspace(0, S4.L, 257)
        b = 0.4
        p0 = pf.SampledTriple(space=S4, r=r, phi=np.full_like(r, b),
                              psi=np.full_like(r, b), xi=np.full_like(r, b))
        p1 = pf.SampledTriple(space=S4, r=r, phi=2 * np.sin(r),
                              psi=np.full_like(r, b), xi=np.full_like(r, b))
        mid = pf.interpolate(0.5, p0, p1)
        assert np.abs(mid.phi - (b / 2 + np.sin(r))).max() < 1e-15

    def test_grid_mismatch(self, gz_s4_1024, s4_params):
        other = pf.gz_profiles(S4, s4_params, 512)
        with pytest.raises(GridMismatch):
            pf.interpolate(0.5, gz_s4_1024, other)

    def test_space_mismatch(self, gz_s4_1024, gz_cp2_1024):
        with pytest.raises(GridMismatch):
            pf.interpolate(0.5, gz_s4_1024, gz_cp2_1024)

    def test_closed_form_pair(self):
        std = pf.standard_profiles(S4)
        half = pf.interpolate(0.5, std, std)
        assert isinstance(half, pf.ClosedFormTriple)
        assert half.phi(0.3) == pytest.approx(std.phi(0.3))


class TestSmoothness:
    def test_standard_pass_tight(self):
        for space in (S4, CP2):
            rep = pf.check_smoothness(pf.standard_profiles(space).sample(1024), tol=1e-8)
            assert rep.all_passed, rep.residuals

    def test_gz_pass(self, gz_s4_1024, gz_cp2_1024):
        for gz in (gz_s4_1024, gz_cp2_1024):
            rep = pf.check_smoothness(gz, tol=1e-6)
            assert rep.all_passed, rep.residuals

    @pytest.mark.parametrize("s", [0.0, 0.1, 0.35, 0.7, 1.0])
    def test_interpolated_family_passes(self, s, s4_params, cp2_params):
        for space, params in ((S4, s4_params), (CP2, cp2_params)):
            gs = pf.interpolated_profiles(space, params, s, 512)
            rep = pf.check_smoothness(gs, tol=1e-6)
            assert rep.all_passed, (space.name, s, rep.residuals)

    def test_wrong_slope_fails_condition_i(self, gz_s4_1024):
        gz = gz_s4_1024
        bad = pf.SampledTriple(space=S4, r=gz.r, phi=np.sin(gz.r), psi=gz.psi, xi=gz.xi)
        rep = pf.check_smoothness(bad)
        assert not rep.passed["i"]
        assert rep.residuals["i"] == pytest.approx(1.0, abs=1e-6)

    def test_report_dict_shape(self, gz_s4_1024):
        rep = pf.check_smoothness(gz_s4_1024)
        d = rep.as_dict()
        assert set(d) == {"i", "ii", "iii", "iv", "v", "vi"}
        assert set(d["i"]) == {"residual", "pass"}


class TestRescale:
    def test_identity(self, gz_s4_1024):
        same = pf.rescale(gz_s4_1024, 1.0)
        assert np.array_equal(same.phi, gz_s4_1024.phi)
        assert np.array_equal(same.r, gz_s4_1024.r)

    @given(lam=st.floats(0.5, 3.0))
    @settings(max_examples=10, deadline=None)
    def test_smoothness_scale_covariant(self, lam):
        rs = pf.rescale(pf.standard_profiles(S4).sample(512), lam)
        assert pf.check_smoothness(rs, tol=1e-6).all_passed

    def test_closed_form_rescale(self):
        rs = pf.rescale(pf.standard_profiles(S4), 2.0)
        assert rs.length == pytest.approx(2 * S4.L)
        assert rs.phi(2 * 0.3) == pytest.approx(2 * pf.standard_profiles(S4).phi(0.3))

    def test_invalid_lambda(self, gz_s4_1024):
        with pytest.raises(InvalidParams):
            pf.rescale(gz_s4_1024, -1.0)
