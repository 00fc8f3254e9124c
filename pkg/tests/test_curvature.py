import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvlab import curvature as cv
from curvlab import profiles as pf
from curvlab.errors import OutOfRange
from curvlab.spaces import CP2, S4
from oracles import ricci_frame_sums, sec_of_pair

S4_BLOCKS = np.array([np.eye(2)] * 3)
CP2_BLOCKS = np.array(
    [[[1.0, -1.0], [-1.0, 1.0]], [[1.0, -1.0], [-1.0, 1.0]], [[4.0, 2.0], [2.0, 4.0]]]
)


class TestStandardBlocks:
    def test_s4_constant_identity_blocks(self):
        field = cv.block_field(pf.standard_profiles(S4), n_grid=512)
        assert np.abs(field.blocks - S4_BLOCKS).max() < 1e-8

    def test_cp2_constant_blocks(self):
        field = cv.block_field(pf.standard_profiles(CP2), n_grid=512)
        assert np.abs(field.blocks - CP2_BLOCKS).max() < 1e-8

    def test_point_evaluation(self):
        cb = cv.curvature_blocks(pf.standard_profiles(S4), 0.4)
        assert np.abs(cb.blocks - S4_BLOCKS).max() < 1e-10
        assert cb.bianchi_sum() == pytest.approx(0.0, abs=1e-12)


class TestGZBlocks:
    def test_plateau_closed_form(self, s4_params, gz_s4_1024):
        b = s4_params.b
        field = cv.block_field(gz_s4_1024, route="fd")
        j = np.searchsorted(gz_s4_1024.r, S4.r_max_minus)
        expected = np.array([[[1 / (4 * b * b), 0.0], [0.0, 0.0]]] * 3)
        assert np.abs(field.at(j).blocks - expected).max() < 1e-12

    def test_fd_matches_closed_form(self, s4_params, gz_s4_2048):
        field = cv.block_field(gz_s4_2048, route="fd")
        oracle = cv.gz_block_field(s4_params, gz_s4_2048)
        mask = (gz_s4_2048.r > 0) & (gz_s4_2048.r <= S4.r_max_minus + 1e-12)
        assert np.abs(field.blocks[mask] - oracle.blocks).max() < 1e-7

    def test_closed_form_point(self, s4_params, gz_s4_1024):
        cb = cv.gz_blocks_closed_form(s4_params, gz_s4_1024, 0.3)
        # R2 = R3 and their lower-right entry vanishes identically
        assert np.array_equal(cb.R2, cb.R3)
        assert cb.R2[1, 1] == 0.0

    def test_out_of_range(self, s4_params, gz_s4_1024):
        with pytest.raises(OutOfRange):
            cv.gz_blocks_closed_form(s4_params, gz_s4_1024, 0.9)

    def test_bianchi_sum_of_closed_form(self, s4_params, gz_s4_1024):
        # -phi'/b^2 + phi'/2b^2 + phi'/2b^2 == 0
        oracle = cv.gz_block_field(s4_params, gz_s4_1024)
        assert np.abs(oracle.bianchi_sums()).max() < 1e-16


class TestHodgeStar:
    def test_structure(self):
        star = cv.hodge_star()
        assert star.shape == (3, 2, 2)
        h = star[0]
        assert np.array_equal(h @ h, np.eye(2))
        assert sorted(np.linalg.eigvalsh(h)) == [-1.0, 1.0]

    def test_simple_plane_on_quadric(self):
        # <* sigma, sigma> = 0 for sigma = e0 ^ e1
        from curvlab.positivity import plane_components

        eye = np.eye(4)
        sigma = plane_components(eye[0], eye[1])
        star6 = np.zeros((6, 6))
        for i in range(3):
            star6[2 * i: 2 * i + 2, 2 * i: 2 * i + 2] = cv.H_BLOCK
        assert sigma @ star6 @ sigma == pytest.approx(0.0, abs=1e-15)


class TestRicci:
    def test_round_s4_einstein(self):
        ric = cv.ricci_diagonal(pf.standard_profiles(S4), 0.37)
        assert np.abs(ric.as_array() - 3.0).max() < 1e-9

    def test_fubini_study_einstein(self):
        ric = cv.ricci_diagonal(pf.standard_profiles(CP2), 0.3)
        assert np.abs(ric.as_array() - 6.0).max() < 1e-9

    def test_against_frame_sum_oracle(self, gz_s4_1024):
        field = cv.block_field(gz_s4_1024, route="fd")
        for j in (13, 200, 512, 850):
            expected = ricci_frame_sums(field.blocks[j])
            got = cv.ricci_from_blocks(field.blocks[j])
            assert np.abs(np.diag(expected) - got).max() < 1e-12
            off = expected - np.diag(np.diag(expected))
            assert np.abs(off).max() < 1e-14

    def test_gz_plateau_values(self, s4_params, gz_s4_1024):
        b = s4_params.b
        field = cv.block_field(gz_s4_1024, route="fd")
        j = np.searchsorted(gz_s4_1024.r, S4.r_max_minus)
        ric = cv.ricci_from_blocks(field.blocks[j])
        assert ric[0] == pytest.approx(0.0, abs=1e-12)
        assert np.abs(ric[1:] - 1 / (2 * b * b)).max() < 1e-12


class TestS3Demo:
    def test_round_sphere(self):
        lam = cv.s3_torus_curvature(np.sin, np.cos, 0.7)
        assert np.abs(np.array(lam) - 1.0).max() < 1e-8

    @given(r=st.floats(0.2, 1.3))
    @settings(max_examples=20, deadline=None)
    def test_concave_monotone_gives_nonnegative(self, r):
        phi = lambda x: np.tanh(x)          # concave nondecreasing  # noqa: E731
        xi = lambda x: 2.0 - x**2 / 4.0      # concave nonincreasing on range  # noqa: E731
        lam = cv.s3_torus_curvature(phi, xi, r)
        assert min(lam) > -1e-8

    def test_convex_phi_gives_negative_first_eigenvalue(self):
        phi = lambda x: x + x**3  # noqa: E731
        lam = cv.s3_torus_curvature(phi, np.cos, 0.8)
        assert lam[0] < 0

    def test_out_of_range(self):
        with pytest.raises(OutOfRange):
            cv.s3_torus_curvature(np.sin, np.cos, 2.0)


class TestGZInequality:
    def test_defaults_nonnegative(self, s4_params, gz_s4_1024, cp2_params, gz_cp2_1024):
        assert cv.gz_inequality_check(s4_params, gz_s4_1024) >= -1e-8
        assert cv.gz_inequality_check(cp2_params, gz_cp2_1024) >= -1e-8

    def test_plateau_identically_zero(self, s4_params, gz_s4_1024):
        vals = cv.gz_inequality_values(s4_params, gz_s4_1024)
        r = gz_s4_1024.r[(gz_s4_1024.r > 0) & (gz_s4_1024.r <= S4.r_max_minus + 1e-12)]
        assert np.abs(vals[r >= s4_params.r0]).max() == 0.0

    def test_standard_phi_violates(self, s4_params, gz_s4_1024):
        # the inequality is specific to Grove-Ziller profiles
        r = gz_s4_1024.r
        fake = pf.SampledTriple(
            space=S4, r=r, phi=2 * np.sin(r), psi=gz_s4_1024.psi, xi=gz_s4_1024.xi,
            dphi=2 * np.cos(r), dpsi=np.zeros_like(r), dxi=gz_s4_1024.dxi,
            d2phi=-2 * np.sin(r), d2psi=np.zeros_like(r), d2xi=gz_s4_1024.d2xi,
        )
        params_b1 = pf.GZParams(space=S4, a=s4_params.a, b=1.0, y_minus=0.0,
                                y_plus=0.0, bump_minus=s4_params.bump_minus,
                                bump_plus=s4_params.bump_plus)
        assert cv.gz_inequality_check(params_b1, fake) < -1.0


class TestProperties:
    def test_bianchi_on_random_smooth_triples(self):
        from conftest import random_smooth_triple

        rng = np.random.default_rng(11)
        for _ in range(10):
            space = S4 if rng.random() < 0.5 else CP2
            triple = random_smooth_triple(rng, space)
            field = cv.block_field(triple, route="fd")
            assert np.abs(field.bianchi_sums()).max() < 1e-7

    def test_homothety_covariance(self, s4_params):
        gz = pf.gz_profiles(S4, s4_params, 512)
        lam = 2.0
        f1 = cv.block_field(gz, route="fd")
        f2 = cv.block_field(pf.rescale(gz, lam), route="fd")
        assert np.abs(f2.blocks - f1.blocks / lam**2).max() < 1e-12

    def test_pole_consistency_standard(self):
        for space, tol in ((S4, 1e-5), (CP2, 1e-5)):
            field = cv.block_field(pf.standard_profiles(space), n_grid=1024)
            assert field.pole_disagreement < tol

    def test_closed_form_bianchi_tight(self):
        # exact-derivative route: the identity holds to roundoff away from
        # the repaired pole nodes, whose extrapolation weights amplify it
        field = cv.block_field(pf.standard_profiles(S4), n_grid=512)
        assert np.abs(field.bianchi_sums()[4:-4]).max() < 1e-12
        assert np.abs(field.bianchi_sums()).max() < 1e-10

    def test_sec_matches_wedge_oracle(self, gz_s4_1024):
        # diagonal block entries are sectional curvatures of coordinate planes
        field = cv.block_field(gz_s4_1024, route="fd")
        eye = np.eye(4)
        j = 700
        assert sec_of_pair(field.blocks[j], eye[0], eye[2]) == pytest.approx(
            field.blocks[j, 1, 1, 1], abs=1e-14
        )
        assert sec_of_pair(field.blocks[j], eye[2], eye[3]) == pytest.approx(
            field.blocks[j, 0, 0, 0], abs=1e-14
        )
