import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvlab import curvature as cv
from curvlab import positivity as pos
from curvlab import profiles as pf
from curvlab.spaces import CP2, S4


def random_bianchi_blocks(rng, scale=1.0):
    """Random symmetric blocks satisfying the first Bianchi identity."""
    blocks = rng.standard_normal((3, 2, 2)) * scale
    blocks = 0.5 * (blocks + blocks.transpose(0, 2, 1))
    m = blocks[:, 0, 1]
    blocks[:, 0, 1] = blocks[:, 1, 0] = m - m.mean()
    return blocks


class TestTauInterval:
    def test_round_s4(self):
        field = cv.block_field(pf.standard_profiles(S4), n_grid=256)
        iv = pos.tau_interval(field.at(100))
        assert iv.lo == pytest.approx(-1.0, abs=1e-10)
        assert iv.hi == pytest.approx(1.0, abs=1e-10)

    def test_fubini_study(self):
        field = cv.block_field(pf.standard_profiles(CP2), n_grid=256)
        iv = pos.tau_interval(field.at(100))
        assert iv.lo == pytest.approx(0.0, abs=1e-10)
        assert iv.hi == pytest.approx(2.0, abs=1e-10)

    def test_gz_degenerate_with_forced_center(self, s4_params, gz_s4_1024):
        oracle = cv.gz_block_field(s4_params, gz_s4_1024)
        lo, hi = pos.tau_interval_bounds(oracle.blocks)
        width = np.abs(hi - lo)
        assert width.max() < 1e-12
        centers = -gz_s4_1024.dphi / (2 * s4_params.b**2)
        mask = (gz_s4_1024.r > 0) & (gz_s4_1024.r <= S4.r_max_minus + 1e-12)
        assert np.abs(0.5 * (lo + hi) - centers[mask]).max() < 1e-10

    def test_empty_interval(self):
        blocks = np.array([[[1.0, 5.0], [5.0, 1.0]],
                           [[1.0, -5.0], [-5.0, 1.0]],
                           [[1.0, 0.0], [0.0, 1.0]]])
        assert pos.tau_interval(blocks).is_empty

    @given(c=st.floats(-3.0, 3.0))
    @settings(max_examples=30, deadline=None)
    def test_hodge_shift(self, c):
        # adding c*H to every block shifts the feasible taus by -c
        rng = np.random.default_rng(3)
        blocks = random_bianchi_blocks(rng) + np.array([[1.5, 0], [0, 1.5]])
        iv = pos.tau_interval(blocks)
        shifted = blocks + c * cv.H_BLOCK
        iv2 = pos.tau_interval(shifted)
        assert iv2.lo == pytest.approx(iv.lo - c, abs=1e-12)
        assert iv2.hi == pytest.approx(iv.hi - c, abs=1e-12)


class TestCertify:
    def test_round_s4(self):
        field = cv.block_field(pf.standard_profiles(S4), n_grid=256)
        cert = pos.certify(field.at(100))
        assert cert.verdict is pos.Verdict.STRICTLY_POSITIVE
        assert cert.witness_tau == pytest.approx(0.0, abs=1e-9)
        assert cert.margin == pytest.approx(1.0, abs=1e-9)

    def test_gz_nonnegative_only(self, s4_params, gz_s4_1024):
        oracle = cv.gz_block_field(s4_params, gz_s4_1024)
        j = 300
        cert = pos.certify(oracle.at(j))
        assert cert.verdict is pos.Verdict.NONNEGATIVE_ONLY
        expected = -gz_s4_1024.dphi[np.searchsorted(gz_s4_1024.r, oracle.r[j])] / (
            2 * s4_params.b**2
        )
        assert cert.witness_tau == pytest.approx(expected, abs=1e-10)

    def test_zero_blocks(self):
        cert = pos.certify(np.zeros((3, 2, 2)))
        assert cert.verdict is pos.Verdict.NONNEGATIVE_ONLY
        assert cert.witness_tau == 0.0

    def test_mixed(self):
        blocks = np.array([[[1.0, 5.0], [5.0, 1.0]],
                           [[1.0, -5.0], [-5.0, 1.0]],
                           [[1.0, 0.0], [0.0, 1.0]]])
        cert = pos.certify(blocks)
        assert cert.verdict is pos.Verdict.MIXED
        assert cert.witness_tau is None
        assert cert.margin < 0


class TestMaxMinEig:
    def test_round_s4(self):
        field = cv.block_field(pf.standard_profiles(S4), n_grid=256)
        tau, margin = pos.max_min_eig(field.at(64))
        assert tau == pytest.approx(0.0, abs=1e-8)
        assert margin == pytest.approx(1.0, abs=1e-9)

    def test_fubini_study(self):
        field = cv.block_field(pf.standard_profiles(CP2), n_grid=256)
        tau, margin = pos.max_min_eig(field.at(64))
        assert tau == pytest.approx(1.0, abs=1e-7)
        assert margin == pytest.approx(1.0, abs=1e-9)

    def test_gz_plateau_flat(self, s4_params, gz_s4_1024):
        oracle = cv.gz_block_field(s4_params, gz_s4_1024)
        j = int(np.argmin(np.abs(oracle.r - S4.r_max_minus)))
        tau, margin = pos.max_min_eig(oracle.at(j))
        assert tau == pytest.approx(0.0, abs=1e-9)
        assert margin == pytest.approx(0.0, abs=1e-12)

    def test_agrees_with_certify_margin(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            blocks = random_bianchi_blocks(rng, scale=10 ** rng.uniform(-1, 1))
            cert = pos.certify(blocks)
            _, margin = pos.max_min_eig(blocks)
            assert margin == pytest.approx(cert.margin, abs=1e-8)


class TestBruteForce:
    def test_round_s4_exactly_one(self):
        field = cv.block_field(pf.standard_profiles(S4), n_grid=128)
        bf = pos.min_sec_bruteforce(field.at(30), n=5000, seed=1)
        assert bf.min_sec == pytest.approx(1.0, abs=1e-12)

    def test_gz_flat_coordinate_plane(self, s4_params, gz_s4_1024):
        oracle = cv.gz_block_field(s4_params, gz_s4_1024)
        bf = pos.min_sec_bruteforce(oracle.at(200), n=5000, seed=1)
        assert bf.min_sec == pytest.approx(0.0, abs=1e-14)
        assert bf.plane_label == "e0^e2"

    def test_oracle_soundness(self):
        rng = np.random.default_rng(9)
        for _ in range(30):
            blocks = random_bianchi_blocks(rng, scale=10 ** rng.uniform(-1, 1))
            _, margin = pos.max_min_eig(blocks)
            bf = pos.min_sec_bruteforce(blocks, n=2000, seed=int(rng.integers(1 << 31)))
            assert bf.min_sec >= margin - 1e-8

    def test_deterministic_given_seed(self):
        blocks = random_bianchi_blocks(np.random.default_rng(2))
        a = pos.min_sec_bruteforce(blocks, n=1000, seed=42)
        b = pos.min_sec_bruteforce(blocks, n=1000, seed=42)
        assert a.min_sec == b.min_sec
        assert np.array_equal(a.sigma, b.sigma)


class TestWitness:
    def test_s_zero_is_gz_witness(self, s4_params, gz_s4_1024):
        r = gz_s4_1024.r[(gz_s4_1024.r > 0.01) & (gz_s4_1024.r < S4.r_max_minus)]
        tau = pos.paper_tau_witness(S4, s4_params, 0.0, r)
        j = np.searchsorted(gz_s4_1024.r, r)
        expected = -gz_s4_1024.dphi[j] / (2 * s4_params.b**2)
        assert np.abs(tau - expected).max() < 1e-12

    def test_plateau_arithmetic(self, s4_params):
        # tau_s at a minus-side plateau point is s * 2(sqrt(3)-b)/b^3
        b = 0.4
        tau = pos.paper_tau_witness(S4, s4_params, 0.01, np.array([0.52]))
        assert tau[0] == pytest.approx(0.01 * 2 * (math.sqrt(3) - b) / b**3, rel=1e-12)

    def test_cp2_branch_discontinuity(self, cp2_params):
        eps = 1e-9
        below = pos.paper_tau_witness(CP2, cp2_params, 0.01, np.array([CP2.r_max_minus - eps]))
        above = pos.paper_tau_witness(CP2, cp2_params, 0.01, np.array([CP2.r_max_minus + eps]))
        assert abs(below[0] - above[0]) > 1e-3

    def test_certifies_small_s(self, s_star):
        for space, params_of in ((S4, pf.default_gz_params), (CP2, pf.default_gz_params)):
            params = params_of(space)
            s = s_star[space.name] / 2
            gs = pf.interpolated_profiles(space, params, s, 1024)
            field = cv.block_field(gs, route="exact")
            tau = pos.paper_tau_witness(space, params, s, gs.r)
            assert pos._lambda_min(field.blocks, tau).min() > 0


class TestExpansions:
    def test_limit_table_s4(self, s4_params):
        table = pos.expansion_limit_table(S4, s4_params)
        worst = max(v["rel_error"] for v in table.values())
        assert worst < 0.05, table

    def test_limit_table_cp2(self, cp2_params):
        table = pos.expansion_limit_table(CP2, cp2_params)
        worst = max(v["rel_error"] for v in table.values())
        assert worst < 0.05, table

    def test_pointwise_table_block1(self, s4_params):
        # the r-dependent block-1 coefficients hold pointwise
        table = pos.expansion_check(S4, s4_params, r=0.01, n_grid=2048)
        for name in ("eta1", "mu1", "nu1"):
            assert table[name]["rel_error"] < 0.01


class TestConsistency:
    def test_classification_agreement(self):
        # interval-based and eigenvalue-based classifications never contradict
        rng = np.random.default_rng(17)
        for _ in range(200):
            blocks = random_bianchi_blocks(rng, scale=10 ** rng.uniform(-1, 1))
            lo, hi = pos.tau_interval_bounds(blocks)
            _, margin = pos.max_min_eig(blocks)
            if margin > 1e-8:
                assert lo < hi
            elif margin < -1e-8:
                assert lo > hi

    def test_homothety_verdict_invariance(self):
        rng = np.random.default_rng(23)
        for _ in range(40):
            blocks = random_bianchi_blocks(rng)
            lam2 = 10 ** rng.uniform(-2, 2)
            v1 = pos.certify(blocks).verdict
            v2 = pos.certify(blocks / lam2).verdict
            assert v1 is v2
