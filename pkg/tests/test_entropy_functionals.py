import math

import numpy as np
import pytest

from entropy_gap import linalg_core as la
from entropy_gap import quantum_states as qs
from entropy_gap.entropy_functionals import (
    cmi,
    relative_entropy,
    renyi_relative_entropy,
    root_overlap,
    von_neumann_entropy,
)
from entropy_gap.errors import DimensionMismatch, InvalidAlpha, InvalidState


def ghz(n=3):
    psi = np.zeros(2**n)
    psi[0] = psi[-1] = 1 / np.sqrt(2)
    return qs.MultipartiteState(np.outer(psi, psi), (2,) * n)


def diag_state(p, kind=qs.STATE):
    return qs.MultipartiteState(np.diag(p).astype(complex), (len(p),), kind=kind)


def kl(p, q):
    p, q = np.asarray(p, float), np.asarray(q, float)
    m = p > 0
    return float(np.sum(p[m] * np.log(p[m] / q[m])))


class TestVonNeumann:
    def test_pure(self):
        assert von_neumann_entropy(qs.random_pure(4, 0)) == pytest.approx(0, abs=1e-10)

    @pytest.mark.parametrize("d", [2, 3, 7])
    def test_maximally_mixed(self, d):
        assert von_neumann_entropy(np.eye(d) / d) == pytest.approx(math.log(d), abs=1e-14)

    def test_three_quarters(self):
        expected = -0.75 * math.log(0.75) - 0.25 * math.log(0.25)
        assert expected == pytest.approx(0.5623, abs=5e-5)
        assert von_neumann_entropy(diag_state([0.75, 0.25])) == pytest.approx(expected, abs=1e-15)

    def test_bounds(self):
        for seed in range(50):
            s = von_neumann_entropy(qs.random_density_hs(5, seed))
            assert 0 <= s <= math.log(5)

    def test_invalid(self):
        with pytest.raises(InvalidState):
            von_neumann_entropy(np.diag([1.5, -0.5]))


class TestRelativeEntropy:
    def test_self(self):
        rho = qs.random_density_hs(4, 3)
        assert relative_entropy(rho, rho) == pytest.approx(0, abs=1e-13)

    def test_disjoint_supports(self):
        assert relative_entropy(diag_state([1, 0]), diag_state([0, 1])) == math.inf

    def test_classical_kl(self):
        assert relative_entropy(diag_state([1, 0]), diag_state([0.5, 0.5])) == pytest.approx(
            math.log(2), abs=1e-15
        )
        rng = np.random.default_rng(0)
        for _ in range(20):
            p, q = rng.dirichlet(np.ones(5)), rng.dirichlet(np.ones(5))
            assert relative_entropy(diag_state(p), diag_state(q)) == pytest.approx(kl(p, q), abs=1e-13)

    def test_substate_second_argument(self):
        p, q = [0.6, 0.4], [0.3, 0.5]
        assert relative_entropy(diag_state(p), diag_state(q, qs.SUBSTATE)) == pytest.approx(kl(p, q))

    def test_rejects_supernormalized_sigma(self):
        with pytest.raises(InvalidState):
            relative_entropy(diag_state([0.5, 0.5]), np.diag([1.0, 1.0]))

    def test_nonnegative_1000_pairs(self):
        worst = np.inf
        for i in range(1000):
            rng = np.random.default_rng(i)
            d = int(rng.integers(2, 6))
            rho = qs.random_density_hs(d, rng)
            sigma = qs.random_density_hs(d, rng).matrix * rng.uniform(0.2, 1.0)
            worst = min(worst, relative_entropy(rho, sigma))
        assert worst >= -1e-10

    def test_faithfulness(self):
        rho = qs.random_density_hs(3, 1).matrix
        E = qs.random_density_hs(3, 2).matrix - rho
        vals = [relative_entropy(rho, rho + t * E) for t in (1e-1, 1e-2, 1e-3, 1e-4)]
        assert all(a > b for a, b in zip(vals, vals[1:]))
        assert vals[-1] < 1e-7
        # zero relative entropy implies (numerically) equal states
        for seed in range(50):
            s = qs.random_density_hs(3, seed).matrix
            r = relative_entropy(s, s)
            assert r <= 1e-12 and la.schatten_norm(s - s, 1) <= 1e-6

    def test_data_processing_1000(self):
        worst = -np.inf
        for i in range(1000):
            rng = np.random.default_rng(10_000 + i)
            dims = (int(rng.integers(2, 4)), int(rng.integers(2, 4)))
            rho = qs.random_density_hs(dims, rng).matrix
            sigma = qs.random_density_hs(dims, rng).matrix
            full = relative_entropy(rho, sigma)
            red = relative_entropy(la.partial_trace(rho, dims, [0]), la.partial_trace(sigma, dims, [0]))
            worst = max(worst, red - full)
        assert worst <= 1e-9


class TestRenyi:
    def test_self(self):
        rho = qs.random_density_hs(3, 0)
        for a in (0.1, 0.5, 0.9):
            assert renyi_relative_entropy(rho, rho, a) == pytest.approx(0, abs=1e-12)

    def test_half_commuting(self):
        val = renyi_relative_entropy(diag_state([1, 0]), diag_state([0.5, 0.5]), 0.5)
        assert val == pytest.approx(-2 * math.log(math.sqrt(0.5)), abs=1e-15)
        assert val == pytest.approx(math.log(2), abs=1e-15)

    @pytest.mark.parametrize("alpha", [0.0, 1.0, 1.5, -0.2])
    def test_invalid_alpha(self, alpha):
        rho = qs.random_density_hs(2, 0)
        with pytest.raises(InvalidAlpha):
            renyi_relative_entropy(rho, rho, alpha)

    def test_below_relative_entropy_1000(self):
        worst = -np.inf
        for i in range(1000):
            rng = np.random.default_rng(i)
            d = int(rng.integers(2, 5))
            rho, sigma = qs.random_density_hs(d, rng), qs.random_density_hs(d, rng)
            worst = max(worst, renyi_relative_entropy(rho, sigma, 0.5) - relative_entropy(rho, sigma))
        assert worst <= 1e-10

    def test_monotone_in_alpha(self):
        grid = np.round(np.arange(0.1, 1.0, 0.1), 10)
        for seed in range(100):
            rng = np.random.default_rng(seed)
            rho, sigma = qs.random_density_hs(3, rng), qs.random_density_hs(3, rng)
            vals = [renyi_relative_entropy(rho, sigma, a) for a in grid]
            assert all(a <= b + 1e-10 for a, b in zip(vals, vals[1:]))
            assert vals[-1] <= relative_entropy(rho, sigma) + 1e-10

    def test_generic_alpha_path_matches_half(self):
        rho, sigma = qs.random_density_hs(4, 1), qs.random_density_hs(4, 2)
        a = 0.5 + 1e-9
        assert renyi_relative_entropy(rho, sigma, a) == pytest.approx(
            renyi_relative_entropy(rho, sigma, 0.5), abs=1e-7
        )


class TestRootOverlap:
    def test_examples(self):
        rho = qs.random_density_hs(3, 0).matrix
        assert root_overlap(rho, rho) == pytest.approx(1.0, abs=1e-13)
        assert root_overlap(np.diag([1.0, 0]), np.diag([0, 1.0])) == 0.0
        assert root_overlap(np.diag([1.0, 0]), np.diag([0.5, 0.5])) == pytest.approx(
            math.sqrt(0.5), abs=1e-15
        )

    def test_range(self):
        for seed in range(50):
            rng = np.random.default_rng(seed)
            r = root_overlap(qs.random_density_hs(3, rng).matrix, 0.7 * qs.random_density_hs(3, rng).matrix)
            assert 0 <= r <= 1


class TestCMI:
    def test_ghz(self):
        # oracle: S_AC = S_BC = S_C = ln 2 (spectrum {1/2, 1/2}), S_ABC = 0
        g = ghz()
        for keep in ([0, 2], [1, 2], [2]):
            w = np.linalg.eigvalsh(la.partial_trace(g.matrix, g.dims, keep))
            np.testing.assert_allclose(sorted(w[w > 1e-12]), [0.5, 0.5], atol=1e-15)
        assert cmi(g) == pytest.approx(math.log(2), abs=1e-12)

    def test_a_decoupled(self):
        rho = qs.MultipartiteState(
            la.tensor(qs.random_density_hs(2, 1).matrix, qs.random_density_hs(4, 2).matrix), (2, 2, 2)
        )
        assert cmi(rho) == pytest.approx(0, abs=1e-12)

    def test_bare_matrix_needs_dims(self):
        with pytest.raises(DimensionMismatch):
            cmi(np.eye(8) / 8)
        assert cmi(np.eye(8) / 8, (2, 2, 2)) == pytest.approx(0, abs=1e-13)

    def test_not_tripartite(self):
        with pytest.raises(DimensionMismatch):
            cmi(qs.random_density_hs((2, 2), 0))

    def test_local_unitary_invariance(self):
        for seed in range(30):
            rng = np.random.default_rng(seed)
            dims = (2, int(rng.integers(2, 4)), 2)
            rho = qs.random_density_hs(dims, rng)
            U = la.tensor(*(qs.random_unitary(d, rng) for d in dims))
            rotated = rho.with_matrix(U @ rho.matrix @ U.conj().T)
            assert abs(cmi(rotated) - cmi(rho)) <= 1e-9

    def test_ssa_nonnegative(self):
        for seed in range(200):
            assert cmi(qs.random_density_hs((2, 2, 2), seed)) >= -1e-9
