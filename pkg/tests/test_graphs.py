import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fusionk.graphs import (
    BipartiteGraph,
    build_gamma,
    build_gamma_prime,
    char_poly_check,
    charpoly,
    chain_length,
    conjugate_label,
    dd_matrix,
    eigvec_basis,
    jacobi_eigh,
    lagrange_projection,
    pf_weights,
    pretty,
    q_roots,
    spectral,
    v11_labels,
    v12_labels,
    v21_labels,
    v22_labels,
)
from fusionk.polynomials import IntPoly, T, poly_q

ks = st.integers(0, 10)


def row(g: BipartiteGraph, label: str) -> dict[str, int]:
    r = g.adjacency[g.even_labels.index(label)]
    return {g.odd_labels[j]: int(v) for j, v in enumerate(r) if v}


class TestGamma:
    def test_k0_shape_and_rows(self):
        g = build_gamma(0)
        assert g.adjacency.shape == (6, 4)
        assert g.even_labels == ("beta3", "beta1", "gamma3", "gamma1", "alpha2", "alpha0")
        assert g.odd_labels == ("beta2", "gamma2", "alpha3", "alpha1")
        assert list(g.adjacency[0]) == [1, 0, 0, 0]
        assert row(g, "beta1") == {"beta2": 1, "alpha3": 1}

    def test_k1_matrix(self):
        expected = [
            [1, 0, 0, 0, 0, 0],
            [1, 0, 1, 0, 0, 0],
            [0, 1, 0, 0, 0, 0],
            [0, 1, 1, 0, 0, 0],
            [0, 0, 1, 1, 0, 0],
            [0, 0, 0, 1, 1, 0],
            [0, 0, 0, 0, 1, 1],
            [0, 0, 0, 0, 0, 1],
        ]
        assert build_gamma(1).adjacency.tolist() == expected

    @given(ks)
    def test_shape_entries_and_connectivity(self, k):
        g = build_gamma(k)
        assert g.adjacency.shape == (2 * k + 6, 2 * k + 4)
        assert set(np.unique(g.adjacency)) <= {0, 1}
        assert g.is_connected()
        col = g.odd_labels.index("beta2")
        assert g.adjacency[:, col].sum() == 2

    @given(ks)
    def test_edge_count(self, k):
        # chain alpha0 .. alpha_n has n edges; each leg adds three
        assert len(build_gamma(k).edges()) == chain_length(k) + 6

    @given(ks)
    def test_labels_match_grades(self, k):
        g, gp = build_gamma(k), build_gamma_prime(k)
        assert list(g.even_labels) == v11_labels(k)
        assert list(g.odd_labels) == v12_labels(k)
        assert list(gp.even_labels) == v22_labels(k)
        assert list(gp.odd_labels) == v21_labels(k)


class TestGammaPrime:
    def test_k0_rows(self):
        gp = build_gamma_prime(0)
        assert row(gp, "g") == {"alphabar3": 1, "betabar2": 1, "gammabar2": 1}
        assert row(gp, "f") == {"alphabar3": 1}

    @given(ks)
    def test_shape_and_edges(self, k):
        gp = build_gamma_prime(k)
        n = chain_length(k)
        assert gp.adjacency.shape == (2 * k + 4, 2 * k + 4)
        assert gp.is_connected()
        # chain alpha'0 .. alphabar_n (n edges) plus f (one) plus g (three)
        assert len(gp.edges()) == n + 4
        assert row(gp, "f") == {f"alphabar{n}": 1}
        assert row(gp, "g") == {f"alphabar{n}": 1, "betabar2": 1, "gammabar2": 1}

    def test_gamma2_neighbourhood_comes_from_the_graph(self):
        g = build_gamma(2)
        col = g.adjacency[:, g.odd_labels.index("gamma2")]
        assert {g.even_labels[i] for i in np.nonzero(col)[0]} == {"gamma1", "gamma3"}


class TestLabels:
    def test_conjugates(self):
        assert conjugate_label("beta3") == "gamma3"
        assert conjugate_label("gamma3") == "beta3"
        assert conjugate_label("beta1") == "beta1"
        assert conjugate_label("alpha5") == "alphabar5"
        assert conjugate_label("alphabar5") == "alpha5"
        assert conjugate_label("betabar2") == "beta2"
        assert conjugate_label("alphap4") == "alphap4"
        assert conjugate_label("f") == "f"

    def test_pretty(self):
        assert pretty("beta3") == "β₃"
        assert pretty("alpha12") == "α₁₂"
        assert pretty("alphap0") == "α′₀"

    def test_dot_export(self):
        dot = build_gamma(0).to_dot()
        assert dot.startswith('graph "Gamma_0" {')
        assert '"beta3" -- "beta2";' in dot
        assert 'label="β₃"' in dot


class TestDD:
    def test_k0_entries(self):
        g = build_gamma(0)
        D = dd_matrix(g)
        i3, i1 = g.even_labels.index("beta3"), g.even_labels.index("beta1")
        assert D[i3, i3] == 1 and D[i3, i1] == 1 and D[i1, i1] == 2

    @given(ks)
    def test_symmetric_and_commutes_with_leg_swap(self, k):
        g = build_gamma(k)
        D = dd_matrix(g)
        assert np.array_equal(D, D.T)
        swap = {"beta1": "gamma1", "gamma1": "beta1", "beta3": "gamma3", "gamma3": "beta3"}
        perm = [g.even_labels.index(swap.get(x, x)) for x in g.even_labels]
        Pm = np.identity(len(perm), dtype=int)[perm]
        assert np.array_equal(Pm @ D, D @ Pm)


class TestCharPoly:
    def test_faddeev_leverrier_small(self):
        assert charpoly(np.array([[2, 1], [1, 2]])) == IntPoly((3, -4, 1))

    @pytest.mark.parametrize("k", range(13))
    def test_factorization(self, k):
        assert char_poly_check(k)

    def test_k0_explicit(self):
        D = dd_matrix(build_gamma(0))
        assert charpoly(D) == T * T * (T - 2) * (T - 2) * poly_q(0)

    def test_removing_an_edge_breaks_it(self):
        g = build_gamma(1)
        G = g.adjacency.copy()
        G[1, 2] = 0
        assert not char_poly_check(1, G @ G.T)


class TestSpectral:
    def test_jacobi_diagonalizes(self):
        rng = np.random.default_rng(7)
        A = rng.standard_normal((7, 7))
        A = A + A.T
        w, V = jacobi_eigh(A)
        assert np.allclose(V @ np.diag(w) @ V.T, A, atol=1e-9)
        assert np.allclose(V.T @ V, np.identity(7), atol=1e-12)

    def test_k0_values(self):
        s = spectral(0)
        assert s.eigenvalues[-1] == pytest.approx((5 + math.sqrt(13)) / 2, abs=1e-9)
        assert s.weights[s.zero_index] == pytest.approx(1 / 3, abs=1e-8)
        assert s.weights[s.two_index] == pytest.approx(1 / 3, abs=1e-8)

    @pytest.mark.parametrize("k", range(11))
    def test_invariants(self, k):
        s = spectral(k)
        assert len(s.eigenvalues) == 2 * k + 4
        assert np.all(np.diff(s.eigenvalues) > 0)
        assert s.eigenvalues[s.zero_index] == 0.0 and s.eigenvalues[s.two_index] == 2.0
        assert abs(s.weights.sum() - 1) < 1e-8
        assert np.all(s.weights > 0)
        assert abs(s.weights[s.zero_index] - 1 / (2 * k + 3)) < 1e-8
        assert abs(s.weights[s.two_index] - 1 / (2 * k + 3)) < 1e-8
        assert np.allclose(np.sort(s.q_roots()), q_roots(k), atol=1e-6)

    @pytest.mark.parametrize("k", [0, 3, 7, 10])
    def test_projections_are_lagrange_polynomials(self, k):
        s = spectral(k)
        D = dd_matrix(build_gamma(k)).astype(float)
        for j in range(len(s.eigenvalues)):
            Pj = lagrange_projection(D, s.eigenvalues, j)
            assert np.max(np.abs(Pj - s.projections[j])) < 1e-6

    @given(ks)
    def test_projections_resolve_identity(self, k):
        s = spectral(k)
        n = len(s.labels)
        assert np.allclose(sum(s.projections), np.identity(n), atol=1e-9)


class TestEigenvectors:
    @given(ks)
    def test_exact_eigenvectors_and_orthogonality(self, k):
        x1, x2, y1, y2 = eigvec_basis(k)
        D = dd_matrix(build_gamma(k))
        assert np.array_equal(D @ x1, 2 * x1) and np.array_equal(D @ x2, 2 * x2)
        assert not (D @ y1).any() and not (D @ y2).any()
        assert int(x1 @ y1) == 0

    def test_k0_xi(self):
        _, x2, _, _ = eigvec_basis(0)
        labels = v11_labels(0)
        assert dict(zip(labels, x2.tolist())) == {
            "beta3": 1, "beta1": 1, "gamma3": -1, "gamma1": -1, "alpha2": 0, "alpha0": 0}


class TestPerronFrobenius:
    def test_k0(self):
        value, v = pf_weights(build_gamma(0))
        g = build_gamma(0)
        assert value == pytest.approx(math.sqrt((5 + math.sqrt(13)) / 2), rel=1e-12)
        assert v[g.index("alpha1")] == pytest.approx(value, rel=1e-11)
        assert v[g.index("beta2")] == pytest.approx(v[g.index("gamma2")], rel=1e-11)

    @given(ks)
    def test_positive_normalized_eigenvector(self, k):
        for g in (build_gamma(k), build_gamma_prime(k)):
            value, v = pf_weights(g)
            assert np.all(v > 0)
            assert v[g.index(g.root)] == 1.0
            D = g.delta().astype(float)
            assert np.max(np.abs(D @ v - value * v) / v) < 1e-9

    def test_disconnected_graph_is_rejected(self):
        g = BipartiteGraph("split", ("a", "b"), ("c", "d"), np.array([[1, 0], [0, 1]]), "a")
        with pytest.raises(ValueError):
            pf_weights(g)
