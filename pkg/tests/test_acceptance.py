"""Acceptance criteria, one test each, at their stated tolerances and time budgets.

Run alone with ``pytest tests/test_acceptance.py``; the terminal summary lists
one pass/FAIL line per criterion.  Every timed criterion rebuilds what it
measures from scratch instead of reusing cached models.
"""

import time

import numpy as np
import pytest

from fusionk import closed_form, fusion_ring, graphs, matrix_model, polynomials
from fusionk.graphs import build_gamma, build_gamma_prime, charpoly, dd_matrix
from fusionk.polynomials import T, poly_q, seq_f, seq_g

from .helpers import GOLDEN, table_for

K_RANGE = range(11)

F_TABLE = (1, 0, 0, 0, 1, 1, 2, 3, 7, 12, 22, 40, 75)
G_TABLE = (0, 0, 0, 1, 0, 1, 2, 4, 6, 12, 22, 41, 74)


class Clock:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.start


@pytest.mark.criterion(1, "characteristic polynomial of DD factors exactly, k = 0..8")
def test_characteristic_polynomial():
    with Clock() as c:
        for k in range(9):
            got = charpoly(dd_matrix(build_gamma(k)))
            assert got == T * T * (T - 2) * (T - 2) * poly_q(k), k
    assert c.seconds < 5


@pytest.mark.criterion(2, "spectral weights sum to 1 and equal 1/(2k+3) at 0 and 2, k = 0..10")
def test_spectral_weights():
    with Clock() as c:
        for k in K_RANGE:
            s = graphs.spectral(k)
            assert abs(s.weights.sum() - 1) < 1e-8, k
            assert abs(s.weights[s.zero_index] - 1 / (2 * k + 3)) < 1e-8, k
            assert abs(s.weights[s.two_index] - 1 / (2 * k + 3)) < 1e-8, k
    assert c.seconds < 5


@pytest.mark.criterion(3, "model basis is orthonormal within 1e-7, k = 0..10")
def test_orthonormality():
    with Clock() as c:
        for k in K_RANGE:
            r = matrix_model.orthonormality_check(matrix_model.build_model(k))
            assert r.value < 1e-7, (k, r.detail)
    assert c.seconds < 10


@pytest.mark.criterion(4, "every <XY,Z> is within 1e-6 of a non-negative integer, k = 0..10")
def test_integrality():
    with Clock() as c:
        for k in K_RANGE:
            raw = matrix_model.structure_constants(matrix_model.build_model(k))
            assert raw.max_residual() < 1e-6, k
            assert all(np.all(v >= 0) for v in raw.nearest.values()), k
    assert c.seconds < 60


@pytest.mark.criterion(5, "alpha1 and alphabar1 columns reproduce Gamma_k and Gamma'_k, k = 0..10")
def test_graph_recovery():
    for k in K_RANGE:
        a, b = fusion_ring.recovered_adjacency(table_for(k))
        assert np.array_equal(a, build_gamma(k).adjacency), k
        assert np.array_equal(b, build_gamma_prime(k).adjacency), k


@pytest.mark.criterion(6, "closed-form coefficients equal the model table exactly, k = 0..10")
def test_oracle_agreement():
    for k in K_RANGE:
        rep = fusion_ring.crosscheck(table_for(k))
        assert rep.ok, (k, rep.failures()[:5])
        assert table_for(k).n("g", "g", "g") == polynomials.seq_d(2 * k + 2)
    assert table_for(0).n("g", "g", "g") == 2
    assert table_for(0).product("beta3", "gamma3") == {"alpha0": 1}


@pytest.mark.criterion(7, "Frobenius, associativity, identity and conjugation axioms, k = 0..10")
def test_axioms():
    with Clock() as c:
        for k in K_RANGE:
            t = matrix_model.fusion_table(matrix_model.build_model(k))
            res = fusion_ring.verify_all(t, ["frobenius", "associativity", "identity"])
            assert all(r.ok for r in res.values()), (k, {n: r.detail for n, r in res.items()})
    assert c.seconds < 120


@pytest.mark.criterion(8, "Perron-Frobenius dimensions are multiplicative within 1e-6, k = 0..10")
def test_dimension():
    for k in K_RANGE:
        r = fusion_ring.verify_dimension(table_for(k), tol=1e-6)
        assert r.ok and r.value < 1e-6, (k, r.detail)


@pytest.mark.criterion(9, "key and remark identities for k = 0..20, beta3 power for k = 0..5")
def test_polynomial_identities():
    for k in range(21):
        assert polynomials.key_identity(k), k
        assert polynomials.remark_identities(k) == (True, True), k
    for k in range(6):
        ok, detail = closed_form.beta3_power_check(table_for(k))
        assert ok, (k, detail)


@pytest.mark.criterion(10, "the second conjugation case forces a non-integer, k = 0..50")
def test_case2_obstruction():
    for k in range(51):
        witness = closed_form.case2_obstruction(k)
        c = polynomials.seq_c(2 * k if k % 2 == 0 else 2 * k + 2)
        assert witness * 4 == c + 1 and witness.denominator != 1, k


@pytest.mark.criterion(11, "f_j, g_j table for j = 0..12 and c_{2j} mod 4 for j <= 100")
def test_sequence_tables():
    assert tuple(seq_f(j) for j in range(13)) == F_TABLE
    assert tuple(seq_g(j) for j in range(13)) == G_TABLE
    for j in range(101):
        assert polynomials.seq_c(2 * j) % 4 == (1 if j % 2 == 0 else 0), j
        assert closed_form.c_mod4_holds(j), j


@pytest.mark.criterion(12, "JSON round trip is the identity and golden files are byte-stable")
def test_serialization():
    for k in K_RANGE:
        t = table_for(k)
        assert fusion_ring.deserialize(fusion_ring.serialize(t)) == t, k
    for k in (0, 1):
        assert fusion_ring.serialize(table_for(k)) == (GOLDEN / f"k{k}.json").read_bytes(), k
