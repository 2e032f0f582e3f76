import math

import numpy as np
import pytest

from eigenrecon import core, secular

GOLDEN_ROOT_HI = (-1 + math.sqrt(5)) / 2
GOLDEN_ROOT_LO = (-1 - math.sqrt(5)) / 2


def swap_basis():
    return core.eigh(core.SymmetricMatrix.from_array([[0, 1], [1, 0]]))


def random_instance(rng, n):
    m = rng.uniform(-1, 1, (n, n))
    A = core.SymmetricMatrix.from_array((m + m.T) / 2)
    x = rng.uniform(-1, 1, n)
    return A, x


class TestBuildSecular:
    def test_basis_vector(self):
        basis = core.eigh(core.SymmetricMatrix.from_array(np.diag([2.0, 0.0])))
        sys = secular.build_secular(basis, np.array([1.0, 0.0]), -1.0)
        np.testing.assert_allclose(sys.q, [1.0, 0.0])
        assert sys.n_roots == 1
        assert sys.active_poles[0] == pytest.approx(2.0)

    def test_zero_matrix_single_cluster(self):
        basis = core.eigh(core.SymmetricMatrix.from_array(np.zeros((2, 2))))
        sys = secular.build_secular(basis, np.array([1.0, 1.0]), 1.0)
        assert len(sys.poles) == 1
        assert sys.weights[0] == pytest.approx(2.0)
        assert sys.n_roots == 1

    def test_orthogonal_cluster_deflated(self):
        basis = core.eigh(core.SymmetricMatrix.from_array(np.diag([2.0, 0.0])))
        sys = secular.build_secular(basis, np.array([0.0, 1.0]), -1.0)
        assert sys.active == (1,)

    def test_t_zero_empty_active_set(self):
        basis = swap_basis()
        sys = secular.build_secular(basis, np.ones(2), 0.0)
        assert sys.active == ()

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="shape"):
            secular.build_secular(swap_basis(), np.ones(3), 1.0)


class TestSecularEval:
    def test_t_zero_constant_one(self):
        sys = secular.build_secular(swap_basis(), np.ones(2), 0.0)
        for lam in (-5.0, 0.3, 7.0):
            assert secular.secular_eval(sys, lam) == 1.0

    def test_symmetric_weights(self):
        # lambdas (1,-1), q = (1,1)/sqrt(2), t = -1: P(0) = 1 - 0.5 + 0.5 = 1.
        basis = swap_basis()
        x = basis.vectors @ (np.ones(2) / math.sqrt(2))
        sys = secular.build_secular(basis, x, -1.0)
        assert secular.secular_eval(sys, 0.0) == pytest.approx(1.0)

    def test_golden_ratio_root(self):
        basis = swap_basis()
        x = basis.vectors @ (np.ones(2) / math.sqrt(2))
        sys = secular.build_secular(basis, x, -1.0)
        assert secular.secular_eval(sys, GOLDEN_ROOT_HI) == pytest.approx(0.0, abs=1e-14)

    def test_pole_rejected(self):
        sys = secular.build_secular(swap_basis(), np.ones(2), -1.0)
        with pytest.raises(ZeroDivisionError):
            secular.secular_eval(sys, float(sys.active_poles[0]))


class TestSecularRoots:
    def test_golden_ratio_quadratic(self):
        basis = swap_basis()
        x = basis.vectors @ (np.ones(2) / math.sqrt(2))
        sys = secular.build_secular(basis, x, -1.0)
        roots = secular.secular_roots(sys)
        np.testing.assert_allclose(roots, [GOLDEN_ROOT_HI, GOLDEN_ROOT_LO],
                                   atol=1e-12)
        assert 1 > roots[0] > -1 > roots[1]

    def test_single_root(self):
        basis = core.eigh(core.SymmetricMatrix.from_array(np.diag([2.0, 0.0])))
        sys = secular.build_secular(basis, np.array([1.0, 0.0]), -1.0)
        roots = secular.secular_roots(sys)
        assert roots == pytest.approx([1.0], abs=1e-12)

    def test_matches_direct_eigensolver(self):
        rng = np.random.default_rng(55)
        A, x = random_instance(rng, 8)
        t = -0.7
        basis = core.eigh(A)
        sys = secular.build_secular(basis, x, t)
        roots = np.sort(secular.secular_roots(sys))
        direct = core.eigh(core.SymmetricMatrix.from_array(
            A.entries + t * np.outer(x, x))).spectrum
        retained = sorted(v for k, c in enumerate(basis.spectrum.clusters)
                          if k not in sys.active for v in basis.spectrum.values[list(c)])
        assert not retained  # generic instance: all clusters active
        np.testing.assert_allclose(roots, np.sort(direct.values),
                                   atol=1e-10 * max(1.0, direct.spread))

    def test_residual_small_at_roots(self):
        rng = np.random.default_rng(56)
        A, x = random_instance(rng, 6)
        basis = core.eigh(A)
        sys = secular.build_secular(basis, x, -1.3)
        for mu in secular.secular_roots(sys):
            gap = float(np.min(np.abs(sys.active_poles - mu)))
            bound = 1e-10 * (1 + np.sum(np.abs(sys.t) * sys.active_weights / gap))
            assert abs(secular.secular_eval(sys, mu)) <= bound

    def test_monotone_between_poles(self):
        rng = np.random.default_rng(57)
        A, x = random_instance(rng, 5)
        basis = core.eigh(A)
        for t in (-2.0, 2.0):
            sys = secular.build_secular(basis, x, t)
            poles = sys.active_poles
            for hi, lo in zip(poles[:-1], poles[1:]):
                pts = np.linspace(lo + 1e-6, hi - 1e-6, 10)
                vals = [secular.secular_eval(sys, p) for p in pts]
                diffs = np.diff(vals)
                if t > 0:
                    assert np.all(diffs > 0)
                else:
                    assert np.all(diffs < 0)

    def test_t_zero_has_no_roots(self):
        sys = secular.build_secular(swap_basis(), np.ones(2), 0.0)
        with pytest.raises(ValueError):
            secular.secular_roots(sys)


class TestRank1Update:
    def test_ones_on_zero_matrix(self):
        basis = core.eigh(core.SymmetricMatrix.from_array(np.zeros((2, 2))))
        r = secular.rank1_update(basis, np.ones(2), 1.0)
        np.testing.assert_allclose(r.values, [2.0, 0.0], atol=1e-12)
        root_pos = [k for k, (kind, _) in enumerate(r.origins) if kind == "root"]
        assert len(root_pos) == 1
        np.testing.assert_allclose(r.vectors[root_pos[0]],
                                   np.ones(2) / math.sqrt(2), atol=1e-12)

    @pytest.mark.parametrize("t", [-1.0, -0.5, 0.25, 2.0])
    def test_swap_plus_ones_closed_form(self, t):
        r = secular.rank1_update(swap_basis(), np.ones(2), t)
        np.testing.assert_allclose(np.sort(r.values), np.sort([1 + 2 * t, -1.0]),
                                   atol=1e-12)
        origins = dict((kind, idx) for kind, idx in r.origins)
        assert "retained" in origins and "root" in origins

    def test_oracle_full_spectrum_and_vectors(self):
        rng = np.random.default_rng(58)
        A, x = random_instance(rng, 10)
        t = -0.3
        basis = core.eigh(A)
        r = secular.rank1_update(basis, x, t)
        M = A.entries + t * np.outer(x, x)
        direct = core.eigh(core.SymmetricMatrix.from_array(M))
        np.testing.assert_allclose(np.sort(r.values),
                                   np.sort(direct.spectrum.values), atol=1e-8)
        bound = 1e-8 * (10 * np.max(np.abs(A.entries)) + abs(t) * x @ x)
        for val, v in zip(r.values, r.vectors):
            if v is not None:
                assert np.linalg.norm(M @ v - val * v) <= bound

    def test_trace_identity(self):
        rng = np.random.default_rng(59)
        A, x = random_instance(rng, 7)
        t = 1.7
        r = secular.rank1_update(core.eigh(A), x, t)
        expected = np.trace(A.entries) + t * float(x @ x)
        assert abs(np.sum(r.values) - expected) <= 1e-9 * max(1.0, abs(expected))

    def test_exact_deflation_passthrough(self):
        basis = core.eigh(core.SymmetricMatrix.from_array(np.diag([3.0, 1.0, -2.0])))
        x = np.array([1.0, 0.0, 1.0])  # e2 weight exactly zero
        r = secular.rank1_update(basis, x, -0.4)
        retained = [(v, idx) for v, (kind, idx) in zip(r.values, r.origins)
                    if kind == "retained"]
        assert (1.0, 1) in retained

    def test_repeated_eigenvalue_keeps_multiplicity(self):
        basis = core.eigh(core.SymmetricMatrix.from_array(np.diag([2.0, 2.0, 0.0])))
        r = secular.rank1_update(basis, np.array([1.0, 1.0, 1.0]), -0.5)
        kinds = [kind for kind, _ in r.origins]
        assert kinds.count("retained") == 1  # one copy of the double 2 survives
        assert kinds.count("root") == 2
        assert 2.0 in [v for v, (k, _) in zip(r.values, r.origins) if k == "retained"]

    def test_t_zero_identity(self):
        basis = swap_basis()
        r = secular.rank1_update(basis, np.ones(2), 0.0)
        np.testing.assert_array_equal(r.values, basis.spectrum.values)
        assert all(kind == "retained" for kind, _ in r.origins)

    def test_interlacing_strict(self):
        rng = np.random.default_rng(60)
        A, x = random_instance(rng, 9)
        basis = core.eigh(A)
        for t in (-2.0, 2.0):
            sys = secular.build_secular(basis, x, t)
            roots = secular.secular_roots(sys)
            poles = sys.active_poles
            if t < 0:
                seq = np.empty(2 * len(poles))
                seq[0::2], seq[1::2] = poles, roots
            else:
                seq = np.empty(2 * len(poles))
                seq[0::2], seq[1::2] = roots, poles
            assert np.all(np.diff(seq) < 0)


class TestDetIdentity:
    def test_t_zero(self):
        rep = secular.verify_det_identity(swap_basis(), np.ones(2), 0.0)
        assert rep.max_rel_dev <= 1e-12

    def test_2x2_closed_form(self):
        # det(A + tJ - lam I) at lam=0 equals -(1+2t) on both sides.
        basis = swap_basis()
        for t in (0.5, -0.25, 2.0):
            sys = secular.build_secular(basis, np.ones(2), t)
            A = np.array([[0.0, 1.0], [1.0, 0.0]])
            lhs = np.linalg.det(0.0 * np.eye(2) - (A + t * np.ones((2, 2))))
            rhs = core.char_poly_eval(basis.spectrum, 0.0) * \
                secular.secular_eval(sys, 0.0)
            assert lhs == pytest.approx(-(1 + 2 * t), abs=1e-12)
            assert rhs == pytest.approx(lhs, abs=1e-12)

    def test_seeded_probes(self):
        rng = np.random.default_rng(61)
        A, x = random_instance(rng, 8)
        rep = secular.verify_det_identity(core.eigh(A), x, -0.9, probes=20)
        assert len(rep.probes) == 20
        assert rep.max_rel_dev <= 1e-9
