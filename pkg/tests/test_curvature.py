import numpy as np
import pytest

from qck.ambient import (
    AmbientSpace,
    DefiniteLogFamily,
    InverseFamily,
    LogFamily,
    UserSeries,
    ConformalPair,
    flat_metric,
    metric_from_conformal_pair,
    potential_metric,
    radial_frame,
    radial_unit_field,
)
from qck.core import complex_to_real
from qck.curvature import (
    CurvatureBundle,
    christoffel,
    covariant_vector_derivative,
    curvature_bundle,
    kahler_defect,
    metric_first_jet,
    metric_second_jet,
    metric_second_jet_fd,
    structure_covariant_defect,
)
from qck.ambient import MetricField
from qck.errors import DegenerateMetric, DomainError, NumericalBreakdown

L2 = AmbientSpace(2, "lorentz")
L3 = AmbientSpace(3, "lorentz")
D2 = AmbientSpace(2, "definite")


def halfplane_metric():
    """Hyperbolic plane, curvature -1: g = (dx^2 + dy^2)/y^2 on y > 0."""

    def ev(x):
        s = 1.0 / (x[1] * x[1])
        return [[s, 0.0], [0.0, s]]

    return MetricField(ev, 2, name="halfplane")


def timelike_point(space, r, seed=0, theta=0.4):
    rng = np.random.default_rng(seed)
    w = rng.normal(scale=0.3, size=space.n - 1) + 1j * rng.normal(scale=0.3, size=space.n - 1)
    zn = np.exp(1j * theta) * np.sqrt(r * r + float(np.sum(np.abs(w) ** 2)))
    return complex_to_real(np.append(w, zn))


def rand_nonnull(bundle, rng):
    while True:
        X = rng.normal(size=bundle.G.shape[0])
        if abs(X @ bundle.G @ X) > 1e-3:
            return X


class TestJets:
    def test_first_vs_second_jet(self):
        g = potential_metric(L2, LogFamily(-1.0, 1.0))
        x = timelike_point(L2, 2.0, seed=3)
        G1, dG1 = metric_first_jet(g, x)
        G2, dG2, _ = metric_second_jet(g, x)
        assert np.allclose(G1, G2, atol=1e-14)
        assert np.allclose(dG1, dG2, atol=1e-14)

    def test_dual_vs_fd_jet(self):
        g = potential_metric(L2, LogFamily(-1.0, 1.0))
        x = timelike_point(L2, 2.0, seed=4)
        G, dG, d2G = metric_second_jet(g, x)
        Gf, dGf, d2Gf = metric_second_jet_fd(g, x)
        assert np.allclose(G, Gf, atol=1e-12)
        assert np.allclose(dG, dGf, atol=1e-8)
        assert np.allclose(d2G, d2Gf, atol=1e-7)


class TestChristoffel:
    def test_flat_is_zero(self):
        g = flat_metric(L3)
        G, dG = metric_first_jet(g, np.zeros(6))
        gamma, _ = christoffel(G, dG)
        assert np.max(np.abs(gamma)) == 0.0

    def test_lower_symmetry_and_compatibility(self):
        g = potential_metric(L3, LogFamily(-1.0, 1.0))
        x = complex_to_real([0, 0, 2j])
        G, dG = metric_first_jet(g, x)
        gamma, _ = christoffel(G, dG)
        assert np.allclose(gamma, np.transpose(gamma, (0, 2, 1)), atol=1e-12)
        # nabla_k g_ij = d_k g_ij - gamma^a_{ki} g_aj - gamma^a_{kj} g_ia = 0
        nabla = dG - np.einsum("aki,aj->kij", gamma, G) - np.einsum("akj,ia->kij", gamma, G)
        assert np.max(np.abs(nabla)) < 1e-12

    def test_scale_invariance(self):
        g = potential_metric(L2, InverseFamily())
        x = timelike_point(L2, 0.9, seed=5)
        G, dG = metric_first_jet(g, x)
        gamma, _ = christoffel(G, dG)
        gamma7, _ = christoffel(7.0 * G, 7.0 * dG)
        assert np.allclose(gamma, gamma7, atol=1e-12)

    def test_degenerate_metric(self):
        G = np.diag([1.0, 1e-30])
        with pytest.raises(DegenerateMetric):
            christoffel(G, np.zeros((2, 2, 2)))


class TestHalfPlaneOracle:
    """Hand-checked curvature of the hyperbolic plane pins the conventions."""

    def test_riemann_component(self):
        b = curvature_bundle(halfplane_metric(), [0.3, 2.0])
        # R(e_x, e_y, e_y, e_x) = -1/y^4
        assert b.R.a[0, 1, 1, 0] == pytest.approx(-1.0 / 16.0, rel=1e-10)

    def test_sectional(self):
        b = curvature_bundle(halfplane_metric(), [-1.2, 0.7])
        assert b.sectional([1.0, 0.0], [0.0, 1.0]) == pytest.approx(-1.0, rel=1e-10)
        # sectional curvature is basis-independent
        assert b.sectional([1.0, 2.0], [-1.0, 1.0]) == pytest.approx(-1.0, rel=1e-9)

    def test_ricci_and_scalar(self):
        b = curvature_bundle(halfplane_metric(), [0.0, 0.5])
        assert np.allclose(b.ricci(), -b.G, atol=1e-10)
        assert b.scalar_curvature() == pytest.approx(-2.0, rel=1e-10)


class TestFlatBaselines:
    @pytest.mark.parametrize("space", [L3, D2])
    def test_zero_curvature(self, space):
        g = flat_metric(space)
        p = np.ones(space.dim)
        b = curvature_bundle(g, p)
        assert b.R.norm() < 1e-12
        assert abs(b.scalar_curvature()) < 1e-12

    def test_radial_scalars_vanish(self):
        g = flat_metric(L3)
        x = complex_to_real([0.1, 0.2, 2j])
        b = curvature_bundle(g, x)
        fr = radial_frame(L3, x)
        assert abs(b.sigma_radial(fr.xi)) < 1e-12
        assert abs(b.kappa_radial(fr.xi)) < 1e-12


class TestDiscModel:
    """The log family with a=-1, r0=1 has constant holomorphic curvature -1."""

    @pytest.mark.parametrize("seed,r", [(0, 1.3), (1, 2.0), (2, 2.8)])
    def test_hsc_minus_one(self, seed, r):
        g = potential_metric(L2, LogFamily(-1.0, 1.0))
        x = timelike_point(L2, r, seed=seed)
        b = curvature_bundle(g, x)
        rng = np.random.default_rng(seed + 1000)
        for _ in range(20):
            X = rand_nonnull(b, rng)
            assert b.hsc(X) == pytest.approx(-1.0, abs=1e-7)

    def test_hsc_scales_with_a(self):
        g = potential_metric(L2, LogFamily(-2.0, 1.0))
        x = timelike_point(L2, 1.8, seed=7)
        b = curvature_bundle(g, x)
        rng = np.random.default_rng(11)
        for _ in range(5):
            X = rand_nonnull(b, rng)
            assert b.hsc(X) == pytest.approx(-2.0, abs=1e-7)

    def test_einstein_property(self):
        # constant holomorphic curvature a makes Ricci = (n+1)a/2 * g
        g = potential_metric(L2, LogFamily(-1.0, 1.0))
        x = timelike_point(L2, 2.2, seed=8)
        b = curvature_bundle(g, x)
        assert np.allclose(b.ricci(), -1.5 * b.G, atol=1e-9)
        assert b.scalar_curvature() == pytest.approx(-6.0, rel=1e-9)

    def test_j_invariance(self):
        g = potential_metric(L2, LogFamily(-1.0, 1.0))
        x = timelike_point(L2, 1.6, seed=9)
        b = curvature_bundle(g, x)
        J = b.J
        RJ = np.einsum("abkl,ai,bj->ijkl", b.R.a, J, J)
        assert np.allclose(RJ, b.R.a, atol=1e-9)

    def test_first_bianchi_and_symmetries(self):
        g = potential_metric(L3, InverseFamily())
        x = timelike_point(L3, 0.8, seed=10)
        b = curvature_bundle(g, x)
        scale = max(1.0, b.R.scale())
        assert b.R.curvature_symmetry_defect() < 1e-9 * scale
        assert b.R.first_bianchi_defect() < 1e-9 * scale

    def test_null_direction_rejected(self):
        b = curvature_bundle(flat_metric(L2), complex_to_real([0, 1j]))
        with pytest.raises(DomainError):
            b.hsc([1.0, 0.0, 1.0, 0.0])  # null for the flat Lorentz form


class TestDualVsFd:
    @pytest.mark.parametrize("seed,r", [(0, 1.5), (1, 2.0), (2, 2.5)])
    def test_bundles_agree(self, seed, r):
        g = potential_metric(L2, LogFamily(-1.0, 1.0))
        x = timelike_point(L2, r, seed=seed)
        bd = curvature_bundle(g, x, jets="dual")
        bf = curvature_bundle(g, x, jets="fd")
        scale = max(1.0, bd.R.scale())
        assert np.max(np.abs(bd.R.a - bf.R.a)) < 1e-6 * scale

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            curvature_bundle(flat_metric(L2), np.zeros(4), jets="magic")


class TestKahlerDefect:
    def test_potential_metrics_closed(self):
        for fam in (LogFamily(-1.0, 1.0), InverseFamily()):
            g = potential_metric(L2, fam)
            x = timelike_point(L2, 1.4 if fam.kind == "log" else 0.7, seed=12)
            assert kahler_defect(g, x) < 1e-9

    def test_flat_closed(self):
        assert kahler_defect(flat_metric(L3), np.ones(6)) < 1e-14

    def test_plain_conformal_pair_not_kahler(self):
        # u = v = 0 violates the closedness condition away from r where
        # the radial balance happens to hold
        pair = ConformalPair(u=lambda r: 0.0 * r, v=lambda r: 0.0 * r, source="unit")
        g = metric_from_conformal_pair(L2, pair)
        x = complex_to_real([0, 2j])
        assert kahler_defect(g, x) > 1e-3

    def test_structure_covariant_defect_agrees(self):
        g = potential_metric(L2, LogFamily(-1.0, 1.0))
        x = timelike_point(L2, 2.0, seed=13)
        assert structure_covariant_defect(g, x) < 1e-9


class TestVectorDerivatives:
    def test_flat_radial_field(self):
        # nabla of xi' = Z/r on the flat Lorentz background at (0,0,2i):
        # diagonal (1/2, ..., 1/2, 0) in the interleaved coordinates
        g = flat_metric(L3)
        fld = radial_unit_field(L3)
        x = complex_to_real([0, 0, 2j])
        D, V = covariant_vector_derivative(g, fld, x)
        assert np.allclose(V, x / 2.0)
        want = np.diag([0.5, 0.5, 0.5, 0.5, 0.5, 0.0])
        assert np.allclose(D, want, atol=1e-12)

    def test_flat_shape_scalar(self):
        # h(nabla_{x0} xi', x0)/h(x0,x0) = 1/r on D-directions, giving the
        # radial shape value -2/r under the Lorentz sign convention
        g = flat_metric(L3)
        fld = radial_unit_field(L3)
        x = complex_to_real([0, 0, 2j])
        D, _ = covariant_vector_derivative(g, fld, x)
        H = L3.flat_real()
        x0 = np.zeros(6)
        x0[0] = 1.0
        k = -2.0 * (D[0] @ H @ x0) / (x0 @ H @ x0)
        assert k == pytest.approx(-1.0, rel=1e-12)


def test_symmetry_gate_wiring():
    # a zero gate trips on any honest rounding noise
    g = potential_metric(L2, LogFamily(-1.0, 1.0))
    x = timelike_point(L2, 2.0, seed=14)
    with pytest.raises(NumericalBreakdown):
        curvature_bundle(g, x, symmetry_gate=0.0)
