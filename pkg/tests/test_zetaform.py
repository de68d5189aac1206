"""Tests for determinant zeta evaluation, canonical forms, and reciprocity."""

import math
from fractions import Fraction

import numpy as np
import pytest

from qcazeta import qca, spectral, zetaform as zf
from qcazeta.errors import BranchError, PoleError

PI = math.pi

EXPECTED_FORMS = {
    1: zf.CanonicalAbsForm(kappa=1, ell=0, m=(), n=(1, 1)),
    2: zf.CanonicalAbsForm(kappa=-1, ell=0, m=(), n=(1, 1, 2)),
    3: zf.CanonicalAbsForm(kappa=1, ell=0, m=(), n=(2, 2, 2, 2)),
    4: zf.CanonicalAbsForm(kappa=1, ell=0, m=(1, 1, 1, 1), n=(2,) * 10),
}


def tensor_global(n):
    return qca.assemble_global(qca.local_tensor(PI / 2), n)


class TestZetaEval:
    def test_identity_single_site(self):
        spec = spectral.numeric_spectrum(tensor_global(1))
        z = zf.spectral_zeta(spec)
        assert zf.zeta_eval(z, 0.5) == pytest.approx(4.0)

    def test_value_one_at_origin(self):
        spec = spectral.numeric_spectrum(tensor_global(3))
        assert zf.zeta_eval(zf.spectral_zeta(spec), 0.0) == pytest.approx(1.0)

    def test_tensor_n3_half(self):
        spec = spectral.numeric_spectrum(tensor_global(3))
        expected = 0.5**-4 * 1.5**-4  # from spectrum {[1]^4, [-1]^4}
        assert zf.zeta_eval(zf.spectral_zeta(spec), 0.5) == pytest.approx(expected)

    def test_power_relation_between_normalizations(self):
        spec = spectral.numeric_spectrum(tensor_global(3))
        full = zf.spectral_zeta(spec)
        rooted = zf.spectral_zeta(spec, ips=True)
        rng = np.random.default_rng(13)
        for _ in range(10):
            u = float(rng.uniform(0.05, 0.45))
            lhs = zf.zeta_eval(rooted, u) ** spec.dim
            rhs = zf.zeta_eval(full, u)
            assert abs(lhs - rhs) / abs(rhs) < 1e-10

    def test_pole_error(self):
        spec = spectral.numeric_spectrum(tensor_global(2))
        with pytest.raises(PoleError):
            zf.zeta_eval(zf.spectral_zeta(spec), 1.0)

    def test_branch_error_on_negative_determinant(self):
        spec = spectral.Spectrum(eigs=((2 + 0j, 1), (0 + 0j, 1)), dim=2, origin="numeric")
        z = zf.spectral_zeta(spec, ips=True)
        with pytest.raises(BranchError):
            zf.zeta_eval(z, 0.6)  # det factor (1 - 1.2) < 0

    def test_rho_validation(self):
        spec = spectral.numeric_spectrum(tensor_global(2))
        with pytest.raises(ValueError):
            zf.SpectralZeta(spectrum=spec, root_exponent=Fraction(1, 3))


class TestCanonicalForm:
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_exact_path_matches_printed_shapes(self, n):
        spec = spectral.exact_spectrum(tensor_global(n))
        form = zf.canonical_form(spec)
        assert form == EXPECTED_FORMS[n]

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
    def test_numeric_path_agrees_with_exact(self, n):
        spec = spectral.numeric_spectrum(tensor_global(n))
        assert zf.canonical_form(spec) == zf.tensor_case_form(n)[1]

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6, 7, 8])
    def test_case_form_agrees_with_spectrum(self, n):
        case, form = zf.tensor_case_form(n)
        spec = spectral.numeric_spectrum(tensor_global(n))
        assert zf.canonical_form(spec) == form

    def test_round_trip_evaluation(self):
        """kappa * form(u) reproduces the spectral product at random u."""
        rng = np.random.default_rng(3)
        for n in (2, 3, 4):
            spec = spectral.numeric_spectrum(tensor_global(n))
            form = zf.canonical_form(spec)
            z = zf.spectral_zeta(spec)
            for _ in range(10):
                u = float(rng.uniform(0.05, 0.45))
                assert form.evaluate(u) == pytest.approx(
                    zf.zeta_eval(z, u), rel=1e-10
                )

    def test_rule90_global_has_canonical_form(self):
        gop = qca.assemble_global(qca.local_qca2(0.0, 0.0), 3)
        spec = spectral.exact_spectrum(gop)
        form = zf.canonical_form(spec)
        assert form is not zf.NOT_ABSOLUTE_FORM
        # orders (1,4),(2,2),(4,1): exponents n = 1*4+... via Mobius merge
        z = zf.spectral_zeta(spectral.numeric_spectrum(gop))
        for u in (0.3, 2.1):
            assert form.evaluate(u) == pytest.approx(zf.zeta_eval(z, u), rel=1e-9)

    def test_not_roots_of_unity(self):
        spec = spectral.Spectrum(eigs=((0.5 + 0j, 2),), dim=2, origin="numeric")
        assert zf.canonical_form(spec) is zf.NOT_ABSOLUTE_FORM

    def test_non_uniform_class_rejected(self):
        # a lone primitive 4th root without its Galois partner
        spec = spectral.Spectrum(
            eigs=((1j, 1), (1 + 0j, 1), (-1 + 0j, 2)), dim=4, origin="numeric"
        )
        assert zf.canonical_form(spec) is zf.NOT_ABSOLUTE_FORM

    def test_generic_angle_returns_not_absolute(self):
        gop = qca.assemble_global(qca.local_tensor(PI / 3), 3)
        spec = spectral.numeric_spectrum(gop)
        assert zf.canonical_form(spec) is zf.NOT_ABSOLUTE_FORM

    def test_form_json(self):
        case, form = zf.tensor_case_form(4)
        obj = form.to_json(case)
        assert obj == {
            "kappa": 1,
            "ell": 0,
            "m": [1, 1, 1, 1],
            "n": [2] * 10,
            "D": -16,
            "C": 1,
            "case": "c",
        }
        assert zf.form_from_json(obj) == form


class TestTensorCaseForm:
    def test_case_labels(self):
        assert zf.tensor_case_form(1)[0] == "a"
        assert zf.tensor_case_form(2)[0] == "a"
        assert zf.tensor_case_form(3)[0] == "b"
        assert zf.tensor_case_form(4)[0] == "c"

    def test_case_a_shape(self):
        _, form = zf.tensor_case_form(1)
        assert form.n == (1, 1) and form.m == ()

    @pytest.mark.parametrize("n", range(1, 21))
    def test_case_from_sign_of_b(self, n):
        pred = spectral.predicted_multiplicities(n)
        case, form = zf.tensor_case_form(n)
        if pred.b_value > 0:
            assert case == "a"
        elif pred.b_value == 0:
            assert case == "b"
        else:
            assert case == "c"
        assert form.kappa == (-1 if pred.c_plus % 2 else 1)


class TestAutomorphy:
    @pytest.mark.parametrize(
        "n,d_weight,c_sign",
        [(1, -2, 1), (2, -4, -1), (3, -8, 1), (4, -16, 1)],
    )
    def test_printed_certificates(self, n, d_weight, c_sign):
        cert = zf.automorphy(EXPECTED_FORMS[n], rng=0)
        assert (cert.weight, cert.c_sign) == (d_weight, c_sign)
        assert cert.verified and cert.max_residual < 1e-9

    @pytest.mark.parametrize("n", range(1, 9))
    def test_weight_is_minus_dim(self, n):
        _, form = zf.tensor_case_form(n)
        cert = zf.automorphy(form, rng=n)
        assert cert.weight == -(1 << n)
        assert cert.verified

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_exact_rational_identity(self, n):
        """f(1/x) x^D = C f(x) exactly in Fraction arithmetic."""
        form = EXPECTED_FORMS[n]
        for x in (Fraction(3, 2), Fraction(7, 3), Fraction(5, 2)):
            lhs = form.evaluate(1 / x) * x**form.weight
            rhs = form.c_sign * form.evaluate(x)
            assert lhs == rhs


class TestOrthogonalReciprocity:
    def test_qca1_random_angles(self):
        rng = np.random.default_rng(19)
        loc = qca.local_qca1(*(float(v) for v in rng.uniform(0, 2 * PI, 2)))
        rep = zf.verify_orthogonal_reciprocity(qca.assemble_global(loc, 4), rng=rng)
        assert rep.max_residual < 1e-9
        assert rep.det_sign in (-1, 1)

    def test_tensor_n3_determinant(self):
        rep = zf.verify_orthogonal_reciprocity(tensor_global(3), rng=0)
        # det = product of eigenvalues = (-1)^(multiplicity of -1) = (-1)^4
        assert rep.det_sign == 1
        assert rep.det_residual < 1e-10

    def test_stochastic_rejected(self):
        gop = qca.assemble_global(qca.local_stochastic(0.2, 0.9), 3)
        with pytest.raises(ValueError):
            zf.verify_orthogonal_reciprocity(gop)


class TestGeneralReciprocity:
    def test_identity_matrix(self):
        assert zf.general_reciprocity_check(np.eye(7), 2.0) < 1e-12

    def test_random_invertible(self):
        rng = np.random.default_rng(29)
        a = rng.normal(size=(5, 5))
        assert zf.general_reciprocity_check(a, 0.3) < 1e-9

    def test_orthogonal_reduces_to_self_reciprocity(self):
        gop = qca.assemble_global(qca.local_qca1(1.1, 0.6), 3)
        a = gop.as_complex().real
        assert zf.general_reciprocity_check(a, 2.4) < 1e-9

    def test_singular_rejected(self):
        with pytest.raises(ValueError):
            zf.general_reciprocity_check(np.zeros((3, 3)), 0.5)
