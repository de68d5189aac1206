"""Determinant zeta functions and their absolute-automorphic canonical form.

The zeta function of an operator Q on dimension M is det(I - uQ)^{-1}; the
interacting-particle normalization takes its M-th root.  When the spectrum
consists of full, uniformly occupied Galois classes of roots of unity, the
zeta function collapses (via Mobius inversion of cyclotomic factors) to

    kappa * x^(ell/2) * prod_i (x^m(i) - 1) / prod_j (x^n(j) - 1),

the shape whose reciprocity f(1/x) = C x^{-D} f(x) carries integer weight
D = ell + sum m - sum n and sign C = (-1)^(a-b).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BranchError, PoleError
from .qca import GlobalOperator, _dense_of, classify
from .spectral import (
    NOT_ROOTS_OF_UNITY,
    Spectrum,
    _divisors,
    _mobius,
    _totient,
    cyclotomic_poly,
    eval_poly,
    predicted_multiplicities,
    roots_of_unity_profile,
)

POLE_TOL = 1e-12

AUTOMORPHY_TOL = 1e-9

# Sample windows for reciprocity checks; reciprocal pairs stay clear of the
# unit-modulus poles of orthogonal operators.
SAMPLE_WINDOWS = ((0.05, 0.45), (1.6, 3.0))


class _NotAbsoluteFormType:
    """Sum-type marker: the spectrum does not define a canonical form."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NotAbsoluteForm"

    def __bool__(self):
        return False


NOT_ABSOLUTE_FORM = _NotAbsoluteFormType()


@dataclass(frozen=True)
class SpectralZeta:
    """det(I - uQ)^(-rho') zeta data; root_exponent is 1 or 1/dim."""

    spectrum: Spectrum
    root_exponent: Fraction

    def __post_init__(self):
        if self.root_exponent not in (Fraction(1), Fraction(1, self.spectrum.dim)):
            raise ValueError("root exponent must be 1 or 1/dim")


def spectral_zeta(spectrum: Spectrum, ips: bool = False) -> SpectralZeta:
    rho = Fraction(1, spectrum.dim) if ips else Fraction(1)
    return SpectralZeta(spectrum=spectrum, root_exponent=rho)


def zeta_eval(z: SpectralZeta, u: float) -> float:
    """prod (1 - lambda u)^(-mult * rho) at real u, combining conjugates."""
    log_mag = 0.0
    phase = 0.0
    for value, mult in z.spectrum.eigs:
        factor = 1.0 - value * u
        if abs(factor) < POLE_TOL * max(1.0, abs(u)):
            raise PoleError(f"u = {u} is a reciprocal eigenvalue")
        log_mag += mult * math.log(abs(factor))
        phase += mult * cmath.phase(factor)
    rho = z.root_exponent
    # Residual phase of the full determinant, mod 2*pi.
    wrapped = math.remainder(phase, 2.0 * math.pi)
    if rho == 1:
        if abs(math.remainder(phase, math.pi)) > 1e-8:
            raise ArithmeticError("determinant product is not real")
        sign = 1.0 if abs(wrapped) < math.pi / 2 else -1.0
        return sign * math.exp(-log_mag)
    if abs(wrapped) > 1e-8:
        raise BranchError("fractional power off the positive branch")
    return math.exp(-float(rho) * log_mag)


@dataclass(frozen=True)
class CanonicalAbsForm:
    """kappa * x^(ell/2) prod (x^m - 1) / prod (x^n - 1)."""

    kappa: int
    ell: int
    m: tuple[int, ...]
    n: tuple[int, ...]

    def __post_init__(self):
        if self.kappa not in (-1, 1):
            raise ValueError("kappa must be +-1")
        if any(v < 1 for v in self.m + self.n):
            raise ValueError("orders must be positive integers")

    @property
    def a(self) -> int:
        return len(self.m)

    @property
    def b(self) -> int:
        return len(self.n)

    @property
    def deg(self) -> Fraction:
        return Fraction(self.ell, 2) + sum(self.m) - sum(self.n)

    @property
    def weight(self) -> int:
        return self.ell + sum(self.m) - sum(self.n)

    @property
    def c_sign(self) -> int:
        return -1 if (self.a - self.b) % 2 else 1

    def evaluate(self, x, signed: bool = True):
        """Evaluate at x; exact for Fraction x when ell is even."""
        if self.ell % 2 == 0:
            mono = x ** (self.ell // 2)
        else:
            mono = float(x) ** (self.ell / 2.0)
        num = mono
        for mi in self.m:
            num = num * (x**mi - 1)
        den = 1
        for nj in self.n:
            den = den * (x**nj - 1)
        if den == 0:
            raise PoleError(f"form has a pole at x = {x}")
        out = num / den
        return self.kappa * out if signed else out

    def to_json(self, case: str = "general") -> dict:
        return {
            "kappa": self.kappa,
            "ell": self.ell,
            "m": list(self.m),
            "n": list(self.n),
            "D": self.weight,
            "C": self.c_sign,
            "case": case,
        }


def form_from_json(obj: dict) -> CanonicalAbsForm:
    return CanonicalAbsForm(
        kappa=int(obj["kappa"]),
        ell=int(obj["ell"]),
        m=tuple(int(v) for v in obj["m"]),
        n=tuple(int(v) for v in obj["n"]),
    )


def _uniform_class_multiplicities(profile) -> dict[int, int] | None:
    """{d: mult} when every primitive class is fully, uniformly occupied."""
    out: dict[int, int] = {}
    for d, by_root in profile.items():
        expected = _totient(d)
        if len(by_root) != expected:
            return None
        mults = set(by_root.values())
        if len(mults) != 1:
            return None
        out[d] = mults.pop()
    return out


def _spectral_value(spectrum: Spectrum, u: float) -> float:
    """det(I - uQ)^(-1) from the eigenvalue multiset."""
    prod = complex(1.0)
    for value, mult in spectrum.eigs:
        prod *= (1.0 - value * u) ** mult
    if abs(prod.imag) > 1e-9 * max(1.0, abs(prod.real)):
        raise ArithmeticError("spectral product is not real")
    return 1.0 / prod.real


def canonical_form(
    spec: Spectrum, tol: float = 1e-8, max_order: int | None = None
):
    """Canonical absolute-form shape of the spectrum's zeta function.

    Groups eigenvalues into primitive root-of-unity classes, requires each
    Galois class uniformly occupied, rewrites each cyclotomic factor as a
    Mobius product of (x^e - 1), merges exponents, and fixes kappa by
    evaluation at u = 1/2.  Returns NotAbsoluteForm when the spectrum is
    not of that shape.
    """
    profile = roots_of_unity_profile(spec, max_order=max_order, tol=tol)
    if profile is NOT_ROOTS_OF_UNITY:
        return NOT_ABSOLUTE_FORM
    class_mults = _uniform_class_multiplicities(profile)
    if class_mults is None:
        return NOT_ABSOLUTE_FORM

    # det(I - uQ) = unit * prod_e (u^e - 1)^(exponents[e]) via Mobius.
    exponents: dict[int, int] = {}
    for d, mult in class_mults.items():
        for e in _divisors(d):
            exponents[e] = exponents.get(e, 0) + mult * _mobius(d // e)
    m: list[int] = []
    n: list[int] = []
    for e in sorted(exponents):
        count = exponents[e]
        if count > 0:
            n.extend([e] * count)  # denominator of the reciprocal zeta
        elif count < 0:
            m.extend([e] * (-count))

    # Sign by evaluation at u = 1/2 (exact when the spectrum is exact).
    if spec.unity_orders is not None:
        half = Fraction(1, 2)
        det_half = Fraction(1)
        for d, mult in spec.unity_orders:
            det_half *= Fraction(eval_poly(cyclotomic_poly(d), half)) ** mult
        if sum(mult for d, mult in spec.unity_orders if d == 1) % 2:
            det_half = -det_half
        zeta_half = 1 / det_half
        unsigned = CanonicalAbsForm(kappa=1, ell=0, m=tuple(m), n=tuple(n))
        form_half = unsigned.evaluate(half)
        if abs(zeta_half) != abs(form_half):
            return NOT_ABSOLUTE_FORM
        kappa = 1 if zeta_half == form_half else -1
    else:
        zeta_half = _spectral_value(spec, 0.5)
        unsigned = CanonicalAbsForm(kappa=1, ell=0, m=tuple(m), n=tuple(n))
        form_half = unsigned.evaluate(0.5)
        ratio = zeta_half / form_half
        if abs(abs(ratio) - 1.0) > 1e-8:
            return NOT_ABSOLUTE_FORM
        kappa = 1 if ratio > 0 else -1
    return CanonicalAbsForm(kappa=kappa, ell=0, m=tuple(m), n=tuple(n))


def tensor_case_form(n_sites: int) -> tuple[str, CanonicalAbsForm]:
    """Case label and canonical form of the tensor model at xi = pi/2.

    Case (a): c+ > c-, denominators (1 repeated c+ - c-, 2 repeated c-);
    case (b): c+ = c-, denominators (2 repeated c-); case (c): c+ < c-,
    numerators (1 repeated c- - c+), denominators (2 repeated c-).  The
    sign is (-1)^(c+).
    """
    pred = predicted_multiplicities(n_sites)
    c_plus, c_minus = pred.c_plus, pred.c_minus
    kappa = -1 if c_plus % 2 else 1
    if c_plus > c_minus:
        case = "a"
        m: tuple[int, ...] = ()
        n = (1,) * (c_plus - c_minus) + (2,) * c_minus
    elif c_plus == c_minus:
        case = "b"
        m = ()
        n = (2,) * c_minus
    else:
        case = "c"
        m = (1,) * (c_minus - c_plus)
        n = (2,) * c_minus
    return case, CanonicalAbsForm(kappa=kappa, ell=0, m=m, n=n)


@dataclass(frozen=True)
class AutomorphyCertificate:
    """Weight D and sign C of f(1/x) = C x^(-D) f(x), with the residual."""

    c_sign: int
    weight: int
    verified: bool
    max_residual: float

    def to_json(self) -> dict:
        return {
            "C": self.c_sign,
            "D": self.weight,
            "verified": self.verified,
            "max_residual": self.max_residual,
        }


def _as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def automorphy(
    form: CanonicalAbsForm, samples: int = 10, rng=None
) -> AutomorphyCertificate:
    """Certificate for the reciprocity of a canonical form; the residual is
    measured at random x in (1, 3)."""
    gen = _as_rng(rng)
    d_weight = form.weight
    c_sign = form.c_sign
    worst = 0.0
    drawn = 0
    while drawn < samples:
        x = float(gen.uniform(1.0, 3.0))
        if x - 1.0 < 1e-6:
            continue
        drawn += 1
        lhs = form.evaluate(1.0 / x)
        rhs = c_sign * x ** (-d_weight) * form.evaluate(x)
        worst = max(worst, abs(lhs - rhs) / abs(lhs))
    return AutomorphyCertificate(
        c_sign=c_sign,
        weight=d_weight,
        verified=worst < AUTOMORPHY_TOL,
        max_residual=worst,
    )


@dataclass(frozen=True)
class ReciprocityReport:
    det_sign: int
    det_residual: float
    max_residual: float
    samples: int

    def to_json(self) -> dict:
        return {
            "det": self.det_sign,
            "det_residual": self.det_residual,
            "max_residual": self.max_residual,
            "samples": self.samples,
        }


def _draw_samples(gen: np.random.Generator, count: int) -> list[float]:
    lo_w, hi_w = SAMPLE_WINDOWS
    out = []
    for _ in range(count):
        window = lo_w if gen.uniform() < 0.5 else hi_w
        out.append(float(gen.uniform(*window)))
    return out


def verify_orthogonal_reciprocity(
    global_op: GlobalOperator, samples: int = 10, rng=None, tol: float = 1e-10
) -> ReciprocityReport:
    """Check zeta(1/u) = det(Q) u^dim zeta(u) for an orthogonal operator.

    Both sides are computed independently through determinant evaluations;
    det(Q) is snapped to +-1 and its snap residual reported.
    """
    m = _dense_of(global_op)
    cls = classify(m)
    if not cls.orthogonal:
        raise ValueError("operator is not orthogonal")
    dim = m.shape[0]
    det = np.linalg.det(m.real.astype(float))
    det_sign = 1 if det >= 0 else -1
    det_residual = abs(det - det_sign)
    if det_residual > tol:
        raise ArithmeticError(f"determinant {det} does not snap to +-1")

    gen = _as_rng(rng)
    eye = np.eye(dim)
    a = m.real.astype(float)
    worst = 0.0
    for u in _draw_samples(gen, samples):
        sign_l, log_l = np.linalg.slogdet(eye - a / u)
        sign_r, log_r = np.linalg.slogdet(eye - a * u)
        # LHS = 1/det(I - Q/u); RHS = det_sign * u^dim / det(I - uQ).
        log_ratio = -log_l - dim * math.log(u) + log_r
        sign_ratio = sign_l * sign_r * det_sign
        worst = max(worst, abs(sign_ratio * math.exp(log_ratio) - 1.0))
    return ReciprocityReport(
        det_sign=det_sign,
        det_residual=float(det_residual),
        max_residual=float(worst),
        samples=samples,
    )


def general_reciprocity_check(a_matrix, u: float) -> float:
    """Residual of zeta_A(1/u) = (-u)^M det(A)^(-1) zeta_{A^(-1)}(u) for an
    invertible M x M matrix, both sides via determinants."""
    a = np.asarray(a_matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("need a square matrix")
    dim = a.shape[0]
    sign_a, log_a = np.linalg.slogdet(a)
    if sign_a == 0:
        raise ValueError("matrix is singular")
    inv = np.linalg.inv(a)
    eye = np.eye(dim)
    sign_l, log_l = np.linalg.slogdet(eye - a / u)
    if sign_l == 0:
        raise PoleError("1/u is a pole of the left-hand side")
    sign_r, log_r = np.linalg.slogdet(eye - inv * u)
    if sign_r == 0:
        raise PoleError("u is a pole of the right-hand side")
    # LHS = 1/det(I - A/u); RHS = (-u)^M det(A)^(-1) / det(I - u A^(-1)).
    sign_u = 1 if u > 0 else -1
    sign_rhs = ((-1) ** dim) * (sign_u**dim) * sign_a * sign_r
    log_rhs = dim * math.log(abs(u)) - log_a - log_r
    log_ratio = -log_l - log_rhs
    sign_ratio = sign_l * sign_rhs
    return abs(sign_ratio * math.exp(log_ratio) - 1.0)
