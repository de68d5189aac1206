"""Spectra of global operators, exact and numeric.

Provides the Chebyshev closed form for the +/-1 multiplicities of the
tensor-type model at xi = pi/2, a dense eigensolver front end with
tolerance clustering, a division-free (Berkowitz) characteristic
polynomial det(I - u Q) for exact operators, and recognition of
root-of-unity spectra via cyclotomic factorization.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CapabilityError, ExactnessError
from .qca import GlobalOperator, _dense_of
from .scalars import is_exact

# Division-free charpoly is quartic in the dimension; 2^6 = 64 stays cheap.
EXACT_CHARPOLY_CAP_SITES = 6

DEFAULT_CLUSTER_TOL = 1e-8

B_INTEGRALITY_TOL = 1e-6


class _NotRootsOfUnityType:
    """Sum-type marker: a spectrum is not made of roots of unity."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NotRootsOfUnity"

    def __bool__(self):
        return False


NOT_ROOTS_OF_UNITY = _NotRootsOfUnityType()


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalue multiset with multiplicities.

    unity_orders is set on the exact path: pairs (d, mult) meaning every
    primitive d-th root of unity occurs with the given multiplicity.
    """

    eigs: tuple[tuple[complex, int], ...]
    dim: int
    origin: str  # "exact" | "numeric"
    unity_orders: tuple[tuple[int, int], ...] | None = None

    def __post_init__(self):
        if sum(m for _, m in self.eigs) != self.dim:
            raise ValueError("multiplicities must sum to the dimension")

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "eigs": [
                {"re": float(v.real), "im": float(v.imag), "mult": m}
                for v, m in self.eigs
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Spectrum":
        eigs = tuple(
            (complex(e["re"], e["im"]), int(e["mult"])) for e in obj["eigs"]
        )
        return cls(eigs=eigs, dim=int(obj["dim"]), origin="numeric")


@dataclass(frozen=True)
class MultiplicityPrediction:
    """Closed-form +/-1 multiplicities for the tensor model at xi = pi/2."""

    n_sites: int
    c_plus: int
    c_minus: int
    b_value: int

    def __post_init__(self):
        if self.c_plus + self.c_minus != 1 << self.n_sites:
            raise ValueError("multiplicities must sum to 2^N")
        if self.c_plus < 0 or self.c_minus < 0:
            raise ValueError("multiplicities must be nonnegative")


def chebyshev_t(n: int, x):
    """First-kind Chebyshev polynomial T_n(x) on [-1, 1].

    Uses the three-term recurrence, so rational inputs stay exact.
    """
    if n < 0:
        raise ValueError("order must be nonnegative")
    if abs(x) > 1:
        raise ValueError("argument must lie in [-1, 1]")
    if n == 0:
        return x - x + 1  # one, in the arithmetic of x
    prev, cur = 1, x
    for _ in range(n - 1):
        prev, cur = cur, 2 * x * cur - prev
    return cur


def predicted_multiplicities(n_sites: int) -> MultiplicityPrediction:
    """Multiplicities of +1 and -1: (2^N +- B_N)/2 with
    B_N = 2^((N+1)/2) T_{N-1}(sqrt(2)/2), asserted to be an integer."""
    if n_sites < 1:
        raise ValueError("need at least one site")
    t = chebyshev_t(n_sites - 1, math.sqrt(0.5))
    b_float = 2.0 ** ((n_sites + 1) / 2.0) * t
    b = round(b_float)
    if abs(b_float - b) >= B_INTEGRALITY_TOL:
        raise ArithmeticError(
            f"B_{n_sites} = {b_float!r} is not within {B_INTEGRALITY_TOL} of an integer"
        )
    dim = 1 << n_sites
    if (dim + b) % 2:
        raise ArithmeticError("parity of B must match 2^N")
    return MultiplicityPrediction(
        n_sites=n_sites,
        c_plus=(dim + b) // 2,
        c_minus=(dim - b) // 2,
        b_value=b,
    )


def _cluster(values: np.ndarray, tol: float) -> list[tuple[complex, int]]:
    """Union-find clustering of eigenvalues under pairwise distance < tol."""
    n = len(values)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    order = np.lexsort((values.imag, values.real))
    vals = values[order]
    # Pairwise links; restrict to a sorted window for speed.
    for i in range(n):
        j = i + 1
        while j < n and vals[j].real - vals[i].real < tol:
            if abs(vals[j] - vals[i]) < tol:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
            j += 1
    groups: dict[int, list[complex]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(vals[i])
    clusters = [(complex(np.mean(g)), len(g)) for g in groups.values()]
    clusters.sort(key=lambda t: (round(t[0].real, 12), round(t[0].imag, 12)))
    return clusters


def numeric_spectrum(op, tol: float = DEFAULT_CLUSTER_TOL) -> Spectrum:
    """Eigenvalues of the dense operator clustered into (value, mult) pairs;
    the cluster representative is the mean."""
    m = _dense_of(op)
    vals = np.linalg.eigvals(m)
    clusters = _cluster(vals, tol)
    return Spectrum(eigs=tuple(clusters), dim=m.shape[0], origin="numeric")


# ---------------------------------------------------------------------------
# Exact characteristic polynomial (Berkowitz, division-free)
# ---------------------------------------------------------------------------


def _berkowitz(a: list[list]) -> list:
    """Coefficients of det(lambda I - A), leading term first."""
    n = len(a)
    if n == 0:
        return [1]
    vec = [1, -a[0][0]]
    for i in range(1, n):
        row = a[i][:i]
        col = [a[j][i] for j in range(i)]
        diag = a[i][i]
        prods = []
        v = col
        prods.append(sum(row[j] * v[j] for j in range(i)))
        for _ in range(i - 1):
            v = [sum(a[p][q] * v[q] for q in range(i)) for p in range(i)]
            prods.append(sum(row[j] * v[j] for j in range(i)))
        toep = [1, -diag] + [-p for p in prods]
        new = [0] * (i + 2)
        for j in range(i + 2):
            acc = 0
            for k in range(min(j, len(toep) - 1) + 1):
                if j - k < len(vec):
                    acc += toep[k] * vec[j - k]
            new[j] = acc
        vec = new
    return vec


def exact_char_poly(op, cap: int = EXACT_CHARPOLY_CAP_SITES) -> list:
    """det(I - u Q) for an exact operator, as coefficients, constant first.

    Division-free, so integer entries give integer coefficients.  The
    constant term is always 1.
    """
    if isinstance(op, GlobalOperator):
        if op.n_sites > cap:
            raise CapabilityError(
                f"exact characteristic polynomial capped at {cap} sites"
            )
        if not op.exact:
            raise ExactnessError("global operator has inexact entries")
        dense = op.dense()
    else:
        dense = np.asarray(op)
        if dense.dtype != object or not all(is_exact(v) for v in dense.flat):
            raise ExactnessError("matrix has inexact entries")
        if dense.shape[0] > (1 << cap):
            raise CapabilityError("matrix too large for the exact path")
    rows = [list(r) for r in dense]
    coeffs = _berkowitz(rows)
    # det(I - uA) read constant-first equals det(lambda I - A) leading-first.
    if coeffs[0] != 1:
        raise AssertionError("characteristic polynomial must be monic")
    return coeffs


def eval_poly(coeffs, u):
    """Evaluate a constant-first coefficient list at u (Horner)."""
    acc = 0 * u
    for c in reversed(coeffs):
        acc = acc * u + c
    return acc


# ---------------------------------------------------------------------------
# Cyclotomic factorization and root-of-unity profiles
# ---------------------------------------------------------------------------


def _divisors(n: int) -> list[int]:
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def _mobius(n: int) -> int:
    if n == 1:
        return 1
    mu = 1
    p = 2
    m = n
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            mu = -mu
        p += 1
    if m > 1:
        mu = -mu
    return mu


def _totient(n: int) -> int:
    result = n
    p = 2
    m = n
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _poly_mul(p: list, q: list) -> list:
    out = [0] * (len(p) + len(q) - 1)
    for i, pi in enumerate(p):
        if pi == 0:
            continue
        for j, qj in enumerate(q):
            out[i + j] += pi * qj
    return out


def _poly_divmod_monic(p: list, d: list) -> tuple[list, list]:
    """Divide by a monic divisor; both constant-first integer lists."""
    p = list(p)
    deg_p, deg_d = len(p) - 1, len(d) - 1
    if deg_p < deg_d:
        return [0], p
    quot = [0] * (deg_p - deg_d + 1)
    for k in range(deg_p - deg_d, -1, -1):
        c = p[k + deg_d]
        if c == 0:
            continue
        quot[k] = c
        for j in range(deg_d + 1):
            p[k + j] -= c * d[j]
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return quot, p


def cyclotomic_poly(d: int) -> list:
    """Coefficients of the d-th cyclotomic polynomial, constant first,
    built as prod_{e | d} (x^e - 1)^{mobius(d/e)}."""
    num = [1]
    dens = []
    for e in _divisors(d):
        mu = _mobius(d // e)
        factor = [-1] + [0] * (e - 1) + [1]  # x^e - 1
        if mu == 1:
            num = _poly_mul(num, factor)
        elif mu == -1:
            dens.append(factor)
    for factor in dens:
        num, rem = _poly_divmod_monic(num, factor)
        if any(rem_c != 0 for rem_c in rem):
            raise AssertionError("cyclotomic division must be exact")
    return num


def factor_into_cyclotomics(coeffs: list, max_order: int) -> dict[int, int] | _NotRootsOfUnityType:
    """Factor a constant-first polynomial with constant term 1 into
    cyclotomic powers; returns {d: exponent} or NotRootsOfUnity."""
    rem = list(coeffs)
    exps: dict[int, int] = {}
    d = 1
    while len(rem) > 1 and d <= max_order:
        if _totient(d) <= len(rem) - 1:
            phi = cyclotomic_poly(d)
            while True:
                quot, r = _poly_divmod_monic(rem, phi)
                if len(r) == 1 and r[0] == 0 and len(quot) >= 1:
                    exps[d] = exps.get(d, 0) + 1
                    rem = quot
                    if len(rem) == 1:
                        break
                else:
                    break
        d += 1
    if len(rem) == 1 and rem[0] in (1, -1):
        # The leftover unit is (-1)^(power of the d=1 factor); the sign is
        # recoverable from the exponents, so only unit leftovers qualify.
        return exps
    return NOT_ROOTS_OF_UNITY


def exact_spectrum(op, cap: int = EXACT_CHARPOLY_CAP_SITES, max_order: int | None = None):
    """Spectrum of an exact operator via cyclotomic factorization of
    det(I - uQ); NotRootsOfUnity when the factorization is not complete."""
    coeffs = exact_char_poly(op, cap=cap)
    dim = len(coeffs) - 1
    if max_order is None:
        max_order = 2 * dim
    # det(I - uQ) = prod over eigenvalues (1 - lambda u): the multiset of
    # eigenvalues is the multiset of inverse roots.  For a cyclotomic
    # factor Phi_d the primitive d-th roots themselves appear.
    exps = factor_into_cyclotomics(coeffs, max_order)
    if exps is NOT_ROOTS_OF_UNITY:
        return NOT_ROOTS_OF_UNITY
    eigs: list[tuple[complex, int]] = []
    orders: list[tuple[int, int]] = []
    for d, e in sorted(exps.items()):
        orders.append((d, e))
        for k in range(1, d + 1):
            if math.gcd(k, d) == 1:
                root = cmath.exp(2j * math.pi * k / d)
                eigs.append((root, e))
    return Spectrum(
        eigs=tuple(eigs), dim=dim, origin="exact", unity_orders=tuple(orders)
    )


def roots_of_unity_profile(
    spec: Spectrum, max_order: int | None = None, tol: float = DEFAULT_CLUSTER_TOL
):
    """Match every eigenvalue to a primitive root of unity e^{2 pi i k/d}
    with d <= max_order; returns {d: {k: multiplicity}} or NotRootsOfUnity."""
    if max_order is None:
        max_order = 2 * spec.dim
    if spec.unity_orders is not None:
        profile: dict[int, dict[int, int]] = {}
        for d, e in spec.unity_orders:
            profile[d] = {k: e for k in range(1, d + 1) if math.gcd(k, d) == 1}
        return profile
    profile = {}
    for value, mult in spec.eigs:
        if abs(abs(value) - 1.0) > tol:
            return NOT_ROOTS_OF_UNITY
        angle = cmath.phase(value) / (2.0 * math.pi)
        matched = False
        for d in range(1, max_order + 1):
            k = round(angle * d) % d
            root = cmath.exp(2j * math.pi * k / d)
            if abs(value - root) < tol:
                if k == 0:
                    k = d  # canonical label k in {1..d}
                profile.setdefault(d, {})
                profile[d][k] = profile[d].get(k, 0) + mult
                matched = True
                break
        if not matched:
            return NOT_ROOTS_OF_UNITY
    return profile
