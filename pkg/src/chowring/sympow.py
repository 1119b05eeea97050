"""The top symmetric product C^{(2g-1)} as CH(J)[z] modulo the minimal equation of z.

Two coefficient conventions:

``theta``   coefficients in Q[theta]/(theta^{g+1}) with v_k = (-1)^k theta^k/k!
``formal``  coefficients in Q[v1..vg] truncated above codim g, v_k of codim k

In both, z has codim 1 and k-weight 2, and the single rule is
z^g -> -(v_1 z^{g-1} + ... + v_g).  Smaller symmetric products C^{(n)} are
handled through their image z_n^e -> z^{2g-1-n+e}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .errors import InputError
from .lefschetz import LefschetzReport, _injectivity_report, _timed
from .linalg import Matrix, determinant
from .model import Model
from .ring import (
    GeneratorSpec,
    RingElement,
    RingHom,
    RingPresentation,
    TruncationBlock,
    mult_operator_matrix,
)

__all__ = [
    "SymPowRing",
    "SystemReport",
    "sympow_ring",
    "minimal_equation",
    "i_pushforward",
    "i_pushforward_matrix",
    "strong_stability_check",
    "extract_system",
    "pbig_matrix",
    "pbig_det",
    "MODES",
]

MODES = ("theta", "formal")


@dataclass(eq=False)
class SymPowRing:
    g: int
    mode: str
    presentation: RingPresentation

    @property
    def id(self) -> str:
        return f"sympow:g={self.g},mode={self.mode}"

    @property
    def z(self) -> RingElement:
        return self.presentation.gen("z")

    def v(self, k: int) -> RingElement:
        """v_k as an element of the presentation (v_0 = 1, v_k = 0 for k > g)."""
        P = self.presentation
        if k == 0:
            return P.one()
        if k < 0 or k > self.g:
            return P.zero()
        if self.mode == "formal":
            return P.gen(f"v{k}")
        return P.element({(k, 0): Fraction((-1) ** k, factorial(k))})

    def coefficient_basis(self, c: int) -> list[RingElement]:
        """Basis of the codim-c part of the coefficient ring CH(J)."""
        P = self.presentation
        if c < 0 or c > self.g:
            return []
        return [P.monomial(m) for m in P.basis(c) if m[-1] == 0]

    def as_model(self) -> Model:
        return Model(self.id, "sympow", self.presentation, g=self.g)


def _theta_v(g: int, k: int) -> dict:
    return {(k, 0): Fraction((-1) ** k, factorial(k))}


def sympow_ring(g: int, mode: str = "theta") -> SymPowRing:
    if not isinstance(g, int) or g < 1:
        raise InputError(f"g must be an integer >= 1, got {g!r}")
    if mode not in MODES:
        raise InputError(f"mode must be one of {', '.join(MODES)}, got {mode!r}")
    label = f"sympow:g={g},mode={mode}"
    if mode == "theta":
        gens = [GeneratorSpec("theta", 1, kweight=2), GeneratorSpec("z", 1, kweight=2)]
        block = TruncationBlock(("theta",), g)
        rhs: dict = {}
        for k in range(1, g + 1):
            for m, c in _theta_v(g, k).items():
                rhs[(m[0], g - k)] = -c
        ample = "z"
    else:
        vnames = [f"v{k}" for k in range(1, g + 1)]
        gens = [GeneratorSpec(n, k) for k, n in enumerate(vnames, start=1)]
        gens.append(GeneratorSpec("z", 1, kweight=2))
        block = TruncationBlock(tuple(vnames), g)
        rhs = {}
        for k in range(1, g + 1):
            mono = tuple(int(j == k - 1) for j in range(g)) + (g - k,)
            rhs[mono] = Fraction(-1)
        ample = None
    lead = {(0,) * (len(gens) - 1) + (g,): 1}
    P = RingPresentation(gens, 2 * g - 1, relations=[(lead, rhs)], blocks=[block],
                         ample=ample, label=label)
    return SymPowRing(g, mode, P)


def minimal_equation(R: SymPowRing) -> RingElement:
    """sum_{k=0}^g v_k z^{g-k}, returned unreduced."""
    P = R.presentation
    terms: dict = {}
    for k in range(R.g + 1):
        for m, c in R.v(k).terms.items():
            key = m[:-1] + (m[-1] + R.g - k,)
            terms[key] = terms.get(key, 0) + c
    return P.raw(terms)


def _coefficient(R: SymPowRing, a) -> RingElement:
    P = R.presentation
    a = P.element(a) if not isinstance(a, RingElement) else a.normalized()
    if a.ring is not P:
        raise InputError("coefficient belongs to a different presentation")
    if any(m[-1] for m in a.terms):
        raise InputError(f"coefficient {a} must not involve z")
    return a


def i_pushforward(R: SymPowRing, n: int, x) -> RingElement:
    """Image of sum_j a_j z_n^{e_j} in CH(C^{(2g-1)}), with a_j pulled back from J."""
    g = R.g
    if not isinstance(n, int) or not 1 <= n <= 2 * g - 1:
        raise InputError(f"n must lie in 1..{2 * g - 1}, got {n!r}")
    P = R.presentation
    out = P.zero()
    for a, e in x:
        a = _coefficient(R, a)
        if not isinstance(e, int) or e < 0:
            raise InputError(f"z-exponent must be a non-negative integer, got {e!r}")
        if not a.is_zero() and max(a.codims()) + e > n:
            raise InputError(f"class {a}*z_{n}^{e} exceeds dim C^({n}) = {n}")
        out = out + a * R.z ** (2 * g - 1 - n + e)
    return out


def i_pushforward_matrix(R: SymPowRing, n: int, p: int):
    """Matrix of the pushforward on the tautological span a*z_n^e (codim a + e = p, e <= n)."""
    P = R.presentation
    dom = []
    for e in range(0, min(p, n, R.g - 1) + 1):
        for a in R.coefficient_basis(p - e):
            dom.append((a, e))
    q = p + 2 * R.g - 1 - n
    cols = [P.coordinates(i_pushforward(R, n, [(a, e)]), q) for a, e in dom]
    cod_dim = len(P.basis(q)) if 0 <= q <= P.truncation_dim else 0
    return [f"({a})*z_{n}^{e}" for a, e in dom], Matrix.from_columns(cols, cod_dim)


@_timed
def strong_stability_check(g: int, n: int, p: int) -> LefschetzReport:
    """Injectivity of alpha -> alpha * z^{2g-n} on CH^p(C^{(2g-1)}) in theta mode."""
    if not isinstance(g, int) or g < 1:
        raise InputError(f"g must be an integer >= 1, got {g!r}")
    if not isinstance(n, int) or not isinstance(p, int) or p < 0:
        raise InputError("n and p must be integers, p >= 0")
    if n < 2 * p + 1:
        raise InputError(f"hypothesis violated: need n >= 2p + 1, have n={n}, p={p}")
    if n > 2 * g - 1:
        raise InputError(f"hypothesis violated: need n <= 2g - 1 = {2 * g - 1}, have n={n}")
    R = sympow_ring(g, "theta")
    P = R.presentation
    e = 2 * g - n
    lm = mult_operator_matrix(P, R.z ** e, p, codim=e)
    rep = _injectivity_report("stability", R.id, lm, p, e, "z",
                              to_str=lambda v: str(P.from_vector(v, p)))
    rep.details["n"] = n
    return rep


# --------------------------------------------------------------------------
# the linear systems obtained from y * z^{2g-2p-1} = 0


@dataclass
class SystemReport:
    g: int
    p: int
    k: int
    equations_a: list[RingElement]
    expressions_y: dict[str, RingElement]
    trail: list[str]
    coefficients: dict[int, RingElement] = field(default_factory=dict)
    shape_matches: bool = False
    mismatches: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "g": self.g,
            "p": self.p,
            "k": self.k,
            "equations": [str(e) for e in self.equations_a],
            "expressions": {y: str(e) for y, e in self.expressions_y.items()},
            "trail": list(self.trail),
            "coefficients": {str(e): str(c) for e, c in sorted(self.coefficients.items())},
            "shape_matches": self.shape_matches,
            "mismatches": list(self.mismatches),
        }


def _system_ring(g: int, p: int, k: int) -> RingPresentation:
    vs = [GeneratorSpec(f"v{i}", i) for i in range(1, g + 1)]
    as_ = [GeneratorSpec(f"a{i}", i) for i in range(1, k + 1)]
    ys = [GeneratorSpec(f"y{i}", i) for i in range(1, p + 1)]
    gens = vs + as_ + ys + [GeneratorSpec("z", 1)]
    coeff_names = tuple(x.name for x in vs + as_ + ys)
    rhs = " - ".join([f"v{i}*z^{g - i}" if g - i else f"v{i}" for i in range(1, g + 1)])
    return RingPresentation(gens, 2 * g - 1, relations=[(f"z^{g}", "-" + rhs)],
                            blocks=[TruncationBlock(coeff_names, g)],
                            label=f"system:g={g},p={p}")


def _linear_combo(P: RingPresentation, i: int, k: int) -> RingElement:
    """a_1 v_{i-1} + ... + a_k v_{i-k} with v_0 = 1 and v_m = 0 outside 0..g."""
    g = sum(1 for n in P.names if n.startswith("v"))
    out = P.zero()
    for j in range(1, k + 1):
        m = i - j
        if m == 0:
            out = out + P.gen(f"a{j}")
        elif 1 <= m <= g:
            out = out + P.gen(f"a{j}") * P.gen(f"v{m}")
    return out


def extract_system(g: int, p: int) -> SystemReport:
    """Reduce sum_{i=1}^p y_i z^{g+k-i} (k = g-p-1) and read off the a-system.

    After substituting y_i = a_1 v_{i-1} + ... + a_i (i <= k) the coefficients
    of z^0..z^{g-1} split into pure a-equations and y-assignments.
    """
    if not isinstance(g, int) or not isinstance(p, int) or g < 1 or p < 0:
        raise InputError("g >= 1 and p >= 0 must be integers")
    if 2 * g - 1 < 2 * p + 1:
        raise InputError(f"hypothesis violated: need 2g - 1 >= 2p + 1, have g={g}, p={p}")
    k = g - p - 1
    if k > p:
        raise InputError(f"k = g - p - 1 = {k} exceeds p = {p}; only the case k <= p is handled")
    P = _system_ring(g, p, k)
    z = P.gen("z")
    Y = P.zero()
    for i in range(1, p + 1):
        Y = Y + P.gen(f"y{i}") * z ** (g + k - i)

    images = {n: n for n in P.names}
    trail = []
    for i in range(1, k + 1):
        images[f"y{i}"] = _linear_combo(P, i, i)
        prev = " - ".join(f"a{j}*v{i - j}" for j in range(1, i))
        trail.append(f"a{i} = y{i}" + (f" - {prev}" if prev else ""))
    sub = RingHom(P, P, images)
    Ys = sub(Y)

    coeffs: dict[int, RingElement] = {}
    for e in range(g):
        terms = {m[:-1] + (0,): c for m, c in Ys.terms.items() if m[-1] == e}
        coeffs[e] = P.element(terms)

    equations, expressions = [], {}
    for e in sorted(coeffs, reverse=True):
        c = coeffs[e]
        i = g + k - e
        y = f"y{i}"
        if 1 <= i <= p and i > k:
            yc = c.coefficient(y)
            expressions[y] = (P.gen(y) * yc - c) * (1 / yc) if yc else -c
        elif not c.is_zero():
            equations.append(-c)
    report = SystemReport(g, p, k, equations, expressions, trail, coeffs)
    _compare_shapes(report, P)
    return report


def _compare_shapes(report: SystemReport, P: RingPresentation) -> None:
    g, p, k = report.g, report.p, report.k
    expected_eq = [_linear_combo(P, i, k) for i in range(p + 1, g + 1)]
    expected_eq = [e for e in expected_eq if not e.is_zero()]
    got = list(report.equations_a)
    mism = []
    if len(got) != len(expected_eq):
        mism.append(f"{len(got)} equations, expected {len(expected_eq)}")
    for exp, eq in zip(expected_eq, got):
        if eq != exp:
            mism.append(f"equation {eq} differs from {exp}")
    for i in range(k + 1, p + 1):
        y = f"y{i}"
        exp = _linear_combo(P, i, k)
        if y not in report.expressions_y:
            mism.append(f"{y} missing")
        elif report.expressions_y[y] != exp:
            mism.append(f"{y} = {report.expressions_y[y]} differs from {exp}")
    if set(report.expressions_y) != {f"y{i}" for i in range(k + 1, p + 1)}:
        mism.append("unexpected y-assignments")
    report.mismatches = mism
    report.shape_matches = not mism


# --------------------------------------------------------------------------
# the coefficient matrix of the theta-specialized system


def _check_pbig(g: int, p: int) -> int:
    if not isinstance(g, int) or not isinstance(p, int) or g < 1 or p < 0:
        raise InputError("g >= 1 and p >= 0 must be integers")
    if 2 * p + 1 < g:
        raise InputError(f"hypothesis violated: need 2p + 1 >= g, have g={g}, p={p}")
    k = g - p - 1
    if k < 1:
        raise InputError(f"hypothesis violated: need k = g - p - 1 >= 1, have k={k}")
    return k


def pbig_matrix(g: int, p: int, rows: str = "tail") -> Matrix:
    """k x k matrix with entry (j, i) = (-1)^{i-1} / (m_j + 1 - i)!.

    The rows come from the equations b_1 w_m - b_2 w_{m-1} + ... = 0 for
    m = p..g-1 with w_m = theta^m/m!.  ``tail`` keeps m = p+1..g-1,
    ``head`` keeps m = p..g-2.
    """
    k = _check_pbig(g, p)
    if rows == "tail":
        first = p + 1
    elif rows == "head":
        first = p
    else:
        raise InputError(f"rows must be 'tail' or 'head', got {rows!r}")
    out = []
    for j in range(1, k + 1):
        m = first + j - 1
        out.append([Fraction((-1) ** (i - 1), factorial(m + 1 - i)) for i in range(1, k + 1)])
    return Matrix.from_rows(out)


def pbig_det(g: int, p: int, rows: str = "tail") -> Fraction:
    d = determinant(pbig_matrix(g, p, rows))
    if d == 0:
        raise ArithmeticError(f"pbig determinant vanishes for (g, p) = ({g}, {p})")
    return d
