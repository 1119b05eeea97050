"""Finite models of the Chow ring and cohomology of a g-dimensional abelian variety.

Three built-in models:

``theta``       Q[theta]/(theta^{g+1}); theta is a symmetric ample class (s = 0).
``divisor``     Q[D0, D1] truncated in codim > g, with D0 of k-weight 2 (s = 0)
                and D1 of k-weight 1 (s = 1). The homologically trivial part is
                spanned by monomials containing D1.
``cohomology``  the exterior algebra on e1..e_{2g} (odd, degree 1), with
                symplectic class omega = e1*e2 + e3*e4 + ... .

Multiplication by k acts on a monomial of k-weight w by k^w; a class of codim
p and weight w has Beauville index s = 2p - w.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial

from .errors import InputError
from .model import Model
from .ring import GeneratorSpec, RingElement, RingHom, RingPresentation

__all__ = [
    "theta_model",
    "divisor_model",
    "cohomology_model",
    "build_model",
    "symplectic_class",
    "kstar_apply",
    "beauville_project",
    "beauville_decomposition",
    "fourier",
    "pontryagin",
    "pontryagin_power",
    "w_and_v_classes",
    "cycle_class",
]


def _check_g(g):
    if not isinstance(g, int) or g < 1:
        raise InputError(f"g must be an integer >= 1, got {g!r}")


@lru_cache(maxsize=None)
def cohomology_model(g: int) -> Model:
    _check_g(g)
    gens = [GeneratorSpec(f"e{i}", 1, kweight=1, parity="odd") for i in range(1, 2 * g + 1)]
    P = RingPresentation(gens, 2 * g, label=f"cohomology:g={g}")
    omega = symplectic_class(P, g)
    return Model(P.label, "cohomology", P, g=g, lefschetz_class=omega)


def symplectic_class(P: RingPresentation, g: int) -> RingElement:
    return P.element(" + ".join(f"e{2 * i - 1}*e{2 * i}" for i in range(1, g + 1)))


@lru_cache(maxsize=None)
def theta_model(g: int) -> Model:
    _check_g(g)
    P = RingPresentation([GeneratorSpec("theta", 1, kweight=2)], g, ample="theta", label=f"theta:g={g}")
    coh = cohomology_model(g)
    cl = RingHom(P, coh.presentation, {"theta": coh.lefschetz_class}, scale=2)
    return Model(P.label, "theta", P, g=g, cycle_class=cl)


@lru_cache(maxsize=None)
def divisor_model(g: int) -> Model:
    _check_g(g)
    P = RingPresentation(
        [GeneratorSpec("D0", 1, kweight=2), GeneratorSpec("D1", 1, kweight=1)],
        g,
        ample="D0",
        label=f"divisor:g={g}",
    )
    coh = cohomology_model(g)
    cl = RingHom(P, coh.presentation, {"D0": coh.lefschetz_class, "D1": "0"}, scale=2)
    return Model(P.label, "divisor", P, g=g, cycle_class=cl)


_BUILDERS = {"theta": theta_model, "divisor": divisor_model, "cohomology": cohomology_model}


def build_model(kind: str, g: int) -> Model:
    try:
        builder = _BUILDERS[kind]
    except KeyError:
        raise InputError(f"unknown abelian model kind {kind!r}") from None
    return builder(g)


# --------------------------------------------------------------------------
# k-action and Beauville components


def kstar_apply(x: RingElement, k: int) -> RingElement:
    """Pull back along multiplication by ``k``: a monomial of weight w scales by k^w."""
    ring = x.ring
    x = x.normalized()
    out = {m: c * Fraction(k) ** ring.kweight(m) for m, c in x.terms.items()}
    return RingElement(ring, {m: c for m, c in out.items() if c}, reduced=True)


def beauville_project(x: RingElement, s: int, g: int | None = None) -> RingElement:
    """Component of ``x`` on which k* acts by k^{2p-s}.

    The projector is Lagrange interpolation in the operator 2* over the
    candidate eigenvalues 2^{2p-t}, t in p-g..p (or, without ``g``, the
    weights present in the graded piece). The result is then confirmed to be
    a 3*-eigenvector as well.
    """
    x = x.normalized()
    if x.is_zero():
        return x
    p = x.homogeneous_codim()
    ring = x.ring
    if g is not None:
        weights = sorted({2 * p - t for t in range(p - g, p + 1)})
    else:
        weights = sorted({ring.kweight(m) for m in ring.basis(p)})
    w = 2 * p - s
    if w not in weights:
        total = ring.zero()
        for t in weights:
            total = total + beauville_project(x, 2 * p - t, g)
        if total != x:
            raise ValueError("element is not a sum of k*-eigenvectors in the Beauville range")
        return ring.zero()
    lam_s = Fraction(2) ** w
    out = x
    for t in weights:
        if t == w:
            continue
        lam_t = Fraction(2) ** t
        out = (kstar_apply(out, 2) - out * lam_t) * (1 / (lam_s - lam_t))
    for k in (2, 3):
        if kstar_apply(out, k) != out * Fraction(k) ** w:
            raise ValueError(f"projection to s={s} is not a {k}*-eigenvector")
    return out


def beauville_decomposition(x: RingElement, g: int | None = None) -> dict[int, RingElement]:
    x = x.normalized()
    if x.is_zero():
        return {}
    p = x.homogeneous_codim()
    s_values = range(p - g, p + 1) if g is not None else sorted({2 * p - x.ring.kweight(m) for m in x.ring.basis(p)})
    out = {}
    for s in s_values:
        c = beauville_project(x, s, g)
        if not c.is_zero():
            out[s] = c
    return out


# --------------------------------------------------------------------------
# Fourier transform and Pontryagin product on the theta model


def _theta_genus(ring: RingPresentation) -> int:
    if ring.names != ("theta",) or not ring.label.startswith("theta:"):
        raise InputError("Fourier/Pontryagin calculus is only defined on the theta model")
    return ring.truncation_dim


def fourier(x: RingElement) -> RingElement:
    """Linear map with theta^b/b! -> (-1)^{g-b} theta^{g-b}/(g-b)!; F∘F = (-1)^g."""
    ring = x.ring
    g = _theta_genus(ring)
    out = {}
    for (b,), c in x.normalized().terms.items():
        coeff = c * factorial(b) * (-1) ** (g - b) / Fraction(factorial(g - b))
        out[(g - b,)] = coeff
    return ring.element(out)


def pontryagin(x: RingElement, y: RingElement) -> RingElement:
    """Convolution product x*y = (-1)^g F(F(x) . F(y)); the point class is the unit."""
    if x.ring is not y.ring:
        raise InputError("elements belong to different presentations")
    g = _theta_genus(x.ring)
    return fourier(fourier(x) * fourier(y)) * (-1) ** g


def pontryagin_power(x: RingElement, r: int) -> RingElement:
    if r < 1:
        raise InputError("Pontryagin power needs r >= 1")
    out = x
    for _ in range(r - 1):
        out = pontryagin(out, x)
    return out


def w_and_v_classes(g: int, k: int) -> tuple[RingElement, RingElement]:
    """s = 0 parts of the Brill-Noether classes: w_k = theta^k/k!, v_k = (-1)^k w_k."""
    _check_g(g)
    if not 0 <= k <= g:
        raise InputError(f"k must lie in 0..{g}")
    P = theta_model(g).presentation
    w = P.element({(k,): Fraction(1, factorial(k))})
    return w, w * (-1) ** k


def cycle_class(x: RingElement, m: Model) -> RingElement:
    if m.cycle_class is None:
        raise InputError(f"model {m.id} has no cycle class map")
    return m.cycle_class(x)
