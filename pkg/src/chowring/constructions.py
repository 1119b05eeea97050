"""Projective bundles, products with projective space, and blow-ups along smooth centers.

Blow-up conventions (Z = Bl_Y X, E exceptional, g: E -> Y, j: E -> Z, r + 1 = codim Y):

* CH(E) = CH(Y)[h] / (h^{r+1} + c_1(N) h^r + ... + c_{r+1}(N)), h = c_1(O(1)),
  so that j^*E = -h and g_*(h^i g^*y) = delta_{i,r} y for i <= r.
* A class on Z is stored as f^*x + sum_{i=0}^{r-1} j_*(h^i g^*y_i).
* Terms j_*(h^r g^*y) are rewritten with the key formula
  f^* iota_* y = j_*(c_r(Q) g^*y), c_r(Q) = sum_{i=0}^r c_i(N) h^{r-i}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Mapping, Sequence

from .errors import InputError
from .linalg import Matrix
from .model import Model, as_model
from .ring import (
    GeneratorSpec,
    LinearMapMatrix,
    RingElement,
    RingHom,
    RingPresentation,
    TruncationBlock,
)

__all__ = [
    "projective_space",
    "point",
    "projective_bundle",
    "product_with_projective_space",
    "bundle_model",
    "product_model",
    "curve_model",
    "BlowupData",
    "BlowupElement",
    "BlowupRing",
    "blowup_ring",
    "linear_blowup",
    "blowup_transfer_check",
]


def projective_space(n: int, name: str = "H") -> RingPresentation:
    if not isinstance(n, int) or n < 0:
        raise InputError("projective space dimension must be >= 0")
    if n == 0:
        return point()
    return RingPresentation([GeneratorSpec(name, 1)], n, ample=name, label=f"projective:n={n}")


def point() -> RingPresentation:
    return RingPresentation([], 0, label="point")


def _fresh_name(P: RingPresentation, name: str) -> str:
    if name not in P.index:
        return name
    i = 1
    while f"{name}{i}" in P.index:
        i += 1
    return f"{name}{i}"


def projective_bundle(base: RingPresentation, chern: Sequence, r: int, name: str = "xi",
                      generator_codim: int = 1, label: str | None = None) -> RingPresentation:
    """CH of P(F) for a rank r+1 bundle F with Chern classes ``chern`` = [1, c_1, ..., c_{r+1}].

    Adjoins ``name`` with the Grothendieck relation
    name^{r+1} = -(c_1 name^r + ... + c_{r+1}); base classes above the base
    dimension keep vanishing through a truncation block.
    ``generator_codim`` = 2 builds the cohomology-degree version.
    """
    if not isinstance(r, int) or r < 0:
        raise InputError("fiber dimension must be >= 0")
    cs = [base.element(c) if not isinstance(c, RingElement) else c.normalized() for c in chern]
    if not cs:
        cs = [base.one()]
    if cs[0] != 1:
        raise InputError("c_0 must be 1")
    for i, c in enumerate(cs):
        if c.ring is not base:
            raise InputError("Chern classes must live in the base")
        if c.is_zero():
            continue
        if c.codims() != {i * generator_codim}:
            raise InputError(f"inhomogeneous chern input: c_{i} = {c} is not of codim {i}")
        if i > r + 1:
            raise InputError(f"c_{i} must vanish for a bundle of rank {r + 1}")
    cs = cs[: r + 2] + [base.zero()] * (r + 2 - len(cs))
    name = _fresh_name(base, name)
    gens = list(base.generators) + [GeneratorSpec(name, generator_codim, kweight=2 * generator_codim)]
    blocks = list(base.blocks)
    if base.ngens:
        blocks.append(TruncationBlock(base.names, base.truncation_dim))
    P = RingPresentation(gens, base.truncation_dim + generator_codim * r, blocks=blocks,
                         label=label or f"bundle({base.label},r={r})")
    for i, (d, rhs) in sorted(base.rules.items()):
        lead = tuple(d if j == i else 0 for j in range(P.ngens))
        P._add_rule({lead: 1}, {m + (0,): c for m, c in rhs.items()})
    rhs = {}
    for i in range(1, r + 2):
        for m, c in cs[i].terms.items():
            key = m + (r + 1 - i,)
            rhs[key] = rhs.get(key, 0) - c
    P._add_rule({(0,) * base.ngens + (r + 1,): 1}, {m: c for m, c in rhs.items() if c})
    return P


def product_with_projective_space(P: RingPresentation, m: int, name: str = "t") -> RingPresentation:
    """X x P^m: adjoin t with t^{m+1} = 0."""
    if not isinstance(m, int) or m < 1:
        raise InputError("m must be >= 1")
    return projective_bundle(P, [P.one()], m, name=name, label=f"{P.label}*P{m}")


def _lift_hom(model: Model, P: RingPresentation, target: RingPresentation, new_name: str, target_name: str) -> RingHom:
    cl = model.cycle_class
    images = {n: _embed(cl.images[n], target) for n in model.presentation.names}
    images[new_name] = target.gen(target_name)
    return RingHom(P, target, images, scale=cl.scale)


def _embed(x: RingElement, target: RingPresentation) -> RingElement:
    """Include an element of a presentation whose generators are a prefix of ``target``'s."""
    pad = target.ngens - x.ring.ngens
    return target.element({m + (0,) * pad: c for m, c in x.normalized().terms.items()})


def bundle_model(model, chern: Sequence, r: int, name: str = "xi") -> Model:
    """Projective bundle over a model, carrying the cycle class map along when present."""
    model = as_model(model)
    base = model.presentation
    P = projective_bundle(base, chern, r, name=name)
    new_name = P.names[-1]
    cl = None
    if model.cycle_class is not None:
        src = model.cycle_class
        tchern = [src(base.element(c) if not isinstance(c, RingElement) else c) for c in chern]
        T = projective_bundle(src.target, tchern, r, name=new_name, generator_codim=src.scale)
        cl = _lift_hom(model, P, T, new_name, T.names[-1])
    chern_txt = ",".join(str(base.element(c) if not isinstance(c, RingElement) else c) for c in chern)
    mid = f"bundle({model.id};c=[{chern_txt}];r={r})"
    P.label = mid
    return Model(mid, "bundle", P, g=model.g, cycle_class=cl)


def product_model(model, m: int) -> Model:
    model = as_model(model)
    P = product_with_projective_space(model.presentation, m)
    new_name = P.names[-1]
    cl = None
    if model.cycle_class is not None:
        src = model.cycle_class
        T = projective_bundle(src.target, [src.target.one()], m, name=new_name, generator_codim=src.scale)
        cl = _lift_hom(model, P, T, new_name, T.names[-1])
    mid = f"{model.id}*P{m}"
    P.label = mid
    return Model(mid, "product", P, g=model.g, cycle_class=cl)


def curve_model(hom_dim: int = 0) -> Model:
    """A curve: point class ``pt`` plus ``hom_dim`` homologically trivial degree-0 classes.

    All products of codim-1 classes vanish; the cycle class sends pt to the
    fundamental class of a point and kills the v_i.
    """
    if not isinstance(hom_dim, int) or hom_dim < 0:
        raise InputError("hom_dim must be >= 0")
    gens = [GeneratorSpec("pt", 1)] + [GeneratorSpec(f"v{i}", 1) for i in range(1, hom_dim + 1)]
    mid = f"curve:hom={hom_dim}"
    P = RingPresentation(gens, 1, ample="pt", label=mid)
    H = RingPresentation([GeneratorSpec("pt", 1)], 1, label="curve-cohomology")
    cl = RingHom(P, H, {"pt": "pt"}, scale=1)
    return Model(mid, "curve", P, cycle_class=cl)


def projective_model(n: int) -> Model:
    P = projective_space(n)
    cl = RingHom(P, P, {name: name for name in P.names}, scale=1)
    return Model(P.label, "projective", P, cycle_class=cl)


# --------------------------------------------------------------------------
# blow-ups


@dataclass
class BlowupData:
    X: RingPresentation
    Y: RingPresentation
    r: int
    pullback_iota: Mapping[str, object]
    pushforward_iota: Mapping
    normal_chern: Sequence

    @property
    def n(self) -> int:
        return self.X.truncation_dim

    @property
    def d(self) -> int:
        return self.Y.truncation_dim


@dataclass(frozen=True, eq=False)
class BlowupElement:
    """f^*(base) + sum_i j_*(h^i g^*(exc[i])), i = 0..r-1."""

    ring: "BlowupRing"
    base: RingElement
    exc: tuple

    def __add__(self, other):
        return self.ring.add(self, self.ring.coerce(other))

    __radd__ = __add__

    def __neg__(self):
        return self.ring.scale(self, -1)

    def __sub__(self, other):
        return self + (-self.ring.coerce(other))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.ring.scale(self, other)
        return self.ring.multiply(self, self.ring.coerce(other))

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.ring.scale(self, other)
        return NotImplemented

    def __pow__(self, e: int):
        return self.ring.power(self, e)

    def __eq__(self, other):
        other = self.ring.coerce(other)
        return self.base == other.base and all(a == b for a, b in zip(self.exc, other.exc))

    __hash__ = None

    def is_zero(self) -> bool:
        return self.base.is_zero() and all(y.is_zero() for y in self.exc)

    def __str__(self):
        return self.ring.format(self)

    __repr__ = __str__


class BlowupRing:
    """Chow ring of the blow-up of X along Y, as an explicit CH(X)- and CH(Y)-decomposition."""

    def __init__(self, data: BlowupData, label: str | None = None):
        X, Y, r = data.X, data.Y, data.r
        if not isinstance(r, int) or r < 1:
            raise InputError("the center must have codimension r + 1 >= 2")
        if data.n - data.d != r + 1:
            raise InputError(f"dim X - dim Y = {data.n - data.d} does not equal r + 1 = {r + 1}")
        self.data = data
        self.X, self.Y, self.r = X, Y, r
        self.n, self.d = data.n, data.d
        self.label = label or f"Bl({X.label},{Y.label})"
        self.iota_pull = RingHom(X, Y, dict(data.pullback_iota))
        self._push = {}
        for key, val in dict(data.pushforward_iota).items():
            mono = Y.parse(key).terms if isinstance(key, str) else {tuple(key): Fraction(1)}
            if len(mono) != 1 or next(iter(mono.values())) != 1:
                raise InputError(f"pushforward key {key!r} is not a monomial")
            (m, _), = mono.items()
            if not Y.is_normal(m):
                raise InputError(f"pushforward key {key!r} is not a normal-form monomial of Y")
            self._push[m] = X.element(val)
        for p in range(self.d + 1):
            for m in Y.basis(p):
                if m not in self._push:
                    raise InputError("pushforward_iota must cover every basis monomial of Y")
                img = self._push[m]
                if not img.is_zero() and img.codims() != {p + r + 1}:
                    raise InputError("pushforward_iota must raise codim by r + 1")
        chern = [Y.one()] + [Y.element(c) if not isinstance(c, RingElement) else c for c in data.normal_chern]
        self.chern = chern[: r + 2] + [Y.zero()] * (r + 2 - len(chern))
        if any(c.ring is not Y for c in self.chern):
            raise InputError("normal Chern classes must live in Y")
        self.Ering = projective_bundle(Y, self.chern, r, name="h", label=f"E({Y.label})")
        self.h = self.Ering.gen(self.Ering.names[-1])
        self._pull_to_E = RingHom(X, self.Ering, {n: _embed(self.iota_pull.images[n], self.Ering) for n in X.names})
        self._cq = self.Ering.zero()
        for i in range(r + 1):
            self._cq = self._cq + _embed(self.chern[i], self.Ering) * self.h ** (r - i)
        self._check_projection_formula()

    # -- data checks ----------------------------------------------------------

    def iota_push(self, y: RingElement) -> RingElement:
        out = self.X.zero()
        for m, c in y.normalized().terms.items():
            out = out + self._push[m] * c
        return out

    def _check_projection_formula(self):
        X, Y = self.X, self.Y
        for p in range(self.n + 1):
            for xm in X.basis(p):
                x = X.monomial(xm)
                for q in range(self.d + 1):
                    for ym in Y.basis(q):
                        y = Y.monomial(ym)
                        if self.iota_push(self.iota_pull(x) * y) != x * self.iota_push(y):
                            raise InputError(
                                f"malformed blow-up data: projection formula fails for x={x}, y={y}"
                            )

    # -- elements ---------------------------------------------------------------

    def _beta(self, exc: Sequence[RingElement]) -> RingElement:
        out = self.Ering.zero()
        for i, y in enumerate(exc):
            out = out + _embed(y, self.Ering) * self.h ** i
        return out

    def _split(self, beta: RingElement) -> list[RingElement]:
        """Y-coefficients of h^0..h^r of a reduced CH(E) element."""
        parts: list[dict] = [dict() for _ in range(self.r + 1)]
        for m, c in beta.normalized().terms.items():
            parts[m[-1]][m[:-1]] = c
        return [self.Y.element(t) for t in parts]

    def _normalize(self, base: RingElement, beta: RingElement) -> BlowupElement:
        parts = self._split(beta)
        top = parts[self.r]
        if not top.is_zero():
            base = base + self.iota_push(top)
            beta = beta - self._cq * _embed(top, self.Ering)
            parts = self._split(beta)
            assert parts[self.r].is_zero()
        return BlowupElement(self, base.normalized(), tuple(parts[: self.r]))

    def compose(self, base, exc: Sequence = ()) -> BlowupElement:
        """f^*(base) + sum_i j_*(h^i g^*exc[i]); any number of h-powers is accepted."""
        base = self.X.element(base) if not isinstance(base, RingElement) else base
        exc = [self.Y.element(y) if not isinstance(y, RingElement) else y for y in exc]
        return self._normalize(base, self._beta(exc))

    def decompose(self, e: BlowupElement) -> tuple[RingElement, list[RingElement]]:
        return e.base, list(e.exc)

    def pullback(self, x) -> BlowupElement:
        return self.compose(x)

    def jpush(self, beta: RingElement) -> BlowupElement:
        """j_* of a class on E given in the E-ring."""
        if beta.ring is not self.Ering:
            raise InputError("class is not on the exceptional divisor")
        return self._normalize(self.X.zero(), beta)

    @property
    def E(self) -> BlowupElement:
        return self.compose(self.X.zero(), [self.Y.one()])

    def zero(self) -> BlowupElement:
        return self.compose(self.X.zero())

    def one(self) -> BlowupElement:
        return self.compose(self.X.one())

    def coerce(self, other) -> BlowupElement:
        if isinstance(other, BlowupElement):
            if other.ring is not self:
                raise InputError("elements belong to different blow-ups")
            return other
        if isinstance(other, (int, Fraction)):
            return self.compose(self.X.scalar(other))
        if isinstance(other, RingElement) and other.ring is self.X:
            return self.pullback(other)
        raise InputError(f"cannot interpret {other!r} on the blow-up")

    # -- arithmetic ---------------------------------------------------------------

    def add(self, a: BlowupElement, b: BlowupElement) -> BlowupElement:
        return BlowupElement(self, a.base + b.base, tuple(x + y for x, y in zip(a.exc, b.exc)))

    def scale(self, a: BlowupElement, c) -> BlowupElement:
        return BlowupElement(self, a.base * c, tuple(y * c for y in a.exc))

    def multiply(self, a: BlowupElement, b: BlowupElement) -> BlowupElement:
        """f^*x f^*x' = f^*(xx'); f^*x . j_*B = j_*(g^*i^*x . B); j_*B . j_*B' = -j_*(h B B')."""
        ba, bb = self._beta(a.exc), self._beta(b.exc)
        beta = self._pull_to_E(a.base) * bb + self._pull_to_E(b.base) * ba - self.h * ba * bb
        return self._normalize(a.base * b.base, beta)

    def power(self, a: BlowupElement, e: int) -> BlowupElement:
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a non-negative integer")
        out = self.one()
        for _ in range(e):
            out = self.multiply(out, a)
        return out

    def g_push(self, beta: RingElement) -> RingElement:
        """g_*: coefficient of h^r after Grothendieck reduction."""
        return self._split(beta)[self.r]

    def pushforward(self, e: BlowupElement) -> RingElement:
        """f_*: f_*f^*x = x and f_*j_*B = iota_*(g_*B)."""
        return e.base + self.iota_push(self.g_push(self._beta(e.exc)))

    # -- graded pieces ------------------------------------------------------------

    def basis(self, p: int) -> list[tuple]:
        if not 0 <= p <= self.n:
            raise InputError(f"codim {p} out of range 0..{self.n}")
        out = [("f", m) for m in self.X.basis(p)]
        for i in range(self.r):
            q = p - 1 - i
            if 0 <= q <= self.d:
                out.extend(("j", i, m) for m in self.Y.basis(q))
        return out

    def basis_element(self, label) -> BlowupElement:
        if label[0] == "f":
            return self.compose(self.X.monomial(label[1]))
        _, i, m = label
        exc = [self.Y.zero()] * self.r
        exc[i] = self.Y.monomial(m)
        return BlowupElement(self, self.X.zero(), tuple(exc))

    def coordinates(self, e: BlowupElement, p: int) -> tuple:
        vec = []
        for label in self.basis(p):
            if label[0] == "f":
                vec.append(e.base.coefficient(label[1]))
            else:
                vec.append(e.exc[label[1]].coefficient(label[2]))
        total = len(e.base.terms) + sum(len(y.terms) for y in e.exc)
        if sum(1 for v in vec if v) != total:
            raise ValueError(f"element has a component outside codim {p}")
        return tuple(vec)

    def from_vector(self, vec: Sequence, p: int) -> BlowupElement:
        out = self.zero()
        for c, label in zip(vec, self.basis(p)):
            if c:
                out = out + self.basis_element(label) * c
        return out

    def operator_matrix(self, c: BlowupElement, p: int, codim: int) -> LinearMapMatrix:
        dom = self.basis(p)
        cod = self.basis(p + codim)
        cols = [self.coordinates(c * self.basis_element(lab), p + codim) for lab in dom]
        return LinearMapMatrix(dom, cod, Matrix.from_columns(cols, len(cod)))

    def format(self, e: BlowupElement) -> str:
        parts = []
        if not e.base.is_zero():
            parts.append(str(e.base))
        beta = self._beta(e.exc)
        if not beta.is_zero():
            neg = str(-beta)
            if len(beta.terms) == 1 and str(beta).startswith("-"):
                parts.append(f"-j_*({neg})")
            else:
                parts.append(f"j_*({beta})")
        out = " + ".join(parts) if parts else "0"
        return out.replace("+ -", "- ")

    def label_str(self, label) -> str:
        if label[0] == "f":
            return str(self.X.monomial(label[1]))
        return str(self.basis_element(label))


def blowup_ring(data: BlowupData, label: str | None = None) -> BlowupRing:
    return BlowupRing(data, label)


def linear_blowup(n: int, d: int) -> BlowupRing:
    """Blow-up of P^n along a linear P^d (d = 0: a point)."""
    if not (0 <= d <= n - 2):
        raise InputError("need 0 <= d <= n - 2 for a center of codim >= 2")
    r = n - d - 1
    X = projective_space(n)
    if d == 0:
        Y = point()
        pull = {"H": "0"}
        push = {(): f"H^{n}"}
        chern: list = []
    else:
        Y = projective_space(d, name="l")
        pull = {"H": "l"}
        push = {(a,): f"H^{a + r + 1}" for a in range(d + 1)}
        chern = [f"{comb(r + 1, i)}*l^{i}" for i in range(1, min(r + 1, d) + 1)]
    data = BlowupData(X, Y, r, pull, push, chern)
    return BlowupRing(data, label=f"Bl(P{n},P{d})")


def blowup_transfer_check(ring, L, m, p: int):
    """conj1 check on Z for D' = f^*L + mE (m < 0), with the hypothesis side on X.

    D' is rescaled by the denominator of m before assembly; positive scaling
    does not change the kernel.
    """
    from .lefschetz import _injectivity_report, check_conj1

    if isinstance(ring, BlowupData):
        ring = BlowupRing(ring)
    m = Fraction(m)
    if m >= 0:
        raise InputError("m must be negative")
    e = ring.n - 2 * p
    if p < 0 or e < 0:
        raise InputError(f"no Lefschetz exponent: n - 2p = {e} < 0")
    Lx = ring.X.element(L) if not isinstance(L, RingElement) else L
    if Lx.is_zero() or Lx.homogeneous_codim() != 1:
        raise InputError("L must be a codim-1 class on X")
    scale = m.denominator
    D = ring.pullback(Lx * scale) + ring.E * m.numerator
    op = D ** e
    lm = ring.operator_matrix(op, p, e)
    divisor = f"{scale}*({Lx}) + ({m.numerator})*E"
    report = _injectivity_report(
        "blowup", ring.label, lm, p, e, divisor,
        to_str=lambda v: str(ring.from_vector(v, p)),
    )
    hyp = check_conj1(Model(ring.X.label, "custom", ring.X), Lx, p)
    report.details.update({
        "m": str(m),
        "scale": scale,
        "d": ring.d,
        "r": ring.r,
        "p_ge_d": p >= ring.d,
        "hypothesis_conj1_on_X": hyp.verdict,
        "matrix": [[str(x) for x in row] for row in lm.matrix.tolist()],
    })
    return report
