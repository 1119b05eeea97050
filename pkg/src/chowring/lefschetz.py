"""Injectivity and isomorphism checks of Hard Lefschetz type on finite models.

Every verdict is about the named finite model only; a report always carries
the model id.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable

from .errors import InputError
from .linalg import Matrix, rank_and_kernel
from .model import Model, as_model
from .ring import LinearMapMatrix, RingElement, mult_operator_matrix

__all__ = [
    "LefschetzReport",
    "IsoReport",
    "DescentReport",
    "check_conj1",
    "check_conj2",
    "check_hl_cohomology",
    "check_hl_target",
    "check_kunnemann",
    "check_triangular_descent",
    "check_2imply1",
    "s_slice",
]


@dataclass
class LefschetzReport:
    check: str
    model_id: str
    p: int
    exponent: int
    divisor: str
    domain_dim: int
    codomain_dim: int
    rank: int
    verdict: str
    kernel: list[str] = field(default_factory=list)
    s: int | None = None
    seconds: float = 0.0
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        injective = self.rank == self.domain_dim
        if self.verdict in ("injective", "not-injective") and (self.verdict == "injective") != injective:
            raise AssertionError("verdict inconsistent with rank")

    @property
    def passed(self) -> bool:
        return self.verdict in ("injective", "iso")

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("seconds")
        return d

    def summary(self) -> str:
        s = f" s={self.s}" if self.s is not None else ""
        deg = "k" if self.check == "hl" else "p"
        return (f"{self.check} {self.model_id} {deg}={self.p}{s} e={self.exponent}: "
                f"{self.domain_dim}->{self.codomain_dim} rank {self.rank} => {self.verdict}")


@dataclass
class IsoReport(LefschetzReport):
    surjective: bool = False

    def __post_init__(self):
        iso = self.rank == self.domain_dim == self.codomain_dim
        if self.verdict in ("iso", "not-iso") and (self.verdict == "iso") != iso:
            raise AssertionError("verdict inconsistent with rank")


@dataclass
class DescentReport(LefschetzReport):
    block_triangular: bool = False
    diagonal_blocks_match: bool = False
    diagonal_injective: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.block_triangular and self.diagonal_blocks_match and self.verdict == "injective"


def _injectivity_report(check, model_id, lm: LinearMapMatrix, p, exponent, divisor,
                        to_str: Callable, cls=LefschetzReport, domain_dim=None, **extra):
    rk, kernel = rank_and_kernel(lm.matrix)
    dom = lm.matrix.cols if domain_dim is None else domain_dim
    cod = lm.matrix.rows
    if cls is IsoReport:
        verdict = "iso" if rk == dom == cod else "not-iso"
        extra.setdefault("surjective", rk == cod)
    else:
        verdict = "injective" if rk == dom else "not-injective"
    return cls(check, model_id, p, exponent, divisor, dom, cod, rk, verdict,
               kernel=[to_str(v) for v in kernel], **extra)


def _element(model: Model, D) -> RingElement:
    if isinstance(D, RingElement):
        if D.ring is not model.presentation:
            raise InputError("divisor is not in the model's presentation")
        return D.normalized()
    return model.presentation.element(D)


def _divisor(model: Model, D) -> RingElement:
    if D is None:
        D = model.presentation.ample
        if D is None:
            raise InputError(f"model {model.id} has no designated ample class; pass a divisor")
    D = _element(model, D)
    if D.is_zero() or D.homogeneous_codim() != 1:
        raise InputError("divisor must be a nonzero codim-1 class")
    return D


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        rep = fn(*args, **kwargs)
        rep.seconds = time.perf_counter() - t0
        return rep
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    wrapper.__wrapped__ = fn
    return wrapper


@_timed
def check_conj1(model, D=None, p: int = 1) -> LefschetzReport:
    """Is x -> D^{n-2p} x injective from codim p to codim n-p?"""
    model = as_model(model)
    P = model.presentation
    n = P.truncation_dim
    if not isinstance(p, int) or p < 0 or n < 2 * p:
        raise InputError(f"hypothesis violated: need n >= 2p, have n={n}, p={p}")
    D = _divisor(model, D)
    e = n - 2 * p
    lm = mult_operator_matrix(P, D ** e, p, codim=e)
    return _injectivity_report("conj1", model.id, lm, p, e, str(D),
                               to_str=lambda v: str(P.from_vector(v, p)))


@_timed
def check_conj2(model, D=None, p: int = 1) -> LefschetzReport:
    """Injectivity of D^{n-2p+1} on the homologically trivial part of codim p."""
    model = as_model(model)
    if model.cycle_class is None:
        raise InputError(f"model {model.id} has no cycle class map")
    P = model.presentation
    n = P.truncation_dim
    if not isinstance(p, int) or p < 0 or n < 2 * p - 1 or p > n:
        raise InputError(f"hypothesis violated: need n >= 2p - 1, have n={n}, p={p}")
    D = _divisor(model, D)
    e = n - 2 * p + 1
    hom = model.hom_basis(p)
    if p + e <= n:
        lm = mult_operator_matrix(P, D ** e, p, codim=e)
        cod_dim = len(model.hom_basis(p + e))
        cols = [lm.matrix.apply(v) for v in hom]
        rows = lm.matrix.rows
    else:
        cod_dim, cols, rows = 0, [() for _ in hom], 0
    restricted = Matrix.from_columns(cols, rows)
    rk, kernel = rank_and_kernel(restricted)
    dom = len(hom)
    verdict = "injective" if rk == dom else "not-injective"

    def to_str(w):
        vec = [Fraction(0)] * len(P.basis(p))
        for coeff, basis_vec in zip(w, hom):
            for i, b in enumerate(basis_vec):
                vec[i] += coeff * b
        return str(P.from_vector(vec, p))

    return LefschetzReport("conj2", model.id, p, e, str(D), dom, cod_dim, rk, verdict,
                           kernel=[to_str(w) for w in kernel])


@_timed
def check_hl_cohomology(model, k: int) -> IsoReport:
    """Cup with omega^{g-k} from degree k to degree 2g-k (for k > g the map
    omega^{k-g} from degree 2g-k to degree k)."""
    model = as_model(model)
    if model.kind != "cohomology" or model.lefschetz_class is None:
        raise InputError("hl check needs a cohomology model")
    g = model.g
    if not isinstance(k, int) or not 0 <= k <= 2 * g:
        raise InputError(f"degree {k} out of range 0..{2 * g}")
    P = model.presentation
    lo = min(k, 2 * g - k)
    e = g - lo
    op = model.lefschetz_class ** e
    lm = mult_operator_matrix(P, op, lo, codim=2 * e)
    return _injectivity_report("hl", model.id, lm, k, e, "omega",
                               to_str=lambda v: str(P.from_vector(v, lo)), cls=IsoReport)


@_timed
def check_hl_target(model, D=None, p: int = 1) -> IsoReport:
    """Bottom row of the cycle-class square: cup with cl(D)^{n-2p} on the target ring."""
    model = as_model(model)
    cl = model.cycle_class
    if cl is None:
        raise InputError(f"model {model.id} has no cycle class map")
    n = model.n
    if n < 2 * p:
        raise InputError(f"hypothesis violated: need n >= 2p, have n={n}, p={p}")
    D = _divisor(model, D)
    T = cl.target
    e = n - 2 * p
    op = cl(D) ** e
    lo = cl.scale * p
    lm = mult_operator_matrix(T, op, lo, codim=cl.scale * e)
    return _injectivity_report("hl-target", model.id, lm, p, e, f"cl({D})",
                               to_str=lambda v: str(T.from_vector(v, lo)), cls=IsoReport)


def s_slice(model: Model, p: int, s: int) -> list[tuple]:
    """Basis monomials of codim p with Beauville index s (k-weight 2p - s)."""
    P = model.presentation
    if not 0 <= p <= P.truncation_dim:
        return []
    return [m for m in P.basis(p) if P.kweight(m) == 2 * p - s]


def _restricted_matrix(P, op: RingElement, codim: int, dom: list, cod: list) -> Matrix:
    pos = {m: i for i, m in enumerate(cod)}
    cols = []
    for m in dom:
        img = (op * P.monomial(m)).normalized()
        col = [Fraction(0)] * len(cod)
        for mm, c in img.terms.items():
            if mm not in pos:
                raise ValueError("image leaves the target slice")
            col[pos[mm]] = c
        cols.append(col)
    return Matrix.from_columns(cols, len(cod))


@_timed
def check_kunnemann(model, p: int, s: int) -> IsoReport:
    """D0^{g+s-2p}: CH^p_(s) -> CH^{g+s-p}_(s) is an isomorphism on the divisor model."""
    model = as_model(model)
    if model.kind != "divisor":
        raise InputError("kunnemann check needs a divisor model")
    g = model.g
    if not (0 <= 2 * p - s <= g) or not (0 <= p <= g):
        raise InputError(f"(p, s) = ({p}, {s}) outside 0 <= 2p - s <= g")
    P = model.presentation
    e = g + s - 2 * p
    q = g + s - p
    dom = s_slice(model, p, s)
    cod = s_slice(model, q, s) if 0 <= q <= g else []
    D0 = P.gen("D0")
    mat = _restricted_matrix(P, D0 ** e, e, dom, cod)
    rep = _injectivity_report("kunnemann", model.id, LinearMapMatrix(dom, cod, mat), p, e, "D0",
                              to_str=lambda v: str(P.element(dict(zip(dom, v)))), cls=IsoReport, s=s)
    return rep


@_timed
def check_triangular_descent(model, p: int, D=None) -> DescentReport:
    """(D0 + D1)^{g-2p} is block-lower-triangular along the s-grading, with
    D0^{g-2p} on the diagonal; diagonal injectivity is compared with the
    rank of the full map."""
    model = as_model(model)
    if model.kind != "divisor":
        raise InputError("descent check needs a divisor model")
    g = model.g
    if not isinstance(p, int) or p < 0 or g < 2 * p:
        raise InputError(f"hypothesis violated: need g >= 2p, have g={g}, p={p}")
    P = model.presentation
    D = _element(model, D if D is not None else "D0 + D1")
    e = g - 2 * p
    q = g - p
    s_dom = sorted({2 * p - P.kweight(m) for m in P.basis(p)})
    s_cod = sorted({2 * q - P.kweight(m) for m in P.basis(q)})
    dom = [m for s in s_dom for m in s_slice(model, p, s)]
    cod = [m for s in s_cod for m in s_slice(model, q, s)]
    full = _restricted_matrix(P, D ** e, e, dom, cod)
    D0e = P.gen("D0") ** e
    col_s = [2 * p - P.kweight(m) for m in dom]
    row_s = [2 * q - P.kweight(m) for m in cod]
    triangular = all(
        full[i, j] == 0 for i in range(len(cod)) for j in range(len(dom)) if row_s[i] < col_s[j]
    )
    diag_match = True
    diag_inj = {}
    for s in s_dom:
        ds = s_slice(model, p, s)
        cs = s_slice(model, q, s)
        block = full.submatrix([i for i in range(len(cod)) if row_s[i] == s],
                               [j for j in range(len(dom)) if col_s[j] == s])
        expected = _restricted_matrix(P, D0e, e, ds, cs)
        if block != expected:
            diag_match = False
        diag_inj[s] = rank_and_kernel(expected)[0] == len(ds)
    rep = _injectivity_report("descent", model.id, LinearMapMatrix(dom, cod, full), p, e, str(D),
                              to_str=lambda v: str(P.element(dict(zip(dom, v)))), cls=DescentReport,
                              block_triangular=triangular, diagonal_blocks_match=diag_match,
                              diagonal_injective=diag_inj)
    descent_implies = all(diag_inj.values())
    rep.details["diagonal_implies_injective"] = descent_implies
    rep.details["consistent"] = (not descent_implies) or rep.verdict == "injective"
    return rep


def check_2imply1(model, D=None, p: int = 1) -> dict:
    """Conj2 + cohomological Lefschetz on (model, D, p) must force Conj1."""
    model = as_model(model)
    c2 = check_conj2(model, D, p)
    hl = check_hl_target(model, D, p)
    c1 = check_conj1(model, D, p)
    premise = c2.passed and hl.rank == hl.domain_dim
    return {
        "model": model.id,
        "divisor": c1.divisor,
        "p": p,
        "conj2": c2.verdict,
        "hl": hl.verdict,
        "conj1": c1.verdict,
        "premise": premise,
        "holds": (not premise) or c1.passed,
    }
