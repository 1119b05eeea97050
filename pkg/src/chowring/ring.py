"""Finite graded-commutative rings given by generators and triangular rewrite rules.

A presentation is a list of generators (codimension, k-weight, parity), a
global truncation dimension ``n`` (everything of codimension > n vanishes),
optional truncation blocks (a subset of generators whose combined codimension
is bounded separately, e.g. the base of a projective bundle) and one rewrite
rule per ruled generator::

    g^d  ->  (combination of monomials of lower g-degree in g and earlier generators)

Leading terms are powers of distinct variables, hence pairwise coprime, so the
rules form a Groebner basis for the lexicographic order in which later
generators dominate; together with the monomial truncations this makes
reduction terminating and confluent without a general Groebner engine.

Odd generators anticommute and square to zero.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import InputError
from .linalg import Matrix, as_fraction

Monomial = tuple  # exponent vector in declared generator order

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


@dataclass(frozen=True)
class GeneratorSpec:
    name: str
    codim: int
    kweight: int | None = None
    parity: str = "even"

    def __post_init__(self):
        if not isinstance(self.name, str) or not _IDENT.match(self.name):
            raise InputError(f"invalid generator name {self.name!r}")
        if not isinstance(self.codim, int) or self.codim < 1:
            raise InputError(f"generator {self.name}: codim must be a positive integer")
        if self.parity not in ("even", "odd"):
            raise InputError(f"generator {self.name}: parity must be 'even' or 'odd'")
        if self.kweight is None:
            object.__setattr__(self, "kweight", 2 * self.codim)
        elif not isinstance(self.kweight, int) or self.kweight < 0:
            raise InputError(f"generator {self.name}: kweight must be a non-negative integer")

    @property
    def odd(self) -> bool:
        return self.parity == "odd"


@dataclass(frozen=True)
class TruncationBlock:
    """Monomials whose codimension in ``generators`` exceeds ``max_codim`` vanish."""

    generators: tuple[str, ...]
    max_codim: int


@dataclass
class LinearMapMatrix:
    domain_basis: list
    codomain_basis: list
    matrix: Matrix

    def __post_init__(self):
        if self.matrix.shape != (len(self.codomain_basis), len(self.domain_basis)):
            raise ValueError("matrix shape does not match the bases")


# --------------------------------------------------------------------------
# expression text


def _tokens(text: str):
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        pos = m.end()
        num, ident, other = m.groups()
        if num is not None:
            yield ("int", int(num))
        elif ident is not None:
            yield ("id", ident)
        elif other is not None and not other.isspace():
            yield ("op", other)


def parse_terms(text: str, names: Sequence[str], odd: Sequence[bool]) -> dict:
    """Parse an expression into {monomial: Fraction} without any reduction.

    Odd generators are reordered into canonical position with the usual sign;
    a repeated odd generator kills the term.
    """
    if not isinstance(text, str) or not text.strip():
        raise InputError("empty expression")
    index = {n: i for i, n in enumerate(names)}
    toks = list(_tokens(text)) + [("end", None)]
    pos = 0

    def peek():
        return toks[pos]

    def take():
        nonlocal pos
        tok = toks[pos]
        pos += 1
        return tok

    def expect_int():
        kind, val = take()
        if kind != "int":
            raise InputError(f"expected an integer in {text!r}")
        return val

    terms: dict = {}
    sign = 1
    if peek() == ("op", "-"):
        take()
        sign = -1
    elif peek() == ("op", "+"):
        take()
    while True:
        coeff = Fraction(sign)
        exps = [0] * len(names)
        odd_seq: list[int] = []
        dead = False
        while True:
            kind, val = take()
            if kind == "int":
                num = val
                if peek() == ("op", "/"):
                    take()
                    den = expect_int()
                    if den == 0:
                        raise InputError(f"zero denominator in {text!r}")
                    coeff *= Fraction(num, den)
                else:
                    coeff *= num
            elif kind == "id":
                if val not in index:
                    raise InputError(f"unknown generator {val!r} in {text!r}")
                power = 1
                if peek() == ("op", "^"):
                    take()
                    power = expect_int()
                i = index[val]
                if odd[i]:
                    if power >= 2:
                        dead = True
                    elif power == 1:
                        odd_seq.append(i)
                else:
                    exps[i] += power
            else:
                raise InputError(f"unexpected token {val!r} in {text!r}")
            if peek() == ("op", "*"):
                take()
                continue
            break
        if not dead and len(set(odd_seq)) == len(odd_seq):
            inversions = sum(1 for a in range(len(odd_seq)) for b in range(a + 1, len(odd_seq))
                             if odd_seq[a] > odd_seq[b])
            if inversions % 2:
                coeff = -coeff
            for i in odd_seq:
                exps[i] = 1
            key = tuple(exps)
            terms[key] = terms.get(key, Fraction(0)) + coeff
            if not terms[key]:
                del terms[key]
        kind, val = take()
        if kind == "end":
            return terms
        if (kind, val) == ("op", "+"):
            sign = 1
        elif (kind, val) == ("op", "-"):
            sign = -1
        else:
            raise InputError(f"unexpected token {val!r} in {text!r}")


def format_monomial(mono: Monomial, names: Sequence[str]) -> str:
    parts = []
    for n, e in zip(names, mono):
        if e == 1:
            parts.append(n)
        elif e > 1:
            parts.append(f"{n}^{e}")
    return "*".join(parts) if parts else "1"


# --------------------------------------------------------------------------
# presentations


class RingPresentation:
    """An immutable finite graded-commutative ring presentation.

    ``relations`` is an iterable of ``(lead, rhs)`` pairs of expression
    strings, e.g. ``("z^2", "theta*z - 1/2*theta^2")``.
    """

    def __init__(
        self,
        generators: Iterable[GeneratorSpec],
        truncation_dim: int,
        relations: Iterable = (),
        blocks: Iterable[TruncationBlock] = (),
        ample: str | None = None,
        label: str | None = None,
    ):
        self.generators: tuple[GeneratorSpec, ...] = tuple(generators)
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise InputError(f"duplicate generator name(s): {', '.join(dup)}")
        if not isinstance(truncation_dim, int) or truncation_dim < 0:
            raise InputError("truncation_dim must be a non-negative integer")
        self.names = tuple(names)
        self.index = {n: i for i, n in enumerate(names)}
        self.truncation_dim = truncation_dim
        self.label = label or "custom"
        self._codims = tuple(g.codim for g in self.generators)
        self._odd = tuple(g.odd for g in self.generators)
        self._odd_idx = tuple(i for i, o in enumerate(self._odd) if o)

        self.blocks: tuple[TruncationBlock, ...] = tuple(blocks)
        self._blocks = []
        for b in self.blocks:
            missing = [n for n in b.generators if n not in self.index]
            if missing:
                raise InputError(f"truncation block names unknown generator(s): {', '.join(missing)}")
            if b.max_codim < 0:
                raise InputError("truncation block max_codim must be non-negative")
            self._blocks.append((tuple(self.index[n] for n in b.generators), b.max_codim))

        self.rules: dict[int, tuple[int, dict]] = {}
        self._relation_text: list[tuple[str, str]] = []
        for rel in relations:
            self._add_rule(*rel)

        self._reduce_cache: dict = {}
        self._basis_cache: dict = {}
        self.ample = None
        if ample is not None:
            a = self.parse(ample)
            if a.is_zero() or a.homogeneous_codim() != 1:
                raise InputError("ample class must be a nonzero element of codim 1")
            self.ample = a

    # -- construction helpers ------------------------------------------------

    def _add_rule(self, lead, rhs):
        lead_terms = parse_terms(lead, self.names, self._odd) if isinstance(lead, str) else dict(lead)
        if len(lead_terms) != 1 or next(iter(lead_terms.values())) != 1:
            raise InputError(f"rule lead {lead!r} must be a single monic monomial")
        mono = next(iter(lead_terms))
        support = [i for i, e in enumerate(mono) if e]
        if not support:
            # odd squares parse to an empty dict, never reach here
            raise InputError(f"rule lead {lead!r} is constant")
        if len(support) != 1:
            raise InputError(f"rule not triangular: lead {lead!r} is not a pure power of one generator")
        gi = support[0]
        degree = mono[gi]
        if self._odd[gi]:
            raise InputError(f"rules on odd generators are not allowed ({lead!r})")
        if gi in self.rules:
            raise InputError(f"second rule for generator {self.names[gi]}")
        if isinstance(rhs, str):
            rhs_terms = parse_terms(rhs, self.names, self._odd)
        elif isinstance(rhs, RingElement):
            rhs_terms = dict(rhs.terms)
        else:
            rhs_terms = {tuple(k): as_fraction(v) for k, v in dict(rhs).items() if v}
        lead_codim = degree * self._codims[gi]
        for m in rhs_terms:
            if self.codim(m) != lead_codim:
                raise InputError(
                    f"non-homogeneous relation: {format_monomial(m, self.names)} has codim "
                    f"{self.codim(m)}, lead {lead!r} has codim {lead_codim}"
                )
            if m[gi] >= degree or any(m[j] for j in range(gi + 1, len(m))):
                raise InputError(
                    f"rule not triangular: right side of {lead!r} contains "
                    f"{format_monomial(m, self.names)}"
                )
            if sum(m[j] for j in self._odd_idx) % 2:
                raise InputError(f"relation for {lead!r} mixes parities")
        for idx, _ in self._blocks:
            if gi not in idx:
                continue
            lead_bc = degree * self._codims[gi]
            for m in rhs_terms:
                if sum(m[j] * self._codims[j] for j in idx) != lead_bc:
                    raise InputError(f"rule for {lead!r} leaves its truncation block")
        self.rules[gi] = (degree, rhs_terms)
        self._relation_text.append(
            (format_monomial(mono, self.names), _format_terms(rhs_terms, self))
        )

    # -- basic monomial arithmetic ------------------------------------------

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def codim(self, mono: Monomial) -> int:
        return sum(e * c for e, c in zip(mono, self._codims))

    def kweight(self, mono: Monomial) -> int:
        return sum(e * g.kweight for e, g in zip(mono, self.generators))

    def one_monomial(self) -> Monomial:
        return (0,) * self.ngens

    def _mul_mono(self, a: Monomial, b: Monomial):
        """Return (sign, a*b) or None if the product vanishes for parity reasons."""
        sign = 1
        for j in self._odd_idx:
            if b[j]:
                if a[j]:
                    return None
                # b's odd generator moves left past a's odd generators with larger index
                cnt = 0
                for i in self._odd_idx:
                    if i > j and a[i]:
                        cnt += 1
                if cnt % 2:
                    sign = -sign
        return sign, tuple(x + y for x, y in zip(a, b))

    def _vanishes(self, mono: Monomial) -> bool:
        if self.codim(mono) > self.truncation_dim:
            return True
        for idx, mx in self._blocks:
            if sum(mono[i] * self._codims[i] for i in idx) > mx:
                return True
        return False

    def reduce_monomial(self, mono: Monomial) -> dict:
        """Normal form of a single monomial as {monomial: Fraction}."""
        cached = self._reduce_cache.get(mono)
        if cached is not None:
            return cached
        if self._vanishes(mono):
            result = {}
        else:
            ruled = [i for i, (d, _) in self.rules.items() if mono[i] >= d]
            if not ruled:
                result = {mono: Fraction(1)}
            else:
                gi = max(ruled)
                d, rhs = self.rules[gi]
                rest = list(mono)
                rest[gi] -= d
                rest = tuple(rest)
                result = {}
                for m, c in rhs.items():
                    prod = self._mul_mono(m, rest)
                    if prod is None:
                        continue
                    s, pm = prod
                    for mm, cc in self.reduce_monomial(pm).items():
                        v = result.get(mm, 0) + s * c * cc
                        if v:
                            result[mm] = v
                        else:
                            result.pop(mm, None)
        self._reduce_cache[mono] = result
        return result

    def reduce_terms(self, terms: Mapping) -> dict:
        out: dict = {}
        for m, c in terms.items():
            if not c:
                continue
            for mm, cc in self.reduce_monomial(m).items():
                v = out.get(mm, 0) + c * cc
                if v:
                    out[mm] = v
                else:
                    out.pop(mm, None)
        return out

    def is_normal(self, mono: Monomial) -> bool:
        if self._vanishes(mono):
            return False
        if any(mono[i] > 1 for i in self._odd_idx):
            return False
        return all(mono[i] < d for i, (d, _) in self.rules.items())

    # -- bases ---------------------------------------------------------------

    def basis(self, p: int) -> list[Monomial]:
        """Normal-form monomials of codim ``p``, lexicographically descending."""
        if not isinstance(p, int) or p < 0 or p > self.truncation_dim:
            raise InputError(f"codim {p} out of range 0..{self.truncation_dim}")
        cached = self._basis_cache.get(p)
        if cached is not None:
            return list(cached)
        ranges = []
        for i, g in enumerate(self.generators):
            top = p // g.codim
            if g.odd:
                top = min(top, 1)
            if i in self.rules:
                top = min(top, self.rules[i][0] - 1)
            ranges.append(range(top + 1))
        out = []
        # enumerate with a running codim bound
        def rec(i, remaining, acc):
            if i == self.ngens:
                if remaining == 0:
                    m = tuple(acc)
                    if not self._vanishes(m):
                        out.append(m)
                return
            c = self._codims[i]
            for e in ranges[i]:
                if e * c > remaining:
                    break
                acc.append(e)
                rec(i + 1, remaining - e * c, acc)
                acc.pop()
        rec(0, p, [])
        out.sort(reverse=True)
        self._basis_cache[p] = tuple(out)
        return list(out)

    def basis_dims(self) -> tuple[int, ...]:
        return tuple(len(self.basis(p)) for p in range(self.truncation_dim + 1))

    # -- elements ------------------------------------------------------------

    def element(self, data=None) -> "RingElement":
        """Normal-form element from an expression string, a term dict or a scalar."""
        if data is None:
            return RingElement(self, {}, reduced=True)
        if isinstance(data, RingElement):
            if data.ring is not self:
                raise InputError("element belongs to a different presentation")
            return data.normalized()
        if isinstance(data, str):
            return RingElement(self, self.reduce_terms(parse_terms(data, self.names, self._odd)), reduced=True)
        if isinstance(data, Mapping):
            return RingElement(self, self.reduce_terms({tuple(k): as_fraction(v) for k, v in data.items()}),
                               reduced=True)
        return self.scalar(data)

    def parse(self, text: str) -> "RingElement":
        """Element exactly as written, not yet reduced."""
        return RingElement(self, parse_terms(text, self.names, self._odd), reduced=False)

    def raw(self, terms: Mapping) -> "RingElement":
        return RingElement(self, {tuple(k): as_fraction(v) for k, v in terms.items() if v}, reduced=False)

    def scalar(self, c) -> "RingElement":
        c = as_fraction(c)
        return RingElement(self, {self.one_monomial(): c} if c else {}, reduced=True)

    def one(self) -> "RingElement":
        return self.scalar(1)

    def zero(self) -> "RingElement":
        return RingElement(self, {}, reduced=True)

    def gen(self, name: str) -> "RingElement":
        if name not in self.index:
            raise InputError(f"unknown generator {name!r}")
        m = [0] * self.ngens
        m[self.index[name]] = 1
        return RingElement(self, self.reduce_terms({tuple(m): Fraction(1)}), reduced=True)

    def monomial(self, mono: Monomial) -> "RingElement":
        return RingElement(self, self.reduce_terms({tuple(mono): Fraction(1)}), reduced=True)

    def from_vector(self, vector: Sequence, p: int) -> "RingElement":
        basis = self.basis(p)
        if len(vector) != len(basis):
            raise ValueError("vector length does not match the graded piece")
        return RingElement(self, {m: as_fraction(v) for m, v in zip(basis, vector) if v}, reduced=True)

    def coordinates(self, x: "RingElement", p: int) -> tuple[Fraction, ...]:
        x = x.normalized()
        basis = self.basis(p)
        pos = {m: i for i, m in enumerate(basis)}
        vec = [Fraction(0)] * len(basis)
        for m, c in x.terms.items():
            if m not in pos:
                raise ValueError(f"element has a component outside codim {p}")
            vec[pos[m]] = c
        return tuple(vec)

    # -- structure -----------------------------------------------------------

    def relation_strings(self) -> list[tuple[str, str]]:
        return list(self._relation_text)

    def describe(self) -> dict:
        d = {
            "truncation": self.truncation_dim,
            "generators": [
                {"name": g.name, "codim": g.codim, "kweight": g.kweight, "parity": g.parity}
                for g in self.generators
            ],
            "relations": [{"lead": a, "rhs": b} for a, b in self._relation_text],
        }
        if self.blocks:
            d["blocks"] = [{"generators": list(b.generators), "max_codim": b.max_codim} for b in self.blocks]
        if self.ample is not None:
            d["ample"] = str(self.ample)
        return d

    def renamed(self, mapping: Mapping[str, str], label: str | None = None) -> "RingPresentation":
        """Copy with generators renamed; generator order and rules are unchanged."""
        gens = [GeneratorSpec(mapping.get(g.name, g.name), g.codim, g.kweight, g.parity) for g in self.generators]
        blocks = [TruncationBlock(tuple(mapping.get(n, n) for n in b.generators), b.max_codim) for b in self.blocks]
        P = RingPresentation(gens, self.truncation_dim, blocks=blocks, label=label or self.label)
        for i, (d, rhs) in sorted(self.rules.items()):
            lead = tuple(d if j == i else 0 for j in range(self.ngens))
            P._add_rule({lead: 1}, rhs)
        if self.ample is not None:
            P.ample = RingElement(P, dict(self.ample.terms), reduced=True)
        return P

    def __repr__(self) -> str:
        return f"RingPresentation({self.label!r}, gens={list(self.names)}, n={self.truncation_dim})"


def _unit(i: int, n: int) -> Monomial:
    return tuple(1 if j == i else 0 for j in range(n))


def _format_terms(terms: Mapping, ring: RingPresentation) -> str:
    if not terms:
        return "0"
    order = sorted(terms, key=lambda m: (ring.codim(m), tuple(-e for e in m)))
    out = []
    for m in order:
        c = terms[m]
        mono = format_monomial(m, ring.names)
        neg = c < 0
        a = -c if neg else c
        if mono == "1":
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


# --------------------------------------------------------------------------
# elements


class RingElement:
    """Sparse rational combination of monomials of one presentation.

    Elements produced by arithmetic are always in normal form; ``ring.parse``
    can hold an expression verbatim (``reduced=False``) so that relations such
    as a minimal equation can be displayed before reduction.
    """

    __slots__ = ("ring", "terms", "reduced")

    def __init__(self, ring: RingPresentation, terms: dict, reduced: bool = True):
        self.ring = ring
        self.terms = terms
        self.reduced = reduced

    def normalized(self) -> "RingElement":
        if self.reduced:
            return self
        return RingElement(self.ring, self.ring.reduce_terms(self.terms), reduced=True)

    def _coerce(self, other) -> "RingElement":
        if isinstance(other, RingElement):
            if other.ring is not self.ring:
                raise InputError("elements belong to different presentations")
            return other.normalized()
        if isinstance(other, (int, Fraction)):
            return self.ring.scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a = self.normalized().terms
        out = dict(a)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return RingElement(self.ring, out, reduced=True)

    __radd__ = __add__

    def __neg__(self):
        x = self.normalized()
        return RingElement(self.ring, {m: -c for m, c in x.terms.items()}, reduced=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = as_fraction(other)
            x = self.normalized()
            if not c:
                return self.ring.zero()
            return RingElement(self.ring, {m: c * v for m, v in x.terms.items()}, reduced=True)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        ring = self.ring
        out: dict = {}
        for ma, ca in self.normalized().terms.items():
            for mb, cb in other.terms.items():
                prod = ring._mul_mono(ma, mb)
                if prod is None:
                    continue
                s, pm = prod
                for mm, cc in ring.reduce_monomial(pm).items():
                    v = out.get(mm, 0) + s * ca * cb * cc
                    if v:
                        out[mm] = v
                    else:
                        out.pop(mm, None)
        return RingElement(ring, out, reduced=True)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / as_fraction(other))
        return NotImplemented

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = self.ring.one()
        base = self.normalized()
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.normalized().terms == other.terms

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.normalized().terms

    def __bool__(self):
        return not self.is_zero()

    def codims(self) -> set[int]:
        return {self.ring.codim(m) for m in self.terms}

    def homogeneous_codim(self) -> int:
        cs = self.codims()
        if len(cs) != 1:
            raise InputError(f"element {self} is not codim-homogeneous")
        return cs.pop()

    def component(self, p: int) -> "RingElement":
        x = self.normalized()
        return RingElement(self.ring, {m: c for m, c in x.terms.items() if self.ring.codim(m) == p}, reduced=True)

    def coefficient(self, mono) -> Fraction:
        if isinstance(mono, str):
            terms = parse_terms(mono, self.ring.names, self.ring._odd)
            if len(terms) != 1:
                raise InputError(f"{mono!r} is not a monomial")
            (mono, c), = terms.items()
            return self.normalized().terms.get(mono, Fraction(0)) / c
        return self.normalized().terms.get(tuple(mono), Fraction(0))

    def __str__(self):
        return _format_terms(self.terms, self.ring)

    def __repr__(self):
        tag = "" if self.reduced else ", unreduced"
        return f"<{self.ring.label}: {self}{tag}>"


# --------------------------------------------------------------------------
# ring maps


class RingHom:
    """Graded ring homomorphism determined by generator images.

    ``scale`` is the factor relating source codimension to target grading
    (2 for a cycle class map into an exterior cohomology model).
    """

    def __init__(self, source: RingPresentation, target: RingPresentation,
                 images: Mapping[str, object], scale: int = 1):
        self.source = source
        self.target = target
        self.scale = scale
        self.images: dict[str, RingElement] = {}
        for g in source.generators:
            img = images.get(g.name, "0")
            img = target.element(img)
            if not img.is_zero():
                cs = img.codims()
                if cs != {g.codim * scale}:
                    raise InputError(f"image of {g.name} is not homogeneous of grade {g.codim * scale}")
            self.images[g.name] = img
        extra = set(images) - set(source.names)
        if extra:
            raise InputError(f"images given for unknown generator(s): {', '.join(sorted(extra))}")
        self._cache: dict = {}

    def _apply_mono(self, mono: Monomial) -> RingElement:
        hit = self._cache.get(mono)
        if hit is not None:
            return hit
        out = self.target.one()
        for name, e in zip(self.source.names, mono):
            if e:
                out = out * self.images[name] ** e
        self._cache[mono] = out
        return out

    def __call__(self, x: RingElement) -> RingElement:
        if x.ring is not self.source:
            raise InputError("element is not in the source presentation")
        out = self.target.zero()
        for m, c in x.normalized().terms.items():
            out = out + self._apply_mono(m) * c
        return out

    apply = __call__

    def matrix(self, p: int) -> LinearMapMatrix:
        dom = self.source.basis(p)
        q = p * self.scale
        cod = self.target.basis(q) if q <= self.target.truncation_dim else []
        cols = []
        for m in dom:
            img = self._apply_mono(m)
            cols.append(self.target.coordinates(img, q) if cod else ())
        return LinearMapMatrix(dom, cod, Matrix.from_columns(cols, len(cod)))

    def describe(self) -> dict:
        return {name: str(img) for name, img in self.images.items()}


# --------------------------------------------------------------------------
# module-level operations


def build_presentation(spec: Mapping) -> RingPresentation:
    """Validated presentation from a plain mapping (the model-file layout).

    >>> P = build_presentation({"truncation": 3, "generators": [{"name": "H", "codim": 1}]})
    >>> P.basis_dims()
    (1, 1, 1, 1)
    """
    try:
        gens = [
            GeneratorSpec(g["name"], g["codim"], g.get("kweight"), g.get("parity", "even"))
            for g in spec["generators"]
        ]
        rels = []
        for r in spec.get("relations", []):
            if isinstance(r, Mapping):
                rels.append((r["lead"], r["rhs"]))
            else:
                lead, rhs = r
                rels.append((lead, rhs))
        blocks = [TruncationBlock(tuple(b["generators"]), int(b["max_codim"])) for b in spec.get("blocks", [])]
        trunc = spec["truncation"] if "truncation" in spec else spec["truncation_dim"]
        return RingPresentation(gens, trunc, rels, blocks, ample=spec.get("ample"), label=spec.get("label"))
    except InputError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed presentation: {exc!r}") from exc


def multiply(a: RingElement, b: RingElement) -> RingElement:
    if a.ring is not b.ring:
        raise InputError("cannot multiply elements of different presentations")
    return a * b


def normal_form(x: RingElement) -> RingElement:
    return x.normalized()


def graded_basis(P: RingPresentation, p: int) -> list[Monomial]:
    return P.basis(p)


def mult_operator_matrix(P: RingPresentation, c: RingElement, p: int, codim: int | None = None) -> LinearMapMatrix:
    """Matrix of ``x -> c*x`` from codim ``p`` to codim ``p + codim(c)``.

    ``codim`` must be supplied when ``c`` is zero (e.g. a power that has
    already vanished), since its degree cannot be read off the terms.
    """
    if c.ring is not P:
        raise InputError("operator element is not in this presentation")
    c = c.normalized()
    if codim is None:
        if c.is_zero():
            raise InputError("zero operator: pass its codim explicitly")
        codim = c.homogeneous_codim()
    elif not c.is_zero() and c.homogeneous_codim() != codim:
        raise InputError("operator codim does not match")
    if not (0 <= p <= P.truncation_dim) or not (0 <= p + codim <= P.truncation_dim):
        raise InputError(f"codims {p} -> {p + codim} out of range 0..{P.truncation_dim}")
    dom = P.basis(p)
    cod = P.basis(p + codim)
    cols = [P.coordinates(c * P.monomial(m), p + codim) for m in dom]
    return LinearMapMatrix(dom, cod, Matrix.from_columns(cols, len(cod)))


def isomorphic_by_renaming(P: RingPresentation, Q: RingPresentation, mapping: Mapping[str, str]) -> bool:
    """True when sending each generator of P to the generator of Q named by
    ``mapping`` is a graded ring isomorphism.

    Checked structurally (codims, parities, truncation, ruled generators and
    rule right sides) and then on the full multiplication table of bases.
    """
    if P.ngens != Q.ngens or P.truncation_dim != Q.truncation_dim:
        return False
    target = [mapping.get(n, n) for n in P.names]
    if sorted(target) != sorted(Q.names):
        return False
    for g, name in zip(P.generators, target):
        h = Q.generators[Q.index[name]]
        if (g.codim, g.parity) != (h.codim, h.parity):
            return False
    images = {n: Q.gen(t) for n, t in zip(P.names, target)}
    phi = RingHom(P, Q, images)

    def phi_terms(terms):
        return {m: c for m, c in phi(P.raw(terms).normalized()).terms.items()}

    ruled_p = {Q.index[target[i]]: d for i, (d, _) in P.rules.items()}
    if ruled_p != {i: d for i, (d, _) in Q.rules.items()}:
        return False
    for i, (d, rhs) in P.rules.items():
        if phi_terms(P.reduce_terms(rhs)) != Q.reduce_terms(Q.rules[Q.index[target[i]]][1]):
            return False
    for p in range(P.truncation_dim + 1):
        images_p = [phi(P.monomial(m)) for m in P.basis(p)]
        if sorted(m for x in images_p for m in x.terms) != sorted(Q.basis(p)):
            return False
        if any(len(x.terms) != 1 for x in images_p):
            return False
    for p in range(P.truncation_dim + 1):
        for q in range(p, P.truncation_dim + 1 - p):
            for a in P.basis(p):
                for b in P.basis(q):
                    x, y = P.monomial(a), P.monomial(b)
                    if phi(x * y) != phi(x) * phi(y):
                        return False
    return True
