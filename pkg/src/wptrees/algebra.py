"""Exact sparse polynomial arithmetic over a fixed family of formal atoms.

All symbolic computation in this package happens in one polynomial ring with
rational coefficients.  The atoms are:

* ``pi2``                the constant pi^2, kept formal so that volume
                         polynomials can be compared exactly;
* ``L1^2, ..., Ln^2``    squared boundary lengths (every formula in scope is
                         even in each length, so the square is the atom and
                         odd powers are unrepresentable by construction);
* ``m0, m1, ...``        moments of a boundary-length measure,
                         m_k = int dmu(L) L^(2k);
* ``r``                  one auxiliary formal variable, used both as the
                         series variable of the root-finding problem and as
                         the substitution symbol u = l^2 during integration;
* ``t0, t1, ...``,
  ``gam2, gam3, ...``,
  ``invgam1``            counting variables of the boundary-insertion
                         recursion; ``invgam1`` stands for 1/gam1 and carries
                         its own derivative convention (see genfun).

A monomial is a sorted tuple of ``(atom, exponent)`` pairs with exponent
>= 1; a polynomial maps monomials to nonzero ``Fraction`` coefficients.  The
zero polynomial stores no terms.  All arithmetic is exact.  Floating point
appears only in :meth:`Polynomial.eval_float`, which converts the bindings to
exact rationals, evaluates exactly, and rounds once at the end
(round-to-nearest into binary64).

Canonical term order, used by every serializer: ascending total degree, then
descending lexicographic with respect to the atom order

    pi2 < L1^2 < L2^2 < ... < m0 < m1 < ... < r < t0 < ... < invgam1.

Monomials and coefficients are immutable and operations are pure functions,
so values can be shared freely across threads and summed in any order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

__all__ = [
    "Atom",
    "PI2",
    "AUX",
    "INV_GAMMA1",
    "lsq",
    "mom",
    "that",
    "ghat",
    "Polynomial",
    "GradedSeries",
    "integrate_halfsquare",
    "poly_to_json_terms",
    "poly_from_json_terms",
]

# Atom kinds, listed in canonical sort order.
_PI2, _LSQ, _MOM, _AUX, _THAT, _GHAT, _INVG1 = range(7)


@dataclass(frozen=True, slots=True)
class Atom:
    """A formal variable of the ring, ordered by (kind, index)."""

    kind: int
    index: int = 0

    def sort_key(self) -> tuple[int, int]:
        return (self.kind, self.index)

    def name(self) -> str:
        if self.kind == _PI2:
            return "pi2"
        if self.kind == _LSQ:
            return f"L{self.index}"
        if self.kind == _MOM:
            return f"m{self.index}"
        if self.kind == _AUX:
            return "r"
        if self.kind == _THAT:
            return f"t{self.index}"
        if self.kind == _GHAT:
            return f"gam{self.index}"
        return "invgam1"


PI2 = Atom(_PI2)
AUX = Atom(_AUX)
INV_GAMMA1 = Atom(_INVG1)


def lsq(i: int) -> Atom:
    """The atom L_i^2 (squared length of boundary i), i >= 1."""
    if i < 1:
        raise ValueError(f"boundary index must be >= 1, got {i}")
    return Atom(_LSQ, i)


def mom(k: int) -> Atom:
    """The moment atom m_k, k >= 0."""
    if k < 0:
        raise ValueError(f"moment order must be >= 0, got {k}")
    return Atom(_MOM, k)


def that(k: int) -> Atom:
    """Counting variable for boundary vertices of degree k + 1."""
    if k < 0:
        raise ValueError(f"t-hat index must be >= 0, got {k}")
    return Atom(_THAT, k)


def ghat(k: int) -> Atom:
    """Counting variable for inner vertices of degree k + 1, k >= 2."""
    if k < 2:
        raise ValueError(f"gamma-hat index must be >= 2, got {k}")
    return Atom(_GHAT, k)


# A monomial: atoms sorted by sort_key, exponents >= 1.
Mono = tuple[tuple[Atom, int], ...]

_EMPTY_MONO: Mono = ()


def _mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    merged: dict[Atom, int] = dict(a)
    for atom, e in b:
        merged[atom] = merged.get(atom, 0) + e
    return tuple(sorted(merged.items(), key=lambda ae: ae[0].sort_key()))


def _mono_degree(m: Mono) -> int:
    return sum(e for _, e in m)


def _mono_sort_key(m: Mono):
    # Graded order: total degree first; within a degree the pair list
    # (atom_key, -exponent) realizes descending lexicographic comparison.
    return (_mono_degree(m), tuple((a.sort_key(), -e) for a, e in m))


class Polynomial:
    """Immutable sparse polynomial with Fraction coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Mono, Fraction] | None = None):
        cleaned: dict[Mono, Fraction] = {}
        if terms:
            for m, c in terms.items():
                c = Fraction(c)
                if c != 0:
                    cleaned[m] = c
        object.__setattr__(self, "_terms", cleaned)

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "Polynomial":
        return Polynomial()

    @staticmethod
    def one() -> "Polynomial":
        return Polynomial({_EMPTY_MONO: Fraction(1)})

    @staticmethod
    def const(c) -> "Polynomial":
        return Polynomial({_EMPTY_MONO: Fraction(c)})

    @staticmethod
    def of_atom(a: Atom, power: int = 1) -> "Polynomial":
        if power < 0:
            raise ValueError("negative powers are not representable")
        if power == 0:
            return Polynomial.one()
        return Polynomial({((a, power),): Fraction(1)})

    @staticmethod
    def monomial(coeff, pairs: Iterable[tuple[Atom, int]]) -> "Polynomial":
        pairs = [(a, e) for a, e in pairs if e != 0]
        if any(e < 0 for _, e in pairs):
            raise ValueError("negative powers are not representable")
        mono = tuple(sorted(pairs, key=lambda ae: ae[0].sort_key()))
        return Polynomial({mono: Fraction(coeff)})

    # -- basic queries -------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def items(self) -> Iterator[tuple[Mono, Fraction]]:
        return iter(self._terms.items())

    def sorted_terms(self) -> list[tuple[Mono, Fraction]]:
        """Terms in the canonical graded order (byte-stable)."""
        return sorted(self._terms.items(), key=lambda mc: _mono_sort_key(mc[0]))

    def coefficient(self, pairs: Iterable[tuple[Atom, int]]) -> Fraction:
        mono = tuple(sorted(((a, e) for a, e in pairs if e != 0),
                            key=lambda ae: ae[0].sort_key()))
        return self._terms.get(mono, Fraction(0))

    def constant_term(self) -> Fraction:
        return self._terms.get(_EMPTY_MONO, Fraction(0))

    def total_degree(self) -> int:
        if not self._terms:
            return 0
        return max(_mono_degree(m) for m in self._terms)

    def atoms(self) -> set[Atom]:
        out: set[Atom] = set()
        for m in self._terms:
            out.update(a for a, _ in m)
        return out

    def degree_in_kind(self, mono: Mono, kind: int) -> int:
        return sum(e for a, e in mono if a.kind == kind)

    def moment_grade(self, mono: Mono) -> int:
        """Total degree of a monomial in the moment atoms m_k."""
        return sum(e for a, e in mono if a.kind == _MOM)

    def max_moment_grade(self) -> int:
        if not self._terms:
            return 0
        return max(self.moment_grade(m) for m in self._terms)

    # -- ring operations ------------------------------------------------

    @staticmethod
    def _coerce(other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.const(other)
        return NotImplemented  # type: ignore[return-value]

    def __eq__(self, other) -> bool:
        other = Polynomial._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __add__(self, other) -> "Polynomial":
        other = Polynomial._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, Fraction(0)) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        p = Polynomial.__new__(Polynomial)
        object.__setattr__(p, "_terms", out)
        return p

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        p = Polynomial.__new__(Polynomial)
        object.__setattr__(p, "_terms", {m: -c for m, c in self._terms.items()})
        return p

    def __sub__(self, other) -> "Polynomial":
        other = Polynomial._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return Polynomial._coerce(other) + (-self)

    def __mul__(self, other) -> "Polynomial":
        other = Polynomial._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict[Mono, Fraction] = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                m = _mono_mul(ma, mb)
                s = out.get(m, Fraction(0)) + ca * cb
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        p = Polynomial.__new__(Polynomial)
        object.__setattr__(p, "_terms", out)
        return p

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Polynomial":
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Polynomial.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    # -- calculus -------------------------------------------------------

    def partial(self, x: Atom) -> "Polynomial":
        """Formal partial derivative with respect to the atom x."""
        out: dict[Mono, Fraction] = {}
        for m, c in self._terms.items():
            for i, (a, e) in enumerate(m):
                if a == x:
                    rest = m[:i] + ((a, e - 1),) + m[i + 1:] if e > 1 else m[:i] + m[i + 1:]
                    s = out.get(rest, Fraction(0)) + c * e
                    if s:
                        out[rest] = s
                    else:
                        out.pop(rest, None)
                    break
        return Polynomial(out)

    def substitute(self, mapping: Mapping[Atom, "Polynomial"]) -> "Polynomial":
        """Simultaneous substitution of atoms by polynomials."""
        # Powers of each replacement are cached; unmapped atoms pass through.
        power_cache: dict[tuple[Atom, int], Polynomial] = {}

        def powered(a: Atom, e: int) -> Polynomial:
            key = (a, e)
            got = power_cache.get(key)
            if got is None:
                got = mapping[a] ** e
                power_cache[key] = got
            return got

        total = Polynomial.zero()
        for m, c in self._terms.items():
            term = Polynomial.const(c)
            for a, e in m:
                if a in mapping:
                    term = term * powered(a, e)
                else:
                    term = term * Polynomial.of_atom(a, e)
            total = total + term
        return total

    # -- evaluation -----------------------------------------------------

    def eval_exact(self, bindings: Mapping[Atom, Fraction]) -> Fraction:
        """Evaluate with exact rational bindings for every atom present."""
        total = Fraction(0)
        for m, c in self._terms.items():
            val = c
            for a, e in m:
                if a not in bindings:
                    raise KeyError(f"unbound atom {a.name()}")
                val *= Fraction(bindings[a]) ** e
            total += val
        return total

    def eval_float(self, bindings: Mapping[Atom, float]) -> float:
        """Correctly rounded float evaluation.

        Bindings are converted to exact rationals (float -> Fraction is
        exact), the polynomial is evaluated exactly, and the result is
        rounded once into binary64.
        """
        exact = self.eval_exact({a: Fraction(v) for a, v in bindings.items()})
        return float(exact)

    # -- rendering -------------------------------------------------------

    @staticmethod
    def _atom_text(a: Atom, e: int) -> str:
        if a.kind == _LSQ:
            return f"L{a.index}^{2 * e}"
        base = a.name()
        return base if e == 1 else f"{base}^{e}"

    def text(self) -> str:
        """Canonical plain-text form, e.g. ``2*pi2 + 1/2*L1^2``."""
        if not self._terms:
            return "0"
        chunks: list[str] = []
        for m, c in self.sorted_terms():
            sign = "-" if c < 0 else "+"
            mag = -c if c < 0 else c
            atoms = "*".join(self._atom_text(a, e) for a, e in m)
            if not atoms:
                body = str(mag)
            elif mag == 1:
                body = atoms
            else:
                body = f"{mag}*{atoms}"
            chunks.append((sign, body))
        first_sign, first_body = chunks[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in chunks[1:]:
            out += f" {sign} {body}"
        return out

    @staticmethod
    def _atom_latex(a: Atom, e: int) -> str:
        if a.kind == _PI2:
            return f"\\pi^{{{2 * e}}}" if 2 * e != 2 else "\\pi^2"
        if a.kind == _LSQ:
            return f"L_{{{a.index}}}^{{{2 * e}}}" if 2 * e != 2 else f"L_{{{a.index}}}^2"
        if a.kind == _MOM:
            base = f"m_{{{a.index}}}"
        elif a.kind == _AUX:
            base = "r"
        elif a.kind == _THAT:
            base = f"\\hat t_{{{a.index}}}"
        elif a.kind == _GHAT:
            base = f"\\hat\\gamma_{{{a.index}}}"
        else:
            base = "\\hat\\gamma_1^{-1}"
        return base if e == 1 else f"{base}^{{{e}}}"

    def latex(self) -> str:
        if not self._terms:
            return "0"
        chunks = []
        for m, c in self.sorted_terms():
            sign = "-" if c < 0 else "+"
            mag = -c if c < 0 else c
            atoms = " ".join(self._atom_latex(a, e) for a, e in m)
            if mag.denominator == 1:
                coeff = str(mag.numerator)
            else:
                coeff = f"\\frac{{{mag.numerator}}}{{{mag.denominator}}}"
            if not atoms:
                body = coeff
            elif mag == 1:
                body = atoms
            else:
                body = f"{coeff} {atoms}"
            chunks.append((sign, body))
        first_sign, first_body = chunks[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in chunks[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self) -> str:
        return self.text()

    def __repr__(self) -> str:
        return f"Polynomial({self.text()})"


def integrate_halfsquare(p: Polynomial, upper: Atom) -> Polynomial:
    """Integrate a length variable against its square.

    For a polynomial q with ``int_0^U l q(l^2) dl = 1/2 int_0^{U^2} q(u) du``,
    this computes the right-hand side exactly: ``p`` is read as a polynomial
    in the auxiliary atom u = r, and the result is half the antiderivative
    evaluated at u = ``upper`` (an atom standing for U^2).
    """
    if upper == AUX:
        raise ValueError("upper bound must not be the integration symbol")
    total = Polynomial.zero()
    for m, c in p.items():
        aux_exp = 0
        rest: list[tuple[Atom, int]] = []
        for a, e in m:
            if a == AUX:
                aux_exp = e
            else:
                rest.append((a, e))
        # c * u^j integrates to c * upper^(j+1) / (j+1); the 1/2 is global.
        coeff = Fraction(c, 2 * (aux_exp + 1))
        total = total + Polynomial.monomial(coeff, rest) * Polynomial.of_atom(upper, aux_exp + 1)
    return total


@dataclass(frozen=True)
class GradedSeries:
    """A polynomial truncated by total degree in the moment atoms.

    The grade of a term is its total degree in m_0, m_1, ...; every stored
    term has grade <= grade_cap and ring operations re-truncate.  Operands
    must share the same cap.
    """

    body: Polynomial
    grade_cap: int

    def __post_init__(self):
        if self.grade_cap < 0:
            raise ValueError("grade_cap must be >= 0")
        object.__setattr__(self, "body", _truncate(self.body, self.grade_cap))

    def _check(self, other: "GradedSeries") -> None:
        if self.grade_cap != other.grade_cap:
            raise ValueError(
                f"grade_cap mismatch: {self.grade_cap} != {other.grade_cap}")

    def __add__(self, other: "GradedSeries") -> "GradedSeries":
        self._check(other)
        return GradedSeries(self.body + other.body, self.grade_cap)

    def __sub__(self, other: "GradedSeries") -> "GradedSeries":
        self._check(other)
        return GradedSeries(self.body - other.body, self.grade_cap)

    def __mul__(self, other: "GradedSeries") -> "GradedSeries":
        self._check(other)
        return GradedSeries(self.body * other.body, self.grade_cap)

    def scale(self, c) -> "GradedSeries":
        return GradedSeries(self.body * Fraction(c), self.grade_cap)

    def is_zero(self) -> bool:
        return self.body.is_zero()

    def grade_part(self, g: int) -> Polynomial:
        """The sum of terms of exact grade g."""
        terms = {m: c for m, c in self.body.items()
                 if self.body.moment_grade(m) == g}
        return Polynomial(terms)

    def truncate(self, cap: int) -> "GradedSeries":
        if cap > self.grade_cap:
            raise ValueError("cannot raise grade_cap by truncation")
        return GradedSeries(self.body, cap)


def _truncate(p: Polynomial, cap: int) -> Polynomial:
    kept = {m: c for m, c in p.items() if p.moment_grade(m) <= cap}
    if len(kept) == len(list(p.items())):
        return p
    return Polynomial(kept)


# -- JSON serialization ------------------------------------------------

def poly_to_json_terms(p: Polynomial,
                       n_lengths: int | None = None,
                       n_moments: int | None = None,
                       with_grade: bool = False) -> list[dict]:
    """Canonically ordered JSON term list.

    Each term is ``{"coeff": "p/q", "pi2": a, "L": [b1..bn], "m": [c0..cK]}``;
    the L exponents refer to the squared-length atoms.  When the auxiliary
    variable is present an ``"r"`` key is added, and ``with_grade`` adds the
    moment grade of the term.
    """
    max_l = 0
    max_m = -1
    has_aux = False
    for m, _ in p.items():
        for a, _e in m:
            if a.kind == _LSQ:
                max_l = max(max_l, a.index)
            elif a.kind == _MOM:
                max_m = max(max_m, a.index)
            elif a.kind == _AUX:
                has_aux = True
    nl = max_l if n_lengths is None else n_lengths
    nm = (max_m + 1) if n_moments is None else n_moments

    out = []
    for mono, c in p.sorted_terms():
        exps = {a: e for a, e in mono}
        term = {
            "coeff": f"{c.numerator}/{c.denominator}" if c.denominator != 1 else str(c.numerator),
            "pi2": exps.get(PI2, 0),
            "L": [exps.get(lsq(i), 0) for i in range(1, nl + 1)],
            "m": [exps.get(mom(k), 0) for k in range(nm)],
        }
        if has_aux:
            term["r"] = exps.get(AUX, 0)
        if with_grade:
            term["grade"] = p.moment_grade(mono)
        out.append(term)
    return out


def poly_from_json_terms(terms: list[dict]) -> Polynomial:
    """Inverse of :func:`poly_to_json_terms`."""
    total = Polynomial.zero()
    for t in terms:
        pairs: list[tuple[Atom, int]] = []
        if t.get("pi2"):
            pairs.append((PI2, t["pi2"]))
        for i, e in enumerate(t.get("L", []), start=1):
            if e:
                pairs.append((lsq(i), e))
        for k, e in enumerate(t.get("m", [])):
            if e:
                pairs.append((mom(k), e))
        if t.get("r"):
            pairs.append((AUX, t["r"]))
        total = total + Polynomial.monomial(Fraction(t["coeff"]), pairs)
    return total


def factorial(n: int) -> int:
    return math.factorial(n)
