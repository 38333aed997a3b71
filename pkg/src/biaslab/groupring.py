"""Exact arithmetic in ZG for G = (optional Q8) x (finite abelian).

Group elements are tuples: when the Q8 factor is present the first
component is an index into the fixed list {1, x, x^2, x^3, y, xy,
x^2 y, x^3 y}, followed by the exponent vector of the abelian part.
Group ring elements are sparse integer-coefficient dictionaries over
that element set, and ZG-matrices act on row vectors from the right.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product as iproduct

from .intlin import IntMatrix


class GroupMismatch(Exception):
    """Operands live over different groups."""


# Names for printing/parsing: Q8 generators then abelian generators.
_ABELIAN_NAMES = "abcdefgh"


@dataclass(frozen=True)
class FiniteGroupModel:
    """(Q8 if q8 else 1) x Z/m1 x ... x Z/mk."""

    q8: bool
    orders: tuple[int, ...]

    def __post_init__(self):
        if any(m < 2 for m in self.orders):
            raise ValueError("abelian factor orders must be >= 2")
        if len(self.orders) > len(_ABELIAN_NAMES):
            raise ValueError("too many abelian factors")

    @property
    def order(self) -> int:
        n = 8 if self.q8 else 1
        for m in self.orders:
            n *= m
        return n

    def identity(self) -> tuple:
        return ((0,) if self.q8 else ()) + (0,) * len(self.orders)

    def elements(self) -> list[tuple]:
        """All elements, Q8 index major, then lexicographic exponents."""
        q8_part = range(8) if self.q8 else (None,)
        out = []
        for q in q8_part:
            for exps in iproduct(*(range(m) for m in self.orders)):
                out.append(((q,) + exps) if self.q8 else exps)
        return out

    def _split(self, g: tuple) -> tuple[int | None, tuple]:
        if self.q8:
            return g[0], g[1:]
        return None, g

    def mul(self, g: tuple, h: tuple) -> tuple:
        qa, ea = self._split(g)
        qb, eb = self._split(h)
        exps = tuple((x + y) % m for x, y, m in zip(ea, eb, self.orders))
        if not self.q8:
            return exps
        return (_q8_mul(qa, qb),) + exps

    def inv(self, g: tuple) -> tuple:
        qa, ea = self._split(g)
        exps = tuple((-x) % m for x, m in zip(ea, self.orders))
        if not self.q8:
            return exps
        return (_q8_inv(qa),) + exps

    def generators(self) -> list[tuple]:
        """Generators in name order: x, y (if Q8), then a, b, c, ..."""
        gens = []
        ident = self.identity()
        if self.q8:
            gens.append((1,) + ident[1:])   # x
            gens.append((4,) + ident[1:])   # y
        for i in range(len(self.orders)):
            e = list(ident)
            e[(1 if self.q8 else 0) + i] = 1
            gens.append(tuple(e))
        return gens

    def generator_names(self) -> list[str]:
        names = ["x", "y"] if self.q8 else []
        names += list(_ABELIAN_NAMES[: len(self.orders)])
        return names


def _q8_mul(i: int, j: int) -> int:
    """Product in Q8 with elements indexed a + 4e for x^a y^e."""
    a, e = i % 4, i // 4
    b, f = j % 4, j // 4
    if e == 0:
        return (a + b) % 4 + 4 * f
    # y x^b = x^{-b} y, and y^2 = x^2.
    if f == 0:
        return (a - b) % 4 + 4
    return (a - b + 2) % 4


def _q8_inv(i: int) -> int:
    a, e = i % 4, i // 4
    return (-a) % 4 if e == 0 else (a + 2) % 4 + 4


class GroupRingElement:
    """Sparse element of ZG."""

    __slots__ = ("group", "terms")

    def __init__(self, group: FiniteGroupModel, terms: dict | None = None):
        self.group = group
        self.terms = {g: c for g, c in (terms or {}).items() if c != 0}

    @classmethod
    def zero(cls, group: FiniteGroupModel) -> "GroupRingElement":
        return cls(group)

    @classmethod
    def one(cls, group: FiniteGroupModel) -> "GroupRingElement":
        return cls(group, {group.identity(): 1})

    @classmethod
    def of(cls, group: FiniteGroupModel, g: tuple,
           coeff: int = 1) -> "GroupRingElement":
        return cls(group, {g: coeff})

    @classmethod
    def integer(cls, group: FiniteGroupModel, n: int) -> "GroupRingElement":
        return cls(group, {group.identity(): n})

    def _check(self, other: "GroupRingElement"):
        if self.group != other.group:
            raise GroupMismatch("elements over different groups")

    def __eq__(self, other) -> bool:
        return (isinstance(other, GroupRingElement)
                and self.group == other.group and self.terms == other.terms)

    def __hash__(self):
        return hash((self.group, tuple(sorted(self.terms.items()))))

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        self._check(other)
        terms = dict(self.terms)
        for g, c in other.terms.items():
            terms[g] = terms.get(g, 0) + c
        return GroupRingElement(self.group, terms)

    def __neg__(self) -> "GroupRingElement":
        return GroupRingElement(self.group,
                                {g: -c for g, c in self.terms.items()})

    def __sub__(self, other: "GroupRingElement") -> "GroupRingElement":
        return self + (-other)

    def __mul__(self, other: "GroupRingElement") -> "GroupRingElement":
        self._check(other)
        grp = self.group
        terms: dict = {}
        for g, c in self.terms.items():
            for h, d in other.terms.items():
                k = grp.mul(g, h)
                terms[k] = terms.get(k, 0) + c * d
        return GroupRingElement(grp, terms)

    def scale(self, n: int) -> "GroupRingElement":
        return GroupRingElement(self.group,
                                {g: n * c for g, c in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        return f"GRE({format_element(self)})"


def multiply(a: GroupRingElement, b: GroupRingElement) -> GroupRingElement:
    return a * b


def involute(a: GroupRingElement) -> GroupRingElement:
    """Transport coefficients along g -> g^{-1}."""
    grp = a.group
    terms: dict = {}
    for g, c in a.terms.items():
        k = grp.inv(g)
        terms[k] = terms.get(k, 0) + c
    return GroupRingElement(grp, terms)


def augment(a: GroupRingElement) -> int:
    """Sum of coefficients."""
    return sum(a.terms.values())


def sigma(u: GroupRingElement, m: int) -> GroupRingElement:
    """The geometric sum 1 + u + ... + u^{m-1}."""
    if m < 1:
        raise ValueError("need m >= 1")
    acc = GroupRingElement.one(u.group)
    power = GroupRingElement.one(u.group)
    for _ in range(m - 1):
        power = power * u
        acc = acc + power
    return acc


def norm_element(group: FiniteGroupModel) -> GroupRingElement:
    """N = sum of all group elements."""
    return GroupRingElement(group, {g: 1 for g in group.elements()})


class ZGMatrix:
    """Matrix over ZG acting on row vectors from the right."""

    __slots__ = ("group", "rows", "cols", "data")

    def __init__(self, group: FiniteGroupModel, rows: int, cols: int,
                 data: list[list[GroupRingElement]] | None = None):
        self.group = group
        self.rows = rows
        self.cols = cols
        if data is None:
            z = GroupRingElement.zero(group)
            data = [[z for _ in range(cols)] for _ in range(rows)]
        if len(data) != rows or any(len(r) != cols for r in data):
            raise ValueError("dimension mismatch")
        self.data = data

    @classmethod
    def from_rows(cls, group: FiniteGroupModel,
                  rows: list[list[GroupRingElement]]) -> "ZGMatrix":
        return cls(group, len(rows), len(rows[0]) if rows else 0, rows)

    @classmethod
    def identity(cls, group: FiniteGroupModel, n: int) -> "ZGMatrix":
        one = GroupRingElement.one(group)
        zero = GroupRingElement.zero(group)
        return cls(group, n, n,
                   [[one if i == j else zero for j in range(n)]
                    for i in range(n)])

    @classmethod
    def diagonal(cls, group: FiniteGroupModel,
                 entries: list[GroupRingElement]) -> "ZGMatrix":
        n = len(entries)
        zero = GroupRingElement.zero(group)
        return cls(group, n, n,
                   [[entries[i] if i == j else zero for j in range(n)]
                    for i in range(n)])

    def __eq__(self, other) -> bool:
        return (isinstance(other, ZGMatrix) and self.group == other.group
                and self.rows == other.rows and self.cols == other.cols
                and self.data == other.data)

    def __mul__(self, other: "ZGMatrix") -> "ZGMatrix":
        if self.group != other.group:
            raise GroupMismatch("matrices over different groups")
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        zero = GroupRingElement.zero(self.group)
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = zero
                for k in range(self.cols):
                    if not self.data[i][k].is_zero():
                        acc = acc + self.data[i][k] * other.data[k][j]
                row.append(acc)
            out.append(row)
        return ZGMatrix(self.group, self.rows, other.cols, out)

    def __add__(self, other: "ZGMatrix") -> "ZGMatrix":
        if (self.group != other.group or self.rows != other.rows
                or self.cols != other.cols):
            raise ValueError("dimension mismatch")
        return ZGMatrix(self.group, self.rows, self.cols,
                        [[self.data[i][j] + other.data[i][j]
                          for j in range(self.cols)]
                         for i in range(self.rows)])

    def __sub__(self, other: "ZGMatrix") -> "ZGMatrix":
        return self + ZGMatrix(other.group, other.rows, other.cols,
                               [[-e for e in row] for row in other.data])

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.data for e in row)

    def transpose_involute(self) -> "ZGMatrix":
        """The dual matrix M* with (M*)_{ij} = involute(M_{ji})."""
        return ZGMatrix(self.group, self.cols, self.rows,
                        [[involute(self.data[j][i]) for j in range(self.rows)]
                         for i in range(self.cols)])

    def augmentation(self) -> IntMatrix:
        """Entrywise augmentation, as an integer matrix."""
        if self.rows == 0 or self.cols == 0:
            return IntMatrix.zero(self.rows, self.cols)
        return IntMatrix.from_rows(
            [[augment(e) for e in row] for row in self.data])

    def __repr__(self):
        body = "; ".join(", ".join(format_element(e) for e in row)
                         for row in self.data)
        return f"ZGMatrix[{body}]"


def z_expand(M: ZGMatrix) -> IntMatrix:
    """Integer matrix of the induced Z-linear map in the element basis.

    Block (i, j) has entry at (gi, gj) equal to the coefficient of the
    gj-th group element in (gi-th element) * M_{ij}, so that flattened
    row vectors satisfy flatten(u * M) = flatten(u) * z_expand(M).
    """
    grp = M.group
    elems = grp.elements()
    n = len(elems)
    index = {g: k for k, g in enumerate(elems)}
    rows = [[0] * (M.cols * n) for _ in range(M.rows * n)]
    for i in range(M.rows):
        for j in range(M.cols):
            entry = M.data[i][j]
            if entry.is_zero():
                continue
            for gi, g in enumerate(elems):
                base_r = i * n + gi
                for h, c in entry.terms.items():
                    rows[base_r][j * n + index[grp.mul(g, h)]] += c
    if not rows:
        return IntMatrix.zero(0, M.cols * n)
    return IntMatrix(M.rows * n, M.cols * n, rows)


# -- Textual element format: `3*x^2*a^4*c^1 - 1` ------------------------

_TERM_RE = re.compile(r"\s*([+-])?\s*([^+-]+)")
_FACTOR_RE = re.compile(r"([a-z])(?:\^(-?\d+))?$")


def format_element(a: GroupRingElement) -> str:
    """Canonical text form, terms in element-enumeration order."""
    if not a.terms:
        return "0"
    grp = a.group
    names = grp.generator_names()
    pieces = []
    order_key = {g: k for k, g in enumerate(grp.elements())}
    for g in sorted(a.terms, key=order_key.__getitem__):
        c = a.terms[g]
        mono = []
        if grp.q8:
            q, exps = g[0], g[1:]
            xa, ye = q % 4, q // 4
            if xa:
                mono.append(f"x^{xa}")
            if ye:
                mono.append("y^1")
            gen_names = names[2:]
        else:
            exps = g
            gen_names = names
        for nm, e in zip(gen_names, exps):
            if e:
                mono.append(f"{nm}^{e}")
        if not mono:
            body = str(abs(c))
        else:
            body = "*".join(mono)
            if abs(c) != 1:
                body = f"{abs(c)}*{body}"
        sign = "-" if c < 0 else "+"
        pieces.append((sign, body))
    first_sign, first_body = pieces[0]
    out = (("-" if first_sign == "-" else "") + first_body)
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


def parse_element(group: FiniteGroupModel, text: str) -> GroupRingElement:
    """Parse the canonical text form (whitespace-tolerant)."""
    text = text.strip()
    if text == "0":
        return GroupRingElement.zero(group)
    names = group.generator_names()
    gens = dict(zip(names, group.generators()))
    acc = GroupRingElement.zero(group)
    pos = 0
    for m in _TERM_RE.finditer(text):
        if m.start() != pos:
            raise ValueError(f"cannot parse element: {text!r}")
        pos = m.end()
        sign = -1 if m.group(1) == "-" else 1
        coeff = sign
        g = group.identity()
        for factor in m.group(2).strip().split("*"):
            factor = factor.strip()
            if not factor:
                raise ValueError(f"cannot parse element: {text!r}")
            if factor.lstrip("-").isdigit():
                coeff *= int(factor)
                continue
            fm = _FACTOR_RE.match(factor)
            if not fm or fm.group(1) not in gens:
                raise ValueError(f"unknown factor {factor!r}")
            e = int(fm.group(2)) if fm.group(2) else 1
            base = gens[fm.group(1)]
            step = base if e >= 0 else group.inv(base)
            for _ in range(abs(e)):
                g = group.mul(g, step)
        acc = acc + GroupRingElement.of(group, g, coeff)
    if pos != len(text):
        raise ValueError(f"cannot parse element: {text!r}")
    return acc
