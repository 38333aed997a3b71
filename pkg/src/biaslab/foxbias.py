"""Presentations, Fox calculus, chain maps and the bias invariant.

A presentation of a finite group G gives a 2-complex of free
ZG-modules whose degree-2 boundary is the matrix of Fox derivatives.
Chain maps between such complexes (verified or solved for) induce maps
on the kernel of the augmented top boundary, and the determinant class
of that induced map in (Z/m)^x / {+-1} is the bias invariant.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property

from .intlin import IntMatrix, LeftSolver, det, left_kernel_basis
from .groupring import (FiniteGroupModel, GroupRingElement, ZGMatrix,
                        sigma, augment)
from .units import NotAUnit, TooLarge, UnitClass, UnitSubgroup, class_of, \
    generated, minus_one, product

from math import gcd

# A word is a sequence of (generator index, nonzero exponent) letters.
Word = tuple[tuple[int, int], ...]

SOLVER_GUARD = 4000


class ChainMapFailure(Exception):
    """A candidate chain map fails a commuting square; carries a witness."""

    def __init__(self, degree: int, row: int, col: int,
                 discrepancy: GroupRingElement):
        self.degree = degree
        self.row = row
        self.col = col
        self.discrepancy = discrepancy
        super().__init__(f"square fails in degree {degree} "
                         f"at entry ({row},{col})")


class NoLift(Exception):
    """No chain map lift exists (degree-1 exactness or same-group fails)."""


class BasisError(Exception):
    """A map does not carry the degree-n kernel into the target kernel."""


class NotAnAutomorphism(Exception):
    """Generator images do not define a bijective endomorphism."""


def word_inverse(w: Word) -> Word:
    return tuple((g, -e) for g, e in reversed(w))


def commutator(u: Word, v: Word) -> Word:
    return tuple(u) + tuple(v) + word_inverse(u) + word_inverse(v)


def power_word(gen: int, e: int) -> Word:
    return ((gen, e),) if e else ()


def image_of_word(group: FiniteGroupModel, images: list[tuple],
                  w: Word) -> tuple:
    g = group.identity()
    for idx, e in w:
        step = images[idx] if e > 0 else group.inv(images[idx])
        for _ in range(abs(e)):
            g = group.mul(g, step)
    return g


@dataclass(frozen=True)
class Presentation:
    """Generators, relators, and their images in a finite group model."""

    generator_names: tuple[str, ...]
    relators: tuple[Word, ...]
    group: FiniteGroupModel
    images: tuple[tuple, ...]

    def __post_init__(self):
        if len(self.generator_names) != len(self.images):
            raise ValueError("one image per generator required")
        for r in self.relators:
            for idx, e in r:
                if not (0 <= idx < len(self.images)) or e == 0:
                    raise ValueError("bad letter in relator")
            if image_of_word(self.group, list(self.images), r) \
                    != self.group.identity():
                raise ValueError("relator does not vanish in the group")
        if len(_closure(self.group, self.images)) != self.group.order:
            raise ValueError("generator images do not generate the group")


def _closure(group: FiniteGroupModel, seeds) -> set:
    gens = [s for s in seeds] + [group.inv(s) for s in seeds]
    seen = {group.identity()}
    frontier = [group.identity()]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = group.mul(g, s)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return seen


def fox_derivative(P: Presentation, relator: Word, j: int) -> GroupRingElement:
    """The free derivative of the relator by the j-th generator,
    evaluated in ZG through the generator images."""
    group = P.group
    images = list(P.images)
    acc = GroupRingElement.zero(group)
    prefix = group.identity()
    for idx, e in relator:
        img = images[idx]
        if idx == j:
            if e > 0:
                part = sigma(GroupRingElement.of(group, img), e)
            else:
                k = -e
                inv_k = group.identity()
                for _ in range(k):
                    inv_k = group.mul(inv_k, group.inv(img))
                part = (GroupRingElement.of(group, inv_k, -1)
                        * sigma(GroupRingElement.of(group, img), k))
            acc = acc + GroupRingElement.of(group, prefix) * part
        step = img if e > 0 else group.inv(img)
        for _ in range(abs(e)):
            prefix = group.mul(prefix, step)
    return acc


@dataclass(frozen=True)
class AlgebraicComplex:
    """Chain complex of free ZG-modules, boundaries acting on row vectors.

    boundaries[i] is the map from degree i+1 to degree i, shaped
    (rank_{i+1} x rank_i).
    """

    group: FiniteGroupModel
    boundaries: tuple[ZGMatrix, ...]

    def __post_init__(self):
        for a, b in zip(self.boundaries, self.boundaries[1:]):
            if (b * a).is_zero() is False:
                raise ValueError("boundary composite is nonzero")
        if not self.boundaries[0].augmentation().is_zero():
            raise ValueError("degree-1 boundary does not augment to zero")

    @property
    def n(self) -> int:
        return len(self.boundaries)

    def rank(self, i: int) -> int:
        if i == 0:
            return self.boundaries[0].cols
        return self.boundaries[i - 1].rows

    @property
    def chi(self) -> int:
        return sum((-1) ** i * self.rank(i) for i in range(self.n + 1))

    @property
    def epsilon(self) -> int:
        return (-1) ** self.n

    @cached_property
    def top_kernel_basis(self) -> IntMatrix:
        """Rows spanning ker of the augmented top boundary (H_n(Z (x) C))."""
        return left_kernel_basis(self.boundaries[-1].augmentation())


def complex_of_presentation(P: Presentation) -> AlgebraicComplex:
    group = P.group
    one = GroupRingElement.one(group)
    d1 = ZGMatrix.from_rows(group, [[GroupRingElement.of(group, img) - one]
                                    for img in P.images])
    d2 = ZGMatrix.from_rows(group, [
        [fox_derivative(P, r, j) for j in range(len(P.images))]
        for r in P.relators])
    if not (d2 * d1).is_zero():
        raise AssertionError("Fox matrix does not compose to zero")
    return AlgebraicComplex(group, (d1, d2))


@dataclass(frozen=True)
class ChainMap:
    source: AlgebraicComplex
    target: AlgebraicComplex
    mats: tuple[ZGMatrix, ...]  # degree 0 .. n


def verify_chain_map(mats, C: AlgebraicComplex,
                     Cp: AlgebraicComplex) -> ChainMap:
    """Check the commuting squares exactly; raise with a witness entry."""
    mats = tuple(mats)
    if len(mats) != C.n + 1 or C.group != Cp.group:
        raise ValueError("need one matrix per degree over one group")
    for i in range(C.n + 1):
        if mats[i].rows != C.rank(i) or mats[i].cols != Cp.rank(i):
            raise ValueError(f"degree-{i} shape mismatch")
    for i in range(1, C.n + 1):
        lhs = mats[i] * Cp.boundaries[i - 1]
        rhs = C.boundaries[i - 1] * mats[i - 1]
        diff = lhs - rhs
        for r in range(diff.rows):
            for c in range(diff.cols):
                if not diff.data[r][c].is_zero():
                    raise ChainMapFailure(i, r, c, diff.data[r][c])
    if C.rank(0) != 1 or augment(mats[0].data[0][0]) != 1:
        raise ChainMapFailure(0, 0, 0, mats[0].data[0][0])
    return ChainMap(C, Cp, mats)


_solver_cache: dict = {}


def _cached_solver(M: IntMatrix) -> LeftSolver:
    key = id(M)
    if key not in _solver_cache:
        _solver_cache[key] = LeftSolver(M)
    return _solver_cache[key]


def lift_chain_map(C: AlgebraicComplex, Cp: AlgebraicComplex) -> ChainMap:
    """Solve for a chain map C -> Cp with identity below the top degree.

    Requires equal degree-1 boundaries (same generator images); the
    top-degree matrix is found row by row over the integers via the
    Z-expanded linear system.
    """
    from .groupring import z_expand

    if C.group != Cp.group:
        raise NoLift("different groups")
    if C.boundaries[:-1] != Cp.boundaries[:-1]:
        raise NoLift("lower boundaries differ; identity lift unavailable")
    n = C.n
    order = C.group.order
    if order * max(C.rank(n), C.rank(n - 1)) > SOLVER_GUARD:
        raise TooLarge("lift system exceeds the solver guard")
    target_top = Cp.boundaries[-1]
    solver = _cached_solver(z_expand(target_top))
    elems = C.group.elements()
    index = {g: k for k, g in enumerate(elems)}
    top_rows = []
    for i in range(C.rank(n)):
        b = [0] * (C.rank(n - 1) * order)
        for j in range(C.rank(n - 1)):
            for g, coeff in C.boundaries[-1].data[i][j].terms.items():
                b[j * order + index[g]] = coeff
        x = solver.solve(b)
        if x is None:
            raise NoLift(f"row {i} of the top boundary is not in the "
                         "target row space")
        row = []
        for j in range(Cp.rank(n)):
            chunk = x[j * order:(j + 1) * order]
            row.append(GroupRingElement(
                C.group, {elems[k]: c for k, c in enumerate(chunk) if c}))
        top_rows.append(row)
    mats = [ZGMatrix.identity(C.group, C.rank(i)) for i in range(n)]
    mats.append(ZGMatrix.from_rows(C.group, top_rows))
    return verify_chain_map(mats, C, Cp)


def induced_kernel_map(f: ChainMap,
                       basis: IntMatrix | None = None,
                       basis_target: IntMatrix | None = None) -> IntMatrix:
    """Matrix of H_n(Z (x) f) in kernel bases (rows act from the left)."""
    C, Cp = f.source, f.target
    K = basis if basis is not None else C.top_kernel_basis
    Kp = basis_target if basis_target is not None else Cp.top_kernel_basis
    if K.rows != Kp.rows:
        raise BasisError("kernel ranks differ")
    eps_f = f.mats[-1].augmentation()
    moved = K * eps_f
    solver = LeftSolver(Kp)
    rows = []
    for i in range(moved.rows):
        x = solver.solve(moved.row(i))
        if x is None:
            raise BasisError("image leaves the target kernel lattice")
        rows.append(x)
    if not rows:
        return IntMatrix.zero(0, 0)
    return IntMatrix.from_rows(rows)


def polarised_bias(f: ChainMap, m: int,
                   basis: IntMatrix | None = None,
                   basis_target: IntMatrix | None = None) -> UnitClass:
    """Determinant class mod m of the induced kernel map, up to sign."""
    if f.source.chi != f.target.chi:
        raise ValueError("complexes have different Euler characteristics")
    X = induced_kernel_map(f, basis, basis_target)
    d = det(X) % m if m > 1 else 0
    if m > 1 and gcd(d, m) != 1:
        raise NotAUnit(f"induced determinant {d} is not a unit mod {m}")
    return class_of(m, d if m > 1 else 0, minus_one(m))


class Automorphism:
    """A bijective endomorphism given by images of the model generators.

    Multiplicativity is proven by checking phi(g*s) = phi(g)*phi(s) for
    every element g and generator s; bijectivity by image counting.
    """

    def __init__(self, group: FiniteGroupModel, gen_images: list[tuple]):
        self.group = group
        self.gen_images = list(gen_images)
        gens = group.generators()
        if len(gen_images) != len(gens):
            raise NotAnAutomorphism("one image per model generator required")
        table = {group.identity(): group.identity()}
        frontier = [group.identity()]
        pairs = list(zip(gens, self.gen_images))
        pairs += [(group.inv(g), group.inv(im)) for g, im in pairs]
        while frontier:
            nxt = []
            for g in frontier:
                for s, im in pairs:
                    h = group.mul(g, s)
                    val = group.mul(table[g], im)
                    if h in table:
                        if table[h] != val:
                            raise NotAnAutomorphism("images are inconsistent "
                                                    "with the relations")
                    else:
                        table[h] = val
                        nxt.append(h)
            frontier = nxt
        # Consistency above checks every edge g -> g*s, which forces
        # multiplicativity; bijectivity is image counting.
        if len(set(table.values())) != group.order:
            raise NotAnAutomorphism("images are not bijective")
        self.table = table

    def apply(self, g: tuple) -> tuple:
        return self.table[g]

    def inverse(self) -> "Automorphism":
        inv_table = {v: k for k, v in self.table.items()}
        return Automorphism(self.group,
                            [inv_table[g] for g in self.group.generators()])

    def apply_element(self, a: GroupRingElement) -> GroupRingElement:
        terms: dict = {}
        for g, c in a.terms.items():
            k = self.table[g]
            terms[k] = terms.get(k, 0) + c
        return GroupRingElement(self.group, terms)


def aut_twist(C: AlgebraicComplex, theta: Automorphism) -> AlgebraicComplex:
    """Apply the automorphism to every matrix entry's group elements."""
    if theta.group != C.group:
        raise ValueError("automorphism over a different group")
    twisted = tuple(
        ZGMatrix(C.group, b.rows, b.cols,
                 [[theta.apply_element(e) for e in row] for row in b.data])
        for b in C.boundaries)
    return AlgebraicComplex(C.group, twisted)


def compute_D_subgroup(C: AlgebraicComplex, m: int,
                       twists: list[tuple[Automorphism, ChainMap | None]],
                       extra_generators: tuple[int, ...] = ()) -> UnitSubgroup:
    """Subgroup of (Z/m)^x / {+-1} hit by the supplied automorphisms.

    Each entry supplies an automorphism theta and, optionally, a
    verified chain map from the theta^{-1}-twist of C to C; when the
    map is omitted it is solved for.  extra_generators admits
    contributions established outside the solver (documented external
    facts supplied by the caller).  The result is returned as a
    subgroup of (Z/m)^x containing -1.
    """
    reps = list(extra_generators)
    for theta, f in twists:
        if f is None:
            f = lift_chain_map(aut_twist(C, theta.inverse()), C)
        cls = polarised_bias(f, m)
        reps.append(cls.rep)
    return product(minus_one(m), generated(m, tuple(r % m for r in reps)))


# -- The two presentation families --------------------------------------

def preset_abelian(orders: tuple[int, ...], r: int) -> Presentation:
    """The d-generator family over Z/m1 x ... x Z/md with one twisted
    commutator [x1^r, x2]."""
    d = len(orders)
    if d < 2:
        raise ValueError("need at least two factors")
    if gcd(r, orders[0]) != 1:
        raise ValueError("r must be a unit modulo the first order")
    group = FiniteGroupModel(False, tuple(orders))
    names = tuple(group.generator_names())
    relators: list[Word] = [((i, orders[i]),) for i in range(d)]
    relators.append(commutator(power_word(0, r), power_word(1, 1)))
    for i in range(d):
        for j in range(i + 1, d):
            if (i, j) != (0, 1):
                relators.append(commutator(power_word(i, 1),
                                           power_word(j, 1)))
    return Presentation(names, tuple(relators), group,
                        tuple(group.generators()))


def preset_q8p(p: int, r: int) -> Presentation:
    """The three-generator family over Q8 x (Z/p)^3 with the twisted
    [A, C^r] relator; A = xa, B = yb, C = c."""
    if p % 2 == 0 or p < 3:
        raise ValueError("p must be an odd prime")
    if gcd(r, p) != 1:
        raise ValueError("r must be a unit modulo p")
    group = FiniteGroupModel(True, (p, p, p))
    x, y, a, b, c = group.generators()
    A = group.mul(x, a)
    B = group.mul(y, b)
    relators: tuple[Word, ...] = (
        ((0, 2 * p), (1, -2 * p)),
        ((1, 1), (0, 1), (1, -1), (0, 2 * p - 1)),
        ((2, p),),
        commutator(power_word(0, 1), power_word(1, p - 1)),
        commutator(power_word(0, 1), power_word(2, r)),
        commutator(power_word(1, 1), power_word(2, 1)),
    )
    return Presentation(("A", "B", "C"), relators, group, (A, B, c))


def q8p_reference_d2(p: int, r: int) -> ZGMatrix:
    """The hand-simplified degree-2 boundary for the preset_q8p family,
    entry by entry as classically displayed (note the first row's
    second entry uses the A-sum; the mechanical Fox derivative yields
    the B-sum, which agrees after augmentation)."""
    group = FiniteGroupModel(True, (p, p, p))
    x, y, a, b, c = group.generators()
    A = group.mul(x, a)
    B = group.mul(y, b)
    one = GroupRingElement.one(group)
    zero = GroupRingElement.zero(group)

    def el(g, coeff=1):
        return GroupRingElement.of(group, g, coeff)

    def pw(g, e):
        h = group.identity()
        step = g if e >= 0 else group.inv(g)
        for _ in range(abs(e)):
            h = group.mul(h, step)
        return h

    sA = lambda k: sigma(el(A), k)
    sB = lambda k: sigma(el(B), k)
    sC = lambda k: sigma(el(c), k)
    xinv_a = group.mul(group.inv(x), a)
    rows = [
        [sA(2 * p), -sA(2 * p), zero],
        [el(B) + el(xinv_a) * sA(2 * p - 1), one - el(xinv_a), zero],
        [zero, zero, sC(p)],
        [one - el(group.inv(b)), (el(A) - one) * sB(p - 1), zero],
        [one - el(pw(c, r)), zero, (el(A) - one) * sC(r)],
        [zero, one - el(c), el(B) - one],
    ]
    return ZGMatrix.from_rows(group, rows)


def q8p_f_maps(p: int, r: int,
               C_r: AlgebraicComplex, C_1: AlgebraicComplex) -> ChainMap:
    """The explicit chain map from the r-twisted complex to the
    untwisted one: identity below degree 2, diag(1,1,1,1,S_r(c),1)
    on top."""
    group = C_1.group
    one = GroupRingElement.one(group)
    c = group.generators()[4]
    sr = sigma(GroupRingElement.of(group, c), r)
    f2 = ZGMatrix.diagonal(group, [one, one, one, one, sr, one])
    mats = (ZGMatrix.identity(group, 1), ZGMatrix.identity(group, 3), f2)
    return verify_chain_map(mats, C_r, C_1)


def q8p_g_maps(p: int, r: int, C_1: AlgebraicComplex,
               theta: Automorphism) -> ChainMap:
    """The explicit chain map from the theta-twist of the untwisted
    complex to itself, theta being c -> c^r: g1 = diag(1,1,S_r(c)),
    g2 = diag(1,1,S_r(c),1,S_r(c),S_r(c))."""
    group = C_1.group
    one = GroupRingElement.one(group)
    c = group.generators()[4]
    sr = sigma(GroupRingElement.of(group, c), r)
    g1 = ZGMatrix.diagonal(group, [one, one, sr])
    g2 = ZGMatrix.diagonal(group, [one, one, sr, one, sr, sr])
    mats = (ZGMatrix.identity(group, 1), g1, g2)
    return verify_chain_map(mats, aut_twist(C_1, theta), C_1)


# -- Presentation text format: `<x,y | x^5, [x^2,y]>` -------------------

_PRES_RE = re.compile(r"^\s*<\s*([^|>]*)\|([^>]*)>\s*$")


def parse_word(text: str, name_index: dict[str, int]) -> Word:
    letters: list[tuple[int, int]] = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        ch = text[pos]
        if ch == "*" or ch.isspace():
            pos += 1
            continue
        if ch == "[":
            depth = 1
            k = pos + 1
            comma = None
            while k < len(text) and depth:
                if text[k] == "[":
                    depth += 1
                elif text[k] == "]":
                    depth -= 1
                elif text[k] == "," and depth == 1:
                    comma = k
                k += 1
            if depth or comma is None:
                raise ValueError(f"unbalanced commutator in {text!r}")
            u = parse_word(text[pos + 1:comma], name_index)
            v = parse_word(text[comma + 1:k - 1], name_index)
            letters.extend(commutator(u, v))
            pos = k
            continue
        m = re.match(r"([A-Za-z]\w*)(?:\^(-?\d+))?", text[pos:])
        if not m or m.group(1) not in name_index:
            raise ValueError(f"cannot parse word {text!r} at {pos}")
        e = int(m.group(2)) if m.group(2) else 1
        if e:
            letters.append((name_index[m.group(1)], e))
        pos += m.end()
    return tuple(letters)


def parse_presentation(text: str, group: FiniteGroupModel,
                       images: tuple[tuple, ...]) -> Presentation:
    m = _PRES_RE.match(text)
    if not m:
        raise ValueError("presentation must look like '<gens | relators>'")
    names = tuple(s.strip() for s in m.group(1).split(",") if s.strip())
    name_index = {nm: i for i, nm in enumerate(names)}
    parts = []
    depth = 0
    start = 0
    body = m.group(2)
    for k, ch in enumerate(body):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(body[start:k])
            start = k + 1
    parts.append(body[start:])
    relators = tuple(parse_word(part, name_index)
                     for part in parts if part.strip())
    return Presentation(names, relators, group, images)
