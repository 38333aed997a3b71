"""Structure of (Z/m)^x, its subgroups and quotients.

Subgroups are given by descriptors (trivial, {-1}, k-th powers,
-1 times k-th powers, generated sets, products); membership and orders
are computed two ways: a structured path through the cyclic
decomposition of (Z/m)^x, and a brute-force enumeration used both as a
fallback (for generated/product descriptors) and as an oracle in the
cross-check tests.

Quotient classes are canonicalised by the smallest nonnegative coset
representative, so equality and serialisation are deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

ENUMERATION_GUARD = 10 ** 7


class TooLarge(Exception):
    """The unit group is too large to enumerate under the guard."""


class NotAUnit(Exception):
    """gcd(r, m) != 1."""


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation by trial division (desk-scale moduli)."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@lru_cache(maxsize=None)
def unit_group_order(m: int) -> int:
    """|(Z/m)^x| (Euler totient; 1 for m = 1)."""
    if m < 1:
        raise ValueError("modulus must be positive")
    phi = 1
    for p, k in factorize(m).items():
        phi *= (p - 1) * p ** (k - 1)
    return phi


def carmichael(m: int) -> int:
    """Exponent of (Z/m)^x."""
    if m == 1:
        return 1
    lam = 1
    for p, k in factorize(m).items():
        if p == 2:
            c = 1 if k == 1 else 2 if k == 2 else 2 ** (k - 2)
        else:
            c = (p - 1) * p ** (k - 1)
        lam = lam * c // math.gcd(lam, c)
    return lam


def cyclic_factors(m: int) -> list[int]:
    """Orders of cyclic factors of (Z/m)^x via CRT.

    Odd prime powers contribute one cyclic factor phi(p^k); the 2-part
    contributes nothing for 2, Z/2 for 4, and Z/2 x Z/2^{k-2} for
    2^k with k >= 3 (the order-2 factor generated by -1).
    """
    out: list[int] = []
    for p, k in sorted(factorize(m).items()):
        if p == 2:
            if k == 2:
                out.append(2)
            elif k >= 3:
                out.extend([2, 2 ** (k - 2)])
        else:
            out.append((p - 1) * p ** (k - 1))
    return out


def _minus_one_coordinates(m: int) -> list[tuple[int, int]]:
    """(order, coordinate) pairs locating -1 in the cyclic factors."""
    coords: list[tuple[int, int]] = []
    for p, k in sorted(factorize(m).items()):
        if p == 2:
            if k == 2:
                coords.append((2, 1))
            elif k >= 3:
                # -1 generates the first Z/2 factor
                coords.append((2, 1))
                coords.append((2 ** (k - 2), 0))
        else:
            c = (p - 1) * p ** (k - 1)
            coords.append((c, c // 2))  # the unique element of order 2
    return coords


@dataclass(frozen=True)
class UnitSubgroup:
    """A subgroup of (Z/m)^x given by a descriptor tree.

    descriptor is one of:
      ("trivial",)
      ("minus-one",)
      ("kth-powers", e)
      ("minus-times-kth-powers", e)
      ("generated", (g1, g2, ...))
      ("product", (descriptor, descriptor, ...))
    """

    m: int
    descriptor: tuple

    def __post_init__(self):
        for g in self.generators():
            if math.gcd(g % self.m, self.m) != 1 and self.m > 1:
                raise NotAUnit(f"{g} is not a unit mod {self.m}")

    # -- descriptor helpers -------------------------------------------

    def generators(self) -> list[int]:
        return self._gens(self.descriptor)

    def _gens(self, d: tuple) -> list[int]:
        if d[0] == "generated":
            return [g % self.m for g in d[1]]
        if d[0] == "product":
            return [g for sub in d[1] for g in self._gens(sub)]
        return []

    def describe(self) -> str:
        return _descr_str(self.descriptor)

    # -- enumeration path ---------------------------------------------

    def elements(self) -> frozenset[int]:
        m = self.m
        if m == 1:
            return frozenset({0})
        if unit_group_order(m) > ENUMERATION_GUARD:
            raise TooLarge(f"|(Z/{m})^x| exceeds the enumeration guard")
        return frozenset(self._elements(self.descriptor))

    def _elements(self, d: tuple) -> set[int]:
        m = self.m
        units = _units(m)
        kind = d[0]
        if kind == "trivial":
            return {1 % m}
        if kind == "minus-one":
            return {1 % m, (-1) % m}
        if kind == "kth-powers":
            e = d[1] % carmichael(m)
            return {pow(u, e if e else carmichael(m), m) for u in units}
        if kind == "minus-times-kth-powers":
            sq = self._elements(("kth-powers", d[1]))
            return sq | {(-s) % m for s in sq}
        if kind == "generated":
            return _closure(m, [g % m for g in d[1]])
        if kind == "product":
            gens: set[int] = set()
            for sub in d[1]:
                gens |= self._elements(sub)
            return _closure(m, sorted(gens))
        raise ValueError(f"unknown descriptor {d!r}")

    # -- structured path ----------------------------------------------

    def order_structured(self) -> int | None:
        """Subgroup order via the cyclic decomposition, or None when the
        descriptor needs enumeration (generated/product)."""
        m, d = self.m, self.descriptor
        if m == 1:
            return 1
        kind = d[0]
        factors = cyclic_factors(m)
        if kind == "trivial":
            return 1
        if kind == "minus-one":
            return 1 if (-1) % m == 1 % m else 2
        if kind in ("kth-powers", "minus-times-kth-powers"):
            e = d[1]
            order = 1
            for c in factors:
                order *= c // math.gcd(c, e)
            if kind == "kth-powers":
                return order
            # does -1 already lie in the k-th powers?
            inside = all(coord % math.gcd(e, c) == 0
                         for c, coord in _minus_one_coordinates(m))
            return order if inside else 2 * order

        return None

    def order(self) -> int:
        structured = self.order_structured()
        if structured is not None:
            return structured
        return len(self.elements())

    def contains(self, r: int) -> bool:
        r %= self.m
        if self.m == 1:
            return True
        if math.gcd(r, self.m) != 1:
            raise NotAUnit(f"{r} is not a unit mod {self.m}")
        return r in self.elements()


def _descr_str(d: tuple) -> str:
    kind = d[0]
    if kind in ("trivial", "minus-one"):
        return kind
    if kind == "kth-powers":
        return f"powers^{d[1]}"
    if kind == "minus-times-kth-powers":
        return f"-1*powers^{d[1]}"
    if kind == "generated":
        return "gen(" + ",".join(map(str, d[1])) + ")"
    if kind == "product":
        return "*".join(_descr_str(s) for s in d[1])
    raise ValueError(kind)


def trivial_subgroup(m: int) -> UnitSubgroup:
    return UnitSubgroup(m, ("trivial",))


def minus_one(m: int) -> UnitSubgroup:
    return UnitSubgroup(m, ("minus-one",))


def kth_powers(m: int, e: int) -> UnitSubgroup:
    return UnitSubgroup(m, ("kth-powers", e))


def minus_times_kth_powers(m: int, e: int) -> UnitSubgroup:
    return UnitSubgroup(m, ("minus-times-kth-powers", e))


def generated(m: int, gens) -> UnitSubgroup:
    return UnitSubgroup(m, ("generated", tuple(g % m for g in gens)))


def product(*subs: UnitSubgroup) -> UnitSubgroup:
    ms = {s.m for s in subs}
    if len(ms) != 1:
        raise ValueError("subgroups live in different unit groups")
    return UnitSubgroup(ms.pop(), ("product", tuple(s.descriptor for s in subs)))


@lru_cache(maxsize=256)
def _units(m: int) -> tuple[int, ...]:
    if m == 1:
        return (0,)
    if unit_group_order(m) > ENUMERATION_GUARD:
        raise TooLarge(f"|(Z/{m})^x| exceeds the enumeration guard")
    return tuple(u for u in range(1, m) if math.gcd(u, m) == 1)


def units_mod(m: int) -> tuple[int, ...]:
    """All units modulo m in increasing order."""
    return _units(m)


def _closure(m: int, gens: list[int]) -> set[int]:
    seen = {1 % m}
    frontier = [1 % m]
    invs = [pow(g, -1, m) for g in gens]
    while frontier:
        nxt = []
        for u in frontier:
            for g in list(gens) + invs:
                v = u * g % m
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
    return seen


def subgroup_elements(H: UnitSubgroup) -> frozenset[int]:
    return H.elements()


def coset_representatives(m: int, H: UnitSubgroup) -> list[int]:
    """Smallest nonnegative representative of each coset, sorted."""
    if m == 1:
        return [0]
    elems = H.elements()
    seen: set[int] = set()
    reps: list[int] = []
    for u in _units(m):
        if u in seen:
            continue
        reps.append(u)
        seen.update(u * h % m for h in elems)
    return reps


def quotient_order(m: int, H: UnitSubgroup) -> int:
    order = unit_group_order(m)
    h = H.order() if H.order_structured() is not None else len(H.elements())
    if order % h:
        raise ArithmeticError("subgroup order does not divide group order")
    return order // h


@dataclass(frozen=True)
class UnitClass:
    """A coset of `ambient` in (Z/m)^x, canonicalised on construction."""

    m: int
    rep: int
    ambient: UnitSubgroup

    @staticmethod
    def of(m: int, r: int, ambient: UnitSubgroup) -> "UnitClass":
        if m == 1:
            return UnitClass(1, 0, ambient)
        r %= m
        if math.gcd(r, m) != 1:
            raise NotAUnit(f"{r} is not a unit mod {m}")
        rep = min(r * h % m for h in ambient.elements())
        return UnitClass(m, rep, ambient)

    def __mul__(self, other: "UnitClass") -> "UnitClass":
        if (self.m, self.ambient) != (other.m, other.ambient):
            raise ValueError("classes live in different quotients")
        return UnitClass.of(self.m, self.rep * other.rep, self.ambient)

    def is_identity(self) -> bool:
        return self.rep == 1 % self.m or self.m == 1

    def to_obj(self) -> dict:
        return {"m": self.m, "rep": self.rep, "subgroup": self.ambient.describe()}


def class_of(m: int, r: int, H: UnitSubgroup) -> UnitClass:
    return UnitClass.of(m, r, H)
