"""Closed-form bias obstruction groups for finite abelian groups.

From an abelian group's homology the relevant numerical invariants
(modulus, rank, minimal Euler characteristic) are read off, and the
obstruction groups are quotients of the unit group of Z/m by the
subgroups supplied here or by the caller.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .grouphom import homology_abelian
from .numfn import e_exact, s_exact
from .units import (UnitSubgroup, carmichael, coset_representatives,
                    kth_powers, minus_one, product, quotient_order,
                    trivial_subgroup)


class HypothesisViolation(Exception):
    """A closed form was requested outside its proven range."""


@dataclass(frozen=True)
class ObstructionInvariants:
    modulus: int
    rank: int
    chi_min: int
    homology: tuple[int, ...]


@dataclass(frozen=True)
class ObstructionGroup:
    modulus: int
    denominator: UnitSubgroup
    order: int
    representatives: tuple[int, ...]


def invariants_abelian(orders: tuple[int, ...], n: int) -> ObstructionInvariants:
    """Modulus, rank and minimal Euler characteristic of (G, n)."""
    if n < 2:
        raise ValueError("need n >= 2")
    h = homology_abelian(orders, n) if orders else ()
    if any(f == 0 for f in h):
        raise ValueError("finite groups have finite positive-degree homology")
    r = len(h)
    m = h[0] if h else 1
    return ObstructionInvariants(m, r, (-1) ** n + r, h)


def _reduced_exponent(e: int, m: int) -> int:
    """Reduce an exponent modulo the exponent of (Z/m)^x, staying >= 1."""
    if m <= 2:
        return 1
    lam = carmichael(m)
    er = e % lam
    return er if er else lam


def D_abelian(orders: tuple[int, ...], n: int) -> UnitSubgroup:
    """The subgroup of e(d,n)-th powers in (Z/m)^x, d = d(G)."""
    inv = invariants_abelian(orders, n)
    d = len(orders)
    if d < 1:
        return trivial_subgroup(1)
    e = e_exact(d, n)
    return kth_powers(inv.modulus, _reduced_exponent(e, inv.modulus))


def _assemble(m: int, denominator: UnitSubgroup) -> ObstructionGroup:
    reps = coset_representatives(m, denominator)
    return ObstructionGroup(m, denominator, len(reps), reps)


def B_group(m: int, D: UnitSubgroup) -> ObstructionGroup:
    """The quotient (Z/m)^x / (±1 . D)."""
    if D.m != m:
        raise ValueError("subgroup modulus mismatch")
    return _assemble(m, product(minus_one(m), D))


def B_Q_group(m: int, d: int, n: int, D: UnitSubgroup) -> ObstructionGroup:
    """The quotient (Z/m)^x / (±1 . squares . D); trivial for odd n.

    The closed form is proven only when H_n(G) is (Z/m)^d with d >= 3,
    so smaller d is refused.
    """
    if D.m != m:
        raise ValueError("subgroup modulus mismatch")
    if n % 2 == 1:
        return _assemble(1, trivial_subgroup(1))
    if d < 3:
        raise HypothesisViolation("closed form requires d >= 3")
    return _assemble(m, product(minus_one(m), kth_powers(m, 2), D))


def gamma(orders: tuple[int, ...], n: int) -> int:
    """|B(G,n)| for abelian G."""
    inv = invariants_abelian(orders, n)
    return B_group(inv.modulus, D_abelian(orders, n)).order


@dataclass
class BoundSweep:
    limit: int
    checked: int
    failures: tuple[tuple[int, int, int], ...]  # (m, order, bound)


def examples_bound_check(limit: int) -> BoundSweep:
    """Test |(Z/m)^x / +-squares| >= 2^(t-1) over square-free m <= limit.

    t is the number of distinct prime factors of m.  Every violation is
    returned as (m, actual order, claimed bound); the sweep records
    facts and draws no conclusions.

    The order is computed structurally (each odd prime factor of a
    square-free m doubles the unsigned square quotient, and the sign
    is absorbed exactly when -1 is a square mod m, i.e. every odd
    prime factor is 1 mod 4); the structured value is cross-checked
    against subgroup enumeration for m <= 400.
    """
    from .units import factorize

    failures = []
    checked = 0
    for m in range(3, limit + 1):
        fac = factorize(m)
        if any(e > 1 for e in fac.values()):
            continue
        checked += 1
        t = len(fac)
        odd_primes = [p for p in fac if p != 2]
        unsigned = 2 ** len(odd_primes)
        minus_is_square = all(p % 4 == 1 for p in odd_primes)
        order = unsigned if minus_is_square else unsigned // 2
        if m <= 400:
            brute = quotient_order(m, product(minus_one(m), kth_powers(m, 2)))
            if brute != order:
                raise AssertionError(f"structured order wrong at m={m}")
        if order < 2 ** (t - 1):
            failures.append((m, order, 2 ** (t - 1)))
    return BoundSweep(limit, checked, tuple(failures))


def gamma_prime(p: int, d: int, n: int) -> int:
    """The gcd-ratio count for non-cyclic abelian p-groups; 1 at p = 2."""
    if d < 2 or n < 2:
        raise ValueError("need d >= 2 and n >= 2")
    if p == 2:
        return 1
    e = e_exact(d, n)
    s = abs(s_exact(d, n))
    half = (p - 1) // 2
    return gcd(e, half) // gcd(gcd(e, s), half)
