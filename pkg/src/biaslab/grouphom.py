"""Integral homology of finite abelian groups (and Q8 x abelian).

Homology groups are represented as tuples of abelian-group factors:
0 stands for a Z summand and m >= 2 for Z/m.  The workhorse is the
Kunneth formula iterated over a direct-product decomposition; results
are normalised to invariant-factor form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, gcd

from .intlin import IntMatrix, cokernel_invariants


def _normalise(factors: list[int]) -> tuple[int, ...]:
    """Invariant-factor chain (plus Z summands) of a factor list."""
    frees = sum(1 for f in factors if f == 0)
    torsion = [f for f in factors if f >= 2]
    if any(f < 0 or f == 1 for f in factors):
        raise ValueError("factors must be 0 (for Z) or >= 2")
    # Merge prime-power multiplicities: the k-th largest power of each
    # prime goes into the k-th invariant factor from the top.
    by_prime: dict[int, list[int]] = {}
    for m in torsion:
        rest = m
        p = 2
        while p * p <= rest:
            if rest % p == 0:
                e = 0
                while rest % p == 0:
                    rest //= p
                    e += 1
                by_prime.setdefault(p, []).append(p ** e)
            p += 1
        if rest > 1:
            by_prime.setdefault(rest, []).append(rest)
    depth = max((len(v) for v in by_prime.values()), default=0)
    invs = []
    for k in range(depth):
        f = 1
        for p, powers in by_prime.items():
            powers.sort(reverse=True)
            if k < len(powers):
                f *= powers[k]
        invs.append(f)
    invs.reverse()
    return tuple([0] * frees + invs)


def _tensor(a: int, b: int) -> list[int]:
    """Factors of A (x) B for cyclic-or-Z factors a, b."""
    if a == 0:
        return [b]
    if b == 0:
        return [a]
    g = gcd(a, b)
    return [g] if g > 1 else []


def _tor(a: int, b: int) -> list[int]:
    """Factors of Tor(A, B); zero when either factor is Z."""
    if a == 0 or b == 0:
        return []
    g = gcd(a, b)
    return [g] if g > 1 else []


def kunneth_step(h_left: list[tuple[int, ...]],
                 h_right: list[tuple[int, ...]],
                 degrees: int) -> list[tuple[int, ...]]:
    """Homology of a product from the homologies of the factors.

    `h_left[i]` and `h_right[j]` are the degree-i and degree-j homology
    factor tuples; missing degrees count as zero.  Returns degrees
    0..degrees-1 of the product.
    """
    def get(table, i):
        return table[i] if 0 <= i < len(table) else ()

    out = []
    for k in range(degrees):
        factors: list[int] = []
        for i in range(k + 1):
            for a in get(h_left, i):
                for b in get(h_right, k - i):
                    factors.extend(_tensor(a, b))
        for i in range(k):
            for a in get(h_left, i):
                for b in get(h_right, k - 1 - i):
                    factors.extend(_tor(a, b))
        out.append(_normalise(factors))
    return out


def homology_cyclic(m: int, n: int) -> tuple[int, ...]:
    """H_n(Z/m; Z): Z in degree 0, Z/m in odd degrees, 0 otherwise."""
    if m < 1 or n < 0:
        raise ValueError("need m >= 1 and n >= 0")
    if n == 0:
        return (0,)
    return (m,) if n % 2 == 1 and m > 1 else ()


def _cyclic_table(m: int, degrees: int) -> list[tuple[int, ...]]:
    return [homology_cyclic(m, i) for i in range(degrees)]


def homology_abelian(orders: tuple[int, ...], n: int) -> tuple[int, ...]:
    """H_n of a direct product of cyclic groups, by iterated Kunneth."""
    if n < 0 or not orders:
        raise ValueError("need a nonempty factor list and n >= 0")
    table = _cyclic_table(orders[0], n + 1)
    for m in orders[1:]:
        table = kunneth_step(table, _cyclic_table(m, n + 1), n + 1)
    return table[n]


def homology_q8(n: int) -> tuple[int, ...]:
    """H_n(Q8; Z), by the standard period-4 resolution.

    H_0 = Z, H_{4k+1} = (Z/2)^2, H_{4k+3} = Z/8, positive even degrees
    vanish.
    """
    if n < 0:
        raise ValueError("need n >= 0")
    if n == 0:
        return (0,)
    if n % 2 == 0:
        return ()
    return (2, 2) if n % 4 == 1 else (8,)


def homology_q8_times_abelian(orders: tuple[int, ...], n: int) -> tuple[int, ...]:
    """H_n(Q8 x (product of cyclic groups); Z) via Kunneth."""
    if n < 0:
        raise ValueError("need n >= 0")
    table = [homology_q8(i) for i in range(n + 1)]
    for m in orders:
        table = kunneth_step(table, _cyclic_table(m, n + 1), n + 1)
    return table[n]


def nu(n: int, k: int) -> int:
    """The alternating binomial sum sum_{j=0}^{n} (-1)^{n+j} C(k+j-1, j)."""
    if n < 0 or k < 0:
        raise ValueError("need n, k >= 0")
    return sum((-1) ** (n + j) * comb(k + j - 1, j) for j in range(n + 1))


@dataclass
class ClosedFormComparison:
    m: int
    d: int
    t: int
    n: int
    kunneth: tuple[int, ...]
    closed_rank: int
    closed_shape: tuple[int, ...]
    agree: bool


def compare_closed_form(m: int, d: int, n: int,
                        t: int = 1) -> ClosedFormComparison:
    """Compare Kunneth H_n of (Z/m)^d x Z/t with the published closed form.

    The closed form predicts rank r = sum_{k=2}^{d} (nu(n,k) - (-1)^n)
    copies of Z/m for even n, with an extra cyclic factor for odd n.
    The comparison is recorded as data; Kunneth is authoritative and
    disagreements are not repaired.
    """
    if n < 1 or d < 1 or m < 2:
        raise ValueError("need m >= 2, d >= 1, n >= 1")
    if t > 1 and m % t != 0:
        raise ValueError("need t | m")
    orders = (m,) * d + ((t,) if t > 1 else ())
    if n == 1:
        # Below the lemma's range; H_1 is the abelianisation.
        r = len(orders)
        shape = list(orders)
    else:
        r = sum(nu(n, k) - (-1) ** n for k in range(2, d + 1))
        shape = [m] * r
        if n % 2 == 1 and t > 1:
            shape.append(t)
    actual = homology_abelian(orders, n)
    predicted = _normalise(shape)
    return ClosedFormComparison(m, d, t, n, actual, r, predicted,
                                actual == predicted)


def invariant_factors_of_presentation_matrix(mat: IntMatrix) -> tuple[int, ...]:
    """Invariant factors (with 0 for Z) of coker of an integer matrix."""
    torsion, free = cokernel_invariants(mat)
    return tuple([0] * free + list(torsion))
