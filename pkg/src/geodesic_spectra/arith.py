"""Exact integer arithmetic: primes, von Mangoldt functions, Pell equations,
indefinite binary quadratic form class numbers, Dirichlet characters, and the
nearest-integer peak detector kappa.

Everything here is pure and deterministic; big-integer arithmetic is exact,
floats appear only at the final evaluation step (unit logarithms, kappa).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt

from .errors import ConsistencyError, DomainError

# ---------------------------------------------------------------------------
# primes and factorization


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def primes_up_to(n: int) -> list[int]:
    """Sieve of Eratosthenes, inclusive."""
    if n < 2:
        return []
    sieve = bytearray(b"\x01") * (n + 1)
    sieve[:2] = b"\x00\x00"
    for p in range(2, isqrt(n) + 1):
        if sieve[p]:
            start = p * p
            sieve[start :: p] = b"\x00" * ((n - start) // p + 1)
    return [i for i, v in enumerate(sieve) if v]


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division; fine for the sizes used here."""
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        f += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def is_squarefree(n: int) -> bool:
    return n >= 1 and all(e == 1 for e in factorize(n).values())


def prime_power(n: int) -> tuple[int, int] | None:
    """Return (p, k) with n = p**k, k >= 1, or None."""
    if n < 2:
        return None
    fac = factorize(n)
    if len(fac) != 1:
        return None
    (p, k), = fac.items()
    return p, k


# ---------------------------------------------------------------------------
# von Mangoldt


def von_mangoldt(n: int) -> float:
    """log p if n is a positive power of the prime p, else 0."""
    if n < 1:
        raise DomainError("von_mangoldt needs n >= 1")
    pk = prime_power(n)
    return math.log(pk[0]) if pk else 0.0


def von_mangoldt_real(x: float, eps: float | None = None) -> float:
    """Real-argument von Mangoldt with a snap window around integers.

    A floating x never lands exactly on an integer, so x counts as the
    integer n = round(x) when |x - n| <= eps (default 1e-9 * x).
    """
    if x <= 1.0:
        return 0.0
    if eps is None:
        eps = 1e-9 * x
    n = round(x)
    if n >= 2 and abs(x - n) <= eps:
        return von_mangoldt(n)
    return 0.0


# ---------------------------------------------------------------------------
# Pell equations t^2 - d u^2 = 4


@dataclass(frozen=True)
class PellSolution:
    """Minimal positive solution of t^2 - d*u^2 = 4."""

    d: int
    t: int
    u: int

    def __post_init__(self):
        if self.t * self.t - self.d * self.u * self.u != 4:
            raise ConsistencyError(
                f"({self.t},{self.u}) does not solve t^2-{self.d}u^2=4"
            )

    def log_unit(self) -> float:
        """log((t + u*sqrt(d))/2), stable for huge big-integer solutions."""
        return _log_half_sum(self.t, self.u, self.d)


def _log_half_sum(t: int, u: int, d: int) -> float:
    # log((t + u*sqrt(d))/2) without overflowing floats
    logt = math.log(t)
    ratio = math.exp(math.log(u) + 0.5 * math.log(d) - logt) if u else 0.0
    return logt + math.log1p(ratio) - math.log(2.0)


def _pell_one(d: int) -> tuple[int, int]:
    """Fundamental solution of x^2 - d y^2 = 1 via the continued fraction
    of sqrt(d); exact big-integer arithmetic."""
    a0 = isqrt(d)
    m, den, a = 0, 1, a0
    p_prev, p = 1, a0
    q_prev, q = 0, 1
    while p * p - d * q * q != 1:
        m = den * a - m
        den = (d - m * m) // den
        a = (a0 + m) // den
        p, p_prev = a * p + p_prev, p
        q, q_prev = a * q + q_prev, q
    return p, q


def _icbrt(n: int) -> int:
    """Integer cube root (floor) by Newton iteration."""
    if n < 2:
        return n
    x = 1 << ((n.bit_length() + 2) // 3)
    while True:
        y = (2 * x + n // (x * x)) // 3
        if y >= x:
            return x
        x = y


def pell_fundamental(d: int) -> PellSolution:
    """Minimal (t, u) with t^2 - d u^2 = 4, u >= 1, for non-square d >= 2.

    Solved through the classical x^2 - d y^2 = 1 continued fraction. For
    d = 1 mod 4 a strictly smaller half-integer unit (t, u both odd) may
    exist; it is the cube root of the x=1 unit and is detected exactly via
    t^3 - 3t = 2*x1.
    """
    if d < 2 or is_square(d):
        raise DomainError(f"d={d} must be a non-square integer >= 2")
    if d % 4 == 0:
        a, u = _pell_one(d // 4)
        return PellSolution(d, 2 * a, u)
    if d % 4 in (2, 3):
        x, y = _pell_one(d)
        return PellSolution(d, 2 * x, 2 * y)
    x1, y1 = _pell_one(d)
    # odd solution (t,u) satisfies ((t+u*sqrt(d))/2)^3 = x1 + y1*sqrt(d),
    # which collapses to t^3 - 3t = 2*x1 and u = 2*y1/(t^2-1)
    target = 2 * x1
    base = _icbrt(target)
    for t in (base - 1, base, base + 1, base + 2):
        if t >= 3 and t * t * t - 3 * t == target:
            num = 2 * y1
            den = t * t - 1
            if num % den == 0:
                u = num // den
                if t * t - d * u * u == 4:
                    return PellSolution(d, t, u)
    return PellSolution(d, 2 * x1, 2 * y1)


# ---------------------------------------------------------------------------
# class numbers of indefinite binary quadratic forms


def _is_discriminant(D: int) -> bool:
    return D > 0 and D % 4 in (0, 1) and not is_square(D)


def _reduced_forms(D: int) -> list[tuple[int, int, int]]:
    """All reduced primitive forms (a,b,c) of discriminant D > 0.

    Reduced means |sqrt(D) - 2|a|| < b < sqrt(D); equivalently
    sqrt(D) - b < 2|a| < sqrt(D) + b with 0 < b < sqrt(D).
    """
    s = isqrt(D)
    forms = []
    for b in range(1, s + 1):
        if (D - b * b) % 4 != 0:
            continue
        n = (D - b * b) // 4  # = |a|*|c|, positive
        if n == 0:
            continue
        for a in divisors(n):
            # strict inequalities are safe: D non-square excludes ties
            if (s - b < 2 * a or (2 * a - (s - b) == 0 and False)) and _twice_between(a, b, D):
                c = n // a
                if gcd(gcd(a, b), c) == 1:
                    forms.append((a, b, -c))
                    forms.append((-a, b, c))
    return forms


def _twice_between(a: int, b: int, D: int) -> bool:
    # sqrt(D) - b < 2a < sqrt(D) + b, exact integer comparisons
    lo = D - 4 * a * b + b * b  # sign of sqrt(D) - (2a - ... ) handled below
    # 2a > sqrt(D) - b  <=>  (2a + b)^2 > D   (both sides positive or lhs>0)
    if (2 * a + b) ** 2 <= D:
        return False
    # 2a < sqrt(D) + b  <=>  (2a - b)^2 < D when 2a > b, else always true
    if 2 * a > b and (2 * a - b) ** 2 >= D:
        return False
    del lo
    return True


def _rho(form: tuple[int, int, int], D: int) -> tuple[int, int, int]:
    """Reduction operator on reduced forms: (a,b,c) -> (c,b',c')."""
    _, b, c = form
    ac = abs(c)
    s = isqrt(D)
    # unique b' = -b (mod 2|c|) with sqrt(D) - 2|c| < b' < sqrt(D)
    b2 = (-b) % (2 * ac)
    # shift into the window (s is floor(sqrt D); window length is 2|c|)
    lo = s - 2 * ac  # b' must satisfy b' > sqrt(D) - 2|c|, i.e. b' >= lo+1 area
    b2 = b2 + 2 * ac * ((lo - b2) // (2 * ac) + 1)
    if b2 > s:  # boundary snap when sqrt(D) is between b2-2|c| and b2
        b2 -= 2 * ac
    if (b2 + 2 * ac) ** 2 < D:  # b2 too small: one more step fits under sqrt(D)
        b2 += 2 * ac
    c2 = (b2 * b2 - D) // (4 * c)
    return (c, b2, c2)


def class_number(D: int) -> int:
    """Wide class number: reduction cycles of primitive indefinite forms."""
    if not _is_discriminant(D):
        raise DomainError(f"D={D} is not a positive non-square discriminant")
    pending = set(_reduced_forms(D))
    cycles = 0
    while pending:
        start = next(iter(pending))
        cycles += 1
        f = start
        while True:
            pending.discard(f)
            f = _rho(f, D)
            if f == start:
                break
    return cycles


def chi8(d: int) -> int:
    """Quadratic character mod 8: 0 on evens, +1 at 1,7 and -1 at 3,5 (mod 8)."""
    if d % 2 == 0:
        return 0
    return 1 if d % 8 in (1, 7) else -1


def j_symbol(d: int, p: int) -> int:
    """Legendre symbol (d/p) for odd primes, chi8(d) at p = 2."""
    if not is_prime(p):
        raise DomainError(f"p={p} must be prime")
    if p == 2:
        return chi8(d)
    r = pow(d % p, (p - 1) // 2, p)
    if r == 0:
        return 0
    return 1 if r == 1 else -1


def hecke_class_number(d: int, q: int) -> int:
    """Class number h(d*q^2) evaluated through the Pell-unit identity

        h(dq^2) = (log eps_d / log eps_{dq^2}) * q * h(d) * prod_{p|q} (1 - j(d,p)/p)

    with eps the fundamental units (t + u*sqrt(.))/2 of the respective Pell
    equations. The result must land within 1e-9 of an integer."""
    if q < 1:
        raise DomainError("q must be a positive integer")
    if not _is_discriminant(d) or not _is_discriminant(d * q * q):
        raise DomainError(f"(d,q)=({d},{q}) does not give valid discriminants")
    eps_d = pell_fundamental(d).log_unit()
    eps_dq2 = pell_fundamental(d * q * q).log_unit()
    value = (eps_d / eps_dq2) * q * class_number(d)
    for p in factorize(q):
        value *= 1.0 - j_symbol(d, p) / p
    nearest = round(value)
    if abs(value - nearest) > 1e-9:
        raise ConsistencyError(
            f"hecke_class_number({d},{q}) = {value!r} is not integral"
        )
    return int(nearest)


def kappa(X: float) -> float:
    """Distance from sqrt(X) + 1/sqrt(X) to the nearest integer, in [0, 1/2].

    Vanishes exactly at powers of norms of hyperbolic classes of the
    modular group."""
    if X <= 1.0:
        raise DomainError("kappa needs X > 1")
    r = math.sqrt(X)
    f = r + 1.0 / r
    return abs(f - round(f))


# ---------------------------------------------------------------------------
# Dirichlet characters


@dataclass(frozen=True)
class DirichletCharacter:
    """Character mod m with values stored as exact roots of unity.

    ``exponents[r]`` holds k with chi(r) = exp(2*pi*i*k/root_order) for
    residues r coprime to the modulus, and None where chi vanishes.
    Orthogonality and multiplicativity therefore hold exactly in integer
    arithmetic; complex floats only appear in __call__.
    """

    modulus: int
    root_order: int
    exponents: tuple  # length == modulus, entries int or None
    conductor: int
    primitive: bool

    @property
    def is_principal(self) -> bool:
        return self.conductor == 1

    def pair(self, n: int):
        """(root_order, exponent) at n, or None when chi(n) = 0."""
        k = self.exponents[n % self.modulus]
        return None if k is None else (self.root_order, k)

    def __call__(self, n: int) -> complex:
        k = self.exponents[n % self.modulus]
        if k is None:
            return 0.0 + 0.0j
        if k == 0:
            return 1.0 + 0.0j
        if 2 * k == self.root_order:
            return -1.0 + 0.0j
        return cmath.exp(2j * cmath.pi * k / self.root_order)

    def conjugate(self) -> "DirichletCharacter":
        exps = tuple(
            None if k is None else (-k) % self.root_order for k in self.exponents
        )
        return DirichletCharacter(
            self.modulus, self.root_order, exps, self.conductor, self.primitive
        )


def _primitive_root(p: int, e: int) -> int:
    """Primitive root mod p**e for odd prime p."""
    phi = p - 1
    fac = factorize(phi)
    g = 2
    while True:
        if all(pow(g, phi // r, p) != 1 for r in fac):
            break
        g += 1
    if e == 1:
        return g
    # g or g+p generates mod p^2 and then mod every p^e
    if pow(g, phi, p * p) == 1:
        g += p
    return g


def _unit_group(m: int) -> tuple[list[int], list[int]]:
    """Generators and their orders for (Z/m)*, CRT-lifted to modulus m."""
    gens: list[int] = []
    orders: list[int] = []
    for p, e in factorize(m).items():
        pe = p**e
        rest = m // pe
        local: list[tuple[int, int]] = []
        if p == 2:
            if e == 2:
                local = [(3, 2)]
            elif e >= 3:
                local = [(pe - 1, 2), (5, 2 ** (e - 2))]
        else:
            local = [(_primitive_root(p, e), pe // p * (p - 1))]
        for g, order in local:
            if rest == 1:
                lifted = g % m
            else:
                # x = g mod pe, x = 1 mod rest
                inv = pow(pe, -1, rest)
                lifted = (g + pe * ((1 - g) * inv % rest)) % m
            gens.append(lifted)
            orders.append(order)
    return gens, orders


def _conductor(modulus: int, exps: tuple) -> int:
    """Smallest f | modulus with chi trivial on units = 1 (mod f)."""
    for f in divisors(modulus):
        if all(
            exps[a] == 0
            for a in range(1, modulus + 1)
            if a % f == 1 and exps[a % modulus] is not None
        ):
            return f
    return modulus


def make_character(modulus: int, root_order: int, exps: tuple) -> DirichletCharacter:
    cond = _conductor(modulus, exps)
    return DirichletCharacter(modulus, root_order, exps, cond, cond == modulus)


@lru_cache(maxsize=None)
def characters_mod(m: int) -> tuple[DirichletCharacter, ...]:
    """All phi(m) Dirichlet characters mod m, from the cyclic decomposition
    of the unit group; deterministic order (by exponents on the generators)."""
    if m < 1:
        raise DomainError("modulus must be >= 1")
    if m == 1:
        return (DirichletCharacter(1, 1, (0,), 1, True),)
    gens, orders = _unit_group(m)
    exponent = math.lcm(*orders) if orders else 1
    # discrete logs of every unit with respect to the generator tuple
    dlog: dict[int, tuple[int, ...]] = {1 % m: tuple(0 for _ in gens)}
    frontier = [1 % m]
    # enumerate the group as products of generator powers
    reps = [(1 % m, tuple(0 for _ in gens))]
    for i, (g, order) in enumerate(zip(gens, orders)):
        new_reps = []
        for r, vec in reps:
            x = r
            for k in range(order):
                v = list(vec)
                v[i] = k
                new_reps.append((x, tuple(v)))
                x = x * g % m
        reps = new_reps
    dlog = {r: vec for r, vec in reps}
    del frontier
    chars = []
    # character indexed by its exponents on the generators
    idx = [0] * len(gens)
    while True:
        exps: list = [None] * m
        for r, vec in dlog.items():
            k = 0
            for ki, vi, order in zip(idx, vec, orders):
                k += ki * vi * (exponent // order)
            exps[r] = k % exponent
        chars.append(make_character(m, exponent, tuple(exps)))
        # odometer over the exponent tuples
        pos = 0
        while pos < len(idx):
            idx[pos] += 1
            if idx[pos] < orders[pos]:
                break
            idx[pos] = 0
            pos += 1
        else:
            break
        if pos == len(idx):
            break
    chars.sort(key=lambda c: c.exponents[1 % m if m > 1 else 0] or 0)
    # stable deterministic order: by full exponent table
    chars.sort(key=lambda c: tuple(-1 if k is None else k for k in c.exponents))
    return tuple(chars)


def product_character(
    parts: list[DirichletCharacter], trivial_modulus: int = 1
) -> DirichletCharacter:
    """Pointwise product of characters times the trivial character to
    ``trivial_modulus``; the result lives mod lcm of all moduli involved."""
    M = trivial_modulus
    for c in parts:
        M = math.lcm(M, c.modulus)
    E = math.lcm(*(c.root_order for c in parts)) if parts else 1
    exps: list = [None] * M
    for r in range(M):
        if gcd(r, M) != 1:
            continue
        k = 0
        ok = True
        for c in parts:
            pr = c.pair(r)
            if pr is None:
                ok = False
                break
            k += pr[1] * (E // pr[0])
        if ok and gcd(r, trivial_modulus) == 1:
            exps[r] = k % E
        elif ok:
            exps[r] = None
    return make_character(M, E, tuple(exps))
