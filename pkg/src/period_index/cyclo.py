"""Exact arithmetic in prime-power cyclotomic fields L = Q(zeta_n).

Elements are stored on the power basis 1, zeta, ..., zeta^(phi(n)-1) with
Fraction coordinates, so every operation here is exact.  Scope: n is a prime
power; n in {2, 3, 4} is fully supported (class number one, torsion units
only), n in {5, 8, 9} is best-effort (bounded unit windows, see NORM_UNITS).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterable, Optional, Sequence


SUPPORTED_LEVELS = (2, 3, 4, 5, 8, 9)
FULL_LEVELS = (2, 3, 4)


class ContextError(ValueError):
    """Raised for unsupported n or mixed-context arithmetic."""


def _prime_power_split(n: int) -> tuple[int, int]:
    """Return (p, k) with n = p**k, or raise."""
    if n < 2:
        raise ContextError("level must be >= 2, got %r" % (n,))
    p = min(q for q in range(2, n + 1) if n % q == 0)
    m, k = n, 0
    while m % p == 0:
        m //= p
        k += 1
    if m != 1:
        raise ContextError("level %d is not a prime power" % n)
    return p, k


def cyclotomic_poly(n: int) -> list[int]:
    """Coefficients of Phi_n, ascending (index i is the x^i coefficient).

    Only prime powers are accepted: Phi_{p^k}(x) = Phi_p(x^(p^(k-1))).
    """
    p, k = _prime_power_split(n)
    step = n // p  # p^(k-1)
    coeffs = [0] * (step * (p - 1) + 1)
    for i in range(p):
        coeffs[i * step] = 1
    return coeffs


@lru_cache(maxsize=None)
def context(n: int) -> "GlobalContext":
    if n not in SUPPORTED_LEVELS:
        raise ContextError(
            "level %d outside supported prime-power scope %r" % (n, SUPPORTED_LEVELS)
        )
    return GlobalContext(n)


class GlobalContext:
    """Everything pinned once per level n: Phi_n, basis degree, reduction table.

    zeta is pinned as the power-basis generator; all Galois and residue
    computations downstream refer to this single choice.
    """

    def __init__(self, n: int):
        self.n = n
        self.prime, self.prime_exp = _prime_power_split(n)
        self.phi_coeffs = cyclotomic_poly(n)
        self.degree = len(self.phi_coeffs) - 1
        # x^d = -(lower part of Phi), used to fold products back below degree d.
        self._fold = [Fraction(-c) for c in self.phi_coeffs[:-1]]
        # x^(d+i) mod Phi_n as coordinate rows, far enough for both products
        # (degree <= 2d-2) and raw zeta-power data (degree <= n-1).
        rows = [list(self._fold)]
        for _ in range(2 * n - 2 - self.degree):
            prev = rows[-1]
            shifted = [Fraction(0)] + prev[:-1]
            top = prev[-1]
            row = [shifted[j] + top * self._fold[j] for j in range(self.degree)]
            rows.append(row)
        self._power_rows = rows
        self.units = tuple(t for t in range(1, n) if gcd(t, n) == 1)

    def __repr__(self) -> str:
        return "GlobalContext(n=%d)" % self.n


@dataclass(frozen=True)
class GaloisAuto:
    """The automorphism zeta -> zeta^t for a unit t mod n."""

    n: int
    t: int

    def __post_init__(self):
        if gcd(self.t, self.n) != 1:
            raise ContextError("t=%d is not a unit mod %d" % (self.t, self.n))

    def inverse(self) -> "GaloisAuto":
        return GaloisAuto(self.n, pow(self.t, -1, self.n))


class CycloElem:
    """An element of Q(zeta_n) on the power basis, exact coordinates."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: Iterable):
        ctx = context(n)
        cs = [Fraction(c) for c in coeffs]
        if len(cs) > ctx.degree:
            # fold high powers down; lets callers pass raw polynomial data
            cs = _reduce(ctx, cs)
        cs += [Fraction(0)] * (ctx.degree - len(cs))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):  # immutable by convention
        raise AttributeError("CycloElem is immutable")

    # --- constructors -------------------------------------------------
    @staticmethod
    def rational(n: int, value) -> "CycloElem":
        return CycloElem(n, [Fraction(value)])

    @staticmethod
    def zeta(n: int, power: int = 1) -> "CycloElem":
        ctx = context(n)
        power %= n
        raw = [Fraction(0)] * (power + 1)
        raw[power] = Fraction(1)
        return CycloElem(n, _reduce(ctx, raw))

    # --- predicates ---------------------------------------------------
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational: %r" % (self,))
        return self.coeffs[0]

    def denominator(self) -> int:
        d = 1
        for c in self.coeffs:
            d = d * c.denominator // gcd(d, c.denominator)
        return d

    # --- ring ops -----------------------------------------------------
    def _check(self, other: "CycloElem") -> None:
        if not isinstance(other, CycloElem) or other.n != self.n:
            raise ContextError("mixed cyclotomic contexts: %r vs %r" % (self, other))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycloElem.rational(self.n, other)
        self._check(other)
        return CycloElem(self.n, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycloElem.rational(self.n, other)
        self._check(other)
        return CycloElem(self.n, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return CycloElem(self.n, [-a for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycloElem(self.n, [a * Fraction(other) for a in self.coeffs])
        self._check(other)
        ctx = context(self.n)
        d = ctx.degree
        raw = [Fraction(0)] * (2 * d - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b == 0:
                    continue
                raw[i + j] += a * b
        return CycloElem(self.n, _reduce(ctx, raw))

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return (-self) + other

    def invert(self) -> "CycloElem":
        """Multiplicative inverse via extended gcd with Phi_n over Q."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_%d)" % self.n)
        ctx = context(self.n)
        phi = [Fraction(c) for c in ctx.phi_coeffs]
        g, _, inv = _poly_ext_gcd(phi, list(self.coeffs))
        # g is a nonzero constant since Phi_n is irreducible over Q
        if len([c for c in g if c != 0]) != 1 or g[0] == 0:
            raise ArithmeticError("gcd with Phi_%d not constant; bad reduction state" % self.n)
        scale = Fraction(1) / g[0]
        return CycloElem(self.n, [c * scale for c in inv])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        self._check(other)
        return self * other.invert()

    def __pow__(self, exp: int):
        if exp < 0:
            return self.invert() ** (-exp)
        acc = CycloElem.rational(self.n, 1)
        base = self
        e = exp
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    # --- misc ---------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycloElem.rational(self.n, other)
        return isinstance(other, CycloElem) and self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.n, self.coeffs))

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append("%s*z" % c)
            else:
                terms.append("%s*z^%d" % (c, i))
        return "CycloElem(%d: %s)" % (self.n, " + ".join(terms) if terms else "0")


def _reduce(ctx: GlobalContext, raw: Sequence[Fraction]) -> list[Fraction]:
    d = ctx.degree
    if len(raw) - d > len(ctx._power_rows):
        raise ContextError("raw degree %d too large to reduce" % (len(raw) - 1))
    out = [Fraction(c) for c in raw[:d]] + [Fraction(0)] * max(0, d - len(raw))
    for i, c in enumerate(raw[d:]):
        if c == 0:
            continue
        row = ctx._power_rows[i]
        for j in range(d):
            out[j] += c * row[j]
    return out


def _poly_trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a: list[Fraction], b: list[Fraction]):
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv_lead = Fraction(1) / b[-1]
    for i in range(len(a) - len(b), -1, -1):
        coef = a[i + len(b) - 1] * inv_lead
        if coef == 0:
            continue
        q[i] = coef
        for j, bj in enumerate(b):
            a[i + j] -= coef * bj
    return _poly_trim(q), _poly_trim(a)


def _poly_ext_gcd(a: list[Fraction], b: list[Fraction]):
    """Return (g, u, v) with u*a + v*b = g, over Q[x]."""
    a = _poly_trim(list(a))
    b = _poly_trim(list(b))
    r0, r1 = a, b
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        t0, t1 = t1, _poly_sub(t0, _poly_mul(q, t1))
    return r0, s0, t0


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _poly_trim(out)


def _poly_sub(a, b):
    out = [Fraction(0)] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, y in enumerate(b):
        out[i] -= y
    return _poly_trim(out)


def embed_level(x: CycloElem, new_n: int) -> CycloElem:
    """Embed Q(zeta_n) into Q(zeta_{new_n}) via zeta_n = zeta_{new_n}^(new_n/n).

    Requires n | new_n (same prime, higher power, or n trivial in new_n's
    tower: any supported new_n with x.n | new_n works)."""
    if new_n % x.n != 0:
        raise ContextError("cannot embed level %d into level %d" % (x.n, new_n))
    if new_n == x.n:
        return x
    m = new_n // x.n
    raw = [Fraction(0)] * new_n
    for i, c in enumerate(x.coeffs):
        raw[(i * m) % new_n] += c
    return CycloElem(new_n, raw)


# --- Galois action and norms ------------------------------------------


def galois_apply(auto: GaloisAuto, x: CycloElem) -> CycloElem:
    """Apply zeta -> zeta^t coordinate-wise and re-reduce."""
    if auto.n != x.n:
        raise ContextError("automorphism level %d vs element level %d" % (auto.n, x.n))
    raw = [Fraction(0)] * x.n
    for i, c in enumerate(x.coeffs):
        raw[(i * auto.t) % x.n] += c
    return CycloElem(x.n, raw)


def conjugates(x: CycloElem) -> list[CycloElem]:
    ctx = context(x.n)
    return [galois_apply(GaloisAuto(x.n, t), x) for t in ctx.units]


def field_norm(x: CycloElem) -> Fraction:
    """Norm to Q: product over all Galois conjugates."""
    acc = CycloElem.rational(x.n, 1)
    for c in conjugates(x):
        acc = acc * c
    if not acc.is_rational():
        raise ArithmeticError("norm did not land in Q: %r" % (acc,))
    return acc.rational_value()


def field_trace(x: CycloElem) -> Fraction:
    acc = CycloElem.rational(x.n, 0)
    for c in conjugates(x):
        acc = acc + c
    return acc.rational_value()


def is_totally_positive(x: CycloElem) -> bool:
    """True iff x is positive under every real embedding.

    For n <= 2 the field is Q and this means x > 0; for n >= 3 the field is
    totally imaginary, so there are no real embeddings and the condition is
    vacuously true.
    """
    if x.is_zero():
        return False
    if x.n <= 2:
        return x.rational_value() > 0
    return True


# --- integral residue machinery ---------------------------------------


def evaluate_mod(x: CycloElem, root: int, modulus: int) -> int:
    """Evaluate the coordinate polynomial at `root` modulo `modulus`.

    Denominators must be invertible mod `modulus`.
    """
    acc = 0
    power = 1
    for c in x.coeffs:
        den = c.denominator % modulus
        if gcd(c.denominator, modulus) != 1:
            raise ValueError("denominator %d not invertible mod %d" % (c.denominator, modulus))
        acc = (acc + c.numerator * pow(den, -1, modulus) * power) % modulus
        power = (power * root) % modulus
    return acc % modulus


def phi_roots_mod_p(n: int, p: int) -> list[int]:
    """All roots of Phi_n mod p, ascending.  Requires p ≡ 1 mod n, p prime.

    The roots are exactly the elements of multiplicative order n, so one is
    constructed as g^((p-1)/n) from a small search, then closed under powers.
    This reproduces what a scan of F_p would find, in the same order.
    """
    if (p - 1) % n != 0:
        raise ValueError("p=%d is not 1 mod n=%d; Phi_n has no roots there" % (p, n))
    q = _prime_power_split(n)[0]
    for a in range(2, p):
        w = pow(a, (p - 1) // n, p)
        # w^n = 1; exact order n iff w^(n/q) != 1 for the unique prime q | n
        if pow(w, n // q, p) != 1:
            return sorted(pow(w, t, p) for t in context(n).units)
    raise ArithmeticError("no primitive n-th root found mod %d" % p)


def split_place(n: int, p: int) -> tuple[int, int]:
    """Pin the distinguished place of L over a split prime p: (p, omega).

    omega is the smallest root of Phi_n mod p; it necessarily has exact
    multiplicative order n.
    """
    if p < 2 or not is_probable_prime(p):
        raise ValueError("p=%d is not prime" % p)
    if n % p == 0:
        raise ValueError("p=%d divides n=%d; not a split place" % (p, n))
    omega = phi_roots_mod_p(n, p)[0]
    return (p, omega)


def reduce_at(x: CycloElem, p: int, omega: int) -> int:
    """Residue of x at the place (p, omega), i.e. image under zeta -> omega."""
    return evaluate_mod(x, omega, p)


@lru_cache(maxsize=None)
def lifted_root(n: int, p: int, omega: int, precision: int) -> int:
    """Hensel lift of omega to a root of Phi_n modulo p**precision.

    Phi_n is separable mod p (p does not divide n here), so Newton steps
    converge quadratically and the lift is unique above omega.
    """
    phi = cyclotomic_poly(n)
    dphi = [i * c for i, c in enumerate(phi)][1:]
    modulus = p
    root = omega % p
    while modulus < p ** precision:
        modulus = min(modulus * modulus, p ** precision)
        f = _int_poly_eval(phi, root, modulus)
        fp = _int_poly_eval(dphi, root, modulus)
        root = (root - f * pow(fp, -1, modulus)) % modulus
    return root


def _int_poly_eval(coeffs: Sequence[int], x: int, modulus: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % modulus
    return acc


def is_probable_prime(m: int) -> bool:
    """Deterministic Miller-Rabin for the 64-bit range used here."""
    if m < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if m % q == 0:
            return m == q
    d, s = m - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, m)
        if x in (1, m - 1):
            continue
        for _ in range(s - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False
    return True


# --- norm equations ----------------------------------------------------

# Units used for congruence adjustment of norm-equation solutions.  Torsion
# units (+-zeta^k) exist for every n; the entries below add generators of the
# infinite part for the best-effort levels (verified unit norms in tests).
NORM_UNITS = {
    5: [[1, 1, 0, 0]],          # 1 + zeta_5
    8: [[1, 1, 0, -1]],         # 1 + zeta_8 - zeta_8^3 = 1 + sqrt(2)
    9: [[1, 1, 0, 0, 0, 0], [1, 1, 1, 1, 0, 0]],
}


def _coord_key(c: int) -> tuple[int, int]:
    # nonnegative values first (ascending), then negative (by magnitude)
    return (0, c) if c >= 0 else (1, -c)


def vector_key(coeffs: Sequence[int]) -> tuple:
    """Canonical order for integral coordinate vectors.

    Comparison runs from the highest-power coefficient down, preferring small
    nonnegative values.  This is the tie-break used everywhere a generator
    must be pinned deterministically.
    """
    return tuple(_coord_key(int(c)) for c in reversed(list(coeffs)))


def _coord_range(bound: int) -> list[int]:
    return sorted(range(-bound, bound + 1), key=_coord_key)


def solve_norm_equation(n: int, p: int, coeff_bound: int) -> Optional[CycloElem]:
    """Search integral x with |Norm(x)| = p and coordinates within the bound.

    Returns the first hit in canonical vector order (see vector_key), or None
    if the bound is exhausted.  p must be a split prime (p ≡ 1 mod n).
    """
    if (p - 1) % n != 0:
        raise ValueError("p=%d is not 1 mod n=%d" % (p, n))
    deg = context(n).degree
    if deg == 1:
        # L = Q; the only elements of norm +-p are +-p.
        if p <= coeff_bound:
            return CycloElem.rational(n, p)
        return None
    if deg == 2:
        return _solve_norm_quadratic(n, p, coeff_bound)
    return _solve_norm_generic(n, p, coeff_bound)


def _solve_norm_quadratic(n: int, p: int, bound: int) -> Optional[CycloElem]:
    # Norm(a + b*zeta) is a^2 - ab + b^2 for n=3, a^2 + b^2 for n=4.
    # Loop over the outer coefficient b and solve the quadratic in a exactly.
    assert n in (3, 4)
    for b in _coord_range(bound):
        candidates = []
        if n == 4:
            rest = p - b * b
            if rest >= 0:
                r = isqrt(rest)
                if r * r == rest and abs(r) <= bound:
                    candidates = [r, -r] if r else [0]
        else:
            # a^2 - ab + (b^2 - p) = 0  =>  a = (b +- sqrt(4p - 3 b^2)) / 2
            disc = 4 * p - 3 * b * b
            if disc >= 0:
                r = isqrt(disc)
                if r * r == disc:
                    for a2 in (b + r, b - r):
                        if a2 % 2 == 0 and abs(a2 // 2) <= bound:
                            candidates.append(a2 // 2)
        for a in sorted(set(candidates), key=_coord_key):
            x = CycloElem(n, [a, b])
            if abs(field_norm(x)) == p:
                return x
    return None


def _solve_norm_generic(n: int, p: int, bound: int) -> Optional[CycloElem]:
    # Best-effort scope (phi(n) in {4, 6}): plain nested search in canonical
    # order with an exact norm check.  Bounds should stay small.
    deg = context(n).degree
    rng = _coord_range(bound)

    def rec(idx: int, coords: list[int]):
        if idx < 0:
            if all(c == 0 for c in coords):
                return None
            x = CycloElem(n, coords)
            if abs(field_norm(x)) == p:
                return x
            return None
        for c in rng:
            coords[idx] = c
            hit = rec(idx - 1, coords)
            if hit is not None:
                return hit
        coords[idx] = 0
        return None

    return rec(deg - 1, [0] * deg)


def torsion_units(n: int) -> list[CycloElem]:
    """All roots of unity in Q(zeta_n): +-zeta^k."""
    out = []
    for k in range(n):
        z = CycloElem.zeta(n, k)
        out.extend([z, -z])
    return out


def unit_group_window(n: int, window: int) -> list[CycloElem]:
    """Units available for generator adjustment: torsion times a bounded
    window of the recorded infinite-part generators (best-effort levels)."""
    base = torsion_units(n)
    extras = NORM_UNITS.get(n, [])
    if not extras or window <= 0:
        return base
    out = []
    exps = [e for e in range(-window, window + 1)]
    stack = [base]
    for g in extras:
        gen = CycloElem(n, g)
        powers = [gen ** e for e in exps]
        stack.append(powers)
    # cartesian product of torsion with each window
    def prod(acc, rest):
        if not rest:
            return acc
        return prod([a * r for a in acc for r in rest[0]], rest[1:])

    out = prod(stack[0], stack[1:])
    return out
