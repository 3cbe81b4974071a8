"""Exact arithmetic in two small number fields.

K = Q(α) with α⁵ = 2 and L = Q(β) with β² = β + 1. Elements carry exact
rational coordinates over the power basis 1, θ, ..., θ^(m-1); both rings of
integers admit that power basis, so "all coordinates integral" is the right
notion of an algebraic integer here.

Squareness testing combines two one-sided certificates. A quadratic
nonresidue at a degree-1 prime (a root of the defining polynomial mod p,
with p coprime to the discriminant and to every coordinate denominator)
soundly proves "not a square": any square root of a p-integral element is
itself p-integral, and its residue image would square to the nonresidue.
A claimed square root is reconstructed from floating point square roots in
every embedding, rounded to rational coordinates, and reverified by exact
squaring, which soundly proves "square". Neither side is complete, so the
test can also return Undetermined; every positive or negative answer is an
exact proof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

from mpmath import mp

from .arith import is_prime, primes_below


# ---------------------------------------------------------------------------
# integer polynomial utilities (coefficient tuples, constant term first)


def poly_eval(coeffs, x):
    """Horner evaluation; coefficient and point types only need * and +."""
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _poly_derivative(coeffs):
    return tuple(i * coeffs[i] for i in range(1, len(coeffs)))


def _det(rows):
    """Determinant by fraction-exact Gaussian elimination."""
    n = len(rows)
    a = [[Fraction(v) for v in row] for row in rows]
    sign = 1
    out = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            sign = -sign
        out *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            if a[r][col]:
                f = a[r][col] * inv
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return out * sign


def _solve_linear(rows, rhs):
    """Solve a nonsingular square system exactly. Raises on singular input."""
    n = len(rows)
    a = [[Fraction(v) for v in rows[i]] + [Fraction(rhs[i])] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular linear system")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


def _resultant(f, g):
    """Sylvester resultant of two integer polynomials."""
    n = len(f) - 1
    k = len(g) - 1
    size = n + k
    fh = list(reversed(f))
    gh = list(reversed(g))
    rows = []
    for i in range(k):
        rows.append([0] * i + fh + [0] * (size - n - 1 - i))
    for j in range(n):
        rows.append([0] * j + gh + [0] * (size - k - 1 - j))
    d = _det(rows)
    assert d.denominator == 1
    return d.numerator


@lru_cache(maxsize=None)
def _poly_discriminant(coeffs):
    m = len(coeffs) - 1
    res = _resultant(coeffs, _poly_derivative(coeffs))
    return (-1) ** (m * (m - 1) // 2) * res // coeffs[-1]


def _divisors(n):
    n = abs(n)
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d * d != n:
                out.append(n // d)
        d += 1
    return sorted(out)


def _divisible_by_quadratic(coeffs, b, c):
    # synthetic division by the monic quadratic x² + bx + c
    rem = list(reversed(coeffs))
    for i in range(len(rem) - 2):
        q = rem[i]
        rem[i + 1] -= q * b
        rem[i + 2] -= q * c
    return rem[-1] == 0 and rem[-2] == 0


def _monic_int_irreducible(coeffs):
    """Irreducibility over Q for monic integer polynomials of degree 2..5.

    By Gauss's lemma a rational factorization gives monic integer factors,
    and below degree 6 some factor has degree 1 or 2. Rational roots of a
    monic integer polynomial are integer divisors of the constant term; for
    quadratic factors x² + bx + c, c divides the constant term and |b| is at
    most twice the Cauchy root bound. Both searches are tiny here.
    """
    m = len(coeffs) - 1
    a0 = coeffs[0]
    if a0 == 0:
        return False
    for d in _divisors(a0):
        if poly_eval(coeffs, d) == 0 or poly_eval(coeffs, -d) == 0:
            return False
    if m <= 3:
        return True
    bound = 2 * (1 + max(abs(c) for c in coeffs[:-1]))
    for c in _divisors(a0):
        for cc in (c, -c):
            if any(_divisible_by_quadratic(coeffs, b, cc) for b in range(-bound, bound + 1)):
                return False
    return True


# ---------------------------------------------------------------------------
# field specs and elements


@dataclass(frozen=True)
class FieldSpec:
    """A number field Q(θ) presented by a monic integer minimal polynomial.

    defining_poly is constant-first; the power basis 1, θ, ..., θ^(m-1) is
    assumed to generate the full ring of integers, which callers must only
    rely on for the two shipped specs where it is a known fact.
    """

    name: str
    degree: int
    defining_poly: tuple[int, ...]
    symbol: str = "θ"

    def __post_init__(self):
        object.__setattr__(self, "defining_poly", tuple(self.defining_poly))
        if not 2 <= self.degree <= 5:
            raise ValueError("only degrees 2 through 5 are supported")
        if len(self.defining_poly) != self.degree + 1:
            raise ValueError("coefficient count must be degree + 1")
        if any(not isinstance(c, int) for c in self.defining_poly):
            raise ValueError("defining polynomial must have integer coefficients")
        if self.defining_poly[-1] != 1:
            raise ValueError("defining polynomial must be monic")
        if not _monic_int_irreducible(self.defining_poly):
            raise ValueError("defining polynomial is reducible over Q")

    @property
    def discriminant(self) -> int:
        return _poly_discriminant(self.defining_poly)


K_SPEC = FieldSpec(name="K", degree=5, defining_poly=(-2, 0, 0, 0, 0, 1), symbol="α")
L_SPEC = FieldSpec(name="L", degree=2, defining_poly=(-1, -1, 1), symbol="β")

FIELD_SPECS = {"K": K_SPEC, "L": L_SPEC}


def _mul_coords(spec, a, b):
    m = spec.degree
    f = spec.defining_poly
    c = [Fraction(0)] * (2 * m - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                c[i + j] += ai * bj
    # θ^i = θ^(i-m)·θ^m with θ^m = -(f₀ + f₁θ + ... + f_{m-1}θ^{m-1})
    for i in range(2 * m - 2, m - 1, -1):
        top = c[i]
        if top:
            c[i] = Fraction(0)
            for j in range(m):
                c[i - m + j] -= top * f[j]
    return tuple(c[:m])


def _theta_shift(spec, coords):
    # coordinates of θ · x
    m = spec.degree
    f = spec.defining_poly
    top = coords[m - 1]
    out = [Fraction(0)] + list(coords[:-1])
    if top:
        for j in range(m):
            out[j] -= top * f[j]
    return tuple(out)


class FieldElement:
    """Exact element of Q(θ) in power-basis coordinates, constant first."""

    __slots__ = ("spec", "coords")

    def __init__(self, spec: FieldSpec, coords):
        coords = tuple(Fraction(c) for c in coords)
        if len(coords) != spec.degree:
            raise ValueError(f"{spec.name} elements need {spec.degree} coordinates")
        self.spec = spec
        self.coords = coords

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            return other if other.spec == self.spec else None
        if isinstance(other, (int, Fraction)):
            return scalar(self.spec, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.spec, [a + b for a, b in zip(self.coords, o.coords)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.spec, [a - b for a, b in zip(self.coords, o.coords)])

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.spec, [c * other for c in self.coords])
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.spec, _mul_coords(self.spec, self.coords, o.coords))

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(self.spec, [-c for c in self.coords])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return FieldElement(self.spec, [c / Fraction(other) for c in self.coords])
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = one(self.spec)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.coords == o.coords

    def __hash__(self):
        return hash((self.spec.name, self.coords))

    def __bool__(self):
        return any(self.coords)

    def __repr__(self):
        sym = self.spec.symbol
        parts = []
        for i in range(self.spec.degree - 1, -1, -1):
            c = self.coords[i]
            if c == 0:
                continue
            if i == 0:
                mono = str(c)
            else:
                base = sym if i == 1 else f"{sym}^{i}"
                if c == 1:
                    mono = base
                elif c == -1:
                    mono = "-" + base
                else:
                    mono = f"{c}*{base}"
            parts.append(mono)
        if not parts:
            return "0"
        out = parts[0]
        for t in parts[1:]:
            out += " - " + t[1:] if t.startswith("-") else " + " + t
        return out

    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def inverse(self) -> "FieldElement":
        return nf_exact_div(one(self.spec), self, allow_rational=True)

    def to_json(self) -> dict:
        return {"field": self.spec.name, "coords": [str(c) for c in self.coords]}


def element(spec: FieldSpec, coords) -> FieldElement:
    return FieldElement(spec, coords)


def scalar(spec: FieldSpec, q) -> FieldElement:
    return FieldElement(spec, [q] + [0] * (spec.degree - 1))


def zero(spec: FieldSpec) -> FieldElement:
    return scalar(spec, 0)


def one(spec: FieldSpec) -> FieldElement:
    return scalar(spec, 1)


def theta(spec: FieldSpec) -> FieldElement:
    return FieldElement(spec, [0, 1] + [0] * (spec.degree - 2))


ALPHA = theta(K_SPEC)
BETA = theta(L_SPEC)


def element_from_json(obj: dict) -> FieldElement:
    spec = FIELD_SPECS[obj["field"]]
    return FieldElement(spec, [Fraction(s) for s in obj["coords"]])


# ---------------------------------------------------------------------------
# norms and exact division


def _mult_matrix_rows(x: FieldElement):
    # column j holds the coordinates of x·θ^j
    m = x.spec.degree
    cols = []
    cur = x.coords
    for _ in range(m):
        cols.append(cur)
        cur = _theta_shift(x.spec, cur)
    return [[cols[j][i] for j in range(m)] for i in range(m)]


def nf_arith(op: str, x: FieldElement, y: FieldElement) -> FieldElement:
    if not isinstance(x, FieldElement) or not isinstance(y, FieldElement):
        raise TypeError("nf_arith expects two field elements")
    if x.spec != y.spec:
        raise ValueError("mixed field specs")
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    raise ValueError(f"unknown operation {op!r}")


def nf_norm(x: FieldElement) -> Fraction:
    """Field norm: determinant of multiplication by x on the power basis."""
    return _det(_mult_matrix_rows(x))


def nf_exact_div(x: FieldElement, y: FieldElement, *, allow_rational: bool = False):
    """Quotient x/y when it has integral coordinates, else None.

    With allow_rational the (always well defined) field quotient is returned
    regardless of integrality. y = 0 raises.
    """
    if isinstance(x, (int, Fraction)):
        x = scalar(y.spec, x)
    if isinstance(y, (int, Fraction)):
        y = scalar(x.spec, y)
    if x.spec != y.spec:
        raise ValueError("mixed field specs")
    if not y:
        raise ZeroDivisionError("division by zero field element")
    q = FieldElement(x.spec, _solve_linear(_mult_matrix_rows(y), x.coords))
    if allow_rational or q.is_integral:
        return q
    return None


# ---------------------------------------------------------------------------
# squareness certificates


@dataclass(frozen=True)
class SquareCertificate:
    """Either an exact square root or a nonresidue witness at a degree-1 prime."""

    is_square: bool
    root: FieldElement | None = None
    witness_prime: int | None = None
    witness_root: int | None = None

    def verify(self, x: FieldElement) -> bool:
        """Recheck the certificate against x from scratch."""
        if self.is_square:
            return self.root is not None and self.root * self.root == x
        p, r = self.witness_prime, self.witness_root
        if p is None or r is None or p == 2 or not is_prime(p):
            return False
        spec = x.spec
        if spec.discriminant % p == 0:
            return False
        if any(c.denominator % p == 0 for c in x.coords):
            return False
        if poly_eval(spec.defining_poly, r) % p != 0:
            return False
        v = residue_image(x, p, r)
        return v != 0 and pow(v, (p - 1) // 2, p) == p - 1


class _UndeterminedType:
    """Squareness test outcome when neither certificate could be produced."""

    __slots__ = ()

    def __repr__(self):
        return "Undetermined"


UNDETERMINED = _UndeterminedType()


@lru_cache(maxsize=None)
def _roots_mod(poly: tuple[int, ...], p: int) -> tuple[int, ...]:
    out = []
    for r in range(p):
        acc = 0
        for c in reversed(poly):
            acc = (acc * r + c) % p
        if acc == 0:
            out.append(r)
    return tuple(out)


def degree1_primes(spec: FieldSpec, limit: int, *, avoid: int = 1, max_count: int | None = None):
    """Odd primes p < limit, coprime to the discriminant and to avoid, where
    the defining polynomial has a root mod p; returned with their roots."""
    out = []
    for p in primes_below(limit):
        if p == 2 or spec.discriminant % p == 0 or avoid % p == 0:
            continue
        roots = _roots_mod(spec.defining_poly, p)
        if roots:
            out.append((p, roots))
            if max_count is not None and len(out) >= max_count:
                break
    return out


def residue_image(x: FieldElement, p: int, r: int) -> int:
    """Image of x in F_p under θ ↦ r. Denominators must be coprime to p."""
    v = 0
    for c in reversed(x.coords):
        v = (v * r + c.numerator * pow(c.denominator, -1, p)) % p
    return v


def _nonresidue_witness(x: FieldElement, limit: int, max_count: int | None):
    den = math.lcm(*(c.denominator for c in x.coords))
    for p, roots in degree1_primes(x.spec, limit, avoid=den, max_count=max_count):
        for r in roots:
            v = residue_image(x, p, r)
            if v and pow(v, (p - 1) // 2, p) == p - 1:
                return p, r
    return None


def _embedding_root(x: FieldElement, start_bits: int = 120):
    """Try to reconstruct y with y² = x from numeric embeddings.

    x is scaled by the square of its coordinate denominator so any square
    root has integer coordinates; signs vary over conjugation-stable classes
    of embeddings; candidates are rounded and reverified exactly. Precision
    starts at start_bits and doubles three times before giving up.
    """
    spec = x.spec
    m = spec.degree
    den = math.lcm(*(c.denominator for c in x.coords))
    scaled = [int(c * den * den) for c in x.coords]
    for prec in (start_bits, 2 * start_bits, 4 * start_bits, 8 * start_bits):
        with mp.workprec(prec):
            roots = mp.polyroots(
                [mp.mpf(c) for c in reversed(spec.defining_poly)],
                maxsteps=200,
                extraprec=prec,
            )
            roots = sorted((mp.mpc(z) for z in roots), key=lambda z: (mp.re(z), mp.im(z)))
            tol = mp.mpf(2) ** (-(prec // 2))
            classes = []
            used = set()
            for t, z in enumerate(roots):
                if t in used:
                    continue
                if abs(mp.im(z)) < tol:
                    classes.append((t,))
                    used.add(t)
                else:
                    zc = mp.conj(z)
                    partner = min(
                        (u for u in range(m) if u not in used and u != t),
                        key=lambda u: abs(roots[u] - zc),
                    )
                    classes.append((t, partner))
                    used.update((t, partner))
            vals = [poly_eval(scaled, z) for z in roots]
            sqrts = [mp.sqrt(v) for v in vals]
            vander = mp.matrix([[z ** i for i in range(m)] for z in roots])
            for signs in product((1, -1), repeat=len(classes)):
                target = [None] * m
                for sgn, cls in zip(signs, classes):
                    target[cls[0]] = sgn * sqrts[cls[0]]
                    if len(cls) == 2:
                        target[cls[1]] = mp.conj(target[cls[0]])
                try:
                    sol = mp.lu_solve(vander, mp.matrix(target))
                except ZeroDivisionError:
                    continue
                try:
                    cand = [int(mp.nint(mp.re(sol[i]))) for i in range(m)]
                except (OverflowError, ValueError):
                    continue
                y = FieldElement(spec, [Fraction(ci, den) for ci in cand])
                if y * y == x:
                    return y
    return None


def _canonical_sign(y: FieldElement) -> FieldElement:
    for c in y.coords:
        if c != 0:
            return -y if c < 0 else y
    return y


def nf_is_square(x: FieldElement, *, start_bits: int = 120):
    """Decide squareness with an exact certificate where possible.

    Returns a SquareCertificate carrying a verified root or a nonresidue
    witness, or UNDETERMINED when the witness scan up to 10⁴ and the
    embedding reconstruction both come up empty.  start_bits sets the
    initial working precision of the embedding fallback.
    """
    if start_bits < 53:
        raise ValueError("start_bits must be at least 53")
    if not x:
        return SquareCertificate(is_square=True, root=x)
    hit = _nonresidue_witness(x, limit=2000, max_count=25)
    if hit is not None:
        return SquareCertificate(is_square=False, witness_prime=hit[0], witness_root=hit[1])
    y = _embedding_root(x, start_bits=start_bits)
    if y is not None:
        return SquareCertificate(is_square=True, root=_canonical_sign(y))
    hit = _nonresidue_witness(x, limit=10_000, max_count=None)
    if hit is not None:
        return SquareCertificate(is_square=False, witness_prime=hit[0], witness_root=hit[1])
    return UNDETERMINED
