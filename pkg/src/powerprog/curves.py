"""Rational-point computations behind the curve-based pruning rules.

Two kinds of curves appear. The genus-one quartics over K = Q(2^(1/5)) and
L = Q((1+sqrt 5)/2) are scanned for rational X up to a height bound, exact
squareness deciding each lift; the literature pins the full rational X-sets
by elliptic Chabauty, so the scans are consistency evidence, not proofs.
The two square-position family curves live over Q and get exact treatment:
Lutz-Nagell torsion with orders, plus a bounded point scan backing the
published rank-zero facts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from typing import Optional, Sequence

from .arith import kth_power_base, primes_below
from .numfield import (
    ALPHA,
    BETA,
    FieldElement,
    FieldSpec,
    K_SPEC,
    L_SPEC,
    UNDETERMINED,
    degree1_primes,
    nf_is_square,
    one,
    residue_image,
    scalar,
)
from .parallel import pmap, resolve_workers

MAX_SCAN_HEIGHT = 10**4


class UndeterminedSquareness(RuntimeError):
    """Raised when a lift can neither be confirmed nor refuted exactly."""


# ---------------------------------------------------------------------------
# quartic models over the two number fields


@dataclass(frozen=True)
class QuarticModel:
    """lambda * Y^2 = c4*X^4 + c3*X^3 + c2*X^2 + c1*X + c0, X in Q, Y in the field."""

    name: str
    spec: FieldSpec
    coefficients: tuple[FieldElement, ...]  # c4 down to c0
    twist: FieldElement

    def __post_init__(self) -> None:
        if len(self.coefficients) != 5:
            raise ValueError("a quartic takes five coefficients, c4 down to c0")
        for c in self.coefficients:
            if c.spec != self.spec:
                raise ValueError("coefficient field mismatch")
        if self.twist.spec != self.spec:
            raise ValueError("twist field mismatch")
        if not self.twist:
            raise ValueError("twist must be nonzero")
        if not self.coefficients[0]:
            raise ValueError("leading coefficient must be nonzero")

    def homogeneous_value(self, a: int, b: int) -> FieldElement:
        """c4*a^4 + c3*a^3*b + c2*a^2*b^2 + c1*a*b^3 + c0*b^4, an integral value."""
        acc = scalar(self.spec, 0)
        power = 1
        for c in self.coefficients:
            acc = acc * a + c * power
            power *= b
        return acc

    def to_json(self) -> dict:
        return {
            "curve": self.name,
            "field": self.spec.name,
            "coefficients": [c.to_json() for c in self.coefficients],
            "twist": self.twist.to_json(),
        }


def curve_C1() -> QuarticModel:
    a = ALPHA
    return QuarticModel(
        name="C1",
        spec=K_SPEC,
        coefficients=(a**4, a**3, a**2, a, one(K_SPEC)),
        twist=a - 1,
    )


def curve_C2() -> QuarticModel:
    a = ALPHA
    return QuarticModel(
        name="C2",
        spec=K_SPEC,
        coefficients=(a**4, -(a**3), a**2, -a, one(K_SPEC)),
        twist=a**4 - a**3 + a**2 - a + 1,
    )


def curve_C3() -> QuarticModel:
    b = BETA
    return QuarticModel(
        name="C3",
        spec=L_SPEC,
        coefficients=(
            one(L_SPEC),
            8 * b - 12,
            16 * b - 30,
            8 * b - 12,
            one(L_SPEC),
        ),
        twist=one(L_SPEC),
    )


def make_quartic(name: str) -> QuarticModel:
    factories = {"C1": curve_C1, "C2": curve_C2, "C3": curve_C3}
    if name not in factories:
        raise ValueError(f"unknown quartic {name!r}, expected C1, C2 or C3")
    return factories[name]()


@dataclass(frozen=True)
class LiftOutcome:
    """Result of testing one rational X against a quartic model."""

    curve: str
    X: Fraction
    square: bool
    roots: tuple[FieldElement, ...]  # (Y, -Y) when square, else empty
    witness: tuple[int, int] | None  # nonresidue prime and polynomial root

    def to_json(self) -> dict:
        payload: dict = {"curve": self.curve, "X": str(self.X), "square": self.square}
        if self.square:
            payload["Y"] = [r.to_json() for r in self.roots]
        else:
            payload["witness_prime"], payload["witness_root"] = self.witness
        return payload


def quartic_lift(model: QuarticModel, X, *, precision: int = 120) -> LiftOutcome:
    """Exact lift test: is quartic(X)/twist a square in the field?

    Works with the integral value T = twist * Y * b^2, whose square is
    twist * (homogeneous value); squareness of that integral element is
    equivalent and keeps the certificates denominator-free. Undetermined
    squareness raises; it is never reported as a nonsquare.
    """
    X = Fraction(X)
    a, b = X.numerator, X.denominator
    value = model.homogeneous_value(a, b) * model.twist
    cert = nf_is_square(value, start_bits=precision)
    if cert is UNDETERMINED:
        raise UndeterminedSquareness(
            f"{model.name} at X={X}: squareness undecided, refusing to guess"
        )
    if cert.is_square:
        y = cert.root / (model.twist * b * b)
        roots = (y,) if not y else (y, -y)
        return LiftOutcome(model.name, X, True, roots, None)
    return LiftOutcome(
        model.name, X, False, (), (cert.witness_prime, cert.witness_root)
    )


def _residue_channels(model: QuarticModel, max_channels: int = 8):
    """Mod-p filters from degree-1 primes: T^2 = twist*W forces the image of
    twist*W to be a square mod p. Channels where the twist vanishes carry no
    information and are skipped."""
    channels = []
    for p, roots in degree1_primes(model.spec, 200):
        for r in roots:
            twist_img = residue_image(model.twist, p, r)
            if twist_img == 0:
                continue
            coeff_imgs = tuple(
                residue_image(c, p, r) for c in model.coefficients
            )
            squares = frozenset((x * x) % p for x in range(p))
            channels.append((p, coeff_imgs, twist_img, squares))
            if len(channels) == max_channels:
                return channels
    return channels


def _passes_channels(channels, a: int, b: int) -> bool:
    for p, coeffs, twist_img, squares in channels:
        am, bm = a % p, b % p
        acc = 0
        power = 1
        for c in coeffs:
            acc = (acc * am + c * power) % p
            power = (power * bm) % p
        if (acc * twist_img) % p not in squares:
            return False
    return True


def _scan_quartic_rows(
    model: QuarticModel, height: int, channels, precision: int, rows
) -> list:
    found = []
    for b in rows:
        for a in range(-height, height + 1):
            if math.gcd(a, b) != 1:
                continue
            if not _passes_channels(channels, a, b):
                continue
            outcome = quartic_lift(model, Fraction(a, b), precision=precision)
            if outcome.square:
                found.append(outcome)
    return found


def scan_quartic(
    model: QuarticModel,
    height: int,
    workers: int | None = None,
    *,
    precision: int = 120,
) -> list[LiftOutcome]:
    """All X = a/b with max(|a|, b) <= height that lift to field points.

    Sound mod-p prefilters discard most candidates; survivors get the exact
    certificate test, so the output carries verified roots only.
    """
    if not 1 <= height <= MAX_SCAN_HEIGHT:
        raise ValueError(f"height must be between 1 and {MAX_SCAN_HEIGHT}")
    channels = _residue_channels(model)
    rows = list(range(1, height + 1))
    count = resolve_workers(workers)
    if count == 1 or height < 16:
        found = _scan_quartic_rows(model, height, channels, precision, rows)
    else:
        # interleave rows so each chunk sees a mix of small and large b
        chunks = [rows[i::4 * count] for i in range(4 * count)]
        chunks = [c for c in chunks if c]
        parts = pmap(
            partial(_scan_quartic_rows, model, height, channels, precision),
            chunks,
            workers=count,
        )
        found = [o for part in parts for o in part]
    found.sort(key=lambda o: o.X)
    return found


# ---------------------------------------------------------------------------
# square-position family curves over Q


_FAMILIES = {
    frozenset({0, 1, 3, 4}): ((1, 3, 4), 12),
    frozenset({0, 1, 4, 5}): ((1, 4, 5), 20),
}


@dataclass(frozen=True)
class CubicModelQ:
    """Integral Weierstrass model v^2 = u^3 + A u^2 + B u + C over Q."""

    family: str
    A: int
    B: int
    C: int
    multipliers: tuple[int, ...]
    scale: int
    window: int  # progression length the square positions live in

    def __post_init__(self) -> None:
        if self.cubic_discriminant() == 0:
            raise ValueError("singular cubic model")

    def cubic_discriminant(self) -> int:
        A, B, C = self.A, self.B, self.C
        return (
            18 * A * B * C - 4 * A**3 * C + A**2 * B**2 - 4 * B**3 - 27 * C**2
        )

    @property
    def discriminant(self) -> int:
        return 16 * self.cubic_discriminant()

    def rhs(self, u: Fraction) -> Fraction:
        return u**3 + self.A * u**2 + self.B * u + self.C

    def contains(self, point) -> bool:
        if point is None:
            return True
        u, v = point
        return Fraction(v) ** 2 == self.rhs(Fraction(u))

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "model": f"v^2 = u^3 + {self.A}*u^2 + {self.B}*u + {self.C}",
            "substitution": f"u = {self.scale}*X, v = {self.scale}*Y",
        }


def family_curve(square_positions) -> CubicModelQ:
    """Integral model of (1+X)(1+m2*X)(1+m3*X) = Y^2 for a square-position set.

    Positions {0,1,3,4} give multipliers (1,3,4) and u = 12X, v = 12Y;
    positions {0,1,4,5} give (1,4,5) and u = 20X, v = 20Y.
    """
    key = frozenset(square_positions)
    if key not in _FAMILIES:
        raise ValueError(
            "supported square-position families are {0,1,3,4} and {0,1,4,5}"
        )
    multipliers, scale = _FAMILIES[key]
    m1, m2, m3 = multipliers
    r1, r2, r3 = scale // m1, scale // m2, scale // m3
    # (u + s/m1)(u + s/m2)(u + s/m3), roots are the negated scaled shifts
    A = r1 + r2 + r3
    B = r1 * r2 + r1 * r3 + r2 * r3
    C = r1 * r2 * r3
    return CubicModelQ(
        family="".join(str(m) for m in multipliers),
        A=A,
        B=B,
        C=C,
        multipliers=multipliers,
        scale=scale,
        window=max(key) + 1,
    )


Point = Optional[tuple[Fraction, Fraction]]


def add_points(curve: CubicModelQ, p1: Point, p2: Point) -> Point:
    """Chord-tangent addition on v^2 = u^3 + Au^2 + Bu + C; None is infinity."""
    if p1 is None:
        return p2
    if p2 is None:
        return p1
    u1, v1 = (Fraction(c) for c in p1)
    u2, v2 = (Fraction(c) for c in p2)
    if u1 == u2 and v1 == -v2:
        return None
    if (u1, v1) == (u2, v2):
        if v1 == 0:
            return None
        slope = (3 * u1**2 + 2 * curve.A * u1 + curve.B) / (2 * v1)
    else:
        slope = (v2 - v1) / (u2 - u1)
    u3 = slope**2 - curve.A - u1 - u2
    v3 = slope * (u1 - u3) - v1
    return (u3, v3)


def _point_order(curve: CubicModelQ, point: Point, cap: int = 12) -> int | None:
    """Exact order if at most cap, else None (not torsion, by Mazur)."""
    if point is None:
        return 1
    acc: Point = point
    for k in range(2, cap + 1):
        acc = add_points(curve, acc, point)
        if acc is None:
            return k
    return None


def _count_points_mod(curve: CubicModelQ, p: int) -> int:
    count = 1  # infinity
    for u in range(p):
        f = (u**3 + curve.A * u**2 + curve.B * u + curve.C) % p
        if f == 0:
            count += 1
        elif pow(f, (p - 1) // 2, p) == 1:
            count += 2
    return count


def _square_divisors(n: int) -> list[int]:
    n = abs(n)
    out = []
    v = 1
    while v * v <= n:
        if n % (v * v) == 0:
            out.append(v)
        v += 1
    return out


def _integer_roots(A: int, B: int, C: int) -> list[int]:
    """Integer roots of the monic cubic u^3 + Au^2 + Bu + C."""
    if C == 0:
        # u divides out, leaving the quadratic u^2 + Au + B
        roots = {0}
        disc = A * A - 4 * B
        if disc >= 0:
            s = math.isqrt(disc)
            if s * s == disc:
                for num in (-A + s, -A - s):
                    if num % 2 == 0:
                        roots.add(num // 2)
        return sorted(roots)
    roots = set()
    d = 1
    limit = abs(C)
    while d * d <= limit:
        if limit % d == 0:
            for cand in (d, -d, limit // d, -(limit // d)):
                if cand**3 + A * cand**2 + B * cand + C == 0:
                    roots.add(cand)
        d += 1
    return sorted(roots)


@dataclass(frozen=True)
class TorsionPoint:
    """Affine torsion point, or the identity when u and v are None."""

    u: int | None
    v: int | None
    order: int

    @property
    def is_infinity(self) -> bool:
        return self.u is None

    def to_json(self) -> dict:
        if self.is_infinity:
            return {"point": "infinity", "order": self.order}
        return {"u": self.u, "v": self.v, "order": self.order}


def torsion_over_Q(curve: CubicModelQ) -> tuple[TorsionPoint, ...]:
    """Full torsion subgroup by Lutz-Nagell, with exact orders.

    Candidates are the integral points with v = 0 or v^2 dividing the
    discriminant; each surviving candidate's order is computed exactly, and
    the subgroup size is cross-checked against point counts modulo the two
    smallest good primes.
    """
    candidates: list[Point] = []
    for u in _integer_roots(curve.A, curve.B, curve.C):
        candidates.append((Fraction(u), Fraction(0)))
    for v in _square_divisors(curve.discriminant):
        for u in _integer_roots(curve.A, curve.B, curve.C - v * v):
            candidates.append((Fraction(u), Fraction(v)))
            candidates.append((Fraction(u), Fraction(-v)))

    points = [TorsionPoint(None, None, 1)]
    for cand in candidates:
        order = _point_order(curve, cand)
        if order is not None:
            points.append(TorsionPoint(int(cand[0]), int(cand[1]), order))

    good = [
        p
        for p in primes_below(100)
        if p > 2 and curve.discriminant % p != 0
    ][:2]
    bound = math.gcd(*(_count_points_mod(curve, p) for p in good))
    if bound % len(points) != 0:
        raise RuntimeError(
            f"torsion count {len(points)} incompatible with reduction bound {bound}"
        )
    points.sort(key=lambda t: (not t.is_infinity, t.u, t.v))
    return tuple(points)


def scan_rational_points_Q(
    curve: CubicModelQ, height: int, workers: int | None = None
) -> list[tuple[Fraction, Fraction]]:
    """Affine rational points (u, v) = (p/e^2, r/e^3) with |p|, e^2 <= height.

    Used as desk-scale evidence for the published rank-zero facts: at the
    shipped heights only torsion shows up.
    """
    if not 1 <= height <= MAX_SCAN_HEIGHT:
        raise ValueError(f"height must be between 1 and {MAX_SCAN_HEIGHT}")
    es = [e for e in range(1, math.isqrt(height) + 1)]
    count = resolve_workers(workers)
    if count == 1 or len(es) < 8:
        parts = [_scan_cubic_rows(curve, height, es)]
    else:
        chunks = [es[i::count] for i in range(count)]
        chunks = [c for c in chunks if c]
        parts = pmap(partial(_scan_cubic_rows, curve, height), chunks, workers=count)
    found = sorted({pt for part in parts for pt in part})
    return found


def _scan_cubic_rows(curve: CubicModelQ, height: int, es) -> list:
    found = []
    for e in es:
        e2, e4, e6 = e * e, e**4, e**6
        for p in range(-height, height + 1):
            if math.gcd(p, e) != 1:
                continue
            rhs = p**3 + curve.A * p * p * e2 + curve.B * p * e4 + curve.C * e6
            if rhs < 0:
                continue
            r = math.isqrt(rhs)
            if r * r != rhs:
                continue
            u = Fraction(p, e2)
            v = Fraction(r, e * e2)
            found.append((u, v))
            if r:
                found.append((u, -v))
    return found


# ---------------------------------------------------------------------------
# torsion points back to candidate progressions


@dataclass(frozen=True)
class ProgressionCandidate:
    """Attempt to realize a torsion point as a power progression."""

    family: str
    point: TorsionPoint
    X: Fraction | None
    terms: tuple[int, ...] | None
    accepted: bool
    reason: str

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "point": self.point.to_json(),
            "X": None if self.X is None else str(self.X),
            "terms": None if self.terms is None else list(self.terms),
            "accepted": self.accepted,
            "reason": self.reason,
        }


def _is_high_power(value: int) -> bool:
    """True when value = x^n for some prime n >= 7 (0 and +-1 qualify)."""
    if value in (-1, 0, 1):
        return True
    for n in (7, 11, 13, 17, 19, 23):
        if 2**n > abs(value):
            break
        if kth_power_base(value, n) is not None:
            return True
    return False


def _progression_failure(
    terms: Sequence[int], square_offsets, power_offsets
) -> str | None:
    for k in square_offsets:
        t = terms[k]
        if t < 0 or math.isqrt(max(t, 0)) ** 2 != t:
            return f"term {t} at offset {k} is not a perfect square"
    for k in power_offsets:
        t = terms[k]
        if not _is_high_power(t):
            return f"term {t} at offset {k} is no n-th power for any prime n >= 7"
    return None


def torsion_to_progression(
    point: TorsionPoint, curve: CubicModelQ
) -> ProgressionCandidate:
    """Map a torsion point back through u = scale*X, X = d/a1 and test it.

    X reconstructs the minimal primitive integer progression a1 + k*d over
    the family window; acceptance would need squares at the family offsets
    and a high prime power at every remaining offset, for one of the two
    signs. Every shipped torsion point fails, matching the source argument.
    """
    if point.is_infinity:
        return ProgressionCandidate(
            curve.family, point, None, None, False,
            "point at infinity carries no X coordinate",
        )
    if not curve.contains((point.u, point.v)):
        raise ValueError(f"point ({point.u}, {point.v}) is not on the curve")
    X = Fraction(point.u, curve.scale)
    if X == 0:
        return ProgressionCandidate(
            curve.family, point, X, None, False,
            "constant progression: X = d/a1 = 0",
        )
    d, a1 = X.numerator, X.denominator
    terms = tuple(a1 + k * d for k in range(curve.window))
    square_offsets = sorted({0, *curve.multipliers})
    power_offsets = [
        k for k in range(curve.window) if k not in square_offsets
    ]
    reasons = []
    for sign in (1, -1):
        signed = tuple(sign * t for t in terms)
        failure = _progression_failure(signed, square_offsets, power_offsets)
        if failure is None:
            return ProgressionCandidate(
                curve.family, point, X, signed, True, "all position checks passed"
            )
        reasons.append(failure if sign == 1 else f"negated: {failure}")
    return ProgressionCandidate(
        curve.family, point, X, terms, False, "; ".join(reasons)
    )
