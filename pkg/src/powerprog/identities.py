"""Exact verification of the polynomial identities the pruning rules cite.

Everything here is plain expanded multivariate arithmetic over Q or over one
of the two number fields, in at most two variables and degree 10. The point
is not computer algebra but auditability: each identity the rule engine or
the curve machinery leans on is expanded monomial by monomial, any mismatch
raises with the first offending monomial, and there is no tolerance anywhere.

The verified identities:

  fact        (αb − c)(α⁴b⁴ + α³b³c + α²b²c² + αbc³ + c⁴) = 2b⁵ − c⁵
  fact2       (αx₁ + x₄)(α⁴x₁⁴ − α³x₁³x₄ + α²x₁²x₄² − αx₁x₄³ + x₄⁴) = 2x₁⁵ + x₄⁵
  pink-tengely    x₂(u,v)² + x₄(u,v)² = 2(u² + v²)⁵
  fact3-octic     3x₂(u,v)² − x₄(u,v)² = 2(u² − 4uv + v²)·f(u,v)
  f-split-L       f(u,v) = g(u,v)·h(u,v) with quartic g, h over L
  cube-pair-discriminant   disc(3X² − 6sX + (4s² − t)) = 12(t − s²), plus the
                  square rearrangement (6w)² = 12·3w² and (X+Y)(X²−XY+Y²)=X³+Y³
  ap-linear-relations      (k−j)aᵢ − (k−i)aⱼ + (j−i)aₖ = 0 for aᵢ = a₁+(i−1)d
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import is_prime
from .numfield import FieldElement, FieldSpec, L_SPEC, scalar, theta


class IdentityError(AssertionError):
    """A claimed polynomial identity failed to expand to zero."""


def _as_coeff(value, field: FieldSpec | None):
    if isinstance(value, FieldElement):
        if field is not None and value.spec != field:
            raise ValueError("incompatible coefficient fields")
        return value
    return scalar(field, value) if field is not None else Fraction(value)


class MultiPoly:
    """Dense-map multivariate polynomial in one or two named variables.

    terms maps exponent tuples to coefficients, which are either all exact
    rationals (field None) or all elements of one number field. Zero
    coefficients are never stored.
    """

    __slots__ = ("variables", "terms", "field")

    def __init__(self, variables, terms, field: FieldSpec | None = None):
        variables = tuple(variables)
        if not 1 <= len(variables) <= 2:
            raise ValueError("polynomials here use one or two variables")
        fields = {c.spec for c in terms.values() if isinstance(c, FieldElement)}
        if len(fields) > 1:
            raise ValueError("incompatible coefficient fields")
        if fields:
            found = fields.pop()
            if field is not None and field != found:
                raise ValueError("incompatible coefficient fields")
            field = found
        clean = {}
        for exps, coeff in terms.items():
            exps = tuple(exps)
            if len(exps) != len(variables) or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent tuple {exps}")
            coeff = _as_coeff(coeff, field)
            if coeff:
                clean[exps] = coeff
        self.variables = variables
        self.terms = clean
        self.field = field

    # -- construction helpers ------------------------------------------------

    @classmethod
    def constant(cls, variables, value, field=None):
        return cls(variables, {(0,) * len(tuple(variables)): value}, field)

    @classmethod
    def variable(cls, variables, name, field=None):
        variables = tuple(variables)
        exps = tuple(1 if v == name else 0 for v in variables)
        if 1 not in exps:
            raise ValueError(f"{name} is not among {variables}")
        return cls(variables, {exps: 1}, field)

    def with_field(self, field: FieldSpec) -> "MultiPoly":
        if self.field == field:
            return self
        if self.field is not None:
            raise ValueError("incompatible coefficient fields")
        return MultiPoly(self.variables, {e: scalar(field, c) for e, c in self.terms.items()}, field)

    # -- arithmetic ----------------------------------------------------------

    def _pair(self, other):
        if isinstance(other, (int, Fraction, FieldElement)):
            other = MultiPoly.constant(
                self.variables, other, other.spec if isinstance(other, FieldElement) else None
            )
        if not isinstance(other, MultiPoly):
            return None, None
        if self.variables != other.variables:
            raise ValueError("variable sets differ")
        a, b = self, other
        if a.field != b.field:
            if a.field is None:
                a = a.with_field(b.field)
            elif b.field is None:
                b = b.with_field(a.field)
            else:
                raise ValueError("incompatible coefficient fields")
        return a, b

    def __add__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        terms = dict(a.terms)
        for exps, coeff in b.terms.items():
            terms[exps] = terms.get(exps, 0) + coeff
        return MultiPoly(a.variables, terms, a.field)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.variables, {e: -c for e, c in self.terms.items()}, self.field)

    def __sub__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return b + (-a)

    def __mul__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        terms = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                key = tuple(x + y for x, y in zip(e1, e2))
                terms[key] = terms.get(key, 0) + c1 * c2
        return MultiPoly(a.variables, terms, a.field)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = MultiPoly.constant(self.variables, 1, self.field)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __eq__(self, other):
        try:
            a, b = self._pair(other)
        except ValueError:
            return False
        if a is None:
            return NotImplemented
        return a.terms == b.terms

    def __bool__(self):
        return bool(self.terms)

    # -- inspection ----------------------------------------------------------

    @property
    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def evaluate(self, *point):
        """Plug in numbers (or field elements) positionally."""
        if len(point) != len(self.variables):
            raise ValueError("point arity does not match variables")
        acc = _as_coeff(0, self.field)
        for exps, coeff in self.terms.items():
            term = coeff
            for val, e in zip(point, exps):
                for _ in range(e):
                    term = term * val
            acc = acc + term
        return acc

    def _monomial_str(self, exps) -> str:
        parts = []
        for name, e in zip(self.variables, exps):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "·".join(parts) if parts else "1"

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for exps in sorted(self.terms, reverse=True):
            coeff = self.terms[exps]
            mono = self._monomial_str(exps)
            if mono == "1":
                bits.append(f"({coeff!r})" if self.field else str(coeff))
            elif coeff == 1:
                bits.append(mono)
            else:
                c = f"({coeff!r})" if self.field else str(coeff)
                bits.append(f"{c}·{mono}")
        return " + ".join(bits)


def poly_arith(op: str, p: MultiPoly, q) -> MultiPoly:
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    if op == "pow":
        if not isinstance(q, int):
            raise ValueError("pow exponent must be an integer")
        return p ** q
    raise ValueError(f"unknown operation {op!r}")


def assert_poly_equal(identity_id: str, lhs: MultiPoly, rhs: MultiPoly) -> None:
    """Raise IdentityError with the first offending monomial on mismatch."""
    diff = lhs - rhs
    if diff:
        exps = min(diff.terms)
        raise IdentityError(
            f"{identity_id}: coefficient mismatch at {diff._monomial_str(exps)}: "
            f"difference {diff.terms[exps]!r}"
        )


# ---------------------------------------------------------------------------
# the concrete forms


def pt_x2() -> MultiPoly:
    """x₂(u,v) = u⁵ − 5u⁴v − 10u³v² + 10u²v³ + 5uv⁴ − v⁵."""
    return MultiPoly(
        ("u", "v"),
        {(5, 0): 1, (4, 1): -5, (3, 2): -10, (2, 3): 10, (1, 4): 5, (0, 5): -1},
    )


def pt_x4() -> MultiPoly:
    """x₄(u,v) = u⁵ + 5u⁴v − 10u³v² − 10u²v³ + 5uv⁴ + v⁵."""
    return MultiPoly(
        ("u", "v"),
        {(5, 0): 1, (4, 1): 5, (3, 2): -10, (2, 3): -10, (1, 4): 5, (0, 5): 1},
    )


def octic_form() -> MultiPoly:
    """The degree-8 integer form appearing in the square-pair descent."""
    coeffs = (1, -16, -60, 16, 134, 16, -60, -16, 1)
    return MultiPoly(("u", "v"), {(8 - i, i): c for i, c in enumerate(coeffs)})


def quartic_g_over_L() -> MultiPoly:
    b = theta(L_SPEC)
    coeffs = (scalar(L_SPEC, 1), 8 * b - 12, 16 * b - 30, 8 * b - 12, scalar(L_SPEC, 1))
    return MultiPoly(("u", "v"), {(4 - i, i): c for i, c in enumerate(coeffs)}, L_SPEC)


def quartic_h_over_L() -> MultiPoly:
    b = theta(L_SPEC)
    coeffs = (scalar(L_SPEC, 1), -8 * b - 4, -16 * b - 14, -8 * b - 4, scalar(L_SPEC, 1))
    return MultiPoly(("u", "v"), {(4 - i, i): c for i, c in enumerate(coeffs)}, L_SPEC)


# ---------------------------------------------------------------------------
# the verification suite


@dataclass(frozen=True)
class IdentityReport:
    identity_id: str
    statement: str
    status: str

    def to_json(self) -> dict:
        return {"id": self.identity_id, "statement": self.statement, "status": self.status}


def _report(identity_id: str, statement: str) -> IdentityReport:
    return IdentityReport(identity_id=identity_id, statement=statement, status="holds")


def verify_factorizations() -> list[IdentityReport]:
    """The two quintic factorizations over K behind the norm descent."""
    from .numfield import ALPHA, K_SPEC, one

    a = ALPHA
    b = MultiPoly.variable(("b", "c"), "b")
    c = MultiPoly.variable(("b", "c"), "c")
    lhs = (a * b - c) * (
        (a ** 4) * b ** 4 + (a ** 3) * b ** 3 * c + (a ** 2) * b ** 2 * c ** 2 + a * b * c ** 3 + c ** 4
    )
    assert_poly_equal("fact", lhs, 2 * b ** 5 - c ** 5)
    if lhs.evaluate(1, 1) != one(K_SPEC):
        raise IdentityError("fact: spot check b=c=1 failed")

    x1 = MultiPoly.variable(("x1", "x4"), "x1")
    x4 = MultiPoly.variable(("x1", "x4"), "x4")
    lhs2 = (a * x1 + x4) * (
        (a ** 4) * x1 ** 4
        - (a ** 3) * x1 ** 3 * x4
        + (a ** 2) * x1 ** 2 * x4 ** 2
        - a * x1 * x4 ** 3
        + x4 ** 4
    )
    assert_poly_equal("fact2", lhs2, 2 * x1 ** 5 + x4 ** 5)
    return [
        _report("fact", "(αb − c)(α⁴b⁴ + α³b³c + α²b²c² + αbc³ + c⁴) = 2b⁵ − c⁵ over K"),
        _report("fact2", "(αx₁ + x₄)(α⁴x₁⁴ − α³x₁³x₄ + α²x₁²x₄² − αx₁x₄³ + x₄⁴) = 2x₁⁵ + x₄⁵ over K"),
    ]


def verify_pink_tengely() -> IdentityReport:
    """The parametrized square pair sums to twice a fifth power of u² + v²."""
    u = MultiPoly.variable(("u", "v"), "u")
    v = MultiPoly.variable(("u", "v"), "v")
    lhs = pt_x2() ** 2 + pt_x4() ** 2
    assert_poly_equal("pink-tengely", lhs, 2 * (u ** 2 + v ** 2) ** 5)
    if (pt_x2().evaluate(2, 1), pt_x4().evaluate(2, 1)) != (-79, 3):
        raise IdentityError("pink-tengely: spot check (u,v)=(2,1) failed")
    if lhs.evaluate(2, 1) != 6250 or lhs.evaluate(1, 0) != 2:
        raise IdentityError("pink-tengely: numeric spot checks failed")
    return _report("pink-tengely", "x₂(u,v)² + x₄(u,v)² = 2(u² + v²)⁵")


def verify_fact3() -> IdentityReport:
    """3x₂² − x₄² factors as 2(u² − 4uv + v²) times the octic form."""
    u = MultiPoly.variable(("u", "v"), "u")
    v = MultiPoly.variable(("u", "v"), "v")
    lhs = 3 * pt_x2() ** 2 - pt_x4() ** 2
    rhs = 2 * (u ** 2 - 4 * u * v + v ** 2) * octic_form()
    assert_poly_equal("fact3-octic", lhs, rhs)
    if octic_form().evaluate(2, 1) != -3119 or lhs.evaluate(2, 1) != 18714:
        raise IdentityError("fact3-octic: spot check (u,v)=(2,1) failed")
    if octic_form().evaluate(1, 0) != 1 or lhs.evaluate(1, 0) != 2:
        raise IdentityError("fact3-octic: spot check (u,v)=(1,0) failed")
    return _report("fact3-octic", "3x₂(u,v)² − x₄(u,v)² = 2(u² − 4uv + v²)·f(u,v)")


def verify_f_split_over_L() -> IdentityReport:
    """The octic form splits into two conjugate quartics over L."""
    from .numfield import scalar as nf_scalar

    g = quartic_g_over_L()
    h = quartic_h_over_L()
    assert_poly_equal("f-split-L", g * h, octic_form().with_field(L_SPEC))
    prod = g.evaluate(2, 1) * h.evaluate(2, 1)
    if prod != nf_scalar(L_SPEC, -3119):
        raise IdentityError("f-split-L: evaluation at (u,v)=(2,1) is not rational -3119")
    if g.evaluate(1, 0) != nf_scalar(L_SPEC, 1) or h.evaluate(1, 0) != nf_scalar(L_SPEC, 1):
        raise IdentityError("f-split-L: evaluation at (u,v)=(1,0) failed")
    return _report("f-split-L", "f(u,v) = g(u,v)·h(u,v) with conjugate quartics g, h over L")


def verify_discriminant_33n(n: int) -> IdentityReport:
    """Discriminant bookkeeping for the quadratic in the cube-pair descent.

    With s, t standing for the two n-th power values, the quadratic
    3X² − 6sX + (4s² − t) has discriminant 12(t − s²); a square discriminant
    w² needs 6 | w, and then t − s² = 3(w/6)². All three steps are checked,
    the middle one by exhausting residues mod 12.
    """
    if n < 3 or not is_prime(n):
        raise ValueError("the exponent must be a prime of at least 3")
    s = MultiPoly.variable(("s", "t"), "s")
    t = MultiPoly.variable(("s", "t"), "t")
    disc = (-6 * s) ** 2 - 4 * 3 * (4 * s ** 2 - t)
    assert_poly_equal("cube-pair-discriminant", disc, 12 * (t - s ** 2))

    w = MultiPoly.variable(("w",), "w")
    assert_poly_equal("cube-pair-discriminant", (6 * w) ** 2, 12 * (3 * w ** 2))
    for x in range(12):
        if (x * x % 12 == 0) != (x % 6 == 0):
            raise IdentityError("cube-pair-discriminant: mod-12 square scan failed")

    X = MultiPoly.variable(("X", "Y"), "X")
    Y = MultiPoly.variable(("X", "Y"), "Y")
    assert_poly_equal("cube-pair-discriminant", (X + Y) * (X ** 2 - X * Y + Y ** 2), X ** 3 + Y ** 3)

    if disc.evaluate(1, 2 ** n) != 12 * (2 ** n - 1):
        raise IdentityError("cube-pair-discriminant: spot check U=1, V=2 failed")
    if disc.evaluate(1, 1) != 0:
        raise IdentityError("cube-pair-discriminant: spot check U=V=1 failed")
    return _report(
        "cube-pair-discriminant",
        "disc(3X² − 6sX + (4s² − t)) = 12(t − s²); square discriminants force t − s² = 3w²",
    )


def verify_ap_linear_relations() -> IdentityReport:
    """Universal linear relation among any three terms of a progression."""
    a1 = MultiPoly.variable(("a1", "d"), "a1")
    d = MultiPoly.variable(("a1", "d"), "d")

    def term(i):
        return a1 + (i - 1) * d

    zero_poly = MultiPoly(("a1", "d"), {})
    for i in range(1, 8):
        for j in range(i + 1, 8):
            for k in range(j + 1, 8):
                rel = (k - j) * term(i) - (k - i) * term(j) + (j - i) * term(k)
                assert_poly_equal("ap-linear-relations", rel, zero_poly)
    # named instances used directly by the rules
    assert_poly_equal("ap-linear-relations", term(1) + term(3), 2 * term(2))
    assert_poly_equal("ap-linear-relations", term(1) - 4 * term(4) + 3 * term(5), zero_poly)
    assert_poly_equal("ap-linear-relations", 2 * term(1) - 3 * term(2) + term(4), zero_poly)
    assert_poly_equal("ap-linear-relations", term(2) + term(4), 2 * term(3))
    return _report(
        "ap-linear-relations",
        "(k−j)aᵢ − (k−i)aⱼ + (j−i)aₖ = 0 for aᵢ = a₁ + (i−1)d, all 1 ≤ i < j < k ≤ 7",
    )


def verify_all() -> list[IdentityReport]:
    """Run the whole suite; any failure aborts with IdentityError."""
    reports = []
    reports.extend(verify_factorizations())
    reports.append(verify_pink_tengely())
    reports.append(verify_fact3())
    reports.append(verify_f_split_over_L())
    for n in (3, 5, 7):
        report = verify_discriminant_33n(n)
    reports.append(report)
    reports.append(verify_ap_linear_relations())
    return sorted(reports, key=lambda r: r.identity_id)
