"""Exponent-pattern pruning for arithmetic progressions of perfect powers.

A progression a_1, ..., a_t of perfect powers a_i = x_i^{l_i} is seen here
only through its exponent tuple (l_1, ..., l_t), called a pattern.  Every
pattern draws its letters from a two-letter alphabet: squares with an odd
prime exponent n bounded below ("2n"), squares with fifth powers ("25"),
or cubes with n ("3n").

Three ingredients turn known Diophantine finiteness results into a sieve
on patterns:

* ``derive_relation`` rewrites the progression identity
  (k - j) a_i + (j - i) a_k = (k - i) a_j at chosen positions i < j < k
  as an integer relation between the powers standing there.
* Relation rules match such a relation, up to term order and sign
  absorption under odd exponents, against ternary equations with no
  nontrivial solutions (Bennett-Skinner, Bruin, Darmon-Merel,
  Bennett-Vatsal-Yazdani, and a cube variant settled by descent plus an
  exhaustive mod 9 scan).
* Subpattern rules exclude square and fifth-power placements through the
  Fermat-Euler four-squares theorem, two rank-zero elliptic curves, and
  elliptic Chabauty results over Q(2^(1/5)) and Q(sqrt 5).

``prune`` applies the rules in a fixed deterministic order and returns a
replayable certificate naming the rule, the positions, and the derived
relation or residue transcript.  ``enumerate_admissible`` folds the sieve
over all patterns of a given length.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from .arith import is_prime
from .parallel import pmap

MAX_PATTERN_LENGTH = 12

# Relation rules are only ever applied inside this window; the pairwise
# coprimality argument recorded in certificates depends on it.
MAX_TRIPLE_SPAN = 6

_CONCRETE_VALUES = (2, 3, 5)


# ---------------------------------------------------------------------------
# alphabets and patterns


@dataclass(frozen=True)
class ExponentSymbol:
    """One letter of an exponent alphabet.

    Concrete letters carry the exponent itself (2, 3 or 5).  The symbolic
    letter stands for a single unspecified prime exponent n >= min_prime;
    the bound travels with the letter because rule applicability depends
    on it.
    """

    value: int | None = None
    min_prime: int | None = None

    def __post_init__(self) -> None:
        if (self.value is None) == (self.min_prime is None):
            raise ValueError("exactly one of value and min_prime must be set")
        if self.value is not None and self.value not in _CONCRETE_VALUES:
            raise ValueError(
                f"concrete exponent must be one of {_CONCRETE_VALUES}"
            )
        if self.min_prime is not None and (
            self.min_prime < 5 or not is_prime(self.min_prime)
        ):
            # the mod 9 envelope below relies on gcd(e, 6) = 1
            raise ValueError("symbolic exponent bound must be a prime >= 5")

    @property
    def is_symbolic(self) -> bool:
        return self.value is None

    @property
    def label(self) -> str:
        return "n" if self.is_symbolic else str(self.value)

    @property
    def is_odd(self) -> bool:
        # symbolic letters are primes >= 5, hence odd
        return True if self.is_symbolic else self.value % 2 == 1

    @property
    def sort_key(self) -> tuple[int, int]:
        if self.is_symbolic:
            return (1, self.min_prime)
        return (0, self.value)

    @classmethod
    def concrete(cls, value: int) -> "ExponentSymbol":
        return cls(value=value)

    @classmethod
    def symbolic(cls, min_prime: int) -> "ExponentSymbol":
        return cls(min_prime=min_prime)

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class Pattern:
    """A tuple of exponent symbols, one per progression position."""

    symbols: tuple[ExponentSymbol, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "symbols", tuple(self.symbols))
        if not self.symbols:
            raise ValueError("pattern must contain at least one exponent")
        if len({s for s in self.symbols if s.is_symbolic}) > 1:
            raise ValueError("pattern mixes two different symbolic exponents")

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def symbol_at(self, position: int) -> ExponentSymbol:
        """1-based access, matching the x_1, ..., x_t naming in output."""
        if not 1 <= position <= len(self.symbols):
            raise ValueError(
                f"position {position} outside 1..{len(self.symbols)}"
            )
        return self.symbols[position - 1]

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(s.label for s in self.symbols)

    def reverse(self) -> "Pattern":
        return Pattern(self.symbols[::-1])

    def to_json(self) -> list[str]:
        return list(self.labels)

    def __str__(self) -> str:
        return "(" + ",".join(self.labels) + ")"


@dataclass(frozen=True)
class Alphabet:
    """Two-letter exponent alphabet with at most one symbolic letter."""

    name: str
    symbols: tuple[ExponentSymbol, ...]

    def __post_init__(self) -> None:
        ordered = tuple(sorted(self.symbols, key=lambda s: s.sort_key))
        object.__setattr__(self, "symbols", ordered)
        if not ordered:
            raise ValueError("alphabet needs at least one symbol")
        if len({s.label for s in ordered}) != len(ordered):
            raise ValueError("alphabet symbols must have distinct labels")
        if sum(1 for s in ordered if s.is_symbolic) > 1:
            raise ValueError("at most one symbolic exponent per alphabet")

    @property
    def nmin(self) -> int | None:
        for s in self.symbols:
            if s.is_symbolic:
                return s.min_prime
        return None

    def symbol_for(self, label: object) -> ExponentSymbol:
        wanted = str(label)
        for s in self.symbols:
            if s.label == wanted:
                return s
        raise ValueError(f"alphabet {self.name!r} has no symbol {wanted!r}")

    def pattern(self, *labels: object) -> Pattern:
        return Pattern(tuple(self.symbol_for(l) for l in labels))

    def contains(self, pattern: Pattern) -> bool:
        return all(s in self.symbols for s in pattern)


def make_alphabet(name: str, nmin: int | None = None) -> Alphabet:
    """Build one of the three supported exponent alphabets.

    "2n" pairs squares with a symbolic prime n >= nmin (default 7), "25"
    pairs squares with fifth powers and takes no bound, and "3n" pairs
    cubes with n >= nmin (default 5).
    """
    if name == "2n":
        bound = 7 if nmin is None else nmin
        return Alphabet(
            name,
            (ExponentSymbol.concrete(2), ExponentSymbol.symbolic(bound)),
        )
    if name == "25":
        if nmin is not None:
            raise ValueError(
                "alphabet '25' has no symbolic exponent, nmin does not apply"
            )
        return Alphabet(
            name, (ExponentSymbol.concrete(2), ExponentSymbol.concrete(5))
        )
    if name == "3n":
        bound = 5 if nmin is None else nmin
        return Alphabet(
            name,
            (ExponentSymbol.concrete(3), ExponentSymbol.symbolic(bound)),
        )
    raise ValueError(
        f"unknown alphabet {name!r}; expected one of '2n', '25', '3n'"
    )


# ---------------------------------------------------------------------------
# relations derived from progression positions


@dataclass(frozen=True)
class Relation:
    """Normalized relation p*x_i^{l_i} + q*x_k^{l_k} = r*x_j^{l_j}.

    positions holds (i, j, k) ascending; coefficients holds the reduced
    weights (p, q, r) = ((k - j), (j - i), (k - i)) / gcd; exponents are
    the pattern symbols at (i, j, k) in that order.
    """

    positions: tuple[int, int, int]
    coefficients: tuple[int, int, int]
    exponents: tuple[ExponentSymbol, ExponentSymbol, ExponentSymbol]

    def signed_terms(
        self,
    ) -> tuple[tuple[int, int, ExponentSymbol], ...]:
        """Terms of p*a_i + q*a_k - r*a_j = 0 as (coeff, position, exponent)."""
        i, j, k = self.positions
        p, q, r = self.coefficients
        li, lj, lk = self.exponents
        return ((p, i, li), (q, k, lk), (-r, j, lj))

    def describe(self) -> str:
        i, j, k = self.positions
        p, q, r = self.coefficients
        li, lj, lk = self.exponents

        def term(coeff: int, pos: int, sym: ExponentSymbol) -> str:
            head = "" if coeff == 1 else f"{coeff}*"
            return f"{head}x{pos}^{sym.label}"

        return f"{term(p, i, li)} + {term(q, k, lk)} = {term(r, j, lj)}"


def derive_relation(pattern: Pattern, i: int, j: int, k: int) -> Relation:
    """The integer relation forced at positions i < j < k.

    Any arithmetic progression satisfies the weighted-average identity
    (k - j) a_i + (j - i) a_k = (k - i) a_j; dividing the three weights by
    their gcd normalizes the relation.
    """
    t = len(pattern)
    if not (1 <= i < j < k <= t):
        raise ValueError(
            f"positions must satisfy 1 <= i < j < k <= {t}, got ({i}, {j}, {k})"
        )
    p, q = k - j, j - i
    g = math.gcd(p, q)
    p, q = p // g, q // g
    return Relation(
        (i, j, k),
        (p, q, p + q),
        (pattern.symbol_at(i), pattern.symbol_at(j), pattern.symbol_at(k)),
    )


# ---------------------------------------------------------------------------
# rules


@dataclass(frozen=True)
class RelationRule:
    """Template p*X^e1 + q*Y^e2 = r*Z^e3 known to have no nontrivial solution.

    Exponent slots are concrete integers or the shared marker "e", which
    must bind one prime exponent >= min_e across every slot carrying it.
    A two_stage rule leaves a residual branch (forced_divisor divides the
    Z base) that ``prune`` settles with an exhaustive residue scan mod
    residue_modulus.
    """

    rule_id: str
    coeff_x: int
    coeff_y: int
    coeff_z: int
    exp_x: int | str
    exp_y: int | str
    exp_z: int | str
    min_e: int
    citation: str
    two_stage: bool = False
    forced_divisor: int | None = None
    residue_modulus: int | None = None

    def __post_init__(self) -> None:
        if min(self.coeff_x, self.coeff_y, self.coeff_z) < 1:
            raise ValueError("template coefficients must be positive")
        shared = 0
        for exp in (self.exp_x, self.exp_y, self.exp_z):
            if exp == "e":
                shared += 1
            elif not (isinstance(exp, int) and exp >= 2):
                raise ValueError(f"bad exponent slot {exp!r}")
        if shared == 0:
            raise ValueError("template needs at least one shared slot")
        if self.min_e < 2:
            raise ValueError("min_e must be at least 2")
        if not self.citation:
            raise ValueError("citation must be nonempty")
        if self.two_stage != (
            self.forced_divisor is not None
            and self.residue_modulus is not None
        ):
            raise ValueError(
                "two_stage rules need forced_divisor and residue_modulus"
            )

    @property
    def template_str(self) -> str:
        def term(coeff: int, name: str, exp: int | str) -> str:
            head = "" if coeff == 1 else f"{coeff}*"
            return f"{head}{name}^{exp}"

        return (
            f"{term(self.coeff_x, 'X', self.exp_x)} + "
            f"{term(self.coeff_y, 'Y', self.exp_y)} = "
            f"{term(self.coeff_z, 'Z', self.exp_z)}"
        )


@dataclass(frozen=True)
class SubpatternRule:
    """Placement rule for square or literal exponent blocks.

    Exactly one shape is set: equally_spaced_squares demands that many
    square letters at any common stride; square_offsets demands square
    letters at fixed offsets from a start; literal demands a contiguous
    window of exact labels.
    """

    rule_id: str
    citation: str
    equally_spaced_squares: int | None = None
    square_offsets: tuple[int, ...] | None = None
    literal: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        shapes = [
            self.equally_spaced_squares is not None,
            self.square_offsets is not None,
            self.literal is not None,
        ]
        if sum(shapes) != 1:
            raise ValueError("exactly one subpattern shape must be set")
        if not self.citation:
            raise ValueError("citation must be nonempty")
        if self.equally_spaced_squares is not None:
            if self.equally_spaced_squares < 3:
                raise ValueError("need at least three equally spaced squares")
        if self.square_offsets is not None:
            offs = tuple(self.square_offsets)
            object.__setattr__(self, "square_offsets", offs)
            if len(offs) < 2 or offs[0] != 0:
                raise ValueError("offsets must start at 0 with length >= 2")
            if any(b <= a for a, b in zip(offs, offs[1:])):
                raise ValueError("offsets must be strictly increasing")
        if self.literal is not None:
            lit = tuple(str(l) for l in self.literal)
            object.__setattr__(self, "literal", lit)
            if not lit:
                raise ValueError("literal subpattern must be nonempty")


@dataclass(frozen=True)
class Ruleset:
    """All rules for one alphabet, split into deterministic stages."""

    name: str
    alphabet: Alphabet
    relation_rules: tuple[RelationRule, ...]
    subpattern_rules: tuple[SubpatternRule, ...]

    def __post_init__(self) -> None:
        ids = [r.rule_id for r in self.relation_rules] + [
            r.rule_id for r in self.subpattern_rules
        ]
        if len(set(ids)) != len(ids):
            raise ValueError("rule ids must be unique within a ruleset")

    @property
    def relation_rules_by_id(self) -> tuple[RelationRule, ...]:
        return tuple(sorted(self.relation_rules, key=lambda r: r.rule_id))

    @property
    def stage_one(self) -> tuple[RelationRule, ...]:
        return tuple(
            r for r in self.relation_rules_by_id if not r.two_stage
        )

    @property
    def stage_two(self) -> tuple[SubpatternRule, ...]:
        return tuple(sorted(self.subpattern_rules, key=lambda r: r.rule_id))

    @property
    def stage_three(self) -> tuple[RelationRule, ...]:
        return tuple(r for r in self.relation_rules_by_id if r.two_stage)

    def rule_ids(self) -> tuple[str, ...]:
        return tuple(
            sorted(
                [r.rule_id for r in self.relation_rules]
                + [r.rule_id for r in self.subpattern_rules]
            )
        )

    def rule_by_id(self, rule_id: str) -> RelationRule | SubpatternRule:
        for rule in self.relation_rules + self.subpattern_rules:
            if rule.rule_id == rule_id:
                return rule
        raise KeyError(rule_id)


_PAIRWISE = (
    "no solutions in nonzero pairwise coprime integers (X, Y, Z) with "
    "X*Y != +-1"
)
_TRIPLEWISE = (
    "no solutions in coprime nonzero integers (X, Y, Z) with X*Y*Z != +-1"
)

RULE_NN2_2Z2 = RelationRule(
    rule_id="rel-nn2-2z2",
    coeff_x=1,
    coeff_y=1,
    coeff_z=2,
    exp_x="e",
    exp_y="e",
    exp_z=2,
    min_e=5,
    citation=(
        f"X^e + Y^e = 2*Z^2 has {_PAIRWISE} for prime e >= 5 "
        "(Bennett-Skinner; Bruin)."
    ),
)

RULE_NN2_3Z2 = RelationRule(
    rule_id="rel-nn2-3z2",
    coeff_x=1,
    coeff_y=4,
    coeff_z=3,
    exp_x="e",
    exp_y="e",
    exp_z=2,
    min_e=7,
    citation=(
        f"X^e + 4*Y^e = 3*Z^2 has {_PAIRWISE} for prime e >= 7 "
        "(Bennett-Skinner; Bruin)."
    ),
)

RULE_NNN_2ZN = RelationRule(
    rule_id="rel-nnn-2zn",
    coeff_x=1,
    coeff_y=1,
    coeff_z=2,
    exp_x="e",
    exp_y="e",
    exp_z="e",
    min_e=3,
    citation=(
        f"X^e + Y^e = 2*Z^e has {_TRIPLEWISE} for prime e >= 3 "
        "(Darmon-Merel)."
    ),
)

RULE_NN3_2Z3 = RelationRule(
    rule_id="rel-nn3-2z3",
    coeff_x=1,
    coeff_y=1,
    coeff_z=2,
    exp_x="e",
    exp_y="e",
    exp_z=3,
    min_e=5,
    citation=(
        f"X^e + Y^e = 2*Z^3 has {_TRIPLEWISE} for prime e >= 5 "
        "(Bennett-Vatsal-Yazdani)."
    ),
)

RULE_33N_2ZN = RelationRule(
    rule_id="rel-33n-2zn",
    coeff_x=1,
    coeff_y=1,
    coeff_z=2,
    exp_x=3,
    exp_y=3,
    exp_z="e",
    min_e=3,
    citation=(
        f"X^3 + Y^3 = 2*Z^e has {_TRIPLEWISE} and 3 not dividing Z, for "
        "prime e >= 3: e = 3 is the Darmon-Merel equation, and for e >= 5 "
        "the factorization (X + Y)(X^2 - X*Y + Y^2) = 2*Z^e splits into "
        "X + Y = 2*U^e and X^2 - X*Y + Y^2 = V^e, whose discriminant "
        "condition V^e - U^(2e) = 3*W^2 is impossible by Bennett-Skinner "
        "and Bruin.  The remaining branch 3 | Z forces the matched term "
        "to vanish mod 9 and is closed by the recorded residue scan."
    ),
    two_stage=True,
    forced_divisor=3,
    residue_modulus=9,
)

SUB_SQUARES_AP4 = SubpatternRule(
    rule_id="sub-squares-ap4",
    citation=(
        "Four distinct squares cannot occur in arithmetic progression "
        "(Fermat's claim, proved by Euler); an equally spaced quadruple "
        "of square letters inside a non-constant progression would "
        "produce one."
    ),
    equally_spaced_squares=4,
)

SUB_CURVE_0134 = SubpatternRule(
    rule_id="sub-curve-0134",
    citation=(
        "Square terms at offsets (0, 1, 3, 4) force a rational point on "
        "Y^2 = (1 + X)(1 + 3X)(1 + 4X), an elliptic curve of rank zero "
        "over Q with exactly eight torsion points, none of which yields "
        "a primitive non-constant progression."
    ),
    square_offsets=(0, 1, 3, 4),
)

SUB_CURVE_0145 = SubpatternRule(
    rule_id="sub-curve-0145",
    citation=(
        "Square terms at offsets (0, 1, 4, 5) force a rational point on "
        "Y^2 = (1 + X)(1 + 4X)(1 + 5X), an elliptic curve of rank zero "
        "over Q with exactly eight torsion points, none of which yields "
        "a primitive non-constant progression."
    ),
    square_offsets=(0, 1, 4, 5),
)

_CHABAUTY_C1 = (
    "The block contains a sub-progression a^2, b^5, c^5 (up to "
    "reflection), so 2*b^5 - c^5 = a^2.  Factoring x^5 - 2 over "
    "K = Q(alpha) with alpha = 2^(1/5) turns this into the genus-one "
    "quartic alpha^4*X^4 + alpha^3*X^3 + alpha^2*X^2 + alpha*X + 1 = "
    "(alpha - 1)*Y^2 with X = b/c; elliptic Chabauty shows its only "
    "points with rational X have X in {1, -1/3}, and neither lifts to a "
    "primitive non-constant progression."
)

_CHABAUTY_C2 = (
    "The block gives 2*x1^5 + x4^5 = 3*x2^2, which factors over "
    "K = Q(alpha) with alpha = 2^(1/5) and leads to the genus-one "
    "quartic alpha^4*X^4 - alpha^3*X^3 + alpha^2*X^2 - alpha*X + 1 = "
    "(alpha^4 - alpha^3 + alpha^2 - alpha + 1)*Y^2 with X = x4/x1; "
    "elliptic Chabauty shows its only point with rational X has X = 1, "
    "which does not lift to a primitive non-constant progression."
)

_CHABAUTY_C3 = (
    "The block contains squares around a fifth power, so "
    "x^2 + y^2 = 2*z^5 with a further square in progression.  The "
    "parametrization of x^2 + y^2 = 2*z^5 by Pink-Tengely forms and the "
    "remaining progression condition force w^2 = f(u, v) for the degree "
    "eight form f recorded by the identities module; f splits over "
    "L = Q(sqrt 5) into two quartics, and elliptic Chabauty over L shows "
    "the resulting curve has no rational point with the required "
    "coprimality, so no primitive non-constant progression exists."
)

CHABAUTY_RULES = (
    SubpatternRule(
        rule_id="sub-chabauty-2255",
        citation=_CHABAUTY_C1,
        literal=("2", "2", "5", "5"),
    ),
    SubpatternRule(
        rule_id="sub-chabauty-5522",
        citation=_CHABAUTY_C1,
        literal=("5", "5", "2", "2"),
    ),
    SubpatternRule(
        rule_id="sub-chabauty-2552",
        citation=_CHABAUTY_C1,
        literal=("2", "5", "5", "2"),
    ),
    SubpatternRule(
        rule_id="sub-chabauty-5225",
        citation=_CHABAUTY_C2,
        literal=("5", "2", "2", "5"),
    ),
    SubpatternRule(
        rule_id="sub-chabauty-2252",
        citation=_CHABAUTY_C3,
        literal=("2", "2", "5", "2"),
    ),
    SubpatternRule(
        rule_id="sub-chabauty-2522",
        citation=_CHABAUTY_C3,
        literal=("2", "5", "2", "2"),
    ),
)


def make_ruleset(alphabet: Alphabet) -> Ruleset:
    """The rule catalog for one of the three supported alphabets.

    Every rule carries the literature result it encodes; no rule ships
    without a citation.  The "25" catalog reuses the relation templates
    at the concrete exponent 5 and adds the Chabauty block rules.
    """
    if alphabet.name == "2n":
        relation = (RULE_NN2_2Z2, RULE_NN2_3Z2, RULE_NNN_2ZN)
        sub = (SUB_SQUARES_AP4, SUB_CURVE_0134, SUB_CURVE_0145)
    elif alphabet.name == "25":
        relation = (RULE_NN2_2Z2, RULE_NNN_2ZN)
        sub = (
            SUB_SQUARES_AP4,
            SUB_CURVE_0134,
            SUB_CURVE_0145,
        ) + CHABAUTY_RULES
    elif alphabet.name == "3n":
        relation = (RULE_NN3_2Z3, RULE_NNN_2ZN, RULE_33N_2ZN)
        sub = ()
    else:
        raise ValueError(f"no ruleset for alphabet {alphabet.name!r}")
    return Ruleset(alphabet.name, alphabet, relation, sub)


def weaken_rule_bound(
    ruleset: Ruleset, rule_id: str, min_e: int
) -> Ruleset:
    """Copy of the ruleset with one relation rule demanding e >= min_e.

    Raising a bound above what its lemma needs deliberately disables real
    deductions; downstream enumerations must change visibly.
    """
    rules = []
    found = False
    for rule in ruleset.relation_rules:
        if rule.rule_id == rule_id:
            rules.append(replace(rule, min_e=min_e))
            found = True
        else:
            rules.append(rule)
    if not found:
        raise KeyError(rule_id)
    return replace(ruleset, relation_rules=tuple(rules))


def delete_rule(ruleset: Ruleset, rule_id: str) -> Ruleset:
    """Copy of the ruleset with one rule removed entirely."""
    relation = tuple(
        r for r in ruleset.relation_rules if r.rule_id != rule_id
    )
    sub = tuple(r for r in ruleset.subpattern_rules if r.rule_id != rule_id)
    if len(relation) == len(ruleset.relation_rules) and len(sub) == len(
        ruleset.subpattern_rules
    ):
        raise KeyError(rule_id)
    return replace(ruleset, relation_rules=relation, subpattern_rules=sub)


# ---------------------------------------------------------------------------
# template matching


@dataclass(frozen=True)
class RuleMatch:
    """A successful binding of a relation onto a rule template."""

    rule_id: str
    substitution: tuple[tuple[str, str], ...]
    z_position: int
    two_stage: bool
    forced_position: int | None

    @property
    def substitution_dict(self) -> dict[str, str]:
        return dict(self.substitution)


def _try_binding(terms, slots, eps: int, order, min_e: int):
    """Bind relation terms onto template slots for one sign and bijection.

    Slot s takes relation term order[s].  The sign factor
    phi = eps * coeff / slot_coeff must be +-1 with phi = -1 allowed only
    under an odd exponent, where it is absorbed by negating the base.
    """
    substitution: dict[str, str] = {}
    shared: ExponentSymbol | None = None
    z_position: int | None = None
    for slot_index, term_index in enumerate(order):
        slot_name, slot_coeff, slot_exp = slots[slot_index]
        coeff, pos, sym = terms[term_index]
        if abs(coeff) != abs(slot_coeff):
            return None
        phi = 1 if (eps * coeff > 0) == (slot_coeff > 0) else -1
        if phi == -1 and not sym.is_odd:
            return None
        if slot_exp == "e":
            if sym.is_symbolic:
                if sym.min_prime < min_e:
                    return None
            elif not is_prime(sym.value) or sym.value < min_e:
                return None
            if shared is None:
                shared = sym
            elif shared != sym:
                return None
        else:
            if sym.is_symbolic or sym.value != slot_exp:
                return None
        substitution[slot_name] = f"-x{pos}" if phi == -1 else f"x{pos}"
        if slot_name == "Z":
            z_position = pos
    substitution["e"] = shared.label
    return substitution, z_position


def _match_template(relation: Relation, rule: RelationRule) -> RuleMatch | None:
    """Match a derived relation against one rule template.

    Tries both global signs and all six term-to-slot bijections in a fixed
    order and returns the first success, so repeated calls are stable.
    """
    terms = relation.signed_terms()
    slots = (
        ("X", rule.coeff_x, rule.exp_x),
        ("Y", rule.coeff_y, rule.exp_y),
        ("Z", -rule.coeff_z, rule.exp_z),
    )
    for eps in (1, -1):
        for order in itertools.permutations(range(3)):
            bound = _try_binding(terms, slots, eps, order, rule.min_e)
            if bound is None:
                continue
            substitution, z_position = bound
            return RuleMatch(
                rule_id=rule.rule_id,
                substitution=tuple(substitution.items()),
                z_position=z_position,
                two_stage=rule.two_stage,
                forced_position=z_position if rule.two_stage else None,
            )
    return None


def match_rule(relation: Relation, ruleset: Ruleset) -> RuleMatch | None:
    """First relation rule of the ruleset, by id, whose template matches."""
    for rule in ruleset.relation_rules_by_id:
        match = _match_template(relation, rule)
        if match is not None:
            return match
    return None


def _is_square_letter(sym: ExponentSymbol) -> bool:
    return not sym.is_symbolic and sym.value == 2


def _subpattern_positions(
    pattern: Pattern, rule: SubpatternRule
) -> tuple[int, ...] | None:
    """Lexicographically first placement of the rule, or None."""
    t = len(pattern)
    hits: list[tuple[int, ...]] = []
    if rule.equally_spaced_squares is not None:
        count = rule.equally_spaced_squares
        for start in range(1, t + 1):
            for stride in range(1, t):
                positions = tuple(
                    start + stride * idx for idx in range(count)
                )
                if positions[-1] > t:
                    break
                if all(
                    _is_square_letter(pattern.symbol_at(p))
                    for p in positions
                ):
                    hits.append(positions)
    elif rule.square_offsets is not None:
        span = rule.square_offsets[-1]
        for start in range(1, t - span + 1):
            positions = tuple(start + off for off in rule.square_offsets)
            if all(
                _is_square_letter(pattern.symbol_at(p)) for p in positions
            ):
                hits.append(positions)
    else:
        width = len(rule.literal)
        for start in range(1, t - width + 2):
            if pattern.labels[start - 1 : start - 1 + width] == rule.literal:
                hits.append(tuple(range(start, start + width)))
    return min(hits) if hits else None


# ---------------------------------------------------------------------------
# residue scans


@dataclass(frozen=True)
class ResidueConstraints:
    """Per-position residue sets plus a primitivity side condition.

    allowed maps 1-based positions to admissible residues of a_pos; any
    position absent from the map is unconstrained.  primitivity_modulus g
    rejects pairs with g | a_1 and g | d, the residue shadow of
    gcd(a_1, a_2) = 1.
    """

    length: int
    allowed: Mapping[int, frozenset[int]]
    primitivity_modulus: int | None = None

    def __post_init__(self) -> None:
        normalized = {
            int(pos): frozenset(int(r) for r in residues)
            for pos, residues in dict(self.allowed).items()
        }
        object.__setattr__(self, "allowed", normalized)
        if self.length < 1:
            raise ValueError("length must be positive")
        for pos in normalized:
            if not 1 <= pos <= self.length:
                raise ValueError(f"constrained position {pos} out of range")


@dataclass(frozen=True)
class ResidueOutcome:
    """Result of an exhaustive (a_1 mod m, d mod m) scan."""

    satisfiable: bool
    modulus: int
    cases_checked: int
    witness: tuple[int, int] | None
    transcript: tuple[str, ...]


def _residue_set_str(residues: frozenset[int]) -> str:
    return "{" + ",".join(str(r) for r in sorted(residues)) + "}"


def exhaustive_residue_check(
    modulus: int, constraints: ResidueConstraints
) -> ResidueOutcome:
    """Scan every (a_1 mod m, d mod m) pair against the constraints.

    Pairs run in lexicographic order.  The first satisfying pair stops the
    scan and is returned as a witness; if none exists the outcome carries
    the full modulus**2 line transcript, one line per rejected pair.
    """
    if modulus < 2:
        raise ValueError("modulus must be at least 2")
    g = constraints.primitivity_modulus
    if g is not None and (g < 2 or modulus % g != 0):
        raise ValueError("primitivity modulus must divide the scan modulus")
    for pos, residues in constraints.allowed.items():
        if not all(0 <= r < modulus for r in residues):
            raise ValueError(
                f"residues at position {pos} must lie in 0..{modulus - 1}"
            )
    lines: list[str] = []
    for a1 in range(modulus):
        for d in range(modulus):
            failure = _first_failure(modulus, constraints, a1, d)
            if failure is None:
                lines.append(f"a1={a1} d={d}: satisfies every constraint")
                return ResidueOutcome(
                    True, modulus, len(lines), (a1, d), tuple(lines)
                )
            lines.append(f"a1={a1} d={d}: {failure}")
    return ResidueOutcome(False, modulus, len(lines), None, tuple(lines))


def _first_failure(
    modulus: int, constraints: ResidueConstraints, a1: int, d: int
) -> str | None:
    g = constraints.primitivity_modulus
    if g is not None and a1 % g == 0 and d % g == 0:
        return f"{g} divides both a1 and d, violating primitivity"
    for pos in range(1, constraints.length + 1):
        residues = constraints.allowed.get(pos)
        if residues is None:
            continue
        value = (a1 + (pos - 1) * d) % modulus
        if value not in residues:
            return (
                f"position {pos} has residue {value}, "
                f"outside {_residue_set_str(residues)}"
            )
    return None


@lru_cache(maxsize=None)
def _power_residues(modulus: int, symbol: ExponentSymbol) -> frozenset[int]:
    """Residues mod ``modulus`` attainable by x**e for the symbol.

    For a symbolic letter the union runs over the exponent window
    [bound, bound + 2 * modulus).  x**e mod m is periodic in e with
    period dividing lambda(m) once e exceeds every prime-power exponent
    of m, and the window is longer than any such period, so the union
    contains the residues of every admissible prime e >= bound.  A
    superset keeps UNSAT verdicts sound.
    """
    if symbol.is_symbolic:
        exponents = range(symbol.min_prime, symbol.min_prime + 2 * modulus)
    else:
        exponents = (symbol.value,)
    out: set[int] = set()
    for e in exponents:
        for x in range(modulus):
            out.add(pow(x, e, modulus))
    return frozenset(out)


def cube_progression_mod9(
    pattern: Pattern, forced_position: int | None = None
) -> ResidueConstraints:
    """Mod 9 constraints for a progression realizing ``pattern``.

    Cubes land in {0, 1, 8} mod 9, and any prime exponent >= 5 lands in
    {0} plus the units because such exponents are coprime to 6.  A forced
    position marks a term whose base is divisible by 3; with exponent at
    least 2 the term itself vanishes mod 9.
    """
    allowed: dict[int, frozenset[int]] = {}
    for pos in range(1, len(pattern) + 1):
        allowed[pos] = _power_residues(9, pattern.symbol_at(pos))
    if forced_position is not None:
        allowed[forced_position] = allowed[forced_position] & frozenset({0})
    return ResidueConstraints(
        length=len(pattern), allowed=allowed, primitivity_modulus=3
    )


def squares_progression_mod5(
    pattern: Pattern, forced_position: int
) -> ResidueConstraints:
    """Mod 5 constraints when the base at ``forced_position`` is 5*k.

    The forced term vanishes mod 5.  Primitivity gives
    gcd(a_i, a_j) | (j - i), so 5 cannot also divide a square term fewer
    than five steps away; such squares are units and land in {1, 4}.
    Remaining positions stay unconstrained.
    """
    allowed: dict[int, frozenset[int]] = {forced_position: frozenset({0})}
    for pos in range(1, len(pattern) + 1):
        sym = pattern.symbol_at(pos)
        if (
            pos != forced_position
            and _is_square_letter(sym)
            and abs(pos - forced_position) < 5
        ):
            allowed[pos] = frozenset({1, 4})
    return ResidueConstraints(
        length=len(pattern), allowed=allowed, primitivity_modulus=5
    )


def form_residues(
    form, modulus: int, odd_sum_only: bool = False
) -> frozenset[int]:
    """Value set of an integer binary form on residue pairs mod ``modulus``.

    With odd_sum_only only pairs with u + v odd are scanned, the parity
    forced on coprime (u, v) that are not both odd.
    """
    if modulus < 2:
        raise ValueError("modulus must be at least 2")
    if getattr(form, "field", None) is not None:
        raise ValueError("form must have rational coefficients")
    out: set[int] = set()
    for u in range(modulus):
        for v in range(modulus):
            if odd_sum_only and (u + v) % 2 == 0:
                continue
            value = Fraction(form.evaluate(u, v))
            if value.denominator != 1:
                raise ValueError("form takes non-integer values")
            out.add(value.numerator % modulus)
    return frozenset(out)


# ---------------------------------------------------------------------------
# pruning and certificates

_TRIVIALITY_NOTE = (
    "Applies to primitive non-constant progressions whose matched terms "
    "are nonzero with absolute value greater than 1; degenerate values "
    "are covered by the bounded search module.  Matched bases are "
    "pairwise coprime: primitivity forces gcd(a_i, d) = 1, hence "
    "gcd(a_i, a_j) divides j - i <= 6, so a prime shared by two bases "
    "satisfies l^2 <= 6, leaving only l = 2 at gap 4; that case puts "
    "2-adic valuation exactly 1 on the term midway between the even "
    "pair, which no perfect power admits."
)


@dataclass(frozen=True)
class PruneCertificate:
    """Replayable record of why a pattern was rejected."""

    pattern: Pattern
    ruleset_name: str
    nmin: int | None
    rule_id: str
    positions: tuple[int, ...]
    citation: str
    note: str
    relation: str | None = None
    substitution: tuple[tuple[str, str], ...] | None = None
    residue_modulus: int | None = None
    residue_cases: int | None = None
    residue_transcript: tuple[str, ...] | None = None

    def to_json(self) -> dict:
        data: dict = {
            "pattern": list(self.pattern.labels),
            "rule": self.rule_id,
            "positions": list(self.positions),
            "citation": self.citation,
            "note": self.note,
        }
        if self.relation is not None:
            data["relation"] = self.relation
        if self.substitution is not None:
            data["substitution"] = dict(self.substitution)
        if self.residue_modulus is not None:
            data["residue_modulus"] = self.residue_modulus
            data["residue_cases"] = self.residue_cases
        return data

    def replay(self) -> bool:
        """Recheck the verdict from stored data alone.

        Rebuilds the ruleset, re-derives the relation or placement,
        re-runs the matcher and any residue scan, and compares every
        recorded field.  Any mismatch returns False.
        """
        alphabet = make_alphabet(self.ruleset_name, self.nmin)
        ruleset = make_ruleset(alphabet)
        try:
            rule = ruleset.rule_by_id(self.rule_id)
        except KeyError:
            return False
        if rule.citation != self.citation:
            return False
        if isinstance(rule, RelationRule):
            if len(self.positions) != 3:
                return False
            try:
                relation = derive_relation(self.pattern, *self.positions)
            except ValueError:
                return False
            if self.relation != relation.describe():
                return False
            match = _match_template(relation, rule)
            if match is None or match.substitution != self.substitution:
                return False
            if rule.two_stage:
                constraints = cube_progression_mod9(
                    self.pattern, forced_position=match.z_position
                )
                outcome = exhaustive_residue_check(
                    rule.residue_modulus, constraints
                )
                if outcome.satisfiable:
                    return False
                if outcome.modulus != self.residue_modulus:
                    return False
                if outcome.cases_checked != self.residue_cases:
                    return False
                if outcome.transcript != self.residue_transcript:
                    return False
            elif self.residue_modulus is not None:
                return False
            return True
        return _subpattern_positions(self.pattern, rule) == self.positions


@dataclass(frozen=True)
class PruneResult:
    pattern: Pattern
    certificate: PruneCertificate | None

    @property
    def admissible(self) -> bool:
        return self.certificate is None


def _triples(t: int) -> list[tuple[int, int, int]]:
    return [
        (i, j, k)
        for i in range(1, t + 1)
        for j in range(i + 1, t + 1)
        for k in range(j + 1, t + 1)
        if k - i <= MAX_TRIPLE_SPAN
    ]


def prune(pattern: Pattern, ruleset: Ruleset) -> PruneResult:
    """Run the rule stages and return the first certificate found.

    Scan order is fixed: relation rules without a second stage, by id,
    over position triples (i, j, k) in lexicographic order with span
    k - i <= 6; then subpattern rules by id at their first placement;
    then two-stage rules.  The admissible verdict never depends on this
    order, only the recorded attribution does.
    """
    if not ruleset.alphabet.contains(pattern):
        raise ValueError("pattern uses symbols outside the ruleset alphabet")
    relations = [
        derive_relation(pattern, i, j, k)
        for (i, j, k) in _triples(len(pattern))
    ]
    base = {
        "pattern": pattern,
        "ruleset_name": ruleset.name,
        "nmin": ruleset.alphabet.nmin,
        "note": _TRIVIALITY_NOTE,
    }
    for rule in ruleset.stage_one:
        for relation in relations:
            match = _match_template(relation, rule)
            if match is None:
                continue
            return PruneResult(
                pattern,
                PruneCertificate(
                    rule_id=rule.rule_id,
                    positions=relation.positions,
                    citation=rule.citation,
                    relation=relation.describe(),
                    substitution=match.substitution,
                    **base,
                ),
            )
    for rule in ruleset.stage_two:
        positions = _subpattern_positions(pattern, rule)
        if positions is None:
            continue
        return PruneResult(
            pattern,
            PruneCertificate(
                rule_id=rule.rule_id,
                positions=positions,
                citation=rule.citation,
                **base,
            ),
        )
    for rule in ruleset.stage_three:
        if rule.residue_modulus != 9 or rule.forced_divisor != 3:
            raise ValueError(
                f"two-stage rule {rule.rule_id} has no residue builder"
            )
        for relation in relations:
            match = _match_template(relation, rule)
            if match is None:
                continue
            constraints = cube_progression_mod9(
                pattern, forced_position=match.z_position
            )
            outcome = exhaustive_residue_check(
                rule.residue_modulus, constraints
            )
            if outcome.satisfiable:
                continue
            return PruneResult(
                pattern,
                PruneCertificate(
                    rule_id=rule.rule_id,
                    positions=relation.positions,
                    citation=rule.citation,
                    relation=relation.describe(),
                    substitution=match.substitution,
                    residue_modulus=outcome.modulus,
                    residue_cases=outcome.cases_checked,
                    residue_transcript=outcome.transcript,
                    **base,
                ),
            )
    return PruneResult(pattern, None)


# ---------------------------------------------------------------------------
# enumeration


@dataclass(frozen=True)
class EnumerationResult:
    alphabet: Alphabet
    length: int
    survivors: tuple[Pattern, ...]
    certificates: tuple[PruneCertificate, ...]


def _prune_under(ruleset: Ruleset, pattern: Pattern) -> PruneResult:
    return prune(pattern, ruleset)


def enumerate_detailed(
    alphabet: Alphabet, length: int, workers: int | None = None
) -> EnumerationResult:
    """Sieve all patterns of the given length, keeping certificates.

    Patterns are generated and reported in lexicographic order over the
    alphabet's letters (concrete letters sort before the symbolic one).
    Work may be spread over processes; results are order-stable either
    way because pruning is pure.
    """
    if not 1 <= length <= MAX_PATTERN_LENGTH:
        raise ValueError(f"length must lie in 1..{MAX_PATTERN_LENGTH}")
    ruleset = make_ruleset(alphabet)
    patterns = [
        Pattern(symbols)
        for symbols in itertools.product(alphabet.symbols, repeat=length)
    ]
    results = pmap(
        functools.partial(_prune_under, ruleset), patterns, workers=workers
    )
    survivors = tuple(r.pattern for r in results if r.admissible)
    certificates = tuple(
        r.certificate for r in results if r.certificate is not None
    )
    return EnumerationResult(alphabet, length, survivors, certificates)


def enumerate_admissible(
    alphabet: Alphabet, length: int, workers: int | None = None
) -> list[Pattern]:
    """Patterns of the given length that no rule rejects, in lex order."""
    return list(
        enumerate_detailed(alphabet, length, workers=workers).survivors
    )


@dataclass(frozen=True)
class MaxLengthReport:
    alphabet: Alphabet
    cap: int
    max_length: int
    survivors: tuple[Pattern, ...]
    censored: bool


def max_admissible_length(
    alphabet: Alphabet, cap: int = 8, workers: int | None = None
) -> MaxLengthReport:
    """Largest admissible pattern length up to ``cap``.

    Pruning is monotone: a certificate for a pattern applies verbatim to
    every longer pattern containing it as a contiguous block, so survivor
    sets only thin out as the length grows and the scan can walk down
    from the cap.  censored=True flags survivors at the cap itself, where
    longer lengths remain unexamined.
    """
    if not 1 <= cap <= MAX_PATTERN_LENGTH:
        raise ValueError(f"cap must lie in 1..{MAX_PATTERN_LENGTH}")
    for length in range(cap, 0, -1):
        result = enumerate_detailed(alphabet, length, workers=workers)
        if result.survivors:
            return MaxLengthReport(
                alphabet,
                cap,
                length,
                result.survivors,
                censored=length == cap,
            )
    return MaxLengthReport(alphabet, cap, 0, (), False)
