"""Exact closed-form fusion coefficients, independent of the matrix model.

Everything is built from the integer sequences c, d, f, g and exact rational
vectors over the even vertices, so every halving is checked rather than
assumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .graphs import chain_length, eigvec_basis, v11_labels
from .polynomials import seq_c, seq_d, seq_f, seq_fg, seq_g


# ----------------------------------------------------------------------------
# sparse rational vectors


@dataclass(frozen=True)
class EvenVector:
    """Sparse exact vector over a frozen label order; zeros are never stored."""

    labels: tuple[str, ...]
    coeffs: Mapping[str, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for lab, c in self.coeffs.items():
            if lab not in self.labels:
                raise KeyError(f"{lab!r} is not in the label order")
            c = Fraction(c)
            if c:
                clean[lab] = c
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def build(cls, labels, terms: Iterable[tuple[str, object]]) -> "EvenVector":
        acc: dict[str, Fraction] = {}
        for lab, c in terms:
            acc[lab] = acc.get(lab, Fraction(0)) + Fraction(c)
        return cls(tuple(labels), acc)

    def __getitem__(self, label: str) -> Fraction:
        if label not in self.labels:
            raise KeyError(label)
        return self.coeffs.get(label, Fraction(0))

    def _check(self, other: "EvenVector"):
        if self.labels != other.labels:
            raise ValueError("vectors live on different label orders")

    def __add__(self, other: "EvenVector") -> "EvenVector":
        self._check(other)
        return EvenVector.build(self.labels, list(self.coeffs.items()) + list(other.coeffs.items()))

    def __neg__(self) -> "EvenVector":
        return EvenVector(self.labels, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "EvenVector") -> "EvenVector":
        return self + (-other)

    def __mul__(self, s) -> "EvenVector":
        s = Fraction(s)
        return EvenVector(self.labels, {k: v * s for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __truediv__(self, s) -> "EvenVector":
        return self * (1 / Fraction(s))

    def __eq__(self, other) -> bool:
        if not isinstance(other, EvenVector):
            return NotImplemented
        return self.labels == other.labels and self.coeffs == other.coeffs

    __hash__ = None

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs.values())

    def is_nonnegative(self) -> bool:
        return all(c >= 0 for c in self.coeffs.values())

    def dense(self) -> list[Fraction]:
        return [self[lab] for lab in self.labels]

    def as_ints(self) -> dict[str, int]:
        """Every label with its integer coefficient (zeros included)."""
        if not self.is_integral():
            bad = next(l for l, c in self.coeffs.items() if c.denominator != 1)
            raise ArithmeticError(f"coefficient of {bad} is {self.coeffs[bad]}, not an integer")
        return {lab: int(self[lab]) for lab in self.labels}

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for lab in self.labels:
            c = self.coeffs.get(lab)
            if c is None:
                continue
            parts.append(lab if c == 1 else f"{c}*{lab}")
        return " + ".join(parts).replace("+ -", "- ")


def _v(k: int, terms) -> EvenVector:
    return EvenVector.build(v11_labels(k), terms)


def vector_from_array(k: int, arr) -> EvenVector:
    return _v(k, zip(v11_labels(k), (int(a) for a in arr)))


def xi_eta(k: int) -> tuple[EvenVector, EvenVector]:
    """xi = (beta1 - gamma1) + (beta3 - gamma3), eta = (beta1 - gamma1) - (beta3 - gamma3)."""
    xi = _v(k, [("beta1", 1), ("gamma1", -1), ("beta3", 1), ("gamma3", -1)])
    eta = _v(k, [("beta1", 1), ("gamma1", -1), ("beta3", -1), ("gamma3", 1)])
    return xi, eta


def eigenvectors(k: int) -> dict[str, EvenVector]:
    x1, x2, y1, y2 = eigvec_basis(k)
    return {name: vector_from_array(k, v) for name, v in
            (("x1", x1), ("x2", x2), ("y1", y1), ("y2", y2))}


# ----------------------------------------------------------------------------
# the four products of beta3 -/+ gamma3


def half_x1_plus_y1(k: int) -> EvenVector:
    """2(alpha0 - alpha6 + alpha8 - alpha14 + ...) then -(beta3+gamma3) for k even,
    +(beta1+gamma1) for k odd."""
    terms = []
    for j in range(2 * k + 2):
        if j % 4 == 0:
            terms.append((f"alpha{2 * j}", 2))
        elif j % 4 == 3:
            terms.append((f"alpha{2 * j}", -2))
    if k % 2 == 0:
        terms += [("beta3", -1), ("gamma3", -1)]
    else:
        terms += [("beta1", 1), ("gamma1", 1)]
    return _v(k, terms)


def abcd(k: int) -> tuple[EvenVector, EvenVector, EvenVector, EvenVector]:
    """A = (b3-g3)^2, B = (b3-g3)(b3+g3), C = (b3+g3)(b3-g3), D = (b3+g3)^2.

    A = -(x1 + y1)/2; B and C depend on the parity of k; D carries the
    c-sequence on the chain.
    """
    A = -half_x1_plus_y1(k)
    if k % 2 == 0:
        B = _v(k, [("gamma3", 1), ("beta3", -1)])
        C = B
    else:
        B = _v(k, [("beta1", 1), ("gamma1", -1)])
        C = -B
    D = _v(k, [(f"alpha{2 * j}", 2 * seq_c(j)) for j in range(2 * k + 2)]
           + [("beta1", seq_c(2 * k + 2)), ("gamma1", seq_c(2 * k + 2)),
              ("beta3", seq_c(2 * k)), ("gamma3", seq_c(2 * k))])
    return A, B, C, D


@dataclass(frozen=True)
class B3G3:
    b3g3: EvenVector
    g3b3: EvenVector
    b3b3: EvenVector
    g3g3: EvenVector

    def items(self):
        return (("beta3", "gamma3", self.b3g3), ("gamma3", "beta3", self.g3b3),
                ("beta3", "beta3", self.b3b3), ("gamma3", "gamma3", self.g3g3))


def b3g3_from_abcd(k: int) -> B3G3:
    A, B, C, D = abcd(k)
    return B3G3(((D - A) + (B - C)) / 4, ((D - A) - (B - C)) / 4,
                ((D + A) + (B + C)) / 4, ((D + A) - (B + C)) / 4)


def b3g3_table(k: int) -> B3G3:
    """beta3 gamma3, gamma3 beta3, beta3^2, gamma3^2 in terms of f_j, g_j.

    Built from the f/g expansions, checked against the A, B, C, D route, and
    required to be non-negative integers.
    """
    half = Fraction(1, 2)
    chain_f = [(f"alpha{2 * j}", seq_f(j)) for j in range(2 * k + 2)]
    chain_g = [(f"alpha{2 * j}", seq_g(j)) for j in range(2 * k + 2)]
    f0, f2 = seq_f(2 * k), seq_f(2 * k + 2)
    g0, g2 = seq_g(2 * k), seq_g(2 * k + 2)
    if k % 2 == 0:
        b3g3 = _v(k, chain_f + [("beta1", half * f2), ("gamma1", half * f2),
                                ("beta3", half * (f0 - 1)), ("gamma3", half * (f0 - 1))])
        g3b3 = b3g3
        b3b3 = _v(k, chain_g + [("beta1", half * g2), ("gamma1", half * g2),
                                ("beta3", half * g0), ("gamma3", half * (g0 + 2))])
        g3g3 = _v(k, chain_g + [("beta1", half * g2), ("gamma1", half * g2),
                                ("beta3", half * (g0 + 2)), ("gamma3", half * g0)])
    else:
        b3g3 = _v(k, chain_f + [("beta1", half * (f2 + 1)), ("gamma1", half * (f2 - 1)),
                                ("beta3", half * f0), ("gamma3", half * f0)])
        g3b3 = _v(k, chain_f + [("beta1", half * (f2 - 1)), ("gamma1", half * (f2 + 1)),
                                ("beta3", half * f0), ("gamma3", half * f0)])
        b3b3 = _v(k, chain_g + [("beta1", half * g2), ("gamma1", half * g2),
                                ("beta3", half * g0), ("gamma3", half * g0)])
        g3g3 = b3b3
    out = B3G3(b3g3, g3b3, b3b3, g3g3)
    ref = b3g3_from_abcd(k)
    for (x, y, vec), (_, _, other) in zip(out.items(), ref.items()):
        if vec != other:
            raise ArithmeticError(f"k={k}: {x}*{y} from f/g disagrees with the A,B,C,D route")
        if not (vec.is_integral() and vec.is_nonnegative()):
            raise ArithmeticError(f"k={k}: {x}*{y} = {vec} is not a non-negative integer vector")
    return out


# ----------------------------------------------------------------------------
# f, g and the mixed products


def fg_table(k: int) -> tuple[int, int, int, int]:
    """(<f^2,f>, <fg,f>, <fg,g>, <g^2,g>) = (d_{2k-1}, d_{2k}, d_{2k+1}, d_{2k+2})."""
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    return seq_d(2 * k - 1), seq_d(2 * k), seq_d(2 * k + 1), seq_d(2 * k + 2)


@dataclass(frozen=True)
class MixedTable:
    f_bb: int  # <f betabar2, betabar2>
    f_bg: int  # <f betabar2, gammabar2> = <f gammabar2, betabar2>
    f_gg: int  # <f gammabar2, gammabar2>
    g_bb: int
    g_bg: int
    g_gg: int

    def as_tuple(self) -> tuple[int, ...]:
        return (self.f_bb, self.f_bg, self.f_gg, self.g_bb, self.g_bg, self.g_gg)


def mixed_table(k: int) -> MixedTable:
    even = k % 2 == 0
    f = lambda j: seq_f(j)  # noqa: E731
    g = lambda j: seq_g(j)  # noqa: E731
    f_bb = g(2 * k + 2) + g(2 * k + 1)
    f_bg = f(2 * k + 2) + f(2 * k + 1)
    g_bb = f(2 * k + 1) + 2 * f(2 * k + 2) + f(2 * k) - (1 if even else 0)
    g_bg = g(2 * k + 1) + 2 * g(2 * k + 2) + g(2 * k) + (1 if even else 0)
    return MixedTable(f_bb, f_bg, f_bb, g_bb, g_bg, g_bb)


# ----------------------------------------------------------------------------
# obstruction and consistency facts


def case2_obstruction(k: int) -> Fraction:
    """(c_{2k}+1)/4 for k even, (c_{2k+2}+1)/4 for k odd.

    This would have to be a fusion coefficient if beta1, gamma1 were not
    self-conjugate; it never is an integer.
    """
    w = Fraction(seq_c(2 * k if k % 2 == 0 else 2 * k + 2) + 1, 4)
    if w.denominator == 1:
        raise ArithmeticError(f"k={k}: obstruction witness {w} is an integer")
    return w


def parity_facts(k: int) -> bool:
    """f_{2k+2} and f_{2k} have the parities the b3g3 expansions need, g_{2k} even."""
    f0, f2 = seq_f(2 * k), seq_f(2 * k + 2)
    if k % 2 == 0:
        ok = f2 % 2 == 0 and f0 % 2 == 1
    else:
        ok = f2 % 2 == 1 and f0 % 2 == 0
    return ok and seq_g(2 * k) % 2 == 0


def g2g_consistency(k: int) -> bool:
    """8 c_{2k} + 12 c_{2k+1} + 16 c_{2k+2} = 4 d_{2k+2}."""
    return 8 * seq_c(2 * k) + 12 * seq_c(2 * k + 1) + 16 * seq_c(2 * k + 2) == 4 * seq_d(2 * k + 2)


C_MOD4_PERIOD = (1, 0, 0, 1, 1, 2, 0, 3)


def c_mod4_holds(j: int) -> bool:
    """c_j mod 4 follows the period-8 pattern and c_{2i} = 1 or 0 mod 4 by parity of i."""
    ok = seq_c(j) % 4 == C_MOD4_PERIOD[j % 8]
    if j % 2 == 0:
        ok = ok and seq_c(j) % 4 == (1 if (j // 2) % 2 == 0 else 0)
    return ok


def fg_splits_nonnegative(j: int) -> bool:
    f, g = seq_fg(j)
    return f >= 0 and g >= 0 and f + g == seq_c(j)


def beta3_power_expected(k: int) -> dict[str, int]:
    n = chain_length(k)
    return {"beta3": 5, "beta1": 10, f"alpha{n - 1}": 6, "gamma1": 6, f"alpha{n - 3}": 1, "gamma3": 1}


def beta3_power(table) -> dict[str, int]:
    """beta3 (alpha1 alphabar1)^3 by repeated right multiplication in the table."""
    vec = {"beta3": 1}
    for _ in range(3):
        for gen in ("alpha1", "alphabar1"):
            nxt: dict[str, int] = {}
            for x, c in vec.items():
                for z, m in table.product(x, gen).items():
                    nxt[z] = nxt.get(z, 0) + c * m
            vec = {z: c for z, c in nxt.items() if c}
    return vec


def beta3_power_check(table) -> tuple[bool, str]:
    got = beta3_power(table)
    want = beta3_power_expected(table.k)
    for lab in sorted(set(got) | set(want)):
        if got.get(lab, 0) != want.get(lab, 0):
            return False, f"coefficient of {lab}: table gives {got.get(lab, 0)}, expected {want.get(lab, 0)}"
    return True, ""


# ----------------------------------------------------------------------------
# oracle coefficients for cross-checking


@dataclass(frozen=True)
class OracleEntry:
    """sum(coef * N_{x,y}^z for coef, x, y, z in terms) == value."""

    name: str
    terms: tuple[tuple[int, str, str, str], ...]
    value: int


def _single(x, y, z, value) -> OracleEntry:
    return OracleEntry(f"N_{{{x},{y}}}^{{{z}}}", ((1, x, y, z),), value)


def oracle_entries(k: int) -> dict[str, list[OracleEntry]]:
    """Every coefficient the closed forms determine, grouped by family."""
    labels = v11_labels(k)
    fam: dict[str, list[OracleEntry]] = {"b3g3": [], "abcd": [], "fg": [], "mixed": []}
    for x, y, vec in b3g3_table(k).items():
        for z, v in vec.as_ints().items():
            fam["b3g3"].append(_single(x, y, z, v))
    signs = {"A": (1, -1, -1, 1), "B": (1, 1, -1, -1), "C": (1, -1, 1, -1), "D": (1, 1, 1, 1)}
    pairs = (("beta3", "beta3"), ("beta3", "gamma3"), ("gamma3", "beta3"), ("gamma3", "gamma3"))
    for name, vec in zip("ABCD", abcd(k)):
        for z in labels:
            terms = tuple((s, x, y, z) for s, (x, y) in zip(signs[name], pairs))
            fam["abcd"].append(OracleEntry(f"{name} at {z}", terms, int(vec[z])))
    ff, fgf, fgg, ggg = fg_table(k)
    fam["fg"] += [_single("f", "f", "f", ff), _single("f", "g", "f", fgf),
                  _single("g", "f", "f", fgf), _single("f", "f", "g", fgf),
                  _single("f", "g", "g", fgg), _single("g", "f", "g", fgg),
                  _single("g", "g", "f", fgg), _single("g", "g", "g", ggg)]
    m = mixed_table(k)
    fam["mixed"] += [
        _single("f", "betabar2", "betabar2", m.f_bb), _single("f", "betabar2", "gammabar2", m.f_bg),
        _single("f", "gammabar2", "betabar2", m.f_bg), _single("f", "gammabar2", "gammabar2", m.f_gg),
        _single("g", "betabar2", "betabar2", m.g_bb), _single("g", "betabar2", "gammabar2", m.g_bg),
        _single("g", "gammabar2", "betabar2", m.g_bg), _single("g", "gammabar2", "gammabar2", m.g_gg),
    ]
    return fam
