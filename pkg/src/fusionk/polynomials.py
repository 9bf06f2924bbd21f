"""Exact integer sequences and polynomial families.

Everything here is exact: coefficients are Python ints, so nothing overflows
and nothing is rounded.  Polynomials are dense, ascending-degree.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable


class IntPoly:
    """Dense univariate polynomial with arbitrary-precision integer coefficients.

    ``coeffs[i]`` is the coefficient of ``t**i``.  Trailing zeros are stripped
    on construction, so the zero polynomial has ``coeffs == ()`` and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[int, ...] = tuple(cs)

    @classmethod
    def t(cls) -> "IntPoly":
        return cls((0, 1))

    @classmethod
    def const(cls, c: int) -> "IntPoly":
        return cls((c,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def _coerce(self, other) -> "IntPoly":
        if isinstance(other, IntPoly):
            return other
        if isinstance(other, int):
            return IntPoly((other,))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPoly(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return IntPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return IntPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        result, base = IntPoly((1,)), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __call__(self, x):
        """Horner evaluation; works for int, Fraction, float, numpy arrays."""
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, inner: "IntPoly") -> "IntPoly":
        acc = IntPoly()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def is_even(self) -> bool:
        return all(c == 0 for c in self.coeffs[1::2])

    def is_odd(self) -> bool:
        return all(c == 0 for c in self.coeffs[0::2])

    def __repr__(self) -> str:
        return f"IntPoly({list(self.coeffs)})"

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            body = str(a) if (a != 1 or i == 0) else ""
            if body and mono:
                body += "*"
            terms.append((sign, body + mono))
        first_sign, first = terms[0]
        s = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            s += f" {sign} {body}"
        return s


T = IntPoly.t()


# ----------------------------------------------------------------------------
# integer sequences


@lru_cache(maxsize=None)
def _c_list(upto: int) -> tuple[int, ...]:
    c = [1, 0, 0]
    while len(c) <= upto:
        c.append(c[-1] + c[-2] + c[-3])
    return tuple(c)


def seq_c(j: int) -> int:
    """c_0 = 1, c_1 = c_2 = 0, c_j = c_{j-1} + c_{j-2} + c_{j-3}."""
    if j < 0:
        raise ValueError(f"seq_c needs j >= 0, got {j}")
    return _c_list(max(j, 2))[j]


@lru_cache(maxsize=None)
def _d_list(upto: int) -> tuple[int, ...]:
    # index 0 holds d_{-1}
    d = [0, 1, 1]
    while len(d) <= upto + 1:
        d.append(d[-1] + d[-2] + d[-3])
    return tuple(d)


def seq_d(j: int) -> int:
    """d_{-1} = 0, d_0 = d_1 = 1, tribonacci recursion after that."""
    if j < -1:
        raise ValueError(f"seq_d needs j >= -1, got {j}")
    return _d_list(max(j, 1))[j + 1]


def seq_fg(j: int) -> tuple[int, int]:
    """Split c_j into (f_j, g_j) according to j mod 4.

    Raises ArithmeticError if the required halving is not exact.
    """
    c = seq_c(j)
    r = j % 4
    if r == 0:
        num_f, num_g = c + 1, c - 1
    elif r == 3:
        num_f, num_g = c - 1, c + 1
    else:
        num_f = num_g = c
    if num_f % 2 or num_g % 2:
        raise ArithmeticError(f"c_{j} = {c} has the wrong parity for j = {r} mod 4")
    f, g = num_f // 2, num_g // 2
    if f < 0 or g < 0:
        raise ArithmeticError(f"negative split at j={j}: f={f}, g={g}")
    return f, g


def seq_f(j: int) -> int:
    return seq_fg(j)[0]


def seq_g(j: int) -> int:
    return seq_fg(j)[1]


# ----------------------------------------------------------------------------
# polynomial families


_R_CACHE: list[IntPoly] = [IntPoly((1,)), T]


def cheb_R(m: int) -> IntPoly:
    """R_0 = 1, R_1 = t, R_m = t R_{m-1} - R_{m-2}  (R_m(t) = U_m(t/2))."""
    if m < 0:
        raise ValueError(f"cheb_R needs m >= 0, got {m}")
    while len(_R_CACHE) <= m:
        _R_CACHE.append(T * _R_CACHE[-1] - _R_CACHE[-2])
    return _R_CACHE[m]


def even_reparam(p: IntPoly) -> IntPoly:
    """Return the unique Q with Q(t^2) = p(t); p must be even."""
    if not p.is_even():
        raise ValueError(f"polynomial has odd-degree terms: {p}")
    return IntPoly(p.coeffs[0::2])


@lru_cache(maxsize=None)
def poly_Q(j: int) -> IntPoly:
    """Q_j(t^2) = R_{2j}(t)."""
    if j < 0:
        raise ValueError(f"poly_Q needs j >= 0, got {j}")
    q = even_reparam(cheb_R(2 * j))
    assert q.compose(T * T) == cheb_R(2 * j)
    return q


@lru_cache(maxsize=None)
def poly_S(j: int) -> IntPoly:
    """S_3 = R_3, S_4 = R_4 - R_2, S_j = t S_{j-1} - S_{j-2}."""
    if j < 3:
        raise ValueError(f"poly_S is defined for j >= 3, got {j}")
    if j == 3:
        return cheb_R(3)
    if j == 4:
        return cheb_R(4) - cheb_R(2)
    return T * poly_S(j - 1) - poly_S(j - 2)


@lru_cache(maxsize=None)
def poly_q(k: int) -> IntPoly:
    """Degree 2k+2 factor of the characteristic polynomial of GG^t."""
    if k < 0:
        raise ValueError(f"poly_q needs k >= 0, got {k}")
    if k == 0:
        return IntPoly((3, -5, 1))
    if k == 1:
        return IntPoly((-1, 1)) * IntPoly((-5, 17, -8, 1))
    return IntPoly((2, -4, 1)) * poly_q(k - 1) - poly_q(k - 2)


# ----------------------------------------------------------------------------
# identities


def sr_decompose(m: int) -> list[tuple[str, int]]:
    """Coefficients of R_m in the S/R basis, as (basis name, coefficient) pairs.

    For m = 2j-1:  d_0 S_{2j-1} + ... + d_{j-2} S_3 + (d_{j-1} - d_{j-2}) R_1
    For m = 2j:    d_0 S_{2j} + ... + d_{j-2} S_4 + d_{j-1} R_2 + d_{j-3} R_0

    The reconstruction is checked against R_m exactly.
    """
    if m < 3:
        raise ValueError(f"sr_decompose needs m >= 3, got {m}")
    if m % 2:
        j = (m + 1) // 2
        terms = [(f"S{m - 2 * i}", seq_d(i)) for i in range(j - 1)]
        terms.append(("R1", seq_d(j - 1) - seq_d(j - 2)))
    else:
        j = m // 2
        terms = [(f"S{m - 2 * i}", seq_d(i)) for i in range(j - 1)]
        terms.append(("R2", seq_d(j - 1)))
        terms.append(("R0", seq_d(j - 3)))
    rebuilt = sum((c * _basis_poly(name) for name, c in terms), IntPoly())
    if rebuilt != cheb_R(m):
        raise ArithmeticError(f"S/R decomposition of R_{m} does not reconstruct it")
    return terms


def _basis_poly(name: str) -> IntPoly:
    fam, idx = name[0], int(name[1:])
    return poly_S(idx) if fam == "S" else cheb_R(idx)


def key_identity_sides(k: int) -> tuple[IntPoly, IntPoly]:
    n = 4 * k + 3
    lhs = cheb_R(n + 4) - cheb_R(n + 2) - cheb_R(n) - cheb_R(n - 2)
    rhs = T * (T * T - 2) * poly_q(k).compose(T * T)
    return lhs, rhs


def key_identity(k: int) -> bool:
    """R_{n+4} - R_{n+2} - R_n - R_{n-2} == t (t^2 - 2) q_k(t^2), n = 4k+3."""
    lhs, rhs = key_identity_sides(k)
    return lhs == rhs


def remark_sides(k: int) -> tuple[tuple[IntPoly, IntPoly], tuple[IntPoly, IntPoly]]:
    """((r_k, expansion_i), (s_k, expansion_ii)) with

    r_k = (2 - t) q_k,   s_k = (-1)^{k+1} t q_k,
    expansion_i  = sum_{j<=2k+1} 2 (-1)^j Q_j + Q_{2k+1} + 2 Q_{2k+2} - Q_{2k+3}
    expansion_ii = sum_{i<=k} 2 (-1)^i (Q_{2i} + Q_{2i+1}) + (-1)^{k+1} (Q_{2k+3} - Q_{2k+1})
    """
    q = poly_q(k)
    sign = -1 if k % 2 == 0 else 1  # (-1)^{k+1}
    r = IntPoly((2, -1)) * q
    s = sign * (T * q)
    exp_i = sum((2 * (-1) ** j * poly_Q(j) for j in range(2 * k + 2)), IntPoly())
    exp_i = exp_i + poly_Q(2 * k + 1) + 2 * poly_Q(2 * k + 2) - poly_Q(2 * k + 3)
    exp_ii = sum(
        (2 * (-1) ** i * (poly_Q(2 * i) + poly_Q(2 * i + 1)) for i in range(k + 1)),
        IntPoly(),
    )
    exp_ii = exp_ii + sign * (poly_Q(2 * k + 3) - poly_Q(2 * k + 1))
    return (r, exp_i), (s, exp_ii)


def remark_identities(k: int) -> tuple[bool, bool]:
    (r, ei), (s, eii) = remark_sides(k)
    return r == ei, s == eii


# ----------------------------------------------------------------------------
# exact root isolation (independent of any eigensolver)


def _sign_at(p: IntPoly, x: Fraction) -> int:
    v = p(x)
    return (v > 0) - (v < 0)


def real_roots(p: IntPoly, lo: Fraction, hi: Fraction, tol: float = 1e-13) -> list[float]:
    """Isolate the simple real roots of p in (lo, hi) by exact sign changes.

    The grid is refined until the number of sign changes equals deg p, so this
    is only meant for polynomials whose roots are all real, simple and inside
    the interval.  Each bracket is then bisected in exact rationals.
    """
    deg = p.degree
    steps = 64
    while True:
        grid = [lo + (hi - lo) * Fraction(i, steps) for i in range(steps + 1)]
        signs = [_sign_at(p, x) for x in grid]
        if 0 in signs:
            steps = steps * 2 + 1
            continue
        brackets = [(grid[i], grid[i + 1]) for i in range(steps) if signs[i] != signs[i + 1]]
        if len(brackets) == deg:
            break
        if steps > 1 << 20:
            raise ArithmeticError(f"could not isolate {deg} roots, found {len(brackets)}")
        steps *= 2
    roots = []
    for a, b in brackets:
        sa = _sign_at(p, a)
        while b - a > tol:
            mid = (a + b) / 2
            sm = _sign_at(p, mid)
            if sm == 0:
                a = b = mid
                break
            if sm == sa:
                a = mid
            else:
                b = mid
        roots.append(float((a + b) / 2))
    return roots
