"""Fusion tables: data model, axiom verifiers and serialization.

A table is stored sparsely as {(x, y, z): N} over basis indices, nonzero
entries only.  The verifiers work on a dense integer tensor T[x, y, z] which
is zero on grade-incompatible triples, so every axiom becomes an array
identity.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import TableFormatError
from .graphs import (
    build_gamma,
    build_gamma_prime,
    conjugate_label,
    pf_weights,
    pretty,
    v11_labels,
    v12_labels,
    v21_labels,
    v22_labels,
)

GRADE_ORDER = (("N", "N"), ("N", "M"), ("M", "N"), ("M", "M"))
IDENTITY = {"N": "alpha0", "M": "alphap0"}


@dataclass
class CheckResult:
    ok: bool
    detail: str = ""
    value: float = 0.0

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class BasisElement:
    label: str
    grade: tuple[str, str]
    conjugate: str


def standard_basis(k: int) -> tuple[BasisElement, ...]:
    """V11, V12, V21, V22 in the fixed vertex order of :mod:`fusionk.graphs`."""
    out = []
    for grade, labels in zip(GRADE_ORDER, (v11_labels(k), v12_labels(k), v21_labels(k), v22_labels(k))):
        out += [BasisElement(lab, grade, conjugate_label(lab)) for lab in labels]
    return tuple(out)


@dataclass(frozen=True)
class FusionTable:
    k: int
    basis: tuple[BasisElement, ...]
    coefficients: dict = field(repr=False)  # (x, y, z) basis indices -> positive int

    def __post_init__(self):
        grades = [b.grade for b in self.basis]
        for (x, y, z), v in self.coefficients.items():
            gx, gy, gz = grades[x], grades[y], grades[z]
            if not (gx[1] == gy[0] and gz == (gx[0], gy[1])):
                raise ValueError(f"coefficient on incompatible triple {self.labels[x], self.labels[y], self.labels[z]}")
            if not isinstance(v, int) or v <= 0:
                raise ValueError(f"stored coefficients must be positive ints, got {v!r}")

    # -- construction -------------------------------------------------------

    @classmethod
    def from_blocks(cls, k: int, order: dict, blocks: dict) -> "FusionTable":
        """From integer arrays keyed by grade triple (a, b, c), as produced by the model."""
        basis = standard_basis(k)
        index = {b.label: i for i, b in enumerate(basis)}
        coeffs = {}
        for (a, b, c), blk in blocks.items():
            xs = [index[l] for l in order[(a, b)]]
            ys = [index[l] for l in order[(b, c)]]
            zs = [index[l] for l in order[(a, c)]]
            for i, j, l in zip(*np.nonzero(blk)):
                coeffs[(xs[i], ys[j], zs[l])] = int(blk[i, j, l])
        return cls(k, basis, dict(sorted(coeffs.items())))

    @classmethod
    def from_dense(cls, k: int, T: np.ndarray) -> "FusionTable":
        basis = standard_basis(k)
        coeffs = {tuple(int(i) for i in idx): int(T[tuple(idx)]) for idx in np.argwhere(T != 0)}
        return cls(k, basis, dict(sorted(coeffs.items())))

    # -- access -------------------------------------------------------------

    @cached_property
    def labels(self) -> tuple[str, ...]:
        return tuple(b.label for b in self.basis)

    @cached_property
    def _index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    def index(self, label: str) -> int:
        return self._index[label]

    def n(self, x: str, y: str, z: str) -> int:
        return self.coefficients.get((self._index[x], self._index[y], self._index[z]), 0)

    def product(self, x: str, y: str) -> dict[str, int]:
        """X * Y as {Z: N_{X,Y}^Z}, nonzero terms in basis order."""
        i, j = self._index[x], self._index[y]
        row = self.dense[i, j]
        return {self.labels[z]: int(row[z]) for z in np.nonzero(row)[0]}

    def compatible_pairs(self) -> Iterable[tuple[int, int]]:
        for i, a in enumerate(self.basis):
            for j, b in enumerate(self.basis):
                if a.grade[1] == b.grade[0]:
                    yield i, j

    @cached_property
    def conj_perm(self) -> np.ndarray:
        return np.array([self._index[b.conjugate] for b in self.basis])

    @cached_property
    def max_coefficient(self) -> int:
        return max(self.coefficients.values(), default=0)

    @cached_property
    def dense(self) -> np.ndarray:
        """T[x, y, z] = N_{X,Y}^Z; int64 when it fits, Python ints otherwise."""
        V = len(self.basis)
        dtype = np.int64 if self.max_coefficient < (1 << 62) else object
        T = np.zeros((V, V, V), dtype=dtype)
        for idx, v in self.coefficients.items():
            T[idx] = v
        T.setflags(write=False)
        return T

    def with_coefficient(self, x: str, y: str, z: str, value: int) -> "FusionTable":
        """Copy with one coefficient replaced (used to build corrupted tables)."""
        coeffs = dict(self.coefficients)
        key = (self._index[x], self._index[y], self._index[z])
        if value:
            coeffs[key] = value
        else:
            coeffs.pop(key, None)
        return FusionTable(self.k, self.basis, dict(sorted(coeffs.items())))

    def __eq__(self, other) -> bool:
        if not isinstance(other, FusionTable):
            return NotImplemented
        return (self.k, self.basis, self.coefficients) == (other.k, other.basis, other.coefficients)

    __hash__ = None


# ----------------------------------------------------------------------------
# verifiers


def _first_mismatch(t: FusionTable, A: np.ndarray, B: np.ndarray, what: str) -> CheckResult:
    bad = np.argwhere(A != B)
    if len(bad) == 0:
        return CheckResult(True)
    x, y, z = (int(i) for i in bad[0])
    lab = t.labels
    return CheckResult(False, f"{what}: N_{{{lab[x]},{lab[y]}}}^{{{lab[z]}}} = {A[x, y, z]} "
                              f"but the partner coefficient is {B[x, y, z]}")


def verify_frobenius(t: FusionTable) -> CheckResult:
    """N_{X,Y}^Z equals N_{Z,Ybar}^X, N_{Xbar,Z}^Y, N_{Ybar,Xbar}^{Zbar},
    N_{Zbar,X}^{Ybar} and N_{Y,Zbar}^{Xbar} for every triple."""
    T, c = t.dense, t.conj_perm
    ar = np.arange(len(c))
    partners = {
        "N_{Z,Ybar}^X": T[:, c, :].transpose(2, 1, 0),
        "N_{Xbar,Z}^Y": T[c, :, :].transpose(0, 2, 1),
        "N_{Ybar,Xbar}^Zbar": T[np.ix_(c, c, c)].transpose(1, 0, 2),
        "N_{Zbar,X}^Ybar": T[np.ix_(c, ar, c)].transpose(1, 2, 0),
        "N_{Y,Zbar}^Xbar": T[np.ix_(ar, c, c)].transpose(2, 0, 1),
    }
    for what, P in partners.items():
        r = _first_mismatch(t, T, P, what)
        if not r:
            return r
    return CheckResult(True)


_PRIMES = (4194301, 4194287, 4194277, 4194271, 4194247, 4194217, 4194199, 4194191,
           4194187, 4194181, 4194173, 4194167, 4194143, 4194137, 4194131, 4194107)


def _assoc_exact_float(T: np.ndarray, mod: Optional[int] = None) -> Optional[tuple]:
    """Compare (XY)Z and X(YZ) with float64 matmuls that stay below 2^53.

    Returns the first differing (x, y, z, v) or None.
    """
    V = T.shape[0]
    F = T.astype(np.float64) if mod is None else np.mod(T, mod).astype(np.float64)
    flat_wz = F.reshape(V, V * V)            # [w, (z, v)]
    for x in range(V):
        Fx = F[x]
        ys = np.nonzero(Fx.any(axis=1))[0]   # y with x*y defined
        ws = np.nonzero(Fx.any(axis=0))[0]   # constituents of x*y
        us = np.nonzero(Fx.any(axis=1))[0]   # u with x*u defined
        # left[y, (z, v)] = sum_w N_xy^w N_wz^v
        left = Fx[np.ix_(ys, ws)] @ flat_wz[ws]
        # right[(y, z), v] = sum_u N_yz^u N_xu^v
        right = F[np.ix_(ys, np.arange(V), us)].reshape(len(ys) * V, len(us)) @ Fx[us]
        if mod is not None:
            left, right = np.mod(left, mod), np.mod(right, mod)
        diff = left.reshape(len(ys), V, V) != right.reshape(len(ys), V, V)
        if diff.any():
            y, z, v = (int(i) for i in np.argwhere(diff)[0])
            return x, int(ys[y]), z, v
    return None


def verify_associativity(t: FusionTable) -> CheckResult:
    """sum_W N_{X,Y}^W N_{W,Z}^V = sum_U N_{Y,Z}^U N_{X,U}^V for all X, Y, Z, V.

    Exact: when max(N)^2 * |V| < 2^53 every float64 partial sum is an exact
    integer.  Otherwise the identity is checked modulo enough primes that
    their product exceeds any possible difference (Chinese remaindering).
    """
    T = t.dense
    V = T.shape[0]
    m = t.max_coefficient
    if m * m * V < (1 << 53):
        hit = _assoc_exact_float(T)
    else:
        if _PRIMES[0] ** 2 * V >= (1 << 53):
            raise ArithmeticError(f"basis of size {V} is too large for the modular check")
        bound = 2 * m * m * V
        hit, prod = None, 1
        for p in _PRIMES:
            if prod > bound:
                break
            hit = _assoc_exact_float(T, p)
            if hit:
                break
            prod *= p
        else:
            if prod <= bound:
                raise ArithmeticError("not enough primes to certify associativity")
    if hit is None:
        return CheckResult(True)
    x, y, z, v = hit
    lab = t.labels
    return CheckResult(False, f"({lab[x]} {lab[y]}) {lab[z]} and {lab[x]} ({lab[y]} {lab[z]}) "
                              f"differ at {lab[v]}")


def verify_identity_conjugation(t: FusionTable) -> CheckResult:
    """N_{1,X}^Y = N_{X,1}^Y = delta_{X,Y}; N_{X,Y}^Z = N_{Ybar,Xbar}^{Zbar};
    conjugation is an involution that reverses grades."""
    T, c = t.dense, t.conj_perm
    for i, b in enumerate(t.basis):
        j = c[i]
        if c[j] != i or t.basis[j].grade != (b.grade[1], b.grade[0]):
            return CheckResult(False, f"conjugation of {b.label} is not a grade-reversing involution")
    for i, b in enumerate(t.basis):
        left, right = t.index(IDENTITY[b.grade[0]]), t.index(IDENTITY[b.grade[1]])
        for side, row in (("left", T[left, i]), ("right", T[i, right])):
            expect = np.zeros(len(row), dtype=row.dtype)
            expect[i] = 1
            if not np.array_equal(row, expect):
                return CheckResult(False, f"{side} identity times {b.label} is not {b.label}")
    return _first_mismatch(t, T, T[np.ix_(c, c, c)].transpose(1, 0, 2), "N_{Ybar,Xbar}^Zbar")


def verify_integrality(t: FusionTable) -> CheckResult:
    """Every stored coefficient is a positive int on a grade-compatible triple."""
    try:
        FusionTable(t.k, t.basis, t.coefficients)
    except ValueError as e:
        return CheckResult(False, str(e))
    return CheckResult(True)


def pfdim(k: int) -> np.ndarray:
    """Perron-Frobenius dimensions in basis order.

    Gamma_k gives V11 and V12 scaled to 1 at alpha0; Gamma'_k gives V22 and
    V21 scaled to 1 at alphap0.
    """
    g, gp = build_gamma(k), build_gamma_prime(k)
    _, v = pf_weights(g)
    _, vp = pf_weights(gp)
    d = dict(zip(g.labels, v))
    d.update(zip(gp.labels, vp))
    return np.array([d[b.label] for b in standard_basis(k)])


def verify_dimension(t: FusionTable, dims: Optional[np.ndarray] = None, tol: float = 1e-6) -> CheckResult:
    """sum_Z N_{X,Y}^Z d(Z) = d(X) d(Y) for every compatible pair, relative to d(X) d(Y)."""
    d = pfdim(t.k) if dims is None else np.asarray(dims, dtype=float)
    lhs = np.tensordot(t.dense.astype(np.float64), d, axes=([2], [0]))
    rhs = np.outer(d, d)
    mask = np.zeros_like(rhs, dtype=bool)
    for i, j in t.compatible_pairs():
        mask[i, j] = True
    rel = np.where(mask, np.abs(lhs - rhs) / rhs, 0.0)
    i, j = np.unravel_index(np.argmax(rel), rel.shape)
    worst = float(rel[i, j])
    ok = worst < tol
    return CheckResult(ok, f"worst pair ({t.labels[i]}, {t.labels[j]}): {worst:.3e}", worst)


def recovered_adjacency(t: FusionTable) -> tuple[np.ndarray, np.ndarray]:
    """(N_{X,alpha1}^Y) over V11 x V12 and (N_{X,alphabar1}^Y) over V22 x V21."""
    k = t.k
    a = np.array([[t.n(x, "alpha1", y) for y in v12_labels(k)] for x in v11_labels(k)])
    b = np.array([[t.n(x, "alphabar1", y) for y in v21_labels(k)] for x in v22_labels(k)])
    return a, b


def verify_graph(t: FusionTable) -> CheckResult:
    k = t.k
    a, b = recovered_adjacency(t)
    for got, g in ((a, build_gamma(k)), (b, build_gamma_prime(k))):
        if not np.array_equal(got, g.adjacency):
            i, j = (int(v) for v in np.argwhere(got != g.adjacency)[0])
            gen = "alpha1" if g.root == "alpha0" else "alphabar1"
            return CheckResult(False, f"{g.name}: N_{{{g.even_labels[i]},{gen}}}^{{{g.odd_labels[j]}}} = "
                                      f"{got[i, j]}, graph has {g.adjacency[i, j]}")
    return CheckResult(True)


VERIFIERS = {
    "frobenius": verify_frobenius,
    "associativity": verify_associativity,
    "identity": verify_identity_conjugation,
    "integrality": verify_integrality,
    "graph": verify_graph,
    "dimension": verify_dimension,
}


def verify_all(t: FusionTable, checks: Optional[Iterable[str]] = None,
               tol: Tolerances = DEFAULT_TOLERANCES) -> dict[str, CheckResult]:
    names = list(VERIFIERS) if checks is None else list(checks)
    unknown = [c for c in names if c not in VERIFIERS]
    if unknown:
        raise KeyError(f"unknown checks: {', '.join(unknown)}")
    out = {}
    for name in names:
        if name == "dimension":
            out[name] = verify_dimension(t, tol=tol.dimension)
        else:
            out[name] = VERIFIERS[name](t)
    return out


# ----------------------------------------------------------------------------
# oracle comparison


@dataclass
class CrosscheckReport:
    k: int
    families: dict[str, list[str]]  # family -> list of failures (empty = pass)
    checked: dict[str, int]

    @property
    def ok(self) -> bool:
        return not any(self.families.values())

    def failures(self) -> list[str]:
        return [f"{fam}: {msg}" for fam, msgs in self.families.items() for msg in msgs]

    def lines(self) -> list[str]:
        return [f"k={self.k} {fam:<8} {'pass' if not msgs else 'FAIL'} ({self.checked[fam]} coefficients)"
                for fam, msgs in self.families.items()]


def crosscheck(t: FusionTable, k: Optional[int] = None) -> CrosscheckReport:
    """Compare every coefficient the closed-form oracle emits with the table."""
    from . import closed_form

    k = t.k if k is None else k
    families: dict[str, list[str]] = {}
    checked: dict[str, int] = {}
    for fam, entries in closed_form.oracle_entries(k).items():
        fails = []
        for e in entries:
            got = sum(c * t.n(x, y, z) for c, x, y, z in e.terms)
            if got != e.value:
                fails.append(f"{e.name}: table gives {got}, closed form gives {e.value}")
        families[fam] = fails
        checked[fam] = len(entries)
    return CrosscheckReport(k, families, checked)


# ----------------------------------------------------------------------------
# serialization


def _grade_str(g: tuple[str, str]) -> str:
    return g[0] + g[1]


def to_json_obj(t: FusionTable) -> dict:
    return {
        "k": t.k,
        "basis": [{"label": b.label, "grade": _grade_str(b.grade), "conjugate": b.conjugate}
                  for b in t.basis],
        "coefficients": [{"x": t.labels[x], "y": t.labels[y], "z": t.labels[z], "n": v}
                         for (x, y, z), v in sorted(t.coefficients.items())],
    }


def serialize(t: FusionTable) -> bytes:
    """Canonical JSON: fixed key order, one basis element or coefficient per line."""
    obj = to_json_obj(t)
    out = ['{', f'  "k": {obj["k"]},', '  "basis": [']
    out += [f"    {json.dumps(b, ensure_ascii=True)}," for b in obj["basis"]]
    out[-1] = out[-1].rstrip(",")
    out.append("  ],")
    out.append('  "coefficients": [')
    rows = [f"    {json.dumps(c, ensure_ascii=True)}," for c in obj["coefficients"]]
    if rows:
        rows[-1] = rows[-1].rstrip(",")
    out += rows
    out += ["  ]", "}"]
    return ("\n".join(out) + "\n").encode("ascii")


def deserialize(data: bytes | str) -> FusionTable:
    """Parse and validate a serialized table; every error names its position."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as e:
            raise TableFormatError("payload is not UTF-8", f"byte {e.start}") from None
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as e:
        raise TableFormatError(f"invalid JSON: {e.msg}", f"line {e.lineno} column {e.colno}") from None
    if not isinstance(obj, dict):
        raise TableFormatError("top level must be an object", "$")
    for key in ("k", "basis", "coefficients"):
        if key not in obj:
            raise TableFormatError(f"missing field {key!r}", "$")
    extra = set(obj) - {"k", "basis", "coefficients"}
    if extra:
        raise TableFormatError(f"unexpected fields {sorted(extra)}", "$")
    k = obj["k"]
    if not isinstance(k, int) or isinstance(k, bool) or k < 0:
        raise TableFormatError(f"k must be a non-negative integer, got {k!r}", "$.k")
    basis = standard_basis(k)
    if not isinstance(obj["basis"], list) or len(obj["basis"]) != len(basis):
        raise TableFormatError(f"basis must list {len(basis)} elements", "$.basis")
    for i, (entry, b) in enumerate(zip(obj["basis"], basis)):
        want = {"label": b.label, "grade": _grade_str(b.grade), "conjugate": b.conjugate}
        if entry != want:
            raise TableFormatError(f"expected {want}, got {entry!r}", f"$.basis[{i}]")
    index = {b.label: i for i, b in enumerate(basis)}
    if not isinstance(obj["coefficients"], list):
        raise TableFormatError("coefficients must be a list", "$.coefficients")
    coeffs = {}
    for i, entry in enumerate(obj["coefficients"]):
        pos = f"$.coefficients[{i}]"
        if not isinstance(entry, dict) or set(entry) != {"x", "y", "z", "n"}:
            raise TableFormatError("entry must have exactly x, y, z, n", pos)
        try:
            key = tuple(index[entry[f]] for f in ("x", "y", "z"))
        except (KeyError, TypeError):
            raise TableFormatError("unknown label", pos) from None
        v = entry["n"]
        if not isinstance(v, int) or isinstance(v, bool) or v <= 0:
            raise TableFormatError(f"n must be a positive integer, got {v!r}", pos)
        if key in coeffs:
            raise TableFormatError("duplicate triple", pos)
        coeffs[key] = v
    try:
        return FusionTable(k, basis, dict(sorted(coeffs.items())))
    except ValueError as e:
        raise TableFormatError(str(e), "$.coefficients") from None


def _expansion(t: FusionTable, i: int, j: int, name=str) -> str:
    row = t.dense[i, j]
    terms = []
    for z in np.nonzero(row)[0]:
        v = int(row[z])
        terms.append(name(t.labels[z]) if v == 1 else f"{v}*{name(t.labels[z])}")
    return " + ".join(terms) if terms else "0"


def to_csv(t: FusionTable) -> str:
    """One row per compatible pair: x, y, product expansion."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "x", "y", "product"])
    for i, j in t.compatible_pairs():
        w.writerow([t.k, t.labels[i], t.labels[j], _expansion(t, i, j)])
    return buf.getvalue()


def to_pretty(t: FusionTable) -> str:
    lines = [f"k = {t.k}"]
    for i, j in t.compatible_pairs():
        lines.append(f"{pretty(t.labels[i])} · {pretty(t.labels[j])} = {_expansion(t, i, j, pretty)}")
    return "\n".join(lines) + "\n"


def dimension_summary(t: FusionTable) -> dict[str, float]:
    """Global dimension of each grade block: sum of d(X)^2."""
    d = pfdim(t.k)
    out = {}
    for g in GRADE_ORDER:
        out[_grade_str(g)] = float(sum(d[i] ** 2 for i, b in enumerate(t.basis) if b.grade == g))
    return out

