"""Realization of the fusion ring by real matrices with a trace.

Every basis object is a (2k+4)x(2k+4) real matrix ``b`` together with a grade
(i, j) standing for ``b (x) f_ij``.  Products multiply the matrices and
compose the grades; the structure constants are the trace inner products
``N_{X,Y}^Z = mu(Z^t (XY))`` with ``mu(b) = sum_j mu_j b_jj``.

All matrices have the same shape: a polynomial in A = diag(sqrt(t_j)) on the
diagonal, plus possibly two entries coupling the eigenvalue-0 and
eigenvalue-2 coordinates.  Each object is described once by an
:class:`ElementRecipe`; the float64 builder and the multiprecision
structure-constant path both read the recipes.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

import mpmath
import numpy as np

from .config import DEFAULT_TOLERANCES, DOUBLE_PRECISION_MAX_K, Tolerances
from .errors import SpectralError, ToleranceError
from .fusion_ring import CheckResult, FusionTable, verify_graph
from .graphs import (
    SpectralData,
    build_gamma,
    chain_length,
    conjugate_label,
    eigvec_basis,
    spectral,
    v11_labels,
    v12_labels,
    v21_labels,
    v22_labels,
)

log = logging.getLogger(__name__)

NN, NM, MN, MM = GRADES = (("N", "N"), ("N", "M"), ("M", "N"), ("M", "M"))


def grade_labels(k: int) -> dict[tuple[str, str], list[str]]:
    return {NN: v11_labels(k), NM: v12_labels(k), MN: v21_labels(k), MM: v22_labels(k)}


# ----------------------------------------------------------------------------
# recipes


@dataclass(frozen=True)
class ElementRecipe:
    """``sum c_m R_m(A) + sum coeff * sqrt(radicand) * e_{rc}``.

    Corner positions use 0 for the eigenvalue-0 coordinate and 1 for the
    eigenvalue-2 coordinate.
    """

    label: str
    grade: tuple[str, str]
    leg: tuple[tuple[int, Fraction], ...]
    corner: tuple[tuple[tuple[int, int], Fraction, int], ...] = ()


def recipes(k: int) -> dict[str, ElementRecipe]:
    n = chain_length(k)
    h = Fraction(1, 2)
    s, s2 = 2 * k + 3, 2 * (2 * k + 3)  # radicands
    out: list[ElementRecipe] = []
    for j in range(0, n, 2):
        out.append(ElementRecipe(f"alpha{j}", NN, ((j, Fraction(1)),)))
        out.append(ElementRecipe(f"alphap{j}", MM, ((j, Fraction(1)),)))
    for j in range(1, n + 1, 2):
        out.append(ElementRecipe(f"alpha{j}", NM, ((j, Fraction(1)),)))
        out.append(ElementRecipe(f"alphabar{j}", MN, ((j, Fraction(1)),)))
    leg1 = ((n + 1, h),)
    leg3 = ((n + 3, h), (n + 1, -h), (n - 1, -h))
    leg2 = ((n + 2, h), (n, -h))
    out += [
        ElementRecipe("beta1", NN, leg1, (((0, 1), h, s), ((1, 0), h, s))),
        ElementRecipe("gamma1", NN, leg1, (((0, 1), -h, s), ((1, 0), -h, s))),
        ElementRecipe("beta3", NN, leg3, (((0, 1), h, s), ((1, 0), -h, s))),
        ElementRecipe("gamma3", NN, leg3, (((0, 1), -h, s), ((1, 0), h, s))),
        ElementRecipe("beta2", NM, leg2, (((0, 1), h, s2),)),
        ElementRecipe("gamma2", NM, leg2, (((0, 1), -h, s2),)),
        ElementRecipe("betabar2", MN, leg2, (((1, 0), h, s2),)),
        ElementRecipe("gammabar2", MN, leg2, (((1, 0), -h, s2),)),
        ElementRecipe("f", MM, ((n - 1, h), (n + 1, Fraction(1)), (n + 3, -h))),
        ElementRecipe("g", MM, ((n + 3, h), (n - 1, -h))),
    ]
    return {r.label: r for r in out}


# ----------------------------------------------------------------------------
# model objects


@dataclass(frozen=True)
class ModelElement:
    grade: tuple[str, str]
    matrix: np.ndarray = field(repr=False)
    label: Optional[str] = None

    def __matmul__(self, other: "ModelElement") -> "ModelElement":
        if self.grade[1] != other.grade[0]:
            raise ValueError(f"cannot multiply grades {self.grade} and {other.grade}")
        return ModelElement((self.grade[0], other.grade[1]), self.matrix @ other.matrix)

    def __add__(self, other: "ModelElement") -> "ModelElement":
        if self.grade != other.grade:
            raise ValueError(f"cannot add grades {self.grade} and {other.grade}")
        return ModelElement(self.grade, self.matrix + other.matrix)

    def __sub__(self, other: "ModelElement") -> "ModelElement":
        return self + other.scale(-1.0)

    def scale(self, c: float) -> "ModelElement":
        return ModelElement(self.grade, c * self.matrix)

    def conj(self) -> "ModelElement":
        label = conjugate_label(self.label) if self.label else None
        return ModelElement((self.grade[1], self.grade[0]), self.matrix.T, label)


@dataclass(frozen=True)
class TraceState:
    """mu(b) = sum_j mu_j b_jj."""

    weights: np.ndarray

    def __call__(self, b: np.ndarray) -> float:
        return float(np.dot(self.weights, np.diag(b)))

    def inner(self, b: np.ndarray, c: np.ndarray) -> float:
        # mu(c^t b) without forming the product
        return float(np.einsum("j,ij,ij->", self.weights, c, b))


@dataclass(frozen=True)
class MatrixModel:
    k: int
    spectral: SpectralData
    trace: TraceState
    elements: dict[str, ModelElement]
    order: dict[tuple[str, str], list[str]]

    def __getitem__(self, label: str) -> ModelElement:
        return self.elements[label]

    def inner(self, x: ModelElement, y: ModelElement) -> float:
        if x.grade != y.grade:
            raise ValueError("inner product needs equal grades")
        return self.trace.inner(x.matrix, y.matrix)

    def stack(self, grade) -> np.ndarray:
        return np.stack([self.elements[l].matrix for l in self.order[grade]])

    def combo(self, terms) -> ModelElement:
        """Linear combination from (label, coefficient) pairs."""
        terms = list(terms)
        out = self.elements[terms[0][0]].scale(terms[0][1])
        for lab, c in terms[1:]:
            out = out + self.elements[lab].scale(c)
        return out


def chebyshev_values(x, upto: int) -> list:
    """[R_0(x), ..., R_upto(x)] by the three-term recursion.

    Horner evaluation of the monomial coefficients cancels badly on |x| < 2,
    the recursion does not.  Works elementwise on numpy arrays and on lists
    of mpmath numbers alike.
    """
    if isinstance(x, np.ndarray):
        vals = [np.ones_like(x), x.copy()]
        for _ in range(2, upto + 1):
            vals.append(x * vals[-1] - vals[-2])
    else:
        vals = [[mpmath.mpf(1)] * len(x), list(x)]
        for _ in range(2, upto + 1):
            vals.append([xi * a - b for xi, a, b in zip(x, vals[-1], vals[-2])])
    return vals[: upto + 1]


def model_roots(spec: SpectralData) -> np.ndarray:
    """Diagonal of A: square roots of the eigenvalues of GG^t."""
    roots = np.sqrt(np.clip(spec.eigenvalues, 0.0, None))
    roots[spec.zero_index] = 0.0
    roots[spec.two_index] = math.sqrt(2.0)
    return roots


def christoffel_weights(k: int, vals) -> list:
    """mu_j = 1 / sum_i p_i(t_j)^2 / h_i.

    The p_i are the orthogonal polynomials of the spectral measure of alpha0:
    p_i(D) alpha0 runs through alpha0, alpha2, ..., alpha{n-1} (norm 1),
    beta1 + gamma1 and beta3 + gamma3 (squared norm 2).  The sum has only
    positive terms, so tiny weights come out with full relative accuracy,
    which the projection entries from an eigensolver do not have.
    """
    n = chain_length(k)
    leg3 = [a - b - c for a, b, c in zip(vals[n + 3], vals[n + 1], vals[n - 1])]
    out = []
    for j in range(len(vals[0])):
        s = sum(vals[2 * i][j] ** 2 for i in range(2 * k + 2))
        s += (vals[n + 1][j] ** 2 + leg3[j] ** 2) / 2
        out.append(1 / s)
    return out


def _corner_positions(spec: SpectralData) -> tuple[int, int]:
    return spec.zero_index, spec.two_index


def _float_matrix(r: ElementRecipe, vals, pos) -> np.ndarray:
    diag = sum(float(c) * vals[m] for m, c in r.leg)
    mat = np.diag(diag)
    for (a, b), c, rad in r.corner:
        mat[pos[a], pos[b]] += float(c) * math.sqrt(rad)
    mat.setflags(write=False)
    return mat


def build_model(k: int, spec: Optional[SpectralData] = None,
                tol: Tolerances = DEFAULT_TOLERANCES) -> MatrixModel:
    """All 8k+18 basis objects as graded float64 matrices.

    The trace weights are the Christoffel weights at the Jacobi eigenvalues;
    they are checked against the Jacobi weights before use.
    """
    if spec is None:
        spec = spectral(k, tol)
    n = chain_length(k)
    vals = chebyshev_values(model_roots(spec), n + 3)
    mu = np.array(christoffel_weights(k, vals))
    drift = float(np.max(np.abs(mu - spec.weights)))
    if drift > tol.weights:
        raise SpectralError(f"k={k}: Christoffel and Jacobi weights differ by {drift:.3e}")
    spec = replace(spec, weights=mu)
    pos = _corner_positions(spec)
    els = {lab: ModelElement(r.grade, _float_matrix(r, vals, pos), lab)
           for lab, r in recipes(k).items()}
    order = grade_labels(k)
    assert sum(len(v) for v in order.values()) == len(els) == 8 * k + 18
    return MatrixModel(k, spec, TraceState(mu), els, order)


# ----------------------------------------------------------------------------
# structure constants


@dataclass
class RawTable:
    """Structure constants before acceptance.

    ``nearest[key][x, y, z]`` is the nearest integer and ``residual`` the
    signed distance to it, one array per grade triple key = (a, b, c), i.e.
    X in grade (a, b), Y in (b, c), Z in (a, c).
    """

    k: int
    order: dict
    nearest: dict
    residual: dict
    precision: str

    def max_residual(self) -> float:
        return max(float(np.max(np.abs(r))) for r in self.residual.values())

    def witness(self, key, idx) -> tuple:
        a, b, c = key
        x, y, z = idx
        return (self.order[(a, b)][x], self.order[(b, c)][y], self.order[(a, c)][z],
                int(self.nearest[key][x, y, z]) + float(self.residual[key][x, y, z]))


def grade_triples():
    for a in "NM":
        for b in "NM":
            for c in "NM":
                yield (a, b, c)


def structure_constants_double(model: MatrixModel) -> RawTable:
    mu = model.trace.weights
    stacks = {g: model.stack(g) for g in GRADES}
    nearest, residual = {}, {}
    for key in grade_triples():
        a, b, c = key
        X, Y, Z = stacks[(a, b)], stacks[(b, c)], stacks[(a, c)]
        XY = np.einsum("xjk,ykc->xyjc", X, Y)
        blk = np.einsum("j,xyjc,zjc->xyz", mu, XY, Z)
        r = np.rint(blk)
        nearest[key] = r.astype(np.int64)
        residual[key] = blk - r
    return RawTable(model.k, model.order, nearest, residual, "double")


def _mp_roots(spec: SpectralData, dps: int) -> list:
    """Eigenvalues of D polished to ``dps`` digits on q_k."""
    k = spec.k

    def q(t):
        prev, cur = t * t - 5 * t + 3, (t - 1) * (t ** 3 - 8 * t ** 2 + 17 * t - 5)
        if k == 0:
            return prev
        for _ in range(2, k + 1):
            prev, cur = cur, (t * t - 4 * t + 2) * cur - prev
        return cur

    out = []
    with mpmath.workdps(dps):
        for j, t in enumerate(spec.eigenvalues):
            if j == spec.zero_index:
                out.append(mpmath.mpf(0))
                continue
            if j == spec.two_index:
                out.append(mpmath.mpf(2))
                continue
            lo, hi = mpmath.mpf(t) - mpmath.mpf("1e-8"), mpmath.mpf(t) + mpmath.mpf("1e-8")
            if q(lo) * q(hi) > 0:
                raise SpectralError(f"k={k}: no sign change of q_k around {t}")
            out.append(mpmath.findroot(q, (lo, hi), solver="anderson"))
    return out


def structure_constants_multi(model: MatrixModel, bits: int = 160) -> RawTable:
    """Structure constants with mpmath inputs and exact integer accumulation.

    Values are computed with mpmath, then every eigenvalue column is scaled
    by its largest entry and rounded to ``bits``-bit fixed point, so the
    contraction itself is exact integer arithmetic.  The quantisation error
    per term is about 2^-bits times the column's largest contribution.
    """
    k, spec = model.k, model.spectral
    n = chain_length(k)
    dps = 60 + n // 2
    with mpmath.workdps(dps):
        t = _mp_roots(spec, dps)
        x = [mpmath.sqrt(v) for v in t]
        vals = chebyshev_values(x, n + 3)
        mu = christoffel_weights(k, vals)
        rec = recipes(k)
        i0, i2 = _corner_positions(spec)
        rest = [j for j in range(len(t)) if j not in (i0, i2)]
        diag = {lab: [sum(c * vals[m][j] for m, c in r.leg) for j in range(len(t))]
                for lab, r in rec.items()}

        def corner(lab):
            blk = [[diag[lab][i0], mpmath.mpf(0)], [mpmath.mpf(0), diag[lab][i2]]]
            for (a, b), c, rad in rec[lab].corner:
                blk[a][b] += c * mpmath.sqrt(rad)
            return blk

        labels = [lab for g in GRADES for lab in model.order[g]]
        sigma = [max(abs(diag[lab][j]) for lab in labels) for j in rest]
        one = 1 << bits

        def fixed(v):
            return int(mpmath.nint(v * one))

        ints_diag = {lab: [fixed(diag[lab][j] / s) for j, s in zip(rest, sigma)] for lab in labels}
        w = [fixed(mu[j] * s ** 3) for j, s in zip(rest, sigma)]
        ints_corner = {lab: [[fixed(v) for v in row] for row in corner(lab)] for lab in labels}
        mu_corner = [fixed(mu[i0]), fixed(mu[i2])]

    def stacked(grade, table):
        return np.array([table[lab] for lab in model.order[grade]], dtype=object)

    D = {g: stacked(g, ints_diag) for g in GRADES}
    C = {g: stacked(g, ints_corner) for g in GRADES}
    W = np.array(w, dtype=object)
    M2 = np.array(mu_corner, dtype=object)
    scale_bits = 4 * bits
    half = 1 << (scale_bits - 1)
    nearest, residual = {}, {}
    for key in grade_triples():
        a, b, c = key
        gx, gy, gz = (a, b), (b, c), (a, c)
        nx, ny, nz = len(model.order[gx]), len(model.order[gy]), len(model.order[gz])
        # diagonal coordinates: sum_j w_j x_j y_j z_j
        XY = (D[gx][:, None, :] * D[gy][None, :, :]).reshape(nx * ny, -1)
        total = XY.dot((D[gz] * W[None, :]).T)
        # 2x2 corner: sum_{p,r} mu_p (XY)_{pr} Z_{pr}
        XY2 = (C[gx][:, None, :, :, None] * C[gy][None, :, None, :, :]).sum(axis=3)
        Zw = (C[gz] * M2[None, :, None]).reshape(nz, 4)
        total = total + XY2.reshape(nx * ny, 4).dot(Zw.T)
        near = np.empty((nx * ny, nz), dtype=object)
        res = np.empty((nx * ny, nz))
        for idx, v in np.ndenumerate(total):
            q = (v + half) >> scale_bits
            near[idx] = q
            res[idx] = math.ldexp(float((v - (q << scale_bits)) >> (scale_bits - 60)), -60)
        nearest[key] = _int_array(near.reshape(nx, ny, nz))
        residual[key] = res.reshape(nx, ny, nz)
    return RawTable(k, model.order, nearest, residual, "multi")


def _int_array(a: np.ndarray) -> np.ndarray:
    """int64 when every entry fits, Python ints otherwise."""
    if all(-(1 << 62) < v < (1 << 62) for v in a.flat):
        return a.astype(np.int64)
    return a


def structure_constants(model: MatrixModel, precision: str = "auto") -> RawTable:
    """``precision`` is "double", "multi", or "auto" (double up to DOUBLE_PRECISION_MAX_K)."""
    if precision == "auto":
        precision = "double" if model.k <= DOUBLE_PRECISION_MAX_K else "multi"
    if precision == "double":
        return structure_constants_double(model)
    if precision == "multi":
        return structure_constants_multi(model)
    raise ValueError(f"unknown precision {precision!r}")


def accept_integers(raw: RawTable, tol: Optional[float] = None) -> dict:
    """Integer blocks, or ToleranceError naming the first bad coefficient."""
    tol = DEFAULT_TOLERANCES.rounding if tol is None else tol
    for key in grade_triples():
        res = np.abs(raw.residual[key])
        if np.max(res) >= tol:
            idx = np.unravel_index(np.argmax(res), res.shape)
            w = raw.witness(key, idx)
            raise ToleranceError(
                f"k={raw.k}: N_{{{w[0]},{w[1]}}}^{{{w[2]}}} = {w[3]!r} is not within {tol:g} "
                f"of an integer ({raw.precision} precision)", w)
        neg = np.argwhere(raw.nearest[key] < 0)
        if len(neg):
            w = raw.witness(key, tuple(neg[0]))
            raise ToleranceError(f"k={raw.k}: N_{{{w[0]},{w[1]}}}^{{{w[2]}}} = {w[3]!r} is negative", w)
    return dict(raw.nearest)


def fusion_table(model: MatrixModel, tol: Optional[float] = None, precision: str = "auto"):
    """Integer fusion table N_{X,Y}^Z = <XY, Z>_mu extracted from the model."""
    raw = structure_constants(model, precision)
    log.info("k=%d: max rounding residual %.2e (%s)", model.k, raw.max_residual(), raw.precision)
    if model.k > 25:
        log.warning("k=%d is beyond the tested range; max rounding residual %.2e",
                    model.k, raw.max_residual())
    return FusionTable.from_blocks(model.k, model.order, accept_integers(raw, tol))


# ----------------------------------------------------------------------------
# checks


def gram(model: MatrixModel, grade) -> np.ndarray:
    S = model.stack(grade)
    return np.einsum("j,xjc,yjc->xy", model.trace.weights, S, S)


def orthonormality_check(model: MatrixModel, tol: Optional[float] = None) -> CheckResult:
    tol = DEFAULT_TOLERANCES.orthonormality if tol is None else tol
    worst, where = 0.0, None
    for grade in GRADES:
        G = gram(model, grade)
        err = np.abs(G - np.identity(G.shape[0]))
        i, j = np.unravel_index(np.argmax(err), err.shape)
        if err[i, j] >= worst:
            labs = model.order[grade]
            worst, where = float(err[i, j]), (labs[i], labs[j])
    ok = worst < tol
    return CheckResult(ok, f"worst pair {where}: {worst:.3e}", worst)


def span_dimensions(model: MatrixModel, rank_tol: float = 1e-6) -> dict:
    return {g: int(np.linalg.matrix_rank(gram(model, g), tol=rank_tol)) for g in GRADES}


def graph_recovery(table: FusionTable) -> CheckResult:
    """Right multiplication by alpha1 (resp. alphabar1) reproduces the graphs."""
    return verify_graph(table)


def _vector_element(model: MatrixModel, vec) -> ModelElement:
    labels = v11_labels(model.k)
    return model.combo((lab, float(c)) for lab, c in zip(labels, vec) if c)


def _relative_gap(lhs: np.ndarray, rhs: np.ndarray) -> float:
    return float(np.max(np.abs(lhs - rhs))) / max(1.0, float(np.max(np.abs(rhs))))


def xi_identities(model: MatrixModel, tol: Optional[float] = None, use_eta: bool = False) -> CheckResult:
    """xi = beta1 - gamma1 + beta3 - gamma3 against the eigenvectors of D.

    With ``use_eta`` the element eta = beta1 - gamma1 - beta3 + gamma3 is
    substituted for xi; it lies in the other eigenspace, so the check fails.

    Checks xi xibar = 2 y1 and xibar xi = 2 x1, and the closed forms
    xi xibar = 2 (2 - aa) q_k(aa), xibar xi = (-1)^{k+1} 2 aa q_k(aa)
    with aa = alpha1 alphabar1.  Residuals are relative to the largest entry.
    """
    tol = DEFAULT_TOLERANCES.orthonormality if tol is None else tol
    k = model.k
    s3 = -1 if use_eta else 1
    xi = model.combo([("beta1", 1), ("gamma1", -1), ("beta3", s3), ("gamma3", -s3)])
    xib = xi.conj()
    x1, _, y1, _ = eigvec_basis(k)
    aa = (model["alpha1"] @ model["alphabar1"]).matrix
    one = np.identity(aa.shape[0])
    prev, cur = aa @ aa - 5 * aa + 3 * one, (aa - one) @ (aa @ aa @ aa - 8 * aa @ aa + 17 * aa - 5 * one)
    if k == 0:
        cur = prev
    for _ in range(2, k + 1):
        prev, cur = cur, (aa @ aa - 4 * aa + 2 * one) @ cur - prev
    sign = -1 if k % 2 == 0 else 1
    xxb, xbx = (xi @ xib).matrix, (xib @ xi).matrix
    checks = {
        "xi xibar = 2 y1": (xxb, 2 * _vector_element(model, y1).matrix),
        "xibar xi = 2 x1": (xbx, 2 * _vector_element(model, x1).matrix),
        "xi xibar = 2(2-aa) q_k(aa)": (xxb, 2 * (2 * one - aa) @ cur),
        "xibar xi = (-1)^(k+1) 2 aa q_k(aa)": (xbx, sign * 2 * aa @ cur),
    }
    worst = 0.0
    for name, (lhs, rhs) in checks.items():
        err = _relative_gap(lhs, rhs)
        worst = max(worst, err)
        if err >= tol:
            return CheckResult(False, f"{name}: relative residual {err:.3e}", err)
    return CheckResult(True, value=worst)


def chain_inner_products(model: MatrixModel, tol: Optional[float] = None) -> CheckResult:
    """mu(R_i(A) R_j(A)) = <R_i(Delta) a0, R_j(Delta) a0> for i = j mod 2, and
    R_{n+4}(A) - R_{n+2}(A) - R_n(A) - R_{n-2}(A) = 0.

    Both sides of the first identity are computed independently: the left
    from the trace, the right exactly from the graph.
    """
    tol = DEFAULT_TOLERANCES.orthonormality if tol is None else tol
    k = model.k
    n = chain_length(k)
    g = build_gamma(k)
    Delta = g.delta().astype(object)
    a0 = np.zeros(Delta.shape[0], dtype=object)
    a0[g.index("alpha0")] = 1
    vecs = [a0, Delta.dot(a0)]
    for _ in range(2, n + 5):
        vecs.append(Delta.dot(vecs[-1]) - vecs[-2])
    vals = chebyshev_values(model_roots(model.spectral), n + 4)
    mu = model.trace.weights
    for i in range(n + 5):
        for j in range(i % 2, n + 5, 2):
            terms = mu * vals[i] * vals[j]
            lhs = float(np.sum(terms))
            rhs = int(vecs[i].dot(vecs[j]))
            if abs(lhs - rhs) >= tol * max(1.0, float(np.sum(np.abs(terms)))):
                return CheckResult(False, f"(R_{i}, R_{j}): {lhs} vs {rhs}", abs(lhs - rhs))
    P = vals[n + 4] - vals[n + 2] - vals[n] - vals[n - 2]
    err = _relative_gap(P, np.zeros_like(P)) / max(1.0, float(np.max(np.abs(vals[n + 4]))))
    if err >= tol:
        return CheckResult(False, f"R_(n+4)-R_(n+2)-R_n-R_(n-2) at A: {err:.3e}", err)
    return CheckResult(True)


def trace_property(model: MatrixModel, rng: np.random.Generator, trials: int = 20) -> float:
    """Worst relative |mu(bc) - mu(cb)| over random b, c in the span of V11."""
    S = model.stack(NN)
    worst = 0.0
    for _ in range(trials):
        b = np.tensordot(rng.standard_normal(len(S)), S, axes=1)
        c = np.tensordot(rng.standard_normal(len(S)), S, axes=1)
        scale = max(1.0, float(np.sum(model.trace.weights * np.diag(np.abs(b) @ np.abs(c)))))
        worst = max(worst, abs(model.trace(b @ c) - model.trace(c @ b)) / scale)
    return worst
