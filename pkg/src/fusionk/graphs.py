"""The graph pair (Gamma_k, Gamma'_k) and the spectral data of D = G G^t.

Vertex order is fixed once here and used everywhere else (matrices, model,
serialized tables).  In each of the four vertex classes the branch vertices
come first and the chain follows in decreasing index:

    V11 (even, Gamma_k)   beta3 beta1 gamma3 gamma1 alpha{n-1} ... alpha2 alpha0
    V12 (odd, Gamma_k)    beta2 gamma2 alpha{n} alpha{n-2} ... alpha1
    V21 (odd, Gamma'_k)   betabar2 gammabar2 alphabar{n} ... alphabar1
    V22 (even, Gamma'_k)  f g alphap{n-1} ... alphap2 alphap0

with n = 4k + 3.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import SpectralError
from .polynomials import IntPoly, poly_q, real_roots

# ----------------------------------------------------------------------------
# labels


def chain_length(k: int) -> int:
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    return 4 * k + 3


def v11_labels(k: int) -> list[str]:
    n = chain_length(k)
    return ["beta3", "beta1", "gamma3", "gamma1"] + [f"alpha{j}" for j in range(n - 1, -1, -2)]


def v12_labels(k: int) -> list[str]:
    n = chain_length(k)
    return ["beta2", "gamma2"] + [f"alpha{j}" for j in range(n, 0, -2)]


def v21_labels(k: int) -> list[str]:
    return [conjugate_label(x) for x in v12_labels(k)]


def v22_labels(k: int) -> list[str]:
    n = chain_length(k)
    return ["f", "g"] + [f"alphap{j}" for j in range(n - 1, -1, -2)]


_LABEL_RE = re.compile(r"^(alpha|alphabar|alphap)(\d+)$")


def conjugate_label(label: str) -> str:
    """Conjugation on labels: beta3 <-> gamma3, odd alphas <-> their bars."""
    swaps = {"beta3": "gamma3", "gamma3": "beta3",
             "beta2": "betabar2", "betabar2": "beta2",
             "gamma2": "gammabar2", "gammabar2": "gamma2"}
    if label in swaps:
        return swaps[label]
    if label in ("beta1", "gamma1", "f", "g"):
        return label
    m = _LABEL_RE.match(label)
    if not m:
        raise KeyError(f"unknown label {label!r}")
    fam, j = m.group(1), int(m.group(2))
    if fam == "alphap":
        return label
    if j % 2 == 0:
        if fam != "alpha":
            raise KeyError(f"unknown label {label!r}")
        return label
    return f"alphabar{j}" if fam == "alpha" else f"alpha{j}"


_SUB = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


def pretty(label: str) -> str:
    """Unicode rendering, e.g. alphabar3 -> ᾱ₃, alphap0 -> α′₀."""
    if label in ("f", "g"):
        return label
    m = re.match(r"^(alphabar|alphap|alpha|betabar|beta|gammabar|gamma)(\d+)$", label)
    if not m:
        return label
    fam, idx = m.group(1), m.group(2).translate(_SUB)
    glyph = {"alpha": "α", "alphabar": "ᾱ", "alphap": "α′", "beta": "β",
             "betabar": "β̄", "gamma": "γ", "gammabar": "γ̄"}[fam]
    return glyph + idx


# ----------------------------------------------------------------------------
# graphs


@dataclass(frozen=True)
class BipartiteGraph:
    name: str
    even_labels: tuple[str, ...]
    odd_labels: tuple[str, ...]
    adjacency: np.ndarray = field(repr=False)  # rows even, cols odd
    root: str = "alpha0"

    def __post_init__(self):
        self.adjacency.setflags(write=False)

    @property
    def labels(self) -> tuple[str, ...]:
        return self.even_labels + self.odd_labels

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def delta(self) -> np.ndarray:
        """Full symmetric adjacency, even vertices first."""
        G = self.adjacency
        e, o = G.shape
        out = np.zeros((e + o, e + o), dtype=np.int64)
        out[:e, e:] = G
        out[e:, :e] = G.T
        return out

    def edges(self) -> list[tuple[str, str]]:
        rows, cols = np.nonzero(self.adjacency)
        return [(self.even_labels[r], self.odd_labels[c]) for r, c in zip(rows, cols)]

    def is_connected(self) -> bool:
        D = self.delta()
        seen, stack = {0}, [0]
        while stack:
            v = stack.pop()
            for w in np.nonzero(D[v])[0]:
                if int(w) not in seen:
                    seen.add(int(w))
                    stack.append(int(w))
        return len(seen) == D.shape[0]

    def to_dot(self) -> str:
        lines = [f'graph "{self.name}" {{']
        for lab in self.labels:
            lines.append(f'  "{lab}" [label="{pretty(lab)}"];')
        for a, b in self.edges():
            lines.append(f'  "{a}" -- "{b}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _from_edges(name, even, odd, edges, root) -> BipartiteGraph:
    ei = {x: i for i, x in enumerate(even)}
    oi = {x: i for i, x in enumerate(odd)}
    G = np.zeros((len(even), len(odd)), dtype=np.int64)
    for a, b in edges:
        if a in ei:
            G[ei[a], oi[b]] = 1
        else:
            G[ei[b], oi[a]] = 1
    return BipartiteGraph(name, tuple(even), tuple(odd), G, root)


def build_gamma(k: int) -> BipartiteGraph:
    """Chain alpha0 - ... - alpha_n with two three-vertex legs on alpha_n."""
    n = chain_length(k)
    edges = [(f"alpha{j}", f"alpha{j + 1}") for j in range(n)]
    edges += [(f"alpha{n}", "beta1"), ("beta1", "beta2"), ("beta2", "beta3"),
              (f"alpha{n}", "gamma1"), ("gamma1", "gamma2"), ("gamma2", "gamma3")]
    return _from_edges(f"Gamma_{k}", v11_labels(k), v12_labels(k), edges, "alpha0")


def build_gamma_prime(k: int) -> BipartiteGraph:
    """Chain alphap0 - alphabar1 - ... - alphabar_n, f and g on alphabar_n,
    betabar2 and gammabar2 on g."""
    n = chain_length(k)

    def chain(j):
        return f"alphap{j}" if j % 2 == 0 else f"alphabar{j}"

    edges = [(chain(j), chain(j + 1)) for j in range(n)]
    edges += [("f", f"alphabar{n}"), ("g", f"alphabar{n}"),
              ("g", "betabar2"), ("g", "gammabar2")]
    return _from_edges(f"Gamma'_{k}", v22_labels(k), v21_labels(k), edges, "alphap0")


def dd_matrix(g: BipartiteGraph) -> np.ndarray:
    """Exact integer G G^t."""
    G = g.adjacency.astype(object)
    return np.array(G @ G.T, dtype=np.int64)


# ----------------------------------------------------------------------------
# exact characteristic polynomial


def charpoly(M) -> IntPoly:
    """det(tI - M) for an integer matrix, by Faddeev-LeVerrier over Python ints."""
    A = np.array(M, dtype=object)
    n = A.shape[0]
    I = np.identity(n, dtype=object)
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    Mk = np.zeros((n, n), dtype=object)
    for i in range(1, n + 1):
        Mk = A.dot(Mk) + coeffs[n - i + 1] * I
        tr = int(np.trace(A.dot(Mk)))
        if tr % i:
            raise ArithmeticError("non-integral Faddeev-LeVerrier step")
        coeffs[n - i] = -tr // i
    return IntPoly(coeffs)


def char_poly_check(k: int, dd: Optional[np.ndarray] = None) -> bool:
    """det(tI - D) == t^2 (t-2)^2 q_k(t), exactly."""
    if dd is None:
        dd = dd_matrix(build_gamma(k))
    t = IntPoly.t()
    expected = t * t * (t - 2) * (t - 2) * poly_q(k)
    return charpoly(dd) == expected


# ----------------------------------------------------------------------------
# Jacobi eigensolver


def jacobi_eigh(M, tol: float = 1e-9, max_sweeps: int = 100):
    """Cyclic Jacobi for a real symmetric matrix.

    Returns (eigenvalues, eigenvectors) with eigenvectors in columns, sorted
    ascending.  Sweeps stop once the off-diagonal Frobenius norm is below
    ``tol``; one more sweep is then run, which with quadratic convergence
    takes the residual down to rounding level.
    """
    A = np.array(M, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n) or not np.allclose(A, A.T):
        raise ValueError("jacobi_eigh needs a square symmetric matrix")
    V = np.identity(n)
    converged_at = None
    for sweep in range(max_sweeps):
        off = np.sqrt(2.0 * np.sum(np.triu(A, 1) ** 2))
        if off == 0.0 or (converged_at is not None and sweep > converged_at):
            break
        if off < tol and converged_at is None:
            converged_at = sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = np.copysign(1.0, theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                ap, aq = A[:, p].copy(), A[:, q].copy()
                A[:, p], A[:, q] = c * ap - s * aq, s * ap + c * aq
                ap, aq = A[p, :].copy(), A[q, :].copy()
                A[p, :], A[q, :] = c * ap - s * aq, s * ap + c * aq
                A[p, q] = A[q, p] = 0.0
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p], V[:, q] = c * vp - s * vq, s * vp + c * vq
    else:
        raise SpectralError(f"Jacobi did not converge in {max_sweeps} sweeps")
    w = np.diag(A).copy()
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


# ----------------------------------------------------------------------------
# spectral data


@dataclass(frozen=True)
class SpectralData:
    """Eigen-decomposition of D for one k.

    ``eigenvalues`` are sorted ascending; 0 and 2 (each of multiplicity two
    in D) sit at ``zero_index`` and ``two_index``.  ``projections[j]`` is the orthogonal projection onto the t_j eigenspace and
    ``weights[j] = <E_j a0, a0>``.
    """

    k: int
    labels: tuple[str, ...]
    eigenvalues: np.ndarray
    projections: tuple[np.ndarray, ...]
    weights: np.ndarray
    pf_value: float
    pf_vector: np.ndarray

    @property
    def zero_index(self) -> int:
        return int(np.argmin(np.abs(self.eigenvalues)))

    @property
    def two_index(self) -> int:
        return int(np.argmin(np.abs(self.eigenvalues - 2.0)))

    def q_roots(self) -> np.ndarray:
        keep = [j for j in range(len(self.eigenvalues)) if j not in (self.zero_index, self.two_index)]
        return self.eigenvalues[keep]


def _cluster(w: np.ndarray, tol: float) -> list[list[int]]:
    groups: list[list[int]] = []
    for i, x in enumerate(w):
        if groups and abs(x - w[groups[-1][-1]]) < tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def spectral(k: int, tol: Tolerances = DEFAULT_TOLERANCES) -> SpectralData:
    g = build_gamma(k)
    D = dd_matrix(g)
    w, V = jacobi_eigh(D, tol=tol.jacobi)
    groups = _cluster(w, tol.cluster)
    if len(groups) != 2 * k + 4:
        raise SpectralError(f"k={k}: expected {2 * k + 4} distinct eigenvalues, got {len(groups)}")
    values = [float(np.mean(w[grp])) for grp in groups]
    projs = [V[:, grp] @ V[:, grp].T for grp in groups]

    def find(target):
        hits = [i for i, x in enumerate(values) if abs(x - target) < tol.cluster]
        if len(hits) != 1 or len(groups[hits[0]]) != 2:
            raise SpectralError(f"k={k}: eigenvalue {target} missing or not of multiplicity 2")
        return hits[0]

    i0, i2 = find(0.0), find(2.0)
    if any(len(grp) != 1 for i, grp in enumerate(groups) if i not in (i0, i2)):
        raise SpectralError(f"k={k}: a root of q_k came out degenerate")
    order = sorted(range(len(values)), key=values.__getitem__)
    a0 = g.even_labels.index("alpha0")
    eig = np.array([values[i] for i in order])
    eig[order.index(i0)], eig[order.index(i2)] = 0.0, 2.0
    projections = tuple(projs[i] for i in order)
    mu = np.array([P[a0, a0] for P in projections])
    if abs(mu.sum() - 1.0) > tol.weights or np.any(mu <= 0.0):
        raise SpectralError(f"k={k}: weights fail sum/positivity: {mu}")
    for P in projections:
        P.setflags(write=False)
    pf_value, pf_vector = pf_weights(g, rtol=tol.pf)
    return SpectralData(k, g.even_labels, eig, projections, mu, pf_value, pf_vector)


def q_roots(k: int) -> list[float]:
    """Roots of q_k isolated from exact sign changes (independent of Jacobi)."""
    return real_roots(poly_q(k), Fraction(0), Fraction(8))


def lagrange_projection(D: np.ndarray, nodes, j: int) -> np.ndarray:
    """P_j(D) with P_j the Lagrange basis polynomial on ``nodes``.

    Factors are applied alternating between the node farthest from and the
    node nearest to t_j, so partial products stay moderate; the natural order
    loses about three digits at k = 10.
    """
    n = D.shape[0]
    D = np.asarray(D, dtype=float)
    others = sorted((i for i in range(len(nodes)) if i != j), key=lambda i: -abs(nodes[i] - nodes[j]))
    order = []
    lo, hi = 0, len(others) - 1
    while lo <= hi:
        order.append(others[lo])
        lo += 1
        if lo <= hi:
            order.append(others[hi])
            hi -= 1
    out = np.identity(n)
    for i in order:
        out = out @ (D - nodes[i] * np.identity(n)) / (nodes[j] - nodes[i])
    return out


def eigvec_basis(k: int):
    """Integer eigenvectors (x1, x2, y1, y2) of D over V11.

    x1, x2 span the eigenvalue-2 space and y1, y2 the kernel; each is
    checked exactly against D.
    """
    labels = v11_labels(k)
    idx = {x: i for i, x in enumerate(labels)}

    def vec(terms):
        v = np.zeros(len(labels), dtype=np.int64)
        for lab, c in terms:
            v[idx[lab]] += c
        return v

    sign = -1 if k % 2 == 0 else 1  # (-1)^{k+1}
    legs = ["beta1", "gamma1", "beta3", "gamma3"]
    x1 = vec([(f"alpha{4 * i}", 2 * (-1) ** i) for i in range(k + 1)]
             + [(f"alpha{4 * i + 2}", 2 * (-1) ** i) for i in range(k + 1)]
             + [(lab, sign) for lab in legs])
    x2 = vec([("beta1", 1), ("gamma1", -1), ("beta3", 1), ("gamma3", -1)])
    y1 = vec([(f"alpha{2 * j}", 2 * (-1) ** j) for j in range(2 * k + 2)]
             + [("beta1", 1), ("gamma1", 1), ("beta3", -1), ("gamma3", -1)])
    y2 = vec([("beta1", 1), ("gamma1", -1), ("beta3", -1), ("gamma3", 1)])
    D = dd_matrix(build_gamma(k))
    for name, v, ev in (("x1", x1, 2), ("x2", x2, 2), ("y1", y1, 0), ("y2", y2, 0)):
        if not np.array_equal(D @ v, ev * v):
            raise ArithmeticError(f"k={k}: {name} is not an eigenvector for {ev}")
    return x1, x2, y1, y2


# ----------------------------------------------------------------------------
# Perron-Frobenius


def pf_weights(g: BipartiteGraph, rtol: float = 1e-12, max_iter: int = 1_000_000):
    """Perron-Frobenius eigenvalue and eigenvector of the full adjacency.

    Power iteration on Delta + I (the shift removes the -lambda eigenvalue a
    bipartite graph always has).  Convergence is judged entrywise relative,
    since every entry is positive.  The vector is scaled to 1 at ``g.root``.
    """
    if not g.is_connected():
        raise ValueError(f"{g.name} is not connected")
    D = g.delta().astype(float)
    M = D + np.identity(D.shape[0])
    v = np.ones(D.shape[0])
    for _ in range(max_iter):
        w = M @ v
        w /= np.linalg.norm(w)
        # entries decay along the chains, so the stop test is per entry
        if np.max(np.abs(w - v) / w) <= rtol:
            v = w
            break
        v = w
    else:
        raise SpectralError(f"power iteration on {g.name} did not converge")
    value = float(v @ D @ v / (v @ v))
    v = v / v[g.index(g.root)]
    if np.any(v <= 0):
        raise SpectralError(f"{g.name}: Perron-Frobenius vector is not positive")
    return value, v
