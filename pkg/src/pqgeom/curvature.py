"""Curvature tensors compatible with a para-quaternionic structure.

Conventions.  A curvature tensor is stored densely as R[x, y, z, w],
meaning R(e_x, e_y) e_z = sum_w R[x, y, z, w] e_w, together with the
metric used for index gymnastics.  The Ricci tensor traces the first
slot, Ric(Y, Z) = Tr(X -> R(X, Y) Z); the Jacobi operator in a unit
direction is K_X(Y) = R(X, Y) X.  Antisymmetry in (X, Y) then forces
Tr K_X = -Ric(X, X), which is the form the trace identity is tested in.

Symmetric-space oracles use the base-point formula R(A, B) C =
[[A, B], C] on the tangent summand of a symmetric splitting.  The
closed curvature formula of the projective-space model reproduces the
bracket curvature only up to one global scale, which is fitted exactly
(see fitted_projective_scale) rather than assumed; the fit comes out
negative for the metric normalised by the unit-pseudosphere submersion.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import exactla
from .algebra import EPS, ScalarField, SplitQuaternion
from .forms import BilinearForm
from .linalg import (HermitianStructure, PQMatrix, GrassmanSplit,
                     left_structure_endos, metric_matrix, structure_endos)

CYCLES = ((0, 1, 2), (1, 2, 0), (2, 0, 1))


class NotSymmetricPairError(ValueError):
    """Structure constants fail the symmetric-pair or Jacobi conditions."""


class SingularSystemError(ValueError):
    """The Ricci system lost rank (floating tolerance misconfiguration)."""


class NullDirectionError(ValueError):
    """A sampled Jacobi direction is null."""


class CurvatureTensor:
    """Dense (1,3) curvature array with its companion metric."""

    def __init__(self, tensor, metric):
        self.tensor = np.asarray(tensor)
        self.metric = np.asarray(metric)

    @property
    def dim(self) -> int:
        return self.metric.shape[0]

    def is_exact(self) -> bool:
        return self.tensor.dtype == object

    def endomorphism(self, x: int, y: int) -> np.ndarray:
        """Matrix of R(e_x, e_y); column z is the image of e_z."""
        return self.tensor[x, y].T

    def __add__(self, other):
        return CurvatureTensor(self.tensor + other.tensor, self.metric)

    def __sub__(self, other):
        return CurvatureTensor(self.tensor - other.tensor, self.metric)

    def scale(self, c) -> "CurvatureTensor":
        return CurvatureTensor(c * self.tensor, self.metric)

    def max_abs(self):
        return exactla.max_abs(self.tensor)

    def antisymmetry_residual(self):
        return exactla.max_abs(self.tensor + self.tensor.transpose(1, 0, 2, 3))


def bianchi_residual(R: CurvatureTensor):
    """Max-norm of the cyclic sum R(X,Y)Z + R(Y,Z)X + R(Z,X)Y."""
    t = R.tensor
    cyc = t + t.transpose(1, 2, 0, 3) + t.transpose(2, 0, 1, 3)
    return exactla.max_abs(cyc)


def ricci(R: CurvatureTensor) -> np.ndarray:
    """Ric(Y, Z) = Tr(X -> R(X, Y) Z), traced over the first slot."""
    d = R.dim
    out = exactla.zeros((d, d)) if R.is_exact() else np.zeros((d, d))
    for x in range(d):
        out = out + R.tensor[x, :, :, x]
    return out


def scalar_curvature(R: CurvatureTensor):
    ginv = (exactla.inverse(R.metric) if R.is_exact()
            else np.linalg.inv(R.metric))
    return np.trace(ginv @ ricci(R))


def einstein_check(R: CurvatureTensor):
    """(constant, residual) for Ric(R) = constant * g, with the constant
    K(R)/dim read off the metric trace."""
    ric = ricci(R)
    K = scalar_curvature(R)
    const = (Fraction(K) if R.is_exact() else K) / R.dim
    residual = exactla.max_abs(ric - const * R.metric)
    return const, residual


# ---------------------------------------------------------------------------
# the linear family R^B and the Ricci splitting
# ---------------------------------------------------------------------------


def curvature_from_bilinear(B: BilinearForm,
                            H: HermitianStructure) -> CurvatureTensor:
    """The curvature tensor attached linearly to a bilinear form:

        R^B(X,Y)Z = B(Y,Z)X - B(X,Z)Y + (B(Y,X) - B(X,Y))Z
                    + sum_a eps_a [ (B(X,J_aY) - B(Y,J_aX)) J_aZ
                                    + B(X,J_aZ) J_aY - B(Y,J_aZ) J_aX ].

    Satisfies the first Bianchi identity for every B, is injective in B,
    and sends the metric itself to the projective-space curvature.
    """
    M = B.matrix
    d = H.dim
    exact = M.dtype == object
    t = exactla.zeros((d, d, d, d)) if exact else np.zeros((d, d, d, d))
    BJ = [M @ Ja for Ja in H.J]   # BJ[a][x, y] = B(e_x, J_a e_y)
    cols = [[Ja[:, z] for z in range(d)] for Ja in H.J]
    for x in range(d):
        for y in range(d):
            if x == y:
                continue
            for z in range(d):
                row = t[x, y, z]
                row[x] += M[y, z]
                row[y] -= M[x, z]
                row[z] += M[y, x] - M[x, y]
                for a in range(3):
                    row += EPS[a] * ((BJ[a][x, y] - BJ[a][y, x]) * cols[a][z]
                                     + BJ[a][x, z] * cols[a][y]
                                     - BJ[a][y, z] * cols[a][x])
    return CurvatureTensor(t, H.g)


def structure_traces(R: CurvatureTensor, H: HermitianStructure):
    """The three scalar 2-forms (X, Y) -> Tr(J_a R(X, Y))."""
    d = R.dim
    out = [exactla.zeros((d, d)) if R.is_exact() else np.zeros((d, d))
           for _ in range(3)]
    for x in range(d):
        for y in range(d):
            Mxy = R.endomorphism(x, y)
            for a in range(3):
                out[a][x, y] = np.trace(H.J[a] @ Mxy)
    return out


def normalizes_structure(R: CurvatureTensor, H: HermitianStructure,
                         field: ScalarField | None = None):
    """Commutator membership test: R takes values in the normaliser of
    the structure span iff for every argument pair

        [R(X,Y), J_a] = (eps_a / 2n) (Tr(J_c R(X,Y)) J_b
                                      - Tr(J_b R(X,Y)) J_c)

    over cyclic (a, b, c).  Returns (bool, residual)."""
    field = field or ScalarField.exact_field()
    d = R.dim
    worst = Fraction(0) if R.is_exact() else 0.0
    for x in range(d):
        for y in range(x + 1, d):
            Mxy = R.endomorphism(x, y)
            traces = [np.trace(H.J[a] @ Mxy) for a in range(3)]
            for (a, b, c) in CYCLES:
                lhs = Mxy @ H.J[a] - H.J[a] @ Mxy
                rhs = traces[c] * H.J[b] - traces[b] * H.J[c]
                scale = (Fraction(2 * EPS[a], d) if R.is_exact()
                         else 2 * EPS[a] / d)  # = eps_a / 2n
                diff = lhs - scale * rhs
                worst = max(worst, exactla.max_abs(diff))
    return field.is_zero(worst), worst


def _ricci_phi_operator(B: np.ndarray, H: HermitianStructure) -> np.ndarray:
    """Closed form of Ric(R^B): (dim+3) B - B^T + Psi(B) + Psi(B)^T with
    Psi(B) = sum_a eps_a J_a^T B J_a."""
    d = H.dim
    psi = sum((EPS[a] * (H.J[a].T @ B @ H.J[a]) for a in range(3)),
              exactla.zeros((d, d)) if B.dtype == object else np.zeros((d, d)))
    return (d + 3) * B - B.T + psi + psi.T


def ricci_split(R: CurvatureTensor, H: HermitianStructure,
                method: str = "solve"):
    """Unique decomposition R = W + R^B with Ric(W) = 0.

    method 'solve' assembles the dense linear system Ric(R^B) = Ric(R)
    over all bilinear forms and solves it exactly (floating mode uses
    the numpy solver and raises SingularSystemError on rank loss);
    method 'closed' inverts the operator on its four eigenspaces
    (eigenvalues dim+8, dim, dim+10, dim+2 on the symmetric/antisymmetric
    hermitian/mixed components).
    """
    d = R.dim
    ric = ricci(R)
    exact = R.is_exact()
    if method == "closed":
        from .forms import hermitian_projector
        sym = (ric + ric.T) * (Fraction(1, 2) if exact else 0.5)
        alt = (ric - ric.T) * (Fraction(1, 2) if exact else 0.5)
        parts = []
        for mat, herm_eig, mix_eig in ((sym, d + 8, d), (alt, d + 10, d + 2)):
            herm, mix, _ = hermitian_projector(BilinearForm(mat), H)
            if exact:
                parts.append(herm.matrix / Fraction(herm_eig)
                             + mix.matrix / Fraction(mix_eig))
            else:
                parts.append(herm.matrix / herm_eig + mix.matrix / mix_eig)
        Bmat = parts[0] + parts[1]
    elif method == "solve":
        N = d * d
        op = exactla.zeros((N, N)) if exact else np.zeros((N, N))
        for col in range(N):
            basis = exactla.zeros((d, d)) if exact else np.zeros((d, d))
            basis[col // d, col % d] = Fraction(1) if exact else 1.0
            op[:, col] = _ricci_phi_operator(basis, H).reshape(-1)
        rhs = ric.reshape(-1)
        if exact:
            Bvec = exactla.solve(op, rhs)
        else:
            try:
                Bvec = np.linalg.solve(op, rhs)
            except np.linalg.LinAlgError as err:
                raise SingularSystemError(str(err)) from err
        Bmat = Bvec.reshape(d, d)
    else:
        raise ValueError(f"unknown method {method!r}")
    B = BilinearForm(Bmat)
    W = R - curvature_from_bilinear(B, H)
    return W, B


# ---------------------------------------------------------------------------
# the projective-space model curvature
# ---------------------------------------------------------------------------


def projective_curvature(H: HermitianStructure) -> CurvatureTensor:
    """Closed curvature formula of the para-quaternionic projective space:

        R(X,Y)Z = g(Y,Z)X - g(X,Z)Y
                  + sum_a eps_a ( g(J_aY,Z) J_aX - g(J_aX,Z) J_aY )
                  - 2 sum_a eps_a g(J_aX,Y) J_aZ.

    Evaluates the formula for any hermitian structure (any comrel triple
    with its metric), not only the standard one.
    """
    d = H.dim
    g = H.g
    exact = H.is_exact()
    t = exactla.zeros((d, d, d, d)) if exact else np.zeros((d, d, d, d))
    W = [Ja.T @ g for Ja in H.J]  # W[a][x, y] = g(J_a e_x, e_y)
    for x in range(d):
        for y in range(d):
            if x == y:
                continue
            for z in range(d):
                row = t[x, y, z]
                row[x] += g[y, z]
                row[y] -= g[x, z]
                for a in range(3):
                    row += EPS[a] * (W[a][y, z] * H.J[a][:, x]
                                     - W[a][x, z] * H.J[a][:, y]
                                     - 2 * W[a][x, y] * H.J[a][:, z])
    return CurvatureTensor(t, g)


# ---------------------------------------------------------------------------
# symmetric-space oracles
# ---------------------------------------------------------------------------


@dataclass
class SymmetricDecomposition:
    """Structure constants of a Lie algebra split g = m + f.

    c_mm[i, j, a]: coefficient of f_a in [m_i, m_j]
    c_fm[a, i, j]: coefficient of m_j in [f_a, m_i]
    c_ff[a, b, c]: coefficient of f_c in [f_a, f_b]
    g_m: invariant metric on m; structure: hermitian structure on m used
    by the membership and spectrum diagnostics.
    """

    c_mm: np.ndarray
    c_fm: np.ndarray
    c_ff: np.ndarray
    g_m: np.ndarray
    structure: HermitianStructure | None = None

    @property
    def m_dim(self) -> int:
        return self.c_mm.shape[0]

    @property
    def f_dim(self) -> int:
        return self.c_mm.shape[2]

    def validate(self):
        """Symmetric-pair sanity: antisymmetry, metric invariance, and the
        Jacobi identity on tangent triples (which is first Bianchi)."""
        if exactla.max_abs(self.c_mm + self.c_mm.transpose(1, 0, 2)) != 0:
            raise NotSymmetricPairError("[m, m] table is not antisymmetric")
        # ad(f) must be g_m-skew
        for a in range(self.f_dim):
            ad = self.c_fm[a].T  # column i = [f_a, m_i]
            if exactla.max_abs(ad.T @ self.g_m + self.g_m @ ad) != 0:
                raise NotSymmetricPairError("metric is not ad(f)-invariant")
        # Jacobi on (m, m, m): sum_cyc [[m_i, m_j], m_k] = 0
        dbl = np.tensordot(self.c_mm, self.c_fm, axes=([2], [0]))
        cyc = dbl + dbl.transpose(1, 2, 0, 3) + dbl.transpose(2, 0, 1, 3)
        if exactla.max_abs(cyc) != 0:
            raise NotSymmetricPairError("Jacobi identity fails on m triples")

    @classmethod
    def from_matrix_algebra(cls, m_mats, f_mats, g_m, structure=None):
        """Assemble structure constants from explicit real matrices.

        Verifies the closure relations [m,m] within span(f), [f,m] within
        span(m), [f,f] within span(f) exactly; matrix brackets make the
        Jacobi identity automatic.
        """
        def flat(mats):
            return np.stack([m.reshape(-1) for m in mats], axis=1)

        def project(space_flat, target, label):
            sol, residual = _project_onto(space_flat, target.reshape(-1))
            if residual != 0:
                raise NotSymmetricPairError(f"bracket leaves {label}")
            return sol

        mf, ff = flat(m_mats), flat(f_mats)
        dm, df = len(m_mats), len(f_mats)
        c_mm = exactla.zeros((dm, dm, df))
        c_fm = exactla.zeros((df, dm, dm))
        c_ff = exactla.zeros((df, df, df))
        for i in range(dm):
            for j in range(i + 1, dm):
                br = m_mats[i] @ m_mats[j] - m_mats[j] @ m_mats[i]
                coef = project(ff, br, "span(f)")
                c_mm[i, j] = coef
                c_mm[j, i] = -coef
        for a in range(df):
            for i in range(dm):
                br = f_mats[a] @ m_mats[i] - m_mats[i] @ f_mats[a]
                c_fm[a, i] = project(mf, br, "span(m)")
            for b in range(a + 1, df):
                br = f_mats[a] @ f_mats[b] - f_mats[b] @ f_mats[a]
                coef = project(ff, br, "span(f)")
                c_ff[a, b] = coef
                c_ff[b, a] = -coef
        return cls(c_mm, c_fm, c_ff, g_m, structure)


def _project_onto(columns: np.ndarray, target: np.ndarray):
    """Exact least-squares-free projection: coefficients with
    columns @ coef = target, plus the max-abs residual."""
    gram = columns.T @ columns
    coef = exactla.solve(gram, columns.T @ target)
    residual = exactla.max_abs(columns @ coef - target)
    return coef, residual


def symmetric_space_curvature(D: SymmetricDecomposition) -> CurvatureTensor:
    """Base-point curvature R(A, B) C = [[A, B], C] on the tangent
    summand, in the chosen basis of m."""
    D.validate()
    tensor = np.tensordot(D.c_mm, D.c_fm, axes=([2], [0]))
    return CurvatureTensor(tensor, D.g_m)


# -- concrete decompositions ------------------------------------------------


def solvable_decomposition(sign: int = 1) -> SymmetricDecomposition:
    """The solvable symmetric pair on a 4-dimensional neutral space.

    One isotropy generator A (right multiplication by (i + j)/2, a null
    imaginary direction, so A^2 = 0) acts on m = R^{2,2}; the only
    nonzero tangent brackets are

        [E1,E2] = [E3,E1] = [E4,E2] = [E3,E4] = sign * A.

    Its curvature is nonzero with identically nilpotent Jacobi operators.
    The compatible structure carried along is the left-multiplication
    triple, which commutes with A.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    half = Fraction(1, 2)
    A = exactla.fracarray([
        [0, -half, half, 0],
        [half, 0, 0, half],
        [half, 0, 0, half],
        [0, half, -half, 0],
    ])
    c_mm = exactla.zeros((4, 4, 1))
    for (i, j) in ((0, 1), (2, 0), (3, 1), (2, 3)):
        c_mm[i, j, 0] = Fraction(sign)
        c_mm[j, i, 0] = Fraction(-sign)
    c_fm = exactla.zeros((1, 4, 4))
    for i in range(4):
        c_fm[0, i] = A[:, i]
    c_ff = exactla.zeros((1, 1, 1))
    g_m = metric_matrix(1)
    return SymmetricDecomposition(c_mm, c_fm, c_ff, g_m,
                                  structure=left_structure_endos(1))


def abelian_decomposition(n: int = 1) -> SymmetricDecomposition:
    """All tangent brackets zero: the flat oracle."""
    dm = 4 * n
    return SymmetricDecomposition(
        exactla.zeros((dm, dm, 1)), exactla.zeros((1, dm, dm)),
        exactla.zeros((1, 1, 1)), metric_matrix(n),
        structure=structure_endos(n))


# 2x2 generators with j1^2 = -1, j2^2 = j3^2 = +1 and the cyclic table
SL2_TRIPLE = (
    exactla.fracarray([[0, 1], [-1, 0]]),
    exactla.fracarray([[0, 1], [1, 0]]),
    exactla.fracarray([[1, 0], [0, -1]]),
)


def special_linear_decomposition(n: int = 2) -> SymmetricDecomposition:
    """Traceless (n+2) x (n+2) matrices split by the 2 + n block involution.

    The isotropy is the full block-diagonal traceless subalgebra (the
    2x2 and n x n traceless blocks plus the one-dimensional relative
    trace, which is needed to close [m, m]); m is the off-diagonal part,
    with the trace form as metric and the adjoint action of the 2x2
    triple as structure.
    """
    N = n + 2

    def unit(p, q):
        M = exactla.zeros((N, N))
        M[p, q] = Fraction(1)
        return M

    m_mats = [unit(p, q) for p in range(2) for q in range(2, N)]
    m_mats += [unit(q, p) for p in range(2) for q in range(2, N)]
    f_mats = []
    for j in SL2_TRIPLE:
        M = exactla.zeros((N, N))
        M[:2, :2] = j
        f_mats.append(M)
    for p in range(2, N):
        for q in range(2, N):
            if p != q:
                f_mats.append(unit(p, q))
    for p in range(2, N - 1):
        f_mats.append(unit(p, p) - unit(p + 1, p + 1))
    center = exactla.zeros((N, N))
    for p in range(2):
        center[p, p] = Fraction(n)
    for p in range(2, N):
        center[p, p] = Fraction(-2)
    f_mats.append(center)

    dm = len(m_mats)
    g_m = exactla.zeros((dm, dm))
    for i in range(dm):
        for j in range(dm):
            g_m[i, j] = np.trace(m_mats[i] @ m_mats[j])

    Jms = []
    for j in SL2_TRIPLE:
        big = exactla.zeros((N, N))
        big[:2, :2] = j
        cols = []
        for M in m_mats:
            br = big @ M - M @ big
            coef, residual = _project_onto(
                np.stack([x.reshape(-1) for x in m_mats], axis=1),
                br.reshape(-1))
            if residual != 0:
                raise NotSymmetricPairError("structure action leaves m")
            cols.append(coef)
        Jms.append(np.stack(cols, axis=1))
    H = HermitianStructure(*Jms, g_m)
    return SymmetricDecomposition.from_matrix_algebra(m_mats, f_mats, g_m, H)


def projective_pair(n: int):
    """The symmetric pair behind the projective-space model, presented on
    the standard module.

    The isometry algebra consists of anti-hermitian (n+1) x (n+1)
    matrices over the split quaternions; the tangent summand is the
    first-column slice v -> M(v) with M(v) = [[0, -conj(v)^T], [v, 0]].
    Brackets of such slices land in the isotropy block, and the double
    bracket read back off the first column gives the curvature on the
    standard rank-n module with the standard metric and structure.
    """
    from .linalg import PQVector

    def embed(v: PQVector) -> PQMatrix:
        entries = [[SplitQuaternion() for _ in range(n + 1)]
                   for _ in range(n + 1)]
        for r, h in enumerate(v.entries):
            entries[r + 1][0] = h
            entries[0][r + 1] = -h.conj()
        return PQMatrix(entries)

    def extract(M: PQMatrix) -> PQVector:
        return PQVector(M.entries[r + 1][0] for r in range(n))

    d = 4 * n
    tensor = exactla.zeros((d, d, d, d))
    basis = [PQVector.from_real([1 if r == s else 0 for r in range(d)])
             for s in range(d)]
    embedded = [embed(v) for v in basis]
    for x in range(d):
        for y in range(x + 1, d):
            inner = embedded[x].commutator(embedded[y])
            for z in range(d):
                out = extract(inner.commutator(embedded[z]))
                tensor[x, y, z] = out.to_real()
                tensor[y, x, z] = -tensor[x, y, z]
    return CurvatureTensor(tensor, metric_matrix(n))


_FITTED_SCALE_CACHE: dict[int, Fraction] = {}


def fitted_projective_scale(n: int) -> Fraction:
    """Exact scalar c with bracket curvature = c * closed formula on the
    standard structure; cached per rank.  The pseudosphere-submersion
    normalisation makes c = -1."""
    if n not in _FITTED_SCALE_CACHE:
        bracket = projective_pair(n)
        formula = projective_curvature(structure_endos(n))
        num = den = None
        flat_b = bracket.tensor.reshape(-1)
        flat_f = formula.tensor.reshape(-1)
        for b, f in zip(flat_b, flat_f):
            if f != 0:
                num, den = b, f
                break
        if num is None:
            raise ValueError("formula tensor vanished")
        c = num / den
        if exactla.max_abs(bracket.tensor - c * formula.tensor) != 0:
            raise ValueError("bracket and formula curvature not proportional")
        _FITTED_SCALE_CACHE[n] = c
    return _FITTED_SCALE_CACHE[n]


def ambient_projective_curvature(n: int) -> CurvatureTensor:
    """Projective-space curvature in the bracket normalisation (the one
    induced by the unit-pseudosphere submersion metric)."""
    return projective_curvature(structure_endos(n)).scale(
        fitted_projective_scale(n))


# ---------------------------------------------------------------------------
# Jacobi operators and spectra
# ---------------------------------------------------------------------------


def jacobi_operator(R: CurvatureTensor, X: np.ndarray) -> np.ndarray:
    """Matrix of K_X: Y -> R(X, Y) X; column y is the image of e_y."""
    t1 = np.tensordot(X, R.tensor, axes=([0], [0]))   # (y, z, w)
    t2 = np.tensordot(X, t1, axes=([0], [1]))         # (y, w)
    return t2.T


def restrict_to_complement(R: CurvatureTensor, X: np.ndarray):
    """(matrix of K_X on X-orthogonal vectors, basis columns)."""
    g = R.metric
    row = (g @ X).reshape(1, -1)
    if R.is_exact():
        basis = exactla.nullspace(row)
    else:
        _, _, vt = np.linalg.svd(row)
        basis = vt[1:].T
    K = jacobi_operator(R, X)
    img = K @ basis
    if R.is_exact():
        coords = exactla.solve(basis.T @ basis, basis.T @ img)
    else:
        coords = np.linalg.lstsq(basis, img, rcond=None)[0]
    return coords, basis


def minimal_polynomial_degree(M: np.ndarray, tol: float = 1e-9) -> int:
    """Degree of the minimal polynomial (exact arithmetic when possible)."""
    d = M.shape[0]
    if M.dtype == object:
        powers = [exactla.eye(d).reshape(-1)]
        cur = exactla.eye(d)
        for k in range(1, d + 1):
            cur = cur @ M
            powers.append(cur.reshape(-1))
            stack = np.stack(powers, axis=1)
            if exactla.rank(stack) < k + 1:
                return k
        return d
    powers = [np.eye(d).reshape(-1)]
    cur = np.eye(d)
    for k in range(1, d + 1):
        cur = cur @ M
        powers.append(cur.reshape(-1))
        stack = np.stack(powers, axis=1)
        if np.linalg.matrix_rank(stack, tol=tol) < k + 1:
            return k
    return d


@dataclass
class DirectionSpectrum:
    direction_index: int
    metric_sign: int
    eigenvalues: list
    min_poly_degree: int
    is_nilpotent: bool
    operator_nonzero: bool


@dataclass
class SpectrumReport:
    directions: list
    spacelike_agree: bool
    timelike_agree: bool
    tolerance: float

    @property
    def pointwise_osserman(self) -> bool:
        return self.spacelike_agree and self.timelike_agree


def jacobi_spectrum_report(R: CurvatureTensor, directions,
                           tolerance: float = 1e-9) -> SpectrumReport:
    """Per-direction eigenvalues of K_X restricted to the orthogonal
    complement, with agreement verdicts split by the sign of g(X, X).

    Directions must satisfy |g(X, X)| = 1 up to the tolerance; a null
    direction raises NullDirectionError.  Nilpotent Jordan structure is
    detected through the minimal-polynomial degree and a K_X^2 = 0 test
    rather than full Jordan forms.
    """
    g = R.metric
    entries = []
    for idx, X in enumerate(directions):
        X = np.asarray(X)
        norm = X @ g @ X
        if norm == 0 or abs(float(norm)) < 1e-15:
            raise NullDirectionError(f"direction {idx} is null")
        if abs(abs(float(norm)) - 1.0) > max(tolerance, 1e-12):
            raise ValueError(f"direction {idx} is not unit: g(X,X)={norm}")
        Kres, _ = restrict_to_complement(R, X)
        Kfloat = np.array(Kres, dtype=float)
        eig = np.linalg.eigvals(Kfloat)
        eig = sorted(eig, key=lambda z: (round(z.real, 9), round(z.imag, 9)))
        deg = minimal_polynomial_degree(Kres)
        Kfull = jacobi_operator(R, X)
        if R.is_exact():
            nil = exactla.max_abs(Kfull @ Kfull) == 0
            nonzero = exactla.max_abs(Kfull) != 0
        else:
            nil = exactla.max_abs(Kfull @ Kfull) <= tolerance
            nonzero = exactla.max_abs(Kfull) > tolerance
        entries.append(DirectionSpectrum(
            direction_index=idx,
            metric_sign=1 if float(norm) > 0 else -1,
            eigenvalues=[complex(z) for z in eig],
            min_poly_degree=deg,
            is_nilpotent=bool(nil),
            operator_nonzero=bool(nonzero)))

    def agree(sign):
        group = [e.eigenvalues for e in entries if e.metric_sign == sign]
        if len(group) < 2:
            return True
        first = np.array(group[0])
        return all(np.allclose(np.array(other), first, atol=tolerance,
                               rtol=tolerance) for other in group[1:])

    return SpectrumReport(directions=entries,
                          spacelike_agree=agree(1),
                          timelike_agree=agree(-1),
                          tolerance=tolerance)


# ---------------------------------------------------------------------------
# hyper-type Weyl samples through the tensor splitting
# ---------------------------------------------------------------------------


def weyl_sample(H: HermitianStructure, split: GrassmanSplit,
                rng) -> CurvatureTensor:
    """Random Ricci-flat curvature tensor commuting with the whole
    structure, built from a random fully symmetric 4-tensor on the E
    factor of the tensor splitting.

    With s in S^4 E* and shat the omega_E-raised contraction, the tensor
    R(e (x) h, e' (x) h') = omega_H(h, h') shat(e, e', .) (x) id_H is
    antisymmetric, satisfies Bianchi (the dim-2 identity on the H factor
    against the full symmetry of s), takes values commuting with every
    J_a, and is traceless in the Ricci sense.
    """
    m = len(split.e_basis)          # 2n
    d = 2 * m
    s4 = exactla.zeros((m, m, m, m))
    for i in range(m):
        for j in range(i, m):
            for k in range(j, m):
                for l in range(k, m):
                    val = Fraction(rng.randint(-3, 3))
                    for perm in _permutations4(i, j, k, l):
                        s4[perm] = val
    omega_inv_t = exactla.inverse(split.omega_e).T
    shat = np.tensordot(s4, omega_inv_t, axes=([3], [0]))  # (i, j, k, l)
    omega_h = split.omega_h
    tensor = exactla.zeros((d, d, d, d))
    for i in range(m):
        for a in range(2):
            x = 2 * i + a
            for j in range(m):
                for b in range(2):
                    y = 2 * j + b
                    if omega_h[a, b] == 0:
                        continue
                    for k in range(m):
                        for c in range(2):
                            z = 2 * k + c
                            row = tensor[x, y, z]
                            for l in range(m):
                                row[2 * l + c] += omega_h[a, b] * shat[i, j, k, l]
    # transform from tensor coordinates to the ambient basis:
    # R_V[x,y,z,w] = Cinv[p,x] Cinv[q,y] Cinv[r,z] R_t[p,q,r,t] C[w,t]
    C = split.change
    Cinv = exactla.inverse(C)
    t = np.tensordot(tensor, C, axes=([3], [1]))
    for axis in range(3):
        t = np.moveaxis(np.tensordot(Cinv, t, axes=([0], [axis])), 0, axis)
    return CurvatureTensor(t, H.g)


def _permutations4(i, j, k, l):
    from itertools import permutations
    return set(permutations((i, j, k, l)))


# ---------------------------------------------------------------------------
# serialisation
# ---------------------------------------------------------------------------


def curvature_to_text(R: CurvatureTensor, convention: str = "cyclic-ijk") -> str:
    header = {"n": R.dim // 4, "convention": convention,
              "mode": "exact" if R.is_exact() else "float"}
    entries = [str(x) for x in R.tensor.reshape(-1)]
    gvals = [str(x) for x in R.metric.reshape(-1)]
    return json.dumps(header) + "\n" + " ".join(entries) + "\n" + " ".join(gvals) + "\n"


def curvature_from_text(text: str) -> CurvatureTensor:
    head, body, gline = text.strip().split("\n")
    header = json.loads(head)
    d = 4 * header["n"]
    toks = body.split()
    gtoks = gline.split()
    if header["mode"] == "exact":
        tensor = exactla.fracarray(toks).reshape(d, d, d, d)
        metric = exactla.fracarray(gtoks).reshape(d, d)
    else:
        tensor = np.array([float(x) for x in toks]).reshape(d, d, d, d)
        metric = np.array([float(x) for x in gtoks]).reshape(d, d)
    return CurvatureTensor(tensor, metric)
