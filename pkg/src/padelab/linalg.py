"""Dense linear algebra for wide (n x m, m >= n) matrices.

Three independent routes live here on purpose:

* :func:`svd` -- a deterministic one-sided Jacobi SVD in doubles, with
  high relative accuracy and a designated nullspace direction;
* :func:`exact_nullspace` -- fraction-free (Bareiss) elimination over
  exact rational-complex scalars;
* :func:`exact_sigma_ratio_bounds` -- the exact characteristic
  polynomial of M M^H plus high-precision roots, giving a
  singular-value ratio that does not depend on the float SVD at all.

Keeping the float and exact routes independent is what lets the test
suite cross-check one against the other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import (
    ConvergenceError,
    InvalidInputError,
    InvalidParameterError,
    RankDeficiencyError,
    UnsupportedSizeError,
)
from .rational import QC, qc

ORACLE_MAX_ROWS = 16     # characteristic-polynomial oracle cap


# ---------------------------------------------------------------------------
# exact rational matrices


@dataclass(frozen=True)
class RationalMatrix:
    """Immutable dense matrix of exact rational-complex entries."""

    entries: tuple

    def __post_init__(self):
        if not self.entries or not self.entries[0]:
            raise InvalidInputError("rational matrix must be nonempty")
        width = len(self.entries[0])
        rows = []
        for row in self.entries:
            if len(row) != width:
                raise InvalidInputError("ragged rows in rational matrix")
            rows.append(tuple(qc(e) for e in row))
        object.__setattr__(self, "entries", tuple(rows))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RationalMatrix":
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(tuple(tuple(qc(1 if i == j else 0) for j in range(n))
                         for i in range(n)))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    @property
    def is_real(self) -> bool:
        return all(e.im == 0 for row in self.entries for e in row)

    def hermitian(self) -> "RationalMatrix":
        return RationalMatrix(tuple(
            tuple(self.entries[i][j].conjugate() for i in range(self.rows))
            for j in range(self.cols)))

    def matvec(self, vec: Sequence) -> tuple:
        v = [qc(x) for x in vec]
        if len(v) != self.cols:
            raise InvalidInputError("matvec dimension mismatch")
        out = []
        for row in self.entries:
            acc = qc(0)
            for e, x in zip(row, v):
                if x:
                    acc = acc + e * x
            out.append(acc)
        return tuple(out)

    def matmul(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise InvalidInputError("matmul dimension mismatch")
        ot = list(zip(*other.entries))
        return RationalMatrix(tuple(
            tuple(_dot(row, col) for col in ot) for row in self.entries))

    def gram(self) -> "RationalMatrix":
        """M M^H, Hermitian positive semidefinite."""
        conj_rows = [tuple(e.conjugate() for e in row) for row in self.entries]
        return RationalMatrix(tuple(
            tuple(_dot(row, crow) for crow in conj_rows) for row in self.entries))

    def to_numpy(self) -> np.ndarray:
        return np.array([[complex(e) for e in row] for row in self.entries],
                        dtype=complex)


def _dot(row, col):
    acc = qc(0)
    for a, b in zip(row, col):
        if a and b:
            acc = acc + a * b
    return acc


# ---------------------------------------------------------------------------
# float SVD (one-sided Jacobi)


@dataclass(frozen=True)
class SingularSpectrum:
    """SVD result for a wide matrix M = sum_i sigmas[i] * left[:,i] right[:,i]^H.

    `sigmas` is descending.  `null_vector` is a designated unit vector
    with M v ~ 0 (None for square inputs); its first significant
    component is rotated to the positive real axis.  `ratio` is
    sigma_1/sigma_n, infinite when sigma_n = 0.
    """

    sigmas: np.ndarray
    ratio: float
    null_vector: np.ndarray | None
    null_residual: float
    left: np.ndarray
    right: np.ndarray
    sweeps: int

    def __post_init__(self):
        for name in ("sigmas", "left", "right", "null_vector"):
            arr = getattr(self, name)
            if arr is not None:
                arr.setflags(write=False)


def _as_complex_matrix(mat) -> np.ndarray:
    if isinstance(mat, RationalMatrix):
        mat = mat.to_numpy()
    M = np.asarray(mat, dtype=complex)
    if M.ndim != 2:
        raise InvalidInputError("expected a 2-d matrix")
    if not np.all(np.isfinite(M)):
        raise InvalidInputError("matrix contains non-finite entries")
    return M


def svd(mat, *, tol_coupling: float = 1e-14, max_sweeps: int = 60,
        tol_null: float = 1e-12) -> SingularSpectrum:
    """One-sided Jacobi SVD of a wide matrix (rows <= cols).

    Works on the conjugate transpose A = M^H, orthogonalizing its
    columns with exact 2x2 unitary rotations in a fixed cyclic order,
    which makes the output deterministic for identical input.  A sweep
    with every relative Gram coupling below `tol_coupling` ends the
    iteration; more than `max_sweeps` sweeps raises
    :class:`ConvergenceError` carrying the achieved coupling.
    """
    if max_sweeps < 1:
        raise InvalidParameterError(f"max_sweeps must be >= 1, got {max_sweeps}")
    if not 0.0 < tol_coupling < 1.0:
        raise InvalidParameterError(
            f"tol_coupling must lie in (0, 1), got {tol_coupling}")
    if not 0.0 < tol_null < 1.0:
        raise InvalidParameterError(
            f"tol_null must lie in (0, 1), got {tol_null}")
    M = _as_complex_matrix(mat)
    n, m = M.shape
    if n == 0 or m == 0:
        raise InvalidInputError("matrix must be nonempty")
    if m < n:
        raise InvalidInputError(f"expected rows <= cols, got {n}x{m}")

    A = M.conj().T.copy()                 # m x n, columns span the row space of M
    V = np.eye(n, dtype=complex)          # accumulates right rotations
    norms0 = np.sqrt(np.sum(np.abs(A) ** 2, axis=0))
    big = float(norms0.max(initial=0.0))
    # pairs involving a numerically vanished column are left alone
    dead2 = (1e-16 * big) ** 2

    sweeps = 0
    worst = math.inf
    converged = big == 0.0
    while not converged and sweeps < max_sweeps:
        worst = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                ap = A[:, p]
                aq = A[:, q]
                alpha = np.vdot(ap, ap).real
                beta = np.vdot(aq, aq).real
                if alpha <= dead2 or beta <= dead2:
                    continue
                gam = np.vdot(ap, aq)
                g = abs(gam)
                rel = g / math.sqrt(alpha * beta)
                if rel > worst:
                    worst = rel
                if rel <= tol_coupling:
                    continue
                w = gam / g
                tau = (beta - alpha) / (2.0 * g)
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                aq_al = np.conj(w) * aq
                new_p = c * ap - s * aq_al
                new_q = s * ap + c * aq_al
                A[:, p] = new_p
                A[:, q] = new_q
                vp = V[:, p]
                vq_al = np.conj(w) * V[:, q]
                new_vp = c * vp - s * vq_al
                new_vq = s * vp + c * vq_al
                V[:, p] = new_vp
                V[:, q] = new_vq
        sweeps += 1
        converged = worst <= tol_coupling
    if not converged:
        raise ConvergenceError(
            f"Jacobi SVD: couplings at {worst:.3e} after {sweeps} sweeps "
            f"(target {tol_coupling:.1e})", residual=worst)

    norms = np.sqrt(np.sum(np.abs(A) ** 2, axis=0))
    order = np.argsort(-norms, kind="stable")
    sigmas = norms[order].copy()
    left = V[:, order].copy()
    right = np.zeros((m, n), dtype=complex)
    for i, col in enumerate(order):
        if norms[col] > 0:
            right[:, i] = A[:, col] / norms[col]
    _fix_pair_phases(left, right)

    sigma1 = float(sigmas[0])
    sigman = float(sigmas[-1])
    ratio = math.inf if sigman == 0.0 else sigma1 / sigman

    null_vector = None
    null_residual = 0.0
    if m > n:
        null_vector = _complement_direction(right, sigmas)
        if sigma1 > 0.0:
            null_residual = float(np.linalg.norm(M @ null_vector) / sigma1)
    return SingularSpectrum(sigmas=sigmas, ratio=ratio, null_vector=null_vector,
                            null_residual=null_residual, left=left, right=right,
                            sweeps=sweeps)


def _fix_pair_phases(left: np.ndarray, right: np.ndarray) -> None:
    # common phase per singular pair: largest component of the left vector
    # becomes positive real (rank-1 terms are unchanged by a common phase)
    for i in range(left.shape[1]):
        col = left[:, i]
        j = int(np.argmax(np.abs(col)))
        a = col[j]
        if a != 0:
            w = np.conj(a) / abs(a)
            left[:, i] *= w
            right[:, i] *= w


def _complement_direction(right: np.ndarray, sigmas: np.ndarray) -> np.ndarray:
    """Deterministic unit vector orthogonal to the numerical row space."""
    m = right.shape[0]
    sigma1 = float(sigmas[0]) if len(sigmas) else 0.0
    keep = sigmas > 1e-13 * sigma1 if sigma1 > 0 else np.zeros(len(sigmas), bool)
    R = right[:, keep]
    if R.shape[1] == 0:
        v = np.zeros(m, dtype=complex)
        v[0] = 1.0
        return v
    row_mass = np.sum(np.abs(R) ** 2, axis=1)
    seed = int(np.argmin(row_mass))
    v = np.zeros(m, dtype=complex)
    v[seed] = 1.0
    for _ in range(2):                       # twice is enough for orthogonality
        v = v - R @ (R.conj().T @ v)
    v = v / np.linalg.norm(v)
    return _fix_leading_phase(v)


def _fix_leading_phase(v: np.ndarray) -> np.ndarray:
    mx = float(np.max(np.abs(v)))
    for comp in v:
        if abs(comp) > 1e-12 * mx:
            w = np.conj(comp) / abs(comp)
            return v * w
    return v


# ---------------------------------------------------------------------------
# Weyl perturbation check


@dataclass(frozen=True)
class PerturbationCheck:
    max_shift: float
    norm_delta: float
    passed: bool


def singular_value_perturbation_check(mat, delta, slack: float = 1e-10) -> PerturbationCheck:
    """Check Weyl's inequality max_i |sigma_i(M+D) - sigma_i(M)| <= ||D||_2."""
    M = _as_complex_matrix(mat)
    D = _as_complex_matrix(delta)
    if M.shape != D.shape:
        raise InvalidInputError("matrix and perturbation shapes differ")
    s_m = svd(M).sigmas
    s_md = svd(M + D).sigmas
    norm_delta = float(svd(D).sigmas[0])
    max_shift = float(np.max(np.abs(s_md - s_m)))
    passed = max_shift <= norm_delta + slack * float(s_m[0])
    return PerturbationCheck(max_shift=max_shift, norm_delta=norm_delta, passed=passed)


# ---------------------------------------------------------------------------
# exact elimination (Bareiss)


def _strip_to_field(mat: RationalMatrix):
    """Rows as lists over Fraction (real case) or QC, denominators cleared.

    Row scaling by a positive integer changes neither rank nor nullspace,
    and integer-valued entries keep the fraction-free minors small.
    """
    real = mat.is_real
    rows = []
    for row in mat.entries:
        if real:
            vals = [e.re for e in row]
            dens = [v.denominator for v in vals]
        else:
            vals = list(row)
            dens = []
            for v in vals:
                dens.append(v.re.denominator)
                dens.append(v.im.denominator)
        scale = math.lcm(*dens) if dens else 1
        rows.append([v * scale for v in vals])
    return rows, real


def _echelon_bareiss(rows: list) -> tuple[list, list[int]]:
    """In-place fraction-free row echelon; returns (rows, pivot columns)."""
    nrows = len(rows)
    ncols = len(rows[0])
    piv_cols: list[int] = []
    r = 0
    prev = 1
    for c in range(ncols):
        pivot_row = None
        for i in range(r, nrows):
            if rows[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        if pivot_row != r:
            rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        p = rows[r][c]
        for i in range(r + 1, nrows):
            head = rows[i][c]
            if head:
                ri = rows[i]
                rr = rows[r]
                for j in range(c + 1, ncols):
                    ri[j] = (p * ri[j] - head * rr[j]) / prev
                ri[c] = 0 * p
            else:
                ri = rows[i]
                rr = rows[r]
                for j in range(c + 1, ncols):
                    ri[j] = (p * ri[j]) / prev
        piv_cols.append(c)
        prev = p
        r += 1
        if r == nrows:
            break
    return rows[:r], piv_cols


def _basic_solution(ech: list, piv_cols: list[int], ncols: int, free_col: int, one):
    x = [0 * one] * ncols
    x[free_col] = one
    for i in reversed(range(len(piv_cols))):
        pc = piv_cols[i]
        row = ech[i]
        acc = 0 * one
        for j in range(pc + 1, ncols):
            xv = x[j]
            if xv and row[j]:
                acc = acc + row[j] * xv
        x[pc] = -acc / row[pc]
    first = next(i for i, v in enumerate(x) if v)
    inv = x[first]
    return tuple(v / inv for v in x)


def exact_nullspace(mat: RationalMatrix) -> tuple:
    """Designated exact nullspace vector of a rank-n matrix with n+1 columns.

    Returns the minimal-degree nullspace vector (the basic solution of
    the first free column), normalized so its first nonzero entry is 1.
    If the rank falls below the row count, raises
    :class:`RankDeficiencyError` carrying the exact rank and a full
    basis of basic solutions, minimal degree first.
    """
    if not isinstance(mat, RationalMatrix):
        mat = RationalMatrix.from_rows(mat)
    rows, real = _strip_to_field(mat)
    one = Fraction(1) if real else qc(1)
    ech, piv_cols = _echelon_bareiss(rows)
    rank = len(piv_cols)
    pivset = set(piv_cols)
    free_cols = [c for c in range(mat.cols) if c not in pivset]
    if not free_cols:
        raise InvalidInputError("matrix has a trivial nullspace")
    basis = tuple(_to_qc_vector(_basic_solution(ech, piv_cols, mat.cols, f, one))
                  for f in free_cols)
    if rank < mat.rows:
        raise RankDeficiencyError(rank, basis)
    return basis[0]


def _to_qc_vector(vec: tuple) -> tuple:
    return tuple(qc(v) for v in vec)


# ---------------------------------------------------------------------------
# exact sigma-ratio oracle (characteristic polynomial of the Gram matrix)


@dataclass(frozen=True)
class SigmaRatioOracle:
    """Exact Gram characteristic polynomial and derived extreme sigmas.

    `char_poly` holds the monic coefficients of det(lambda I - M M^H),
    highest power first, as exact Fractions.  The extreme eigenvalues
    are extracted from the polynomial at high precision, far beyond
    double accuracy.
    """

    char_poly: tuple
    sigma_max: float
    sigma_min: float
    ratio: float


def gram_char_poly(mat: RationalMatrix) -> tuple:
    """Exact monic characteristic polynomial of M M^H, highest power first."""
    G = mat.gram()
    n = G.rows
    # scale to integer entries: char coefficients unscale by powers of s
    dens = []
    for row in G.entries:
        for e in row:
            dens.append(e.re.denominator)
            dens.append(e.im.denominator)
    s = math.lcm(*dens)
    real = G.is_real
    if real:
        gs = [[e.re * s for e in row] for row in G.entries]
        work = [row[:] for row in gs]
        coeffs = [Fraction(1)]
        for k in range(1, n + 1):
            if k > 1:
                work = _fmatmul(gs, work)
            tr = sum(work[i][i] for i in range(n))
            ck = Fraction(-tr, k)
            coeffs.append(ck / s ** k)
            if k < n:
                for i in range(n):
                    work[i][i] = work[i][i] + ck
        return tuple(coeffs)
    gs = [[e * s for e in row] for row in G.entries]
    work = [row[:] for row in gs]
    coeffs = [Fraction(1)]
    for k in range(1, n + 1):
        if k > 1:
            work = _qmatmul(gs, work)
        tr = work[0][0]
        for i in range(1, n):
            tr = tr + work[i][i]
        ck = -tr / k
        if ck.im != 0:
            raise InvalidInputError("Gram characteristic polynomial must be real")
        coeffs.append(ck.re / s ** k)
        if k < n:
            for i in range(n):
                work[i][i] = work[i][i] + ck
    return tuple(coeffs)


def _fmatmul(a, b):
    n = len(a)
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col) if x and y) for col in bt] for row in a]


def _qmatmul(a, b):
    n = len(a)
    bt = list(zip(*b))
    out = []
    for row in a:
        orow = []
        for col in bt:
            acc = qc(0)
            for x, y in zip(row, col):
                if x and y:
                    acc = acc + x * y
            orow.append(acc)
        out.append(orow)
    return out


def exact_sigma_ratio_bounds(mat: RationalMatrix,
                             max_rows: int = ORACLE_MAX_ROWS) -> SigmaRatioOracle:
    """Exact-oracle sigma_1/sigma_n via the Gram characteristic polynomial.

    Capped at `max_rows` rows: the exact polynomial cost grows like
    rows^4 with ever-larger rationals.  sigma_n = 0 reports an infinite
    ratio rather than an error.
    """
    if not isinstance(mat, RationalMatrix):
        mat = RationalMatrix.from_rows(mat)
    if mat.rows > max_rows:
        raise UnsupportedSizeError(
            f"exact sigma oracle capped at {max_rows} rows, got {mat.rows}")
    if mat.cols < mat.rows:
        raise InvalidInputError("expected rows <= cols")
    coeffs = gram_char_poly(mat)
    n = len(coeffs) - 1

    zero_mult = 0
    trimmed = list(coeffs)
    while trimmed and trimmed[-1] == 0:
        trimmed.pop()
        zero_mult += 1
    reduced_degree = len(trimmed) - 1

    import mpmath as mp

    max_bits = max(max(abs(c.numerator).bit_length(), c.denominator.bit_length())
                   for c in coeffs)
    dps = int(max_bits * 0.31) + 60
    lam_max = 0.0
    lam_min = 0.0
    if reduced_degree >= 1:
        with mp.workdps(dps):
            poly = [mp.mpf(c.numerator) / mp.mpf(c.denominator) for c in trimmed]
            roots = mp.polyroots(poly, maxsteps=200, extraprec=4 * mp.mp.prec)
            reals = sorted(mp.re(r) for r in roots)
            lam_max = float(max(reals[-1], mp.mpf(0)))
            lam_min = float(max(reals[0], mp.mpf(0)))
    if zero_mult > 0:
        lam_min = 0.0
    sigma_max = math.sqrt(lam_max)
    sigma_min = math.sqrt(lam_min)
    ratio = math.inf if sigma_min == 0.0 else sigma_max / sigma_min
    return SigmaRatioOracle(char_poly=coeffs, sigma_max=sigma_max,
                            sigma_min=sigma_min, ratio=ratio)
