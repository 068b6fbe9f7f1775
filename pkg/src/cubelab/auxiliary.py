"""Linked block, auxiliary and adjuvant matrices, and the transforms between them.

Index conventions are 0-based throughout.  An auxiliary matrix of type
``(n, r, t)_omega`` is ``D = (A_dag, B_dag)`` of format ``R x S`` with
``R = n(r-1) + t`` and ``S = 2R - 1 + omega``.  Block ``l`` of ``D`` occupies
rows ``t-1 + (l-1)(r-1) ... + r-1`` for ``l >= 1`` and rows ``0 ... t-1`` for
``l = 0``; consecutive blocks share one row.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import ValidationError
from .matrices import (
    IntMatrix,
    RationalMatrix,
    all_square_minors_nonsingular,
    determinant,
    first_singular_minor,
    flip_columns,
    inverse,
    is_highly_nonsingular,
)

# the 4x4 block from the worked example; every square minor is non-singular
EXAMPLE_BLOCK = IntMatrix.from_rows([[7, 5, 6, 3], [7, 1, 4, 8], [9, 4, 5, 7], [6, 3, 3, 8]])


@dataclass(frozen=True)
class AuxShape:
    n: int
    r: int
    t: int
    omega: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise ValidationError(f"n must be >= 0, got {self.n}")
        if self.r < 2:
            raise ValidationError(f"r must be >= 2, got {self.r}")
        if not 2 <= self.t <= self.r:
            raise ValidationError(f"need 2 <= t <= r, got t={self.t}, r={self.r}")
        if self.omega not in (0, 1):
            raise ValidationError(f"omega must be 0 or 1, got {self.omega}")

    @property
    def R(self) -> int:
        return self.n * (self.r - 1) + self.t

    @property
    def S(self) -> int:
        return 2 * self.R - 1 + self.omega

    def __str__(self):
        return f"({self.n},{self.r},{self.t})_{self.omega}"


@dataclass(frozen=True)
class _Block:
    row0: int
    nrows: int
    a_col0: int
    a_ncols: int
    b_col0: int
    b_ncols: int
    m_shape: tuple[int, int]

    @property
    def rows(self) -> range:
        return range(self.row0, self.row0 + self.nrows)

    @property
    def lambda_rows(self) -> list[int]:
        # rows carrying a lambda * unit-vector column of A'_l
        if self.a_col0 == 0:
            return list(range(self.row0, self.row0 + self.nrows - 1))
        return list(range(self.row0 + 1, self.row0 + self.nrows - 1))


def block_layout(shape: AuxShape) -> list[_Block]:
    n, r, t, w = shape.n, shape.r, shape.t, shape.omega
    blocks = [_Block(0, t, 0, t, 0, t + w - 1, (t, t + w))]
    for l in range(1, n + 1):
        k = (l - 1) * (r - 1)
        blocks.append(_Block(t - 1 + k, r, t + k, r - 1, t + w - 1 + k, r - 1, (r, r)))
    return blocks


# --------------------------------------------------------------------------
# linked block matrices


def build_linked_block(blocks: Sequence[IntMatrix]) -> IntMatrix:
    """Place blocks along the diagonal so consecutive blocks share one row.

    Block ``l`` has format ``(r_l + 1) x s_l`` and its upper-left corner sits at
    ``(i_l, j_l)`` with ``i_{l+1} = i_l + r_l`` and ``j_{l+1} = j_l + s_l``.
    Entries on a shared row are summed.
    """
    if not blocks:
        raise ValidationError("a linked block matrix needs at least one block")
    for l, b in enumerate(blocks):
        if b.rows < 2 or b.cols < 1:
            raise ValidationError(f"block {l} has format {b.rows}x{b.cols}; need >= 2 rows and >= 1 column")
    nrows = 1 + sum(b.rows - 1 for b in blocks)
    ncols = sum(b.cols for b in blocks)
    out = [[0] * ncols for _ in range(nrows)]
    i0 = j0 = 0
    for b in blocks:
        for i in range(b.rows):
            row = out[i0 + i]
            for j in range(b.cols):
                row[j0 + j] += b[i, j]
        i0 += b.rows - 1
        j0 += b.cols
    return IntMatrix.from_rows(out, ncols)


# --------------------------------------------------------------------------
# auxiliary matrices


@dataclass(frozen=True)
class AuxiliaryMatrix:
    shape: AuxShape
    D: IntMatrix
    lambdas: tuple[int, ...]
    Ms: tuple[IntMatrix, ...]

    @property
    def A_dag(self) -> IntMatrix:
        return self.D.select_columns(range(self.shape.R))

    @property
    def B_dag(self) -> IntMatrix:
        return self.D.select_columns(range(self.shape.R, self.shape.S))


def _a_blocks(shape: AuxShape, lambdas, Ms) -> list[IntMatrix]:
    t, r = shape.t, shape.r
    out = []
    for l, (lam, M) in enumerate(zip(lambdas, Ms)):
        m = M.col(0)
        if l == 0:
            rows = [[lam if j == i else 0 for j in range(t - 1)] + [m[i]] for i in range(t)]
        else:
            rows = [[lam if j + 1 == i else 0 for j in range(r - 2)] + [m[i]] for i in range(r)]
        out.append(IntMatrix.from_rows(rows))
    return out


def build_auxiliary(shape: AuxShape, lambdas: Sequence[int], Ms: Sequence[IntMatrix]) -> AuxiliaryMatrix:
    """Assemble ``D = (A_dag, B_dag)`` from the scalars ``lambdas`` and blocks ``Ms``.

    ``Ms[0]`` has format ``t x (t + omega)`` and ``Ms[l]`` is ``r x r`` for
    ``l >= 1``; every square minor of every block must be non-singular.
    """
    if len(lambdas) != shape.n + 1 or len(Ms) != shape.n + 1:
        raise ValidationError(f"type {shape} needs {shape.n + 1} scalars and blocks")
    for l, (blk, lam, M) in enumerate(zip(block_layout(shape), lambdas, Ms)):
        if lam == 0:
            raise ValidationError(f"lambda_{l} is zero")
        if M.shape != blk.m_shape:
            raise ValidationError(f"M_{l} has format {M.rows}x{M.cols}, expected {blk.m_shape[0]}x{blk.m_shape[1]}")
        bad = first_singular_minor(M)
        if bad is not None:
            raise ValidationError(f"M_{l} has a singular minor at rows {bad[0]}, cols {bad[1]}")
    A = build_linked_block(_a_blocks(shape, lambdas, Ms))
    B = build_linked_block([M.select_columns(range(1, M.cols)) for M in Ms])
    D = A.hstack(B)
    assert D.shape == (shape.R, shape.S)
    return AuxiliaryMatrix(shape, D, tuple(lambdas), tuple(Ms))


def _extract(D: IntMatrix, shape: AuxShape):
    lambdas, Ms = [], []
    R = shape.R
    for blk in block_layout(shape):
        lam_rows = blk.lambda_rows
        lam = D[lam_rows[0], blk.a_col0] if lam_rows else 1
        m_col = blk.a_col0 + blk.a_ncols - 1
        cols = [m_col] + [R + blk.b_col0 + k for k in range(blk.b_ncols)]
        lambdas.append(lam)
        Ms.append(D.submatrix(blk.rows, cols))
    return lambdas, Ms


def check_auxiliary(D: IntMatrix, shape: AuxShape) -> str | None:
    """Return a description of the first violated condition, or None if D is auxiliary."""
    if D.shape != (shape.R, shape.S):
        return f"format {D.rows}x{D.cols} differs from {shape.R}x{shape.S} for type {shape}"
    for j in range(D.cols):
        if not any(D.col(j)):
            return f"column {j} is zero"
    lambdas, Ms = _extract(D, shape)
    for l, (lam, M) in enumerate(zip(lambdas, Ms)):
        if lam == 0:
            return f"block {l}: lambda entry is zero"
        bad = first_singular_minor(M)
        if bad is not None:
            return f"block {l}: M_{l} has a singular minor at rows {bad[0]}, cols {bad[1]}"
    rebuilt = build_auxiliary(shape, lambdas, Ms).D
    if rebuilt != D:
        for i in range(D.rows):
            for j in range(D.cols):
                if rebuilt[i, j] != D[i, j]:
                    return f"entry ({i},{j}) is {D[i, j]}, the linked block structure requires {rebuilt[i, j]}"
    return None


def validate_auxiliary(D: IntMatrix, shape: AuxShape) -> bool:
    return check_auxiliary(D, shape) is None


def as_auxiliary(D: IntMatrix, shape: AuxShape) -> AuxiliaryMatrix:
    problem = check_auxiliary(D, shape)
    if problem is not None:
        raise ValidationError(f"not auxiliary of type {shape}: {problem}")
    lambdas, Ms = _extract(D, shape)
    return AuxiliaryMatrix(shape, D, tuple(lambdas), tuple(Ms))


def normalize_lambdas(D: IntMatrix, shape: AuxShape) -> IntMatrix:
    """Rescale lambda rows so that every block carries a single common lambda.

    Multiplying an equation by a non-zero integer leaves the solution count and
    the non-singularity of every minor unchanged.
    """
    if D.shape != (shape.R, shape.S):
        return D
    rows = D.tolist()
    for blk in block_layout(shape):
        pos = [(i, blk.a_col0 + k) for k, i in enumerate(blk.lambda_rows)]
        vals = [rows[i][j] for i, j in pos]
        if not vals or any(v == 0 for v in vals) or len(set(vals)) == 1:
            continue
        L = math.lcm(*(abs(v) for v in vals))
        for (i, j), v in zip(pos, vals):
            f = L // v
            rows[i] = [f * x for x in rows[i]]
    return IntMatrix.from_rows(rows, D.cols)


def aux_deletion(D, rows=(), cols=(), claimed: AuxShape | None = None, rescale: bool = True) -> AuxiliaryMatrix:
    """Delete rows/columns of an auxiliary matrix and validate the result as ``claimed``."""
    M = D.D if isinstance(D, AuxiliaryMatrix) else D
    if claimed is None:
        if isinstance(D, AuxiliaryMatrix) and not rows and not cols:
            return D
        raise ValidationError("a claimed shape is required")
    sub = M.delete(rows, cols)
    if rescale:
        sub = normalize_lambdas(sub, claimed)
    return as_auxiliary(sub, claimed)


def deletion_pattern(shape: AuxShape, pattern: str, j: int = 1):
    """Row/column index sets of the sub-systems met in the induction on R.

    Returns ``(rows, cols, claimed_shape)``.  Patterns:

    * ``D1`` (omega=0): diagonal variables of the first t-1 columns fixed.
    * ``D2`` (omega=0, t>=3): first row and column.
    * ``D3`` / ``D4`` (omega=0, t=2): first row and columns 1, R+1 / first
      two rows and columns 1, 2, R+1.
    * ``D5`` (omega=1): column R+j of the 4th-power block.
    * ``D6``: first t rows, columns 1..t and the columns of B'_0.
    """
    n, r, t, w, R = shape.n, shape.r, shape.t, shape.omega, shape.R
    if pattern == "D1":
        _require(w == 0 and n >= 1, pattern, shape)
        return (list(range(t - 1)), list(range(t - 1)) + list(range(R, R + t - 1)), AuxShape(n - 1, r, r, 0))
    if pattern == "D2":
        _require(w == 0 and t >= 3, pattern, shape)
        return [0], [0], AuxShape(n, r, t - 1, 1)
    if pattern == "D3":
        _require(w == 0 and t == 2 and n >= 1, pattern, shape)
        return [0], [0, R], AuxShape(n - 1, r, r, 0)
    if pattern == "D4":
        _require(w == 0 and t == 2 and n >= 1 and r >= 3, pattern, shape)
        return [0, 1], [0, 1, R], AuxShape(n - 1, r, r - 1, 1)
    if pattern == "D5":
        _require(w == 1 and 1 <= j <= t, pattern, shape)
        return [], [R + j - 1], AuxShape(n, r, t, 0)
    if pattern == "D6":
        _require(n >= 1 and r >= 3, pattern, shape)
        return (list(range(t)), list(range(t)) + list(range(R, R + t + w - 1)), AuxShape(n - 1, r, r - 1, 1))
    raise ValueError(f"unknown deletion pattern {pattern!r}")


def _require(cond, pattern, shape):
    if not cond:
        raise ValidationError(f"pattern {pattern} does not apply to type {shape}")


# --------------------------------------------------------------------------
# adjuvant matrices


@dataclass(frozen=True)
class AdjuvantMatrix:
    """(R+1) x (2R+2) integral matrix with R = n(r-1); see ``check_adjuvant``."""

    n: int
    r: int
    matrix: IntMatrix
    witness: dict = field(default=None, compare=False, hash=False, repr=False)

    @property
    def R(self) -> int:
        return self.n * (self.r - 1)


def _expected_supports(shape: AuxShape):
    a_slots, b_slots = [], []
    for blk in block_layout(shape):
        a_slots += [frozenset([i]) for i in blk.lambda_rows]
        a_slots.append(frozenset(blk.rows))
        b_slots += [frozenset(blk.rows)] * blk.b_ncols
    return a_slots, b_slots


def _assign(columns: dict[int, tuple], slots: list[frozenset]) -> list[int] | None:
    by_support: dict[frozenset, list[int]] = {}
    for idx, col in columns.items():
        by_support.setdefault(frozenset(i for i, x in enumerate(col) if x), []).append(idx)
    order = []
    for s in slots:
        cands = by_support.get(s)
        if not cands:
            return None
        order.append(cands.pop(0))
    return order if not any(by_support.values()) else None


def match_auxiliary(M: IntMatrix, a_candidates: Sequence[int], b_candidates: Sequence[int], shape: AuxShape):
    """Find column orders turning the candidate columns into an auxiliary matrix.

    Within an auxiliary matrix each column's support (set of non-zero rows)
    pins down its slot, up to reordering the columns of one B'_l block, and
    such reorderings preserve the auxiliary property.  So matching by support
    decides the question without a permutation search.
    Returns ``(a_order, b_order, D)`` or None.
    """
    a_slots, b_slots = _expected_supports(shape)
    if len(a_candidates) != len(a_slots) or len(b_candidates) != len(b_slots) or M.rows != shape.R:
        return None
    cols = {j: M.col(j) for j in range(M.cols)}
    a_order = _assign({j: cols[j] for j in a_candidates}, a_slots)
    b_order = _assign({j: cols[j] for j in b_candidates}, b_slots)
    if a_order is None or b_order is None:
        return None
    D = M.select_columns(a_order + b_order)
    return (a_order, b_order, D) if validate_auxiliary(D, shape) else None


def _adjuvant_checks(L: IntMatrix, n: int, r: int):
    R = n * (r - 1)
    if n < 1:
        raise ValidationError("adjuvant type needs n >= 1")
    if L.shape != (R + 1, 2 * R + 2):
        raise ValidationError(f"adjuvant ({n},{r}) must be {R + 1}x{2 * R + 2}, got {L.rows}x{L.cols}")
    shape = AuxShape(n - 1, r, r, 0)
    direct = match_auxiliary(L, range(0, R + 1), range(R + 2, 2 * R + 2), shape)
    F = flip_columns(L)
    flipped = match_auxiliary(F, range(R + 1, 0, -1), range(2 * R + 1, R + 1, -1), shape)
    return direct, flipped


def check_adjuvant(L: IntMatrix, n: int, r: int) -> str | None:
    try:
        direct, flipped = _adjuvant_checks(L, n, r)
    except ValidationError as exc:
        return str(exc)
    if direct is None:
        return "columns 0..R and R+2..2R+1 do not permute to an auxiliary matrix"
    if flipped is None:
        return "flipped columns do not permute to an auxiliary matrix"
    return None


def validate_adjuvant(L: IntMatrix, n: int, r: int) -> bool:
    return check_adjuvant(L, n, r) is None


def as_adjuvant(L: IntMatrix, n: int, r: int) -> AdjuvantMatrix:
    direct, flipped = _adjuvant_checks(L, n, r)
    if direct is None or flipped is None:
        raise ValidationError(f"not adjuvant of type ({n},{r}): {check_adjuvant(L, n, r)}")
    witness = {"direct": (direct[0], direct[1]), "flipped": (flipped[0], flipped[1])}
    return AdjuvantMatrix(n, r, L, witness)


def adjuvant_bruteforce(L: IntMatrix, n: int, r: int) -> bool:
    """Permutation search over both column groups; only for at most 10 columns."""
    if L.cols > 10:
        raise ValidationError("brute-force adjuvant search is limited to 10 columns")
    R = n * (r - 1)
    if n < 1 or L.shape != (R + 1, 2 * R + 2):
        return False
    shape = AuxShape(n - 1, r, r, 0)

    def search(M, a_idx, b_idx):
        for pa in itertools.permutations(a_idx):
            for pb in itertools.permutations(b_idx):
                if validate_auxiliary(M.select_columns(list(pa) + list(pb)), shape):
                    return True
        return False

    return search(L, range(R + 1), range(R + 2, 2 * R + 2)) and search(
        flip_columns(L), range(1, R + 2), range(R + 2, 2 * R + 2)
    )


def complify(adj: AdjuvantMatrix) -> AdjuvantMatrix:
    """Square-expansion transform: adjuvant of type (n, r) -> type (2n, r).

    Column j of the output encodes the form beta*_j:

    * j <= R: beta_j on the first R+1 variables,
    * R+1 <= j <= 2R+1: beta_{2R+1-j} on the variables in reverse order
      alpha_{2R+1}, ..., alpha_{R+1},
    * 2R+2 <= j <= 3R+1: beta_{j-R} on the first R+1 variables,
    * 3R+2 <= j <= 4R+1: beta_{5R+3-j} on the reversed variables.
    """
    L = adj.matrix
    problem = check_adjuvant(L, adj.n, adj.r)
    if problem is not None:
        raise ValidationError(f"input is not adjuvant of type ({adj.n},{adj.r}): {problem}")
    R = adj.R
    rows_out = 2 * R + 1

    def top(k):
        return list(L.col(k)) + [0] * R

    def bottom(k):
        c = L.col(k)
        return [0] * R + [c[2 * R - o] for o in range(R, 2 * R + 1)]

    cols = []
    for j in range(4 * R + 2):
        if j <= R:
            cols.append(top(j))
        elif j <= 2 * R + 1:
            cols.append(bottom(2 * R + 1 - j))
        elif j <= 3 * R + 1:
            cols.append(top(j - R))
        else:
            cols.append(bottom(5 * R + 3 - j))
    out = IntMatrix.from_columns(cols, rows_out)
    return as_adjuvant(out, 2 * adj.n, adj.r)


def adjuvant_from_hns(C: IntMatrix) -> tuple[AdjuvantMatrix, int]:
    """Adjuvant matrix of type (2, r) from a highly non-singular r x 2r matrix.

    With C = (A, B) and Delta = |det A|, the forms Delta*theta_i and the rows of
    G = Delta (A^{-1} B)^T are glued to a reversed copy sharing theta_r.
    Returns the adjuvant matrix and Delta.
    """
    r, s = C.shape
    if s != 2 * r:
        raise ValidationError(f"expected an r x 2r matrix, got {r}x{s}")
    if not is_highly_nonsingular(C):
        raise ValidationError("C is not highly non-singular")
    A = C.submatrix(range(r), range(r))
    B = C.submatrix(range(r), range(r, 2 * r))
    delta = abs(determinant(A))
    G = ((inverse(A) @ B).transpose()).scale(Fraction(delta))
    if not G.is_integral():
        raise AssertionError("Delta (A^-1 B)^T must be integral")
    G = G.to_int()
    nr = 2 * r - 1

    def unit(i):
        return [delta if k == i else 0 for k in range(nr)]

    def fwd(k):
        return list(G.row(k)) + [0] * (r - 1)

    def rev(k):
        # substitute theta_i -> theta_{2r-i}: coefficient G[k][i-1] lands on index 2r-1-i
        col = [0] * nr
        for i in range(1, r + 1):
            col[2 * r - 1 - i] = G[k, i - 1]
        return col

    cols = []
    for j in range(4 * r - 2):
        if j <= 2 * r - 3 and j != r - 1:
            cols.append(unit(j))
        elif j == r - 1:
            cols.append(fwd(0))
        elif j == 2 * r - 2:
            cols.append(rev(0))
        elif j == 2 * r - 1:
            cols.append(unit(2 * r - 2))
        elif j <= 3 * r - 2:
            cols.append(fwd(j - 2 * r + 1))
        else:
            cols.append(rev(4 * r - 2 - j))
    return as_adjuvant(IntMatrix.from_columns(cols, nr), 2, r), delta


# --------------------------------------------------------------------------
# reduction of the correlation system to B X = H


def eliminate_cone_variables(A: IntMatrix, h: Sequence[int] | None = None):
    """Eliminate n from A^T n = X.

    With A = (A1, A2), B' = ((A1^{-1})^T, -(A2^{-1})^T) annihilates X; lambda
    is the least natural number making lambda*B' integral.  Returns
    ``(B, H, lambda)`` with B = lambda*B' and H = B h.
    """
    r, s = A.shape
    if s != 2 * r:
        raise ValidationError(f"expected an r x 2r matrix, got {r}x{s}")
    if not is_highly_nonsingular(A):
        raise ValidationError("A is not highly non-singular")
    h = [0] * s if h is None else list(h)
    if len(h) != s:
        raise ValidationError(f"offset vector needs {s} entries")
    A1 = A.submatrix(range(r), range(r))
    A2 = A.submatrix(range(r), range(r, s))
    Bp = inverse(A1).transpose().hstack(-inverse(A2).transpose())
    lam = Bp.common_denominator()
    B = Bp.scale(Fraction(lam)).to_int()
    H = [sum(B[i, j] * h[j] for j in range(s)) for i in range(r)]
    return B, H, lam


# --------------------------------------------------------------------------
# random instances


def random_all_minors_matrix(rows: int, cols: int, rng: random.Random, bound: int = 9, tries: int = 100000) -> IntMatrix:
    """Rejection-sample a matrix with entries in [-bound, bound] and no singular square minor."""
    for _ in range(tries):
        M = IntMatrix.from_rows([[rng.choice([x for x in range(-bound, bound + 1) if x]) for _ in range(cols)] for _ in range(rows)], cols)
        if all_square_minors_nonsingular(M):
            return M
    raise RuntimeError("could not sample a matrix with non-singular minors")


def default_block(rows: int, cols: int) -> IntMatrix:
    """Deterministic block with non-singular minors (a corner of the worked example when it fits)."""
    if rows <= 4 and cols <= 4:
        return EXAMPLE_BLOCK.submatrix(range(rows), range(cols))
    return random_all_minors_matrix(rows, cols, random.Random(rows * 1000 + cols))


def default_auxiliary(shape: AuxShape, lam: int = 1) -> AuxiliaryMatrix:
    Ms = [default_block(*blk.m_shape) for blk in block_layout(shape)]
    return build_auxiliary(shape, [lam] * (shape.n + 1), Ms)


def random_auxiliary(shape: AuxShape, rng: random.Random, bound: int = 9) -> AuxiliaryMatrix:
    lambdas = [rng.randint(1, bound) for _ in range(shape.n + 1)]
    Ms = [random_all_minors_matrix(*blk.m_shape, rng, bound) for blk in block_layout(shape)]
    return build_auxiliary(shape, lambdas, Ms)


def canonical_adjuvant(top: AuxiliaryMatrix) -> IntMatrix:
    """Adjuvant matrix ``(A_dag, c e_{R+1}, B_dag)`` from an auxiliary matrix of type (n-1, r, r)_0."""
    sh = top.shape
    if sh.t != sh.r or sh.omega != 0:
        raise ValidationError("need an auxiliary matrix of type (n-1, r, r)_0")
    R1 = sh.R
    c = top.lambdas[-1]
    unit = [0] * (R1 - 1) + [c]
    cols = top.A_dag.columns() + [tuple(unit)] + top.B_dag.columns()
    return IntMatrix.from_columns(cols, R1)


def random_adjuvant(n: int, r: int, rng: random.Random, bound: int = 9, shuffle: bool = True) -> AdjuvantMatrix:
    top = random_auxiliary(AuxShape(n - 1, r, r, 0), rng, bound)
    L = canonical_adjuvant(top)
    R = n * (r - 1)
    if shuffle:
        mid = list(range(1, R + 1))
        bcols = list(range(R + 2, 2 * R + 2))
        rng.shuffle(mid)
        rng.shuffle(bcols)
        L = L.select_columns([0] + mid + [R + 1] + bcols)
    return as_adjuvant(L, n, r)


def random_hns(r: int, s: int, rng: random.Random, bound: int = 5, tries: int = 100000) -> IntMatrix:
    for _ in range(tries):
        A = IntMatrix.from_rows([[rng.randint(-bound, bound) for _ in range(s)] for _ in range(r)], s)
        if is_highly_nonsingular(A):
            return A
    raise RuntimeError("could not sample a highly non-singular matrix")


__all__ = [
    "EXAMPLE_BLOCK",
    "AuxShape",
    "AuxiliaryMatrix",
    "AdjuvantMatrix",
    "RationalMatrix",
    "block_layout",
    "build_linked_block",
    "build_auxiliary",
    "check_auxiliary",
    "validate_auxiliary",
    "as_auxiliary",
    "normalize_lambdas",
    "aux_deletion",
    "deletion_pattern",
    "match_auxiliary",
    "check_adjuvant",
    "validate_adjuvant",
    "as_adjuvant",
    "adjuvant_bruteforce",
    "complify",
    "adjuvant_from_hns",
    "eliminate_cone_variables",
    "random_all_minors_matrix",
    "default_block",
    "default_auxiliary",
    "random_auxiliary",
    "canonical_adjuvant",
    "random_adjuvant",
    "random_hns",
]
