"""Dense linear algebra over F_{q^m} and F_q: echelon forms, kernels, F_q-ranks, sum-rank weights.

Matrices are lists of rows of field ints.
"""
import os

import numpy as np

try:
    if os.environ.get("FLRS_PURE_PYTHON"):
        raise ImportError
    from . import _kernels as _kern
    KERNEL = "compiled"
except ImportError:  # no compiler at install time
    from . import _kernels_py as _kern
    KERNEL = "python"

_EMPTY = np.zeros(1, dtype=np.int64)


def kernel_spec(F):
    """Arguments describing F for the elimination kernel, or None for polynomial-path fields."""
    spec = F.__dict__.get("_kernel_spec", False)
    if spec is not False:
        return spec
    if F.base is None:
        spec = (3, F.p, F.order, 0, 0, _EMPTY, _EMPTY, _EMPTY)
    elif F.has_tables:
        ex = np.asarray(F._exp, dtype=np.int64)
        lg = np.asarray(F._log, dtype=np.int64)
        if F.char2:
            mode, aux = 0, _EMPTY
        elif F._add_table is not None:
            mode, aux = 1, np.asarray(F._add_table, dtype=np.int64).ravel()
        else:
            mode, aux = 2, np.asarray(F._zech, dtype=np.int64)
        spec = (mode, F.p, F.order, F._n, F._half, ex, lg, aux)
    else:
        spec = None
    F.__dict__["_kernel_spec"] = spec
    return spec


def _rref_generic(F, A, ncols):
    rows = len(A)
    cols = len(A[0]) if rows else 0
    add, mul, neg = F.add, F.mul, F.neg
    pivots, r = [], 0
    for c in range(min(ncols, cols)):
        if r >= rows:
            break
        piv = next((i for i in range(r, rows) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        row = A[r]
        if row[c] != 1:
            iv = F.inv(row[c])
            for j in range(c, cols):
                if row[j]:
                    row[j] = mul(row[j], iv)
        nz = [j for j in range(c, cols) if row[j]]
        for i in range(rows):
            if i != r and A[i][c]:
                f = neg(A[i][c])
                other = A[i]
                for j in nz:
                    other[j] = add(other[j], mul(f, row[j]))
        pivots.append(c)
        r += 1
    return pivots


def rref(F, M, ncols=None, backend=None):
    """Reduced row echelon form.  Returns (R, pivot_columns); M is not modified.

    Pivots are searched among the first ncols columns only (augmented systems).
    """
    rows = len(M)
    cols = len(M[0]) if rows else 0
    if ncols is None:
        ncols = cols
    if rows == 0 or cols == 0:
        return [list(r) for r in M], []
    spec = kernel_spec(F)
    if spec is None:
        A = [list(r) for r in M]
        return A, _rref_generic(F, A, ncols)
    mod = _kern if backend is None else backend
    arr = np.array(M, dtype=np.int64)
    piv = mod.rref(arr, *spec, ncols)
    return arr.tolist(), piv


def rank(F, M):
    return len(rref(F, M)[1])


def kernel_basis(F, M, ncols=None):
    """Canonical basis of the right kernel {v : M v = 0}, as rows of a reduced echelon matrix."""
    if ncols is None:
        ncols = len(M[0]) if M else 0
    if not M:
        return [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]
    R, piv = rref(F, M)
    free = [c for c in range(ncols) if c not in set(piv)]
    basis = []
    for fcol in free:
        v = [0] * ncols
        v[fcol] = 1
        for r, pc in enumerate(piv):
            if R[r][fcol]:
                v[pc] = F.neg(R[r][fcol])
        basis.append(v)
    if len(basis) > 1:
        basis, _ = rref(F, basis)
    return basis


def solve(F, A, b):
    """All solutions of A x = b: (particular, kernel_basis) or None when inconsistent."""
    n = len(A[0]) if A else 0
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    if not aug:
        return [0] * n, kernel_basis(F, [], n)
    R, piv = rref(F, aug, ncols=n)
    for r in range(len(piv), len(R)):
        if R[r][n]:
            return None
    x = [0] * n
    for r, pc in enumerate(piv):
        x[pc] = R[r][n]
    free = [c for c in range(n) if c not in set(piv)]
    basis = []
    for fcol in free:
        v = [0] * n
        v[fcol] = 1
        for r, pc in enumerate(piv):
            if R[r][fcol]:
                v[pc] = F.neg(R[r][fcol])
        basis.append(v)
    if len(basis) > 1:
        basis, _ = rref(F, basis)
    return x, basis


def mat_vec(F, M, v):
    out = []
    for row in M:
        acc = 0
        for a, x in zip(row, v):
            if a and x:
                acc = F.add(acc, F.mul(a, x))
        out.append(acc)
    return out


def mat_mul(F, A, B):
    cols = list(zip(*B)) if B else []
    return [[_dot(F, row, col) for col in cols] for row in A]


def _dot(F, a, b):
    acc = 0
    for x, y in zip(a, b):
        if x and y:
            acc = F.add(acc, F.mul(x, y))
    return acc


def transpose(M):
    return [list(c) for c in zip(*M)]


# ---------------------------------------------------------------- F_q structure


def expand_matrix(ctx, M):
    """(m * rows) x cols matrix over F_q; row block r holds the coordinates of row r."""
    out = []
    for row in M:
        coords = [ctx.expand(x) for x in row]
        for k in range(ctx.m):
            out.append([c[k] for c in coords])
    return out


def collapse_matrix(ctx, E):
    rows = len(E) // ctx.m
    return [[ctx.collapse([E[r * ctx.m + k][j] for k in range(ctx.m)]) for j in range(len(E[0]))]
            for r in range(rows)]


def fq_rank(ctx, M):
    """Dimension of the F_q-span of the columns of M."""
    if not M or not M[0]:
        return 0
    return rank(ctx.Fq, expand_matrix(ctx, M))


def sum_rank_weight(ctx, blocks):
    """(t, (t_1..t_l)) for a tuple of matrices."""
    tv = [fq_rank(ctx, B) for B in blocks]
    return sum(tv), tv


def fq_rcef(ctx, M):
    """Reduced column echelon form of M under F_q column operations, collapsed back."""
    if not M or not M[0]:
        return [list(r) for r in M]
    E = expand_matrix(ctx, M)
    R, piv = rref(ctx.Fq, transpose(E))
    cols = len(M[0])
    R = R[:len(piv)] + [[0] * len(E) for _ in range(cols - len(piv))]
    return collapse_matrix(ctx, transpose(R))


def blockwise_rcef(ctx, blocks):
    return [fq_rcef(ctx, B) for B in blocks]


def fq_independent(ctx, vectors):
    """True iff the given F_{q^m} vectors (as columns) are F_q-linearly independent."""
    if not vectors:
        return True
    M = transpose(vectors)
    return fq_rank(ctx, M) == len(vectors)
