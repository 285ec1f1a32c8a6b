"""Small exact linear algebra over tower elements (dense, deterministic)."""

from .fieldtower import FieldDescriptor


def rref(K: FieldDescriptor, rows):
    """Reduced row echelon form; returns (rows, pivot_columns).

    Pivot choice is first nonzero entry, so results are deterministic.
    """
    rows = [list(r) for r in rows]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, len(rows)):
            if not rows[i][c].is_zero():
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [x + f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def kernel_basis(K: FieldDescriptor, rows, ncols=None):
    """Basis of the right kernel {x : rows . x = 0}.

    ncols must be given when rows may be empty (no constraints: full space).
    """
    if not rows:
        if ncols is None:
            return []
        one, zero = K.one(), K.zero()
        return [[one if j == i else zero for j in range(ncols)]
                for i in range(ncols)]
    ncols = len(rows[0])
    red, pivots = rref(K, rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    zero, one = K.zero(), K.one()
    for f in free:
        vec = [zero] * ncols
        vec[f] = one
        for r, p in enumerate(pivots):
            vec[p] = red[r][f]
        basis.append(vec)
    return basis


def row_dependency(K: FieldDescriptor, rows):
    """Coefficients lam (not all zero) with sum lam_i * row_i = 0, or None.

    The first dependency in elimination order, for determinism.
    """
    if not rows:
        return None
    n = len(rows)
    ncols = len(rows[0])
    zero, one = K.zero(), K.one()
    # Augment each row with the identity to track combinations.
    work = [list(r) + [one if j == i else zero for j in range(n)]
            for i, r in enumerate(rows)]
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, n):
            if not work[i][c].is_zero():
                pr = i
                break
        if pr is None:
            continue
        work[r], work[pr] = work[pr], work[r]
        inv = work[r][c].inverse()
        work[r] = [x * inv for x in work[r]]
        for i in range(n):
            if i != r and not work[i][c].is_zero():
                f = work[i][c]
                work[i] = [x + f * y for x, y in zip(work[i], work[r])]
        r += 1
        if r == n:
            break
    for i in range(n):
        if all(work[i][c].is_zero() for c in range(ncols)):
            return work[i][ncols:]
    return None
