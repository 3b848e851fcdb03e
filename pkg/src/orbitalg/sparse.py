"""Exact sparse linear algebra: Smith normal form, solving, kernels.

Matrices are stored as (row, col) -> nonzero entry triplets.  All the
reduction algorithms densify first; the matrices arising from truncated
chain-level constructions are small, and pivoting is much simpler on a
dense array of exact scalars.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .rings import CoeffRing, ZZ


@dataclass
class SparseMatrix:
    ring: CoeffRing
    rows: int
    cols: int
    entries: dict = field(default_factory=dict)  # (i, j) -> nonzero scalar

    def __post_init__(self):
        clean = {}
        for (i, j), v in self.entries.items():
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise IndexError("entry (%d,%d) out of range" % (i, j))
            v = self.ring.coerce(v)
            if not self.ring.is_zero(v):
                clean[(i, j)] = v
        self.entries = clean

    # -- basic access ---------------------------------------------------
    def get(self, i, j):
        return self.entries.get((i, j), self.ring.zero())

    def set(self, i, j, v):
        v = self.ring.coerce(v)
        if self.ring.is_zero(v):
            self.entries.pop((i, j), None)
        else:
            self.entries[(i, j)] = v

    def add_to(self, i, j, v):
        self.set(i, j, self.ring.add(self.get(i, j), v))

    def to_dense(self):
        d = [[self.ring.zero()] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            d[i][j] = v
        return d

    @staticmethod
    def from_dense(ring, rows):
        n = len(rows)
        m = len(rows[0]) if n else 0
        ent = {}
        for i in range(n):
            for j in range(m):
                v = ring.coerce(rows[i][j])
                if not ring.is_zero(v):
                    ent[(i, j)] = v
        return SparseMatrix(ring, n, m, ent)

    @staticmethod
    def identity(ring, n):
        return SparseMatrix(ring, n, n, {(i, i): ring.one() for i in range(n)})

    @staticmethod
    def zero(ring, rows, cols):
        return SparseMatrix(ring, rows, cols)

    def matmul(self, other):
        if self.cols != other.rows:
            raise ValueError("dimension mismatch %dx%d @ %dx%d"
                             % (self.rows, self.cols, other.rows, other.cols))
        by_row = {}
        for (i, k), v in self.entries.items():
            by_row.setdefault(i, []).append((k, v))
        out = {}
        by_k = {}
        for (k, j), w in other.entries.items():
            by_k.setdefault(k, []).append((j, w))
        R = self.ring
        for i, row in by_row.items():
            acc = {}
            for k, v in row:
                for j, w in by_k.get(k, ()):
                    acc[j] = R.add(acc.get(j, R.zero()), R.mul(v, w))
            for j, v in acc.items():
                if not R.is_zero(v):
                    out[(i, j)] = v
        return SparseMatrix(R, self.rows, other.cols, out)

    def apply(self, vec):
        """Matrix times a dense column vector (list of scalars)."""
        if len(vec) != self.cols:
            raise ValueError("dimension mismatch")
        R = self.ring
        out = [R.zero()] * self.rows
        for (i, j), v in self.entries.items():
            out[i] = R.add(out[i], R.mul(v, vec[j]))
        return out

    def transpose(self):
        return SparseMatrix(self.ring, self.cols, self.rows,
                            {(j, i): v for (i, j), v in self.entries.items()})

    def scaled(self, c):
        R = self.ring
        return SparseMatrix(R, self.rows, self.cols,
                            {k: R.mul(c, v) for k, v in self.entries.items()})

    def plus(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("dimension mismatch")
        R = self.ring
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = R.add(out.get(k, R.zero()), v)
        return SparseMatrix(R, self.rows, self.cols, out)

    def is_zero(self):
        return not self.entries

    def __eq__(self, other):
        return (isinstance(other, SparseMatrix)
                and self.ring == other.ring
                and (self.rows, self.cols) == (other.rows, other.cols)
                and self.entries == other.entries)


# ---------------------------------------------------------------------------
# Smith normal form over the integers
# ---------------------------------------------------------------------------

def smith_normal_form(M):
    """Return (invariants, U, V) with U*M*V diagonal on the invariants.

    invariants is the list of nonzero diagonal entries d1 | d2 | ..., all
    positive.  U and V are unimodular SparseMatrix transforms over Z.
    """
    if M.ring != ZZ:
        raise ValueError("Smith normal form is computed over the integers")
    n, m = M.rows, M.cols
    A = [[int(v) for v in row] for row in M.to_dense()]
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    V = [[1 if i == j else 0 for j in range(m)] for i in range(m)]

    def swap_rows(a, b):
        A[a], A[b] = A[b], A[a]
        U[a], U[b] = U[b], U[a]

    def swap_cols(a, b):
        for r in A:
            r[a], r[b] = r[b], r[a]
        for r in V:
            r[a], r[b] = r[b], r[a]

    def row_sub(i, j, q):
        # row_i -= q * row_j
        A[i] = [x - q * y for x, y in zip(A[i], A[j])]
        U[i] = [x - q * y for x, y in zip(U[i], U[j])]

    def col_sub(i, j, q):
        # col_i -= q * col_j
        for r in A:
            r[i] -= q * r[j]
        for r in V:
            r[i] -= q * r[j]

    def negate_row(i):
        A[i] = [-x for x in A[i]]
        U[i] = [-x for x in U[i]]

    t = 0
    while t < min(n, m):
        # pick smallest-magnitude nonzero entry of the trailing block
        piv = None
        for i in range(t, n):
            for j in range(t, m):
                if A[i][j] and (piv is None or abs(A[i][j]) < abs(A[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        if A[t][t] < 0:
            negate_row(t)
        while True:
            dirty = False
            for i in range(t + 1, n):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    row_sub(i, t, q)
                    if A[i][t]:
                        swap_rows(i, t)  # strictly smaller pivot
                        dirty = True
            for j in range(t + 1, m):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    col_sub(j, t, q)
                    if A[t][j]:
                        swap_cols(j, t)
                        dirty = True
            if A[t][t] < 0:
                negate_row(t)
            if not dirty:
                break
        # force the pivot to divide the remaining block
        p = A[t][t]
        bad = None
        for i in range(t + 1, n):
            for j in range(t + 1, m):
                if A[i][j] % p:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            row_sub(t, bad, -1)  # add the offending row to row t
            continue
        t += 1

    invariants = [A[i][i] for i in range(min(n, m)) if A[i][i]]
    Um = SparseMatrix.from_dense(ZZ, U)
    Vm = SparseMatrix.from_dense(ZZ, V)
    return invariants, Um, Vm


# ---------------------------------------------------------------------------
# Field elimination
# ---------------------------------------------------------------------------

def _field_echelon(M):
    """Row-reduce over a field; returns (dense echelon rows, pivot cols, T).

    T is the dense transform with T @ M = echelon.
    """
    R = M.ring
    A = M.to_dense()
    n, m = M.rows, M.cols
    T = [[R.one() if i == j else R.zero() for j in range(n)] for i in range(n)]
    pivots = []
    r = 0
    for c in range(m):
        pr = None
        for i in range(r, n):
            if not R.is_zero(A[i][c]):
                pr = i
                break
        if pr is None:
            continue
        A[r], A[pr] = A[pr], A[r]
        T[r], T[pr] = T[pr], T[r]
        inv = R.inv(A[r][c])
        A[r] = [R.mul(inv, x) for x in A[r]]
        T[r] = [R.mul(inv, x) for x in T[r]]
        for i in range(n):
            if i != r and not R.is_zero(A[i][c]):
                f = A[i][c]
                A[i] = [R.sub(x, R.mul(f, y)) for x, y in zip(A[i], A[r])]
                T[i] = [R.sub(x, R.mul(f, y)) for x, y in zip(T[i], T[r])]
        pivots.append(c)
        r += 1
        if r == n:
            break
    return A, pivots, T


def rank(M):
    if M.ring.is_field:
        return len(_field_echelon(M)[1])
    return len(smith_normal_form(M)[0])


def solve(M, b):
    """Solve M x = b exactly; returns a dense vector or None if unsolvable."""
    R = M.ring
    if len(b) != M.rows:
        raise ValueError("dimension mismatch: %d rows vs %d rhs" % (M.rows, len(b)))
    b = [R.coerce(x) for x in b]
    if R.is_field:
        A, pivots, T = _field_echelon(M)
        tb = [sum_mul(R, T[i], b) for i in range(M.rows)]
        x = [R.zero()] * M.cols
        for r, c in enumerate(pivots):
            x[c] = tb[r]
        # consistency: rows beyond the pivots must have zero rhs
        for r in range(len(pivots), M.rows):
            if not R.is_zero(tb[r]):
                return None
        # back-substitute the free columns (they are zero, echelon is reduced)
        chk = M.apply(x)
        if chk != b:
            return None
        return x
    invariants, U, V = smith_normal_form(M)
    ub = U.apply(b)
    y = [R.zero()] * M.cols
    for i, d in enumerate(invariants):
        if ub[i] % d:
            return None
        y[i] = ub[i] // d
    for i in range(len(invariants), M.rows):
        if ub[i]:
            return None
    return V.apply(y)


def sum_mul(R, row, vec):
    acc = R.zero()
    for a, b in zip(row, vec):
        acc = R.add(acc, R.mul(a, b))
    return acc


def kernel_basis(M):
    """Basis of ker M: free generating set over Z, spanning basis over fields."""
    R = M.ring
    if R.is_field:
        A, pivots, _ = _field_echelon(M)
        free = [c for c in range(M.cols) if c not in pivots]
        basis = []
        for f in free:
            v = [R.zero()] * M.cols
            v[f] = R.one()
            for r, c in enumerate(pivots):
                v[c] = R.neg(A[r][f])
            basis.append(v)
        return basis
    invariants, _, V = smith_normal_form(M)
    k = len(invariants)
    basis = []
    for j in range(k, M.cols):
        basis.append([V.get(i, j) for i in range(M.cols)])
    return basis


def columns_matrix(ring, cols, nrows):
    """Assemble dense column vectors into a SparseMatrix."""
    ent = {}
    for j, col in enumerate(cols):
        for i, v in enumerate(col):
            v = ring.coerce(v)
            if not ring.is_zero(v):
                ent[(i, j)] = v
    return SparseMatrix(ring, nrows, len(cols), ent)
