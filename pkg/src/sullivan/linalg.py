"""
Exact linear algebra over the rationals.

Vectors are sparse ``{column: Fraction}`` dicts; a :class:`Matrix` is a list
of such rows. Everything is exact, so equality of dimensions and subspaces
is decided without tolerances.
"""

from fractions import Fraction

from .errors import ContractViolation


def _clean(row):
    return {j: Fraction(v) for j, v in row.items() if v != 0}


def as_vector(v):
    """Coerce a dense sequence or sparse dict into a sparse vector."""
    if isinstance(v, dict):
        return _clean(v)
    return {j: Fraction(x) for j, x in enumerate(v) if x != 0}


def dense(v, n):
    return [Fraction(v.get(j, 0)) for j in range(n)]


def axpy(y, a, x):
    """Return y + a*x for sparse vectors (new dict)."""
    out = dict(y)
    if a == 0:
        return out
    for j, v in x.items():
        s = out.get(j, 0) + a * v
        if s:
            out[j] = s
        else:
            out.pop(j, None)
    return out


class Matrix:
    """A rows x cols rational matrix stored as sparse rows."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows, ncols, rows=None):
        self.nrows = nrows
        self.ncols = ncols
        if rows is None:
            rows = [{} for _ in range(nrows)]
        if len(rows) != nrows:
            raise ContractViolation("row count mismatch")
        self.rows = [_clean(r) for r in rows]
        for r in self.rows:
            for j in r:
                if not 0 <= j < ncols:
                    raise ContractViolation(f"column {j} out of bounds")

    @classmethod
    def from_dense(cls, data, ncols=None):
        data = [list(r) for r in data]
        if ncols is None:
            ncols = len(data[0]) if data else 0
        for r in data:
            if len(r) != ncols:
                raise ContractViolation("ragged matrix")
        return cls(len(data), ncols, [as_vector(r) for r in data])

    @classmethod
    def from_columns(cls, nrows, columns):
        """Build a matrix whose j-th column is the sparse vector columns[j]."""
        rows = [{} for _ in range(nrows)]
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v:
                    rows[i][j] = Fraction(v)
        return cls(nrows, len(columns), rows)

    @classmethod
    def identity(cls, n):
        return cls(n, n, [{i: Fraction(1)} for i in range(n)])

    @classmethod
    def zeros(cls, nrows, ncols):
        return cls(nrows, ncols)

    def __getitem__(self, ij):
        i, j = ij
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(ij)
        return self.rows[i].get(j, Fraction(0))

    def to_dense(self):
        return [dense(r, self.ncols) for r in self.rows]

    def transpose(self):
        out = [{} for _ in range(self.ncols)]
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                out[j][i] = v
        return Matrix(self.ncols, self.nrows, out)

    def column(self, j):
        return {i: r[j] for i, r in enumerate(self.rows) if j in r}

    def mul_vec(self, v):
        v = as_vector(v)
        out = {}
        for i, r in enumerate(self.rows):
            s = sum((a * v[j] for j, a in r.items() if j in v), Fraction(0))
            if s:
                out[i] = s
        return out

    def is_zero(self):
        return not any(self.rows)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.nrows, self.ncols, self.rows) == (other.nrows, other.ncols, other.rows)

    def __hash__(self):
        return hash((self.nrows, self.ncols,
                     tuple(tuple(sorted(r.items())) for r in self.rows)))

    def __repr__(self):
        return f"Matrix({self.to_dense()!r})"


class Echelon:
    """Incrementally maintained reduced row echelon form.

    Pivot rows are kept fully reduced: each has a leading 1 and zeros in
    every other pivot column.
    """

    def __init__(self, ncols):
        self.ncols = ncols
        self.pivots = {}  # pivot column -> row

    @property
    def rank(self):
        return len(self.pivots)

    def reduce(self, v):
        v = dict(v)
        for p in [p for p in v if p in self.pivots]:
            if p in v:
                v = axpy(v, -v[p], self.pivots[p])
        return v

    def add(self, v):
        """Insert v; return True if it enlarged the span."""
        r = self.reduce(as_vector(v))
        if not r:
            return False
        p = min(r)
        inv = 1 / r[p]
        r = {j: x * inv for j, x in r.items()}
        for q, row in self.pivots.items():
            if p in row:
                self.pivots[q] = axpy(row, -row[p], r)
        self.pivots[p] = r
        return True

    def contains(self, v):
        return not self.reduce(as_vector(v))

    def rows(self):
        return [self.pivots[p] for p in sorted(self.pivots)]


def rref(m):
    """Return (R, pivots, rank) with R the reduced row echelon form of m."""
    e = Echelon(m.ncols)
    for r in m.rows:
        e.add(r)
    rows = e.rows()
    pivots = sorted(e.pivots)
    rows = rows + [{} for _ in range(m.nrows - len(rows))]
    return Matrix(m.nrows, m.ncols, rows), pivots, len(pivots)


def rank(m):
    return rref(m)[2]


class Subspace:
    """A subspace of Q^ambient, stored canonically by its RREF basis.

    Two subspaces are equal iff their RREF bases are equal.
    """

    __slots__ = ("ambient", "basis")

    def __init__(self, ambient, vectors=()):
        e = Echelon(ambient)
        for v in vectors:
            v = as_vector(v)
            if any(not 0 <= j < ambient for j in v):
                raise ContractViolation("vector outside ambient space")
            e.add(v)
        self.ambient = ambient
        self.basis = tuple(e.rows())

    @classmethod
    def zero(cls, ambient):
        return cls(ambient)

    @classmethod
    def full(cls, ambient):
        return cls(ambient, [{i: 1} for i in range(ambient)])

    @property
    def dim(self):
        return len(self.basis)

    def matrix(self):
        return Matrix(len(self.basis), self.ambient, list(self.basis))

    def dense_basis(self):
        return [dense(v, self.ambient) for v in self.basis]

    def _echelon(self):
        e = Echelon(self.ambient)
        for v in self.basis:
            e.add(v)
        return e

    def contains(self, v):
        return self._echelon().contains(v)

    def issubset(self, other):
        e = other._echelon()
        return all(e.contains(v) for v in self.basis)

    def __add__(self, other):
        return Subspace(self.ambient, self.basis + other.basis)

    def intersection(self, other):
        # x = sum a_i u_i = sum b_j w_j  <=>  (a, -b) in kernel of [U^T | W^T]
        cols = list(self.basis) + [{j: -x for j, x in w.items()} for w in other.basis]
        k = kernel_basis(Matrix.from_columns(self.ambient, cols))
        out = []
        for z in k.basis:
            v = {}
            for i, u in enumerate(self.basis):
                if i in z:
                    v = axpy(v, z[i], u)
            out.append(v)
        return Subspace(self.ambient, out)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient, tuple(tuple(sorted(v.items())) for v in self.basis)))

    def __repr__(self):
        return f"Subspace(ambient={self.ambient}, basis={self.dense_basis()!r})"


def kernel_basis(m):
    """Subspace {v : m v = 0}; its dimension is cols - rank(m)."""
    _, pivots, _ = rref(m)
    e = Echelon(m.ncols)
    for r in m.rows:
        e.add(r)
    pivot_set = set(pivots)
    vecs = []
    for j in range(m.ncols):
        if j in pivot_set:
            continue
        v = {j: Fraction(1)}
        for p, row in e.pivots.items():
            if j in row:
                v[p] = -row[j]
        vecs.append(v)
    return Subspace(m.ncols, vecs)


def image_basis(m):
    """Column space of m as a Subspace of Q^rows."""
    t = m.transpose()
    return Subspace(m.nrows, t.rows)


def solve_affine(a, b):
    """Solve a x = b exactly.

    Returns None when b is not in the column space, otherwise
    ``(particular, kernel)`` where ``particular`` is a dense list. The
    particular solution sets all free variables to zero, so it depends
    linearly on b.
    """
    b = as_vector(b) if not isinstance(b, dict) else _clean(b)
    if any(not 0 <= i < a.nrows for i in b):
        raise ContractViolation("right-hand side has wrong dimension")
    n = a.ncols
    e = Echelon(n + 1)
    for i, r in enumerate(a.rows):
        row = dict(r)
        if i in b:
            row[n] = b[i]
        e.add(row)
    if n in e.pivots:
        return None
    x = [Fraction(0)] * n
    for p, row in e.pivots.items():
        x[p] = row.get(n, Fraction(0))
    return x, kernel_basis(a)


def left_null_certificate(a, b):
    """For an inconsistent system a x = b, return y with y^T a = 0, y.b = 1.

    Returns None if the system is consistent.
    """
    b = as_vector(b) if not isinstance(b, dict) else _clean(b)
    k = kernel_basis(a.transpose())
    for y in k.basis:
        s = sum((y[i] * b[i] for i in y if i in b), Fraction(0))
        if s:
            return {i: v / s for i, v in y.items()}
    return None


def subquotient_basis(cycles, boundaries):
    """Representatives of a basis of cycles / boundaries.

    Returns ``(dimension, representatives)``; raises ContractViolation when
    boundaries is not contained in cycles.
    """
    if cycles.ambient != boundaries.ambient:
        raise ContractViolation("ambient dimension mismatch")
    if not boundaries.issubset(cycles):
        raise ContractViolation("boundaries not contained in cycles")
    e = boundaries._echelon()
    reps = [dict(v) for v in cycles.basis if e.add(v)]
    return len(reps), reps


class Subquotient:
    """cycles / boundaries with coordinates of classes in a fixed basis."""

    def __init__(self, cycles, boundaries):
        self.cycles = cycles
        self.boundaries = boundaries
        self.dim, self.reps = subquotient_basis(cycles, boundaries)
        cols = list(self.reps) + list(boundaries.basis)
        self._system = Matrix.from_columns(cycles.ambient, cols)

    def coordinates(self, v):
        """Coordinates of the class of the cycle v in the representative basis."""
        v = as_vector(v)
        sol = solve_affine(self._system, v)
        if sol is None:
            raise ContractViolation("vector is not a cycle")
        return sol[0][: self.dim]

    def is_boundary(self, v):
        return self.boundaries.contains(v)
