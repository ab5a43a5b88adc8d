"""Exact linear algebra over the rationals and prime fields.

Everything downstream reduces to kernels, images, solving and canonical
subspace forms computed here.  No floating point anywhere: scalars are
`fractions.Fraction` (rationals) or ints in ``range(p)`` (prime fields).
All canonical forms are deterministic, so identical inputs give
bit-identical outputs.
"""

from __future__ import annotations

from fractions import Fraction


class DimensionError(ValueError):
    """Incompatible shapes passed to a linear-algebra operation."""


class Rationals:
    """Field of rational numbers.  Elements are Fraction."""

    name = "q"
    char = 0

    zero = Fraction(0)
    one = Fraction(1)

    def from_int(self, n):
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return 1 / Fraction(a)

    def div(self, a, b):
        return Fraction(a) / b

    def show(self, a):
        return str(a)

    def parse(self, text):
        return Fraction(text)

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("q")

    def __repr__(self):
        return "Rationals()"


class PrimeField:
    """Prime field F_p.  Elements are ints reduced into range(p)."""

    def __init__(self, p):
        if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"fp:{p}"
        self.char = p
        self.zero = 0
        self.one = 1 % p

    def from_int(self, n):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return (a * self.inv(b)) % self.p

    def show(self, a):
        return str(a % self.p)

    def parse(self, text):
        frac = Fraction(text)
        return self.div(frac.numerator % self.p, frac.denominator % self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("fp", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"


def parse_field(spec):
    """Parse a field spec: ``q`` or ``fp:<p>``."""
    if spec == "q":
        return Rationals()
    if spec.startswith("fp:"):
        return PrimeField(int(spec[3:]))
    raise ValueError(f"unknown field spec {spec!r} (expected 'q' or 'fp:<p>')")


class Matrix:
    """Immutable dense matrix over an exact field.

    Stored as a tuple of row tuples.  Rows index the target, columns the
    source, so ``A.apply(v)`` computes A v for a column vector v given as
    a tuple.
    """

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field, data, cols=None):
        data = tuple(tuple(row) for row in data)
        rows = len(data)
        if rows:
            cols_found = len(data[0])
            if any(len(r) != cols_found for r in data):
                raise DimensionError("ragged rows")
            if cols is not None and cols != cols_found:
                raise DimensionError("declared column count does not match data")
            cols = cols_found
        elif cols is None:
            cols = 0
        self.field = field
        self.rows = rows
        self.cols = cols
        self.data = data

    @staticmethod
    def zeros(field, rows, cols):
        z = field.zero
        return Matrix(field, [[z] * cols for _ in range(rows)], cols)

    @staticmethod
    def identity(field, n):
        z, o = field.zero, field.one
        return Matrix(field, [[o if i == j else z for j in range(n)] for i in range(n)], n)

    @staticmethod
    def from_rows(field, rows, cols=None):
        return Matrix(field, rows, cols)

    @staticmethod
    def from_cols(field, cols_list, rows=None):
        if not cols_list:
            return Matrix(field, [], 0) if rows is None else Matrix.zeros(field, rows, 0)
        n = len(cols_list[0])
        return Matrix(field, [[c[i] for c in cols_list] for i in range(n)], len(cols_list))

    def row(self, i):
        return self.data[i]

    def col(self, j):
        return tuple(self.data[i][j] for i in range(self.rows))

    def entry(self, i, j):
        return self.data[i][j]

    def is_zero(self):
        z = self.field.zero
        return all(x == z for row in self.data for x in row)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.field, self.rows, self.cols, self.data))

    def __add__(self, other):
        self._same_shape(other)
        add = self.field.add
        return Matrix(
            self.field,
            [
                [add(a, b) for a, b in zip(ra, rb)]
                for ra, rb in zip(self.data, other.data)
            ],
            self.cols,
        )

    def __sub__(self, other):
        self._same_shape(other)
        sub = self.field.sub
        return Matrix(
            self.field,
            [
                [sub(a, b) for a, b in zip(ra, rb)]
                for ra, rb in zip(self.data, other.data)
            ],
            self.cols,
        )

    def __neg__(self):
        neg = self.field.neg
        return Matrix(self.field, [[neg(a) for a in row] for row in self.data], self.cols)

    def scale(self, c):
        mul = self.field.mul
        return Matrix(self.field, [[mul(c, a) for a in row] for row in self.data], self.cols)

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape()} by {other.shape()}")
        f = self.field
        add, mul, z = f.add, f.mul, f.zero
        out = []
        for i in range(self.rows):
            ri = self.data[i]
            orow = []
            for j in range(other.cols):
                s = z
                for k in range(self.cols):
                    a = ri[k]
                    if a != z:
                        s = add(s, mul(a, other.data[k][j]))
                orow.append(s)
            out.append(orow)
        return Matrix(f, out, other.cols)

    def apply(self, vec):
        if len(vec) != self.cols:
            raise DimensionError("vector length does not match column count")
        f = self.field
        add, mul, z = f.add, f.mul, f.zero
        out = []
        for row in self.data:
            s = z
            for a, v in zip(row, vec):
                if a != z and v != z:
                    s = add(s, mul(a, v))
            out.append(s)
        return tuple(out)

    def transpose(self):
        return Matrix(
            self.field,
            [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)],
            self.rows,
        )

    def hstack(self, other):
        if self.rows != other.rows:
            raise DimensionError("row counts differ")
        return Matrix(
            self.field,
            [ra + rb for ra, rb in zip(self.data, other.data)],
            self.cols + other.cols,
        )

    def vstack(self, other):
        if self.cols != other.cols:
            raise DimensionError("column counts differ")
        return Matrix(self.field, self.data + other.data, self.cols)

    def shape(self):
        return (self.rows, self.cols)

    def rref(self):
        """Reduced row-echelon form.  Returns (matrix, pivot column list)."""
        f = self.field
        z = f.zero
        m = [list(row) for row in self.data]
        pivots = []
        r = 0
        for c in range(self.cols):
            pr = None
            for i in range(r, self.rows):
                if m[i][c] != z:
                    pr = i
                    break
            if pr is None:
                continue
            m[r], m[pr] = m[pr], m[r]
            inv = f.inv(m[r][c])
            m[r] = [f.mul(inv, x) for x in m[r]]
            for i in range(self.rows):
                if i != r and m[i][c] != z:
                    factor = m[i][c]
                    m[i] = [f.sub(x, f.mul(factor, y)) for x, y in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return Matrix(f, m, self.cols), pivots

    def rank(self):
        return len(self.rref()[1])

    def solve(self, b):
        """One solution x of A x = b, or None if inconsistent.

        Deterministic choice: free variables are set to zero after
        reduced-echelon elimination of the augmented matrix.
        """
        if len(b) != self.rows:
            raise DimensionError("right-hand side length does not match row count")
        f = self.field
        z = f.zero
        aug = self.hstack(Matrix.from_cols(f, [tuple(b)], self.rows))
        red, pivots = aug.rref()
        if self.cols in pivots:
            return None
        x = [z] * self.cols
        for r, c in enumerate(pivots):
            x[c] = red.data[r][self.cols]
        return tuple(x)

    def kernel(self):
        """Canonical subspace of all x with A x = 0."""
        f = self.field
        z, o = f.zero, f.one
        red, pivots = self.rref()
        pivot_set = set(pivots)
        free = [c for c in range(self.cols) if c not in pivot_set]
        basis = []
        for c in free:
            v = [z] * self.cols
            v[c] = o
            for r, pc in enumerate(pivots):
                v[pc] = f.neg(red.data[r][c])
            basis.append(v)
        return Subspace.from_vectors(f, self.cols, basis)

    def image(self):
        """Canonical subspace spanned by the columns of A."""
        return Subspace.from_vectors(
            self.field, self.rows, [self.col(j) for j in range(self.cols)]
        )

    def row_space(self):
        return Subspace.from_vectors(self.field, self.cols, self.data)

    def inverse(self):
        if self.rows != self.cols:
            raise DimensionError("only square matrices invert")
        f = self.field
        red, pivots = self.hstack(Matrix.identity(f, self.rows)).rref()
        if len(pivots) != self.rows or pivots != list(range(self.rows)):
            return None
        return Matrix(f, [row[self.rows:] for row in red.data], self.rows)

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols} over {self.field.name})"

    def _same_shape(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise DimensionError(f"shape mismatch {self.shape()} vs {other.shape()}")


class Subspace:
    """Subspace of F^n in canonical form: basis rows in RREF.

    The reduced echelon basis is the unique canonical representative, so
    equality of subspaces is equality of data and canonicalising twice
    is the identity.
    """

    __slots__ = ("field", "ambient", "basis")

    def __init__(self, field, ambient, basis):
        if basis.cols != ambient:
            raise DimensionError("basis width does not match ambient dimension")
        self.field = field
        self.ambient = ambient
        self.basis = basis

    @staticmethod
    def from_vectors(field, ambient, vectors):
        mat = Matrix(field, vectors, ambient) if vectors else Matrix.zeros(field, 0, ambient)
        red, pivots = mat.rref()
        return Subspace(field, ambient, Matrix(field, red.data[: len(pivots)], ambient))

    @staticmethod
    def zero(field, ambient):
        return Subspace(field, ambient, Matrix.zeros(field, 0, ambient))

    @staticmethod
    def full(field, ambient):
        return Subspace(field, ambient, Matrix.identity(field, ambient))

    def dim(self):
        return self.basis.rows

    def vectors(self):
        return list(self.basis.data)

    def contains(self, vec):
        return self.reduce(vec) is not None

    def reduce(self, vec):
        """Coordinates of vec in the canonical basis, or None if outside."""
        if len(vec) != self.ambient:
            raise DimensionError("vector length does not match ambient dimension")
        coords = self.basis.transpose().solve(vec)
        return coords

    def contains_subspace(self, other):
        return all(self.contains(v) for v in other.basis.data)

    def add(self, other):
        self._same_ambient(other)
        return Subspace.from_vectors(
            self.field, self.ambient, list(self.basis.data) + list(other.basis.data)
        )

    def intersect(self, other):
        self._same_ambient(other)
        if self.dim() == 0 or other.dim() == 0:
            return Subspace.zero(self.field, self.ambient)
        # x = c . basis lies in other  iff  c kills the residue of basis mod other
        residues = []
        for v in self.basis.data:
            residues.append(_residue_mod(other, v))
        cond = Matrix(self.field, residues, self.ambient).transpose()
        coeffs = cond.kernel()
        vecs = [self.basis.transpose().apply(c) for c in coeffs.basis.data]
        return Subspace.from_vectors(self.field, self.ambient, vecs)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.ambient == other.ambient
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.ambient, self.basis))

    def __repr__(self):
        return f"Subspace(dim {self.dim()} of F^{self.ambient})"

    def _same_ambient(self, other):
        if self.ambient != other.ambient or self.field != other.field:
            raise DimensionError("subspaces live in different ambient spaces")


def _residue_mod(space, vec):
    """Reduce vec by the RREF basis of `space`; zero residue means membership."""
    f = space.field
    v = list(vec)
    rows = space.basis.data
    pivots = []
    for row in rows:
        for c, x in enumerate(row):
            if x != f.zero:
                pivots.append(c)
                break
    for row, pc in zip(rows, pivots):
        coef = v[pc]
        if coef != f.zero:
            v = [f.sub(a, f.mul(coef, b)) for a, b in zip(v, row)]
    return tuple(v)


def solve(mat, b):
    return mat.solve(b)


def kernel(mat):
    return mat.kernel()


def image(mat):
    return mat.image()


def quotient_basis(ambient, sub):
    """Greedy complement of `sub` in F^ambient by standard basis vectors.

    Returns the list of standard basis vectors (as tuples) whose classes
    form a basis of the quotient, in increasing coordinate order.
    """
    if sub.ambient != ambient:
        raise DimensionError("subspace does not sit in the requested ambient space")
    f = sub.field
    reps = []
    current = sub
    for j in range(ambient):
        if current.dim() == ambient:
            break
        e = tuple(f.one if i == j else f.zero for i in range(ambient))
        if not current.contains(e):
            reps.append(e)
            current = current.add(Subspace.from_vectors(f, ambient, [e]))
    return reps


def complement_within(inner, outer):
    """Vectors from outer's canonical basis extending inner to a basis of outer.

    Greedy over the RREF rows of `outer`; requires inner <= outer.
    """
    if not outer.contains_subspace(inner):
        raise DimensionError("inner subspace is not contained in outer")
    reps = []
    current = inner
    for v in outer.basis.data:
        if current.dim() == outer.dim():
            break
        if not current.contains(v):
            reps.append(v)
            current = current.add(Subspace.from_vectors(outer.field, outer.ambient, [v]))
    return reps
