"""Graded vector spaces, algebras and modules over an exact field.

The grading group is either Z (with a finite support window and a hard
width cap) or Z/2.  Every sign in the package is computed through the
parity map of the grading group, so formulas specialise to both cases.

Degree-i maps between graded modules obey the sign rule
``f(r z) = (-1)^{par(i) par(|r|)} r f(z)``; the solver `hom_graded` cuts
these out of the full block-map space by exact linear algebra.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import DimensionError, Matrix, Subspace, quotient_basis


class AxiomError(ValueError):
    """Raised by eager validators; carries the list of violations."""

    def __init__(self, context, violations):
        self.context = context
        self.violations = list(violations)
        lines = "; ".join(self.violations[:6])
        more = "" if len(self.violations) <= 6 else f" (+{len(self.violations) - 6} more)"
        super().__init__(f"{context}: {lines}{more}")


class WindowError(ValueError):
    """Graded support exceeds the configured window cap."""


class GradingGroup:
    """Z with a finite support window, or Z/2."""

    __slots__ = ("kind", "window")

    def __init__(self, kind, window=64):
        if kind not in ("z", "z2"):
            raise ValueError("grading kind must be 'z' or 'z2'")
        self.kind = kind
        self.window = window

    def norm(self, g):
        return g % 2 if self.kind == "z2" else g

    def add(self, g, h):
        return self.norm(g + h)

    def neg(self, g):
        return self.norm(-g)

    def par(self, g):
        return g % 2

    def sign(self, i, j):
        """(-1)^{par(i) par(j)} as +1/-1."""
        return -1 if (i % 2) and (j % 2) else 1

    def check_support(self, degrees):
        if self.kind == "z" and degrees:
            width = max(degrees) - min(degrees) + 1
            if width > self.window:
                raise WindowError(
                    f"support width {width} exceeds window cap {self.window}"
                )

    def __eq__(self, other):
        return (
            isinstance(other, GradingGroup)
            and self.kind == other.kind
            and self.window == other.window
        )

    def __hash__(self):
        return hash((self.kind, self.window))

    def __repr__(self):
        return f"GradingGroup({self.kind!r}, window={self.window})"


class GradedSpace:
    """Finite-dimensional graded vector space with ordered, labelled bases."""

    __slots__ = ("field", "grading", "degrees", "dims", "labels", "_offsets", "total")

    def __init__(self, field, grading, dims, labels=None):
        norm_dims = {}
        for g, d in dims.items():
            if d < 0:
                raise DimensionError("negative dimension")
            if d:
                gn = grading.norm(g)
                norm_dims[gn] = norm_dims.get(gn, 0) + d
        grading.check_support(list(norm_dims))
        self.field = field
        self.grading = grading
        self.degrees = tuple(sorted(norm_dims))
        self.dims = {g: norm_dims[g] for g in self.degrees}
        if labels is None:
            labels = {g: tuple(f"e{g}_{i}" for i in range(self.dims[g])) for g in self.degrees}
        else:
            labels = {grading.norm(g): tuple(ls) for g, ls in labels.items() if ls}
            for g in self.degrees:
                if len(labels.get(g, ())) != self.dims[g]:
                    raise DimensionError(f"label count mismatch in degree {g}")
        self.labels = labels
        offsets = {}
        total = 0
        for g in self.degrees:
            offsets[g] = total
            total += self.dims[g]
        self._offsets = offsets
        self.total = total

    def dim(self, g):
        return self.dims.get(self.grading.norm(g), 0)

    def flat(self, g, i):
        return self._offsets[self.grading.norm(g)] + i

    def unflat(self, idx):
        for g in self.degrees:
            off = self._offsets[g]
            if off <= idx < off + self.dims[g]:
                return g, idx - off
        raise IndexError(idx)

    def degree_of_flat(self, idx):
        return self.unflat(idx)[0]

    def label(self, idx):
        g, i = self.unflat(idx)
        return self.labels[g][i]

    def basis_vector(self, idx):
        z, o = self.field.zero, self.field.one
        return tuple(o if j == idx else z for j in range(self.total))

    def component(self, vec, g):
        """Slice of a flat vector lying in degree g."""
        g = self.grading.norm(g)
        if g not in self.dims:
            return ()
        off = self._offsets[g]
        return tuple(vec[off: off + self.dims[g]])

    def embed(self, g, comp):
        """Flat vector whose degree-g slice is comp and zero elsewhere."""
        z = self.field.zero
        vec = [z] * self.total
        comp = tuple(comp)
        if not comp:
            return tuple(vec)
        g = self.grading.norm(g)
        off = self._offsets[g]
        for i, x in enumerate(comp):
            vec[off + i] = x
        return tuple(vec)

    def is_homogeneous(self, vec, g):
        z = self.field.zero
        g = self.grading.norm(g)
        for idx, x in enumerate(vec):
            if x != z and self.unflat(idx)[0] != g:
                return False
        return True

    def __eq__(self, other):
        # labels are presentation only and do not enter equality
        return (
            isinstance(other, GradedSpace)
            and self.field == other.field
            and self.grading == other.grading
            and self.dims == other.dims
        )

    def __hash__(self):
        return hash((self.field, self.grading, tuple(sorted(self.dims.items()))))

    def __repr__(self):
        parts = ", ".join(f"{g}:{d}" for g, d in self.dims.items())
        return f"GradedSpace({{{parts}}})"


class GradedMap:
    """Homogeneous degree-k linear map given by per-degree blocks.

    Block at g maps the degree-g component of the source to the
    degree-(g+k) component of the target; absent blocks are zero.
    """

    __slots__ = ("source", "target", "degree", "blocks")

    def __init__(self, source, target, degree, blocks):
        grading = source.grading
        self.source = source
        self.target = target
        self.degree = grading.norm(degree)
        clean = {}
        for g, mat in blocks.items():
            g = grading.norm(g)
            tg = grading.add(g, degree)
            if mat.shape() != (target.dim(tg), source.dim(g)):
                raise DimensionError(
                    f"block at degree {g} has shape {mat.shape()}, "
                    f"expected {(target.dim(tg), source.dim(g))}"
                )
            if source.dim(g) and target.dim(tg) and not mat.is_zero():
                clean[g] = mat
        self.blocks = clean

    @staticmethod
    def zero(source, target, degree=0):
        return GradedMap(source, target, degree, {})

    @staticmethod
    def identity(space):
        return GradedMap(
            space,
            space,
            0,
            {g: Matrix.identity(space.field, space.dims[g]) for g in space.degrees},
        )

    def block(self, g):
        g = self.source.grading.norm(g)
        if g in self.blocks:
            return self.blocks[g]
        tg = self.source.grading.add(g, self.degree)
        return Matrix.zeros(self.source.field, self.target.dim(tg), self.source.dim(g))

    def is_zero(self):
        return not self.blocks

    def apply(self, vec):
        """Apply to a flat source vector, producing a flat target vector."""
        src, tgt = self.source, self.target
        z = src.field.zero
        out = [z] * tgt.total
        add = src.field.add
        for g, mat in self.blocks.items():
            comp = src.component(vec, g)
            if all(x == z for x in comp):
                continue
            res = mat.apply(comp)
            tg = src.grading.add(g, self.degree)
            off = tgt._offsets[tg]
            for i, x in enumerate(res):
                if x != z:
                    out[off + i] = add(out[off + i], x)
        return tuple(out)

    def compose(self, other):
        """self after other."""
        if other.target is not self.source and other.target != self.source:
            raise DimensionError("composition source/target mismatch")
        grading = self.source.grading
        deg = grading.add(self.degree, other.degree)
        blocks = {}
        for g in other.source.degrees:
            mid = grading.add(g, other.degree)
            b1 = other.block(g)
            b2 = self.block(mid)
            if b1.rows and b2.rows and other.source.dims[g]:
                prod = b2 @ b1
                if not prod.is_zero():
                    blocks[g] = prod
        return GradedMap(other.source, self.target, deg, blocks)

    def add_map(self, other):
        self._compatible(other)
        blocks = {}
        for g in set(self.blocks) | set(other.blocks):
            blocks[g] = self.block(g) + other.block(g)
        return GradedMap(self.source, self.target, self.degree, blocks)

    def sub_map(self, other):
        self._compatible(other)
        blocks = {}
        for g in set(self.blocks) | set(other.blocks):
            blocks[g] = self.block(g) - other.block(g)
        return GradedMap(self.source, self.target, self.degree, blocks)

    def neg_map(self):
        return GradedMap(
            self.source, self.target, self.degree, {g: -m for g, m in self.blocks.items()}
        )

    def scale(self, c):
        return GradedMap(
            self.source,
            self.target,
            self.degree,
            {g: m.scale(c) for g, m in self.blocks.items()},
        )

    def __eq__(self, other):
        if not isinstance(other, GradedMap):
            return NotImplemented
        if (
            self.source != other.source
            or self.target != other.target
            or self.degree != other.degree
        ):
            return False
        return self.sub_map(other).is_zero()

    def kernel_by_degree(self):
        return {g: self.block(g).kernel() for g in self.source.degrees}

    def image_by_degree(self):
        """Image subspaces indexed by target degree."""
        out = {}
        grading = self.source.grading
        for tg in self.target.degrees:
            cols = []
            for g in self.source.degrees:
                if grading.add(g, self.degree) == tg:
                    mat = self.block(g)
                    cols.extend(mat.col(j) for j in range(mat.cols))
            out[tg] = Subspace.from_vectors(self.source.field, self.target.dims[tg], cols)
        return out

    def rank(self):
        return sum(sp.dim() for sp in self.image_by_degree().values())

    def is_injective(self):
        return all(sp.dim() == 0 for sp in self.kernel_by_degree().values())

    def is_surjective(self):
        img = self.image_by_degree()
        return all(img[g].dim() == self.target.dims[g] for g in self.target.degrees)

    def _compatible(self, other):
        if (
            self.source != other.source
            or self.target != other.target
            or self.degree != other.degree
        ):
            raise DimensionError("maps are not compatible")

    def __repr__(self):
        return f"GradedMap(deg {self.degree}, {self.source!r} -> {self.target!r})"


class GradedAlgebra:
    """Finite-dimensional graded associative unital algebra by structure constants.

    ``mult[i][j]`` is the flat coefficient vector of (basis_i * basis_j);
    ``unit`` is the flat vector of 1.  The constructor checks shapes only;
    `validate_algebra` reports axiom violations.
    """

    __slots__ = ("space", "mult", "unit", "_act_cache")

    def __init__(self, space, mult, unit):
        n = space.total
        mult = tuple(tuple(tuple(v) for v in row) for row in mult)
        if len(mult) != n or any(len(row) != n for row in mult):
            raise DimensionError("multiplication table has wrong shape")
        for row in mult:
            for v in row:
                if len(v) != n:
                    raise DimensionError("structure-constant vector has wrong length")
        if len(unit) != n:
            raise DimensionError("unit vector has wrong length")
        self.space = space
        self.mult = mult
        self.unit = tuple(unit)
        self._act_cache = {}

    @property
    def field(self):
        return self.space.field

    @property
    def grading(self):
        return self.space.grading

    def basis_degree(self, i):
        return self.space.unflat(i)[0]

    def multiply(self, u, v):
        f = self.field
        z = f.zero
        n = self.space.total
        out = [z] * n
        for i, a in enumerate(u):
            if a == z:
                continue
            row = self.mult[i]
            for j, b in enumerate(v):
                if b == z:
                    continue
                coeff = f.mul(a, b)
                vec = row[j]
                for k, c in enumerate(vec):
                    if c != z:
                        out[k] = f.add(out[k], f.mul(coeff, c))
        return tuple(out)

    def left_mult_matrix(self, i):
        """Flat matrix of left multiplication by basis_i."""
        if i in self._act_cache:
            return self._act_cache[i]
        n = self.space.total
        cols = [self.mult[i][j] for j in range(n)]
        mat = Matrix.from_cols(self.field, cols, n)
        self._act_cache[i] = mat
        return mat

    def element_degree(self, vec):
        """Degree of a homogeneous element, or None for 0; raises if mixed."""
        z = self.field.zero
        deg = None
        for idx, x in enumerate(vec):
            if x != z:
                g = self.space.unflat(idx)[0]
                if deg is None:
                    deg = g
                elif deg != g:
                    raise DimensionError("element is not homogeneous")
        return deg

    def __eq__(self, other):
        return (
            isinstance(other, GradedAlgebra)
            and self.space == other.space
            and self.mult == other.mult
            and self.unit == other.unit
        )

    def __hash__(self):
        return hash((self.space, self.unit))

    def __repr__(self):
        return f"GradedAlgebra(dim {self.space.total} over {self.field.name})"


class GradedModule:
    """Graded left module over a GradedAlgebra, by action structure constants.

    ``action[i][j]`` is the flat coefficient vector of basis_i . m_j.
    """

    __slots__ = ("algebra", "space", "action", "_act_cache")

    def __init__(self, algebra, space, action):
        na, nm = algebra.space.total, space.total
        action = tuple(tuple(tuple(v) for v in row) for row in action)
        if len(action) != na or any(len(row) != nm for row in action):
            raise DimensionError("action table has wrong shape")
        for row in action:
            for v in row:
                if len(v) != nm:
                    raise DimensionError("action vector has wrong length")
        if space.field != algebra.field or space.grading != algebra.grading:
            raise DimensionError("module and algebra live over different bases")
        self.algebra = algebra
        self.space = space
        self.action = action
        self._act_cache = {}

    @property
    def field(self):
        return self.space.field

    @property
    def grading(self):
        return self.space.grading

    def act_matrix(self, i):
        """Flat matrix of the action of algebra basis_i."""
        if i in self._act_cache:
            return self._act_cache[i]
        nm = self.space.total
        mat = Matrix.from_cols(self.field, [self.action[i][j] for j in range(nm)], nm)
        self._act_cache[i] = mat
        return mat

    def act_block(self, i, g):
        """Action of basis_i restricted to the degree-g component."""
        gr = self.grading
        da = self.algebra.basis_degree(i)
        tg = gr.add(g, da)
        rows = self.space.dim(tg)
        cols = self.space.dim(g)
        if rows == 0 or cols == 0:
            return Matrix.zeros(self.field, rows, cols)
        mat = self.act_matrix(i)
        toff = self.space._offsets[gr.norm(tg)]
        soff = self.space._offsets[gr.norm(g)]
        return Matrix(
            self.field,
            [[mat.data[toff + r][soff + c] for c in range(cols)] for r in range(rows)],
            cols,
        )

    def act_element(self, vec, mvec):
        """Action of an algebra element (flat vec) on a module element."""
        f = self.field
        z = f.zero
        out = [z] * self.space.total
        for i, a in enumerate(vec):
            if a == z:
                continue
            row = self.action[i]
            for j, b in enumerate(mvec):
                if b == z:
                    continue
                coeff = f.mul(a, b)
                for k, c in enumerate(row[j]):
                    if c != z:
                        out[k] = f.add(out[k], f.mul(coeff, c))
        return tuple(out)

    def act_map(self, vec):
        """Left action of a homogeneous algebra element as a GradedMap."""
        deg = self.algebra.element_degree(vec)
        if deg is None:
            return GradedMap.zero(self.space, self.space, 0)
        f = self.field
        z = f.zero
        blocks = {}
        for g in self.space.degrees:
            cols = []
            for j in range(self.space.dims[g]):
                flat = self.space.flat(g, j)
                col = [z] * self.space.total
                for i, a in enumerate(vec):
                    if a == z:
                        continue
                    for k, c in enumerate(self.action[i][flat]):
                        if c != z:
                            col[k] = f.add(col[k], f.mul(a, c))
                cols.append(self.space.component(col, self.grading.add(g, deg)))
            tg = self.grading.add(g, deg)
            blocks[g] = Matrix.from_cols(f, cols, self.space.dim(g)) if cols else Matrix.zeros(
                f, self.space.dim(tg), 0
            )
        return GradedMap(self.space, self.space, deg, blocks)

    def total_dim(self):
        return self.space.total

    def __eq__(self, other):
        return (
            isinstance(other, GradedModule)
            and self.algebra == other.algebra
            and self.space == other.space
            and self.action == other.action
        )

    def __hash__(self):
        return hash((self.algebra, self.space))

    def __repr__(self):
        return f"GradedModule(dim {self.space.total} over algebra dim {self.algebra.space.total})"


# ---------------------------------------------------------------------------
# validation


def validate_algebra(alg):
    """List of violated axiom instances; empty means the algebra is valid."""
    out = []
    sp = alg.space
    f = alg.field
    z = f.zero
    n = sp.total
    # grading: |b_i b_j| = |b_i| + |b_j|
    for i in range(n):
        di = alg.basis_degree(i)
        for j in range(n):
            dj = alg.basis_degree(j)
            target = sp.grading.add(di, dj)
            for k, c in enumerate(alg.mult[i][j]):
                if c != z and sp.unflat(k)[0] != target:
                    out.append(
                        f"grading: ({sp.label(i)})*({sp.label(j)}) hits degree "
                        f"{sp.unflat(k)[0]} != {target}"
                    )
                    break
    # unit: homogeneous of degree 0 and two-sided identity
    for k, c in enumerate(alg.unit):
        if c != z and sp.unflat(k)[0] != sp.grading.norm(0):
            out.append("unit: not concentrated in degree 0")
            break
    for j in range(n):
        ej = sp.basis_vector(j)
        if alg.multiply(alg.unit, ej) != ej:
            out.append(f"unit: 1*({sp.label(j)}) != {sp.label(j)}")
        if alg.multiply(ej, alg.unit) != ej:
            out.append(f"unit: ({sp.label(j)})*1 != {sp.label(j)}")
    # associativity on all basis triples
    for i in range(n):
        ei = sp.basis_vector(i)
        for j in range(n):
            prod_ij = alg.mult[i][j]
            ej = sp.basis_vector(j)
            for k in range(n):
                ek = sp.basis_vector(k)
                left = alg.multiply(prod_ij, ek)
                right = alg.multiply(ei, alg.multiply(ej, ek))
                if left != right:
                    out.append(
                        f"associativity: ({sp.label(i)}*{sp.label(j)})*{sp.label(k)} "
                        f"!= {sp.label(i)}*({sp.label(j)}*{sp.label(k)})"
                    )
    return out


def validate_module(mod):
    """List of violated left-module axiom instances; empty means valid."""
    out = []
    alg, sp = mod.algebra, mod.space
    asp = alg.space
    f = mod.field
    z = f.zero
    # grading: |b_i . m_j| = |b_i| + |m_j|
    for i in range(asp.total):
        di = alg.basis_degree(i)
        for j in range(sp.total):
            dj = sp.unflat(j)[0]
            target = sp.grading.add(di, dj)
            for k, c in enumerate(mod.action[i][j]):
                if c != z and sp.unflat(k)[0] != target:
                    out.append(
                        f"grading: ({asp.label(i)}).({sp.label(j)}) hits degree "
                        f"{sp.unflat(k)[0]} != {target}"
                    )
                    break
    # unit acts as identity
    for j in range(sp.total):
        ej = sp.basis_vector(j)
        if mod.act_element(alg.unit, ej) != ej:
            out.append(f"unit action: 1.({sp.label(j)}) != {sp.label(j)}")
    # associativity r(s m) = (rs) m on basis triples
    for i in range(asp.total):
        ei = asp.basis_vector(i)
        for j in range(asp.total):
            ej = asp.basis_vector(j)
            rs = alg.multiply(ei, ej)
            for k in range(sp.total):
                mk = sp.basis_vector(k)
                left = mod.act_element(ei, mod.act_element(ej, mk))
                right = mod.act_element(rs, mk)
                if left != right:
                    out.append(
                        f"action associativity: {asp.label(i)}.({asp.label(j)}.{sp.label(k)}) "
                        f"!= ({asp.label(i)}*{asp.label(j)}).{sp.label(k)}"
                    )
    return out


def sign_rule_violations(mod_src, mod_tgt, gmap):
    """Violations of f(r z) = (-1)^{par|f| par|r|} r f(z) on basis pairs."""
    out = []
    alg = mod_src.algebra
    gr = mod_src.grading
    k = gmap.degree
    for i in range(alg.space.total):
        di = alg.basis_degree(i)
        s = gr.sign(k, di)
        for j in range(mod_src.space.total):
            zj = mod_src.space.basis_vector(j)
            lhs = gmap.apply(mod_src.act_element(alg.space.basis_vector(i), zj))
            rhs = mod_tgt.act_element(alg.space.basis_vector(i), gmap.apply(zj))
            if s < 0:
                rhs = tuple(mod_tgt.field.neg(x) for x in rhs)
            if lhs != rhs:
                out.append(
                    f"sign rule: f({alg.space.label(i)}.{mod_src.space.label(j)}) "
                    f"!= (-1)^(|f||r|) {alg.space.label(i)}.f({mod_src.space.label(j)})"
                )
    return out


# ---------------------------------------------------------------------------
# Hom spaces


class HomSpace:
    """Canonical basis of the degree-k sign-rule Hom space Hom^k(L, M).

    Coordinates enumerate block entries (source degree ascending, then
    row-major inside each block); `space` is the canonical Subspace of
    sign-rule maps inside that coordinate space.
    """

    __slots__ = ("source", "target", "degree", "coords", "space", "_maps")

    def __init__(self, source, target, degree, coords, space):
        self.source = source
        self.target = target
        self.degree = degree
        self.coords = coords
        self.space = space
        self._maps = None

    def dim(self):
        return self.space.dim()

    def ambient_dim(self):
        return len(self.coords)

    def basis_maps(self):
        if self._maps is None:
            self._maps = [self.map_from_coords(v) for v in self.space.basis.data]
        return self._maps

    def map_from_coords(self, cvec):
        gr = self.source.grading
        f = self.source.field
        blocks = {}
        for pos, (g, i, j) in enumerate(self.coords):
            x = cvec[pos]
            if x == f.zero:
                continue
            tg = gr.add(g, self.degree)
            if g not in blocks:
                blocks[g] = [
                    [f.zero] * self.source.dim(g) for _ in range(self.target.dim(tg))
                ]
            blocks[g][i][j] = x
        return GradedMap(
            self.source,
            self.target,
            self.degree,
            {g: Matrix(f, rows, self.source.dim(g)) for g, rows in blocks.items()},
        )

    def coords_of(self, gmap):
        out = []
        for g, i, j in self.coords:
            out.append(gmap.block(g).entry(i, j))
        return tuple(out)

    def express(self, gmap):
        """Coordinates of gmap in the canonical basis, or None if outside."""
        return self.space.reduce(self.coords_of(gmap))


def _hom_coords(source, target, degree):
    gr = source.grading
    coords = []
    for g in source.degrees:
        tg = gr.add(g, degree)
        dt, ds = target.dim(tg), source.dims[g]
        for i in range(dt):
            for j in range(ds):
                coords.append((g, i, j))
    return coords


def hom_graded(mod_l, mod_m, degree):
    """Subspace of degree-`degree` sign-rule module maps L -> M."""
    if mod_l.algebra != mod_m.algebra:
        raise DimensionError("modules over different algebras")
    alg = mod_l.algebra
    gr = mod_l.grading
    degree = gr.norm(degree)
    src, tgt = mod_l.space, mod_m.space
    coords = _hom_coords(src, tgt, degree)
    ncoords = len(coords)
    f = src.field
    z = f.zero
    pos = {c: p for p, c in enumerate(coords)}
    rows = []
    for b in range(alg.space.total):
        db = alg.basis_degree(b)
        s = gr.sign(degree, db)
        for g in src.degrees:
            bl_l = mod_l.act_block(b, g)                     # L_g -> L_{g+db}
            g2 = gr.add(g, db)
            bl_m = mod_m.act_block(b, gr.add(g, degree))     # M_{g+k} -> M_{g+db+k}
            out_deg = gr.add(g2, degree)
            n_out = tgt.dim(out_deg)
            if n_out == 0:
                continue
            ds = src.dims[g]
            # F_{g+db} @ bl_l == s * bl_m @ F_g   (columns indexed by j)
            for jcol in range(ds):
                for irow in range(n_out):
                    row = [z] * ncoords
                    nontrivial = False
                    if src.dim(g2):
                        for m in range(src.dim(g2)):
                            c = bl_l.entry(m, jcol)
                            if c != z:
                                row[pos[(g2, irow, m)]] = f.add(row[pos[(g2, irow, m)]], c)
                                nontrivial = True
                    if tgt.dim(gr.add(g, degree)):
                        for m in range(tgt.dim(gr.add(g, degree))):
                            c = bl_m.entry(irow, m)
                            if c != z:
                                c = f.neg(c) if s > 0 else c
                                p = pos[(g, m, jcol)]
                                row[p] = f.add(row[p], c)
                                nontrivial = True
                    if nontrivial:
                        rows.append(row)
    if rows:
        constraint = Matrix(f, rows, ncoords)
        space = constraint.kernel()
    else:
        space = Subspace.full(f, ncoords)
    return HomSpace(src, tgt, degree, coords, space)


def hom_dim(mod_l, mod_m, degree):
    return hom_graded(mod_l, mod_m, degree).dim()


# ---------------------------------------------------------------------------
# constructions on graded modules


def zero_module(alg):
    sp = GradedSpace(alg.field, alg.grading, {})
    return GradedModule(alg, sp, [[] for _ in range(alg.space.total)])


def regular_module(alg):
    """The algebra as a left module over itself."""
    n = alg.space.total
    action = [[alg.mult[i][j] for j in range(n)] for i in range(n)]
    return GradedModule(alg, alg.space, action)


def shift_flat_permutation(old_space, new_space, i):
    """old flat index -> new flat index under the degree shift g -> g - i.

    Within-degree positions are preserved; for Z/2 an odd shift swaps the
    two degree components, so the flat layout genuinely permutes.
    """
    gr = old_space.grading
    perm = [None] * old_space.total
    for g in old_space.degrees:
        gp = gr.norm(g - i)
        for t in range(old_space.dims[g]):
            perm[old_space.flat(g, t)] = new_space.flat(gp, t)
    return perm


def shifted_space(space, i):
    gr = space.grading
    dims = {gr.norm(g - i): space.dims[g] for g in space.degrees}
    labels = {gr.norm(g - i): space.labels[g] for g in space.degrees}
    return GradedSpace(space.field, gr, dims, labels)


def shift_module(mod, i):
    """Shift M[i]: degree-g part is M^{g+i}; action twisted by (-1)^{i|r|}."""
    gr = mod.grading
    if (gr.kind == "z2" and i % 2 == 0) or i == 0:
        return mod
    old = mod.space
    sp = shifted_space(old, i)
    perm = shift_flat_permutation(old, sp, i)
    f = mod.field
    z = f.zero
    na = mod.algebra.space.total
    action = [[None] * sp.total for _ in range(na)]
    for b in range(na):
        db = mod.algebra.basis_degree(b)
        s = gr.sign(i, db)
        for j in range(old.total):
            v = mod.action[b][j]
            vec = [z] * sp.total
            for k, c in enumerate(v):
                if c != z:
                    vec[perm[k]] = f.neg(c) if s < 0 else c
            action[b][perm[j]] = tuple(vec)
    return GradedModule(mod.algebra, sp, action)


def shift_graded_map(gmap, new_source, new_target, i_src, i_tgt):
    """The same grids viewed between shifted spaces.

    Block keyed at old source degree g moves to key g - i_src; the degree
    changes by i_src - i_tgt.  No signs: the canonical shift isomorphisms
    are identity grids.
    """
    gr = gmap.source.grading
    new_degree = gr.norm(gmap.degree + i_src - i_tgt)
    blocks = {}
    for g in gmap.source.degrees:
        mat = gmap.block(g)
        if mat.rows and mat.cols:
            blocks[gr.norm(g - i_src)] = mat
    return GradedMap(new_source, new_target, new_degree, blocks)


def direct_sum_modules(mods, tags=None):
    """Direct sum with block-diagonal action; labels get per-summand tags."""
    if not mods:
        raise DimensionError("empty direct sum needs an algebra; use zero_module")
    alg = mods[0].algebra
    gr = alg.grading
    f = alg.field
    if any(m.algebra != alg for m in mods):
        raise DimensionError("summands over different algebras")
    if tags is None:
        tags = [f"s{t}." for t in range(len(mods))]
    dims = {}
    labels = {}
    for m, tag in zip(mods, tags):
        for g in m.space.degrees:
            dims[g] = dims.get(g, 0) + m.space.dims[g]
            labels.setdefault(g, [])
            labels[g].extend(tag + l for l in m.space.labels[g])
    sp = GradedSpace(f, gr, dims, {g: tuple(ls) for g, ls in labels.items()})
    # embedding of each summand's flat indices
    offsets = []
    seen = {g: 0 for g in sp.degrees}
    for m in mods:
        emb = []
        for idx in range(m.space.total):
            g, _ = m.space.unflat(idx)
            emb.append(sp._offsets[g] + seen[g] + (idx - m.space._offsets[g]))
        for g in m.space.degrees:
            seen[g] += m.space.dims[g]
        offsets.append(emb)
    z = f.zero
    na = alg.space.total
    action = [[None] * sp.total for _ in range(na)]
    for b in range(na):
        for mi, m in enumerate(mods):
            emb = offsets[mi]
            for j in range(m.space.total):
                vec = [z] * sp.total
                for k, c in enumerate(m.action[b][j]):
                    if c != z:
                        vec[emb[k]] = c
                action[b][emb[j]] = tuple(vec)
    embeds = []
    projs = []
    for mi, m in enumerate(mods):
        emb = offsets[mi]
        inc_blocks = {}
        prj_blocks = {}
        for g in m.space.degrees:
            rows = []
            for idx in range(m.space.dims[g]):
                flat = emb[m.space.flat(g, idx)]
                rows.append(sp.basis_vector(flat))
            cols = [sp.component(r, g) for r in rows]
            inc_blocks[g] = Matrix.from_cols(f, cols, m.space.dims[g])
        for g in sp.degrees:
            if m.space.dim(g):
                mat = []
                for idx in range(m.space.dims[g]):
                    flat = emb[m.space.flat(g, idx)]
                    row = [z] * sp.dims[g]
                    row[flat - sp._offsets[g]] = f.one
                    mat.append(row)
                prj_blocks[g] = Matrix(f, mat, sp.dims[g])
        embeds.append(inc_blocks)
        projs.append(prj_blocks)
    total = GradedModule(alg, sp, action)
    incl_maps = [
        GradedMap(m.space, sp, 0, blocks) for m, blocks in zip(mods, embeds)
    ]
    proj_maps = [
        GradedMap(sp, m.space, 0, blocks) for m, blocks in zip(mods, projs)
    ]
    return total, incl_maps, proj_maps


def submodule(mod, subspaces, tag="k"):
    """Module structure on action-stable per-degree subspaces.

    Returns (K, incl).  Raises AxiomError if the subspaces are not stable
    under the action.
    """
    alg = mod.algebra
    gr = mod.grading
    f = mod.field
    sp = mod.space
    bases = {}
    for g in sp.degrees:
        sub = subspaces.get(g)
        if sub is None:
            sub = Subspace.zero(f, sp.dims[g])
        bases[g] = sub
    dims = {g: bases[g].dim() for g in sp.degrees if bases[g].dim()}
    labels = {
        g: tuple(f"{tag}{g}_{i}" for i in range(d)) for g, d in dims.items()
    }
    ksp = GradedSpace(f, gr, dims, labels)
    na = alg.space.total
    action = [[None] * ksp.total for _ in range(na)]
    for b in range(na):
        db = alg.basis_degree(b)
        for g in ksp.degrees:
            tg = gr.add(g, db)
            blk = mod.act_block(b, g)
            for j in range(ksp.dims[g]):
                v = bases[g].basis.data[j]
                w = blk.apply(v)
                if ksp.dim(tg) == 0:
                    if any(x != f.zero for x in w):
                        raise AxiomError(
                            "submodule", [f"subspace not action-stable at degree {g}"]
                        )
                    coords = ()
                else:
                    coords = bases[gr.norm(tg)].reduce(w)
                    if coords is None:
                        raise AxiomError(
                            "submodule", [f"subspace not action-stable at degree {g}"]
                        )
                action[b][ksp.flat(g, j)] = ksp.embed(tg, coords)
    incl_blocks = {}
    for g in ksp.degrees:
        incl_blocks[g] = bases[g].basis.transpose()
    kmod = GradedModule(alg, ksp, action)
    incl = GradedMap(ksp, sp, 0, incl_blocks)
    return kmod, incl


def kernel_module(mod_src, gmap, tag="k"):
    """Kernel of a degree-0 module map as a module with its inclusion."""
    if gmap.degree != mod_src.grading.norm(0):
        raise DimensionError("kernel_module expects a degree-0 map")
    subs = gmap.kernel_by_degree()
    return submodule(mod_src, subs, tag=tag)


def image_subspaces(gmap):
    return gmap.image_by_degree()


def quotient_module(mod, subspaces, tag="q"):
    """Quotient by action-stable subspaces; reps chosen greedily per degree.

    Returns (Q, proj).
    """
    alg = mod.algebra
    gr = mod.grading
    f = mod.field
    sp = mod.space
    reps = {}
    proj_mats = {}
    for g in sp.degrees:
        sub = subspaces.get(g) or Subspace.zero(f, sp.dims[g])
        rep_vecs = quotient_basis(sp.dims[g], sub)
        reps[g] = rep_vecs
        # projection: coordinates in (sub basis + reps), keep rep part
        basis_rows = list(sub.basis.data) + list(rep_vecs)
        if basis_rows:
            trans = Matrix(f, basis_rows, sp.dims[g]).transpose().inverse()
            proj_mats[g] = Matrix(
                f, trans.data[sub.dim():], sp.dims[g]
            )
        else:
            proj_mats[g] = Matrix.zeros(f, 0, sp.dims[g])
    dims = {g: len(reps[g]) for g in sp.degrees if reps[g]}
    labels = {g: tuple(f"{tag}{g}_{i}" for i in range(d)) for g, d in dims.items()}
    qsp = GradedSpace(f, gr, dims, labels)
    na = alg.space.total
    action = [[None] * qsp.total for _ in range(na)]
    for b in range(na):
        db = alg.basis_degree(b)
        for g in qsp.degrees:
            tg = gr.add(g, db)
            blk = mod.act_block(b, g)
            for j in range(qsp.dims[g]):
                w = blk.apply(reps[g][j])
                comp = proj_mats[gr.norm(tg)].apply(w) if qsp.dim(tg) else ()
                action[b][qsp.flat(g, j)] = qsp.embed(tg, comp)
    proj_blocks = {g: proj_mats[g] for g in sp.degrees if qsp.dim(g)}
    qmod = GradedModule(alg, qsp, action)
    proj = GradedMap(sp, qsp, 0, proj_blocks)
    violations = validate_module(qmod)
    if violations:
        raise AxiomError("quotient by non-stable subspace", violations)
    return qmod, proj


# ---------------------------------------------------------------------------
# free covers and Ext


@dataclass
class FreeCover:
    """Free module A^{(gens)} with bookkeeping of its free structure.

    decomp[flat] = (algebra basis index, generator index) such that the
    flat basis element equals basis_b . e_gen; gen_flats[i] is the flat
    index of 1 . e_i (requires the algebra unit to be a basis vector).
    """

    module: GradedModule
    gen_degrees: list
    gen_flats: list
    decomp: list


def free_module(alg, gen_degrees, tag="f"):
    """Free left module on homogeneous generators of the given degrees."""
    gr = alg.grading
    asp = alg.space
    entries = []  # (degree, gen idx, algebra basis idx)
    for gi, gd in enumerate(gen_degrees):
        for b in range(asp.total):
            entries.append((gr.add(asp.unflat(b)[0], gd), gi, b))
    entries.sort(key=lambda t: (t[0], t[1], t[2]))
    dims = {}
    labels = {}
    flat_of = {}
    for deg, gi, b in entries:
        dims[deg] = dims.get(deg, 0) + 1
        labels.setdefault(deg, [])
        labels[deg].append(f"{tag}{gi}.{asp.label(b)}")
    sp = GradedSpace(alg.field, gr, dims, {g: tuple(ls) for g, ls in labels.items()})
    counter = {g: 0 for g in sp.degrees}
    decomp = [None] * sp.total
    for deg, gi, b in entries:
        flat = sp._offsets[deg] + counter[deg]
        counter[deg] += 1
        flat_of[(gi, b)] = flat
        decomp[flat] = (b, gi)
    f = alg.field
    z = f.zero
    action = [[None] * sp.total for _ in range(asp.total)]
    for c in range(asp.total):
        for flat in range(sp.total):
            b, gi = decomp[flat]
            prod = alg.mult[c][b]
            vec = [z] * sp.total
            for k, coeff in enumerate(prod):
                if coeff != z:
                    vec[flat_of[(gi, k)]] = coeff
            action[c][flat] = tuple(vec)
    mod = GradedModule(alg, sp, action)
    # generator flats: decompose the unit (needs unit to be a single basis vector)
    unit_idx = [k for k, c in enumerate(alg.unit) if c != z]
    gen_flats = []
    if len(unit_idx) == 1 and alg.unit[unit_idx[0]] == f.one:
        gen_flats = [flat_of[(gi, unit_idx[0])] for gi in range(len(gen_degrees))]
    else:
        # generic unit: generator i is the unit combination
        gen_flats = None
    return FreeCover(mod, list(gen_degrees), gen_flats, decomp)


def free_cover(mod, tag="f"):
    """Surjection from the free module on the full basis of `mod`."""
    sp = mod.space
    gen_degrees = [sp.unflat(j)[0] for j in range(sp.total)]
    cover = free_module(mod.algebra, gen_degrees, tag=tag)
    f = mod.field
    cols = [None] * cover.module.space.total
    for flat in range(cover.module.space.total):
        b, gi = cover.decomp[flat]
        cols[flat] = mod.act_element(mod.algebra.space.basis_vector(b), sp.basis_vector(gi))
    blocks = {}
    for g in cover.module.space.degrees:
        sub = []
        for i in range(cover.module.space.dims[g]):
            flat = cover.module.space.flat(g, i)
            sub.append(sp.component(cols[flat], g))
        blocks[g] = Matrix.from_cols(f, sub, cover.module.space.dims[g]) if sub else None
    blocks = {g: m for g, m in blocks.items() if m is not None}
    pi = GradedMap(cover.module.space, sp, 0, blocks)
    return cover, pi


class FreeHomBasis:
    """Degree-0 module maps out of a free module, by generator images.

    Coordinates are pairs (generator index, target flat index) with equal
    degrees, ordered by generator then target index.
    """

    def __init__(self, cover, target_mod):
        self.cover = cover
        self.target = target_mod
        tsp = target_mod.space
        coords = []
        for gi, gd in enumerate(cover.gen_degrees):
            gd = tsp.grading.norm(gd) if tsp.grading.kind == "z2" else gd
            d = tsp.dim(gd)
            off = tsp._offsets.get(tsp.grading.norm(gd))
            for t in range(d):
                coords.append((gi, off + t))
        self.coords = coords

    def dim(self):
        return len(self.coords)

    def evaluation_matrix(self, vec):
        """Matrix sending hom-coordinates to the value on `vec` (flat in target)."""
        tgt = self.target
        f = tgt.field
        z = f.zero
        cols = []
        by_gen = {}
        for flat, x in enumerate(vec):
            if x == z:
                continue
            b, gi = self.cover.decomp[flat]
            by_gen.setdefault(gi, []).append((b, x))
        for gi, tflat in self.coords:
            col = [z] * tgt.space.total
            for b, x in by_gen.get(gi, ()):
                acted = tgt.act_matrix(b).col(tflat)
                for k, c in enumerate(acted):
                    if c != z:
                        col[k] = f.add(col[k], f.mul(x, c))
            cols.append(tuple(col))
        if not cols:
            return Matrix.zeros(f, tgt.space.total, 0)
        return Matrix.from_cols(f, cols)

    def map_from_coords(self, cvec):
        """The module map with the given generator images, as a GradedMap."""
        tgt = self.target
        f = tgt.field
        z = f.zero
        images = {}
        for (gi, tflat), x in zip(self.coords, cvec):
            if x != z:
                images.setdefault(gi, {})[tflat] = x
        cols = []
        src_sp = self.cover.module.space
        for flat in range(src_sp.total):
            b, gi = self.cover.decomp[flat]
            col = [z] * tgt.space.total
            img = images.get(gi)
            if img:
                for tflat, x in img.items():
                    acted = tgt.act_matrix(b).col(tflat)
                    for k, c in enumerate(acted):
                        if c != z:
                            col[k] = f.add(col[k], f.mul(x, c))
            cols.append(col)
        blocks = {}
        for g in src_sp.degrees:
            sub = [
                tgt.space.component(cols[src_sp.flat(g, i)], g)
                for i in range(src_sp.dims[g])
            ]
            blocks[g] = Matrix.from_cols(f, sub, src_sp.dims[g])
        return GradedMap(src_sp, tgt.space, 0, blocks)


def _kernel_flat_vectors(pi):
    """Flat vectors of the source spanning ker(pi), one list, degree-sorted."""
    src = pi.source
    out = []
    for g in src.degrees:
        for v in pi.block(g).kernel().basis.data:
            out.append(src.embed(g, v))
    return out


def ext_graded(mod_x, mod_y, n, tag="f"):
    """dim Ext^n between graded modules, via a non-minimal free resolution.

    Only F_0 .. F_n are materialised; the cocycle condition at stage n
    uses ker(d_n) directly instead of F_{n+1}.
    """
    if n < 0:
        raise ValueError("Ext degree must be nonnegative")
    if mod_x.algebra != mod_y.algebra:
        raise DimensionError("modules over different algebras")
    if mod_x.space.total == 0 or mod_y.space.total == 0:
        return 0
    fld = mod_y.field
    covers = []
    last_kernel_flat = None   # ker(d_step) as flat vectors in F_step
    boundary_gen_images = []  # boundary_gen_images[i]: F_{i+1} generators in F_i flats
    current = mod_x
    embed = None              # basis of `current` as flat vectors in F_{step-1}
    for step in range(n + 1):
        cover, pi = free_cover(current, tag=f"{tag}{step}_")
        covers.append(cover)
        if step >= 1:
            images = []
            for flat in cover.gen_flats:
                v = pi.apply(cover.module.space.basis_vector(flat))
                images.append(_combine_flat(fld, v, embed))
            boundary_gen_images.append(images)
        if step < n:
            kmod, incl = kernel_module(cover.module, pi, tag="k")
            embed = [
                incl.apply(kmod.space.basis_vector(j)) for j in range(kmod.space.total)
            ]
            current = kmod
        else:
            last_kernel_flat = _kernel_flat_vectors(pi)
    hom_n = FreeHomBasis(covers[n], mod_y)
    nc = hom_n.dim()
    if nc == 0:
        return 0
    cond_rows = []
    for v in last_kernel_flat:
        cond_rows.extend(hom_n.evaluation_matrix(v).data)
    zspace = Matrix(fld, cond_rows, nc).kernel() if cond_rows else Subspace.full(fld, nc)
    if n == 0:
        return zspace.dim()
    hom_prev = FreeHomBasis(covers[n - 1], mod_y)
    bvecs = []
    for cpos in range(hom_prev.dim()):
        cvec = [fld.zero] * hom_prev.dim()
        cvec[cpos] = fld.one
        gmap = hom_prev.map_from_coords(cvec)
        coords = [
            gmap.apply(boundary_gen_images[n - 1][gi])[tflat]
            for gi, tflat in hom_n.coords
        ]
        bvecs.append(coords)
    bspace = Subspace.from_vectors(fld, nc, bvecs)
    # coboundaries automatically satisfy the cocycle condition
    return zspace.dim() - bspace.dim()


def _combine_flat(fld, coeffs, embed):
    """Linear combination sum coeffs[j] * embed[j] of flat vectors."""
    if embed is None:
        return coeffs
    if not embed:
        return ()
    out = [fld.zero] * len(embed[0])
    for coeff, amb in zip(coeffs, embed):
        if coeff != fld.zero:
            out = [fld.add(o, fld.mul(coeff, a)) for o, a in zip(out, amb)]
    return tuple(out)


def is_projective_graded(mod):
    """True iff the canonical free cover splits (linear feasibility test)."""
    if mod.space.total == 0:
        return True
    cover, pi = free_cover(mod, tag="p")
    sect = hom_graded(mod, cover.module, 0)
    if sect.dim() == 0:
        return False
    f = mod.field
    idm = GradedMap.identity(mod.space)
    # pi o s = id, affine-linear in the coordinates of s
    cols = []
    id_coords = []
    idspace = _hom_coords(mod.space, mod.space, mod.grading.norm(0))
    for bas in sect.basis_maps():
        comp = pi.compose(bas)
        cols.append([comp.block(g).entry(i, j) for (g, i, j) in idspace])
    for g, i, j in idspace:
        id_coords.append(idm.block(g).entry(i, j))
    mat = Matrix.from_cols(f, cols, len(idspace)) if cols else Matrix.zeros(f, len(idspace), 0)
    return mat.solve(tuple(id_coords)) is not None


def opposite_algebra(alg):
    """Graded opposite: a *op b = (-1)^{|a||b|} b a."""
    gr = alg.grading
    f = alg.field
    n = alg.space.total
    mult = []
    for i in range(n):
        di = alg.basis_degree(i)
        row = []
        for j in range(n):
            dj = alg.basis_degree(j)
            v = alg.mult[j][i]
            if gr.sign(di, dj) < 0:
                v = tuple(f.neg(x) for x in v)
            row.append(v)
        mult.append(row)
    return GradedAlgebra(alg.space, mult, alg.unit)


def dual_module(mod, opp=None):
    """Degree-reversed dual as a left module over the opposite algebra.

    (M*)^g = (M^{-g})^*, with (a . phi)(m) = (-1)^{|a||phi|} phi(a m).
    """
    alg = mod.algebra
    gr = mod.grading
    f = mod.field
    if opp is None:
        opp = opposite_algebra(alg)
    sp = mod.space
    dims = {gr.neg(g): sp.dims[g] for g in sp.degrees}
    labels = {gr.neg(g): tuple(l + "*" for l in sp.labels[g]) for g in sp.degrees}
    dsp = GradedSpace(f, gr, dims, labels)
    # dual flat index of (g, i) is (−g, i)
    dual_flat = {}
    for g in sp.degrees:
        for i in range(sp.dims[g]):
            dual_flat[sp.flat(g, i)] = dsp.flat(gr.neg(g), i)
    na = alg.space.total
    z = f.zero
    action = [[None] * dsp.total for _ in range(na)]
    for b in range(na):
        db = alg.basis_degree(b)
        act = mod.act_matrix(b)
        for j in range(sp.total):
            gj = sp.unflat(j)[0]
            phi_deg = gr.neg(gj)
            s = gr.sign(db, phi_deg)
            vec = [z] * dsp.total
            # (b . m_j*) = s * sum_k act[j][k] m_k*
            for k in range(sp.total):
                c = act.data[j][k]
                if c != z:
                    vec[dual_flat[k]] = f.neg(c) if s < 0 else c
            action[b][dual_flat[j]] = tuple(vec)
    return GradedModule(opp, dsp, action)


def is_injective_graded(mod):
    """Injectivity via projectivity of the degree-reversed dual over A^op."""
    return is_projective_graded(dual_module(mod))
