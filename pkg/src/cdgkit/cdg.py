"""CDG-rings, CDG-modules and their Hom complexes.

A CDG-ring is a graded algebra with an odd degree-1 derivation d and a
curvature element h of degree 2 satisfying d^2 = [h, -] and d(h) = 0.
A left CDG-module carries a degree-1 differential with the signed
Leibniz rule and d_M^2 = h . (-).  The differential of the Hom complex
is d(f) = d_M f - (-1)^{|f|} f d_L; its square vanishes exactly, the
curvature contributions cancelling.

Constructors validate eagerly: invalid data raises AxiomError naming
the violated axiom instances, and later operations assume validity.
"""

from __future__ import annotations

from .graded import (
    AxiomError,
    GradedMap,
    GradedModule,
    GradedSpace,
    direct_sum_modules,
    hom_graded,
    quotient_module,
    submodule,
)
from .linalg import DimensionError, Matrix, Subspace, complement_within


class RingMismatch(ValueError):
    """Operation applied to modules over different CDG-rings."""


def ring_violations(alg, d, h):
    """Violated CDG-ring axioms for (algebra, d, h); empty list means valid."""
    out = []
    gr = alg.grading
    sp = alg.space
    f = alg.field
    if d.degree != gr.norm(1):
        out.append(f"derivation degree: d has degree {d.degree}, expected 1")
        return out
    if not sp.is_homogeneous(h, gr.norm(2)):
        out.append("curvature degree: h is not concentrated in degree 2")
    # Leibniz on all basis pairs
    for i in range(sp.total):
        ei = sp.basis_vector(i)
        di = d.apply(ei)
        si = gr.par(sp.unflat(i)[0])
        for j in range(sp.total):
            ej = sp.basis_vector(j)
            lhs = d.apply(alg.multiply(ei, ej))
            rhs_a = alg.multiply(di, ej)
            rhs_b = alg.multiply(ei, d.apply(ej))
            if si:
                rhs_b = tuple(f.neg(x) for x in rhs_b)
            rhs = tuple(f.add(a, b) for a, b in zip(rhs_a, rhs_b))
            if lhs != rhs:
                out.append(
                    f"Leibniz: d({sp.label(i)}*{sp.label(j)}) != "
                    f"d({sp.label(i)})*{sp.label(j)} + (-1)^|{sp.label(i)}| {sp.label(i)}*d({sp.label(j)})"
                )
    # d^2 = [h, -]
    for j in range(sp.total):
        ej = sp.basis_vector(j)
        lhs = d.apply(d.apply(ej))
        rhs = tuple(
            f.sub(a, b)
            for a, b in zip(alg.multiply(h, ej), alg.multiply(ej, h))
        )
        if lhs != rhs:
            out.append(f"curvature: d^2({sp.label(j)}) != h*{sp.label(j)} - {sp.label(j)}*h")
    # d(h) = 0
    if any(x != f.zero for x in d.apply(h)):
        out.append("curvature: d(h) != 0")
    return out


class CdgRing:
    """Graded algebra with odd derivation d and curvature element h."""

    __slots__ = ("algebra", "d", "h", "name")

    def __init__(self, algebra, d, h, name="R"):
        violations = ring_violations(algebra, d, h)
        if violations:
            raise AxiomError(f"CDG-ring {name}", violations)
        self.algebra = algebra
        self.d = d
        self.h = tuple(h)
        self.name = name

    @property
    def field(self):
        return self.algebra.field

    @property
    def grading(self):
        return self.algebra.grading

    def __eq__(self, other):
        return (
            isinstance(other, CdgRing)
            and self.algebra == other.algebra
            and self.d == other.d
            and self.h == other.h
        )

    def __hash__(self):
        return hash((self.algebra, self.h))

    def __repr__(self):
        return f"CdgRing({self.name}, dim {self.algebra.space.total})"


def module_violations(ring, gmod, d):
    """Violated left CDG-module axioms; empty list means valid."""
    out = []
    alg = ring.algebra
    gr = alg.grading
    sp = gmod.space
    f = alg.field
    if gmod.algebra != alg:
        return ["module is not over the ring's underlying algebra"]
    if d.degree != gr.norm(1):
        out.append(f"differential degree: d_M has degree {d.degree}, expected 1")
        return out
    # curved Leibniz on basis pairs
    for i in range(alg.space.total):
        ei = alg.space.basis_vector(i)
        di = ring.d.apply(ei)
        si = gr.par(alg.basis_degree(i))
        for j in range(sp.total):
            mj = sp.basis_vector(j)
            lhs = d.apply(gmod.act_element(ei, mj))
            rhs_a = gmod.act_element(di, mj)
            rhs_b = gmod.act_element(ei, d.apply(mj))
            if si:
                rhs_b = tuple(f.neg(x) for x in rhs_b)
            rhs = tuple(f.add(a, b) for a, b in zip(rhs_a, rhs_b))
            if lhs != rhs:
                out.append(
                    f"Leibniz: d({alg.space.label(i)}.{sp.label(j)}) != "
                    f"d({alg.space.label(i)}).{sp.label(j)} + "
                    f"(-1)^|{alg.space.label(i)}| {alg.space.label(i)}.d({sp.label(j)})"
                )
    # d_M^2 = h . (-)
    for j in range(sp.total):
        mj = sp.basis_vector(j)
        lhs = d.apply(d.apply(mj))
        rhs = gmod.act_element(ring.h, mj)
        if lhs != rhs:
            out.append(f"curvature: d_M^2({sp.label(j)}) != h.{sp.label(j)}")
    return out


class CdgModule:
    """Finite-dimensional left CDG-module, validated on construction."""

    __slots__ = ("ring", "module", "d", "name")

    def __init__(self, ring, module, d, name="M", _trusted=False):
        if not _trusted:
            violations = module_violations(ring, module, d)
            if violations:
                raise AxiomError(f"CDG-module {name}", violations)
        self.ring = ring
        self.module = module
        self.d = d
        self.name = name

    @property
    def space(self):
        return self.module.space

    @property
    def field(self):
        return self.module.field

    @property
    def grading(self):
        return self.module.grading

    def total_dim(self):
        return self.space.total

    def dims(self):
        return dict(self.space.dims)

    def __eq__(self, other):
        return (
            isinstance(other, CdgModule)
            and self.ring == other.ring
            and self.module == other.module
            and self.d == other.d
        )

    def __hash__(self):
        return hash((self.ring, self.module))

    def __repr__(self):
        return f"CdgModule({self.name}, dims {self.space.dims})"


def right_module_violations(ring, space, action, d):
    """Violated right CDG-module axioms for a right action table.

    `action[i][j]` encodes m_j . b_i.  The square of the differential
    must be minus the right action of h.
    """
    out = []
    alg = ring.algebra
    gr = alg.grading
    f = alg.field

    def act(avec, mvec):
        z = f.zero
        res = [z] * space.total
        for i, a in enumerate(avec):
            if a == z:
                continue
            for j, b in enumerate(mvec):
                if b == z:
                    continue
                for k, c in enumerate(action[i][j]):
                    if c != z:
                        res[k] = f.add(res[k], f.mul(f.mul(a, b), c))
        return tuple(res)

    for j in range(space.total):
        mj = space.basis_vector(j)
        if act(alg.unit, mj) != mj:
            out.append(f"unit action: ({space.label(j)}).1 != {space.label(j)}")
    for i in range(alg.space.total):
        ei = alg.space.basis_vector(i)
        for i2 in range(alg.space.total):
            ei2 = alg.space.basis_vector(i2)
            prod = alg.multiply(ei, ei2)
            for j in range(space.total):
                mj = space.basis_vector(j)
                left = act(ei2, act(ei, mj))
                right = act(prod, mj)
                if left != right:
                    out.append(
                        f"action associativity: ({space.label(j)}.{alg.space.label(i)})."
                        f"{alg.space.label(i2)} != {space.label(j)}.({alg.space.label(i)}*{alg.space.label(i2)})"
                    )
    if d.degree != gr.norm(1):
        out.append("differential degree: expected 1")
        return out
    for i in range(alg.space.total):
        ei = alg.space.basis_vector(i)
        di = ring.d.apply(ei)
        for j in range(space.total):
            mj = space.basis_vector(j)
            sj = gr.par(space.unflat(j)[0])
            lhs = d.apply(act(ei, mj))
            rhs_a = act(ei, d.apply(mj))
            rhs_b = act(di, mj)
            if sj:
                rhs_b = tuple(f.neg(x) for x in rhs_b)
            rhs = tuple(f.add(a, b) for a, b in zip(rhs_a, rhs_b))
            if lhs != rhs:
                out.append(
                    f"Leibniz: d({space.label(j)}.{alg.space.label(i)}) != "
                    f"d({space.label(j)}).{alg.space.label(i)} + "
                    f"(-1)^|{space.label(j)}| {space.label(j)}.d({alg.space.label(i)})"
                )
    for j in range(space.total):
        mj = space.basis_vector(j)
        lhs = d.apply(d.apply(mj))
        rhs = tuple(f.neg(x) for x in act(ring.h, mj))
        if lhs != rhs:
            out.append(f"curvature: d^2({space.label(j)}) != -({space.label(j)}).h")
    return out


class RightCdgModule:
    """Right CDG-module; d^2 = -(-).h.  Convertible to a left module
    over the opposite ring."""

    __slots__ = ("ring", "space", "action", "d", "name")

    def __init__(self, ring, space, action, d, name="N"):
        action = tuple(tuple(tuple(v) for v in row) for row in action)
        violations = right_module_violations(ring, space, action, d)
        if violations:
            raise AxiomError(f"right CDG-module {name}", violations)
        self.ring = ring
        self.space = space
        self.action = action
        self.d = d
        self.name = name

    def to_left(self, opposite=None):
        """Left CDG-module over the opposite ring: r*y := (-1)^{|r||y|} y.r."""
        if opposite is None:
            opposite = opposite_ring(self.ring)
        f = self.ring.field
        gr = self.ring.grading
        alg = self.ring.algebra
        na = alg.space.total
        action = []
        for i in range(na):
            di = alg.basis_degree(i)
            row = []
            for j in range(self.space.total):
                dj = self.space.unflat(j)[0]
                v = self.action[i][j]
                if gr.sign(di, dj) < 0:
                    v = tuple(f.neg(x) for x in v)
                row.append(v)
            action.append(row)
        gmod = GradedModule(opposite.algebra, self.space, action)
        return CdgModule(opposite, gmod, self.d, name=self.name + "^op")


def opposite_ring(ring):
    """Opposite CDG-ring (A^op, d, -h)."""
    from .graded import opposite_algebra

    opp = opposite_algebra(ring.algebra)
    f = ring.field
    neg_h = tuple(f.neg(x) for x in ring.h)
    return CdgRing(opp, ring.d, neg_h, name=ring.name + "^op")


def zero_cdg(ring, name="0"):
    sp = GradedSpace(ring.field, ring.grading, {})
    gmod = GradedModule(ring.algebra, sp, [[] for _ in range(ring.algebra.space.total)])
    return CdgModule(ring, gmod, GradedMap.zero(sp, sp, 1), name=name, _trusted=True)


# ---------------------------------------------------------------------------
# Hom elements


class HomElement:
    """Homogeneous sign-rule map between CDG-modules over one ring."""

    __slots__ = ("source", "target", "gmap")

    def __init__(self, source, target, gmap, check=True):
        if source.ring != target.ring:
            raise RingMismatch("Hom between modules over different rings")
        if check:
            bad = _quick_sign_rule_check(source, target, gmap)
            if bad:
                raise AxiomError("HomElement", bad)
        self.source = source
        self.target = target
        self.gmap = gmap

    @property
    def degree(self):
        return self.gmap.degree

    @staticmethod
    def identity(mod):
        return HomElement(mod, mod, GradedMap.identity(mod.space), check=False)

    @staticmethod
    def zero(source, target, degree=0):
        return HomElement(
            source, target, GradedMap.zero(source.space, target.space, degree), check=False
        )

    def differential(self):
        """d(f) = d_M f - (-1)^{|f|} f d_L."""
        a = self.target.d.compose(self.gmap)
        b = self.gmap.compose(self.source.d)
        gr = self.source.grading
        if gr.par(self.degree):
            out = a.add_map(b)
        else:
            out = a.sub_map(b)
        return HomElement(self.source, self.target, out, check=False)

    def is_closed(self):
        return self.differential().gmap.is_zero()

    def compose(self, other):
        """self after other."""
        if other.target is not self.source and other.target != self.source:
            raise DimensionError("composition mismatch")
        return HomElement(
            other.source, self.target, self.gmap.compose(other.gmap), check=False
        )

    def add(self, other):
        return HomElement(self.source, self.target, self.gmap.add_map(other.gmap), check=False)

    def sub(self, other):
        return HomElement(self.source, self.target, self.gmap.sub_map(other.gmap), check=False)

    def neg(self):
        return HomElement(self.source, self.target, self.gmap.neg_map(), check=False)

    def scale(self, c):
        return HomElement(self.source, self.target, self.gmap.scale(c), check=False)

    def apply(self, vec):
        return self.gmap.apply(vec)

    def is_zero(self):
        return self.gmap.is_zero()

    def __eq__(self, other):
        return (
            isinstance(other, HomElement)
            and self.source == other.source
            and self.target == other.target
            and self.gmap == other.gmap
        )

    def __repr__(self):
        return f"HomElement(deg {self.degree}: {self.source.name} -> {self.target.name})"


def _quick_sign_rule_check(source, target, gmap):
    alg = source.ring.algebra
    gr = alg.grading
    f = alg.field
    out = []
    for b in range(alg.space.total):
        db = alg.basis_degree(b)
        s = gr.sign(gmap.degree, db)
        for j in range(source.space.total):
            zj = source.space.basis_vector(j)
            lhs = gmap.apply(source.module.act_element(alg.space.basis_vector(b), zj))
            rhs = target.module.act_element(alg.space.basis_vector(b), gmap.apply(zj))
            if s < 0:
                rhs = tuple(f.neg(x) for x in rhs)
            if lhs != rhs:
                out.append(
                    f"sign rule fails at ({alg.space.label(b)}, {source.space.label(j)})"
                )
    return out


def hom_differential(f):
    return f.differential()


def is_closed(f):
    return f.is_closed()


# ---------------------------------------------------------------------------
# Hom complexes


class HomComplex:
    """The complex of sign-rule Hom spaces between two CDG-modules.

    Spaces carry canonical bases; differentials are matrices in those
    bases.  Over Z the complex is supported on a finite interval, over
    Z/2 it is 2-periodic.
    """

    def __init__(self, source, target):
        if source.ring != target.ring:
            raise RingMismatch("Hom complex needs a common ring")
        self.source = source
        self.target = target
        gr = source.grading
        self.grading = gr
        if gr.kind == "z2":
            degrees = [0, 1]
        else:
            ls, ts = source.space, target.space
            if not ls.degrees or not ts.degrees:
                degrees = []
            else:
                lo = min(ts.degrees) - max(ls.degrees)
                hi = max(ts.degrees) - min(ls.degrees)
                degrees = list(range(lo, hi + 1))
        self.degrees = degrees
        self._spaces = {}
        self._diffs = {}

    def space(self, n):
        n = self.grading.norm(n)
        if n not in self._spaces:
            self._spaces[n] = hom_graded(self.source.module, self.target.module, n)
        return self._spaces[n]

    def dim(self, n):
        if self.grading.kind == "z" and n not in self.degrees:
            return 0
        return self.space(n).dim()

    def element(self, n, idx):
        return HomElement(
            self.source, self.target, self.space(n).basis_maps()[idx], check=False
        )

    def differential_matrix(self, n):
        """Matrix of d : Hom^n -> Hom^{n+1} in the canonical bases."""
        n = self.grading.norm(n)
        if n in self._diffs:
            return self._diffs[n]
        hs = self.space(n)
        ht = self.space(self.grading.add(n, 1))
        f = self.source.field
        cols = []
        for bas in hs.basis_maps():
            df = HomElement(self.source, self.target, bas, check=False).differential()
            coords = ht.express(df.gmap)
            if coords is None:
                raise AxiomError(
                    "Hom complex", ["differential leaves the sign-rule subspace"]
                )
            cols.append(coords)
        mat = Matrix.from_cols(f, cols, ht.dim()) if cols else Matrix.zeros(f, ht.dim(), 0)
        self._diffs[n] = mat
        return mat

    def squares_to_zero(self, n):
        d1 = self.differential_matrix(n)
        d2 = self.differential_matrix(self.grading.add(n, 1))
        return (d2 @ d1).is_zero()

    def express(self, f):
        """Canonical coordinates of a HomElement in its degree, or None."""
        return self.space(f.degree).express(f.gmap)

    def cocycles(self, n):
        return self.differential_matrix(n).kernel()

    def coboundaries(self, n):
        prev = self.grading.norm(n - 1) if self.grading.kind == "z2" else n - 1
        if self.grading.kind == "z" and prev not in self.degrees:
            return Subspace.zero(self.source.field, self.dim(n))
        return self.differential_matrix(prev).image()

    def cohomology(self, n):
        """(dimension, canonical representative HomElements) at degree n."""
        if self.grading.kind == "z" and n not in self.degrees:
            return 0, []
        z = self.cocycles(n)
        b = self.coboundaries(n)
        reps = complement_within(b, z)
        hs = self.space(n)
        out = []
        for coords in reps:
            vec = _combine(self.source.field, coords, hs.space.basis.data)
            out.append(
                HomElement(self.source, self.target, hs.map_from_coords(vec), check=False)
            )
        return z.dim() - b.dim(), out

    def solve_potential(self, f):
        """s with d(s) = f, or None; s is returned as a HomElement."""
        n = self.grading.norm(f.degree)
        prev = self.grading.add(n, -1) if self.grading.kind == "z2" else n - 1
        target_coords = self.express(f)
        if target_coords is None:
            raise AxiomError("Hom complex", ["element is not a sign-rule map"])
        if self.grading.kind == "z" and prev not in self.degrees:
            return None if any(x != self.source.field.zero for x in target_coords) else HomElement.zero(self.source, self.target, prev)
        mat = self.differential_matrix(prev)
        sol = mat.solve(target_coords)
        if sol is None:
            return None
        hs = self.space(prev)
        vec = _combine(self.source.field, sol, hs.space.basis.data)
        return HomElement(self.source, self.target, hs.map_from_coords(vec), check=False)


def _combine(field, coeffs, rows):
    if not rows:
        return ()
    out = [field.zero] * len(rows[0])
    for c, row in zip(coeffs, rows):
        if c != field.zero:
            out = [field.add(o, field.mul(c, x)) for o, x in zip(out, row)]
    return tuple(out)


def hom_complex(source, target):
    return HomComplex(source, target)


def h_n(source, target, n):
    """Cohomology of the Hom complex: (dimension, canonical basis)."""
    return HomComplex(source, target).cohomology(n)


def homotopic(f, g):
    """A homotopy s with f - g = d(s), or None if f and g are not homotopic."""
    if f.source != g.source or f.target != g.target or f.degree != g.degree:
        raise DimensionError("homotopy requires parallel morphisms of equal degree")
    hc = HomComplex(f.source, f.target)
    return hc.solve_potential(f.sub(g))


def contracting_homotopy(mod):
    """s with d(s) = id_M, or None; the witness that M is contractible."""
    hc = HomComplex(mod, mod)
    return hc.solve_potential(HomElement.identity(mod))


# ---------------------------------------------------------------------------
# subobjects, quotients, sums, exactness in Z^0


def sub_cdg(mod, subspaces, tag="k", name=None):
    """CDG-submodule on per-degree subspaces stable under action and d."""
    gmod, incl_g = submodule(mod.module, subspaces, tag=tag)
    gr = mod.grading
    f = mod.field
    blocks = {}
    for g in gmod.space.degrees:
        tg = gr.add(g, 1)
        cols = []
        for j in range(gmod.space.dims[g]):
            v = incl_g.apply(gmod.space.basis_vector(gmod.space.flat(g, j)))
            w = mod.d.apply(v)
            comp = mod.space.component(w, tg)
            if gmod.space.dim(tg) == 0:
                if any(x != f.zero for x in comp) or any(
                    x != f.zero for x in w
                ):
                    raise AxiomError("sub_cdg", [f"subspace not d-stable at degree {g}"])
                cols.append(())
            else:
                sub = subspaces.get(gr.norm(tg))
                coords = sub.reduce(comp) if sub is not None else None
                if coords is None:
                    raise AxiomError("sub_cdg", [f"subspace not d-stable at degree {g}"])
                # the rest of w must vanish outside degree tg
                if w != mod.space.embed(tg, comp):
                    raise AxiomError("sub_cdg", ["differential is not homogeneous"])
                cols.append(coords)
        blocks[g] = Matrix.from_cols(f, cols, gmod.space.dims[g]) if cols else None
    blocks = {g: m for g, m in blocks.items() if m is not None}
    dsub = GradedMap(gmod.space, gmod.space, 1, blocks)
    out = CdgModule(mod.ring, gmod, dsub, name=name or f"{mod.name}|sub")
    incl = HomElement(out, mod, incl_g, check=False)
    return out, incl


def quotient_cdg(mod, subspaces, tag="q", name=None):
    """Quotient CDG-module by d-stable, action-stable subspaces."""
    gmod, proj_g = quotient_module(mod.module, subspaces, tag=tag)
    gr = mod.grading
    f = mod.field
    blocks = {}
    for g in gmod.space.degrees:
        tg = gr.add(g, 1)
        # lift representatives, differentiate, project
        cols = []
        proj_block_t = proj_g.block(gr.norm(tg)) if gmod.space.dim(tg) else None
        for j in range(gmod.space.dims[g]):
            # representative: j-th vector with proj(rep) = e_j
            rep = _lift_representative(proj_g, mod.space, g, j)
            w = mod.d.apply(rep)
            if proj_block_t is None:
                cols.append(())
            else:
                comp = mod.space.component(w, tg)
                cols.append(proj_block_t.apply(comp))
        blocks[g] = Matrix.from_cols(f, cols, gmod.space.dims[g]) if cols else None
    blocks = {g: m for g, m in blocks.items() if m is not None}
    dq = GradedMap(gmod.space, gmod.space, 1, blocks)
    out = CdgModule(mod.ring, gmod, dq, name=name or f"{mod.name}|quot")
    proj = HomElement(mod, out, proj_g, check=False)
    return out, proj


def _lift_representative(proj_g, space, g, j):
    """A flat vector mapping to the j-th quotient basis vector in degree g."""
    block = proj_g.block(g)
    target = tuple(
        space.field.one if t == j else space.field.zero for t in range(block.rows)
    )
    sol = block.solve(target)
    if sol is None:
        raise AxiomError("quotient_cdg", ["projection is not surjective"])
    return space.embed(g, sol)


def direct_sum_cdg(mods, name=None):
    """Finite direct sum with componentwise differential.

    Returns (sum, inclusions, projections) with closed structure maps.
    """
    if not mods:
        raise DimensionError("empty direct sum: use zero_cdg")
    ring = mods[0].ring
    if any(m.ring != ring for m in mods):
        raise RingMismatch("direct sum over different rings")
    gmods = [m.module for m in mods]
    total_g, incls_g, projs_g = direct_sum_modules(gmods)
    f = ring.field
    d_total = GradedMap.zero(total_g.space, total_g.space, 1)
    for m, inc, prj in zip(mods, incls_g, projs_g):
        d_total = d_total.add_map(inc.compose(m.d).compose(prj))
    out = CdgModule(
        ring, total_g, d_total, name=name or "(+)".join(m.name for m in mods)
    )
    incls = [HomElement(m, out, g, check=False) for m, g in zip(mods, incls_g)]
    projs = [HomElement(out, m, g, check=False) for m, g in zip(mods, projs_g)]
    return out, incls, projs


def kernel_cdg(f, tag="k", name=None):
    """Kernel of a closed degree-0 morphism as a CDG-submodule."""
    _require_closed_degree0(f)
    subs = f.gmap.kernel_by_degree()
    return sub_cdg(f.source, subs, tag=tag, name=name or f"ker")


def image_cdg(f, tag="i", name=None):
    """Image of a closed degree-0 morphism as a CDG-submodule of the target."""
    _require_closed_degree0(f)
    subs = f.gmap.image_by_degree()
    return sub_cdg(f.target, subs, tag=tag, name=name or "im")


def cokernel_cdg(f, tag="q", name=None):
    _require_closed_degree0(f)
    subs = f.gmap.image_by_degree()
    return quotient_cdg(f.target, subs, tag=tag, name=name or "coker")


def corestrict(f, tag="i", name=None):
    """Factor a closed degree-0 morphism through its image.

    Returns (image, epi, incl) with incl o epi = f.
    """
    img, incl = image_cdg(f, tag=tag, name=name)
    fld = f.source.field
    blocks = {}
    for g in f.source.space.degrees:
        src_block = f.gmap.block(g)
        basis = incl.gmap.block(g)
        cols = []
        for j in range(src_block.cols):
            col = src_block.col(j)
            sol = basis.solve(col)
            if sol is None:
                raise AxiomError("corestrict", ["image basis does not span a value"])
            cols.append(sol)
        if cols:
            blocks[g] = Matrix.from_cols(fld, cols)
    beta = HomElement(f.source, img, GradedMap(f.source.space, img.space, 0, blocks), check=False)
    return img, beta, incl


def _require_closed_degree0(f):
    if f.degree != f.source.grading.norm(0):
        raise DimensionError("expected a degree-0 morphism")
    if not f.is_closed():
        raise AxiomError("morphism", ["morphism is not closed: d(f) != 0"])


def ses_is_exact(alpha, beta):
    """Exactness report for 0 -> A -> B -> C -> 0 in the category of
    closed degree-0 morphisms.  Empty report means exact."""
    out = []
    if alpha.target != beta.source:
        return ["middle objects disagree"]
    for name, f in (("first map", alpha), ("second map", beta)):
        if f.degree != alpha.source.grading.norm(0):
            out.append(f"{name} is not of degree 0")
        elif not f.is_closed():
            out.append(f"{name} is not closed")
    if out:
        return out
    if not beta.compose(alpha).is_zero():
        out.append("composite is nonzero")
    if not alpha.gmap.is_injective():
        out.append("first map is not injective")
    if not beta.gmap.is_surjective():
        out.append("second map is not surjective")
    img = alpha.gmap.image_by_degree()
    ker = beta.gmap.kernel_by_degree()
    for g in alpha.target.space.degrees:
        if img[g] != ker[g]:
            out.append(f"image != kernel in degree {g}")
    return out
