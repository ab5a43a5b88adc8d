"""The graded ring R*[d] and the module-category dictionary it encodes.

Adjoining to a CDG-ring an odd generator subject to
``delta r - (-1)^{|r|} r delta = d(r)`` and ``delta^2 = h`` produces a
graded ring whose graded modules are exactly the CDG-modules: the
generator acts as the differential.  Products are rewritten to the
normal form r + r' delta with delta moved to the right, which fixes
the structure constants deterministically.

The odd derivation by the new generator (kill R*, send delta to 1) has
vanishing cohomology in every degree; `check_acyclic` verifies this.
The free and cofree functors, and the equivalence between graded
modules and contracted pairs, are realised with explicit witnesses.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bec import BecModule
from .cdg import CdgModule, HomElement
from .graded import (
    AxiomError,
    GradedAlgebra,
    GradedMap,
    GradedModule,
    GradedSpace,
    submodule,
    validate_algebra,
)
from .linalg import Matrix


@dataclass
class DeltaRing:
    """R*[delta] with its embedding bookkeeping.

    plain[i] and with_delta[i] are the flat indices of b_i and b_i delta
    in the extended algebra; `delta` is the flat vector of the adjoined
    generator and `partial` the degree -1 odd derivation killing R*.
    """

    base: object
    algebra: GradedAlgebra
    plain: list
    with_delta: list
    delta: tuple
    partial: GradedMap

    def embed_element(self, vec):
        f = self.algebra.field
        out = [f.zero] * self.algebra.space.total
        for i, c in enumerate(vec):
            out[self.plain[i]] = c
        return tuple(out)

    def delta_coeff_split(self, vec):
        """Split an element of R*[delta] as (r, r') with vec = r + r' delta."""
        n = len(self.plain)
        r = [None] * n
        rp = [None] * n
        for i in range(n):
            r[i] = vec[self.plain[i]]
            rp[i] = vec[self.with_delta[i]]
        return tuple(r), tuple(rp)


def build_delta_ring(ring):
    """Adjoin the odd generator to a CDG-ring; validates all relations."""
    alg = ring.algebra
    f = alg.field
    gr = alg.grading
    bsp = alg.space
    n = bsp.total
    entries = []  # (degree, kind 0/1, base index)
    for i in range(n):
        entries.append((bsp.unflat(i)[0], 0, i))
    for i in range(n):
        entries.append((gr.add(bsp.unflat(i)[0], 1), 1, i))
    entries.sort(key=lambda t: (t[0], t[1], t[2]))
    dims = {}
    labels = {}
    for deg, kind, i in entries:
        dims[deg] = dims.get(deg, 0) + 1
        labels.setdefault(deg, [])
        lbl = bsp.label(i)
        labels[deg].append(lbl if kind == 0 else f"{lbl}.d")
    space = GradedSpace(f, gr, dims, {g: tuple(ls) for g, ls in labels.items()})
    plain = [None] * n
    with_delta = [None] * n
    counter = {g: 0 for g in space.degrees}
    for deg, kind, i in entries:
        flat = space._offsets[deg] + counter[deg]
        counter[deg] += 1
        if kind == 0:
            plain[i] = flat
        else:
            with_delta[i] = flat
    total = space.total

    def emb(vec, part):
        out = [f.zero] * total
        slots = plain if part == 0 else with_delta
        for i, c in enumerate(vec):
            if c != f.zero:
                out[slots[i]] = c
        return out

    def add_vecs(a, b):
        return [f.add(x, y) for x, y in zip(a, b)]

    zero_vec = [f.zero] * total
    mult = [[None] * total for _ in range(total)]
    d_of = [ring.d.apply(bsp.basis_vector(i)) for i in range(n)]
    for kind_a in (0, 1):
        for i in range(n):
            ei = bsp.basis_vector(i)
            fa = plain[i] if kind_a == 0 else with_delta[i]
            for kind_b in (0, 1):
                for j in range(n):
                    ej = bsp.basis_vector(j)
                    fb = plain[j] if kind_b == 0 else with_delta[j]
                    prod = alg.multiply(ei, ej)
                    if kind_a == 0:
                        # b_i b_j  or  (b_i b_j) delta
                        out = emb(prod, kind_b)
                    else:
                        sgn = -1 if gr.par(bsp.unflat(j)[0]) else 1
                        swapped = alg.multiply(ei, ej)
                        if sgn < 0:
                            swapped = tuple(f.neg(x) for x in swapped)
                        lower = alg.multiply(ei, d_of[j])
                        if kind_b == 0:
                            # (b_i delta) b_j = ± (b_i b_j) delta + b_i d(b_j)
                            out = add_vecs(emb(swapped, 1), emb(lower, 0))
                        else:
                            # (b_i delta)(b_j delta)
                            #   = ± (b_i b_j) h + (b_i d(b_j)) delta
                            out = add_vecs(
                                emb(alg.multiply(swapped, ring.h), 0),
                                emb(lower, 1),
                            )
                    mult[fa][fb] = tuple(out)
    unit = tuple(emb(alg.unit, 0))
    dalg = GradedAlgebra(space, mult, unit)
    delta_vec = tuple(emb(alg.unit, 1))
    # partial: b_i -> 0, b_i delta -> (-1)^{|b_i|} b_i
    cols = [None] * total
    for i in range(n):
        cols[plain[i]] = tuple(zero_vec)
        sgn = -1 if gr.par(bsp.unflat(i)[0]) else 1
        v = [f.zero] * total
        v[plain[i]] = f.one if sgn > 0 else f.neg(f.one)
        cols[with_delta[i]] = tuple(v)
    blocks = {}
    for g in space.degrees:
        sub = [
            space.component(cols[space.flat(g, t)], gr.add(g, -1))
            for t in range(space.dims[g])
        ]
        blocks[g] = Matrix.from_cols(f, sub, space.dims[g])
    partial = GradedMap(space, space, -1, blocks)
    out = DeltaRing(ring, dalg, plain, with_delta, delta_vec, partial)
    violations = delta_ring_violations(out)
    if violations:
        raise AxiomError("delta ring", violations)
    return out


def delta_ring_violations(dr):
    """Full validation; failures indicate an internal sign error."""
    out = list(validate_algebra(dr.algebra))
    alg = dr.base.algebra
    dalg = dr.algebra
    f = dalg.field
    gr = dalg.grading
    n = alg.space.total
    # delta r - (-1)^{|r|} r delta = d(r)
    for i in range(n):
        ei = dalg.space.basis_vector(dr.plain[i])
        lhs = dalg.multiply(dr.delta, ei)
        rhs = dalg.multiply(ei, dr.delta)
        if gr.par(alg.space.unflat(i)[0]):
            rhs = tuple(f.neg(x) for x in rhs)
        comm = tuple(f.sub(a, b) for a, b in zip(lhs, rhs))
        expected = dr.embed_element(dr.base.d.apply(alg.space.basis_vector(i)))
        if comm != expected:
            out.append(f"commutator relation fails at {alg.space.label(i)}")
    # delta^2 = h
    dd = dalg.multiply(dr.delta, dr.delta)
    if dd != dr.embed_element(dr.base.h):
        out.append("delta^2 != h")
    # dimension: free with two generators
    if dalg.space.total != 2 * n:
        out.append("extension is not free of rank 2")
    # partial: odd Leibniz, kills R*, sends delta to 1
    if any(x != f.zero for x in dr.partial.apply(dr.embed_element(alg.unit))):
        out.append("partial(1) != 0")
    if dr.partial.apply(dr.delta) != dr.embed_element(alg.unit):
        out.append("partial(delta) != 1")
    for a in range(dalg.space.total):
        ea = dalg.space.basis_vector(a)
        da = dr.partial.apply(ea)
        pa = gr.par(dalg.space.unflat(a)[0])
        for b in range(dalg.space.total):
            eb = dalg.space.basis_vector(b)
            lhs = dr.partial.apply(dalg.multiply(ea, eb))
            rhs_a = dalg.multiply(da, eb)
            rhs_b = dalg.multiply(ea, dr.partial.apply(eb))
            if pa:
                rhs_b = tuple(f.neg(x) for x in rhs_b)
            rhs = tuple(f.add(x, y) for x, y in zip(rhs_a, rhs_b))
            if lhs != rhs:
                out.append(
                    f"odd Leibniz for partial fails at "
                    f"({dalg.space.label(a)}, {dalg.space.label(b)})"
                )
    return out


def check_acyclic(dr):
    """(is_acyclic, per-degree cohomology dims) of (R*[delta], partial)."""
    space = dr.algebra.space
    gr = space.grading
    dims = {}
    for g in space.degrees:
        ker = dr.partial.block(g).kernel()
        img_cols = []
        gp = gr.add(g, 1)
        mat = dr.partial.block(gp)
        img_cols = [mat.col(j) for j in range(mat.cols)]
        from .linalg import Subspace

        img = Subspace.from_vectors(space.field, space.dims[g], img_cols)
        dims[g] = ker.dim() - img.dim()
    return all(v == 0 for v in dims.values()), dims


# ---------------------------------------------------------------------------
# module dictionary


def to_delta_module(dr, mod):
    """Graded R*[delta]-module with the generator acting as d_M."""
    base_alg = dr.base.algebra
    n = base_alg.space.total
    action = [None] * dr.algebra.space.total
    for i in range(n):
        action[dr.plain[i]] = mod.module.action[i]
        row = []
        for j in range(mod.space.total):
            dm = mod.d.apply(mod.space.basis_vector(j))
            row.append(mod.module.act_element(base_alg.space.basis_vector(i), dm))
        action[dr.with_delta[i]] = row
    return GradedModule(dr.algebra, mod.space, action)


def from_delta_module(dr, gmod, name="M"):
    """CDG-module recovered from a graded R*[delta]-module."""
    if gmod.algebra != dr.algebra:
        raise AxiomError("delta module", ["module is not over this delta ring"])
    base_alg = dr.base.algebra
    n = base_alg.space.total
    action = [gmod.action[dr.plain[i]] for i in range(n)]
    restricted = GradedModule(base_alg, gmod.space, action)
    d = gmod.act_map(dr.delta)
    return CdgModule(dr.base, restricted, d, name=name)


def z0_hom_dim_delta(dr, m1, m2):
    """dim of degree-0 module maps over R*[delta] between converted modules."""
    from .graded import hom_dim

    return hom_dim(to_delta_module(dr, m1), to_delta_module(dr, m2), 0)


# ---------------------------------------------------------------------------
# free and cofree functors


@dataclass
class FreePairLayout:
    """Bookkeeping for modules with basis split into 1-part and delta-part."""

    module: CdgModule
    ones: list
    deltas: list


def _paired_space(field, gr, base_space, one_shift, delta_shift, tag_one, tag_delta):
    entries = []
    for j in range(base_space.total):
        gj = base_space.unflat(j)[0]
        entries.append((gr.add(gj, one_shift), 0, j))
    for j in range(base_space.total):
        gj = base_space.unflat(j)[0]
        entries.append((gr.add(gj, delta_shift), 1, j))
    entries.sort(key=lambda t: (t[0], t[1], t[2]))
    dims = {}
    labels = {}
    ones = [None] * base_space.total
    deltas = [None] * base_space.total
    for deg, kind, j in entries:
        dims[deg] = dims.get(deg, 0) + 1
        labels.setdefault(deg, [])
        lbl = base_space.label(j)
        labels[deg].append((tag_one if kind == 0 else tag_delta) + lbl)
    space = GradedSpace(field, gr, dims, {g: tuple(ls) for g, ls in labels.items()})
    counter = {g: 0 for g in space.degrees}
    for deg, kind, j in entries:
        flat = space._offsets[deg] + counter[deg]
        counter[deg] += 1
        if kind == 0:
            ones[j] = flat
        else:
            deltas[j] = flat
    return space, ones, deltas


def g_plus(dr, gmod, name=None):
    """Freely generated CDG-module on a graded module: R*[delta] (x) M.

    Underlying graded module M (+) delta (x) M; the differential sends
    1 (x) m to delta (x) m and delta (x) m to 1 (x) h m.
    """
    ring = dr.base
    alg = ring.algebra
    f = alg.field
    gr = alg.grading
    msp = gmod.space
    space, ones, deltas = _paired_space(f, gr, msp, 0, 1, "1.", "d.")

    def emb(vec, slots):
        out = [f.zero] * space.total
        for j, c in enumerate(vec):
            if c != f.zero:
                out[slots[j]] = c
        return out

    na = alg.space.total
    action = [[None] * space.total for _ in range(na)]
    for b in range(na):
        eb = alg.space.basis_vector(b)
        db = ring.d.apply(eb)
        sgn = -1 if gr.par(alg.basis_degree(b)) else 1
        for j in range(msp.total):
            mj = msp.basis_vector(j)
            bm = gmod.act_element(eb, mj)
            action[b][ones[j]] = tuple(emb(bm, ones))
            # b . (delta x m) = ± (delta x b m  -  1 x d(b) m)
            dm = gmod.act_element(db, mj)
            vec = emb(bm, deltas)
            for k, c in enumerate(emb(dm, ones)):
                vec[k] = f.sub(vec[k], c)
            if sgn < 0:
                vec = [f.neg(x) for x in vec]
            action[b][deltas[j]] = tuple(vec)
    out_mod = GradedModule(alg, space, action)
    # differential
    cols = [None] * space.total
    for j in range(msp.total):
        cols[ones[j]] = tuple(emb(msp.basis_vector(j), deltas))
        hm = gmod.act_element(ring.h, msp.basis_vector(j))
        cols[deltas[j]] = tuple(emb(hm, ones))
    blocks = {}
    for g in space.degrees:
        sub = [
            space.component(cols[space.flat(g, t)], gr.add(g, 1))
            for t in range(space.dims[g])
        ]
        blocks[g] = Matrix.from_cols(f, sub, space.dims[g])
    d = GradedMap(space, space, 1, blocks)
    cdg = CdgModule(ring, out_mod, d, name=name or "G+")
    return FreePairLayout(cdg, ones, deltas)


def g_minus(dr, gmod, name=None):
    """Cofreely cogenerated CDG-module: sign-rule maps from R*[delta] to M.

    A map is recorded by its values (f(1), f(delta)); the 1-slot basis
    element sits in degree |m|, the delta-slot one in degree |m| - 1.
    """
    ring = dr.base
    alg = ring.algebra
    f = alg.field
    gr = alg.grading
    msp = gmod.space
    space, ones, deltas = _paired_space(f, gr, msp, 0, -1, "c1.", "cd.")

    def emb(vec, slots):
        out = [f.zero] * space.total
        for j, c in enumerate(vec):
            if c != f.zero:
                out[slots[j]] = c
        return out

    na = alg.space.total
    action = [[None] * space.total for _ in range(na)]
    for b in range(na):
        eb = alg.space.basis_vector(b)
        db = ring.d.apply(eb)
        pb = gr.par(alg.basis_degree(b))
        for j in range(msp.total):
            mj = msp.basis_vector(j)
            gj = msp.unflat(j)[0]
            bm = gmod.act_element(eb, mj)
            # b . (1-slot m): values (b m, (-1)^{|b|+|m|} d(b) m)
            dbm = gmod.act_element(db, mj)
            sgn = -1 if (pb + gr.par(gj)) % 2 else 1
            vec = emb(bm, ones)
            for k, c in enumerate(emb(dbm, deltas)):
                vec[k] = f.add(vec[k], c if sgn > 0 else f.neg(c))
            action[b][ones[j]] = tuple(vec)
            # b . (delta-slot m): values (0, b m)
            action[b][deltas[j]] = tuple(emb(bm, deltas))
    out_mod = GradedModule(alg, space, action)
    cols = [None] * space.total
    for j in range(msp.total):
        mj = msp.basis_vector(j)
        gj = msp.unflat(j)[0]
        # d(1-slot m) = (-1)^{|m|+1} (delta-slot h m)
        hm = gmod.act_element(ring.h, mj)
        sgn = -1 if gr.par(gr.add(gj, 1)) else 1
        vec = emb(hm, deltas)
        if sgn < 0:
            vec = [f.neg(x) for x in vec]
        cols[ones[j]] = tuple(vec)
        # d(delta-slot m) = (-1)^{|m|-1} (1-slot m)
        sgn2 = -1 if gr.par(gr.add(gj, -1)) else 1
        vec2 = emb(mj, ones)
        if sgn2 < 0:
            vec2 = [f.neg(x) for x in vec2]
        cols[deltas[j]] = tuple(vec2)
    blocks = {}
    for g in space.degrees:
        sub = [
            space.component(cols[space.flat(g, t)], gr.add(g, 1))
            for t in range(space.dims[g])
        ]
        blocks[g] = Matrix.from_cols(f, sub, space.dims[g])
    d = GradedMap(space, space, 1, blocks)
    cdg = CdgModule(ring, out_mod, d, name=name or "G-")
    return FreePairLayout(cdg, ones, deltas)


def g_minus_vs_g_plus_shift(dr, gmod):
    """Explicit closed isomorphism G-(M) -> G+(M)[1].

    delta-slot m -> (-1)^{|m|} 1 (x) m and 1-slot m -> delta (x) m.
    Raises if any verification fails.
    """
    from .constructions import shift

    gm = g_minus(dr, gmod)
    gp = g_plus(dr, gmod)
    target = shift(gp.module, 1)
    f = dr.base.field
    gr = dr.base.grading
    msp = gmod.space
    src_sp = gm.module.space
    tgt_sp = target.space
    cols = [None] * src_sp.total
    # flat positions of G+ pieces inside the shifted module
    perm = _shift_perm(gp.module.space, tgt_sp, 1)
    for j in range(msp.total):
        gj = msp.unflat(j)[0]
        v = [f.zero] * tgt_sp.total
        v[perm[gp.deltas[j]]] = f.one
        cols[gm.ones[j]] = tuple(v)
        w = [f.zero] * tgt_sp.total
        w[perm[gp.ones[j]]] = f.neg(f.one) if gr.par(gj) else f.one
        cols[gm.deltas[j]] = tuple(w)
    blocks = {}
    for g in src_sp.degrees:
        sub = [
            tgt_sp.component(cols[src_sp.flat(g, t)], g)
            for t in range(src_sp.dims[g])
        ]
        blocks[g] = Matrix.from_cols(f, sub, src_sp.dims[g])
    iso_map = GradedMap(src_sp, tgt_sp, 0, blocks)
    iso = HomElement(gm.module, target, iso_map)
    problems = []
    if not iso.is_closed():
        problems.append("comparison is not closed")
    if not (iso_map.is_injective() and iso_map.is_surjective()):
        problems.append("comparison is not bijective")
    if problems:
        raise AxiomError("G- vs G+[1]", problems)
    return iso, target


def _shift_perm(old_space, new_space, i):
    from .graded import shift_flat_permutation

    return shift_flat_permutation(old_space, new_space, i)


# ---------------------------------------------------------------------------
# the equivalence with contracted pairs


def upsilon(dr, gmod, name=None):
    """Contracted pair (G+(M), sigma) with sigma(1 x m) = 0,
    sigma(delta x m) = 1 x m."""
    gp = g_plus(dr, gmod, name=name or "Y(M)")
    f = dr.base.field
    sp = gp.module.space
    cols = [None] * sp.total
    for j in range(gmod.space.total):
        cols[gp.ones[j]] = tuple([f.zero] * sp.total)
        v = [f.zero] * sp.total
        v[gp.ones[j]] = f.one
        cols[gp.deltas[j]] = tuple(v)
    gr = dr.base.grading
    blocks = {}
    for g in sp.degrees:
        sub = [
            sp.component(cols[sp.flat(g, t)], gr.add(g, -1))
            for t in range(sp.dims[g])
        ]
        blocks[g] = Matrix.from_cols(f, sub, sp.dims[g])
    sigma = HomElement(gp.module, gp.module, GradedMap(sp, sp, -1, blocks))
    return BecModule(gp.module, sigma, name=name or f"Y({getattr(gmod, 'name', 'M')})")


def upsilon_inverse(dr, xb, tag="m"):
    """ker(sigma) as a graded module over the base ring."""
    subs = xb.sigma.gmap.kernel_by_degree()
    kmod, incl = submodule(xb.base.module, subs, tag=tag)
    return kmod, incl


def upsilon_roundtrip_report(dr, xb):
    """Verify the comparison G+(ker sigma) -> X, 1xm -> m, dxm -> d_X m.

    Returns a list of problems; empty means the round trip is a strict
    isomorphism of contracted pairs.
    """
    problems = []
    kmod, incl = upsilon_inverse(dr, xb)
    gp = g_plus(dr, kmod)
    x = xb.base
    f = x.field
    sp = gp.module.space
    cols = [None] * sp.total
    for j in range(kmod.space.total):
        m_in_x = incl.apply(kmod.space.basis_vector(j))
        cols[gp.ones[j]] = m_in_x
        cols[gp.deltas[j]] = x.d.apply(m_in_x)
    blocks = {}
    gr = x.grading
    for g in sp.degrees:
        sub = [
            x.space.component(cols[sp.flat(g, t)], g) for t in range(sp.dims[g])
        ]
        blocks[g] = Matrix.from_cols(f, sub, sp.dims[g])
    comp_map = GradedMap(sp, x.space, 0, blocks)
    comp = HomElement(gp.module, x, comp_map, check=False)
    if not comp.is_closed():
        problems.append("comparison map is not closed")
    if not (comp_map.is_injective() and comp_map.is_surjective()):
        problems.append("comparison map is not bijective")
    # sigma compatibility: sigma_X o comp = comp o sigma_{G+}
    gp_bec = upsilon(dr, kmod)
    lhs = xb.sigma.gmap.compose(comp_map)
    rhs = comp_map.compose(gp_bec.sigma.gmap)
    if lhs != rhs:
        problems.append("comparison does not intertwine the contractions")
    # im sigma = ker sigma dimension check
    img = xb.sigma.gmap.image_by_degree()
    ker = xb.sigma.gmap.kernel_by_degree()
    for g in x.space.degrees:
        if img[g] != ker[g]:
            problems.append(f"im sigma != ker sigma in degree {g}")
    return problems
