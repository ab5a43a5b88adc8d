"""Finite-scale checkers for second-kind acyclicity.

Positive direction: a verified chain of extensions by contractible
layers (plus an optional retract) certifies membership in the closure
of the contractibles under extensions and direct summands, i.e.
absolute acyclicity.  Negative direction: a nonzero homotopy Hom group
against a graded-injective (resp. graded-projective) test object
soundly refutes coacyclicity (resp. contraacyclicity).  Neither
direction claims completeness.

The Ext^1 comparison works over the extended ring: both Ext groups are
computed from one free resolution, restriction being literal inclusion
of Hom spaces, so the kernel of the comparison map is an honest
subquotient dimension.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .cdg import (
    CdgModule,
    HomComplex,
    HomElement,
    contracting_homotopy,
    ses_is_exact,
    zero_cdg,
)
from .constructions import FiniteComplexOfModules, cone, shift, shift_hom, totalize
from .deltaring import build_delta_ring, g_minus, g_plus, to_delta_module
from .graded import (
    AxiomError,
    FreeCover,
    FreeHomBasis,
    GradedMap,
    GradedModule,
    dual_module,
    free_cover,
    hom_graded,
    is_projective_graded,
    kernel_module,
    opposite_algebra,
    regular_module,
    shift_module,
)
from .linalg import Matrix, Subspace

_delta_cache = {}


def delta_ring_for(ring):
    if ring not in _delta_cache:
        _delta_cache[ring] = build_delta_ring(ring)
    return _delta_cache[ring]


def is_contractible(mod):
    """Contracting homotopy witness s with d(s) = id, or None."""
    return contracting_homotopy(mod)


def is_graded_projective(mod):
    """Projectivity of the underlying graded module over the base ring."""
    return is_projective_graded(mod.module)


def is_graded_injective(mod):
    from .graded import is_injective_graded

    return is_injective_graded(mod.module)


def is_projective_z0(mod):
    """Projective in the abelian category of closed degree-0 morphisms."""
    return is_contractible(mod) is not None and is_graded_projective(mod)


def is_injective_z0(mod):
    return is_contractible(mod) is not None and is_graded_injective(mod)


# ---------------------------------------------------------------------------
# Ext^1 comparison


def _restrict_free_cover(dr, cover):
    """A free cover over R*[delta], viewed as a free cover over R*.

    Generators double: gen 2i is 1.e_i, gen 2i+1 is delta.e_i.
    """
    base_alg = dr.base.algebra
    n = base_alg.space.total
    mod = cover.module
    action = [mod.action[dr.plain[i]] for i in range(n)]
    restricted = GradedModule(base_alg, mod.space, action)
    unit_idx = [k for k, c in enumerate(dr.base.algebra.unit) if c != dr.base.field.zero]
    if len(unit_idx) != 1:
        raise AxiomError("restriction", ["base unit must be a basis vector"])
    u0 = unit_idx[0]
    delta_idx = dr.with_delta[u0]
    rev = {}
    for flat, (t, gi) in enumerate(cover.decomp):
        rev[(t, gi)] = flat
    gen_degrees = []
    gen_flats = []
    gr = base_alg.grading
    for gi, gd in enumerate(cover.gen_degrees):
        gen_degrees.append(gd)
        gen_flats.append(cover.gen_flats[gi])
        gen_degrees.append(gr.add(gd, 1))
        gen_flats.append(rev[(delta_idx, gi)])
    decomp = [None] * mod.space.total
    plain_pos = {dr.plain[i]: i for i in range(n)}
    delta_pos = {dr.with_delta[i]: i for i in range(n)}
    for flat, (t, gi) in enumerate(cover.decomp):
        if t in plain_pos:
            decomp[flat] = (plain_pos[t], 2 * gi)
        else:
            decomp[flat] = (delta_pos[t], 2 * gi + 1)
    return FreeCover(restricted, gen_degrees, gen_flats, decomp)


def _t_linear_subspace(dr, cover_r, hom_r, target_delta_mod):
    """Subspace of R*-linear maps out of a restricted cover that are
    R*[delta]-linear: the value at delta.e_i is delta times the value
    at 1.e_i."""
    fld = target_delta_mod.field
    ncols = hom_r.dim()
    pos = {c: p for p, c in enumerate(hom_r.coords)}
    rows = []
    tsp = target_delta_mod.space
    n_gens = len(cover_r.gen_degrees) // 2
    for gi in range(n_gens):
        # condition rows live in the target component of delta.e_i's degree
        for tflat in range(tsp.total):
            coeffs = [fld.zero] * ncols
            nontrivial = False
            key = (2 * gi + 1, tflat)
            if key in pos:
                coeffs[pos[key]] = fld.one
                nontrivial = True
            # minus delta . (value at 1.e_i)
            for sflat in range(tsp.total):
                k1 = (2 * gi, sflat)
                if k1 in pos:
                    c = target_delta_mod.act_element(dr.delta, tsp.basis_vector(sflat))[tflat]
                    if c != fld.zero:
                        coeffs[pos[k1]] = fld.sub(coeffs[pos[k1]], c)
                        nontrivial = True
            if nontrivial:
                rows.append(coeffs)
    if not rows:
        return Subspace.full(fld, ncols)
    return Matrix(fld, rows, ncols).kernel()


@dataclass
class Ext1Data:
    ext1_z0: int
    ext1_graded: int
    kernel_dim: int


def ext1_comparison(x_mod, y_mod):
    """Ext^1 over R*[delta], Ext^1 of underlying graded modules, and the
    dimension of the kernel of the comparison, from one shared resolution."""
    dr = delta_ring_for(x_mod.ring)
    fld = x_mod.field
    xt = to_delta_module(dr, x_mod)
    yt = to_delta_module(dr, y_mod)
    cover0, pi0 = free_cover(xt, tag="r0_")
    k0, incl0 = kernel_module(cover0.module, pi0, tag="k0")
    cover1, pi1 = free_cover(k0, tag="r1_")
    # boundary images of F_1 generators inside F_0
    bnd = []
    for flat in cover1.gen_flats:
        v = pi1.apply(cover1.module.space.basis_vector(flat))
        bnd.append(incl0.apply(v))
    # kernel of d_1 : F_1 -> F_0 as flat vectors in F_1
    d1_cols = [None] * cover1.module.space.total
    for flat in range(cover1.module.space.total):
        t, gi = cover1.decomp[flat]
        tv = cover1.module.space.basis_vector(flat)
        # d_1(t . e_gi) = t . bnd[gi] computed in F_0
        d1_cols[flat] = cover0.module.act_element(
            dr.algebra.space.basis_vector(t), bnd[gi]
        )
    ker_d1 = []
    f1sp = cover1.module.space
    f0sp = cover0.module.space
    for g in f1sp.degrees:
        cols = []
        for t in range(f1sp.dims[g]):
            flat = f1sp.flat(g, t)
            cols.append(f0sp.component(d1_cols[flat], g))
        mat = Matrix.from_cols(fld, cols, f1sp.dims[g])
        for v in mat.kernel().basis.data:
            ker_d1.append(f1sp.embed(g, v))
    # restricted covers and Hom spaces
    rcover1 = _restrict_free_cover(dr, cover1)
    rcover0 = _restrict_free_cover(dr, cover0)
    y_r = y_mod.module
    hom1 = FreeHomBasis(rcover1, y_r)
    hom0 = FreeHomBasis(rcover0, y_r)
    nc = hom1.dim()
    if nc == 0:
        return Ext1Data(0, 0, 0)
    # Z^1_R: maps killing ker d_1
    rows = []
    for v in ker_d1:
        rows.extend(hom1.evaluation_matrix(v).data)
    z1_r = Matrix(fld, rows, nc).kernel() if rows else Subspace.full(fld, nc)
    # delta-linearity subspaces
    w1 = _t_linear_subspace(dr, rcover1, hom1, yt)
    w0 = _t_linear_subspace(dr, rcover0, hom0, yt)
    z1_t = z1_r.intersect(w1)

    # boundaries: images of Hom(F_0, Y) under precomposition with d_1
    def compose_with_d1(cvec):
        gmap = hom0.map_from_coords(cvec)
        coords = []
        for gi, tflat in hom1.coords:
            src_flat = rcover1.gen_flats[gi]
            coords.append(gmap.apply(d1_cols[src_flat])[tflat])
        return tuple(coords)

    b_r_vecs = []
    for p in range(hom0.dim()):
        cvec = [fld.zero] * hom0.dim()
        cvec[p] = fld.one
        b_r_vecs.append(compose_with_d1(cvec))
    b1_r = Subspace.from_vectors(fld, nc, b_r_vecs)
    b_t_vecs = []
    for row in w0.basis.data:
        b_t_vecs.append(compose_with_d1(row))
    b1_t = Subspace.from_vectors(fld, nc, b_t_vecs)
    ext1_t = z1_t.dim() - b1_t.dim()
    ext1_r = z1_r.dim() - b1_r.dim()
    kernel_dim = z1_t.intersect(b1_r).dim() - b1_t.dim()
    return Ext1Data(ext1_t, ext1_r, kernel_dim)


def ext1_z0(x_mod, y_mod):
    """dim Ext^1 in the closed degree-0 category, over R*[delta]."""
    return ext1_comparison(x_mod, y_mod).ext1_z0


def homotopy_hom_dim(x_mod, y_mod, n=0):
    """dim Hom in the homotopy category of X -> Y[n]."""
    target = shift(y_mod, n)
    hc = HomComplex(x_mod, target)
    dim, _ = hc.cohomology(0)
    return dim


@dataclass
class LemmaReport:
    """Comparison of Ext^1 kernel and homotopy Hom dimensions."""

    ext1_z0: int
    ext1_graded: int
    kernel_dim: int
    homotopy_dim: int
    x_graded_projective: bool
    y_graded_injective: bool

    def kernel_matches(self):
        return self.kernel_dim == self.homotopy_dim

    def full_equality_expected(self):
        return self.x_graded_projective or self.y_graded_injective

    def full_equality_holds(self):
        return self.ext1_z0 == self.homotopy_dim

    def ok(self):
        if not self.kernel_matches():
            return False
        if self.full_equality_expected() and not self.full_equality_holds():
            return False
        return True


def lemma_ext_hom_check(x_mod, y_mod):
    data = ext1_comparison(x_mod, y_mod)
    hdim = homotopy_hom_dim(x_mod, y_mod, 1)
    return LemmaReport(
        ext1_z0=data.ext1_z0,
        ext1_graded=data.ext1_graded,
        kernel_dim=data.kernel_dim,
        homotopy_dim=hdim,
        x_graded_projective=is_graded_projective(x_mod),
        y_graded_injective=is_graded_injective(y_mod),
    )


# ---------------------------------------------------------------------------
# certificates


@dataclass
class CertificateLayer:
    """One extension 0 -> stage -> E -> C -> 0 with C declared contractible."""

    incl: HomElement
    proj: HomElement
    witness: HomElement | None = None


@dataclass
class ExtensionCertificate:
    """Finite chain of extensions by contractibles, with optional retract.

    stage_0 is the zero module; layer k exhibits stage_{k+1} as an
    extension of a contractible module by stage_k.  If `retract` is
    given as (i, p) with p o i = id, the target is certified as a
    direct summand of the final stage; otherwise the target must equal
    the final stage.
    """

    target: CdgModule
    layers: list
    retract: tuple | None = None


@dataclass
class CertificateVerdict:
    verified: bool
    failures: list = dc_field(default_factory=list)

    def first_failure(self):
        return self.failures[0] if self.failures else None


def verify_absolute_acyclic_certificate(cert):
    """Check every layer exactness, every contractibility witness and
    the retract identity; pinpoints the first invalid layer."""
    failures = []
    ring = cert.target.ring
    prev = zero_cdg(ring)
    for idx, layer in enumerate(cert.layers):
        where = f"layer {idx}"
        if layer.incl.source != prev:
            failures.append((idx, f"{where}: inclusion source is not the previous stage"))
            break
        stage = layer.incl.target
        if layer.proj.source != stage:
            failures.append((idx, f"{where}: projection source mismatch"))
            break
        report = ses_is_exact(layer.incl, layer.proj)
        if report:
            failures.append((idx, f"{where}: sequence not exact: {report[0]}"))
            break
        cmod = layer.proj.target
        wit = layer.witness
        if wit is not None:
            if wit.source != cmod or wit.target != cmod or not (
                wit.differential().gmap == GradedMap.identity(cmod.space)
            ):
                failures.append((idx, f"{where}: supplied witness is not a contraction"))
                break
        else:
            if contracting_homotopy(cmod) is None:
                failures.append((idx, f"{where}: quotient layer is not contractible"))
                break
        prev = stage
    else:
        if cert.retract is not None:
            i, p = cert.retract
            if i.source != cert.target or i.target != prev or p.source != prev or p.target != cert.target:
                failures.append((len(cert.layers), "retract: endpoints mismatch"))
            elif not (i.is_closed() and p.is_closed()):
                failures.append((len(cert.layers), "retract: maps are not closed"))
            elif p.compose(i).gmap != GradedMap.identity(cert.target.space):
                failures.append((len(cert.layers), "retract: p o i != id"))
        else:
            if cert.target != prev:
                failures.append(
                    (len(cert.layers), "target is not the final stage and no retract given")
                )
    return CertificateVerdict(verified=not failures, failures=failures)


def canonical_tot_certificate(alpha, beta, name=None):
    """Totalization of a short exact sequence with its 2-layer certificate.

    For exact 0 -> K -> L -> M -> 0 the totalization at columns
    (-1, 0, 1) sits in 0 -> cone(id_K) -> Tot -> cone(id_M)[-1] -> 0;
    both outer terms are contractible.
    Returns (tot, certificate).
    """
    report = ses_is_exact(alpha, beta)
    if report:
        raise AxiomError("short exact sequence", report)
    kmod, lmod, mmod = alpha.source, alpha.target, beta.target
    ring = kmod.ring
    cx = FiniteComplexOfModules([kmod, lmod, mmod], [alpha, beta], first_index=-1)
    tot, incls, projs = totalize(cx, name=name)
    ck = cone(HomElement.identity(kmod), name="cone(id_K)")
    cm = cone(HomElement.identity(mmod), name="cone(id_M)")
    cm_shift = shift(cm.cone, -1)
    # alpha-hat: cone(id_K) -> Tot = incl_K o onto + incl_L o alpha o back
    a_hat = incls[0].compose(ck.onto).add(
        incls[1].compose(alpha).compose(ck.back)
    )
    # beta-hat: Tot -> cone(id_M)[-1] = into[-1] o proj_M - lift[-1] o beta o proj_L
    into_sh = shift_hom(cm.into, -1, new_target=cm_shift)
    lift_sh = shift_hom(cm.lift, -1, new_target=cm_shift)
    b_hat = into_sh.compose(projs[2]).sub(
        lift_sh.compose(beta).compose(projs[1])
    )
    wit_k = contracting_homotopy(ck.cone)
    wit_m = contracting_homotopy(cm_shift)
    layer1 = CertificateLayer(
        incl=HomElement.zero(zero_cdg(ring), ck.cone, 0),
        proj=HomElement.identity(ck.cone),
        witness=wit_k,
    )
    layer2 = CertificateLayer(incl=a_hat, proj=b_hat, witness=wit_m)
    cert = ExtensionCertificate(target=tot, layers=[layer1, layer2])
    return tot, cert


# ---------------------------------------------------------------------------
# obstructions


@dataclass
class ObstructionReport:
    kind: str
    entries: list  # (test name, dim Hom_{H^0})
    refuted: bool

    def verdict(self):
        return "refuted" if self.refuted else "not-refuted"


def coacyclic_obstruction(x_mod, tests):
    """Homotopy Hom dimensions against graded-injective test objects.

    A nonzero dimension soundly refutes coacyclicity; all-zero is not a
    proof of it.
    """
    entries = []
    for j in tests:
        if not is_graded_injective(j):
            raise AxiomError(
                "obstruction", [f"test object {j.name} is not graded-injective"]
            )
        dim, _ = HomComplex(x_mod, j).cohomology(0)
        entries.append((j.name, dim))
    return ObstructionReport(
        kind="coacyclic",
        entries=entries,
        refuted=any(d != 0 for _, d in entries),
    )


def contraacyclic_obstruction(x_mod, tests):
    entries = []
    for q in tests:
        if not is_graded_projective(q):
            raise AxiomError(
                "obstruction", [f"test object {q.name} is not graded-projective"]
            )
        dim, _ = HomComplex(q, x_mod).cohomology(0)
        entries.append((q.name, dim))
    return ObstructionReport(
        kind="contraacyclic",
        entries=entries,
        refuted=any(d != 0 for _, d in entries),
    )


# ---------------------------------------------------------------------------
# default test families


def _valid_differentials(ring, gmod, cap=1024):
    """All CDG differentials on a graded module, found by enumeration.

    The Leibniz-compatible degree-1 maps form an affine space (linear
    when the ring differential vanishes); over a small prime field the
    d^2 = h condition is checked by exhaustive enumeration, over the
    rationals only the zero map is tried.
    """
    out = []
    zero_d = GradedMap.zero(gmod.space, gmod.space, 1)
    try:
        out.append(CdgModule(ring, gmod, zero_d, name="d0"))
    except AxiomError:
        pass
    fld = ring.field
    if fld.char == 0 or not ring.d.is_zero():
        return out
    hs = hom_graded(gmod, gmod, 1)
    dim = hs.dim()
    if dim == 0 or fld.char ** dim > cap:
        return out
    from itertools import product as iproduct

    seen = []
    for coeffs in iproduct(range(fld.char), repeat=dim):
        if not any(coeffs):
            continue
        vec = [fld.zero] * hs.ambient_dim()
        for c, row in zip(coeffs, hs.space.basis.data):
            if c:
                vec = [fld.add(v, fld.mul(c, r)) for v, r in zip(vec, row)]
        gmap = hs.map_from_coords(vec)
        try:
            cand = CdgModule(ring, gmod, gmap, name=f"d{len(out)}")
        except AxiomError:
            continue
        out.append(cand)
    return out


def _injective_cogenerator(alg):
    """Dual of the regular module of the opposite algebra, over alg itself."""
    opp = opposite_algebra(alg)
    dual = dual_module(regular_module(opp), opp=opposite_algebra(opp))
    # opposite of opposite has the same structure constants as alg
    return GradedModule(alg, dual.space, dual.action)


def default_coacyclic_tests(ring, lo=-2, hi=2, cap=1024):
    """Shifts of the injective cogenerator with every valid differential,
    plus the cofree modules on them."""
    dr = delta_ring_for(ring)
    cog = _injective_cogenerator(ring.algebra)
    tests = []
    shifts = range(lo, hi + 1) if ring.grading.kind == "z" else range(0, 2)
    for n in shifts:
        shifted = shift_module(cog, n)
        for cand in _valid_differentials(ring, shifted, cap=cap):
            cand.name = f"inj[{n}]#{cand.name}"
            tests.append(cand)
        gm = g_minus(dr, shifted, name=f"cofree(inj[{n}])")
        tests.append(gm.module)
    return tests


def default_contraacyclic_tests(ring, lo=-2, hi=2, cap=1024):
    """Shifts of the free rank-1 module with every valid differential,
    plus the free modules on them."""
    dr = delta_ring_for(ring)
    reg = regular_module(ring.algebra)
    tests = []
    shifts = range(lo, hi + 1) if ring.grading.kind == "z" else range(0, 2)
    for n in shifts:
        shifted = shift_module(reg, n)
        for cand in _valid_differentials(ring, shifted, cap=cap):
            cand.name = f"proj[{n}]#{cand.name}"
            tests.append(cand)
        gp = g_plus(dr, shifted, name=f"free(proj[{n}])")
        tests.append(gp.module)
    return tests
