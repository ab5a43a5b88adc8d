"""Built-in example rings and modules, plus seeded instance generators.

Three base rings parameterised by the scalar field:

* ``K``    the field itself in degree 0 (d = 0, h = 0); CDG-modules over
           it are bounded complexes of vector spaces.
* ``DUAL`` dual numbers k[e]/e^2 with e in degree 1 (d = 0, h = 0).
* ``MF2``  Z/2-graded k[u]/u^2 with u of even degree, d = 0 and
           curvature h = u; CDG-modules are matrix factorizations of u.
"""

from __future__ import annotations

from .cdg import CdgModule, CdgRing
from .graded import (
    GradedAlgebra,
    GradedMap,
    GradedModule,
    GradedSpace,
    GradingGroup,
    free_module,
)
from .linalg import Matrix


def make_algebra_k(field, window=64):
    """The scalar field as a graded algebra concentrated in degree 0."""
    gr = GradingGroup("z", window)
    sp = GradedSpace(field, gr, {0: 1}, {0: ("1",)})
    one = (field.one,)
    return GradedAlgebra(sp, [[one]], one)


def make_algebra_dual(field, window=64):
    """k[e]/e^2 with |e| = 1, Z-graded."""
    gr = GradingGroup("z", window)
    sp = GradedSpace(field, gr, {0: 1, 1: 1}, {0: ("1",), 1: ("e",)})
    z, o = field.zero, field.one
    one = (o, z)
    e = (z, o)
    zero = (z, z)
    mult = [
        [one, e],
        [e, zero],
    ]
    return GradedAlgebra(sp, mult, one)


def make_algebra_mf2(field):
    """Z/2-graded k[u]/u^2 with u of even degree (both basis vectors in 0)."""
    gr = GradingGroup("z2")
    sp = GradedSpace(field, gr, {0: 2}, {0: ("1", "u")})
    z, o = field.zero, field.one
    one = (o, z)
    u = (z, o)
    zero = (z, z)
    mult = [
        [one, u],
        [u, zero],
    ]
    return GradedAlgebra(sp, mult, one)


def simple_module(alg, degree=0, label="s"):
    """One-dimensional module where every positive-degree generator acts by 0.

    For the built-in algebras this is the simple top of the regular module
    (u and e act by zero, scalars act as scalars).
    """
    gr = alg.grading
    sp = GradedSpace(alg.field, gr, {degree: 1}, {degree: (label,)})
    f = alg.field
    action = []
    for b in range(alg.space.total):
        if alg.unit[b] != f.zero and alg.basis_degree(b) == gr.norm(0):
            # scale of the unit coefficient acts as that scalar
            action.append([(alg.unit[b],)])
        else:
            action.append([(f.zero,)])
    return GradedModule(alg, sp, action)


def free_rank_one(alg, degree=0, tag="x"):
    """Free module on one generator in the given degree."""
    return free_module(alg, [degree], tag=tag).module


# ---------------------------------------------------------------------------
# CDG-rings


def make_ring_k(field, window=64):
    """The field as a CDG-ring: d = 0, h = 0; modules are complexes."""
    alg = make_algebra_k(field, window)
    d = GradedMap.zero(alg.space, alg.space, 1)
    return CdgRing(alg, d, (field.zero,), name="K")


def make_ring_dual(field, window=64):
    """k[e]/e^2, |e| = 1, d = 0, h = 0."""
    alg = make_algebra_dual(field, window)
    d = GradedMap.zero(alg.space, alg.space, 1)
    return CdgRing(alg, d, (field.zero, field.zero), name="DUAL")


def make_ring_mf2(field):
    """Z/2-graded k[u]/u^2 with curvature h = u; modules are matrix
    factorizations of u."""
    alg = make_algebra_mf2(field)
    d = GradedMap.zero(alg.space, alg.space, 1)
    return CdgRing(alg, d, (field.zero, field.one), name="MF2")


# ---------------------------------------------------------------------------
# CDG-modules


def scalar_graded_module(ring, dims, labels=None):
    """Graded module over a 1-dimensional algebra (scalar action)."""
    alg = ring.algebra
    if alg.space.total != 1:
        raise ValueError("scalar_graded_module requires a 1-dimensional algebra")
    sp = GradedSpace(ring.field, ring.grading, dims, labels)
    action = [[sp.basis_vector(j) for j in range(sp.total)]]
    return GradedModule(alg, sp, action)


def complex_cdg(ring, dims, diffs, name="X"):
    """Bounded complex of vector spaces as a CDG-module over the ring K.

    `dims` maps degree -> dimension; `diffs` maps degree g to the matrix
    of d_g : X^g -> X^{g+1} (entries over the ring's field).
    """
    gmod = scalar_graded_module(ring, dims)
    blocks = {g: m for g, m in diffs.items() if m.rows or m.cols}
    d = GradedMap(gmod.space, gmod.space, 1, blocks)
    return CdgModule(ring, gmod, d, name=name)


def zero_diff_cdg(ring, gmod, name="M"):
    """CDG-module with zero differential (valid only when h acts by 0)."""
    d = GradedMap.zero(gmod.space, gmod.space, 1)
    return CdgModule(ring, gmod, d, name=name)


def simple_cdg(ring, degree=0, name=None):
    """The simple one-dimensional module with zero differential."""
    gmod = simple_module(ring.algebra, degree, label=f"s{degree}")
    return zero_diff_cdg(ring, gmod, name=name or f"S{degree}")


def mf_rank11(ring, name="mf11"):
    """Rank-(1,1) matrix factorization of u over the MF2 ring.

    Free on generators e0 (even) and e1 (odd); d(e0) = e1, d(e1) = u e0.
    """
    alg = ring.algebra
    f = ring.field
    cover = free_module(alg, [0, 1], tag="e")
    gmod = cover.module
    # degree 0 basis: (e0, u e0); degree 1 basis: (e1, u e1)
    z, o = f.zero, f.one
    blocks = {
        0: Matrix(f, [[o, z], [z, o]]),
        1: Matrix(f, [[z, z], [o, z]]),
    }
    d = GradedMap(gmod.space, gmod.space, 1, blocks)
    return CdgModule(ring, gmod, d, name=name)


# ---------------------------------------------------------------------------
# seeded instance generators


def _graded_atoms(alg, window=2):
    out = []
    if alg.grading.kind == "z2":
        degrees = (0, 1)
    else:
        degrees = range(-1, window)
    for n in degrees:
        out.append(free_rank_one(alg, n, tag=f"f{n}_"))
        out.append(simple_module(alg, n, label=f"s{n}"))
    return out


def random_graded_module(alg, rng, max_total=4, window=2):
    """Seeded random graded module: a small direct sum of atoms."""
    from .graded import direct_sum_modules

    atoms = _graded_atoms(alg, window)
    picked = []
    total = 0
    for _ in range(rng.randint(1, 2)):
        a = atoms[rng.randrange(len(atoms))]
        if total + a.space.total > max_total:
            continue
        picked.append(a)
        total += a.space.total
    if not picked:
        picked = [simple_module(alg, 0)]
    if len(picked) == 1:
        return picked[0]
    return direct_sum_modules(picked)[0]


def _cdg_atoms(ring, window=2):
    """Small valid CDG-modules over a registry ring."""
    from .deltaring import build_delta_ring, g_plus

    name = ring.name
    out = []
    if name == "K":
        f = ring.field
        for n in (-1, 0, 1):
            out.append(
                complex_cdg(ring, {n: 1}, {}, name=f"k[{n}]")
            )
        out.append(
            complex_cdg(
                ring, {0: 1, 1: 1}, {0: Matrix(f, [[f.one]], 1)}, name="acy01"
            )
        )
        out.append(complex_cdg(ring, {0: 1, 1: 1}, {}, name="z01"))
    elif name == "DUAL":
        out.append(zero_diff_cdg(ring, free_rank_one(ring.algebra, 0, "a"), name="free0"))
        out.append(simple_cdg(ring, 0))
        out.append(simple_cdg(ring, 1))
    else:  # MF2 flavour
        out.append(mf_rank11(ring))
        out.append(simple_cdg(ring, 0))
        out.append(simple_cdg(ring, 1))
    return out


def random_cdg_module(ring, rng, max_total=6, depth=2):
    """Seeded random CDG-module built from atoms by sums, shifts and cones."""
    from .cdg import direct_sum_cdg
    from .constructions import cone, shift

    atoms = _cdg_atoms(ring)
    mod = atoms[rng.randrange(len(atoms))]
    for _ in range(depth):
        op = rng.randrange(4)
        if op == 0:
            mod = shift(mod, rng.choice([-1, 1]))
        elif op == 1:
            other = atoms[rng.randrange(len(atoms))]
            if mod.total_dim() + other.total_dim() <= max_total:
                mod = direct_sum_cdg([mod, other])[0]
        elif op == 2 and 2 * mod.total_dim() <= max_total:
            other = atoms[rng.randrange(len(atoms))]
            f = random_closed_morphism(other, mod, rng)
            if f is not None and other.total_dim() + mod.total_dim() <= max_total:
                mod = cone(f).cone
        # op == 3: keep as is
    return mod


def random_closed_morphism(x_mod, y_mod, rng):
    """Random element of the closed degree-0 morphisms, or None."""
    from .cdg import HomComplex, HomElement

    hc = HomComplex(x_mod, y_mod)
    z = hc.cocycles(0)
    if z.dim() == 0:
        return HomElement.zero(x_mod, y_mod, 0)
    f = x_mod.field
    hs = hc.space(0)
    vec = [f.zero] * hs.ambient_dim()
    for row in z.basis.data:
        if f.char == 0:
            c = f.from_int(rng.randint(-2, 2))
        else:
            c = f.from_int(rng.randrange(f.char))
        if c != f.zero:
            canon = _combine_rows(f, row, hs.space.basis.data)
            vec = [f.add(v, f.mul(c, w)) for v, w in zip(vec, canon)]
    return HomElement(x_mod, y_mod, hs.map_from_coords(vec), check=False)


def _combine_rows(field, coeffs, rows):
    if not rows:
        return ()
    out = [field.zero] * len(rows[0])
    for c, row in zip(coeffs, rows):
        if c != field.zero:
            out = [field.add(o, field.mul(c, x)) for o, x in zip(out, row)]
    return tuple(out)


def random_ses(ring, rng, max_total=6):
    """Seeded random short exact sequence 0 -> K -> B -> Q -> 0 in the
    closed degree-0 category: kernel and coimage of a random morphism."""
    from .cdg import corestrict, kernel_cdg

    b = random_cdg_module(ring, rng, max_total=max_total)
    c = random_cdg_module(ring, rng, max_total=max_total)
    u = random_closed_morphism(b, c, rng)
    kmod, incl = kernel_cdg(u, name="K")
    img, beta, _ = corestrict(u)
    return incl, beta


# ---------------------------------------------------------------------------
# the named registry


class Registry:
    """Built-in rings and named example modules over a chosen field."""

    def __init__(self, field, window=16):
        self.field = field
        self.window = window
        self.rings = {
            "K": make_ring_k(field, window),
            "DUAL": make_ring_dual(field, window),
            "MF2": make_ring_mf2(field),
        }
        self.modules = {}
        self._populate()

    def _populate(self):
        from .cdg import HomElement, direct_sum_cdg
        from .constructions import cone
        from .deltaring import build_delta_ring, g_minus, g_plus
        from .second_kind import delta_ring_for

        f = self.field
        k = self.rings["K"]
        dual = self.rings["DUAL"]
        mf2 = self.rings["MF2"]
        add = self._add

        add("K.point0", complex_cdg(k, {0: 1}, {}, name="K.point0"))
        add("K.point1", complex_cdg(k, {1: 1}, {}, name="K.point1"))
        add(
            "K.acyclic",
            complex_cdg(k, {0: 1, 1: 1}, {0: Matrix(f, [[f.one]], 1)}, name="K.acyclic"),
        )
        add("K.twoterm", complex_cdg(k, {0: 1, 1: 1}, {}, name="K.twoterm"))
        add(
            "K.sum",
            direct_sum_cdg(
                [self.modules["K.point0"], self.modules["K.acyclic"]], name="K.sum"
            )[0],
        )
        add("DUAL.free0", zero_diff_cdg(dual, free_rank_one(dual.algebra, 0, "a"), name="DUAL.free0"))
        add("DUAL.s0", simple_cdg(dual, 0, name="DUAL.s0"))
        add("DUAL.s1", simple_cdg(dual, 1, name="DUAL.s1"))
        dd = delta_ring_for(dual)
        add("DUAL.gplus", g_plus(dd, simple_module(dual.algebra, 0)).module)
        self.modules["DUAL.gplus"].name = "DUAL.gplus"
        add("MF2.mf11", mf_rank11(mf2, name="MF2.mf11"))
        add("MF2.s0", simple_cdg(mf2, 0, name="MF2.s0"))
        add("MF2.s1", simple_cdg(mf2, 1, name="MF2.s1"))
        dm = delta_ring_for(mf2)
        add("MF2.gminus", g_minus(dm, simple_module(mf2.algebra, 0)).module)
        self.modules["MF2.gminus"].name = "MF2.gminus"
        add("MF2.cone11", cone(HomElement.identity(self.modules["MF2.mf11"])).cone)
        self.modules["MF2.cone11"].name = "MF2.cone11"
        # canonical totalizations of split short exact sequences
        for ring_name, a_name, b_name in (
            ("K", "K.point0", "K.acyclic"),
            ("MF2", "MF2.mf11", "MF2.s0"),
        ):
            from .cdg import direct_sum_cdg as dsum

            a = self.modules[a_name]
            b = self.modules[b_name]
            total, incls, projs = dsum([a, b])
            from .second_kind import canonical_tot_certificate

            tot, cert = canonical_tot_certificate(incls[0], projs[1])
            tot.name = f"{ring_name}.tot"
            add(f"{ring_name}.tot", tot)

    def _add(self, name, mod):
        mod.name = name
        self.modules[name] = mod

    def ring_of(self, name):
        return self.rings[name]

    def module_names(self):
        return sorted(self.modules)

    def validate_all(self):
        """Run every validator over the registry; returns failures list."""
        from .cdg import module_violations, ring_violations
        from .graded import validate_algebra, validate_module

        failures = []
        for name, ring in sorted(self.rings.items()):
            rep = validate_algebra(ring.algebra)
            rep += ring_violations(ring.algebra, ring.d, ring.h)
            for line in rep:
                failures.append(f"{name}: {line}")
        for name, mod in sorted(self.modules.items()):
            rep = validate_module(mod.module)
            rep += module_violations(mod.ring, mod.module, mod.d)
            for line in rep:
                failures.append(f"{name}: {line}")
        return failures


def build_registry(field, window=16):
    return Registry(field, window)
