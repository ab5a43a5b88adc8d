"""Shifts, twists, cones and finite totalizations of CDG-modules.

Conventions fixed here and verified by the structure-identity checks:

* shift: (M[i])^n = M^{n+i}, differential (-1)^i d, action twisted by
  (-1)^{i|r|};
* cone of a closed degree-0 morphism f : X -> Y: underlying module
  Y (+) X[1] with d(y, x) = (d_Y y + f x, -d_X x);
* totalization of a finite complex: column p contributes X^p[-p] with
  internal differential (-1)^p d, external differential the transition
  map; a two-term complex in columns (-1, 0) is literally the cone.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cdg import (
    CdgModule,
    HomElement,
    ses_is_exact,
)
from .graded import (
    AxiomError,
    GradedMap,
    direct_sum_modules,
    shift_graded_map,
    shift_module,
)
from .linalg import DimensionError


def shift(mod, i, name=None):
    """Shift of a CDG-module; shift(shift(M, a), b) equals shift(M, a+b)."""
    gr = mod.grading
    if (gr.kind == "z2" and i % 2 == 0) or i == 0:
        return mod
    gshift = shift_module(mod.module, i)
    d_blocks = {}
    sgn = -1 if gr.par(i) else 1
    for g in mod.space.degrees:
        mat = mod.d.block(g)
        if mat.rows and mat.cols:
            key = gr.norm(g - i)
            d_blocks[key] = mat.scale(mod.field.neg(mod.field.one)) if sgn < 0 else mat
    d_new = GradedMap(gshift.space, gshift.space, 1, d_blocks)
    return CdgModule(
        mod.ring, gshift, d_new, name=name or f"{mod.name}[{i}]"
    )


def shift_hom(f, i, new_source=None, new_target=None):
    """The morphism f viewed between the i-shifted modules (same grids)."""
    src = new_source or shift(f.source, i)
    tgt = new_target or shift(f.target, i)
    gmap = shift_graded_map(f.gmap, src.space, tgt.space, i, i)
    return HomElement(src, tgt, gmap, check=False)


class MCCochain:
    """Degree-1 endomorphism a with d(a) + a^2 = 0, validated eagerly."""

    __slots__ = ("element",)

    def __init__(self, element):
        if element.source is not element.target and element.source != element.target:
            raise DimensionError("Maurer-Cartan cochain must be an endomorphism")
        if element.degree != element.source.grading.norm(1):
            raise AxiomError("Maurer-Cartan", ["cochain degree must be 1"])
        defect = element.differential().add(element.compose(element))
        if not defect.is_zero():
            raise AxiomError("Maurer-Cartan", ["d(a) + a^2 != 0"])
        self.element = element

    @property
    def module(self):
        return self.element.source


def twist(mod, mc, name=None):
    """Twist M(a): same underlying module, differential d + a.

    The identity grid is an isomorphism of underlying graded modules
    M -> M(a), and it satisfies d(f) = f a for the twisted target.
    """
    if isinstance(mc, HomElement):
        mc = MCCochain(mc)
    if mc.module != mod:
        raise DimensionError("cochain is not an endomorphism of this module")
    d_new = mod.d.add_map(mc.element.gmap)
    return CdgModule(mod.ring, mod.module, d_new, name=name or f"{mod.name}(tw)")


def untwist_cochain(twisted, original):
    """The Maurer-Cartan cochain -a on M(a) whose twist recovers M."""
    diff = original.d.sub_map(twisted.d)
    return MCCochain(HomElement(twisted, twisted, diff, check=False))


@dataclass
class ConeData:
    """Cone of a closed degree-0 morphism with its structure morphisms.

    `into` and `onto` are the closed maps Y -> C -> X[1]; `back` and
    `lift` are the non-closed splittings C -> Y and X[1] -> C.  They
    satisfy back o into = id, onto o lift = id, back o lift = 0,
    onto o into = 0, into o back + lift o onto = id_C, and
    d(back) = -(f-shift) o onto, d(lift) = into o (f-shift).

    For the cone of the identity of A[-1] the same grids reindexed
    against A are stored in iota (degree 1), pi (0), pi_prime (-1),
    iota_prime (0), satisfying the six cone-of-identity equations.
    """

    morphism: HomElement
    cone: CdgModule
    shifted_source: CdgModule
    into: HomElement
    onto: HomElement
    back: HomElement
    lift: HomElement
    iota: HomElement | None = None
    pi: HomElement | None = None
    pi_prime: HomElement | None = None
    iota_prime: HomElement | None = None

    def exactness_report(self):
        """Exactness of Y -> C -> X[1] in the closed degree-0 category."""
        return ses_is_exact(self.into, self.onto)

    def structure_report(self):
        """Violations of the structure-morphism identities; empty = good."""
        out = []
        idc = HomElement.identity(self.cone)
        y = self.morphism.target
        x1 = self.shifted_source
        if not self.back.compose(self.into).sub(HomElement.identity(y)).is_zero():
            out.append("back o into != id")
        if not self.onto.compose(self.lift).sub(HomElement.identity(x1)).is_zero():
            out.append("onto o lift != id")
        if not self.back.compose(self.lift).is_zero():
            out.append("back o lift != 0")
        if not self.onto.compose(self.into).is_zero():
            out.append("onto o into != 0")
        comb = self.into.compose(self.back).add(self.lift.compose(self.onto))
        if not comb.sub(idc).is_zero():
            out.append("into o back + lift o onto != id_C")
        if not self.into.differential().is_zero():
            out.append("d(into) != 0")
        if not self.onto.differential().is_zero():
            out.append("d(onto) != 0")
        # f viewed as the degree-1 map X[1] -> Y
        u = _shift_as_target_map(self.morphism, self.shifted_source)
        if not self.back.differential().add(u.compose(self.onto)).is_zero():
            out.append("d(back) != -(f[1]) o onto")
        if not self.lift.differential().sub(self.into.compose(u)).is_zero():
            out.append("d(lift) != into o (f[1])")
        if self.iota is not None:
            out.extend(self._identity_cone_report())
        return out

    def _identity_cone_report(self):
        out = []
        a_mod = self.pi.target
        ida = HomElement.identity(a_mod)
        idc = HomElement.identity(self.cone)
        checks = [
            ("pi_prime o iota_prime != 0", self.pi_prime.compose(self.iota_prime)),
            ("pi o iota != 0", self.pi.compose(self.iota)),
        ]
        for label, val in checks:
            if not val.is_zero():
                out.append(label)
        if not self.pi_prime.compose(self.iota).sub(ida).is_zero():
            out.append("pi_prime o iota != id")
        if not self.pi.compose(self.iota_prime).sub(ida).is_zero():
            out.append("pi o iota_prime != id")
        s = self.iota.compose(self.pi_prime).add(self.iota_prime.compose(self.pi))
        if not s.sub(idc).is_zero():
            out.append("iota o pi_prime + iota_prime o pi != id_C")
        if not self.iota.differential().is_zero():
            out.append("d(iota) != 0")
        if not self.pi.differential().is_zero():
            out.append("d(pi) != 0")
        if not self.pi_prime.differential().sub(self.pi).is_zero():
            out.append("d(pi_prime) != pi")
        if not self.iota_prime.differential().sub(self.iota).is_zero():
            out.append("d(iota_prime) != iota")
        return out


def _shift_as_target_map(f, shifted_source):
    """f : X -> Y as the degree-1 map X[1] -> Y with the same grids."""
    gmap = shift_graded_map(f.gmap, shifted_source.space, f.target.space, 1, 0)
    return HomElement(shifted_source, f.target, gmap, check=False)


def cone(f, name=None):
    """Cone of a closed degree-0 morphism f : X -> Y."""
    if f.degree != f.source.grading.norm(0):
        raise DimensionError("cone requires a degree-0 morphism")
    if not f.is_closed():
        raise AxiomError("cone", ["morphism is not closed"])
    x, y = f.source, f.target
    x1 = shift(x, 1)
    total_g, incls_g, projs_g = direct_sum_modules(
        [y.module, x1.module], tags=["y.", "x."]
    )
    u = _shift_as_target_hom_raw(f, x1)
    d_c = (
        incls_g[0].compose(y.d).compose(projs_g[0])
        .add_map(incls_g[1].compose(x1.d).compose(projs_g[1]))
        .add_map(incls_g[0].compose(u).compose(projs_g[1]))
    )
    cmod = CdgModule(
        f.source.ring, total_g, d_c, name=name or f"cone({x.name}->{y.name})"
    )
    into = HomElement(y, cmod, incls_g[0], check=False)
    onto = HomElement(cmod, x1, projs_g[1], check=False)
    back = HomElement(cmod, y, projs_g[0], check=False)
    lift = HomElement(x1, cmod, incls_g[1], check=False)
    return ConeData(
        morphism=f,
        cone=cmod,
        shifted_source=x1,
        into=into,
        onto=onto,
        back=back,
        lift=lift,
    )


def _shift_as_target_hom_raw(f, x1):
    """Grids of f as a degree-1 GradedMap X[1]# -> Y#."""
    return shift_graded_map(f.gmap, x1.space, f.target.space, 1, 0)


def xi(a_mod, name=None):
    """Cone of the identity of A[-1], with structure morphisms against A.

    Underlying module A[-1] (+) A; iota(a) = (a, 0), pi(y, x) = x,
    pi_prime(y, x) = y, iota_prime(a) = (0, a).
    """
    am1 = shift(a_mod, -1)
    cd = cone(HomElement.identity(am1), name=name or f"Xi({a_mod.name})")
    # reindex the summand maps against A itself: A = A[-1][1], so sources
    # A[-1] reindex with i_src = 1 and targets A[-1] with i_tgt = 1, while
    # the X[1] = A[-1][1] leg already has A's components.
    cd.iota = HomElement(
        a_mod,
        cd.cone,
        shift_graded_map(cd.into.gmap, a_mod.space, cd.cone.space, 1, 0),
        check=False,
    )
    cd.pi_prime = HomElement(
        cd.cone,
        a_mod,
        shift_graded_map(cd.back.gmap, cd.cone.space, a_mod.space, 0, 1),
        check=False,
    )
    cd.iota_prime = HomElement(
        a_mod,
        cd.cone,
        shift_graded_map(cd.lift.gmap, a_mod.space, cd.cone.space, 0, 0),
        check=False,
    )
    cd.pi = HomElement(
        cd.cone,
        a_mod,
        shift_graded_map(cd.onto.gmap, cd.cone.space, a_mod.space, 0, 0),
        check=False,
    )
    return cd


@dataclass
class FiniteComplexOfModules:
    """Finite complex in the closed degree-0 category: X^p -> X^{p+1}.

    `first_index` is the column of modules[0]; transitions[p] is the
    closed morphism X^{first+p} -> X^{first+p+1}.
    """

    modules: list
    transitions: list
    first_index: int = 0

    def __post_init__(self):
        if len(self.transitions) != max(len(self.modules) - 1, 0):
            raise DimensionError("need one transition per adjacent pair")
        gr = self.modules[0].grading
        out = []
        for p, t in enumerate(self.transitions):
            if t.source != self.modules[p] or t.target != self.modules[p + 1]:
                raise DimensionError(f"transition {p} does not match its columns")
            if t.degree != gr.norm(0):
                out.append(f"transition {p} is not of degree 0")
            elif not t.is_closed():
                out.append(f"transition {p} is not closed")
        for p in range(len(self.transitions) - 1):
            if not self.transitions[p + 1].compose(self.transitions[p]).is_zero():
                out.append(f"composite at position {p} is nonzero")
        if out:
            raise AxiomError("complex of modules", out)


def totalize(cx, name=None):
    """Collapse a finite complex of CDG-modules along the diagonals.

    Column p contributes X^p[-p]; summands are assembled in descending
    column order, so Tot(X -> Y) at columns (-1, 0) equals cone(f) on
    the nose.  Returns (Tot, inclusions, projections) indexed like
    cx.modules.
    """
    mods = cx.modules
    if not mods:
        raise DimensionError("totalization of an empty complex")
    if len(mods) == 1:
        m = shift(mods[0], -cx.first_index)
        idm = HomElement.identity(m)
        return m, [idm], [idm]
    ring = mods[0].ring
    cols = list(range(cx.first_index, cx.first_index + len(mods)))
    shifted = [shift(m, -p) for m, p in zip(mods, cols)]
    order = list(range(len(mods)))[::-1]  # descending column order
    total_g, incls_g, projs_g = direct_sum_modules(
        [shifted[i].module for i in order],
        tags=[f"c{cols[i]}." for i in order],
    )
    incls = [None] * len(mods)
    projs = [None] * len(mods)
    for slot, i in enumerate(order):
        incls[i] = incls_g[slot]
        projs[i] = projs_g[slot]
    d_total = GradedMap.zero(total_g.space, total_g.space, 1)
    for i, sh in enumerate(shifted):
        d_total = d_total.add_map(incls[i].compose(sh.d).compose(projs[i]))
    for p in range(len(mods) - 1):
        t = cx.transitions[p]
        # X^p[-p] -> X^{p+1}[-p-1]: sources shifted by -col, targets by -col-1
        ext = shift_graded_map(
            t.gmap, shifted[p].space, shifted[p + 1].space, -cols[p], -cols[p] - 1
        )
        d_total = d_total.add_map(incls[p + 1].compose(ext).compose(projs[p]))
    tot = CdgModule(
        ring,
        total_g,
        d_total,
        name=name or "Tot(" + "->".join(m.name for m in mods) + ")",
    )
    incl_homs = [
        HomElement(sh, tot, g, check=False) for sh, g in zip(shifted, incls)
    ]
    proj_homs = [
        HomElement(tot, sh, g, check=False) for sh, g in zip(shifted, projs)
    ]
    return tot, incl_homs, proj_homs
