"""Contracted modules: pairs (X, sigma) with d(sigma) = id and sigma^2 = 0.

Hom spaces between such pairs flip the grading sign: the degree-n
morphisms are the closed elements of Hom^{-n}(X, Y), with differential
the commutator with the contracting homotopies,
``d'(f) = sigma_Y f - (-1)^n f sigma_X``.

phi sends a module A to the cone of id_{A[-1]} with sigma = iota' pi';
psi_plus / psi_minus forget to the base and its shift.  phi_tilde and
the double construction embed morphism spaces fully faithfully; all
functor identities are verified instance by instance with explicit
grids, never assumed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cdg import (
    HomComplex,
    HomElement,
    RingMismatch,
)
from .constructions import shift, xi
from .graded import AxiomError, GradedMap, shift_graded_map
from .linalg import Matrix, Subspace


class BecModule:
    """CDG-module with a square-zero contracting homotopy."""

    __slots__ = ("base", "sigma", "cone_data", "name")

    def __init__(self, base, sigma, cone_data=None, name=None):
        violations = []
        if sigma.source != base or sigma.target != base:
            raise AxiomError("bec object", ["sigma is not an endomorphism of the base"])
        if sigma.degree != base.grading.norm(-1):
            violations.append("sigma must have degree -1")
        else:
            if not sigma.compose(sigma).is_zero():
                violations.append("sigma^2 != 0")
            ds = sigma.differential()
            if ds.gmap != GradedMap.identity(base.space):
                violations.append("d(sigma) != id")
        if violations:
            raise AxiomError("bec object", violations)
        self.base = base
        self.sigma = sigma
        self.cone_data = cone_data
        self.name = name or f"{base.name}^bec"

    @property
    def ring(self):
        return self.base.ring

    def __eq__(self, other):
        return (
            isinstance(other, BecModule)
            and self.base == other.base
            and self.sigma.gmap == other.sigma.gmap
        )

    def __repr__(self):
        return f"BecModule({self.name})"


class BecBecModule:
    """(W, sigma, tau): sigma^2 = 0 = tau^2, sigma tau + tau sigma = id,
    d(sigma) = id, d(tau) = 0."""

    __slots__ = ("base", "sigma", "tau", "cone_data", "name")

    def __init__(self, base, sigma, tau, cone_data=None, name=None):
        violations = []
        gr = base.grading
        if sigma.degree != gr.norm(-1):
            violations.append("sigma must have degree -1")
        if tau.degree != gr.norm(1):
            violations.append("tau must have degree 1")
        if not violations:
            if not sigma.compose(sigma).is_zero():
                violations.append("sigma^2 != 0")
            if not tau.compose(tau).is_zero():
                violations.append("tau^2 != 0")
            anti = sigma.compose(tau).add(tau.compose(sigma))
            if anti.gmap != GradedMap.identity(base.space):
                violations.append("sigma tau + tau sigma != id")
            if sigma.differential().gmap != GradedMap.identity(base.space):
                violations.append("d(sigma) != id")
            if not tau.differential().is_zero():
                violations.append("d(tau) != 0")
        if violations:
            raise AxiomError("bec-bec object", violations)
        self.base = base
        self.sigma = sigma
        self.tau = tau
        self.cone_data = cone_data
        self.name = name or f"{base.name}^becbec"

    def contracted(self):
        return BecModule(self.base, self.sigma, cone_data=self.cone_data)


def bec_shift(xb, n):
    """Shift in the contracted category: one step is (X, s) -> (X[-1], -s)."""
    if n == 0:
        return xb
    gr = xb.base.grading
    base = shift(xb.base, -n)
    sign = -1 if gr.par(n) else 1
    gmap = shift_graded_map(
        xb.sigma.gmap, base.space, base.space, -n, -n
    )
    if sign < 0:
        gmap = gmap.scale(xb.base.field.neg(xb.base.field.one))
    sigma = HomElement(base, base, gmap, check=False)
    return BecModule(base, sigma, name=f"{xb.name}[{n}]")


class BecHomComplex:
    """Hom complex in the contracted category.

    Degree-n elements are the closed elements of Hom^{-n}(X, Y); they
    are represented by coordinates in the canonical cocycle basis of
    the underlying Hom complex.
    """

    def __init__(self, xb, yb):
        if xb.ring != yb.ring:
            raise RingMismatch("bec Hom needs a common ring")
        self.source = xb
        self.target = yb
        self.base = HomComplex(xb.base, yb.base)
        self.grading = xb.base.grading
        if self.grading.kind == "z2":
            self.degrees = [0, 1]
        else:
            self.degrees = [-n for n in self.base.degrees][::-1]
        self._closed = {}
        self._diffs = {}

    def _norm(self, n):
        return self.grading.norm(n)

    def closed_space(self, n):
        """Cocycle subspace of Hom^{-n} in its canonical coordinates."""
        n = self._norm(n)
        if n not in self._closed:
            self._closed[n] = self.base.cocycles(self.grading.neg(n))
        return self._closed[n]

    def dim(self, n):
        if self.grading.kind == "z" and n not in self.degrees:
            return 0
        return self.closed_space(n).dim()

    def basis_elements(self, n):
        sp = self.closed_space(n)
        hs = self.base.space(self.grading.neg(n))
        fld = self.source.base.field
        out = []
        for row in sp.basis.data:
            ambient = _combine(fld, row, hs.space.basis.data)
            out.append(
                HomElement(
                    self.source.base,
                    self.target.base,
                    hs.map_from_coords(ambient),
                    check=False,
                )
            )
        return out

    def express(self, f):
        """Coordinates of a closed map in the canonical cocycle basis."""
        base_coords = self.base.space(f.degree).express(f.gmap)
        if base_coords is None:
            return None
        return self.closed_space(self.grading.neg(f.degree)).reduce(base_coords)

    def bec_differential_element(self, f, n):
        """sigma_Y f - (-1)^n f sigma_X."""
        a = self.target.sigma.compose(f)
        b = f.compose(self.source.sigma)
        return a.sub(b) if not self.grading.par(n) else a.add(b)

    def differential_matrix(self, n):
        n = self._norm(n)
        if n in self._diffs:
            return self._diffs[n]
        f = self.source.base.field
        sp_n = self.closed_space(n)
        sp_n1 = self.closed_space(self.grading.add(n, 1))
        hs_n1 = self.base.space(self.grading.neg(self.grading.add(n, 1)))
        cols = []
        for el in self.basis_elements(n):
            img = self.bec_differential_element(el, n)
            coords = hs_n1.express(img.gmap)
            if coords is None:
                raise AxiomError("bec Hom", ["differential left the Hom space"])
            reduced = sp_n1.reduce(coords)
            if reduced is None:
                raise AxiomError(
                    "bec Hom", ["differential image is not closed in the base"]
                )
            cols.append(reduced)
        mat = (
            Matrix.from_cols(f, cols, sp_n1.dim())
            if cols
            else Matrix.zeros(f, sp_n1.dim(), 0)
        )
        self._diffs[n] = mat
        return mat

    def squares_to_zero(self, n):
        d1 = self.differential_matrix(n)
        d2 = self.differential_matrix(self.grading.add(n, 1))
        return (d2 @ d1).is_zero()

    def cocycles(self, n):
        return self.differential_matrix(n).kernel()

    def coboundaries(self, n):
        prev = self.grading.add(n, -1) if self.grading.kind == "z2" else n - 1
        if self.grading.kind == "z" and prev not in self.degrees:
            return Subspace.zero(self.source.base.field, self.dim(n))
        return self.differential_matrix(prev).image()

    def cohomology_dim(self, n):
        if self.grading.kind == "z" and n not in self.degrees:
            return 0
        return self.cocycles(n).dim() - self.coboundaries(n).dim()

    def solve_potential(self, f, n):
        """s of bec-degree n-1 with d'(s) = f, or None."""
        coords = self.express(f)
        if coords is None:
            raise AxiomError("bec Hom", ["element is not a closed sign-rule map"])
        prev = self.grading.add(n, -1) if self.grading.kind == "z2" else n - 1
        if self.grading.kind == "z" and prev not in self.degrees:
            if any(x != self.source.base.field.zero for x in coords):
                return None
            return HomElement.zero(
                self.source.base, self.target.base, self.grading.neg(prev)
            )
        sol = self.differential_matrix(prev).solve(coords)
        if sol is None:
            return None
        hs = self.base.space(self.grading.neg(prev))
        sp = self.closed_space(prev)
        fld = self.source.base.field
        canon = _combine(fld, sol, sp.basis.data)
        ambient = _combine(fld, canon, hs.space.basis.data)
        return HomElement(
            self.source.base, self.target.base, hs.map_from_coords(ambient), check=False
        )


def _combine(field, coeffs, rows):
    if not rows:
        return ()
    out = [field.zero] * len(rows[0])
    for c, row in zip(coeffs, rows):
        if c != field.zero:
            out = [field.add(o, field.mul(c, x)) for o, x in zip(out, row)]
    return tuple(out)


def bec_hom(xb, yb, n):
    """(dimension, basis HomElements) of the degree-n contracted Hom space."""
    hc = BecHomComplex(xb, yb)
    return hc.dim(n), hc.basis_elements(n)


def bec_z0_hom_dims(xb, yb):
    """dim of Hom in the closed degree-0 category of the contracted world."""
    hc = BecHomComplex(xb, yb)
    return hc.cocycles(0).dim()


def bec_contracting(xb):
    """Witness s with d'(s) = id in the contracted category, or None."""
    hc = BecHomComplex(xb, xb)
    idm = HomElement.identity(xb.base)
    return hc.solve_potential(idm, 0)


# ---------------------------------------------------------------------------
# the functors


def phi(a_mod, name=None):
    """Phi(A) = (cone(id_{A[-1]}), iota' pi')."""
    cd = xi(a_mod)
    sigma = cd.iota_prime.compose(cd.pi_prime)
    return BecModule(cd.cone, sigma, cone_data=cd, name=name or f"Phi({a_mod.name})")


def psi_plus(xb):
    """Underlying module of a contracted pair."""
    return xb.base


def psi_minus(xb):
    """Shift of the underlying module."""
    return shift(xb.base, 1)


def phi_tilde(f, phi_a=None, phi_b=None):
    """Extension of phi to possibly non-closed degree-0 morphisms.

    g = iota'_B f pi_A + iota_B f pi'_A + iota'_B d(f) pi'_A, a closed
    degree-0 morphism Phi(A) -> Phi(B) that also commutes with the
    contracting homotopies.
    """
    if f.degree != f.source.grading.norm(0):
        raise AxiomError("phi_tilde", ["morphism must have degree 0"])
    pa = phi_a or phi(f.source)
    pb = phi_b or phi(f.target)
    ca, cb = pa.cone_data, pb.cone_data
    df = f.differential()
    g = (
        cb.iota_prime.compose(f).compose(ca.pi)
        .add(cb.iota.compose(f).compose(ca.pi_prime))
        .add(cb.iota_prime.compose(df).compose(ca.pi_prime))
    )
    return HomElement(pa.base, pb.base, g.gmap, check=False)


def becbec(a_mod, name=None):
    """Double construction: (cone(id_{A[-1]}), iota' pi', iota pi)."""
    cd = xi(a_mod)
    sigma = cd.iota_prime.compose(cd.pi_prime)
    tau = cd.iota.compose(cd.pi)
    return BecBecModule(
        cd.cone, sigma, tau, cone_data=cd, name=name or f"bb({a_mod.name})"
    )


def becbec_mor(f, bb_a=None, bb_b=None):
    """Action of the double construction on a degree-n morphism.

    g = (-1)^n iota'_B f pi_A + iota_B f pi'_A + iota'_B d(f) pi'_A.
    """
    ba = bb_a or becbec(f.source)
    bb = bb_b or becbec(f.target)
    ca, cb = ba.cone_data, bb.cone_data
    gr = f.source.grading
    df = f.differential()
    first = cb.iota_prime.compose(f).compose(ca.pi)
    if gr.par(f.degree):
        first = first.neg()
    g = (
        first
        .add(cb.iota.compose(f).compose(ca.pi_prime))
        .add(cb.iota_prime.compose(df).compose(ca.pi_prime))
    )
    return HomElement(ba.base, bb.base, g.gmap, check=False)


def becbec_hom_space(bb_a, bb_b, n):
    """Canonical basis of degree-n morphisms in the double category.

    These are the f with d(f) = 0 and sigma_B f - (-1)^n f sigma_A = 0,
    inside Hom^n of the bases.
    """
    hc = HomComplex(bb_a.base, bb_b.base)
    gr = bb_a.base.grading
    n = gr.norm(n) if gr.kind == "z2" else n
    hs = hc.space(n)
    fld = bb_a.base.field
    if hs.dim() == 0:
        return hs, Subspace.zero(fld, 0)
    # conditions: d(f) = 0 and the sigma-commutator vanishes
    dmat = hc.differential_matrix(n)
    hs_next = hc.space(gr.add(n, -1))
    sig_cols = []
    for bas in hs.basis_maps():
        f_el = HomElement(bb_a.base, bb_b.base, bas, check=False)
        a = bb_b.sigma.compose(f_el)
        b = f_el.compose(bb_a.sigma)
        comm = a.sub(b) if not gr.par(n) else a.add(b)
        coords = hs_next.express(comm.gmap)
        sig_cols.append(coords)
    sig_mat = (
        Matrix.from_cols(fld, sig_cols, hs_next.dim())
        if sig_cols
        else Matrix.zeros(fld, hs_next.dim(), 0)
    )
    stacked = dmat.vstack(sig_mat)
    return hs, stacked.kernel()


def becbec_hom_dim(bb_a, bb_b, n):
    return becbec_hom_space(bb_a, bb_b, n)[1].dim()


def becbec_tau_differential(bb_a, bb_b, f, n):
    """tau_B f - (-1)^n f tau_A."""
    a = bb_b.tau.compose(f)
    b = f.compose(bb_a.tau)
    gr = bb_a.base.grading
    return a.sub(b) if not gr.par(n) else a.add(b)


# ---------------------------------------------------------------------------
# natural isomorphisms and adjunction instances


def psi_plus_phi_equals_xi(a_mod):
    """Psi+ Phi(A) and Xi(A) coincide; returns the identity comparison."""
    pa = phi(a_mod)
    cd = xi(a_mod)
    same = psi_plus(pa) == cd.cone
    return same, HomElement.identity(cd.cone) if same else None


def phi_shift_iso(a_mod, n):
    """Closed iso phi(A[n]) -> phi(A)[-n] in the contracted category.

    The grids are (-1)^n on the A[n][-1] summand and 1 on the other.
    Returns (iso, target) and raises if any verification fails.
    """
    pa_shift = phi(shift(a_mod, n))
    target = bec_shift(phi(a_mod), -n)
    cd = pa_shift.cone_data
    f = a_mod.field
    sgn = f.neg(f.one) if a_mod.grading.par(n) else f.one
    u = (
        cd.into.gmap.compose(cd.back.gmap).scale(sgn)
        .add_map(cd.lift.gmap.compose(cd.onto.gmap))
    )
    u = GradedMap(pa_shift.base.space, target.base.space, 0, dict(u.blocks))
    iso = HomElement(pa_shift.base, target.base, u, check=False)
    problems = []
    dmap = target.base.d.compose(u).sub_map(u.compose(pa_shift.base.d))
    if not dmap.is_zero():
        problems.append("comparison is not closed")
    lhs = target.sigma.gmap.compose(u)
    rhs = u.compose(pa_shift.sigma.gmap)
    if lhs != rhs:
        problems.append("comparison does not intertwine the contractions")
    if not (u.is_injective() and u.is_surjective()):
        problems.append("comparison is not bijective")
    if problems:
        raise AxiomError("phi shift comparison", problems)
    return iso, target


@dataclass
class AdjunctionReport:
    """Instance check of the two adjunctions around phi."""

    left_dim_module: int
    left_dim_bec: int
    left_mutually_inverse: bool
    right_dim_module: int
    right_dim_bec: int
    right_mutually_inverse: bool

    def ok(self):
        return (
            self.left_dim_module == self.left_dim_bec
            and self.right_dim_module == self.right_dim_bec
            and self.left_mutually_inverse
            and self.right_mutually_inverse
        )


def check_adjunction_instance(xb, a_mod):
    """Verify both adjunction isomorphisms with explicit inverse grids.

    Left:  Hom_{Z0}(Psi+ Xb, A)  ~  Hom_{Z0bec}(Xb, Phi A)
           u -> iota' u + iota u sigma_X, inverse v -> pi v.
    Right: Hom_{Z0}(A, Psi- Xb)  ~  Hom_{Z0bec}(Phi A, Xb)
           w -> w~ pi' + sigma_X w~ pi, inverse v -> (v iota)~.
    """
    pa = phi(a_mod)
    cd = pa.cone_data
    x = xb.base

    # left adjunction
    hc_left = HomComplex(x, a_mod)
    left_basis = _cocycle_elements(hc_left, 0)
    bec_left = BecHomComplex(xb, pa)
    lb_space = bec_left.cocycles(0)
    fwd_ok = True
    fwd_cols = []
    for u in left_basis:
        v = cd.iota_prime.compose(u).add(cd.iota.compose(u).compose(xb.sigma))
        coords = _bec_z0_coords(bec_left, v, lb_space)
        if coords is None:
            fwd_ok = False
            break
        fwd_cols.append(coords)
    back_ok = True
    back_cols = []
    for row in lb_space.basis.data:
        v = _bec_z0_element(bec_left, row)
        u = cd.pi.compose(v)
        coords = _z0_coords(hc_left, u)
        if coords is None:
            back_ok = False
            break
        back_cols.append(coords)
    left_inverse = fwd_ok and back_ok and _mutually_inverse(
        a_mod.field, fwd_cols, back_cols, len(left_basis), lb_space.dim()
    )

    # right adjunction
    x1 = shift(x, 1)
    hc_right = HomComplex(a_mod, x1)
    right_basis = _cocycle_elements(hc_right, 0)
    bec_right = BecHomComplex(pa, xb)
    rb_space = bec_right.cocycles(0)
    fwd_cols2 = []
    fwd_ok2 = True
    for w in right_basis:
        w_hat = HomElement(
            a_mod,
            x,
            shift_graded_map(w.gmap, a_mod.space, x.space, 0, -1),
            check=False,
        )
        v = w_hat.compose(cd.pi_prime).add(
            xb.sigma.compose(w_hat).compose(cd.pi)
        )
        coords = _bec_z0_coords(bec_right, v, rb_space)
        if coords is None:
            fwd_ok2 = False
            break
        fwd_cols2.append(coords)
    back_cols2 = []
    back_ok2 = True
    for row in rb_space.basis.data:
        v = _bec_z0_element(bec_right, row)
        w_hat = v.compose(cd.iota)
        w = HomElement(
            a_mod,
            x1,
            shift_graded_map(w_hat.gmap, a_mod.space, x1.space, 0, 1),
            check=False,
        )
        coords = _z0_coords(hc_right, w)
        if coords is None:
            back_ok2 = False
            break
        back_cols2.append(coords)
    right_inverse = fwd_ok2 and back_ok2 and _mutually_inverse(
        a_mod.field, fwd_cols2, back_cols2, len(right_basis), rb_space.dim()
    )

    return AdjunctionReport(
        left_dim_module=len(left_basis),
        left_dim_bec=lb_space.dim(),
        left_mutually_inverse=left_inverse,
        right_dim_module=len(right_basis),
        right_dim_bec=rb_space.dim(),
        right_mutually_inverse=right_inverse,
    )


def _cocycle_elements(hc, n):
    out = []
    hs = hc.space(n)
    for row in hc.cocycles(n).basis.data:
        vec = _combine(hc.source.field, row, hs.space.basis.data)
        out.append(HomElement(hc.source, hc.target, hs.map_from_coords(vec), check=False))
    return out


def _z0_coords(hc, f):
    base = hc.space(f.degree).express(f.gmap)
    if base is None:
        return None
    return hc.cocycles(0).reduce(base)


def _bec_z0_element(bhc, coords):
    sp = bhc.closed_space(0)
    hs = bhc.base.space(0)
    vec = _combine(bhc.source.base.field, coords, sp.basis.data)
    inner = _combine(bhc.source.base.field, vec, hs.space.basis.data)
    return HomElement(
        bhc.source.base, bhc.target.base, hs.map_from_coords(inner), check=False
    )


def _bec_z0_coords(bhc, f, z0_space):
    closed_coords = bhc.express(f)
    if closed_coords is None:
        return None
    return z0_space.reduce(closed_coords)


def _mutually_inverse(field, fwd_cols, back_cols, dim_a, dim_b):
    if dim_a != dim_b:
        return False
    if dim_a == 0:
        return True
    fwd = Matrix.from_cols(field, fwd_cols, dim_b)
    back = Matrix.from_cols(field, back_cols, dim_a)
    eye_a = Matrix.identity(field, dim_a)
    eye_b = Matrix.identity(field, dim_b)
    return back @ fwd == eye_a and fwd @ back == eye_b