"""Independent brute-force oracles used to freeze expected test values.

These deliberately avoid the library's solvers: extensions are counted
by enumerating raw structure grids over F_2, complexes of vector spaces
are handled by textbook formulas.
"""

from __future__ import annotations

from itertools import product

from cdgkit.graded import GradedModule, GradedSpace, validate_module


def enumerate_ext1_f2(mod_x, mod_y):
    """dim Ext^1(X, Y) for graded modules over an F_2 algebra, by enumeration.

    Enumerates all grids phi_b : X -> Y (degree |b|) defining an action
    b.(y, x) = (b.y + phi_b(x), b.x) on Y (+) X, keeps those that satisfy
    the module axioms, and quotients by the coboundaries coming from
    degree-0 grids psi : X -> Y.
    """
    alg = mod_x.algebra
    f = alg.field
    assert f.char == 2, "enumeration oracle is written for F_2"
    gr = alg.grading
    xsp, ysp = mod_x.space, mod_y.space
    slots = []
    for b in range(alg.space.total):
        db = alg.basis_degree(b)
        for j in range(xsp.total):
            gx = xsp.unflat(j)[0]
            for k in range(ysp.total):
                if ysp.unflat(k)[0] == gr.add(gx, db):
                    slots.append((b, j, k))
    valid = set()
    for bits in product((0, 1), repeat=len(slots)):
        phi = {}
        for bit, (b, j, k) in zip(bits, slots):
            if bit:
                phi.setdefault(b, {}).setdefault(j, []).append(k)
        if _extension_is_module(mod_x, mod_y, phi):
            valid.add(bits)
    # coboundaries: phi_b(x) = b.psi(x) + psi(b.x)
    psis = []
    psi_slots = [
        (j, k)
        for j in range(xsp.total)
        for k in range(ysp.total)
        if ysp.unflat(k)[0] == xsp.unflat(j)[0]
    ]
    cobounds = set()
    for bits in product((0, 1), repeat=len(psi_slots)):
        psi_cols = {j: [0] * ysp.total for j in range(xsp.total)}
        for bit, (j, k) in zip(bits, psi_slots):
            if bit:
                psi_cols[j][k] = 1
        grid_bits = []
        for b, j, k in slots:
            bx = mod_x.act_matrix(b).col(j)
            val = 0
            # b.psi(x_j)
            for t, c in enumerate(psi_cols[j]):
                if c:
                    val ^= mod_y.act_matrix(b).col(t)[k] & 1
            # psi(b.x_j)
            for t, c in enumerate(bx):
                if c:
                    val ^= psi_cols[t][k] & 1
            grid_bits.append(val)
        cobounds.add(tuple(grid_bits))
    assert valid, "zero grid must define a module"
    n_valid, n_cob = len(valid), len(cobounds)
    assert n_valid % n_cob == 0
    dim = 0
    q = n_valid // n_cob
    while q > 1:
        q //= 2
        dim += 1
    return dim


def _extension_is_module(mod_x, mod_y, phi):
    """Check module axioms for the triangular action defined by phi."""
    alg = mod_x.algebra
    f = alg.field
    xsp, ysp = mod_x.space, mod_y.space
    gr = alg.grading
    nx, ny = xsp.total, ysp.total
    dims = {}
    for g in set(xsp.degrees) | set(ysp.degrees):
        dims[g] = xsp.dim(g) + ysp.dim(g)
    esp = GradedSpace(f, gr, dims)
    # flat embedding: Y first inside each degree, then X
    def emb_y(k):
        g, i = ysp.unflat(k)
        return esp.flat(g, i)

    def emb_x(j):
        g, i = xsp.unflat(j)
        return esp.flat(g, ysp.dim(g) + i)

    z = f.zero
    action = []
    for b in range(alg.space.total):
        row = [None] * esp.total
        for k in range(ny):
            vec = [z] * esp.total
            for t, c in enumerate(mod_y.act_matrix(b).col(k)):
                if c != z:
                    vec[emb_y(t)] = c
            row[emb_y(k)] = tuple(vec)
        for j in range(nx):
            vec = [z] * esp.total
            for t, c in enumerate(mod_x.act_matrix(b).col(j)):
                if c != z:
                    vec[emb_x(t)] = c
            for k in phi.get(b, {}).get(j, ()):
                vec[emb_y(k)] = f.add(vec[emb_y(k)], f.one)
            row[emb_x(j)] = tuple(vec)
        action.append(row)
    emod = GradedModule(alg, esp, action)
    return not validate_module(emod)


def complex_cohomology_dims(diffs, dims):
    """Cohomology dimensions of a complex of F-vector spaces.

    `dims` maps degree -> dimension, `diffs` maps degree g -> Matrix for
    d_g : X^g -> X^{g+1}.  Textbook formula: dim ker - dim im.
    """
    out = {}
    degrees = sorted(dims)
    for g in degrees:
        d_out = diffs.get(g)
        rank_out = d_out.rank() if d_out is not None else 0
        d_in = diffs.get(g - 1)
        rank_in = d_in.rank() if d_in is not None else 0
        out[g] = dims[g] - rank_out - rank_in
    return out
