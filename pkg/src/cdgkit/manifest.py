"""Line-oriented text format for rings, modules, morphisms, certificates.

Grammar (one directive per line, '#' starts a comment):

    field (q | fp:<p>)
    grading (z <window> | z2)

    ring NAME
      basis LABEL DEGREE
      unit EXPR
      mul LABEL LABEL = EXPR
      d LABEL = EXPR
      h = EXPR
    end

    module NAME over RING
      basis LABEL DEGREE
      act ALGLABEL LABEL = EXPR
      d LABEL = EXPR
    end

    morphism NAME : MODULE -> MODULE degree D
      map LABEL = EXPR
    end

    certificate NAME
      target MODULE
      layer incl MORPHISM proj MORPHISM [witness MORPHISM]
      retract MORPHISM MORPHISM
    end

    cmd WORD ARGS...

EXPR is 0 or a sum  c1*L1 + c2*L2 - L3  of labels with optional
rational coefficients.  Unlisted products, actions and differentials
default to zero, except that multiplying or acting by the declared
unit label defaults to the identity.  Parse errors carry line numbers.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .cdg import CdgModule, CdgRing, HomElement
from .graded import (
    AxiomError,
    GradedAlgebra,
    GradedMap,
    GradedModule,
    GradedSpace,
    GradingGroup,
)
from .linalg import Matrix, parse_field
from .second_kind import CertificateLayer, ExtensionCertificate


class ManifestError(ValueError):
    def __init__(self, line_no, message):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


@dataclass
class Manifest:
    field: object
    grading: GradingGroup
    rings: dict = dc_field(default_factory=dict)
    modules: dict = dc_field(default_factory=dict)
    morphisms: dict = dc_field(default_factory=dict)
    certificates: dict = dc_field(default_factory=dict)
    commands: list = dc_field(default_factory=list)


def _tokenize(text):
    out = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((no, line.split()))
    return out


def _parse_expr(tokens, labels, fld, no):
    """Linear combination over labelled basis vectors; returns a dict.

    Terms and the operators + / - are separate whitespace-delimited
    tokens; a term is LABEL or COEF*LABEL with a rational coefficient.
    """
    tokens = list(tokens)
    if tokens == ["0"]:
        return {}
    out = {}
    sign = 1
    expect_term = True
    for tok in tokens:
        if tok in ("+", "-"):
            if expect_term:
                raise ManifestError(no, "two operators in a row")
            sign = 1 if tok == "+" else -1
            expect_term = True
            continue
        if not expect_term:
            raise ManifestError(no, f"missing operator before {tok!r}")
        if "*" in tok:
            coef_text, label = tok.split("*", 1)
            try:
                coef = fld.parse(coef_text)
            except (ValueError, ZeroDivisionError):
                raise ManifestError(no, f"bad coefficient {coef_text!r}")
        else:
            coef = fld.one
            label = tok
        if label not in labels:
            raise ManifestError(no, f"unknown label {label!r}")
        if sign < 0:
            coef = fld.neg(coef)
        idx = labels[label]
        out[idx] = fld.add(out.get(idx, fld.zero), coef)
        expect_term = False
        sign = 1
    if expect_term:
        raise ManifestError(no, "expression ends with an operator")
    return {k: v for k, v in out.items() if v != fld.zero}


def _vec(entries, total, fld):
    out = [fld.zero] * total
    for k, v in entries.items():
        out[k] = v
    return tuple(out)


def parse_manifest(text, default_field=None, default_window=16):
    """Parse manifest text into a Manifest of constructed objects.

    Rings and modules are built eagerly, so axiom violations surface
    here with the offending basis elements named.
    """
    lines = _tokenize(text)
    fld = default_field
    grading = None
    manifest = None
    i = 0
    n = len(lines)
    # first pass: field and grading may appear anywhere before first use
    field_decl = None
    window = default_window
    grading_kind = "z"
    for no, toks in lines:
        if toks[0] == "field":
            if len(toks) != 2:
                raise ManifestError(no, "usage: field q|fp:<p>")
            try:
                field_decl = parse_field(toks[1])
            except ValueError as e:
                raise ManifestError(no, str(e))
        elif toks[0] == "grading":
            if toks[1] == "z2":
                grading_kind = "z2"
            elif toks[1] == "z":
                grading_kind = "z"
                if len(toks) > 2:
                    window = int(toks[2])
            else:
                raise ManifestError(no, "usage: grading z <window> | grading z2")
    fld = field_decl or default_field
    if fld is None:
        raise ManifestError(0, "no field declared and no default given")
    grading = GradingGroup(grading_kind, window)
    manifest = Manifest(field=fld, grading=grading)

    while i < n:
        no, toks = lines[i]
        head = toks[0]
        if head in ("field", "grading"):
            i += 1
        elif head == "ring":
            i = _parse_ring(lines, i, manifest)
        elif head == "module":
            i = _parse_module(lines, i, manifest)
        elif head == "morphism":
            i = _parse_morphism(lines, i, manifest)
        elif head == "certificate":
            i = _parse_certificate(lines, i, manifest)
        elif head == "cmd":
            if len(toks) < 2:
                raise ManifestError(no, "empty command")
            manifest.commands.append((no, toks[1], toks[2:]))
            i += 1
        else:
            raise ManifestError(no, f"unknown directive {head!r}")
    return manifest


def _block(lines, i, kind):
    no, toks = lines[i]
    body = []
    j = i + 1
    while j < len(lines):
        bno, btoks = lines[j]
        if btoks[0] == "end":
            return body, j + 1
        body.append((bno, btoks))
        j += 1
    raise ManifestError(no, f"unterminated {kind} block")


def _parse_ring(lines, i, manifest):
    no, toks = lines[i]
    if len(toks) != 2:
        raise ManifestError(no, "usage: ring NAME")
    name = toks[1]
    body, nxt = _block(lines, i, "ring")
    fld = manifest.field
    gr = manifest.grading
    basis = []  # (label, degree)
    unit_expr = None
    mults = []
    d_entries = []
    h_expr = None
    for bno, btoks in body:
        if btoks[0] == "basis":
            if len(btoks) != 3:
                raise ManifestError(bno, "usage: basis LABEL DEGREE")
            basis.append((bno, btoks[1], int(btoks[2])))
        elif btoks[0] == "unit":
            unit_expr = (bno, btoks[1:])
        elif btoks[0] == "mul":
            if len(btoks) < 5 or btoks[3] != "=":
                raise ManifestError(bno, "usage: mul A B = EXPR")
            mults.append((bno, btoks[1], btoks[2], btoks[4:]))
        elif btoks[0] == "d":
            if len(btoks) < 4 or btoks[2] != "=":
                raise ManifestError(bno, "usage: d LABEL = EXPR")
            d_entries.append((bno, btoks[1], btoks[3:]))
        elif btoks[0] == "h":
            if len(btoks) < 3 or btoks[1] != "=":
                raise ManifestError(bno, "usage: h = EXPR")
            h_expr = (bno, btoks[2:])
        else:
            raise ManifestError(bno, f"unknown ring directive {btoks[0]!r}")
    if not basis:
        raise ManifestError(no, "ring has no basis")
    dims = {}
    labels_by_deg = {}
    for bno, lbl, deg in basis:
        deg = gr.norm(deg)
        dims[deg] = dims.get(deg, 0) + 1
        labels_by_deg.setdefault(deg, []).append(lbl)
    space = GradedSpace(fld, gr, dims, {g: tuple(ls) for g, ls in labels_by_deg.items()})
    labels = {}
    for flat in range(space.total):
        lbl = space.label(flat)
        if lbl in labels:
            raise ManifestError(no, f"duplicate basis label {lbl!r}")
        labels[lbl] = flat
    total = space.total
    if unit_expr is None:
        raise ManifestError(no, "ring needs a unit")
    unit = _vec(_parse_expr(unit_expr[1], labels, fld, unit_expr[0]), total, fld)
    unit_label = None
    nonzero = [k for k, v in enumerate(unit) if v != fld.zero]
    if len(nonzero) == 1 and unit[nonzero[0]] == fld.one:
        unit_label = space.label(nonzero[0])
    mult = [[None] * total for _ in range(total)]
    for bno, la, lb, expr in mults:
        if la not in labels or lb not in labels:
            raise ManifestError(bno, f"unknown label in mul {la} {lb}")
        mult[labels[la]][labels[lb]] = _vec(
            _parse_expr(expr, labels, fld, bno), total, fld
        )
    zero_vec = tuple([fld.zero] * total)
    for a in range(total):
        for b in range(total):
            if mult[a][b] is None:
                if unit_label is not None and space.label(a) == unit_label:
                    mult[a][b] = space.basis_vector(b)
                elif unit_label is not None and space.label(b) == unit_label:
                    mult[a][b] = space.basis_vector(a)
                else:
                    mult[a][b] = zero_vec
    algebra = GradedAlgebra(space, mult, unit)
    d_cols = [zero_vec] * total
    for bno, lbl, expr in d_entries:
        if lbl not in labels:
            raise ManifestError(bno, f"unknown label {lbl!r}")
        d_cols[labels[lbl]] = _vec(_parse_expr(expr, labels, fld, bno), total, fld)
    d_map = _map_from_cols(space, space, 1, d_cols)
    h = (
        _vec(_parse_expr(h_expr[1], labels, fld, h_expr[0]), total, fld)
        if h_expr is not None
        else zero_vec
    )
    manifest.rings[name] = CdgRing(algebra, d_map, h, name=name)
    return nxt


def _map_from_cols(src, tgt, degree, cols):
    fld = src.field
    gr = src.grading
    blocks = {}
    for g in src.degrees:
        sub = [
            tgt.component(cols[src.flat(g, t)], gr.add(g, degree))
            for t in range(src.dims[g])
        ]
        blocks[g] = Matrix.from_cols(fld, sub, src.dims[g])
    return GradedMap(src, tgt, degree, blocks)


def _parse_module(lines, i, manifest):
    no, toks = lines[i]
    if len(toks) != 4 or toks[2] != "over":
        raise ManifestError(no, "usage: module NAME over RING")
    name, ring_name = toks[1], toks[3]
    ring = manifest.rings.get(ring_name)
    if ring is None:
        raise ManifestError(no, f"unknown ring {ring_name!r}")
    body, nxt = _block(lines, i, "module")
    fld = manifest.field
    gr = ring.grading
    basis = []
    acts = []
    d_entries = []
    for bno, btoks in body:
        if btoks[0] == "basis":
            if len(btoks) != 3:
                raise ManifestError(bno, "usage: basis LABEL DEGREE")
            basis.append((bno, btoks[1], int(btoks[2])))
        elif btoks[0] == "act":
            if len(btoks) < 6 or btoks[4] != "=":
                raise ManifestError(bno, "usage: act ALGLABEL LABEL = EXPR")
            acts.append((bno, btoks[1], btoks[2], btoks[5:]))
        elif btoks[0] == "d":
            if len(btoks) < 4 or btoks[2] != "=":
                raise ManifestError(bno, "usage: d LABEL = EXPR")
            d_entries.append((bno, btoks[1], btoks[3:]))
        else:
            raise ManifestError(bno, f"unknown module directive {btoks[0]!r}")
    if not basis:
        raise ManifestError(no, "module has no basis")
    dims = {}
    labels_by_deg = {}
    for bno, lbl, deg in basis:
        deg = gr.norm(deg)
        dims[deg] = dims.get(deg, 0) + 1
        labels_by_deg.setdefault(deg, []).append(lbl)
    space = GradedSpace(fld, gr, dims, {g: tuple(ls) for g, ls in labels_by_deg.items()})
    labels = {}
    for flat in range(space.total):
        lbl = space.label(flat)
        if lbl in labels:
            raise ManifestError(no, f"duplicate basis label {lbl!r}")
        labels[lbl] = flat
    asp = ring.algebra.space
    alabels = {asp.label(k): k for k in range(asp.total)}
    unit_idx = [k for k, v in enumerate(ring.algebra.unit) if v != fld.zero]
    unit_label = (
        asp.label(unit_idx[0])
        if len(unit_idx) == 1 and ring.algebra.unit[unit_idx[0]] == fld.one
        else None
    )
    total = space.total
    action = [[None] * total for _ in range(asp.total)]
    for bno, albl, mlbl, expr in acts:
        if albl not in alabels:
            raise ManifestError(bno, f"unknown algebra label {albl!r}")
        if mlbl not in labels:
            raise ManifestError(bno, f"unknown module label {mlbl!r}")
        action[alabels[albl]][labels[mlbl]] = _vec(
            _parse_expr(expr, labels, fld, bno), total, fld
        )
    zero_vec = tuple([fld.zero] * total)
    for a in range(asp.total):
        for m in range(total):
            if action[a][m] is None:
                if unit_label is not None and asp.label(a) == unit_label:
                    action[a][m] = space.basis_vector(m)
                else:
                    action[a][m] = zero_vec
    gmod = GradedModule(ring.algebra, space, action)
    d_cols = [zero_vec] * total
    for bno, lbl, expr in d_entries:
        if lbl not in labels:
            raise ManifestError(bno, f"unknown label {lbl!r}")
        d_cols[labels[lbl]] = _vec(_parse_expr(expr, labels, fld, bno), total, fld)
    d_map = _map_from_cols(space, space, 1, d_cols)
    manifest.modules[name] = CdgModule(ring, gmod, d_map, name=name)
    return nxt


def _parse_morphism(lines, i, manifest):
    no, toks = lines[i]
    # morphism NAME : SRC -> TGT degree D
    if len(toks) != 8 or toks[2] != ":" or toks[4] != "->" or toks[6] != "degree":
        raise ManifestError(no, "usage: morphism NAME : SRC -> TGT degree D")
    name, src_name, tgt_name = toks[1], toks[3], toks[5]
    degree = int(toks[7])
    src = manifest.modules.get(src_name)
    tgt = manifest.modules.get(tgt_name)
    if src is None:
        raise ManifestError(no, f"unknown module {src_name!r}")
    if tgt is None:
        raise ManifestError(no, f"unknown module {tgt_name!r}")
    body, nxt = _block(lines, i, "morphism")
    fld = manifest.field
    src_labels = {src.space.label(k): k for k in range(src.space.total)}
    tgt_labels = {tgt.space.label(k): k for k in range(tgt.space.total)}
    cols = [tuple([fld.zero] * tgt.space.total)] * src.space.total
    cols = list(cols)
    for bno, btoks in body:
        if btoks[0] != "map" or len(btoks) < 4 or btoks[2] != "=":
            raise ManifestError(bno, "usage: map LABEL = EXPR")
        lbl = btoks[1]
        if lbl not in src_labels:
            raise ManifestError(bno, f"unknown source label {lbl!r}")
        cols[src_labels[lbl]] = _vec(
            _parse_expr(btoks[3:], tgt_labels, fld, bno), tgt.space.total, fld
        )
    gmap = _map_from_cols(src.space, tgt.space, degree, cols)
    manifest.morphisms[name] = HomElement(src, tgt, gmap)
    return nxt


def _parse_certificate(lines, i, manifest):
    no, toks = lines[i]
    if len(toks) != 2:
        raise ManifestError(no, "usage: certificate NAME")
    name = toks[1]
    body, nxt = _block(lines, i, "certificate")
    target = None
    layers = []
    retract = None
    for bno, btoks in body:
        if btoks[0] == "target":
            target = manifest.modules.get(btoks[1])
            if target is None:
                raise ManifestError(bno, f"unknown module {btoks[1]!r}")
        elif btoks[0] == "layer":
            kw = dict(zip(btoks[1::2], btoks[2::2]))
            if "incl" not in kw or "proj" not in kw:
                raise ManifestError(bno, "usage: layer incl M proj M [witness M]")
            incl = manifest.morphisms.get(kw["incl"])
            proj = manifest.morphisms.get(kw["proj"])
            if incl is None or proj is None:
                raise ManifestError(bno, "unknown morphism in layer")
            wit = None
            if "witness" in kw:
                wit = manifest.morphisms.get(kw["witness"])
                if wit is None:
                    raise ManifestError(bno, "unknown witness morphism")
            layers.append(CertificateLayer(incl=incl, proj=proj, witness=wit))
        elif btoks[0] == "retract":
            if len(btoks) != 3:
                raise ManifestError(bno, "usage: retract INCL PROJ")
            i_m = manifest.morphisms.get(btoks[1])
            p_m = manifest.morphisms.get(btoks[2])
            if i_m is None or p_m is None:
                raise ManifestError(bno, "unknown morphism in retract")
            retract = (i_m, p_m)
        else:
            raise ManifestError(bno, f"unknown certificate directive {btoks[0]!r}")
    if target is None:
        raise ManifestError(no, "certificate needs a target")
    manifest.certificates[name] = ExtensionCertificate(
        target=target, layers=layers, retract=retract
    )
    return nxt


# ---------------------------------------------------------------------------
# rendering (serialization round trip)


def _show_expr(space, vec, fld):
    parts = []
    for k, c in enumerate(vec):
        if c == fld.zero:
            continue
        lbl = space.label(k)
        if c == fld.one:
            parts.append(lbl)
        else:
            parts.append(f"{fld.show(c)}*{lbl}")
    return " + ".join(parts) if parts else "0"


def render_ring(name, ring):
    out = [f"ring {name}"]
    sp = ring.algebra.space
    fld = ring.field
    for flat in range(sp.total):
        g, _ = sp.unflat(flat)
        out.append(f"  basis {sp.label(flat)} {g}")
    out.append(f"  unit {_show_expr(sp, ring.algebra.unit, fld)}")
    for a in range(sp.total):
        for b in range(sp.total):
            vec = ring.algebra.mult[a][b]
            if any(x != fld.zero for x in vec):
                out.append(
                    f"  mul {sp.label(a)} {sp.label(b)} = {_show_expr(sp, vec, fld)}"
                )
    for flat in range(sp.total):
        dv = ring.d.apply(sp.basis_vector(flat))
        if any(x != fld.zero for x in dv):
            out.append(f"  d {sp.label(flat)} = {_show_expr(sp, dv, fld)}")
    if any(x != fld.zero for x in ring.h):
        out.append(f"  h = {_show_expr(sp, ring.h, fld)}")
    out.append("end")
    return "\n".join(out)


def render_module(name, mod, ring_name):
    out = [f"module {name} over {ring_name}"]
    sp = mod.space
    asp = mod.ring.algebra.space
    fld = mod.field
    for flat in range(sp.total):
        g, _ = sp.unflat(flat)
        out.append(f"  basis {sp.label(flat)} {g}")
    for a in range(asp.total):
        for m in range(sp.total):
            vec = mod.module.action[a][m]
            if any(x != fld.zero for x in vec):
                out.append(
                    f"  act {asp.label(a)} {sp.label(m)} = {_show_expr(sp, vec, fld)}"
                )
    for flat in range(sp.total):
        dv = mod.d.apply(sp.basis_vector(flat))
        if any(x != fld.zero for x in dv):
            out.append(f"  d {sp.label(flat)} = {_show_expr(sp, dv, fld)}")
    out.append("end")
    return "\n".join(out)


def render_morphism(name, hom, src_name, tgt_name):
    out = [f"morphism {name} : {src_name} -> {tgt_name} degree {hom.degree}"]
    ssp, tsp = hom.source.space, hom.target.space
    fld = hom.source.field
    for flat in range(ssp.total):
        img = hom.apply(ssp.basis_vector(flat))
        if any(x != fld.zero for x in img):
            out.append(f"  map {ssp.label(flat)} = {_show_expr(tsp, img, fld)}")
    out.append("end")
    return "\n".join(out)
