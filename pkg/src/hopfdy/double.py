"""Drinfeld double D(H) = (H*)^op ox H and the attached coefficient modules.

The double's basis is the set of pairs phi^i h_j, ordered dual-major
(flat = i*dim(H) + j).  Products are computed from the straightening
relation

    h phi = (h(3) |> phi <| S(h(1))) h(2)

with the coregular actions (h |> f)(x) = f(x h), (f <| h)(x) = f(h x).
The coproduct is Delta(phi h) = phi(1) h(1) ox phi(2) h(2) where
phi(1)(x) phi(2)(y) = phi(xy); the antipode is obtained by solving the
antipode axiom as a linear system (antipodes are unique, so the solve is a
proof).  Only the untwisted setting is supported: coefficient modules for
restriction functors insist on J = 1 ox 1.
"""

from __future__ import annotations

from .algcore import (Algebra, AlgebraMap, ModuleRep, SpanSolver, verify_module)
from .exactlin import (FR0, FR1, Echelon, SparseMatrix, TensorElement,
                       kernel_basis, vec_addmul, vec_eq)
from .hopfcore import HopfAlgebra, HopfError, bk_dual_generators, dual_hopf, verify_hopf


class TwistNotSupportedError(HopfError):
    """Raised for Drinfeld twists other than 1 ox 1."""


class DoubleAlgebra:
    """D(H) with its Hopf structure and the two canonical embeddings."""

    def __init__(self, hopf: HopfAlgebra, base: HopfAlgebra, dual: HopfAlgebra,
                 inclusion_base: AlgebraMap, inclusion_dual: AlgebraMap):
        self.hopf = hopf
        self.base = base
        self.dual = dual
        self.inclusion_base = inclusion_base
        self.inclusion_dual = inclusion_dual

    @property
    def algebra(self) -> Algebra:
        return self.hopf.algebra

    @property
    def dim(self) -> int:
        return self.hopf.dim

    def pair_index(self, i_dual: int, j_h: int) -> int:
        return i_dual * self.base.dim + j_h

    def split_index(self, flat: int):
        return divmod(flat, self.base.dim)

    def dual_part_basis(self) -> list:
        """The elements phi^i ox 1_H of D(H); a free right-H-module basis."""
        out = []
        for i in range(self.base.dim):
            vec: dict = {}
            for j, c in self.base.unit.items():
                vec[self.pair_index(i, j)] = c
            out.append(vec)
        return out

    def __repr__(self):
        return "DoubleAlgebra(D(%s), dim=%d)" % (self.base.name, self.dim)


_DOUBLE_CACHE: dict = {}


def drinfeld_double(H: HopfAlgebra, check: bool = True) -> DoubleAlgebra:
    """Build D(H) = (H*)^op ox H with full Hopf structure."""
    cached = _DOUBLE_CACHE.get(id(H))
    if cached is not None:
        return cached
    if check:
        rep = verify_hopf(H)
        if rep:
            raise HopfError("input of drinfeld_double fails Hopf axioms: %s" % rep[:3])
    n = H.dim
    dual = dual_hopf(H, opposite_product=True)
    H.antipode_inverse()  # force existence; S of a f.d. Hopf algebra is bijective

    # Delta^{(2)} of every basis element of H, as (a, b, c) -> coeff
    delta2 = [H.delta_power({j: FR1}, 3) for j in range(n)]

    # straighten[j][k] = h_j phi^k expanded as {(m_dual, b_h): coeff}
    # using (h(3) |> phi^k <| S(h(1)))(e_m) = phi^k(S(h(1)) e_m h(3))
    straighten = [dict() for _ in range(n)]
    for j in range(n):
        acc: dict = {}
        for (a, b, c), coef in delta2[j].coeffs.items():
            sa = H.antipode_vec({a: FR1})
            for m in range(n):
                right = H.mul_basis(m, c)
                if not right:
                    continue
                vec: dict = {}
                for p, cp in right.items():
                    for i, ci in sa.items():
                        vec_addmul(vec, H.mul_basis(i, p), ci * cp)
                for kk, ck in vec.items():
                    key = (kk, m, b)
                    acc[key] = acc.get(key, FR0) + coef * ck
        byk: dict = {}
        for (kk, m, b), v in acc.items():
            if v:
                byk.setdefault(kk, []).append((m, b, v))
        straighten[j] = byk

    dim = n * n
    labels = []
    for i in range(n):
        for j in range(n):
            labels.append("%s.%s" % (dual.algebra.labels[i], H.algebra.labels[j]))
    mult = {}
    dual_mult = dual.algebra.mult
    h_mult = H.algebra.mult
    for i in range(n):
        for j in range(n):
            for k in range(n):
                terms = straighten[j].get(k)
                if not terms:
                    continue
                for l in range(n):
                    # (phi^i h_j)(phi^k h_l) = phi^i (h_j phi^k) h_l
                    acc: dict = {}
                    for (m, b, c) in terms:
                        dprod = dual_mult.get((i, m))
                        if not dprod:
                            continue
                        hprod = h_mult.get((b, l))
                        if not hprod:
                            continue
                        for r, cr in dprod.items():
                            for s, cs in hprod.items():
                                flat = r * n + s
                                val = acc.get(flat, FR0) + c * cr * cs
                                if val:
                                    acc[flat] = val
                                else:
                                    acc.pop(flat, None)
                    if acc:
                        mult[(i * n + j, k * n + l)] = acc
    unit = {}
    for i, ci in dual.algebra.unit.items():
        for j, cj in H.algebra.unit.items():
            unit[i * n + j] = ci * cj
    gens = None
    dual_gens = getattr(H, "dual_generator_hint", None)
    if dual_gens is not None and H.algebra.generators is not None:
        gens = []
        for g in dual_gens:
            gens.append({i * n + j: ci * cj for i, ci in g.items()
                         for j, cj in H.algebra.unit.items()})
        for g in H.algebra.generators:
            gens.append({i * n + j: ci * cj for i, ci in dual.algebra.unit.items()
                         for j, cj in g.items()})
    DAlg = Algebra(dim, labels, mult, unit, generators=gens, name="D(%s)" % H.name)

    # coproduct: Delta_D(phi^i h_j) = sum m_{ab}^i Delta(h_j)_{(c,d)}
    #            (phi^a h_c) ox (phi^b h_d)
    comult = []
    for i in range(n):
        for j in range(n):
            cc: dict = {}
            for (a, b), vmap in H.algebra.mult.items():
                ci = vmap.get(i)
                if not ci:
                    continue
                for (c, d), cd in H.comult[j].coeffs.items():
                    key = (a * n + c, b * n + d)
                    s = cc.get(key, FR0) + ci * cd
                    if s:
                        cc[key] = s
                    else:
                        cc.pop(key, None)
            comult.append(TensorElement(DAlg, 2, cc))
    counit = []
    for i in range(n):
        for j in range(n):
            counit.append(H.algebra.unit.get(i, FR0) * H.counit[j])

    antipode = _solve_antipode(DAlg, comult, counit, unit)
    Dhopf = HopfAlgebra(DAlg, comult, counit, antipode, name=DAlg.name)

    incl_base = AlgebraMap(H.algebra, DAlg,
                           [{i * n + j: ci for i, ci in dual.algebra.unit.items()}
                            for j in range(n)], name="H->D(H)")
    incl_dual = AlgebraMap(dual.algebra, DAlg,
                           [{i * n + j: cj for j, cj in H.algebra.unit.items()}
                            for i in range(n)], name="H*op->D(H)")
    D = DoubleAlgebra(Dhopf, H, dual, incl_base, incl_dual)
    if check:
        rep = verify_hopf(Dhopf)
        if rep:
            raise HopfError("constructed double fails Hopf axioms: %s" % rep[:3])
        for emb in (incl_base, incl_dual):
            rep = emb.verify()
            if rep:
                raise HopfError("embedding %s fails: %s" % (emb.name, rep[:3]))
    _DOUBLE_CACHE[id(H)] = D
    return D


def _solve_antipode(A: Algebra, comult, counit, unit) -> SparseMatrix:
    """Solve m(S ox id)Delta = eta eps for S; unique for Hopf algebras."""
    n = A.dim
    # unknowns: S[r, u] flattened u*n + r; equations per basis d and output k:
    # sum_{(u,v)} Delta(d)[u,v] * sum_r S[r,u] (e_r e_v)_k = eps(d) unit_k
    rows = []
    for d in range(n):
        eq: dict = {}
        for (u, v), c in comult[d].coeffs.items():
            for r in range(n):
                for k, m in A.mul_basis(r, v).items():
                    row = eq.setdefault(k, {})
                    cell = row.get(u * n + r, FR0) + c * m
                    if cell:
                        row[u * n + r] = cell
                    else:
                        row.pop(u * n + r, None)
        for k in range(n):
            row = dict(eq.get(k, {}))
            rhsv = counit[d] * unit.get(k, FR0)
            if rhsv:
                row[n * n] = -rhsv
            if row:
                rows.append(row)
    ech = Echelon(n * n + 1)
    for row in rows:
        ech.add_row(row)
    if n * n in ech.pivot_rows:
        raise HopfError("antipode system is inconsistent; corrupted input")
    if ech.rank != n * n:
        raise HopfError("antipode system is underdetermined; corrupted input")
    ech.to_rref()
    ent = {}
    for p in ech.pivot_rows:
        rw = ech.rewrite(p)
        c = rw.get(n * n)
        if c:
            u, r = divmod(p, n)
            ent[(r, u)] = c
    return SparseMatrix(n, n, ent)


# ---------------------------------------------------------------------------
# the l+ / l- maps attached to an R-matrix

def ell_plus(H: HopfAlgebra, R: TensorElement, alpha: dict) -> dict:
    """(id ox alpha)(R) for a dual functional alpha."""
    out: dict = {}
    for (a, b), c in R.coeffs.items():
        f = alpha.get(b)
        if f:
            s = out.get(a, FR0) + c * f
            if s:
                out[a] = s
            else:
                out.pop(a, None)
    return out


def ell_minus(H: HopfAlgebra, Rinv: TensorElement, beta: dict) -> dict:
    """(beta ox id)(R^{-1})."""
    out: dict = {}
    for (a, b), c in Rinv.coeffs.items():
        f = beta.get(a)
        if f:
            s = out.get(b, FR0) + c * f
            if s:
                out[b] = s
            else:
                out.pop(b, None)
    return out


def ell_maps(D: DoubleAlgebra, R: TensorElement, Rinv: TensorElement):
    """The algebra maps D(H) -> H, phi h -> l+(phi) h and phi h -> l-(phi) h."""
    H = D.base
    n = H.dim
    plus_cols = []
    minus_cols = []
    for flat in range(D.dim):
        i, j = D.split_index(flat)
        lp = ell_plus(H, R, {i: FR1})
        lm = ell_minus(H, Rinv, {i: FR1})
        plus_cols.append(H.mul_vec(lp, {j: FR1}))
        minus_cols.append(H.mul_vec(lm, {j: FR1}))
    pi_plus = AlgebraMap(D.algebra, H.algebra, plus_cols, name="ell+(D->H)")
    pi_minus = AlgebraMap(D.algebra, H.algebra, minus_cols, name="ell-(D->H)")
    return pi_plus, pi_minus


def check_algebra_map(f: AlgebraMap, pairs: str = "auto") -> list:
    """Unit + multiplicativity; generator-level pairs for big sources."""
    from .algcore import _gens_usable
    A = f.source
    if pairs == "auto":
        pairs = "full" if A.dim <= 32 or not _gens_usable(A) else "gens"
    if pairs == "full":
        return f.verify()
    report = []
    if not vec_eq(f.apply(A.unit), f.target.unit):
        report.append("unit not preserved")
    for gi, g in enumerate(A.generators):
        fg = f.apply(g)
        for j in range(A.dim):
            lhs = f.apply(A.mul_vec(g, {j: FR1}))
            rhs = f.target.mul_vec(fg, f.apply_basis(j))
            if not vec_eq(lhs, rhs):
                report.append("product not preserved on (gen%d, %s)" % (gi, A.labels[j]))
    return report


# ---------------------------------------------------------------------------
# coefficient modules

class CoefficientModule:
    """A module of functionals together with its provenance tag."""

    def __init__(self, module: ModuleRep, provenance: str, dual_basis_rows=None):
        self.module = module
        self.provenance = provenance
        self.dual_basis_rows = dual_basis_rows  # rows in H*-coordinates, if a subspace

    def __repr__(self):
        return "CoefficientModule(%s, dim=%d)" % (self.provenance, self.module.dim)


_COEFF_CACHE: dict = {}


def coeff_tensor_product(D: DoubleAlgebra, R: TensorElement, Rinv: TensorElement,
                         E: Algebra, check: bool = True) -> CoefficientModule:
    """H* as a module over E = D(H) ox D(H):

        (alpha a ox beta b) . psi = l-(beta) b |> psi <| S(l+(alpha) a).
    """
    cache_key = ("tensor", id(D), id(E), tuple(sorted(R.flat().items())))
    got = _COEFF_CACHE.get(cache_key)
    if got is not None:
        return got
    H = D.base
    n = H.dim
    nd = D.dim
    assert E.dim == nd * nd

    # precompute, per D-basis element, the H-elements l+(phi)h and l-(phi)h
    pi_plus, pi_minus = ell_maps(D, R, Rinv)
    s_plus = [H.antipode_vec(pi_plus.apply_basis(t)) for t in range(nd)]
    m_minus = [pi_minus.apply_basis(t) for t in range(nd)]

    def action(flat):
        t1, t2 = divmod(flat, nd)
        u = m_minus[t2]       # acts by |>
        v = s_plus[t1]        # acts by <|
        ent = {}
        # new psi'_m = (u |> psi <| v)(e_m) = psi(v e_m u) = sum_r [v e_m u]_r psi_r
        for m in range(n):
            vec: dict = {}
            for i, ci in v.items():
                mid = H.mul_basis(i, m)
                for p, cp in mid.items():
                    for j, cj in u.items():
                        vec_addmul(vec, H.mul_basis(p, j), ci * cp * cj)
            for r, c in vec.items():
                ent[(m, r)] = c
        return SparseMatrix(n, n, ent)

    mod = ModuleRep(E, n, action_fn=action, name="H*-coeff(ox)")
    if check:
        rep = verify_module(mod, level="auto")
        if rep:
            raise HopfError("tensor coefficient module fails axioms: %s" % rep[:3])
    out = CoefficientModule(mod, "tensor_product_coeff")
    _COEFF_CACHE[cache_key] = out
    return out


def coeff_restriction(D: DoubleAlgebra, imap: AlgebraMap, Hs: HopfAlgebra,
                      twist=None, check: bool = True) -> CoefficientModule:
    """Hom_K(H, k) = {f in H*: f <| i(k) = eps(k) f} as a D(H)-module:

        <(phi h).f, x> = phi(S(x(1)) x(3)) f(x(2) h).

    Only the trivial twist is supported; the Hopf-inclusion property of
    `imap` is verified.
    """
    if twist is not None:
        H = D.base
        if twist != _unit_twist(H):
            raise TwistNotSupportedError("only the trivial twist 1 ox 1 is supported")
    cache_key = ("restriction", id(D), id(imap))
    got = _COEFF_CACHE.get(cache_key)
    if got is not None:
        return got
    from .hopfcore import is_hopf_map
    H = D.base
    n = H.dim
    if check:
        rep = is_hopf_map(imap, Hs, H)
        if rep:
            raise HopfError("restriction inclusion is not a Hopf map: %s" % rep[:3])

    # subspace {f : f(i(k) x) = eps_K(k) f(x)} of H*
    rows = []
    for kidx in range(Hs.dim):
        ik = imap.apply_basis(kidx)
        epsk = Hs.counit[kidx]
        for m in range(n):
            row: dict = {}
            for i, ci in ik.items():
                for p, cp in H.mul_basis(i, m).items():
                    s = row.get(p, FR0) + ci * cp
                    if s:
                        row[p] = s
                    else:
                        row.pop(p, None)
            if epsk:
                s = row.get(m, FR0) - epsk
                if s:
                    row[m] = s
                else:
                    row.pop(m, None)
            if row:
                rows.append(row)
    basis = kernel_basis(SparseMatrix.from_rows_list(rows, n) if rows
                         else SparseMatrix(0, n))
    solver = SpanSolver(n)
    for b in basis:
        solver.add(b)

    delta2 = [H.delta_power({m: FR1}, 3) for m in range(n)]

    def act_row(flat, f):
        """(phi^i h_j) . f evaluated as a new functional on H."""
        i, j = D.split_index(flat)
        out: dict = {}
        for m in range(n):
            s = FR0
            for (a, b, c), coef in delta2[m].coeffs.items():
                # phi^i(S(e_a) e_c) f(e_b h_j)
                sa = H.antipode_vec({a: FR1})
                w: dict = {}
                for p, cp in sa.items():
                    vec_addmul(w, H.mul_basis(p, c), cp)
                phi_val = w.get(i)
                if not phi_val:
                    continue
                fv = FR0
                for q, cq in H.mul_basis(b, j).items():
                    fq = f.get(q)
                    if fq is not None:
                        fv += cq * fq
                s += coef * phi_val * fv
            if s:
                out[m] = s
        return out

    def action(flat):
        ent = {}
        for col, b in enumerate(basis):
            img = act_row(flat, b)
            coords = solver.coordinates(img)
            if coords is None:
                raise HopfError("restriction coefficient subspace is not action-stable")
            for r, c in coords.items():
                ent[(r, col)] = c
        return SparseMatrix(len(basis), len(basis), ent)

    mod = ModuleRep(D.algebra, len(basis), action_fn=action, name="Hom_K(H,k)")
    if check:
        rep = verify_module(mod, level="auto")
        if rep:
            raise HopfError("restriction coefficient module fails axioms: %s" % rep[:3])
    out = CoefficientModule(mod, "restriction_coeff", dual_basis_rows=basis)
    _COEFF_CACHE[cache_key] = out
    return out


def _unit_twist(H: HopfAlgebra) -> TensorElement:
    from .exactlin import unit_tensor
    return unit_tensor(H.algebra, 2)


def center_module_from_rmatrix(D: DoubleAlgebra, R: TensorElement, Rinv: TensorElement,
                               M: ModuleRep, variant: str, check: bool = True) -> ModuleRep:
    """Promote an H-module to a D(H)-module along an R-matrix.

    variant "braiding":         pullback along phi h -> l+(phi) h
    variant "inverse_braiding": pullback along phi h -> l-(phi) h
    variant "dual_braiding":    on M*, <(phi h).f, x> = <f, S(l+(phi) h) x>
    """
    H = D.base
    if M.algebra is not H.algebra:
        raise HopfError("module is not over the base Hopf algebra")
    pi_plus, pi_minus = ell_maps(D, R, Rinv)
    if variant == "braiding":
        pi = pi_plus
    elif variant == "inverse_braiding":
        pi = pi_minus
    elif variant == "dual_braiding":
        pi = pi_plus
    else:
        raise HopfError("unknown variant %r" % variant)

    if variant in ("braiding", "inverse_braiding"):
        def action(flat):
            out = SparseMatrix(M.dim, M.dim, {})
            for j, c in pi.apply_basis(flat).items():
                out = out.add(M.action(j).scale(c))
            return out
        mod = ModuleRep(D.algebra, M.dim, action_fn=action,
                        name="center(%s,%s)" % (M.name, variant))
    else:
        def action(flat):
            img = H.antipode_vec(pi.apply_basis(flat))
            out = SparseMatrix(M.dim, M.dim, {})
            for j, c in img.items():
                out = out.add(M.action(j).scale(c))
            return out.transpose()
        mod = ModuleRep(D.algebra, M.dim, action_fn=action,
                        name="center(%s,dual)" % M.name)
    if check:
        rep = verify_module(mod, level="auto")
        if rep:
            raise HopfError("center module fails axioms: %s" % rep[:3])
    return mod


def build_c_pm(D: DoubleAlgebra, sign: int, check: bool = True) -> ModuleRep:
    """The D(B_k)-modules C_+ / C_-: free cyclic duals with x_i acting by 0
    and g acting as h = 1* - g*."""
    H = D.base
    n = H.dim
    k = n.bit_length() - 2  # dim = 2^{k+1}
    assert (1 << (k + 1)) == n, "C_pm requires a B_k base"
    g_bit = 1 << k
    assert sign in (1, -1)
    # f_+ = 1*, f_- = g* as dual coordinates
    f0 = {0: FR1} if sign == 1 else {g_bit: FR1}
    dual = D.dual

    # closure of f0 under left multiplication in (B_k*)^op
    solver = SpanSolver(n)
    basis = [dict(f0)]
    solver.add(f0)
    frontier = [f0]
    while frontier:
        new = []
        for v in frontier:
            for i in range(n):
                w = dual.algebra.mul_vec({i: FR1}, v)
                if w and solver.coordinates(w) is None:
                    solver.add(w)
                    basis.append(w)
                    new.append(w)
        frontier = new
    dimc = len(basis)

    h_vec = bk_dual_generators(k)[-1]  # h = 1* - g*

    def action(flat):
        i, j = D.split_index(flat)
        # rho(phi^i h_j) = rho_dual(phi^i) rho_H(h_j); x-letters kill, g acts as h
        mask, t = j & ((1 << k) - 1), j >> k
        if mask:
            return SparseMatrix(dimc, dimc, {})
        mult_elt = {i: FR1}
        if t:
            mult_elt = dual.algebra.mul_vec(mult_elt, h_vec)
        ent = {}
        for col, b in enumerate(basis):
            img = dual.algebra.mul_vec(mult_elt, b)
            coords = solver.coordinates(img)
            assert coords is not None
            for r, c in coords.items():
                ent[(r, col)] = c
        return SparseMatrix(dimc, dimc, ent)

    mod = ModuleRep(D.algebra, dimc, action_fn=action,
                    name="C%s(B_%d)" % ("+" if sign == 1 else "-", k))
    mod.basis_in_dual = basis
    if check:
        rep = verify_module(mod, level="auto")
        if rep:
            raise HopfError("C_pm fails module axioms: %s" % rep[:3])
    return mod
