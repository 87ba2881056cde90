"""Finite-dimensional associative algebras, modules, intertwiners, induction.

An `Algebra` is given by structure constants on a fixed basis; a `ModuleRep`
by one action matrix per basis element (computed lazily for big modules).
All verification reports are lists of human-readable violation strings: an
empty report means the axioms hold.
"""

from __future__ import annotations

from .exactlin import (FR0, FR1, Echelon, SparseMatrix, SpanSolver, fr,
                       kernel_basis, vec_addmul, vec_eq)


class AlgebraError(Exception):
    pass


class Algebra:
    """Associative unital algebra over QQ by structure constants.

    mult[(i, j)] is the sparse vector of e_i * e_j; missing keys mean zero
    product.  `generators`, when set, is a list of sparse VECTORS whose
    products (together with the unit) span the algebra; the span property is
    certified by `check_generators_span`.  Verifiers may then replace
    full-basis pair/triple checks by generator-level ones: identities such
    as associativity or multiplicativity of a coproduct are linear in each
    slot and stable under left multiplication by verified generators, so
    they propagate from generators to the whole algebra.
    """

    def __init__(self, dim, labels, mult, unit, generators=None, name=""):
        self.dim = dim
        self.labels = list(labels)
        assert len(self.labels) == dim
        self.mult = {}
        for (i, j), v in mult.items():
            vv = {k: fr(c) for k, c in v.items() if fr(c)}
            if vv:
                self.mult[(i, j)] = vv
        self.unit = {i: fr(c) for i, c in unit.items() if fr(c)}
        self.generators = generators
        self.name = name or "algebra(dim=%d)" % dim
        self._left_mult = {}
        self._gen_span_ok = None

    def mul_basis(self, i: int, j: int) -> dict:
        return self.mult.get((i, j), {})

    def fast_mult(self):
        """2-D table: fast_mult()[i][j] is None (zero product), a (k, coeff)
        pair (single-term product) or the full sparse dict."""
        tab = getattr(self, "_fast_mult", None)
        if tab is None:
            tab = [[None] * self.dim for _ in range(self.dim)]
            for (i, j), v in self.mult.items():
                if len(v) == 1:
                    (k, c), = v.items()
                    tab[i][j] = (k, c)
                else:
                    tab[i][j] = v
            self._fast_mult = tab
        return tab

    def mul_vec(self, u: dict, v: dict) -> dict:
        out: dict = {}
        get = self.mult.get
        for i, a in u.items():
            for j, b in v.items():
                prod = get((i, j))
                if prod:
                    vec_addmul(out, prod, a * b)
        return out

    def left_mult_matrix(self, i: int) -> SparseMatrix:
        """Matrix of x -> e_i * x."""
        m = self._left_mult.get(i)
        if m is None:
            ent = {}
            for j in range(self.dim):
                for k, c in self.mul_basis(i, j).items():
                    ent[(k, j)] = c
            m = SparseMatrix(self.dim, self.dim, ent)
            self._left_mult[i] = m
        return m

    def right_mult_matrix(self, i: int) -> SparseMatrix:
        ent = {}
        for j in range(self.dim):
            for k, c in self.mul_basis(j, i).items():
                ent[(k, j)] = c
        return SparseMatrix(self.dim, self.dim, ent)

    def label_of(self, i: int) -> str:
        return self.labels[i]

    def __repr__(self):
        return "Algebra(%s, dim=%d)" % (self.name, self.dim)


def check_generators_span(A: Algebra) -> bool:
    """Certify that products of A.generators (plus the unit) span A."""
    if A.generators is None:
        return False
    if A._gen_span_ok is not None:
        return A._gen_span_ok
    solver = SpanSolver(A.dim)
    solver.add(dict(A.unit))
    frontier = [dict(A.unit)]
    while frontier:
        new = []
        for v in frontier:
            for g in A.generators:
                w = A.mul_vec(g, v)
                if w and solver.coordinates(w) is None:
                    solver.add(w)
                    new.append(w)
        frontier = new
    A._gen_span_ok = (solver.ech.rank == A.dim)
    return A._gen_span_ok


def _gens_usable(A: Algebra) -> bool:
    return A.generators is not None and check_generators_span(A)


def verify_algebra(A: Algebra, level: str = "auto") -> list:
    """Check associativity on basis triples and the unit laws.

    level "full" checks every triple; "gens" checks (generator, basis, basis)
    triples with generator vectors, which certifies full associativity: the
    set of a with (a b) c = a (b c) for all b, c is a subspace closed under
    left multiplication by verified generators, and generator products span.
    "auto" picks "full" for small algebras.
    """
    report = []
    if level == "auto":
        level = "full" if A.dim <= 32 or not _gens_usable(A) else "gens"
    if level == "gens" and not _gens_usable(A):
        level = "full"
    for i in range(A.dim):
        e = {i: FR1}
        if not vec_eq(A.mul_vec(A.unit, e), e):
            report.append("unit law fails: 1*e_%d != e_%d (%s)" % (i, i, A.labels[i]))
        if not vec_eq(A.mul_vec(e, A.unit), e):
            report.append("unit law fails: e_%d*1 != e_%d (%s)" % (i, i, A.labels[i]))
    if level == "full":
        firsts = [({i: FR1}, A.labels[i]) for i in range(A.dim)]
    else:
        firsts = [(g, "gen%d" % k) for k, g in enumerate(A.generators)]
    for a, aname in firsts:
        for j in range(A.dim):
            prod_aj = A.mul_vec(a, {j: FR1})
            for k in range(A.dim):
                lhs = A.mul_vec(prod_aj, {k: FR1})
                rhs = A.mul_vec(a, A.mul_basis(j, k))
                if not vec_eq(lhs, rhs):
                    report.append("associativity fails on triple (%s, %s, %s)"
                                  % (aname, A.labels[j], A.labels[k]))
    return report


class AlgebraMap:
    """Algebra morphism source -> target, stored as image columns."""

    def __init__(self, source: Algebra, target: Algebra, columns, name=""):
        self.source = source
        self.target = target
        self.columns = [({i: fr(c) for i, c in col.items() if fr(c)}) for col in columns]
        assert len(self.columns) == source.dim
        self.name = name or "map(%s->%s)" % (source.name, target.name)

    def apply_basis(self, i: int) -> dict:
        return self.columns[i]

    def apply(self, v: dict) -> dict:
        out: dict = {}
        for i, c in v.items():
            vec_addmul(out, self.columns[i], c)
        return out

    def as_matrix(self) -> SparseMatrix:
        return SparseMatrix.from_columns(self.target.dim, self.columns)

    def verify(self) -> list:
        report = []
        if not vec_eq(self.apply(self.source.unit), self.target.unit):
            report.append("unit not preserved")
        for i in range(self.source.dim):
            fi = self.columns[i]
            for j in range(self.source.dim):
                lhs = self.apply(self.source.mul_basis(i, j))
                rhs = self.target.mul_vec(fi, self.columns[j])
                if not vec_eq(lhs, rhs):
                    report.append("product not preserved on (%s, %s)"
                                  % (self.source.labels[i], self.source.labels[j]))
        return report


def compose_maps(g: AlgebraMap, f: AlgebraMap) -> AlgebraMap:
    assert f.target is g.source
    return AlgebraMap(f.source, g.target, [g.apply(col) for col in f.columns],
                      name="%s o %s" % (g.name, f.name))


class ModuleRep:
    """Module over an algebra: one dim x dim action matrix per basis element.

    Matrices may be provided eagerly (list) or lazily via `action_fn(i)`;
    lazily built matrices are cached, so instances stay immutable in effect.
    """

    def __init__(self, algebra: Algebra, dim: int, action=None, action_fn=None, name=""):
        self.algebra = algebra
        self.dim = dim
        self.name = name or "module(dim=%d)" % dim
        self._matrices = {}
        self._action_fn = action_fn
        if action is not None:
            assert len(action) == algebra.dim
            for i, m in enumerate(action):
                if not isinstance(m, SparseMatrix):
                    m = SparseMatrix(dim, dim, m)
                self._matrices[i] = m
        else:
            assert action_fn is not None

    def action(self, i: int) -> SparseMatrix:
        m = self._matrices.get(i)
        if m is None:
            m = self._action_fn(i)
            if not isinstance(m, SparseMatrix):
                m = SparseMatrix(self.dim, self.dim, m)
            self._matrices[i] = m
        return m

    def act_basis(self, i: int, v: dict) -> dict:
        return self.action(i).mul_vec(v)

    def act(self, a: dict, v: dict) -> dict:
        out: dict = {}
        for i, c in a.items():
            vec_addmul(out, self.act_basis(i, v), c)
        return out

    def __repr__(self):
        return "ModuleRep(%s over %s)" % (self.name, self.algebra.name)


def verify_module(M: ModuleRep, level: str = "auto") -> list:
    """Check rho(1) = id and rho(e_i) rho(e_j) = rho(e_i e_j).

    "gens" restricts the first factor to generator vectors (sufficient: the
    set of a with rho(a b) = rho(a) rho(b) for all b is a subspace closed
    under verified generators, and generator products span the algebra).
    """
    A = M.algebra
    report = []
    if level == "auto":
        level = "full" if (A.dim * A.dim * M.dim <= 300000 or not _gens_usable(A)) else "gens"
    if level == "gens" and not _gens_usable(A):
        level = "full"
    ident = SparseMatrix.identity(M.dim)
    rho_unit = _act_matrix(M, A.unit)
    if rho_unit != ident:
        report.append("rho(1) != id")
    if level == "full":
        firsts = [({i: FR1}, A.labels[i]) for i in range(A.dim)]
    else:
        firsts = [(g, "gen%d" % k) for k, g in enumerate(A.generators)]
    for a, aname in firsts:
        ma = _act_matrix(M, a)
        for j in range(A.dim):
            lhs = ma.matmul(M.action(j))
            rhs = _act_matrix(M, A.mul_vec(a, {j: FR1}))
            if lhs != rhs:
                report.append("action violates structure constants on (%s, %s)"
                              % (aname, A.labels[j]))
    return report


def _act_matrix(M: ModuleRep, a: dict) -> SparseMatrix:
    out = SparseMatrix(M.dim, M.dim, {})
    for i, c in a.items():
        out = out.add(M.action(i).scale(c))
    return out


def module_from_character(A: Algebra, chi: dict, name="") -> ModuleRep:
    """One-dimensional module through a character {basis index: value}."""
    mats = [SparseMatrix(1, 1, {(0, 0): chi.get(i, FR0)}) for i in range(A.dim)]
    return ModuleRep(A, 1, action=mats, name=name or "character")


def regular_module(A: Algebra) -> ModuleRep:
    return ModuleRep(A, A.dim, action_fn=lambda i: A.left_mult_matrix(i),
                     name="regular(%s)" % A.name)


def restrict_module(imap: AlgebraMap, M: ModuleRep, name="") -> ModuleRep:
    """Pull an imap.target-module back to imap.source along the algebra map."""
    assert M.algebra is imap.target

    def fn(i):
        out = SparseMatrix(M.dim, M.dim, {})
        for j, c in imap.apply_basis(i).items():
            out = out.add(M.action(j).scale(c))
        return out

    return ModuleRep(imap.source, M.dim, action_fn=fn,
                     name=name or "res(%s)" % M.name)


def hom_space(M: ModuleRep, N: ModuleRep) -> list:
    """Exact basis of intertwiners f: M -> N with f rho_M(a) = rho_N(a) f.

    The linear system is assembled over the full basis of the algebra.
    Unknowns are the entries of f, flattened as r*dim(M) + c; the result is
    the canonical kernel basis, returned as matrices.
    """
    if M.algebra is not N.algebra:
        raise AlgebraError("hom_space requires modules over the same algebra")
    A = M.algebra
    dm, dn = M.dim, N.dim
    rows = []
    for a in range(A.dim):
        ma = M.action(a)
        na = N.action(a)
        ma_cols = ma.columns()
        na_cols = na.columns()
        # equation (r, j):  sum_c f[r,c] ma[c,j] - sum_c na[r,c] f[c,j] = 0
        eq = {}
        for j in range(dm):
            for c, v in ma_cols[j].items():
                for r in range(dn):
                    d = eq.setdefault((r, j), {})
                    s = d.get(r * dm + c, FR0) + v
                    if s:
                        d[r * dm + c] = s
                    else:
                        d.pop(r * dm + c, None)
        for c in range(dn):
            for r, v in na_cols[c].items():
                for j in range(dm):
                    d = eq.setdefault((r, j), {})
                    s = d.get(c * dm + j, FR0) - v
                    if s:
                        d[c * dm + j] = s
                    else:
                        d.pop(c * dm + j, None)
        rows.extend(v for v in eq.values() if v)
    basis = kernel_basis(SparseMatrix.from_rows_list(rows, dn * dm) if rows
                         else SparseMatrix(0, dn * dm))
    out = []
    for v in basis:
        ent = {}
        for flat, c in v.items():
            ent[(flat // dm, flat % dm)] = c
        out.append(SparseMatrix(dn, dm, ent))
    return out


def is_intertwiner(f: SparseMatrix, M: ModuleRep, N: ModuleRep) -> bool:
    for a in range(M.algebra.dim):
        if f.matmul(M.action(a)) != N.action(a).matmul(f):
            return False
    return True


def module_map_kernel(f: SparseMatrix, M: ModuleRep, N: ModuleRep):
    """Kernel of an intertwiner as a module, with its inclusion matrix."""
    if not is_intertwiner(f, M, N):
        raise AlgebraError("module_map_kernel: map is not an intertwiner")
    basis = kernel_basis(f)
    incl = SparseMatrix.from_columns(M.dim, basis)
    K = submodule_on_basis(M, basis, name="ker(%s)" % M.name)
    return K, incl


def submodule_on_basis(M: ModuleRep, basis: list, name="") -> ModuleRep:
    """Module structure on an action-stable subspace given by a basis."""
    solver = SpanSolver(M.dim)
    for v in basis:
        added = solver.add(v)
        assert added, "submodule basis is dependent"

    def fn(i):
        ent = {}
        for j, v in enumerate(basis):
            img = M.act_basis(i, v)
            coords = solver.coordinates(img)
            if coords is None:
                raise AlgebraError("subspace is not stable under e_%d" % i)
            for r, c in coords.items():
                ent[(r, j)] = c
        return SparseMatrix(len(basis), len(basis), ent)

    sub = ModuleRep(M.algebra, len(basis), action_fn=fn, name=name or "sub(%s)" % M.name)
    sub.basis_in_ambient = basis
    sub.ambient = M
    return sub


def tensor_algebra(A: Algebra, B: Algebra) -> Algebra:
    """Structure constants of A ox B on the product basis (a-major)."""
    db = B.dim
    dim = A.dim * db
    labels = ["%s(x)%s" % (a, b) for a in A.labels for b in B.labels]
    mult = {}
    for (i1, j1), va in A.mult.items():
        for (i2, j2), vb in B.mult.items():
            acc = {}
            for ka, ca in va.items():
                for kb, cb in vb.items():
                    acc[ka * db + kb] = ca * cb
            mult[(i1 * db + i2, j1 * db + j2)] = acc
    unit = {}
    for ia, ca in A.unit.items():
        for ib, cb in B.unit.items():
            unit[ia * db + ib] = ca * cb
    gens = None
    if A.generators is not None and B.generators is not None:
        gens = []
        for g in A.generators:
            gens.append({ia * db + ib: ca * cb
                         for ia, ca in g.items() for ib, cb in B.unit.items()})
        for g in B.generators:
            gens.append({ia * db + ib: ca * cb
                         for ia, ca in A.unit.items() for ib, cb in g.items()})
    T = Algebra(dim, labels, mult, unit, generators=gens,
                name="%s(x)%s" % (A.name, B.name))
    return T


def tensor_module(M: ModuleRep, N: ModuleRep, T: Algebra) -> ModuleRep:
    """M ox N as a module over T = tensor_algebra(M.algebra, N.algebra)."""
    db = N.algebra.dim
    dn = N.dim

    def fn(flat):
        ia, ib = divmod(flat, db)
        ma = M.action(ia)
        mb = N.action(ib)
        ent = {}
        for (r1, c1), v1 in ma.entries.items():
            for (r2, c2), v2 in mb.entries.items():
                ent[(r1 * dn + r2, c1 * dn + c2)] = v1 * v2
        return SparseMatrix(M.dim * dn, M.dim * dn, ent)

    return ModuleRep(T, M.dim * N.dim, action_fn=fn,
                     name="%s(x)%s" % (M.name, N.name))


class InducedModule(ModuleRep):
    """A ox_B V as a left A-module, via the quotient construction by default.

    The quotient of A ox V by span{(a*i(b)) ox v - a ox (b.v)} is computed by
    a deterministic echelon whose surviving (non-pivot) columns form the
    canonical basis; `rewrite_pair` sends any pure tensor a_idx ox v_idx to
    canonical coordinates.  When `free_basis` elements u with
    A = direct-sum u_alpha * i(B) are supplied and verified, an equivalent
    free realization with basis {alpha} x {v} is used instead; dimensions and
    all derived invariants agree with the quotient construction.
    """

    def __init__(self, imap: AlgebraMap, V: ModuleRep, mode: str, data, name=""):
        self.imap = imap
        self.source = V
        self.mode = mode
        A = imap.target
        if mode == "quotient":
            reps, rewrites = data
            self.reps = reps          # list of (a_idx, v_idx)
            self.rep_pos = {p: k for k, p in enumerate(reps)}
            self._rewrites = rewrites  # (a_idx, v_idx) -> {canonical idx: Fraction}
            dim = len(reps)
        else:
            free_cols, rewrite_table = data
            self.free_cols = free_cols          # list of A-vectors u_alpha
            self._free_rewrite = rewrite_table  # A-basis idx -> [(alpha, b_idx, c)]
            dim = len(free_cols) * V.dim
        super().__init__(A, dim, action_fn=self._action_of, name=name)

    # -- canonical coordinates -------------------------------------------
    def pair_vec(self, a_idx: int, v_idx: int) -> dict:
        """Canonical coordinates of the class of e_{a_idx} ox e_{v_idx}."""
        if self.mode == "quotient":
            pos = self.rep_pos.get((a_idx, v_idx))
            if pos is not None:
                return {pos: FR1}
            return self._rewrites[(a_idx, v_idx)]
        out: dict = {}
        nv = self.source.dim
        for alpha, b_idx, c in self._free_rewrite[a_idx]:
            bv = self.source.act_basis(b_idx, {v_idx: FR1})
            for w, cw in bv.items():
                flat = alpha * nv + w
                s = out.get(flat, FR0) + c * cw
                if s:
                    out[flat] = s
                else:
                    out.pop(flat, None)
        return out

    def project(self, tensor_vec: dict) -> dict:
        """Canonical coordinates of a vector given on the a ox v pure basis,
        keyed by a_idx * dim(V) + v_idx."""
        nv = self.source.dim
        out: dict = {}
        for flat, c in tensor_vec.items():
            vec_addmul(out, self.pair_vec(flat // nv, flat % nv), c)
        return out

    def unit_section(self, v: dict) -> dict:
        """eta(v) = class of 1_A ox v (the adjunction unit)."""
        out: dict = {}
        for a_idx, ca in self.imap.target.unit.items():
            for v_idx, cv in v.items():
                vec_addmul(out, self.pair_vec(a_idx, v_idx), ca * cv)
        return out

    def act_class(self, a_idx: int, pos: int) -> dict:
        """a . (canonical basis vector `pos`)."""
        A = self.imap.target
        nv = self.source.dim
        if self.mode == "quotient":
            a2, v2 = self.reps[pos]
        else:
            a2 = None
        out: dict = {}
        if self.mode == "quotient":
            for p_idx, c in A.mul_basis(a_idx, a2).items():
                vec_addmul(out, self.pair_vec(p_idx, v2), c)
        else:
            alpha, v2 = divmod(pos, nv)
            ua = self.free_cols[alpha]
            prod: dict = {}
            for i, ci in ua.items():
                vec_addmul(prod, A.mul_basis(a_idx, i), ci)
            for p_idx, c in prod.items():
                vec_addmul(out, self.pair_vec(p_idx, v2), c)
        return out

    def _action_of(self, a_idx: int) -> SparseMatrix:
        ent = {}
        for pos in range(self.dim):
            for r, c in self.act_class(a_idx, pos).items():
                ent[(r, pos)] = c
        return SparseMatrix(self.dim, self.dim, ent)


def induced_module(imap: AlgebraMap, V: ModuleRep, free_basis=None, name="") -> InducedModule:
    """Induction A ox_B V along an algebra map B -> A.

    Relations are spanned by {(a*i(b)) ox v - a ox (b.v)}; it is enough to
    let b range over a generating set of B (relations for products follow:
    rel(a, b b', v) = rel(a*i(b), b', v) + rel(a, b, b'.v)), and over the
    full basis otherwise.
    """
    if V.algebra is not imap.source:
        raise AlgebraError("induced_module: V is not a module over the map source")
    A, B = imap.target, imap.source
    if free_basis is not None:
        table = _free_rewrite_table(imap, free_basis)
        name = name or "ind(%s)" % V.name
        return InducedModule(imap, V, "free", (free_basis, table), name=name)

    nv = V.dim
    ncols = A.dim * nv
    if _gens_usable(B):
        bgens = list(B.generators)
    else:
        bgens = [{j: FR1} for j in range(B.dim)]
    # pivot preference: high flat index first, so low-index columns survive
    ech = Echelon(ncols, key=lambda c: -c)
    for b in bgens:
        ib = imap.apply(b)
        bact = [V.act(b, {v_idx: FR1}) for v_idx in range(nv)]
        for a in range(A.dim):
            prod: dict = {}
            for i, ci in ib.items():
                vec_addmul(prod, A.mul_basis(a, i), ci)
            for v_idx in range(nv):
                row: dict = {}
                for p, c in prod.items():
                    row[p * nv + v_idx] = c
                for w, cw in bact[v_idx].items():
                    s = row.get(a * nv + w, FR0) - cw
                    if s:
                        row[a * nv + w] = s
                    else:
                        row.pop(a * nv + w, None)
                ech.add_row(row)
    ech.to_rref()
    pivset = set(ech.pivot_rows)
    reps = [(f // nv, f % nv) for f in range(ncols) if f not in pivset]
    rep_pos = {f: k for k, f in enumerate(sorted(set(range(ncols)) - pivset))}
    rewrites = {}
    for p in ech.pivot_rows:
        rw = ech.rewrite(p)
        rewrites[(p // nv, p % nv)] = {rep_pos[c]: v for c, v in rw.items()}
    name = name or "ind(%s)" % V.name
    return InducedModule(imap, V, "quotient", (reps, rewrites), name=name)


def _free_rewrite_table(imap: AlgebraMap, free_basis: list) -> list:
    """Invert Phi: (alpha, b) -> u_alpha * i(b) and tabulate per A-basis column.

    Raises if A is not free over i(B) on the given elements.
    """
    A, B = imap.target, imap.source
    nb = B.dim
    if len(free_basis) * nb != A.dim:
        raise AlgebraError("free basis has wrong cardinality")
    cols = []
    for u in free_basis:
        for b in range(nb):
            col: dict = {}
            ib = imap.apply_basis(b)
            for i, ci in u.items():
                for j, cj in ib.items():
                    vec_addmul(col, A.mul_basis(i, j), ci * cj)
            cols.append(col)
    phi = SparseMatrix.from_columns(A.dim, cols)
    inv_cols = _invert_columns(phi)
    if inv_cols is None:
        raise AlgebraError("claimed free basis does not give a module decomposition")
    table = []
    for a in range(A.dim):
        entries = [(flat // nb, flat % nb, c) for flat, c in inv_cols[a].items()]
        table.append(entries)
    return table


def _invert_columns(M: SparseMatrix):
    """Columns of M^{-1}, or None if singular."""
    n = M.rows
    if M.cols != n:
        return None
    ech = Echelon(2 * n)
    rows = [dict() for _ in range(n)]
    for (r, c), v in M.entries.items():
        rows[r][c] = v
    for r in range(n):
        rows[r][n + r] = FR1
        ech.add_row(rows[r])
    if len([p for p in ech.pivot_rows if p < n]) < n:
        return None
    ech.to_rref()
    inv_cols = [dict() for _ in range(n)]
    for p in list(ech.pivot_rows):
        if p >= n:
            return None
        rw = ech.rewrite(p)
        for c, v in rw.items():
            assert c >= n
            inv_cols[c - n][p] = -v
    # M^{-1} columns: solve M x = e_j; rewrite gives e_p = sum over aug cols
    # of coeff * e_{n+j}, i.e. x_p for rhs e_j is -coeff with the sign above.
    return inv_cols
