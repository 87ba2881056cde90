"""Hopf algebra structures, Sweedler-style tensor calculus, duals, catalog.

Conventions used throughout:
  * Delta(h) = h(1) ox h(2); iterated coproducts expand the last slot.
  * coregular actions on the dual: (h |> f)(h') = f(h' h),
    (f <| h)(h') = f(h h').
  * the dual with opposite product (H*)^op multiplies by
    (phi psi)(x) = psi(x(1)) phi(x(2)) and keeps the transposed coproduct
    phi(1)(x) phi(2)(y) = phi(x y); its antipode is the inverse-transpose
    of S.

The built-in catalog covers group algebras QQ[Z/n] and the family
B_k = Lambda(QQ^k) x| QQ[Z/2] with presentation
x_i x_j = -x_j x_i, g x_i = -x_i g, x_i^2 = 0, g^2 = 1,
Delta(x_i) = 1 ox x_i + x_i ox g, Delta(g) = g ox g,
eps(x_i) = 0, eps(g) = 1, S(x_i) = g x_i, S(g) = g,
on the monomial basis x_1^{e_1} ... x_k^{e_k} g^{e_{k+1}}.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .algcore import Algebra, AlgebraMap, ModuleRep, module_from_character, verify_algebra
from .exactlin import (FR0, FR1, SparseMatrix, TensorElement, fr,
                       unit_tensor, vec_eq)

FRH = Fraction(1, 2)


class HopfError(Exception):
    pass


class HopfAlgebra:
    """Finite-dimensional Hopf algebra over QQ with explicit structure maps.

    comult[i] is Delta(e_i) as a degree-2 TensorElement over the underlying
    algebra; counit is a list of Fractions; antipode a matrix whose columns
    are the images S(e_i).
    """

    def __init__(self, algebra: Algebra, comult, counit, antipode: SparseMatrix,
                 antipode_inv=None, name=""):
        self.algebra = algebra
        self.comult = list(comult)
        self.counit = [fr(c) for c in counit]
        self.antipode = antipode
        self.antipode_inv = antipode_inv
        self.name = name or algebra.name

    # convenience passthroughs
    @property
    def dim(self):
        return self.algebra.dim

    @property
    def unit(self):
        return self.algebra.unit

    def mul_basis(self, i, j):
        return self.algebra.mul_basis(i, j)

    def mul_vec(self, u, v):
        return self.algebra.mul_vec(u, v)

    def label_of(self, i):
        return self.algebra.labels[i]

    def comult_vec(self, v: dict) -> TensorElement:
        out = TensorElement(self.algebra, 2, {})
        for i, c in v.items():
            out = out.add(self.comult[i].scale(c))
        return out

    def counit_vec(self, v: dict) -> Fraction:
        s = FR0
        for i, c in v.items():
            s += self.counit[i] * c
        return s

    def counit_row(self) -> dict:
        return {i: c for i, c in enumerate(self.counit) if c}

    def antipode_vec(self, v: dict) -> dict:
        return self.antipode.mul_vec(v)

    def antipode_inverse(self) -> SparseMatrix:
        if self.antipode_inv is None:
            from .algcore import _invert_columns
            cols = _invert_columns(self.antipode)
            if cols is None:
                raise HopfError("antipode is not invertible; corrupt input")
            self.antipode_inv = SparseMatrix.from_columns(self.dim, cols)
        return self.antipode_inv

    def element(self, v: dict) -> TensorElement:
        return TensorElement(self.algebra, 1, {(i,): c for i, c in v.items()})

    def delta_power(self, v: dict, n: int) -> TensorElement:
        """Delta^{(n-1)}: H -> H^{ox n} (n >= 1), expanding the last slot."""
        assert n >= 1
        out = self.element(v)
        while out.degree < n:
            out = iterated_coproduct(self, out, out.degree - 1)
        return out

    def __repr__(self):
        return "HopfAlgebra(%s, dim=%d)" % (self.name, self.dim)


def iterated_coproduct(H: HopfAlgebra, u: TensorElement, slot: int, times: int = 1) -> TensorElement:
    """Apply Delta repeatedly to one slot of a tensor element (0-based slot)."""
    if not (0 <= slot < u.degree):
        raise HopfError("slot %d out of range for degree %d" % (slot, u.degree))
    out_coeffs: dict = {}
    for k, v in u.coeffs.items():
        for (a, b), c in H.comult[k[slot]].coeffs.items():
            nk = k[:slot] + (a, b) + k[slot + 1:]
            s = out_coeffs.get(nk, FR0) + v * c
            if s:
                out_coeffs[nk] = s
            else:
                out_coeffs.pop(nk, None)
    out = TensorElement(H.algebra, u.degree + 1, out_coeffs)
    if times > 1:
        out = iterated_coproduct(H, out, slot, times - 1)
    return out


def apply_counit_at(H: HopfAlgebra, u: TensorElement, slot: int) -> TensorElement:
    if not (0 <= slot < u.degree):
        raise HopfError("slot %d out of range for degree %d" % (slot, u.degree))
    return u.contract_at(slot, H.counit)


def apply_antipode_at(H: HopfAlgebra, u: TensorElement, slot: int) -> TensorElement:
    if not (0 <= slot < u.degree):
        raise HopfError("slot %d out of range for degree %d" % (slot, u.degree))
    return u.apply_matrix_at(slot, H.antipode)


def coreg_left(H: HopfAlgebra, h: dict, f: dict) -> dict:
    """h |> f with (h |> f)(h') = f(h' h); f is a dual row {index: coeff}."""
    out: dict = {}
    for j in range(H.dim):
        s = FR0
        for i, ci in h.items():
            prod = H.mul_basis(j, i)
            for m, cm in prod.items():
                fm = f.get(m)
                if fm is not None:
                    s += ci * cm * fm
        if s:
            out[j] = s
    return out


def coreg_right(H: HopfAlgebra, f: dict, h: dict) -> dict:
    """f <| h with (f <| h)(h') = f(h h')."""
    out: dict = {}
    for j in range(H.dim):
        s = FR0
        for i, ci in h.items():
            prod = H.mul_basis(i, j)
            for m, cm in prod.items():
                fm = f.get(m)
                if fm is not None:
                    s += ci * cm * fm
        if s:
            out[j] = s
    return out


def verify_hopf(H: HopfAlgebra, level: str = "auto") -> list:
    """All bialgebra and antipode axioms, witnessed per basis element.

    Pair checks (Delta and eps multiplicative) run over all basis pairs for
    small algebras and over certified generator vectors otherwise.
    """
    A = H.algebra
    report = verify_algebra(A, level=level)
    if level == "auto":
        from .algcore import _gens_usable
        level = "full" if A.dim <= 32 or not _gens_usable(A) else "gens"
    # unit and counit normalizations
    if H.comult_vec(A.unit) != unit_tensor(A, 2):
        report.append("Delta(1) != 1 ox 1")
    if H.counit_vec(A.unit) != FR1:
        report.append("eps(1) != 1")
    one = unit_tensor(A, 1)
    for i in range(A.dim):
        e = {i: FR1}
        de = H.comult[i]
        # coassociativity
        if iterated_coproduct(H, de, 0) != iterated_coproduct(H, de, 1):
            report.append("coassociativity fails at %s" % A.labels[i])
        # counit axiom
        left = de.contract_at(0, H.counit)
        right = de.contract_at(1, H.counit)
        ei = H.element(e)
        if left != ei or right != ei:
            report.append("counit axiom fails at %s" % A.labels[i])
        # antipode axiom: m(S ox id)Delta = eta eps = m(id ox S)Delta
        eps1 = one.scale(H.counit[i])
        if _mul_all(H, apply_antipode_at(H, de, 0)) != eps1:
            report.append("antipode axiom (S ox id) fails at %s" % A.labels[i])
        if _mul_all(H, apply_antipode_at(H, de, 1)) != eps1:
            report.append("antipode axiom (id ox S) fails at %s" % A.labels[i])
    # Delta and eps are algebra maps
    if level == "full":
        firsts = [({i: FR1}, A.labels[i]) for i in range(A.dim)]
    else:
        firsts = [(g, "gen%d" % k) for k, g in enumerate(A.generators)]
    for a, aname in firsts:
        da = H.comult_vec(a)
        eps_a = H.counit_vec(a)
        for j in range(A.dim):
            prod = A.mul_vec(a, {j: FR1})
            if H.comult_vec(prod) != da.mul(H.comult[j]):
                report.append("Delta not multiplicative on (%s, %s)" % (aname, A.labels[j]))
            if H.counit_vec(prod) != eps_a * H.counit[j]:
                report.append("eps not multiplicative on (%s, %s)" % (aname, A.labels[j]))
    return report


def _mul_all(H: HopfAlgebra, u: TensorElement) -> TensorElement:
    """Multiply all slots together, landing in degree 1."""
    out: dict = {}
    for k, v in u.coeffs.items():
        cur = {k[0]: FR1}
        for idx in k[1:]:
            cur = H.mul_vec(cur, {idx: FR1})
            if not cur:
                break
        for m, cm in cur.items():
            key = (m,)
            s = out.get(key, FR0) + v * cm
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return TensorElement(H.algebra, 1, out)


# ---------------------------------------------------------------------------
# catalog: group algebras and B_k

@lru_cache(maxsize=None)
def build_cyclic(n: int) -> HopfAlgebra:
    """Group algebra QQ[Z/n] with basis g^0..g^{n-1}."""
    if n < 1:
        raise HopfError("cyclic order must be >= 1")
    labels = ["1" if i == 0 else ("g" if i == 1 else "g^%d" % i) for i in range(n)]
    mult = {(i, j): {(i + j) % n: FR1} for i in range(n) for j in range(n)}
    gens = [{1 % n: FR1}]
    A = Algebra(n, labels, mult, {0: FR1}, generators=gens, name="QQ[Z/%d]" % n)
    comult = [TensorElement(A, 2, {(i, i): FR1}) for i in range(n)]
    counit = [FR1] * n
    antipode = SparseMatrix(n, n, {((-i) % n, i): FR1 for i in range(n)})
    return HopfAlgebra(A, comult, counit, antipode, antipode_inv=antipode,
                       name="QQ[Z/%d]" % n)


def _bk_mul_masks(mask1: int, t1: int, mask2: int, t2: int, k: int):
    """Product of monomials (x-mask, g-power); None when it vanishes."""
    if mask1 & mask2:
        return None
    # move g^t1 across the second x-word
    sign = -1 if (t1 and bin(mask2).count("1") % 2) else 1
    # sort the concatenated word: count inversions between word1 and word2
    inv = 0
    for i in range(k):
        if mask2 & (1 << i):
            inv += bin(mask1 >> (i + 1)).count("1")
    if inv % 2:
        sign = -sign
    return mask1 | mask2, (t1 + t2) % 2, sign


@lru_cache(maxsize=None)
def build_bk(k: int) -> HopfAlgebra:
    """The 2^{k+1}-dimensional algebra Lambda(QQ^k) x| QQ[Z/2]."""
    if k < 1:
        raise HopfError("k must be >= 1")
    dim = 1 << (k + 1)

    def label(idx):
        mask, t = idx & ((1 << k) - 1), idx >> k
        word = "".join("x%d" % (i + 1) for i in range(k) if mask & (1 << i))
        word += "g" if t else ""
        return word or "1"

    labels = [label(i) for i in range(dim)]
    mult = {}
    for i in range(dim):
        m1, t1 = i & ((1 << k) - 1), i >> k
        for j in range(dim):
            m2, t2 = j & ((1 << k) - 1), j >> k
            res = _bk_mul_masks(m1, t1, m2, t2, k)
            if res is None:
                continue
            mask, t, sign = res
            mult[(i, j)] = {mask | (t << k): fr(sign)}
    gens = [{(1 << i): FR1} for i in range(k)] + [{(1 << k): FR1}]
    A = Algebra(dim, labels, mult, {0: FR1}, generators=gens, name="B_%d" % k)

    g_idx = 1 << k
    # coproducts of monomials: products of generator coproducts inside H ox H
    dx = [TensorElement(A, 2, {(0, 1 << i): FR1, (1 << i, g_idx): FR1})
          for i in range(k)]
    dg = TensorElement(A, 2, {(g_idx, g_idx): FR1})
    comult = []
    for idx in range(dim):
        mask, t = idx & ((1 << k) - 1), idx >> k
        out = unit_tensor(A, 2)
        for i in range(k):
            if mask & (1 << i):
                out = out.mul(dx[i])
        if t:
            out = out.mul(dg)
        comult.append(out)
    counit = [FR1 if (i & ((1 << k) - 1)) == 0 else FR0 for i in range(dim)]
    # antipode: S(x_i) = g x_i, S(g) = g, extended antimultiplicatively
    sx = [A.mul_basis(g_idx, 1 << i) for i in range(k)]
    sg = {g_idx: FR1}
    ant_cols = []
    for idx in range(dim):
        mask, t = idx & ((1 << k) - 1), idx >> k
        # reversed word: S(x_{i1}...x_{im} g^t) = S(g)^t S(x_{im})...S(x_{i1})
        vec = {0: FR1}
        if t:
            vec = A.mul_vec(vec, sg)
        for i in reversed(range(k)):
            if mask & (1 << i):
                vec = A.mul_vec(vec, sx[i])
        ant_cols.append(vec)
    antipode = SparseMatrix.from_columns(dim, ant_cols)
    H = HopfAlgebra(A, comult, counit, antipode, name="B_%d" % k)
    # generators of (H*)^op = {y_i, h}; used to certify checks on D(B_k)
    H.dual_generator_hint = bk_dual_generators(k)
    return H


def bk_monomial_index(k: int, xs, t: int) -> int:
    """Basis index of x_{i} monomial (1-based letters in `xs`) times g^t."""
    mask = 0
    for i in xs:
        mask |= 1 << (i - 1)
    return mask | (t << k)


def dual_hopf(H: HopfAlgebra, opposite_product: bool) -> HopfAlgebra:
    """Dual-basis Hopf algebra H* (or (H*)^op when `opposite_product`)."""
    n = H.dim
    A = H.algebra
    mult = {}
    for m in range(n):
        for (a, b), c in H.comult[m].coeffs.items():
            i, j = (b, a) if opposite_product else (a, b)
            mult.setdefault((i, j), {})[m] = mult.setdefault((i, j), {}).get(m, FR0) + c
    mult = {k: {m: c for m, c in v.items() if c} for k, v in mult.items()}
    unit = {i: c for i, c in enumerate(H.counit) if c}
    labels = ["(%s)*" % lab for lab in A.labels]
    op = "op" if opposite_product else ""
    DA = Algebra(n, labels, mult, unit, name="%s*%s" % (H.name, op))
    comult = []
    for m in range(n):
        cc = {}
        for (i, j), v in A.mult.items():
            c = v.get(m)
            if c:
                cc[(i, j)] = c
        comult.append(TensorElement(DA, 2, cc))
    counit = [A.unit.get(i, FR0) for i in range(n)]
    if opposite_product:
        base = H.antipode_inverse()
    else:
        base = H.antipode
    antipode = base.transpose()
    Hd = HopfAlgebra(DA, comult, counit, antipode, name=DA.name)
    return Hd


def tensor_hopf(H1: HopfAlgebra, H2: HopfAlgebra) -> HopfAlgebra:
    """Tensor product Hopf algebra with componentwise structure."""
    from .algcore import tensor_algebra
    A = tensor_algebra(H1.algebra, H2.algebra)
    d2 = H2.dim
    comult = []
    for i in range(H1.dim):
        for j in range(H2.dim):
            cc = {}
            for (a1, b1), c1 in H1.comult[i].coeffs.items():
                for (a2, b2), c2 in H2.comult[j].coeffs.items():
                    cc[(a1 * d2 + a2, b1 * d2 + b2)] = c1 * c2
            comult.append(TensorElement(A, 2, cc))
    counit = [H1.counit[i] * H2.counit[j] for i in range(H1.dim) for j in range(H2.dim)]
    ent = {}
    for (r1, c1), v1 in H1.antipode.entries.items():
        for (r2, c2), v2 in H2.antipode.entries.items():
            ent[(r1 * d2 + r2, c1 * d2 + c2)] = v1 * v2
    antipode = SparseMatrix(A.dim, A.dim, ent)
    return HopfAlgebra(A, comult, counit, antipode,
                       name="%s(x)%s" % (H1.name, H2.name))


@lru_cache(maxsize=None)
def bk_inclusion(l: int, k: int) -> AlgebraMap:
    """Hopf inclusion B_k -> B_{l+k}, g -> g and x_i -> x_{l+i}."""
    Hs = build_bk(k)
    Ht = build_bk(l + k)
    cols = []
    for idx in range(Hs.dim):
        mask, t = idx & ((1 << k) - 1), idx >> k
        cols.append({(mask << l) | (t << (l + k)): FR1})
    return AlgebraMap(Hs.algebra, Ht.algebra, cols, name="B_%d->B_%d" % (k, l + k))


def is_hopf_map(imap: AlgebraMap, Hs: HopfAlgebra, Ht: HopfAlgebra) -> list:
    """Check an algebra map also preserves Delta, eps and S."""
    report = imap.verify()
    for i in range(Hs.dim):
        img = imap.apply_basis(i)
        lhs = Ht.comult_vec(img)
        rhs = TensorElement(Ht.algebra, 2, {})
        for (a, b), c in Hs.comult[i].coeffs.items():
            va, vb = imap.apply_basis(a), imap.apply_basis(b)
            for p, cp in va.items():
                for q, cq in vb.items():
                    rhs = rhs.add(TensorElement(Ht.algebra, 2, {(p, q): c * cp * cq}))
        if lhs != rhs:
            report.append("coproduct not preserved at %s" % Hs.algebra.labels[i])
        if Ht.counit_vec(img) != Hs.counit[i]:
            report.append("counit not preserved at %s" % Hs.algebra.labels[i])
        if not vec_eq(Ht.antipode_vec(img), imap.apply(Hs.antipode_vec({i: FR1}))):
            report.append("antipode not preserved at %s" % Hs.algebra.labels[i])
    return report


def trivial_module(H: HopfAlgebra) -> ModuleRep:
    """The ground field through the counit."""
    return module_from_character(H.algebra, H.counit_row(), name="k(%s)" % H.name)


def bk_dual_generators(k: int) -> list:
    """The elements y_i = x_i* - (x_i g)* and h = 1* - g* of (B_k*)^op,
    as dual-coordinate vectors; they generate the dual algebra."""
    g_bit = 1 << k
    gens = []
    for i in range(k):
        gens.append({(1 << i): FR1, (1 << i) | g_bit: Fraction(-1)})
    gens.append({0: FR1, g_bit: Fraction(-1)})
    return gens


# ---------------------------------------------------------------------------
# catalog keys: "cyclic:n", "bk:k" (Hopf algebras), "cplus:k", "cminus:k"
# (D(B_k)-modules)

def catalog_hopf(key: str) -> HopfAlgebra:
    fam, _, arg = key.partition(":")
    if not arg:
        raise HopfError("catalog key needs a parameter, e.g. bk:2")
    n = int(arg)
    if fam == "cyclic":
        return build_cyclic(n)
    if fam == "bk":
        return build_bk(n)
    raise HopfError("unknown catalog key %r" % key)


def catalog_module(key: str) -> ModuleRep:
    fam, _, arg = key.partition(":")
    if not arg:
        raise HopfError("catalog key needs a parameter, e.g. cplus:2")
    k = int(arg)
    if fam == "cplus":
        return build_c_pm(k, +1)
    if fam == "cminus":
        return build_c_pm(k, -1)
    raise HopfError("unknown module catalog key %r" % key)


def build_c_pm(k: int, sign: int) -> ModuleRep:
    """C_+ / C_- over D(B_k); thin wrapper to keep the catalog in one place."""
    from .double import build_c_pm as _impl, drinfeld_double
    return _impl(drinfeld_double(build_bk(k)), sign)
