"""Exact rational sparse linear algebra and sparse tensor-element arithmetic.

Everything is computed over QQ with `fractions.Fraction`, so results are
exact.  Vectors are dicts {index: Fraction} with no stored zeros, matrices
are dicts {(row, col): Fraction}.  Elimination is done fraction-free on
integer-scaled rows (cross-multiplication with gcd normalization, Bareiss
flavour) and converted to the unique reduced row echelon form at the end,
so every reported rank / kernel / rewrite is deterministic regardless of
the internal pivot strategy.

A fast rank pass over the prime field GF(2^31 - 1) is available as a
consistency alarm only: a modular rank can drop below the rational rank
(unlucky prime) but can never exceed it, so `rank_p > rank_QQ` aborts.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

ALARM_PRIME = 2147483647  # 2^31 - 1, prime > 2^30

FR0 = Fraction(0)
FR1 = Fraction(1)


class ExactlinError(Exception):
    pass


class ConsistencyError(ExactlinError):
    """An internal exactness invariant failed; results cannot be trusted."""


def fr(x) -> Fraction:
    """Coerce ints, 'p/q' strings and Fractions to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


# ---------------------------------------------------------------------------
# sparse vectors: dict {index: Fraction}, zero entries never stored

def vec_add(u: dict, v: dict) -> dict:
    w = dict(u)
    for i, c in v.items():
        s = w.get(i, FR0) + c
        if s:
            w[i] = s
        else:
            w.pop(i, None)
    return w


def vec_sub(u: dict, v: dict) -> dict:
    w = dict(u)
    for i, c in v.items():
        s = w.get(i, FR0) - c
        if s:
            w[i] = s
        else:
            w.pop(i, None)
    return w


def vec_scale(u: dict, c: Fraction) -> dict:
    if not c:
        return {}
    return {i: c * x for i, x in u.items()}


def vec_addmul(w: dict, u: dict, c) -> dict:
    """w += c*u in place; returns w."""
    if not c:
        return w
    for i, x in u.items():
        s = w.get(i, FR0) + c * x
        if s:
            w[i] = s
        else:
            w.pop(i, None)
    return w


def vec_dot(u: dict, v: dict) -> Fraction:
    if len(u) > len(v):
        u, v = v, u
    s = FR0
    for i, c in u.items():
        x = v.get(i)
        if x is not None:
            s += c * x
    return s


def vec_eq(u: dict, v: dict) -> bool:
    return not vec_sub(u, v)


# ---------------------------------------------------------------------------

class SparseMatrix:
    """Immutable-by-convention sparse matrix over QQ."""

    def __init__(self, rows: int, cols: int, entries=None):
        self.rows = rows
        self.cols = cols
        self.entries: dict = {}
        self._cols = None  # lazy column cache
        if entries:
            for (r, c), v in entries.items():
                v = fr(v)
                if v:
                    assert 0 <= r < rows and 0 <= c < cols, (r, c, rows, cols)
                    self.entries[(r, c)] = v

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, n, {(i, i): FR1 for i in range(n)})

    @classmethod
    def from_columns(cls, rows: int, columns: list) -> "SparseMatrix":
        ent = {}
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v:
                    ent[(i, j)] = fr(v)
        return cls(rows, len(columns), ent)

    @classmethod
    def from_rows_list(cls, rows: list, cols: int) -> "SparseMatrix":
        ent = {}
        for i, row in enumerate(rows):
            for j, v in row.items():
                if v:
                    ent[(i, j)] = fr(v)
        return cls(len(rows), cols, ent)

    def is_zero(self) -> bool:
        return not self.entries

    def col(self, j: int) -> dict:
        return dict(self.columns()[j])

    def columns(self) -> list:
        if self._cols is None:
            cols = [dict() for _ in range(self.cols)]
            for (r, c), v in self.entries.items():
                cols[c][r] = v
            self._cols = cols
        return self._cols

    def row_dicts(self) -> list:
        rows = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            rows[r][c] = v
        return rows

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows,
                            {(c, r): v for (r, c), v in self.entries.items()})

    def mul_vec(self, v: dict) -> dict:
        """Matrix times column vector (vector indexed by columns)."""
        out: dict = {}
        cols = self.columns()
        for j, c in v.items():
            for r, m in cols[j].items():
                s = out.get(r, FR0) + m * c
                if s:
                    out[r] = s
                else:
                    out.pop(r, None)
        return out

    def vec_mul(self, row: dict) -> dict:
        """Row vector times matrix (vector indexed by rows)."""
        out: dict = {}
        for (r, c), m in self.entries.items():
            x = row.get(r)
            if x is not None:
                s = out.get(c, FR0) + x * m
                if s:
                    out[c] = s
                else:
                    out.pop(c, None)
        return out

    def matmul(self, other: "SparseMatrix") -> "SparseMatrix":
        assert self.cols == other.rows, (self.cols, other.rows)
        cols_self = self.columns()
        ent: dict = {}
        other_cols = other.columns()
        for j, col in enumerate(other_cols):
            acc: dict = {}
            for k, v in col.items():
                for r, m in cols_self[k].items():
                    s = acc.get(r, FR0) + m * v
                    if s:
                        acc[r] = s
                    else:
                        acc.pop(r, None)
            for r, v in acc.items():
                ent[(r, j)] = v
        return SparseMatrix(self.rows, other.cols, ent)

    def add(self, other: "SparseMatrix") -> "SparseMatrix":
        assert (self.rows, self.cols) == (other.rows, other.cols)
        ent = dict(self.entries)
        for k, v in other.entries.items():
            s = ent.get(k, FR0) + v
            if s:
                ent[k] = s
            else:
                ent.pop(k, None)
        return SparseMatrix(self.rows, self.cols, ent)

    def scale(self, c) -> "SparseMatrix":
        c = fr(c)
        return SparseMatrix(self.rows, self.cols,
                            {k: c * v for k, v in self.entries.items()})

    def __eq__(self, other):
        return (isinstance(other, SparseMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __hash__(self):
        return id(self)

    def __repr__(self):
        return "SparseMatrix(%dx%d, %d entries)" % (self.rows, self.cols, len(self.entries))


# ---------------------------------------------------------------------------
# integer-row echelon engine

def _int_rows(row: dict) -> dict:
    """Scale a Fraction row to coprime integers, sign-normalized later."""
    if not row:
        return {}
    denom_lcm = 1
    for v in row.values():
        d = v.denominator
        denom_lcm = denom_lcm * d // gcd(denom_lcm, d)
    out = {i: int(v * denom_lcm) for i, v in row.items() if v}
    g = 0
    for v in out.values():
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        out = {i: v // g for i, v in out.items()}
    return out


def _normalize(row: dict) -> dict:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {i: v // g for i, v in row.items()}
    return row


class Echelon:
    """Incremental fraction-free row echelon with a configurable pivot order.

    `key(col)` orders columns for pivot preference (smaller key wins inside
    each incoming row).  The default is the column index itself, which makes
    the final reduced echelon independent of insertion order (RREF is
    unique).  Quotient constructions pass a reversed key so that low-index
    columns survive as representatives.
    """

    def __init__(self, ncols: int, key=None):
        self.ncols = ncols
        self.key = key if key is not None else (lambda c: c)
        self.pivot_rows: dict = {}   # pivot col -> integer row dict
        self._rref_done = False

    @property
    def rank(self) -> int:
        return len(self.pivot_rows)

    def reduce_row(self, row: dict) -> dict:
        """Eliminate all pivot columns from an integer row (fraction-free)."""
        row = dict(row)
        pivots = self.pivot_rows
        hits = [c for c in row if c in pivots]
        hitset = set(hits)
        while hits:
            hit = hits.pop()
            hitset.discard(hit)
            if hit not in row:
                continue
            prow = pivots[hit]
            a = prow[hit]
            b = row[hit]
            g = gcd(a, b)
            ma, mb = a // g, b // g
            # row := ma*row - mb*prow  (kills column `hit`)
            if ma != 1:
                for c in row:
                    row[c] *= ma
            for c, v in prow.items():
                s = row.get(c, 0) - mb * v
                if s:
                    row[c] = s
                    if c != hit and c not in hitset and c in pivots:
                        hits.append(c)
                        hitset.add(c)
                else:
                    row.pop(c, None)
            row = _normalize(row)
        return row

    def add_row(self, row: dict):
        """Insert a row (Fraction or int dict); returns new pivot col or None."""
        if not row:
            return None
        first = next(iter(row.values()))
        if isinstance(first, Fraction):
            row = _int_rows(row)
        else:
            row = _normalize(dict(row))
        row = self.reduce_row(row)
        if not row:
            return None
        key = self.key
        piv = min(row, key=key)
        if row[piv] < 0:
            row = {c: -v for c, v in row.items()}
        self.pivot_rows[piv] = row
        self._rref_done = False
        return piv

    def residual(self, row: dict) -> dict:
        """Fraction-valued remainder of `row` modulo the current row space."""
        out = dict(row)
        pivots = self.pivot_rows
        hits = [c for c in out if c in pivots]
        hitset = set(hits)
        while hits:
            hit = hits.pop()
            hitset.discard(hit)
            if hit not in out:
                continue
            prow = pivots[hit]
            coef = out[hit] / prow[hit]
            for c, v in prow.items():
                s = out.get(c, FR0) - coef * v
                if s:
                    out[c] = s
                    if c != hit and c not in hitset and c in pivots:
                        hits.append(c)
                        hitset.add(c)
                else:
                    out.pop(c, None)
        return out

    def contains(self, row: dict) -> bool:
        return not self.residual(row)

    def to_rref(self):
        """Back-substitute so every pivot row is supported on its pivot and
        non-pivot columns only.  Idempotent."""
        if self._rref_done:
            return
        pivots = self.pivot_rows
        order = sorted(pivots, key=self.key, reverse=True)
        done: dict = {}
        for piv in order:
            row = pivots[piv]
            changed = True
            while changed:
                changed = False
                for c in list(row):
                    if c != piv and c in done:
                        prow = done[c]
                        a, b = prow[c], row[c]
                        g = gcd(a, b)
                        ma, mb = a // g, b // g
                        if ma != 1:
                            for cc in row:
                                row[cc] *= ma
                        for cc, v in prow.items():
                            s = row.get(cc, 0) - mb * v
                            if s:
                                row[cc] = s
                            else:
                                row.pop(cc, None)
                        row = _normalize(row)
                        changed = True
                        break
            if row[piv] < 0:
                row = {c: -v for c, v in row.items()}
            pivots[piv] = row
            done[piv] = row
        self._rref_done = True

    def rewrite(self, piv: int) -> dict:
        """Express a pivot column over non-pivot columns: piv = sum c_j * e_j.

        Requires to_rref() first.  Returns {col: Fraction} over non-pivots.
        """
        assert self._rref_done
        row = self.pivot_rows[piv]
        lead = row[piv]
        return {c: Fraction(-v, lead) for c, v in row.items() if c != piv}


def _matrix_int_rows(M: SparseMatrix) -> list:
    rows = [dict() for _ in range(M.rows)]
    for (r, c), v in M.entries.items():
        rows[r][c] = v
    return [r for r in rows if r]


def rank(M: SparseMatrix, modular_alarm: bool = True) -> int:
    """Exact rank over QQ, deterministic.

    When `modular_alarm` is set and the matrix is large, a GF(p) rank is
    computed first; `rank_p > rank_QQ` is impossible, so it aborts.
    """
    rows = _matrix_int_rows(M)
    ech = Echelon(M.cols)
    for row in rows:
        ech.add_row(row)
    r = ech.rank
    if modular_alarm and len(M.entries) > 20000:
        try:
            rp = rank_modular(M)
        except ExactlinError:
            rp = None  # no reduction mod p: the alarm is unavailable
        if rp is not None and rp > r:
            raise ConsistencyError("modular rank %d exceeds exact rank %d" % (rp, r))
    return r


def rank_of_rows(rows: list, ncols: int) -> int:
    ech = Echelon(ncols)
    # sparse rows first: far less elimination fill-in, same canonical result
    order = sorted(range(len(rows)), key=lambda i: (len(rows[i]), i))
    for i in order:
        ech.add_row(rows[i])
    return ech.rank


def rank_of_vectors(vecs: list, ambient: int) -> int:
    """Rank of a list of sparse vectors; transposes the system when the
    ambient is much larger than the vector count (rank(A) = rank(A^T))."""
    vecs = [v for v in vecs if v]
    if not vecs:
        return 0
    if ambient <= 4 * len(vecs):
        return rank_of_rows(vecs, ambient)
    byidx: dict = {}
    for j, v in enumerate(vecs):
        for f, c in v.items():
            byidx.setdefault(f, {})[j] = c
    return rank_of_rows(list(byidx.values()), len(vecs))


def rank_modular(M: SparseMatrix, p: int = ALARM_PRIME) -> int:
    """Rank over GF(p); used only as a consistency alarm, never reported.

    Raises when an entry's denominator vanishes mod p (the entry has no
    image in GF(p)); callers treat that as "alarm unavailable".
    """
    pivots: dict = {}
    for row0 in _matrix_int_rows(M):
        for v in row0.values():
            if v.denominator % p == 0:
                raise ExactlinError("entry has no reduction mod %d" % p)
        row = {c: int(v.numerator) * pow(v.denominator, p - 2, p) % p
               for c, v in row0.items()}
        row = {c: v for c, v in row.items() if v}
        while row:
            c0 = min(row)
            if c0 not in pivots:
                inv = pow(row[c0], p - 2, p)
                pivots[c0] = {c: (v * inv) % p for c, v in row.items()}
                break
            prow = pivots[c0]
            f = row[c0]
            for c, v in prow.items():
                s = (row.get(c, 0) - f * v) % p
                if s:
                    row[c] = s
                else:
                    row.pop(c, None)
    return len(pivots)


def kernel_basis(M: SparseMatrix) -> list:
    """Exact basis of ker(M) as column vectors {index: Fraction}.

    Canonical: one vector per free column f (ascending), normalized with
    entry 1 at f and RREF-determined entries at the pivot columns.
    """
    ech = Echelon(M.cols)
    for row in _matrix_int_rows(M):
        ech.add_row(row)
    ech.to_rref()
    pivset = set(ech.pivot_rows)
    free = [c for c in range(M.cols) if c not in pivset]
    basis = []
    rewrites = {p: ech.rewrite(p) for p in ech.pivot_rows}
    for f in free:
        v = {f: FR1}
        for p, rw in rewrites.items():
            c = rw.get(f)
            if c:
                v[p] = c
        basis.append(v)
    return basis


def kernel_basis_marked(M: SparseMatrix):
    """kernel_basis plus the free-column marker of each basis vector.

    Coordinates of any v in the kernel span are read off at the markers:
    v = sum_j v[free_cols[j]] * basis[j].
    """
    ech = Echelon(M.cols)
    for row in _matrix_int_rows(M):
        ech.add_row(row)
    ech.to_rref()
    pivset = set(ech.pivot_rows)
    free = [c for c in range(M.cols) if c not in pivset]
    rewrites = {p: ech.rewrite(p) for p in ech.pivot_rows}
    basis = []
    for f in free:
        v = {f: FR1}
        for p, rw in rewrites.items():
            c = rw.get(f)
            if c:
                v[p] = c
        basis.append(v)
    return basis, free


def kernel_basis_of_rows(rows: list, ncols: int) -> list:
    ent = {}
    for i, row in enumerate(rows):
        for j, v in row.items():
            if v:
                ent[(i, j)] = fr(v)
    return kernel_basis(SparseMatrix(len(rows), ncols, ent))


def span_equal(A: list, B: list, dim: int) -> bool:
    """True iff the two lists of vectors span the same subspace of QQ^dim."""
    for v in A + B:
        for i in v:
            if not (0 <= i < dim):
                raise ExactlinError("vector coordinate %d out of dimension %d" % (i, dim))
    ra = rank_of_rows(A, dim)
    rb = rank_of_rows(B, dim)
    if ra != rb:
        return False
    return rank_of_rows(A + B, dim) == ra


def solve(M: SparseMatrix, b: dict):
    """One solution x of M x = b, or None.  Deterministic (free vars = 0)."""
    aug_col = M.cols
    ech = Echelon(M.cols + 1)
    rows = [dict() for _ in range(M.rows)]
    for (r, c), v in M.entries.items():
        rows[r][c] = v
    for r, v in b.items():
        if v:
            rows[r][aug_col] = -v
    for row in rows:
        if row:
            ech.add_row(row)
    if aug_col in ech.pivot_rows:
        return None  # inconsistent
    ech.to_rref()
    x: dict = {}
    for p in ech.pivot_rows:
        rw = ech.rewrite(p)
        c = rw.get(aug_col)
        if c:
            x[p] = c
    # verify exactly
    if not vec_eq(M.mul_vec(x), b):
        return None
    return x


class SpanSolver:
    """Tracks a list of generating vectors; expresses members in terms of them."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.ech = Echelon(ncols + 0)
        self.track: dict = {}      # pivot col -> combination {gen index: Fraction}
        self.ngens = 0

    def add(self, v: dict) -> bool:
        """Add a generator; True if it enlarged the span."""
        idx = self.ngens
        self.ngens += 1
        row = dict(v)
        comb = {idx: FR1}
        pivots = self.ech.pivot_rows
        hits = [c for c in row if c in pivots]
        hitset = set(hits)
        while hits:
            hit = hits.pop()
            hitset.discard(hit)
            if hit not in row:
                continue
            prow = pivots[hit]
            coef = row[hit] / prow[hit]
            for c, vv in prow.items():
                s = row.get(c, FR0) - coef * vv
                if s:
                    row[c] = s
                    if c != hit and c not in hitset and c in pivots:
                        hits.append(c)
                        hitset.add(c)
                else:
                    row.pop(c, None)
            for g, vv in self.track[hit].items():
                s = comb.get(g, FR0) - coef * vv
                if s:
                    comb[g] = s
                else:
                    comb.pop(g, None)
        if not row:
            return False
        piv = min(row)
        lead = row[piv]
        introws = _int_rows(row)
        scale = introws[piv] / lead  # introws = scale * row
        self.ech.pivot_rows[piv] = introws
        self.track[piv] = {g: scale * vv for g, vv in comb.items()}
        return True

    def coordinates(self, v: dict):
        """Coefficients c with v = sum c_g * gen_g, or None if not in span."""
        row = dict(v)
        out: dict = {}
        pivots = self.ech.pivot_rows
        hits = [c for c in row if c in pivots]
        hitset = set(hits)
        while hits:
            hit = hits.pop()
            hitset.discard(hit)
            if hit not in row:
                continue
            prow = pivots[hit]
            coef = row[hit] / prow[hit]
            for c, vv in prow.items():
                s = row.get(c, FR0) - coef * vv
                if s:
                    row[c] = s
                    if c != hit and c not in hitset and c in pivots:
                        hits.append(c)
                        hitset.add(c)
                else:
                    row.pop(c, None)
            for g, vv in self.track[hit].items():
                s = out.get(g, FR0) + coef * vv
                if s:
                    out[g] = s
                else:
                    out.pop(g, None)
        if row:
            return None
        return out


# ---------------------------------------------------------------------------
# tensor elements

def flatten_index(key: tuple, dim: int) -> int:
    f = 0
    for i in key:
        f = f * dim + i
    return f


def unflatten_index(f: int, dim: int, degree: int) -> tuple:
    out = []
    for _ in range(degree):
        out.append(f % dim)
        f //= dim
    return tuple(reversed(out))


class TensorElement:
    """Sparse element of H^{otimes d} over a base algebra of dimension n.

    Coefficients are keyed by d-tuples of basis indices.  The ambient object
    only needs `.dim` and `.mul_basis(i, j) -> {k: Fraction}`; slotwise
    products use those structure constants.
    """

    __slots__ = ("ambient", "degree", "coeffs")

    def __init__(self, ambient, degree: int, coeffs=None):
        self.ambient = ambient
        self.degree = degree
        self.coeffs: dict = {}
        if coeffs:
            n = ambient.dim
            for k, v in coeffs.items():
                v = fr(v)
                if not v:
                    continue
                assert len(k) == degree, (k, degree)
                assert all(0 <= i < n for i in k), (k, n)
                self.coeffs[k] = v

    def _assert_compatible(self, other: "TensorElement"):
        if self.ambient is not other.ambient:
            raise ExactlinError("tensor elements live over different ambient algebras")
        if self.degree != other.degree:
            raise ExactlinError("tensor degree mismatch: %d vs %d" % (self.degree, other.degree))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return (self.ambient is other.ambient and self.degree == other.degree
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return id(self)

    def add(self, other: "TensorElement") -> "TensorElement":
        self._assert_compatible(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            s = out.get(k, FR0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return TensorElement(self.ambient, self.degree, out)

    def sub(self, other: "TensorElement") -> "TensorElement":
        return self.add(other.scale(-1))

    def scale(self, c) -> "TensorElement":
        c = fr(c)
        if not c:
            return TensorElement(self.ambient, self.degree, {})
        return TensorElement(self.ambient, self.degree,
                             {k: c * v for k, v in self.coeffs.items()})

    def mul(self, other: "TensorElement") -> "TensorElement":
        """Slotwise product using the ambient algebra's structure constants."""
        self._assert_compatible(other)
        amb = self.ambient
        d = self.degree
        out: dict = {}
        mul_basis = amb.mul_basis
        for ka, va in self.coeffs.items():
            for kb, vb in other.coeffs.items():
                # expand slot products left to right
                terms = [((), va * vb)]
                for s in range(d):
                    prod = mul_basis(ka[s], kb[s])
                    if not prod:
                        terms = []
                        break
                    new = []
                    for (pref, coef) in terms:
                        for idx, c in prod.items():
                            new.append((pref + (idx,), coef * c))
                    terms = new
                for key, coef in terms:
                    s0 = out.get(key, FR0) + coef
                    if s0:
                        out[key] = s0
                    else:
                        out.pop(key, None)
        return TensorElement(self.ambient, d, out)

    def permute_slots(self, perm) -> "TensorElement":
        """Re-index along `perm`, 0-based: slot j of the input becomes slot
        perm[j] of the output."""
        d = self.degree
        if sorted(perm) != list(range(d)):
            raise ExactlinError("invalid permutation %r for degree %d" % (perm, d))
        out = {}
        for k, v in self.coeffs.items():
            nk = [0] * d
            for j, i in enumerate(k):
                nk[perm[j]] = i
            out[tuple(nk)] = v
        return TensorElement(self.ambient, d, out)

    def concat(self, other: "TensorElement") -> "TensorElement":
        """Juxtaposition u ox v of degree deg(u)+deg(v)."""
        if self.ambient is not other.ambient:
            raise ExactlinError("tensor elements live over different ambient algebras")
        out = {}
        for ka, va in self.coeffs.items():
            for kb, vb in other.coeffs.items():
                out[ka + kb] = va * vb
        return TensorElement(self.ambient, self.degree + other.degree, out)

    def apply_matrix_at(self, slot: int, matrix: SparseMatrix) -> "TensorElement":
        """Apply a linear map (columns = images of basis vectors) in one slot."""
        cols = matrix.columns()
        out: dict = {}
        for k, v in self.coeffs.items():
            for i, c in cols[k[slot]].items():
                nk = k[:slot] + (i,) + k[slot + 1:]
                s = out.get(nk, FR0) + v * c
                if s:
                    out[nk] = s
                else:
                    out.pop(nk, None)
        return TensorElement(self.ambient, self.degree, out)

    def contract_at(self, slot: int, functional) -> "TensorElement":
        """Apply a functional {basis index: Fraction} to one slot; degree drops."""
        out: dict = {}
        for k, v in self.coeffs.items():
            c = functional.get(k[slot]) if isinstance(functional, dict) else functional[k[slot]]
            if not c:
                continue
            nk = k[:slot] + k[slot + 1:]
            s = out.get(nk, FR0) + v * c
            if s:
                out[nk] = s
            else:
                out.pop(nk, None)
        return TensorElement(self.ambient, self.degree - 1, out)

    def insert_vector_at(self, slot: int, vec: dict) -> "TensorElement":
        """Insert an ambient element (sparse vector) as a new tensor slot."""
        out = {}
        for k, v in self.coeffs.items():
            for i, c in vec.items():
                out[k[:slot] + (i,) + k[slot:]] = v * c
        return TensorElement(self.ambient, self.degree + 1, out)

    def flat(self) -> dict:
        """Coefficients keyed by flattened (mixed-radix) integer index."""
        n = self.ambient.dim
        return {flatten_index(k, n): v for k, v in self.coeffs.items()}

    def to_sorted_items(self):
        return sorted(self.coeffs.items())

    def __repr__(self):
        items = self.to_sorted_items()[:6]
        body = ", ".join("%s: %s" % (k, v) for k, v in items)
        more = "" if len(self.coeffs) <= 6 else ", ..."
        return "TensorElement(deg=%d, {%s%s})" % (self.degree, body, more)


def tensor_mul(a: TensorElement, b: TensorElement) -> TensorElement:
    return a.mul(b)


def permute_slots(u: TensorElement, perm) -> TensorElement:
    return u.permute_slots(perm)


def unit_tensor(ambient, degree: int) -> TensorElement:
    """1^{otimes degree}; the unit may be a combination of basis elements."""
    out = TensorElement(ambient, 0, {(): FR1})
    for _ in range(degree):
        out = out.insert_vector_at(out.degree, ambient.unit)
    return out


def from_flat(ambient, degree: int, flatvec: dict) -> TensorElement:
    n = ambient.dim
    return TensorElement(ambient, degree,
                         {unflatten_index(f, n, degree): v for f, v in flatvec.items()})
