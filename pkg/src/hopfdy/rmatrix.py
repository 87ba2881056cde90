"""R-matrix verification, Zariski tangent spaces, and the B_k families.

An R-matrix is an invertible R in H ox H with

    R Delta(h) = Delta^op(h) R            (quasi-cocommutativity)
    (Delta ox id)(R) = R13 R23             (hexagon 1)
    (id ox Delta)(R) = R13 R12             (hexagon 2)

for which invertibility is equivalent to the counit normalization
(eps ox id)(R) = (id ox eps)(R) = 1.  The tangent space at R is the space
of T in H ox H with

    T Delta(h) = Delta^op(h) T
    (Delta ox id)(T) = T13 R23 + R13 T23
    (id ox Delta)(T) = T13 R12 + R13 T12,

computed as one exact kernel; (eps ox id)(T) = (id ox eps)(T) = 0 is
asserted on every basis vector rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exactlin import (FR0, FR1, SparseMatrix, TensorElement, fr, kernel_basis,
                       span_equal, unit_tensor)
from .hopfcore import HopfAlgebra, HopfError, build_bk, iterated_coproduct

FRH = Fraction(1, 2)


class RMatrixError(HopfError):
    """Raised when an operation requires a verified R-matrix."""


@dataclass
class RMatrixReport:
    quasi_cocommutative: bool
    hexagon1: bool
    hexagon2: bool
    counit_normalized: bool
    witnesses: list = field(default_factory=list)
    inverse: TensorElement = None

    @property
    def verified(self) -> bool:
        return (self.quasi_cocommutative and self.hexagon1 and self.hexagon2
                and self.counit_normalized and self.inverse is not None)

    def to_dict(self) -> dict:
        return {
            "quasi_cocommutative": self.quasi_cocommutative,
            "hexagon1": self.hexagon1,
            "hexagon2": self.hexagon2,
            "counit_normalized": self.counit_normalized,
            "verified": self.verified,
            "witnesses": list(self.witnesses),
        }


@dataclass
class TangentBasis:
    base: TensorElement
    vectors: list

    @property
    def dim(self) -> int:
        return len(self.vectors)


def embed13(u: TensorElement, H: HopfAlgebra) -> TensorElement:
    """u13 = sum u_{ab} e_a ox 1 ox e_b."""
    return u.insert_vector_at(1, H.unit)


def embed23(u: TensorElement, H: HopfAlgebra) -> TensorElement:
    return u.insert_vector_at(0, H.unit)


def embed12(u: TensorElement, H: HopfAlgebra) -> TensorElement:
    return u.insert_vector_at(2, H.unit)


def delta_at(H: HopfAlgebra, u: TensorElement, slot: int) -> TensorElement:
    return iterated_coproduct(H, u, slot)


def check_rmatrix(H: HopfAlgebra, R: TensorElement) -> RMatrixReport:
    """Check every axiom on every basis element; failures carry witnesses."""
    if R.degree != 2 or R.ambient is not H.algebra:
        raise RMatrixError("R must be a degree-2 tensor element over H")
    witnesses = []
    qc = True
    for h in range(H.dim):
        dh = H.comult[h]
        dop = dh.permute_slots([1, 0])
        if R.mul(dh) != dop.mul(R):
            qc = False
            witnesses.append("quasi-cocommutativity fails at %s" % H.label_of(h))
    r13 = embed13(R, H)
    r23 = embed23(R, H)
    r12 = embed12(R, H)
    hex1 = delta_at(H, R, 0) == r13.mul(r23)
    if not hex1:
        witnesses.append("(Delta ox id)(R) != R13 R23")
    hex2 = delta_at(H, R, 1) == r13.mul(r12)
    if not hex2:
        witnesses.append("(id ox Delta)(R) != R13 R12")
    one = unit_tensor(H.algebra, 1)
    cn = (R.contract_at(0, H.counit) == one) and (R.contract_at(1, H.counit) == one)
    if not cn:
        witnesses.append("counit normalization fails")
    inverse = None
    if qc and hex1 and hex2 and cn:
        cand = R.apply_matrix_at(0, H.antipode)  # (S ox id)(R)
        one2 = unit_tensor(H.algebra, 2)
        if cand.mul(R) == one2 and R.mul(cand) == one2:
            inverse = cand
        else:
            inverse = _solve_inverse(H, R)
            if inverse is None:
                witnesses.append("R admits no two-sided inverse")
    return RMatrixReport(qc, hex1, hex2, cn, witnesses, inverse)


def _solve_inverse(H: HopfAlgebra, R: TensorElement):
    """Generic linear solve for R^{-1}, guarding non-standard inputs."""
    n = H.dim
    # left multiplication by R on H ox H, in flat coordinates
    ent = {}
    for (a, b), c in R.coeffs.items():
        for p in range(n):
            for q in range(n):
                va = H.mul_basis(a, p)
                vb = H.mul_basis(b, q)
                for r1, c1 in va.items():
                    for r2, c2 in vb.items():
                        key = (r1 * n + r2, p * n + q)
                        ent[key] = ent.get(key, FR0) + c * c1 * c2
    M = SparseMatrix(n * n, n * n, ent)
    target = unit_tensor(H.algebra, 2)
    b = {a * n + bb: c for (a, bb), c in target.coeffs.items()}
    from .exactlin import solve
    x = solve(M, b)
    if x is None:
        return None
    cand = TensorElement(H.algebra, 2, {(f // n, f % n): c for f, c in x.items()})
    one2 = unit_tensor(H.algebra, 2)
    if cand.mul(R) == one2 and R.mul(cand) == one2:
        return cand
    return None


def tangent_space(H: HopfAlgebra, R: TensorElement, report: RMatrixReport = None) -> TangentBasis:
    """Exact kernel basis of the stacked linearized R-matrix conditions."""
    if report is None:
        report = check_rmatrix(H, R)
    if not report.verified:
        raise RMatrixError("tangent_space requires a verified R-matrix: %s"
                           % report.witnesses[:3])
    n = H.dim
    ncols = n * n
    rows = []

    def add_condition(vec3_or_2: dict, rowmap: dict):
        pass

    # linear maps applied to the basis elements e_a ox e_b of H ox H
    r13 = embed13(R, H)
    r23 = embed23(R, H)
    r12 = embed12(R, H)
    conds = {}  # (tag, flat ambient index) -> {column: coeff}

    def put(tag, tensor: TensorElement, col: int, sign=FR1):
        for key, c in tensor.coeffs.items():
            f = 0
            for i in key:
                f = f * n + i
            d = conds.setdefault((tag, f), {})
            s = d.get(col, FR0) + sign * c
            if s:
                d[col] = s
            else:
                d.pop(col, None)

    for a in range(n):
        for b in range(n):
            col = a * n + b
            T = TensorElement(H.algebra, 2, {(a, b): FR1})
            # T Delta(h) - Delta_op(h) T for all basis h
            for h in range(H.dim):
                dh = H.comult[h]
                dop = dh.permute_slots([1, 0])
                put(("qc", h), T.mul(dh), col)
                put(("qc", h), dop.mul(T), col, sign=fr(-1))
            t13 = embed13(T, H)
            t23 = embed23(T, H)
            t12 = embed12(T, H)
            put(("hex1", 0), delta_at(H, T, 0), col)
            put(("hex1", 0), t13.mul(r23), col, sign=fr(-1))
            put(("hex1", 0), r13.mul(t23), col, sign=fr(-1))
            put(("hex2", 0), delta_at(H, T, 1), col)
            put(("hex2", 0), t13.mul(r12), col, sign=fr(-1))
            put(("hex2", 0), r13.mul(t12), col, sign=fr(-1))

    rows = [d for d in conds.values() if d]
    basis_flat = kernel_basis(SparseMatrix.from_rows_list(rows, ncols) if rows
                              else SparseMatrix(0, ncols))
    vectors = []
    zero1 = TensorElement(H.algebra, 1, {})
    for v in basis_flat:
        T = TensorElement(H.algebra, 2, {(f // n, f % n): c for f, c in v.items()})
        # the counit conditions hold automatically; assert rather than assume
        if T.contract_at(0, H.counit) != zero1 or T.contract_at(1, H.counit) != zero1:
            raise RMatrixError("tangent vector fails counit vanishing; "
                               "internal inconsistency")
        vectors.append(T)
    return TangentBasis(R, vectors)


# ---------------------------------------------------------------------------
# B_k families

def bk_r0(k: int, H: HopfAlgebra = None) -> TensorElement:
    """R0 = e+ ox 1 + e- ox g with e{pm} = (1 pm g)/2; triangular, R0^2 = 1."""
    if H is None:
        H = build_bk(k)
    gi = 1 << k
    return TensorElement(H.algebra, 2, {
        (0, 0): FRH, (gi, 0): FRH, (0, gi): FRH, (gi, gi): -FRH})


def bk_r_lambda(k: int, lam, H: HopfAlgebra = None) -> TensorElement:
    """R_lambda = R0 * prod_{i,j} (1 ox 1 + lam[i][j] x_i ox x_j g)."""
    if H is None:
        H = build_bk(k)
    gi = 1 << k
    R = bk_r0(k, H)
    out = unit_tensor(H.algebra, 2)
    for i in range(k):
        for j in range(k):
            c = fr(lam[i][j])
            if not c:
                continue
            factor = unit_tensor(H.algebra, 2).add(
                TensorElement(H.algebra, 2, {((1 << i), (1 << j) | gi): c}))
            out = out.mul(factor)
    return R.mul(out)


def bk_standard_tangent_basis(k: int, H: HopfAlgebra = None) -> list:
    """The basis {R0 (x_i ox x_j g)} of the tangent space at R0."""
    if H is None:
        H = build_bk(k)
    gi = 1 << k
    R = bk_r0(k, H)
    out = []
    for i in range(k):
        for j in range(k):
            X = TensorElement(H.algebra, 2, {((1 << i), (1 << j) | gi): FR1})
            out.append(R.mul(X))
    return out


def tangent_span_matches(H: HopfAlgebra, basis: TangentBasis, reference: list) -> bool:
    n = H.dim
    A = [v.flat() for v in basis.vectors]
    B = [v.flat() for v in reference]
    return span_equal(A, B, n * n)
