"""Tensor product of two exact backends.

Gives rank-2 torus actions (e.g. T^2 on S^2 x S^2) so the multi-generator
extension iteration, with its multi-index monomials, can be exercised.

Pure tensors w1 (x) w2 are stored blockwise: the degree-q space is the
direct sum over q1 + q2 = q of (factor-1 degree q1) (x) (factor-2 degree
q2), flattened row-major.  Every operator is generated from the factor
operators and the Koszul sign rule

    op(w1 (x) w2) = op1(w1) (x) w2 + (-1)^(deg w1) w1 (x) op2(w2)

for the odd operators d, d* and the contractions; the Hodge star uses
``star(w1 (x) w2) = (-1)^(q2 (n1 - q1)) star1(w1) (x) star2(w2)``.
Nothing is hand-written per backend pair.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .errors import BackendMismatch
from .forms import ExactBackend, GeneratorSpec, InvariantForm, _Eig


class ProductBackend(ExactBackend):
    """Riemannian product of two exact backends with combined generators."""

    def __init__(self, b1: ExactBackend, b2: ExactBackend):
        if not (getattr(b1, "is_exact", False) and getattr(b2, "is_exact", False)):
            raise BackendMismatch(
                "product factors must both be exact backends"
            )
        super().__init__()
        self.b1 = b1
        self.b2 = b2
        self.n = b1.n + b2.n
        s1, s2 = b1.generator_spec, b2.generator_spec
        self._spec = GeneratorSpec(
            degrees=s1.degrees + s2.degrees,
            labels=tuple("left." + l for l in s1.labels)
            + tuple("right." + l for l in s2.labels),
        )
        # blocks[q] = list of (q1, q2, offset, d1, d2)
        self._blocks: Dict[int, List[Tuple[int, int, int, int, int]]] = {}
        for q in range(self.n + 1):
            blocks = []
            offset = 0
            for q1 in range(0, b1.n + 1):
                q2 = q - q1
                d1, d2 = b1.dimension(q1), b2.dimension(q2)
                if d1 == 0 or d2 == 0:
                    continue
                blocks.append((q1, q2, offset, d1, d2))
                offset += d1 * d2
            self._blocks[q] = blocks

    @property
    def tag(self) -> str:
        return "product:[%s|%s]" % (self.b1.tag, self.b2.tag)

    @property
    def generator_spec(self) -> GeneratorSpec:
        return self._spec

    def dimension(self, q: int) -> int:
        if not (0 <= q <= self.n):
            return 0
        blocks = self._blocks[q]
        if not blocks:
            return 0
        q1, q2, offset, d1, d2 = blocks[-1]
        return offset + d1 * d2

    def block_layout(self, q: int):
        """Blocks of the degree-q space as (q1, q2, offset, dim1, dim2)."""
        return list(self._blocks.get(q, []))

    # -- tensor plumbing ---------------------------------------------------

    def tensor(self, w1: InvariantForm, w2: InvariantForm) -> InvariantForm:
        """The pure tensor w1 (x) w2."""
        if w1.backend is not self.b1 or w2.backend is not self.b2:
            raise BackendMismatch("tensor factors belong to the wrong backends")
        q = w1.degree + w2.degree
        out = [Fraction(0)] * self.dimension(q)
        for q1, q2, offset, d1, d2 in self._blocks.get(q, []):
            if q1 != w1.degree:
                continue
            for i, a in enumerate(w1.coeffs):
                if a == 0:
                    continue
                base = offset + i * d2
                for j, bcoef in enumerate(w2.coeffs):
                    if bcoef:
                        out[base + j] = a * bcoef
        return InvariantForm(self, q, tuple(out))

    def block_chunk(self, w: InvariantForm, q1: int, q2: int):
        """Coefficient matrix (dim1 x dim2 nested lists) of one block."""
        for bq1, bq2, offset, d1, d2 in self._blocks[w.degree]:
            if bq1 == q1 and bq2 == q2:
                return [
                    list(w.coeffs[offset + i * d2: offset + (i + 1) * d2])
                    for i in range(d1)
                ]
        return None

    def _add_block(self, out, q: int, q1: int, q2: int, mat, sign: int):
        for bq1, bq2, offset, d1, d2 in self._blocks.get(q, []):
            if bq1 == q1 and bq2 == q2:
                for i in range(d1):
                    row = mat[i]
                    base = offset + i * d2
                    for j in range(d2):
                        if row[j]:
                            out[base + j] += sign * row[j]
                return
        if any(any(row) for row in mat):
            raise AssertionError("block (%d,%d) missing in degree %d" % (q1, q2, q))

    def _apply_left(self, backend_op, q1: int, mat, d2: int):
        """Apply a factor-1 operator down the columns; returns (q1', mat')."""
        out_mat = None
        out_q = None
        for j in range(d2):
            col = [mat[i][j] for i in range(len(mat))]
            w = InvariantForm(self.b1, q1, tuple(col))
            res = backend_op(w)
            if out_mat is None:
                out_q = res.degree
                out_mat = [[Fraction(0)] * d2
                           for _ in range(self.b1.dimension(res.degree))]
            for i, c in enumerate(res.coeffs):
                if c:
                    out_mat[i][j] = c
        return out_q, out_mat

    def _apply_right(self, backend_op, q2: int, mat):
        """Apply a factor-2 operator along the rows; returns (q2', mat')."""
        out_mat = []
        out_q = None
        for row in mat:
            w = InvariantForm(self.b2, q2, tuple(row))
            res = backend_op(w)
            out_q = res.degree
            out_mat.append(list(res.coeffs))
        return out_q, out_mat

    def _koszul_op(self, w: InvariantForm, op1, op2, shift: int) -> InvariantForm:
        """Odd operator from factor operators with the Koszul sign rule."""
        q = w.degree
        out_deg = q + shift
        out = [Fraction(0)] * self.dimension(out_deg)
        for q1, q2, offset, d1, d2 in self._blocks.get(q, []):
            mat = self.block_chunk(w, q1, q2)
            if op1 is not None:
                nq1, nmat = self._apply_left(op1, q1, mat, d2)
                if nmat is not None and self.b1.dimension(nq1) > 0:
                    self._add_block(out, out_deg, nq1, q2, nmat, 1)
            if op2 is not None:
                nq2, nmat = self._apply_right(op2, q2, mat)
                if nmat and self.b2.dimension(nq2) > 0:
                    sign = -1 if q1 % 2 else 1
                    self._add_block(out, out_deg, q1, nq2, nmat, sign)
        return InvariantForm(self, out_deg, tuple(out))

    # -- operators ---------------------------------------------------------

    def d(self, w: InvariantForm) -> InvariantForm:
        if self.dimension(w.degree) == 0:
            return self.zero(w.degree + 1)
        return self._koszul_op(w, self.b1.d, self.b2.d, +1)

    def codifferential(self, w: InvariantForm) -> InvariantForm:
        if self.dimension(w.degree) == 0:
            return self.zero(w.degree - 1)
        return self._koszul_op(
            w, self.b1.codifferential, self.b2.codifferential, -1
        )

    def star(self, w: InvariantForm) -> InvariantForm:
        if self.dimension(w.degree) == 0:
            return self.zero(self.n - w.degree)
        q = w.degree
        out_deg = self.n - q
        out = [Fraction(0)] * self.dimension(out_deg)
        for q1, q2, offset, d1, d2 in self._blocks.get(q, []):
            mat = self.block_chunk(w, q1, q2)
            nq1, m1 = self._apply_left(self.b1.star, q1, mat, d2)
            if m1 is None:
                continue
            nq2, m2 = self._apply_right(self.b2.star, q2, m1)
            sign = -1 if (q2 * (self.b1.n - q1)) % 2 else 1
            self._add_block(out, out_deg, nq1, nq2, m2, sign)
        return InvariantForm(self, out_deg, tuple(out))

    def contraction(self, j: int, w: InvariantForm) -> InvariantForm:
        r1 = self.b1.generator_spec.rank
        if not 0 <= j < self._spec.rank:
            raise IndexError("generator index out of range")
        deg = self._spec.degrees[j]
        shift = -(deg - 1)
        if self.dimension(w.degree) == 0:
            return self.zero(w.degree + shift)
        if j < r1:
            return self._koszul_op(
                w, lambda f: self.b1.contraction(j, f), None, shift
            )
        return self._koszul_op(
            w, None, lambda f: self.b2.contraction(j - r1, f), shift
        )

    def harmonic_basis(self, q: int) -> List[InvariantForm]:
        out = []
        for q1 in range(0, self.b1.n + 1):
            q2 = q - q1
            for h1 in self.b1.harmonic_basis(q1):
                for h2 in self.b2.harmonic_basis(q2):
                    out.append(self.tensor(h1, h2))
        return out

    # -- spectral data -----------------------------------------------------

    def _pi_power(self) -> int:
        return self.b1._pi_power() + self.b2._pi_power()

    def _gram_apply(self, q: int, vec: Sequence[Fraction]) -> List[Fraction]:
        out = [Fraction(0)] * len(vec)
        for q1, q2, offset, d1, d2 in self._blocks.get(q, []):
            mat = [
                list(vec[offset + i * d2: offset + (i + 1) * d2])
                for i in range(d1)
            ]
            # columns through gram of factor 1
            cols = []
            for j in range(d2):
                col = [mat[i][j] for i in range(d1)]
                cols.append(self.b1._gram_apply(q1, col))
            # rows through gram of factor 2
            for i in range(d1):
                row = [cols[j][i] for j in range(d2)]
                res = self.b2._gram_apply(q2, row)
                base = offset + i * d2
                for j in range(d2):
                    out[base + j] = res[j]
        return out

    def _eigen_entries(self, q: int) -> List[_Eig]:
        eig = []
        for q1, q2, offset, d1, d2 in self._blocks.get(q, []):
            for e1 in self.b1._eigen(q1):
                for e2 in self.b2._eigen(q2):
                    entries = [
                        (offset + i1 * d2 + i2, v1 * v2)
                        for i1, v1 in e1.entries
                        for i2, v2 in e2.entries
                    ]
                    eig.append(
                        _Eig(
                            e1.eigenvalue + e2.eigenvalue,
                            entries,
                            e1.norm_sq * e2.norm_sq,
                        )
                    )
        return eig


def make_product_backend(b1: ExactBackend, b2: ExactBackend) -> ProductBackend:
    """Tensor two exact backends into a rank-(r1+r2) product backend."""
    return ProductBackend(b1, b2)
