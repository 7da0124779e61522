"""Bit matrices over GF(2) and the bilinear convolution algorithms.

A bilinear algorithm computes z = Q . (R y o P x), where o is pointwise
field multiplication; its multiplication count is the common row count t of
P and R. This module holds the fixed algorithms used by the transform
plans:

  * the length-5 Toeplitz product (t = 14),
  * the length-10 Toeplitz product assembled from three length-5 calls
    (t = 42),
  * the 11-point cyclic convolution over characteristic-2 fields (t = 43).

It also carries an exact-integer model of the real-field derivation behind
the 11-point algorithm, used purely as a verifier: all identities there are
checked in arbitrary-precision integer arithmetic with no rounding anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cache


class BitMatrix:
    """Dense matrix over GF(2); rows are stored as int bitmasks.

    Bit j of a row mask is the entry in column j.
    """

    __slots__ = ("rows", "cols", "row_masks", "_row_indices")

    def __init__(self, rows: int, cols: int, row_masks):
        row_masks = tuple(row_masks)
        if len(row_masks) != rows:
            raise ValueError("row count mismatch")
        limit = 1 << cols
        if any(m < 0 or m >= limit for m in row_masks):
            raise ValueError("row mask exceeds column count")
        self.rows = rows
        self.cols = cols
        self.row_masks = row_masks
        self._row_indices = None

    @classmethod
    def from_rows(cls, rows) -> "BitMatrix":
        rows = [list(r) for r in rows]
        cols = len(rows[0]) if rows else 0
        masks = []
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
            m = 0
            for j, bit in enumerate(r):
                if bit not in (0, 1):
                    raise ValueError("entries must be 0 or 1")
                m |= bit << j
            masks.append(m)
        return cls(len(rows), cols, masks)

    @classmethod
    def from_text(cls, text: str) -> "BitMatrix":
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        return cls.from_rows([[int(c) for c in ln] for ln in lines])

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, n, [1 << i for i in range(n)])

    def to_text(self) -> str:
        w = self.cols
        return "\n".join(
            "".join("1" if (m >> j) & 1 else "0" for j in range(w))
            for m in self.row_masks
        )

    def entry(self, i: int, j: int) -> int:
        return (self.row_masks[i] >> j) & 1

    def row_indices(self, i: int):
        """Column indices of the ones in row i (cached)."""
        if self._row_indices is None:
            self._row_indices = [None] * self.rows
        cached = self._row_indices[i]
        if cached is None:
            m = self.row_masks[i]
            out = []
            while m:
                low = m & -m
                out.append(low.bit_length() - 1)
                m ^= low
            cached = tuple(out)
            self._row_indices[i] = cached
        return cached

    def transpose(self) -> "BitMatrix":
        masks = [0] * self.cols
        for i, m in enumerate(self.row_masks):
            while m:
                low = m & -m
                masks[low.bit_length() - 1] |= 1 << i
                m ^= low
        return BitMatrix(self.cols, self.rows, masks)

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        masks = []
        orows = other.row_masks
        for m in self.row_masks:
            acc = 0
            while m:
                low = m & -m
                acc ^= orows[low.bit_length() - 1]
                m ^= low
            masks.append(acc)
        return BitMatrix(self.rows, other.cols, masks)

    def apply_bits(self, v: int) -> int:
        """GF(2) matrix times bit-vector (v is a bitmask over columns)."""
        out = 0
        for i, m in enumerate(self.row_masks):
            if (m & v).bit_count() & 1:
                out |= 1 << i
        return out

    def apply_field(self, vec):
        """XOR-accumulate field elements selected by each row."""
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        out = []
        for i in range(self.rows):
            acc = 0
            for j in self.row_indices(i):
                acc ^= vec[j]
            out.append(acc)
        return out

    def apply_field_packed(self, vec, width: int = 11):
        """Same result as apply_field, via bit planes.

        Much faster for wide matrices: one AND+popcount per (row, plane)
        instead of one XOR per matrix entry.
        """
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        planes = [0] * width
        for i, v in enumerate(vec):
            b = 0
            while v:
                if v & 1:
                    planes[b] |= 1 << i
                v >>= 1
                b += 1
        out = []
        for m in self.row_masks:
            acc = 0
            for b in range(width):
                if (m & planes[b]).bit_count() & 1:
                    acc |= 1 << b
            out.append(acc)
        return out

    def rank(self) -> int:
        work = list(self.row_masks)
        rank = 0
        for col in range(self.cols):
            pivot = None
            for r in range(rank, len(work)):
                if (work[r] >> col) & 1:
                    pivot = r
                    break
            if pivot is None:
                continue
            work[rank], work[pivot] = work[pivot], work[rank]
            for r in range(len(work)):
                if r != rank and (work[r] >> col) & 1:
                    work[r] ^= work[rank]
            rank += 1
            if rank == len(work):
                break
        return rank

    def inverse(self) -> "BitMatrix":
        if self.rows != self.cols:
            raise ValueError("only square matrices can be inverted")
        n = self.rows
        work = [self.row_masks[i] | (1 << (n + i)) for i in range(n)]
        rank = 0
        for col in range(n):
            pivot = None
            for r in range(rank, n):
                if (work[r] >> col) & 1:
                    pivot = r
                    break
            if pivot is None:
                raise ValueError("matrix is singular over GF(2)")
            work[rank], work[pivot] = work[pivot], work[rank]
            for r in range(n):
                if r != rank and (work[r] >> col) & 1:
                    work[r] ^= work[rank]
            rank += 1
        return BitMatrix(n, n, [w >> n for w in work])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.row_masks == other.row_masks
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.row_masks))

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"


def _vstack(*mats: BitMatrix) -> BitMatrix:
    cols = mats[0].cols
    masks = []
    for m in mats:
        if m.cols != cols:
            raise ValueError("column mismatch in vstack")
        masks.extend(m.row_masks)
    return BitMatrix(sum(m.rows for m in mats), cols, masks)


def _prepend_passthrough(m: BitMatrix) -> BitMatrix:
    """[[1, 0], [0, m]]: a 1x1 identity block above-left of m."""
    masks = [1] + [mask << 1 for mask in m.row_masks]
    return BitMatrix(m.rows + 1, m.cols + 1, masks)


@dataclass(frozen=True)
class BilinearAlgorithm:
    """z = q . (r y o p x); t = p.rows products of two linear forms."""

    p: BitMatrix
    r: BitMatrix
    q: BitMatrix

    def __post_init__(self):
        if not (self.p.rows == self.r.rows == self.q.cols):
            raise ValueError("p.rows, r.rows and q.cols must agree")

    @property
    def t(self) -> int:
        return self.p.rows

    def apply(self, field, x, y):
        px = self.p.apply_field(x)
        ry = self.r.apply_field(y)
        mul = field.mul
        prods = [mul(a, b) for a, b in zip(ry, px)]
        return self.q.apply_field(prods)


# Length-5 Toeplitz product: v_i = sum_j r[4-i+j] u[j], 14 products.
_T5_R_TEXT = """
111110000
011111000
001111100
000111110
000011111
010010000
001000000
000110000
000100000
000011000
000001000
000000100
000010010
000010000
"""

_T5_P_TEXT = """
10000
01000
00100
00010
00001
11000
10100
10010
01100
01001
00110
00101
00011
11011
"""

_T5_Q_TEXT = """
00001000010111
00010001001011
00100010101100
01000100110001
10000111000001
"""

# Coefficient maps: rows select, out of the 10 transformed y-components, the
# GF(2) sums forming the 9 Toeplitz coefficients of each 5x5 block product
# (block R0, then R1-R0, then R2-R0 of the 10x10 Toeplitz stage).
_COEFF_MAP_TEXTS = (
    """
1111101111
1111011111
1110111111
1101111111
1011111111
0111111111
1111111111
1111111110
1111111101
""",
    """
1000010000
0000100000
0001000001
0010000010
0100000100
1000001000
0000010000
0000100001
0001000010
""",
    """
0000010000
0000100001
0001000010
0010000100
0100001000
1000010000
0000100000
0001000001
0010000010
""",
)

# Input maps: select the length-5 vectors fed to the three block products
# (x'0 + x'1, then x'1, then x'0).
_INPUT_MAP_TEXTS = (
    """
1000010000
0100001000
0010000100
0001000010
0000100001
""",
    """
0000010000
0000001000
0000000100
0000000010
0000000001
""",
    """
1000000000
0100000000
0010000000
0001000000
0000100000
""",
)

# Output-side combination matrix: z0 sums every product component, z_i adds
# the DC product into component i.
_OUTPUT_MATRIX_TEXT = """
11111111111
11000000000
10100000000
10010000000
10001000000
10000100000
10000010000
10000001000
10000000100
10000000010
10000000001
"""


@cache
def forward_matrix() -> BitMatrix:
    """The 11x11 forward input transform over GF(2), built from its
    defining equations: row 0 sums all inputs; row i (1..10) is input i-1
    plus input 10. (Truncated renderings of this matrix omit row 10 and
    column 9; the fidelity tests check against that reduced form.)"""
    masks = [(1 << 11) - 1]
    for i in range(1, 11):
        masks.append((1 << (i - 1)) | (1 << 10))
    return BitMatrix(11, 11, masks)


@cache
def output_matrix() -> BitMatrix:
    return BitMatrix.from_text(_OUTPUT_MATRIX_TEXT)


@cache
def coefficient_maps() -> tuple:
    return tuple(BitMatrix.from_text(t) for t in _COEFF_MAP_TEXTS)


@cache
def input_maps() -> tuple:
    return tuple(BitMatrix.from_text(t) for t in _INPUT_MAP_TEXTS)


@cache
def t5_matrices() -> BilinearAlgorithm:
    """The 14-multiplication bilinear form of the length-5 Toeplitz product.

    Conventions: the coefficient vector r has 9 entries and matrix row i is
    (r[4-i], ..., r[8-i]); p is 14x5, r is 14x9, q is 5x14.
    """
    return BilinearAlgorithm(
        p=BitMatrix.from_text(_T5_P_TEXT),
        r=BitMatrix.from_text(_T5_R_TEXT),
        q=BitMatrix.from_text(_T5_Q_TEXT),
    )


@cache
def conv11_matrices() -> BilinearAlgorithm:
    """The 43-multiplication bilinear form of 11-point cyclic convolution.

    Assembled from the length-5 Toeplitz form: one passthrough product for
    the DC component plus three 14-product blocks for the 10x10 Toeplitz
    stage, all conjugated by the forward/output transforms.
    """
    t5 = t5_matrices()
    fwd = forward_matrix()
    pi_r = coefficient_maps()
    pi_p = input_maps()

    r_side = _prepend_passthrough(_vstack(*(t5.r @ m for m in pi_r))) @ fwd
    p_side = _prepend_passthrough(_vstack(*(t5.p @ m for m in pi_p))) @ fwd

    q_masks = [1]
    qm = t5.q.row_masks
    for i in range(5):
        q_masks.append((qm[i] << 1) | (qm[i] << 15))
    for i in range(5):
        q_masks.append((qm[i] << 1) | (qm[i] << 29))
    q_blocks = BitMatrix(11, 43, q_masks)
    q_side = output_matrix() @ q_blocks

    return BilinearAlgorithm(p=p_side, r=r_side, q=q_side)


def t5_apply(field, r, u):
    """Length-5 Toeplitz product with 14 field multiplications."""
    if len(r) != 9 or len(u) != 5:
        raise ValueError("expected 9 coefficients and 5 inputs")
    return t5_matrices().apply(field, u, r)


def t10_apply(field, r, u):
    """Length-10 Toeplitz product via three length-5 calls (42 products).

    Coefficients: row i of the 10x10 matrix is (r[9-i], ..., r[18-i]). The
    block identity subtracts submatrices; over characteristic 2 that
    subtraction is XOR.
    """
    if len(r) != 19 or len(u) != 10:
        raise ValueError("expected 19 coefficients and 10 inputs")
    a = r[5:14]
    b = r[10:19]
    c = r[0:9]
    x0, x1 = u[0:5], u[5:10]
    shared = t5_apply(field, a, [p ^ q for p, q in zip(x0, x1)])
    top = t5_apply(field, [p ^ q for p, q in zip(b, a)], x1)
    bot = t5_apply(field, [p ^ q for p, q in zip(c, a)], x0)
    return [p ^ q for p, q in zip(shared, top)] + [
        p ^ q for p, q in zip(shared, bot)
    ]


def conv11_apply(field, x, y):
    """11-point cyclic convolution z_i = sum_j x_j y_{(i-j) mod 11}."""
    if len(x) != 11 or len(y) != 11:
        raise ValueError("expected two length-11 vectors")
    return conv11_matrices().apply(field, x, y)


# ---------------------------------------------------------------------------
# Exact-integer model of the real-field derivation.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AftIntegerModel:
    """Integer matrices of the length-11 forward/inverse transform pair.

    b is the 11x11 forward matrix; b_inv_scaled is 11 times its inverse
    (integer-valued); a3 is the 10x10 core of the inverse, with 10 on the
    first upper diagonal and -1 everywhere else.
    """

    b: tuple
    b_inv_scaled: tuple
    a3: tuple


@cache
def aft_integer_model() -> AftIntegerModel:
    b = [[1] * 11]
    for i in range(1, 11):
        b.append([1 if j == i - 1 else (-1 if j == 10 else 0) for j in range(11)])
    a1 = [10] + [-1] * 9
    a3 = [[10 if j == i + 1 else -1 for j in range(10)] for i in range(10)]
    b_inv_scaled = [[1] + a1] + [[1] + a3[i] for i in range(10)]
    return AftIntegerModel(
        b=tuple(tuple(r) for r in b),
        b_inv_scaled=tuple(tuple(r) for r in b_inv_scaled),
        a3=tuple(tuple(r) for r in a3),
    )


def aft_forward_int(x):
    """Forward transform of 11 integers: (sum of x, x_i - x_10 for i<10)."""
    if len(x) != 11:
        raise ValueError("expected 11 integers")
    return sum(x), [x[i] - x[10] for i in range(10)]


def aft_inverse_int(u0, up):
    """Inverse transform scaled by 11, using only the a3 core product.

    Returns the 11-vector 11*(v0, v'), where v0 = (u0 - sum(a3 u'))/11 and
    v'_j = (u0 + (a3 u')_j)/11.
    """
    if len(up) != 10:
        raise ValueError("expected 10 integers")
    a3 = aft_integer_model().a3
    core = [sum(a3[i][j] * up[j] for j in range(10)) for i in range(10)]
    return [u0 - sum(core)] + [u0 + c for c in core]


def _pointwise_matrix(yp):
    """M with M[k][j] = y'_{k-j} + y'_{k-j+11} - y'_{10-j}, zero off-range."""

    def y(i):
        return yp[i] if 0 <= i <= 9 else 0

    return [[y(k - j) + y(k - j + 11) - y(10 - j) for j in range(10)] for k in range(10)]


def _toeplitz_core_scaled(yp):
    """11 times the Toeplitz core: entries 11 y'_{i-j+1} + 11 y'_{i-j+12} - sum(y')."""

    def y(i):
        return yp[i] if 0 <= i <= 9 else 0

    s = sum(yp)
    return [
        [11 * y(i - j + 1) + 11 * y(i - j + 12) - s for j in range(10)]
        for i in range(10)
    ]


def verify_toeplitz_reduction(yp) -> bool:
    """Check that a3 . M equals the scaled Toeplitz core and is Toeplitz.

    This is the integer identity that collapses the inverse-transform stage
    and the pointwise stage into a single Toeplitz product.
    """
    if len(yp) != 10:
        raise ValueError("expected 10 integers")
    a3 = aft_integer_model().a3
    m = _pointwise_matrix(yp)
    lhs = [
        [sum(a3[i][k] * m[k][j] for k in range(10)) for j in range(10)]
        for i in range(10)
    ]
    if lhs != _toeplitz_core_scaled(yp):
        return False
    return all(
        lhs[i][j] == lhs[i + 1][j + 1] for i in range(9) for j in range(9)
    )


def conv11_int(x, y):
    """Exact integer 11-point cyclic convolution through the transform pipeline.

    Runs forward transforms, the pointwise/Toeplitz stage scaled by 11, and
    the inverse evaluation, then divides out the factor of 11. Divisibility
    is asserted; a failure would mean the derivation itself is wrong.
    """
    if len(x) != 11 or len(y) != 11:
        raise ValueError("expected two length-11 vectors")
    x0, xp = aft_forward_int(x)
    y0, yp = aft_forward_int(y)
    z0 = x0 * y0
    core = _toeplitz_core_scaled(yp)
    w = [sum(core[i][j] * xp[j] for j in range(10)) for i in range(10)]
    scaled = [z0 - sum(w)] + [z0 + wi for wi in w]
    for v in scaled:
        if v % 11:
            raise ArithmeticError("pipeline result not divisible by 11")
    return [v // 11 for v in scaled]
