"""Transform plans over GF(2^11) for lengths dividing 2047.

A plan freezes everything the evaluation pipeline needs: the cyclotomic
coset table, the input permutation, the per-coset constant vectors (the
coefficient side of the 11-point convolution applied to a normal basis),
and the n x n output recombination bit matrix. Evaluation then runs

    permute -> per-coset linear stage -> pointwise constants ->
    per-coset output stage -> recombination matrix

and is bit-exact against the naive DFT. Plans are immutable once built and
safe for concurrent evaluation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import bilinear
from .bilinear import BitMatrix
from .gf import Field

SUPPORTED_LENGTHS = (1, 23, 89, 2047)


@dataclass(frozen=True)
class CosetTable:
    """Cyclotomic cosets of 2 modulo n, sorted by minimal representative."""

    n: int
    cosets: tuple

    def census(self) -> dict:
        out: dict = {}
        for c in self.cosets:
            out[len(c)] = out.get(len(c), 0) + 1
        return out

    @property
    def representatives(self):
        return tuple(c[0] for c in self.cosets)


def cosets(n: int) -> CosetTable:
    """Cyclotomic cosets {k, 2k, 4k, ...} mod n for every k in 0..n-1."""
    if n < 1 or 2047 % n:
        raise ValueError(f"transform length {n} does not divide 2047")
    seen = [False] * n
    out = []
    for k in range(n):
        if seen[k]:
            continue
        orbit = []
        j = k
        while not seen[j]:
            seen[j] = True
            orbit.append(j)
            j = (j * 2) % n
        out.append(tuple(orbit))
    return CosetTable(n=n, cosets=tuple(out))


@dataclass(frozen=True)
class NormalBasis:
    """A basis {g, g^2, g^4, ..., g^(2^10)} of GF(2^11) over GF(2).

    to_poly maps normal-basis coordinate masks to polynomial-basis elements;
    from_poly is its inverse.
    """

    gamma: int
    exponent: int
    conjugates: tuple
    to_poly: BitMatrix
    from_poly: BitMatrix


def find_normal_basis(field: Field) -> NormalBasis:
    """Deterministic choice: gamma = alpha^t for the smallest t >= 1 whose
    conjugates are linearly independent over GF(2)."""
    for t in range(1, field.n):
        gamma = field.pow(field.alpha, t)
        conj = [gamma]
        for _ in range(10):
            conj.append(field.mul(conj[-1], conj[-1]))
        # column s of the change-of-basis matrix holds conjugate s
        rows = [0] * 11
        for s, c in enumerate(conj):
            for r in range(11):
                if (c >> r) & 1:
                    rows[r] |= 1 << s
        to_poly = BitMatrix(11, 11, rows)
        if to_poly.rank() == 11:
            return NormalBasis(
                gamma=gamma,
                exponent=t,
                conjugates=tuple(conj),
                to_poly=to_poly,
                from_poly=to_poly.inverse(),
            )
    raise RuntimeError("no normal basis found")  # unreachable for GF(2^11)


def decompose(e: int, basis: NormalBasis) -> int:
    """Coordinates of e in the normal basis, as an 11-bit mask (bit s is the
    coefficient of the s-th conjugate)."""
    return basis.from_poly.apply_bits(e)


class CfftPlan:
    """Frozen description of one transform of length n."""

    def __init__(
        self,
        field: Field,
        n: int,
        coset_table: CosetTable,
        gamma_exponent: int,
        permutation,
        constants,
        a_matrix: BitMatrix,
        mult_count: int,
        add_count: int,
    ):
        self.field = field
        self.n = n
        self.coset_table = coset_table
        self.gamma_exponent = gamma_exponent
        self.permutation = tuple(permutation)
        self.constants = tuple(constants)
        self.a_matrix = a_matrix
        self.mult_count = mult_count
        self.add_count = add_count
        self._eval_cache = None

    @property
    def big_cosets(self):
        return tuple(c for c in self.coset_table.cosets if len(c) == 11)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CfftPlan)
            and self.field.genpoly == other.field.genpoly
            and self.n == other.n
            and self.coset_table == other.coset_table
            and self.gamma_exponent == other.gamma_exponent
            and self.permutation == other.permutation
            and self.constants == other.constants
            and self.a_matrix == other.a_matrix
            and self.mult_count == other.mult_count
            and self.add_count == other.add_count
        )

    def __repr__(self) -> str:
        return (
            f"CfftPlan(n={self.n}, mult_count={self.mult_count}, "
            f"add_count={self.add_count})"
        )


def _stage_add_count(matrix: BitMatrix) -> int:
    """Direct-implementation additions: ones per row minus one, summed."""
    return sum(max(0, m.bit_count() - 1) for m in matrix.row_masks)


def build_plan(field: Field, n: int) -> CfftPlan:
    """Construct the evaluation plan for length n (n must divide 2047).

    Within each size-11 coset the input ordering is reversed past the
    representative, which turns the conjugate-matrix product into a genuine
    cyclic convolution consumable by the 43-multiplication algorithm. The
    constant side is the coefficient transform of the conjugate vector and
    is identical for every size-11 coset because one shared normal basis
    serves them all.
    """
    table = cosets(n)
    basis = find_normal_basis(field)
    alg = bilinear.conv11_matrices()

    big = [c for c in table.cosets if len(c) == 11]
    consts43 = alg.r.apply_field(list(basis.conjugates))

    permutation = [0]
    for c in big:
        permutation.extend(c[(11 - p) % 11] for p in range(11))

    constants = [1]
    for _ in big:
        constants.extend(consts43)

    root = field.pow(field.alpha, field.n // n)
    powers = [1] * n
    for j in range(1, n):
        powers[j] = field.mul(powers[j - 1], root)

    row_masks = []
    for j in range(n):
        mask = 1  # constant column: the size-1 coset contributes f_0 to every output
        for bi, c in enumerate(big):
            bits = decompose(powers[(j * c[0]) % n], basis)
            mask |= bits << (1 + 11 * bi)
        row_masks.append(mask)
    a_matrix = BitMatrix(n, n, row_masks)

    mult_count = sum(1 for v in constants if v not in (0, 1))
    add_count = len(big) * (
        _stage_add_count(alg.p) + _stage_add_count(alg.q)
    ) + _stage_add_count(a_matrix)

    return CfftPlan(
        field=field,
        n=n,
        coset_table=table,
        gamma_exponent=basis.exponent,
        permutation=permutation,
        constants=constants,
        a_matrix=a_matrix,
        mult_count=mult_count,
        add_count=add_count,
    )


def _eval_cache(plan: CfftPlan):
    if plan._eval_cache is None:
        alg = bilinear.conv11_matrices()
        nbig = len(plan.big_cosets)
        consts = np.array(plan.constants[1:], dtype=np.int16).reshape(nbig, 43) \
            if nbig else np.zeros((0, 43), dtype=np.int16)
        p_sel = [np.array(alg.p.row_indices(i), dtype=np.intp) for i in range(43)]
        q_sel = [np.array(alg.q.row_indices(i), dtype=np.intp) for i in range(11)]
        perm = np.array(plan.permutation, dtype=np.intp)
        plan._eval_cache = (nbig, consts, p_sel, q_sel, perm)
    return plan._eval_cache


def evaluate(plan: CfftPlan, f):
    """Run the plan; bit-exact equal to the naive DFT of f."""
    if len(f) != plan.n:
        raise ValueError(f"expected {plan.n} elements, got {len(f)}")
    field = plan.field
    nbig, consts, p_sel, q_sel, perm = _eval_cache(plan)

    vec = list(f)
    if any(not 0 <= v <= field.n for v in vec):
        raise ValueError("element out of range 0..2047")
    fp = np.asarray(vec, dtype=np.int16)[perm]

    lam = [int(fp[0])]
    if nbig:
        blocks = fp[1:].reshape(nbig, 11)
        linear = np.empty((nbig, 43), dtype=np.int16)
        for t, sel in enumerate(p_sel):
            col = blocks[:, sel[0]].copy()
            for j in sel[1:]:
                col ^= blocks[:, j]
            linear[:, t] = col
        prods = field.mul_vec(consts, linear)
        out_blocks = np.empty((nbig, 11), dtype=np.int16)
        for s, sel in enumerate(q_sel):
            col = prods[:, sel[0]].copy()
            for j in sel[1:]:
                col ^= prods[:, j]
            out_blocks[:, s] = col
        lam.extend(int(v) for v in out_blocks.reshape(-1))

    return plan.a_matrix.apply_field_packed(lam, width=11)


def complexity(plan: CfftPlan):
    """(multiplications, additions) under the direct convention.

    Multiplications count the constants outside {0, 1}; additions sum, over
    every stage matrix, the per-row population count minus one.
    """
    return plan.mult_count, plan.add_count


def combined_add_count(plan: CfftPlan) -> int:
    """Additions when the recombination matrix and the per-coset output
    stages are folded into one wide matrix (the per-stage count is the
    default convention; this is the alternative reading)."""
    alg = bilinear.conv11_matrices()
    qrows = alg.q.row_masks
    nbig = len(plan.big_cosets)
    total = len(plan.big_cosets) * _stage_add_count(alg.p)
    for mask in plan.a_matrix.row_masks:
        combined = mask & 1
        for bi in range(nbig):
            bits = (mask >> (1 + 11 * bi)) & 0x7FF
            while bits:
                low = bits & -bits
                combined ^= qrows[low.bit_length() - 1] << (1 + 43 * bi)
                bits ^= low
        total += max(0, combined.bit_count() - 1)
    return total


# ---------------------------------------------------------------------------
# Serialization: self-describing JSON, bit-exact round trip.
# ---------------------------------------------------------------------------


def plan_to_json(plan: CfftPlan) -> str:
    doc = {
        "format": "cfft2047-plan",
        "field": {"m": plan.field.m, "genpoly": plan.field.genpoly, "n": plan.field.n},
        "n": plan.n,
        "cosets": [list(c) for c in plan.coset_table.cosets],
        "gamma_exponent": plan.gamma_exponent,
        "permutation": list(plan.permutation),
        "constants": list(plan.constants),
        "a_matrix": plan.a_matrix.to_text().splitlines(),
        "mult_count": plan.mult_count,
        "add_count": plan.add_count,
    }
    return json.dumps(doc, indent=None, separators=(",", ":"), sort_keys=True)


def plan_from_json(text: str) -> CfftPlan:
    doc = json.loads(text)
    if doc.get("format") != "cfft2047-plan":
        raise ValueError("not a plan document")
    field = Field(doc["field"]["genpoly"])
    n = doc["n"]
    table = CosetTable(n=n, cosets=tuple(tuple(c) for c in doc["cosets"]))
    permutation = tuple(doc["permutation"])
    constants = tuple(doc["constants"])
    if sorted(permutation) != list(range(n)):
        raise ValueError("permutation is not a bijection")
    if any(v < 0 or v > field.n for v in constants):
        raise ValueError("constant out of range")
    rows = doc["a_matrix"]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ValueError("recombination matrix has wrong shape")
    a_matrix = BitMatrix.from_text("\n".join(rows))
    return CfftPlan(
        field=field,
        n=n,
        coset_table=table,
        gamma_exponent=doc["gamma_exponent"],
        permutation=permutation,
        constants=constants,
        a_matrix=a_matrix,
        mult_count=doc["mult_count"],
        add_count=doc["add_count"],
    )
