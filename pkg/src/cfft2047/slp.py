"""Straight-line programs of xor and constant-multiply operations.

A program is a branch-free instruction list over GF(2^11). Value ids number
the inputs 0..n_inputs-1 and then one id per instruction; operands always
reference earlier ids. Constants 0 and 1 never appear in cmul instructions:
the compiler folds them away, so the cmul count is literally the
multiplicative complexity of the compiled map.

Text format (one instruction per line, after a `slp <inputs> <outputs>`
header that makes the file self-describing):

    t12 = xor t3 t7
    t13 = cmul 0x1a9 t12
    out0 = t13

Two evaluators are provided: `run` interprets one input vector at a time;
`run_batch` packs many vectors into big-int bit planes and evaluates them
simultaneously, which is what makes equivalence checks on multi-million
instruction programs affordable. Both produce identical results.
"""

from __future__ import annotations

import heapq
from array import array

import numpy as np

from . import bilinear, cfft

XOR = 0
CMUL = 1


class Slp:
    """Immutable straight-line program.

    kinds[i] is XOR or CMUL; for xor, (op_a[i], op_b[i]) are operand ids;
    for cmul, op_a[i] is the operand id and op_b[i] the constant.
    """

    __slots__ = ("n_inputs", "kinds", "op_a", "op_b", "outputs")

    def __init__(self, n_inputs, kinds, op_a, op_b, outputs):
        self.n_inputs = n_inputs
        self.kinds = bytes(kinds)
        self.op_a = array("l", op_a)
        self.op_b = array("l", op_b)
        self.outputs = tuple(outputs)

    @property
    def n_instructions(self) -> int:
        return len(self.kinds)

    @property
    def n_outputs(self) -> int:
        return len(self.outputs)

    @property
    def xor_count(self) -> int:
        return self.kinds.count(XOR)

    @property
    def cmul_count(self) -> int:
        return self.kinds.count(CMUL)

    def validate(self):
        """Check topological order, operand ranges and cmul constants."""
        n = self.n_inputs
        for i, k in enumerate(self.kinds):
            limit = n + i
            if not 0 <= self.op_a[i] < limit:
                raise ValueError(f"instruction {i} references a later id")
            if k == XOR:
                if not 0 <= self.op_b[i] < limit:
                    raise ValueError(f"instruction {i} references a later id")
            elif k == CMUL:
                if not 2 <= self.op_b[i] <= 2047:
                    raise ValueError(f"instruction {i} has a trivial constant")
            else:
                raise ValueError(f"instruction {i} has unknown kind {k}")
        total = n + len(self.kinds)
        for o in self.outputs:
            if not 0 <= o < total:
                raise ValueError("output references an unknown id")
        return self

    def run(self, field, inputs):
        """Evaluate one input vector."""
        if len(inputs) != self.n_inputs:
            raise ValueError(f"expected {self.n_inputs} inputs, got {len(inputs)}")
        values = list(inputs) + [0] * len(self.kinds)
        mul = field.mul
        kinds, op_a, op_b = self.kinds, self.op_a, self.op_b
        base = self.n_inputs
        for i in range(len(kinds)):
            if kinds[i] == XOR:
                values[base + i] = values[op_a[i]] ^ values[op_b[i]]
            else:
                values[base + i] = mul(op_b[i], values[op_a[i]])
        return [values[o] for o in self.outputs]

    def run_batch(self, field, batch):
        """Evaluate many input vectors at once via bit-plane packing."""
        if not batch:
            return []
        nb = len(batch)
        arr = np.array(batch, dtype=np.int64)
        if arr.shape != (nb, self.n_inputs):
            raise ValueError("batch rows must all have the input arity")
        width = field.m
        mask_all = (1 << nb) - 1

        kinds, op_a, op_b = self.kinds, self.op_a, self.op_b
        n_ids = self.n_inputs + len(kinds)
        last_use = [-1] * n_ids
        for i in range(len(kinds)):
            last_use[op_a[i]] = i
            if kinds[i] == XOR:
                last_use[op_b[i]] = i
        for o in self.outputs:
            last_use[o] = len(kinds)  # never freed

        values: list = [None] * n_ids
        for i in range(self.n_inputs):
            col = arr[:, i]
            packed = 0
            for b in range(width):
                bits = ((col >> b) & 1).astype(np.uint8)
                plane = int.from_bytes(
                    np.packbits(bits, bitorder="little").tobytes(), "little"
                )
                packed |= plane << (b * nb)
            values[i] = packed

        cmul_rows: dict = {}
        base = self.n_inputs
        for i in range(len(kinds)):
            a = op_a[i]
            if kinds[i] == XOR:
                b = op_b[i]
                v = values[a] ^ values[b]
                if last_use[b] == i:
                    values[b] = None
            else:
                c = op_b[i]
                rows = cmul_rows.get(c)
                if rows is None:
                    # rows[b] selects the planes whose xor is output plane b
                    rows = [0] * width
                    for p in range(width):
                        prod = field.mul(c, 1 << p)
                        for b in range(width):
                            if (prod >> b) & 1:
                                rows[b] |= 1 << p
                    cmul_rows[c] = rows
                src = values[a]
                planes = [(src >> (p * nb)) & mask_all for p in range(width)]
                v = 0
                for b in range(width):
                    acc = 0
                    rm = rows[b]
                    while rm:
                        low = rm & -rm
                        acc ^= planes[low.bit_length() - 1]
                        rm ^= low
                    v |= acc << (b * nb)
            values[base + i] = v
            if last_use[a] == i:
                values[a] = None

        n_bytes = (nb + 7) // 8
        results = np.zeros((nb, len(self.outputs)), dtype=np.int16)
        for oi, o in enumerate(self.outputs):
            v = values[o]
            for b in range(width):
                plane = (v >> (b * nb)) & mask_all
                bits = np.unpackbits(
                    np.frombuffer(plane.to_bytes(n_bytes, "little"), dtype=np.uint8),
                    bitorder="little",
                )[:nb]
                results[:, oi] |= bits.astype(np.int16) << b
        return [[int(x) for x in row] for row in results]

    def to_text(self) -> str:
        lines = [f"slp {self.n_inputs} {len(self.outputs)}"]
        base = self.n_inputs
        for i in range(len(self.kinds)):
            if self.kinds[i] == XOR:
                lines.append(f"t{base + i} = xor t{self.op_a[i]} t{self.op_b[i]}")
            else:
                lines.append(f"t{base + i} = cmul 0x{self.op_b[i]:03x} t{self.op_a[i]}")
        for k, o in enumerate(self.outputs):
            lines.append(f"out{k} = t{o}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Slp":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("slp "):
            raise ValueError("missing slp header line")
        _, n_in, n_out = lines[0].split()
        n_in, n_out = int(n_in), int(n_out)
        kinds, op_a, op_b = bytearray(), array("l"), array("l")
        outputs = [None] * n_out
        next_id = n_in
        for ln in lines[1:]:
            lhs, rhs = [part.strip() for part in ln.split("=", 1)]
            fields = rhs.split()
            if lhs.startswith("out"):
                outputs[int(lhs[3:])] = int(fields[0][1:])
                continue
            if int(lhs[1:]) != next_id:
                raise ValueError(f"non-sequential instruction id {lhs}")
            if fields[0] == "xor":
                kinds.append(XOR)
                op_a.append(int(fields[1][1:]))
                op_b.append(int(fields[2][1:]))
            elif fields[0] == "cmul":
                kinds.append(CMUL)
                op_a.append(int(fields[2][1:]))
                op_b.append(int(fields[1], 16))
            else:
                raise ValueError(f"unknown instruction {fields[0]!r}")
            next_id += 1
        if any(o is None for o in outputs):
            raise ValueError("missing output binding")
        return cls(n_in, kinds, op_a, op_b, outputs).validate()

    def __repr__(self) -> str:
        return (
            f"Slp(inputs={self.n_inputs}, outputs={len(self.outputs)}, "
            f"xor={self.xor_count}, cmul={self.cmul_count})"
        )


class _Builder:
    """Accumulates instructions; folds trivial constants at emit time."""

    def __init__(self, n_inputs: int):
        self.n_inputs = n_inputs
        self.kinds = bytearray()
        self.op_a = array("l")
        self.op_b = array("l")

    def _emit(self, kind, a, b) -> int:
        new_id = self.n_inputs + len(self.kinds)
        self.kinds.append(kind)
        self.op_a.append(a)
        self.op_b.append(b)
        return new_id

    def xor_fold(self, ids):
        """Left-fold xor over ids; None terms vanish; empty sum is None."""
        acc = None
        for i in ids:
            if i is None:
                continue
            acc = i if acc is None else self._emit(XOR, acc, i)
        return acc

    def cmul(self, const, src):
        if src is None or const == 0:
            return None
        if const == 1:
            return src
        return self._emit(CMUL, src, const)

    def finish(self, outputs) -> Slp:
        if any(o is None for o in outputs):
            raise ValueError("an output reduced to the empty sum")
        return Slp(self.n_inputs, self.kinds, self.op_a, self.op_b, outputs)


def compile_plan(plan: cfft.CfftPlan) -> Slp:
    """Compile a transform plan into a program.

    The xor count equals the plan's addition count and the cmul count its
    multiplication count (constants 0 and 1 are folded, matching how the
    plan counts them).
    """
    alg = bilinear.conv11_matrices()
    b = _Builder(plan.n)
    p_rows = [alg.p.row_indices(t) for t in range(43)]
    q_rows = [alg.q.row_indices(s) for s in range(11)]

    lam = [plan.permutation[0]]
    for bi in range(len(plan.big_cosets)):
        block = [plan.permutation[1 + 11 * bi + p] for p in range(11)]
        consts = plan.constants[1 + 43 * bi : 1 + 43 * (bi + 1)]
        linear = [b.xor_fold(block[j] for j in row) for row in p_rows]
        prods = [b.cmul(c, w) for c, w in zip(consts, linear)]
        lam.extend(b.xor_fold(prods[t] for t in row) for row in q_rows)

    outputs = [
        b.xor_fold(lam[j] for j in plan.a_matrix.row_indices(i))
        for i in range(plan.n)
    ]
    return b.finish(outputs)


def compile_bilinear(field, alg: bilinear.BilinearAlgorithm, y) -> Slp:
    """Fix the coefficient side of a bilinear algorithm and compile the
    resulting linear map of the data side."""
    consts = alg.r.apply_field(list(y))
    b = _Builder(alg.p.cols)
    linear = [b.xor_fold(alg.p.row_indices(t)) for t in range(alg.t)]
    prods = [b.cmul(c, w) for c, w in zip(consts, linear)]
    outputs = [
        b.xor_fold(prods[t] for t in alg.q.row_indices(i))
        for i in range(alg.q.rows)
    ]
    return b.finish(outputs)


# ---------------------------------------------------------------------------
# Common subexpression elimination.
# ---------------------------------------------------------------------------


def _dedup_xors(slp: Slp) -> Slp:
    """Value numbering over xor instructions only.

    Cmul instructions are remapped but never merged, so the cmul count is
    untouched. A single in-order pass reaches the fixpoint because operand
    remapping only ever points at earlier results.
    """
    n_in = slp.n_inputs
    remap = list(range(n_in))
    seen: dict = {}
    kinds, op_a, op_b = bytearray(), array("l"), array("l")
    next_id = n_in
    for i in range(len(slp.kinds)):
        a = remap[slp.op_a[i]]
        if slp.kinds[i] == XOR:
            b = remap[slp.op_b[i]]
            if a > b:
                a, b = b, a
            key = (a << 32) | b
            hit = seen.get(key)
            if hit is not None:
                remap.append(hit)
                continue
            kinds.append(XOR)
            op_a.append(a)
            op_b.append(b)
            seen[key] = next_id
        else:
            kinds.append(CMUL)
            op_a.append(a)
            op_b.append(slp.op_b[i])
        remap.append(next_id)
        next_id += 1
    return Slp(n_in, kinds, op_a, op_b, [remap[o] for o in slp.outputs])


def _flatten_expressions(slp: Slp, budget: int):
    """Flatten every top-level xor tree into a parity set of atoms.

    Atoms are inputs and cmul results. Returns (exprs, consumers) or None
    if the expansion work exceeds the budget. consumers[k] is a list of
    ('cmul', instr_index) / ('out', output_index) tags fed by exprs[k].
    """
    n_in = slp.n_inputs
    kinds, op_a, op_b = slp.kinds, slp.op_a, slp.op_b

    def is_xor_id(v):
        return v >= n_in and kinds[v - n_in] == XOR

    exprs: list = []
    consumers: list = []
    expr_of_root: dict = {}
    work = 0

    def expr_index(root):
        nonlocal work
        idx = expr_of_root.get(root)
        if idx is not None:
            return idx
        atoms: set = set()
        stack = [root]
        while stack:
            v = stack.pop()
            work += 1
            if work > budget:
                return None
            if is_xor_id(v):
                stack.append(op_a[v - n_in])
                stack.append(op_b[v - n_in])
            elif v in atoms:  # parity: an atom seen twice cancels
                atoms.discard(v)
            else:
                atoms.add(v)
        idx = len(exprs)
        exprs.append(atoms)
        consumers.append([])
        expr_of_root[root] = idx
        return idx

    for i in range(len(kinds)):
        if kinds[i] == CMUL and is_xor_id(op_a[i]):
            idx = expr_index(op_a[i])
            if idx is None:
                return None
            consumers[idx].append(("cmul", i))
    for k, o in enumerate(slp.outputs):
        if is_xor_id(o):
            idx = expr_index(o)
            if idx is None:
                return None
            consumers[idx].append(("out", k))
    return exprs, consumers


def _greedy_pairs(exprs, first_ext_id, budget):
    """Repeatedly extract the most frequent atom pair across all expressions.

    Ties break toward the lexicographically smallest pair. Mutates exprs in
    place; returns the extraction list [(new_id, a, b), ...] or None if the
    initial pair enumeration exceeds the budget.
    """
    pair_freq: dict = {}
    col: dict = {}
    heap: list = []
    work = 0
    for idx, s in enumerate(exprs):
        members = sorted(s)
        for a in members:
            col[a] = col.get(a, 0) | (1 << idx)
        work += len(members) * (len(members) - 1) // 2
        if work > budget:
            return None
        for i, a in enumerate(members):
            for b in members[i + 1 :]:
                pair_freq[(a, b)] = pair_freq.get((a, b), 0) + 1
    for (a, b), f in pair_freq.items():
        if f >= 2:
            heapq.heappush(heap, (-f, a, b))

    touched = set()

    def bump(a, b, delta):
        if a > b:
            a, b = b, a
        f = pair_freq.get((a, b), 0) + delta
        if f:
            pair_freq[(a, b)] = f
        else:
            pair_freq.pop((a, b), None)
        if delta > 0:
            touched.add((a, b))

    # Invariant: every pair holds a heap entry at or above its current count
    # (increments are flushed once per extraction at their final value, and
    # decrements leave the older, higher entries in place). The first
    # non-stale pop is therefore the global maximum; stale entries are
    # re-synced at pop time rather than pushed on every decrement.
    extractions = []
    next_id = first_ext_id
    while heap:
        negf, a, b = heapq.heappop(heap)
        cur = pair_freq.get((a, b), 0)
        if cur != -negf:
            if cur >= 2:
                heapq.heappush(heap, (-cur, a, b))
            continue
        if cur < 2:
            break
        w = next_id
        next_id += 1
        extractions.append((w, a, b))
        hit = col[a] & col[b]
        pair_freq.pop((a, b), None)
        col_w = col.get(w, 0)
        m = hit
        while m:
            low = m & -m
            idx = low.bit_length() - 1
            m ^= low
            s = exprs[idx]
            s.discard(a)
            s.discard(b)
            for t in s:
                bump(a, t, -1)
                bump(b, t, -1)
                bump(w, t, +1)
            s.add(w)
            col_w |= low
        col[a] &= ~hit
        col[b] &= ~hit
        col[w] = col_w
        for p in touched:
            f = pair_freq.get(p, 0)
            if f >= 2:
                heapq.heappush(heap, (-f, p[0], p[1]))
        touched.clear()
    return extractions


def _emit_optimized(slp: Slp, exprs, consumers, extractions) -> Slp:
    """Rebuild a program from rewritten expressions and extractions."""
    n_in = slp.n_inputs
    kinds, op_a, op_b = slp.kinds, slp.op_a, slp.op_b

    ext_of = {w: (a, b) for w, a, b in extractions}
    expr_for_cmul = {}
    expr_for_out = {}
    for idx, tags in enumerate(consumers):
        for tag, k in tags:
            if tag == "cmul":
                expr_for_cmul[k] = idx
            else:
                expr_for_out[k] = idx

    builder = _Builder(n_in)
    emitted: dict = {}

    def deps_of(node):
        if isinstance(node, tuple):  # ('expr', idx)
            return sorted(exprs[node[1]])
        if node < n_in:
            return []
        if node in ext_of:
            return list(ext_of[node])
        i = node - n_in  # a cmul instruction
        src = op_a[i]
        if src >= n_in and kinds[src - n_in] == XOR:
            return [("expr", expr_for_cmul[i])]
        return [src]

    def emit(node):
        stack = [node]
        while stack:
            nd = stack[-1]
            if nd in emitted:
                stack.pop()
                continue
            pending = [d for d in deps_of(nd) if d not in emitted]
            if pending:
                stack.extend(pending)
                continue
            if isinstance(nd, tuple):
                ids = [emitted[t] for t in sorted(exprs[nd[1]])]
                if not ids:
                    raise ValueError("expression vanished; cannot emit zero")
                new_id = builder.xor_fold(ids)
            elif nd < n_in:
                new_id = nd
            elif nd in ext_of:
                a, b = ext_of[nd]
                new_id = builder._emit(XOR, emitted[a], emitted[b])
            else:
                i = nd - n_in
                src = op_a[i]
                if src >= n_in and kinds[src - n_in] == XOR:
                    operand = emitted[("expr", expr_for_cmul[i])]
                else:
                    operand = emitted[src]
                # emit directly rather than via cmul(): re-emission must never
                # fold an instruction away, or the cmul count would change
                new_id = builder._emit(CMUL, operand, op_b[i])
            emitted[nd] = new_id
            stack.pop()
        return emitted[node]

    outputs = []
    for k, o in enumerate(slp.outputs):
        if k in expr_for_out:
            outputs.append(emit(("expr", expr_for_out[k])))
        else:
            outputs.append(emit(o))
    # dead cmul instructions are still emitted so the cmul count is invariant
    for i in range(len(kinds)):
        if kinds[i] == CMUL and (n_in + i) not in emitted:
            emit(n_in + i)
    return builder.finish(outputs)


def greedy_cse(slp: Slp, budget: int = 5_000_000) -> Slp:
    """Reduce the xor count while preserving semantics and the cmul count.

    Two passes: value numbering over the binary xor stream, then (when the
    flattened pair enumeration fits the work budget) greedy extraction of
    the most frequent operand pair across all flattened xor expressions,
    run to its fixpoint. The budget keeps the quadratic pair enumeration
    away from the n = 2047 program, where the first pass alone already
    shrinks the program; on the lengths where it runs, the greedy pass is
    deterministic and idempotent.
    """
    deduped = _dedup_xors(slp)
    flat = _flatten_expressions(deduped, budget)
    if flat is None:
        return deduped
    exprs, consumers = flat
    if any(not s for s in exprs):
        return deduped  # a top-level sum cancels to zero; keep the safe form
    n_ids = deduped.n_inputs + deduped.n_instructions
    extractions = _greedy_pairs(exprs, n_ids, budget)
    if extractions is None:
        return deduped
    optimized = _emit_optimized(deduped, exprs, consumers, extractions)
    if optimized.xor_count < deduped.xor_count:
        return optimized
    return deduped
