import json
import random

import pytest

from cfft2047 import (
    BitMatrix,
    build_plan,
    combined_add_count,
    complexity,
    cosets,
    decompose,
    evaluate,
    find_normal_basis,
    plan_from_json,
    plan_to_json,
)
from cfft2047 import bilinear, oracle

from conftest import random_vector, unit_vector


def test_cosets_23():
    table = cosets(23)
    assert table.cosets == (
        (0,),
        (1, 2, 4, 8, 16, 9, 18, 13, 3, 6, 12),
        (5, 10, 20, 17, 11, 22, 21, 19, 15, 7, 14),
    )
    assert table.representatives == (0, 1, 5)


def test_cosets_census():
    assert cosets(1).cosets == ((0,),)
    assert cosets(89).census() == {1: 1, 11: 8}
    table = cosets(2047)
    assert table.census() == {1: 1, 11: 186}
    assert len(table.cosets) == 187
    flat = sorted(m for c in table.cosets for m in c)
    assert flat == list(range(2047))


@pytest.mark.parametrize("n", [0, 7, 46, 2048, -1])
def test_cosets_rejects_bad_lengths(n):
    with pytest.raises(ValueError):
        cosets(n)


def test_normal_basis(field):
    basis = find_normal_basis(field)
    assert basis.gamma == field.pow(field.alpha, basis.exponent)
    assert basis.exponent == 9  # smallest exponent with independent conjugates
    for t in range(1, basis.exponent):
        g = field.pow(field.alpha, t)
        conj = [g]
        for _ in range(10):
            conj.append(field.mul(conj[-1], conj[-1]))
        assert BitMatrix(11, 11, conj).rank() < 11
    assert BitMatrix(11, 11, list(basis.conjugates)).rank() == 11
    assert field.trace(basis.gamma) == 1
    assert basis.conjugates[0] == basis.gamma
    for s in range(10):
        assert basis.conjugates[s + 1] == field.mul(
            basis.conjugates[s], basis.conjugates[s]
        )


def test_decompose_roundtrip(field):
    basis = find_normal_basis(field)
    for s in range(11):
        assert decompose(basis.conjugates[s], basis) == 1 << s
    assert decompose(0, basis) == 0
    rng = random.Random(0)
    for _ in range(1000):
        e = rng.randrange(2048)
        bits = decompose(e, basis)
        recombined = 0
        for s in range(11):
            if (bits >> s) & 1:
                recombined ^= basis.conjugates[s]
        assert recombined == e


def test_plan23_structure(field, plan23):
    assert plan23.n == 23
    assert len(plan23.big_cosets) == 2
    assert len(plan23.constants) == 1 + 2 * 43
    assert plan23.constants[0] == 1
    for bi in range(2):
        block = plan23.constants[1 + 43 * bi : 1 + 43 * (bi + 1)]
        assert block[0] == 1
        assert all(c not in (0, 1) for c in block[1:])
    assert plan23.mult_count == 84
    assert complexity(plan23) == (plan23.mult_count, plan23.add_count)
    assert sorted(plan23.permutation) == list(range(23))
    assert plan23.a_matrix.rank() == 23


def test_plan_add_count_recomputed(plan23):
    alg = bilinear.conv11_matrices()

    def stage(m):
        return sum(max(0, mask.bit_count() - 1) for mask in m.row_masks)

    expected = 2 * (stage(alg.p) + stage(alg.q)) + stage(plan23.a_matrix)
    assert plan23.add_count == expected


def test_per_coset_convolution_reduction(field, plan23):
    # each size-11 block must reproduce the linearized-polynomial values
    # L_i(conjugate_s) for the coset data, in conjugate order
    rng = random.Random(1)
    basis = find_normal_basis(field)
    alg = bilinear.conv11_matrices()
    consts = list(plan23.constants[1:44])
    for coset in plan23.big_cosets:
        f_i = random_vector(rng, 11)  # f_i[p] is the value at index k*2^p
        reordered = [f_i[(11 - p) % 11] for p in range(11)]
        linear = alg.p.apply_field(reordered)
        prods = [field.mul(c, v) for c, v in zip(consts, linear)]
        block = alg.q.apply_field(prods)
        want = [
            oracle.naive_linearized_eval(field, f_i, basis.conjugates[s])
            for s in range(11)
        ]
        assert block == want


def test_evaluate_23(field, plan23):
    rng = random.Random(2)
    assert evaluate(plan23, [0] * 23) == [0] * 23
    assert evaluate(plan23, unit_vector(23, 0)) == [1] * 23
    for i in range(23):
        f = unit_vector(23, i)
        assert evaluate(plan23, f) == oracle.naive_dft(field, f)
    for _ in range(100):
        f = random_vector(rng, 23)
        assert evaluate(plan23, f) == oracle.naive_dft(field, f)


def test_evaluate_linearity(field, plan23):
    rng = random.Random(3)
    for _ in range(100):
        f = random_vector(rng, 23)
        g = random_vector(rng, 23)
        lhs = evaluate(plan23, [a ^ b for a, b in zip(f, g)])
        rhs = [a ^ b for a, b in zip(evaluate(plan23, f), evaluate(plan23, g))]
        assert lhs == rhs


def test_evaluate_errors(plan23):
    with pytest.raises(ValueError):
        evaluate(plan23, [0] * 22)
    with pytest.raises(ValueError):
        evaluate(plan23, [0] * 22 + [4096])


def test_plan_n1(field):
    plan = build_plan(field, 1)
    assert complexity(plan) == (0, 0)
    assert plan.permutation == (0,)
    assert plan.constants == (1,)
    assert evaluate(plan, [7]) == [7]


def test_plan89(field, plan89):
    rng = random.Random(4)
    assert plan89.mult_count == 8 * 42
    assert len(plan89.constants) == 1 + 8 * 43
    for i in range(0, 89, 8):
        f = unit_vector(89, i)
        assert evaluate(plan89, f) == oracle.naive_dft(field, f)
    for _ in range(25):
        f = random_vector(rng, 89)
        assert evaluate(plan89, f) == oracle.naive_dft(field, f)


def test_plan2047_structure(field, plan2047):
    assert plan2047.mult_count == 7812
    assert plan2047.add_count == 2130248  # frozen for the deterministic basis
    assert len(plan2047.constants) == 1 + 186 * 43
    assert plan2047.gamma_exponent == 9
    assert sorted(plan2047.permutation) == list(range(2047))
    assert plan2047.a_matrix.rank() == 2047


def test_plan2047_column_of_ones(plan2047):
    # the size-1 coset feeds f_0 into every output row
    assert all(mask & 1 for mask in plan2047.a_matrix.row_masks)


def test_evaluate_2047(field, plan2047):
    rng = random.Random(5)
    e1 = unit_vector(2047, 1)
    assert evaluate(plan2047, e1) == [field.pow(2, j) for j in range(2047)]
    assert evaluate(plan2047, unit_vector(2047, 0)) == [1] * 2047
    for _ in range(3):
        f = random_vector(rng, 2047)
        assert evaluate(plan2047, f) == oracle.naive_dft(field, f)


def test_combined_add_count_matches_materialized(plan23):
    alg = bilinear.conv11_matrices()
    nbig = len(plan23.big_cosets)
    width = 1 + 43 * nbig
    rows = [1]
    for bi in range(nbig):
        for s in range(11):
            rows.append(alg.q.row_masks[s] << (1 + 43 * bi))
    blockdiag = BitMatrix(1 + 11 * nbig, width, rows)
    combined = plan23.a_matrix @ blockdiag

    def stage(m):
        return sum(max(0, mask.bit_count() - 1) for mask in m.row_masks)

    assert combined_add_count(plan23) == nbig * stage(alg.p) + stage(combined)


def test_plan_roundtrip(field, plan23):
    text = plan_to_json(plan23)
    back = plan_from_json(text)
    assert back == plan23
    rng = random.Random(6)
    f = random_vector(rng, 23)
    assert evaluate(back, f) == evaluate(plan23, f)


def test_corrupted_plan_changes_output(field, plan23):
    doc = json.loads(plan_to_json(plan23))
    doc["constants"][2] ^= 1
    bad = plan_from_json(json.dumps(doc))
    rng = random.Random(7)
    f = random_vector(rng, 23)
    assert evaluate(bad, f) != oracle.naive_dft(field, f)


def test_plan_from_json_validation(plan23):
    doc = json.loads(plan_to_json(plan23))
    doc["format"] = "something-else"
    with pytest.raises(ValueError):
        plan_from_json(json.dumps(doc))
    doc = json.loads(plan_to_json(plan23))
    doc["permutation"][0] = doc["permutation"][1]
    with pytest.raises(ValueError):
        plan_from_json(json.dumps(doc))
    doc = json.loads(plan_to_json(plan23))
    doc["constants"][3] = 4096
    with pytest.raises(ValueError):
        plan_from_json(json.dumps(doc))
    doc = json.loads(plan_to_json(plan23))
    doc["a_matrix"] = doc["a_matrix"][:-1]
    with pytest.raises(ValueError):
        plan_from_json(json.dumps(doc))


def test_build_plan_rejects_bad_length(field):
    with pytest.raises(ValueError):
        build_plan(field, 11)
