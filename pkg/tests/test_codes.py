import random

import pytest

from hiermem.codes import (
    BinaryMatrix,
    CodeError,
    CssCode,
    code_params,
    distance_bruteforce,
    hgp_params,
    hypergraph_product,
    rank_f2,
    rotated_surface_code,
    sample_regular_parity_check,
)


# ---------------------------------------------------------------------------
# rank
# ---------------------------------------------------------------------------


def test_rank_identity():
    assert rank_f2(BinaryMatrix.identity(4)) == 4


def test_rank_zero():
    assert rank_f2(BinaryMatrix.zeros(3, 5)) == 0


def test_rank_dependent_rows():
    m = BinaryMatrix.from_rows([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
    assert rank_f2(m) == 2


def test_rank_random_against_numpy():
    import numpy as np

    rng = random.Random(0)
    for _ in range(30):
        r, c = rng.randint(1, 12), rng.randint(1, 12)
        rows = [[rng.randint(0, 1) for _ in range(c)] for _ in range(r)]
        m = BinaryMatrix.from_rows(rows)
        # oracle: rank over GF(2) via numpy row reduction mod 2
        a = np.array(rows, dtype=np.int64) % 2
        rank = 0
        arr = a.copy()
        for col in range(c):
            piv = None
            for i in range(rank, r):
                if arr[i, col] % 2:
                    piv = i
                    break
            if piv is None:
                continue
            arr[[rank, piv]] = arr[[piv, rank]]
            for i in range(r):
                if i != rank and arr[i, col] % 2:
                    arr[i] = (arr[i] + arr[rank]) % 2
            rank += 1
        assert rank_f2(m) == rank


# ---------------------------------------------------------------------------
# regular parity-check sampling
# ---------------------------------------------------------------------------


def test_sample_trivial_weights():
    m = sample_regular_parity_check(8, 1, 2, seed=0)
    assert m.rows == 4 and m.cols == 8
    assert all(w == 2 for w in m.row_weights())
    assert all(w == 1 for w in m.col_weights())


def test_sample_3_4_exact_weights():
    m = sample_regular_parity_check(16, 3, 4, seed=1)
    assert m.rows == 12 and m.cols == 16
    assert all(w == 4 for w in m.row_weights())
    assert all(w == 3 for w in m.col_weights())


def test_sample_bad_divisibility():
    with pytest.raises(CodeError):
        sample_regular_parity_check(10, 3, 4, seed=0)


@pytest.mark.slow
def test_sample_5_8_paper_shape():
    m = sample_regular_parity_check(896, 5, 8, seed=42, full_rank=True)
    assert m.rows == 560 and m.cols == 896
    assert all(w == 8 for w in m.row_weights())
    assert all(w == 5 for w in m.col_weights())
    assert rank_f2(m) == 560


# ---------------------------------------------------------------------------
# hypergraph product
# ---------------------------------------------------------------------------


def test_hgp_five_one_two():
    h = BinaryMatrix.from_rows([[1, 1]])
    code = hypergraph_product(h, h)
    p = code_params(code)
    assert p.n == 5 and p.k == 1
    assert distance_bruteforce(code, 2) == 2


def test_hgp_orthogonality_random():
    rng = random.Random(7)
    for _ in range(20):
        r1, c1 = rng.randint(1, 4), rng.randint(1, 4)
        r2, c2 = rng.randint(1, 4), rng.randint(1, 4)
        h1 = BinaryMatrix.from_rows(
            [[rng.randint(0, 1) for _ in range(c1)] for _ in range(r1)]
        )
        h2 = BinaryMatrix.from_rows(
            [[rng.randint(0, 1) for _ in range(c2)] for _ in range(r2)]
        )
        code = hypergraph_product(h1, h2)  # constructor asserts hx.hz^T = 0
        assert code.n == c1 * c2 + r1 * r2


def test_hgp_params_formula_matches_direct_rank():
    rng = random.Random(3)
    for _ in range(200):
        r1, c1 = rng.randint(1, 4), rng.randint(1, 5)
        r2, c2 = rng.randint(1, 4), rng.randint(1, 5)
        h1 = BinaryMatrix.from_rows(
            [[rng.randint(0, 1) for _ in range(c1)] for _ in range(r1)]
        )
        h2 = BinaryMatrix.from_rows(
            [[rng.randint(0, 1) for _ in range(c2)] for _ in range(r2)]
        )
        code = hypergraph_product(h1, h2)
        direct = code_params(code)
        formula = hgp_params(h1, h2)
        assert formula.n == direct.n
        assert formula.k == direct.k


def test_hgp_58_degrees():
    m = sample_regular_parity_check(64, 5, 8, seed=2)
    p = hgp_params(m, m)
    assert p.delta_q == 16
    assert p.delta_g == 13


def test_hgp_58_qubit_degree_classes():
    # qubit degrees in a (5,8)-regular product are 5+5 or 8+8
    h = sample_regular_parity_check(16, 2, 4, seed=5)
    code = hypergraph_product(h, h)
    degs = sorted(
        set(
            a + b
            for a, b in zip(code.hx.col_weights(), code.hz.col_weights())
        )
    )
    assert degs == [4, 8]  # 2+2 and 4+4 for the (2,4) analogue


# ---------------------------------------------------------------------------
# rotated surface code
# ---------------------------------------------------------------------------


def test_surface_d3_counts():
    code = rotated_surface_code(3)
    assert code.n == 9
    assert code.m_x == 4 and code.m_z == 4
    p = code_params(code)
    assert p.k == 1
    assert p.delta_q == 4 and p.delta_g == 4


def test_surface_d3_distance():
    assert distance_bruteforce(rotated_surface_code(3), 3) == 3


def test_surface_d5_total_qubits():
    code = rotated_surface_code(5)
    total = code.n + code.m_x + code.m_z
    assert total == 2 * 25 - 1 == 49


def test_surface_weights():
    code = rotated_surface_code(5)
    weights = set(code.hx.row_weights()) | set(code.hz.row_weights())
    assert weights == {2, 4}


def test_surface_rejects_even():
    with pytest.raises(CodeError):
        rotated_surface_code(4)


def test_surface_coords_distinct():
    code = rotated_surface_code(3)
    assert code.qubit_coords is not None
    assert len(set(code.qubit_coords.values())) == code.n


# ---------------------------------------------------------------------------
# code_params / distance
# ---------------------------------------------------------------------------


def test_params_zero_checks():
    code = CssCode(BinaryMatrix.zeros(0, 4), BinaryMatrix.zeros(0, 4))
    assert code_params(code).k == 4


def test_distance_no_logicals():
    code = CssCode(BinaryMatrix.zeros(0, 3), BinaryMatrix.identity(3))
    assert distance_bruteforce(code, 3) is None


def test_distance_guard():
    code = CssCode(BinaryMatrix.zeros(0, 40), BinaryMatrix.zeros(0, 40))
    with pytest.raises(CodeError):
        distance_bruteforce(code, 8)


# ---------------------------------------------------------------------------
# serialization round trips
# ---------------------------------------------------------------------------


def test_alist_round_trip():
    m = sample_regular_parity_check(16, 3, 4, seed=9)
    text = m.to_alist()
    back = BinaryMatrix.from_alist(text)
    assert back == m
    assert back.to_alist() == text


def test_pbm_round_trip():
    m = sample_regular_parity_check(12, 2, 3, seed=4)
    text = m.to_pbm()
    back = BinaryMatrix.from_pbm(text)
    assert back == m
    assert back.to_pbm() == text
