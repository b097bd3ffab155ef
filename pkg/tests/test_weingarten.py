import random
from fractions import Fraction

import pytest

from oracles import gauss_inverse
from qrot import config
from qrot.errors import CacheCorrupted, CapExceeded, DimensionTooSmall, InvalidInput, OddGroundSet, Singular
from qrot.partitions import enumerate_nc2, enumerate_nc2_decorated, join
from qrot.weingarten import (
    ORTHOGONAL,
    UNITARY,
    RationalMatrix,
    asymptotic_deviation,
    clear_memory_cache,
    dump_table,
    gram_matrix,
    invert,
    load_table,
    parse_table,
    save_table,
    set_cache_dir,
    table_filename,
    validate_cache_dir,
    weingarten_table,
)

F = Fraction
M = RationalMatrix.from_rows


def alternating(k):
    return "1*" * k


def test_gram_examples():
    for n in (1, 2, 7):
        assert gram_matrix(ORTHOGONAL, 1, n) == M([[n]])
        assert gram_matrix(ORTHOGONAL, 2, n) == M([[n * n, n], [n, n * n]])
        assert gram_matrix(UNITARY, "1*1*", n) == M([[n * n, n], [n, n * n]])
    assert gram_matrix(UNITARY, "11", 3).rows == 0
    with pytest.raises(DimensionTooSmall):
        gram_matrix(ORTHOGONAL, 2, 0)
    with pytest.raises(OddGroundSet):
        gram_matrix(UNITARY, "1*1", 2)
    with pytest.raises(InvalidInput):
        gram_matrix("symplectic", 1, 2)


@pytest.mark.parametrize("k", range(1, 5))
def test_gram_entries_and_symmetry(k):
    index = enumerate_nc2(2 * k)
    for n in range(1, 7):
        g = gram_matrix(ORTHOGONAL, k, n)
        assert g.is_symmetric()
        for i, p in enumerate(index):
            for j, q in enumerate(index):
                assert g[i, j] == n ** len(join(p, q))
        gu = gram_matrix(UNITARY, alternating(k), n)
        assert gu.is_symmetric()


def test_unitary_gram_is_orthogonal_submatrix():
    for d in ("1*1*", "11**", "1**1", "1*1*1*", "1**11*", "11*1**"):
        k = len(d) // 2
        full = enumerate_nc2(2 * k)
        sub = [full.index(p) for p in enumerate_nc2_decorated(d)]
        go, gu = gram_matrix(ORTHOGONAL, k, 4), gram_matrix(UNITARY, d, 4)
        for a, i in enumerate(sub):
            for b, j in enumerate(sub):
                assert gu[a, b] == go[i, j]


def test_invert_examples():
    assert invert(RationalMatrix.identity(3)) == RationalMatrix.identity(3)
    assert invert(M([[4, 2], [2, 4]])) == M([[F(1, 3), F(-1, 6)], [F(-1, 6), F(1, 3)]])
    with pytest.raises(Singular):
        invert(M([[1, 1], [1, 1]]))
    with pytest.raises(InvalidInput):
        invert(M([[1, 2, 3]]))


def test_invert_matches_plain_gauss_on_random_matrices():
    rng = random.Random(20261014)
    for size in range(1, 7):
        for _ in range(15):
            rows = [[F(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(size)] for _ in range(size)]
            try:
                expected = gauss_inverse(rows)
            except StopIteration:
                with pytest.raises(Singular):
                    invert(M(rows))
                continue
            assert invert(M(rows)).tolist() == expected


def test_table_examples():
    for n in (2, 3, 9):
        assert weingarten_table(ORTHOGONAL, 1, n).wg == M([[F(1, n)]])
    assert weingarten_table(ORTHOGONAL, 2, 2).wg == M([[F(1, 3), F(-1, 6)], [F(-1, 6), F(1, 3)]])
    assert weingarten_table(ORTHOGONAL, 2, 3).wg == M([[F(1, 8), F(-1, 24)], [F(-1, 24), F(1, 8)]])
    assert weingarten_table(UNITARY, "1*1*", 3).wg == weingarten_table(ORTHOGONAL, 2, 3).wg
    with pytest.raises(DimensionTooSmall):
        weingarten_table(ORTHOGONAL, 2, 1)


@pytest.mark.parametrize("n", [2, 3, 5, 10])
@pytest.mark.parametrize("k", range(1, 5))
def test_gram_times_wg_is_identity(k, n):
    for flavor, key in ((ORTHOGONAL, k), (UNITARY, alternating(k))):
        t = weingarten_table(flavor, key, n)
        size = len(t.index)
        assert t.gram @ t.wg == RationalMatrix.identity(size)
        assert t.wg @ t.gram == RationalMatrix.identity(size)
        assert t.wg.is_symmetric()


def test_wg_against_plain_gauss():
    for k in (2, 3):
        for n in (2, 4):
            g = gram_matrix(ORTHOGONAL, k, n)
            assert weingarten_table(ORTHOGONAL, k, n).wg.tolist() == gauss_inverse(g.tolist())


def test_deviation_examples():
    for n in (2, 5, 30):
        assert asymptotic_deviation(ORTHOGONAL, 1, n) == 0
        assert asymptotic_deviation(ORTHOGONAL, 2, n) == F(2, n - 1)
    assert asymptotic_deviation(ORTHOGONAL, 2, 3) == 1
    assert asymptotic_deviation(ORTHOGONAL, 2, 11) == F(1, 5)


@pytest.mark.parametrize("k", range(1, 5))
def test_n_times_deviation_bounded(k):
    hi = 30 if k == 4 else 50
    vals = [n * asymptotic_deviation(ORTHOGONAL, k, n) for n in range(2, hi + 1)]
    assert max(vals) == vals[0]
    assert all(v >= 0 for v in vals)


def test_weingarten_cap():
    old = config.caps.weingarten_k
    config.caps.weingarten_k = 2
    try:
        with pytest.raises(CapExceeded):
            weingarten_table(ORTHOGONAL, 3, 5)
    finally:
        config.caps.weingarten_k = old


def test_disk_round_trip(tmp_path):
    t = weingarten_table(UNITARY, "1**1*1", 3)
    path = save_table(t, tmp_path)
    assert path.name == table_filename(UNITARY, "1**1*1", 3) == "weingarten-unitary-1ss1s1-3.txt"
    back = load_table(path)
    assert back == t
    assert parse_table(dump_table(t)) == t
    assert validate_cache_dir(tmp_path) == []


def test_cache_dir_is_used(tmp_path):
    clear_memory_cache()
    set_cache_dir(tmp_path)
    t = weingarten_table(ORTHOGONAL, 3, 4)
    assert (tmp_path / table_filename(ORTHOGONAL, 3, 4)).exists()
    clear_memory_cache()
    assert weingarten_table(ORTHOGONAL, 3, 4) == t
    set_cache_dir(None)
    clear_memory_cache()


def test_corruption_detected(tmp_path):
    t = weingarten_table(ORTHOGONAL, 2, 2)
    path = save_table(t, tmp_path)
    text = path.read_text().replace("-1/6", "-1/7", 1)
    path.write_text(text)
    with pytest.raises(CacheCorrupted):
        load_table(path)
    (tmp_path / table_filename(ORTHOGONAL, 1, 2)).write_text("garbage\n")
    problems = validate_cache_dir(tmp_path)
    assert len(problems) == 2
    clear_memory_cache()
    set_cache_dir(tmp_path)
    with pytest.raises(CacheCorrupted):
        weingarten_table(ORTHOGONAL, 2, 2)
    set_cache_dir(None)
    clear_memory_cache()
