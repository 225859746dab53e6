import random
from fractions import Fraction

import pytest

from elimkit.linalg import (
    InconsistentSystemError,
    SingularSystemError,
    bareiss_rank,
    rank_mod_p,
    rank_mod_p_fast,
    solve_exact,
)
from elimkit.rings import QQ


def test_bareiss_rank_examples():
    assert bareiss_rank([[1, 1], [1, 0]])[0] == 2
    assert bareiss_rank([[1, 2], [2, 4]])[0] == 1
    assert bareiss_rank([[0, 0], [0, 0]])[0] == 0
    assert bareiss_rank([[Fraction(1, 2), Fraction(1, 3)], [Fraction(1, 4), Fraction(1, 6)]])[0] == 1


def test_rank_mod_p_variants_agree():
    rng = random.Random(0)
    p = 2305843009213693967
    for _ in range(30):
        n = rng.randint(1, 10)
        m = [[rng.randrange(p) for _ in range(n)] for _ in range(n)]
        assert rank_mod_p(m, p)[0] == rank_mod_p_fast(m, p)[0]


def test_rank_mod_p_fast_stress_near_word_size():
    rng = random.Random(1)
    p = 2305843009213693967
    m = [[rng.randrange(p) for _ in range(40)] for _ in range(40)]
    assert rank_mod_p_fast(m, p) == rank_mod_p(m, p)


def test_solve_exact():
    sol = solve_exact([[1, 0, 0], [1, 1, 1], [1, 2, 4]], [Fraction(-1), Fraction(0), Fraction(3)], QQ)
    assert sol == [Fraction(-1), Fraction(0), Fraction(1)]
    with pytest.raises(SingularSystemError):
        solve_exact([[1, 0], [1, 0]], [Fraction(1), Fraction(1)], QQ)
    with pytest.raises(InconsistentSystemError):
        solve_exact([[1, 0], [1, 0]], [Fraction(1), Fraction(2)], QQ)
