import random

import pytest

from minrank.gf import GF2, GFMatrix, mat_rank
from minrank.masked import ERASED, MaskedMatrix
from minrank.oracle import BudgetExceeded, oracle_min_rank

from conftest import brute_min_rank, random_masked

X = ERASED


def test_example(fig2):
    res = oracle_min_rank(fig2)
    assert res.min_rank == 2 and res.enumerated == 1024
    assert fig2.agrees_with(res.witness) and mat_rank(res.witness) == 2
    # The all-ones filling is the only rank-2 completion.
    assert res.optimum_count == 1
    assert res.witness.tolist() == [[1 if x is X else x for x in r] for r in fig2.data]


def test_complete_matrix():
    m = MaskedMatrix.from_rows([[1, 1], [1, 1], [0, 1]], GF2)
    res = oracle_min_rank(m)
    assert res.min_rank == 2 and res.enumerated == 1 and res.optimum_count == 1


def test_all_erased():
    res = oracle_min_rank(MaskedMatrix.from_rows([[X, X], [X, X]], GF2))
    assert res.min_rank == 0 and res.enumerated == 16 and res.witness.is_zero()


def test_budget_refusal():
    m = MaskedMatrix.from_rows([[X] * 5] * 5, GF2)
    with pytest.raises(BudgetExceeded) as e:
        oracle_min_rank(m, budget=1000)
    assert e.value.required == 2**25
    assert "33554432" in str(e.value)


def test_unknown_mode(fig2):
    with pytest.raises(ValueError):
        oracle_min_rank(fig2, mode="clever")


@pytest.mark.parametrize("seed", range(40))
def test_modes_agree(seed):
    rng = random.Random(seed)
    q = 3 if seed % 4 == 0 else 2
    a, b = rng.randint(1, 4), rng.randint(1, 4)
    m = random_masked(rng, a, b, rng.randint(0, min(a * b, 9 if q == 2 else 5)), q)
    fast = oracle_min_rank(m)
    plain = oracle_min_rank(m, mode="plain")
    rev = oracle_min_rank(m, mode="plain", reverse=True)
    assert fast.min_rank == plain.min_rank == rev.min_rank == brute_min_rank(m)
    assert fast.optimum_count == plain.optimum_count == rev.optimum_count
    assert fast.enumerated == q**m.erasure_count
    # Row-major odometer order is shared, so the first optimum is too.
    assert fast.witness == plain.witness
    for r in (fast, rev):
        assert m.agrees_with(r.witness) and mat_rank(r.witness) == r.min_rank


def test_witness_is_first_in_odometer_order():
    # Erased positions (1,1) then (1,2); the last changes fastest.
    m = MaskedMatrix.from_rows([[X, X], [1, 1]], GF2)
    res = oracle_min_rank(m)
    assert res.min_rank == 1 and res.optimum_count == 2
    assert res.witness == GFMatrix.from_rows([[0, 0], [1, 1]], GF2)
