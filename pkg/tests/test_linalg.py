from fractions import Fraction

from hypothesis import assume, given
from hypothesis import strategies as st

from voronoi_cvp import linalg

rationals = st.fractions(min_value=-100, max_value=100, max_denominator=50)
nonneg = st.fractions(min_value=0, max_value=10_000, max_denominator=50)


@given(rationals, nonneg)
def test_floor_of_sum_with_sqrt_characterization(m, q):
    # k = floor(m + sqrt(q)) iff k - m <= sqrt(q) < k + 1 - m
    k = linalg.floor_of_sum_with_sqrt(m, q)
    low = k - m
    assert low <= 0 or low * low <= q
    high = k + 1 - m
    assert high > 0 and high * high > q


@given(rationals, nonneg)
def test_ceil_of_diff_with_sqrt_characterization(m, q):
    k = linalg.ceil_of_diff_with_sqrt(m, q)
    # k >= m - sqrt(q) and k - 1 < m - sqrt(q)
    lhs = m - k
    assert lhs <= 0 or lhs * lhs <= q
    prev = m - (k - 1)
    assert prev > 0 and prev * prev > q


@given(nonneg)
def test_sqrt_upper_bounds(q):
    up = linalg.sqrt_upper(q)
    assert up * up >= q
    step = Fraction(1, q.denominator)
    if up >= step:
        assert (up - step) * (up - step) < q or (up - step) * (up - step) == q == up * up


@given(st.lists(rationals, min_size=2, max_size=4))
def test_scaled_ints_round_trip(xs):
    ints, d = linalg.scaled_ints(tuple(xs))
    assert d >= 1
    assert all(Fraction(k, d) == x for k, x in zip(ints, xs))
    # d is the least common denominator
    lcm = 1
    for x in xs:
        lcm = linalg.lcm(lcm, x.denominator)
    assert d == lcm


@st.composite
def square_matrices(draw, n_max=3):
    n = draw(st.integers(min_value=1, max_value=n_max))
    entries = st.fractions(min_value=-6, max_value=6, max_denominator=6)
    return [[draw(entries) for _ in range(n)] for _ in range(n)]


@given(square_matrices())
def test_solve_and_inverse(m):
    n = len(m)
    d = linalg.det(m)
    assume(d != 0)
    rhs = tuple(Fraction(i + 1, 3) for i in range(n))
    x = linalg.solve(m, rhs)
    assert tuple(linalg.dot(row, x) for row in m) == rhs
    inv = linalg.inverse(m)
    prod = [
        [linalg.dot(m[i], tuple(inv[k][j] for k in range(n))) for j in range(n)]
        for i in range(n)
    ]
    assert prod == [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


@given(square_matrices())
def test_ldl_reconstructs_gram(m):
    n = len(m)
    assume(linalg.det(m) != 0)
    cols = [tuple(m[i][j] for i in range(n)) for j in range(n)]
    gram = [[linalg.dot(a, b) for b in cols] for a in cols]
    L, d = linalg.ldl(gram)
    assert all(di > 0 for di in d)
    recon = [
        [
            sum(L[i][k] * L[j][k] * d[k] for k in range(n))
            for j in range(n)
        ]
        for i in range(n)
    ]
    assert recon == gram
    # quadratic form identity on a probe vector
    z = tuple(Fraction(i - 1, 2) for i in range(n))
    direct = linalg.dot(z, tuple(linalg.dot(row, z) for row in gram))
    via_ldl = sum(
        d[j] * (z[j] + sum(L[i][j] * z[i] for i in range(j + 1, n))) ** 2
        for j in range(n)
    )
    assert direct == via_ldl


def test_rank_and_det_basics():
    assert linalg.rank([(1, 0), (2, 0)]) == 1
    assert linalg.rank([(1, 0), (0, 1)]) == 2
    assert linalg.det([[2, 1], [0, 3]]) == 6
    assert linalg.det([[1, 2], [2, 4]]) == 0


def test_ceil_frac():
    assert linalg.ceil_frac(Fraction(7, 2)) == 4
    assert linalg.ceil_frac(Fraction(-7, 2)) == -3
    assert linalg.ceil_frac(Fraction(4)) == 4
