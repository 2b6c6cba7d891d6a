from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from voronoi_cvp import (
    InputError,
    LatticeBasis,
    compute_relevant_vectors,
    cvp_bruteforce,
    enumerate_ball,
    membership,
    sandwich_radii,
    shortest_vector,
    voronoi_norm,
)
from voronoi_cvp.lattice import Target, basis_hash
from voronoi_cvp.linalg import add, norm_sq, scale, sub, sqrt_upper, vec
from voronoi_cvp.voronoi import cell_from_obj, cell_to_obj, load_cell, save_cell

from conftest import make_rng

small_rationals = st.fractions(min_value=-4, max_value=4, max_denominator=32)


def ambient_set(cell):
    return {v.ambient for v in cell.vectors}


def test_integer_lattice_relevant_vectors():
    for n in (1, 2, 3, 4):
        cell = compute_relevant_vectors(LatticeBasis.identity(n))
        expected = set()
        for i in range(n):
            e = [Fraction(0)] * n
            e[i] = Fraction(1)
            expected.add(tuple(e))
            expected.add(tuple(-x for x in e))
        assert ambient_set(cell) == expected
        assert len(cell.vectors) == 2 * n


def test_one_dimensional_cell():
    cell = compute_relevant_vectors(LatticeBasis.from_rows([[Fraction(5, 2)]]))
    assert ambient_set(cell) == {(Fraction(5, 2),), (Fraction(-5, 2),)}
    r_sq, big_r_sq = sandwich_radii(cell)
    assert r_sq == big_r_sq == Fraction(25, 16)


def test_even_sum_lattice_is_degenerate(skew2_cell):
    # the coset of (2,0) has four tied minimizers, so only 4 facets remain
    assert len(skew2_cell.vectors) == 4
    assert ambient_set(skew2_cell) == {
        (Fraction(1), Fraction(1)),
        (Fraction(-1), Fraction(-1)),
        (Fraction(1), Fraction(-1)),
        (Fraction(-1), Fraction(1)),
    }
    assert skew2_cell.lambda1_sq == 2
    assert sandwich_radii(skew2_cell) == (Fraction(1, 2), Fraction(1))


def test_relevant_vector_bound_and_negation_closure(rand_lattices):
    for basis, cell in rand_lattices:
        n = basis.n
        assert len(cell.vectors) <= 2 * (2**n - 1)
        coeffs = {v.coeffs for v in cell.vectors}
        assert all(tuple(-c for c in v) in coeffs for v in coeffs)
        assert all(any(v) for v in coeffs)


def test_generic_2d_lattice_has_six_facets():
    # a generic planar lattice meets the 2(2^2 - 1) facet bound exactly;
    # the sheared basis below is generic, unlike rectangular-type lattices
    basis = LatticeBasis.from_rows([[1, Fraction(1, 2)], [0, 1]])
    cell = compute_relevant_vectors(basis)
    assert len(cell.vectors) == 6
    assert ambient_set(cell) == {
        (Fraction(1), Fraction(0)),
        (Fraction(-1), Fraction(0)),
        (Fraction(1, 2), Fraction(1)),
        (Fraction(-1, 2), Fraction(-1)),
        (Fraction(1, 2), Fraction(-1)),
        (Fraction(-1, 2), Fraction(1)),
    }


def test_strict_coset_minimality_reverified(rand_lattices):
    # independent check: points of 2L within ||v|| of -v are exactly {0, -2v},
    # i.e. the coset v + 2L has no element of norm <= ||v|| besides +-v
    for basis, cell in rand_lattices[:2]:
        doubled = basis.scaled(2)
        for v in cell.vectors[:6]:
            hits = enumerate_ball(
                doubled, tuple(-x for x in v.ambient), v.norm_sq
            )
            got = {p.coeffs for p in hits}
            assert got == {tuple(0 for _ in v.coeffs), tuple(-c for c in v.coeffs)}


def test_relevant_vectors_have_cell_norm_two(z3_cell, skew2_cell, rand_lattices):
    cells = [z3_cell, skew2_cell] + [c for _, c in rand_lattices]
    for cell in cells:
        for v in cell.vectors:
            assert voronoi_norm(cell, v.ambient) == 2


def test_norm_zero_and_facet_centers(z2_cell):
    assert voronoi_norm(z2_cell, (Fraction(0), Fraction(0))) == 0
    for v in z2_cell.vectors:
        assert membership(z2_cell, scale(Fraction(1, 2), v.ambient))


@given(st.lists(small_rationals, min_size=3, max_size=3))
def test_integer_lattice_norm_is_scaled_linf(z3_cell, xs):
    expected = 2 * max(abs(x) for x in xs)
    assert voronoi_norm(z3_cell, vec(xs)) == expected


def test_membership_examples(z2_cell):
    assert membership(z2_cell, (Fraction(1, 2), Fraction(1, 2)))  # boundary
    assert not membership(z2_cell, (Fraction(3, 5), Fraction(0)))


@given(
    st.lists(small_rationals, min_size=2, max_size=2),
    st.lists(small_rationals, min_size=2, max_size=2),
)
def test_norm_symmetry_and_triangle(skew2_cell, xs, ys):
    x, y = vec(xs), vec(ys)
    assert voronoi_norm(skew2_cell, x) == voronoi_norm(skew2_cell, tuple(-a for a in x))
    assert voronoi_norm(skew2_cell, add(x, y)) <= voronoi_norm(
        skew2_cell, x
    ) + voronoi_norm(skew2_cell, y)


def test_membership_matches_oracle(rand_lattices):
    rng = make_rng(17)
    for basis, cell in rand_lattices[:2]:
        n = basis.n
        for _ in range(12):
            x = vec(
                Fraction(int(rng.integers(-24, 25)), 16) for _ in range(n)
            )
            sols = cvp_bruteforce(basis, Target(coords=x))
            zero_is_closest = any(not any(p.coeffs) for p in sols.points)
            assert membership(cell, x) == zero_is_closest


def test_sandwich_radii_probes(rand_lattices):
    rng = make_rng(18)
    for basis, cell in rand_lattices[:2]:
        n = basis.n
        r_sq, big_r_sq = sandwich_radii(cell)
        assert cell.lambda1_sq / 4 == r_sq
        for _ in range(8):
            u = vec(Fraction(int(rng.integers(-9, 10)), 8) for _ in range(n))
            if not any(u):
                continue
            # shrink u inside the inner ball: ||su||^2 < r^2 implies membership
            s = sqrt_upper(norm_sq(u) / r_sq) * 2
            inner = tuple(x / s for x in u)
            assert norm_sq(inner) < r_sq
            assert membership(cell, inner)
            # any member stays inside the outer ball
            if membership(cell, u):
                assert norm_sq(u) <= big_r_sq


def test_integer_lattice_sandwich(z4_cell):
    assert sandwich_radii(z4_cell) == (Fraction(1, 4), Fraction(1))


def test_cache_round_trip(tmp_path, skew2_basis, skew2_cell):
    path = tmp_path / "cache.json"
    save_cell(skew2_cell, path)
    loaded = load_cell(path, skew2_basis)
    assert [v.coeffs for v in loaded.vectors] == [
        v.coeffs for v in skew2_cell.vectors
    ]
    assert loaded.lambda1_sq == skew2_cell.lambda1_sq
    assert loaded.outer_radius_sq == skew2_cell.outer_radius_sq


def test_cache_rejects_mismatched_basis(skew2_cell):
    obj = cell_to_obj(skew2_cell)
    other = LatticeBasis.identity(2)
    with pytest.raises(InputError):
        cell_from_obj(obj, other)


def test_cache_rejects_tampering(skew2_basis, skew2_cell):
    obj = cell_to_obj(skew2_cell)
    obj["vr"] = obj["vr"][:1]  # breaks negation closure
    with pytest.raises(InputError):
        cell_from_obj(obj, skew2_basis)


def test_lambda1_equals_oracle(skew2_basis, skew2_cell):
    lam, _ = shortest_vector(skew2_basis)
    assert skew2_cell.lambda1_sq == lam
