"""Exact rank, kernel, and solve over Q(i)."""

import random
from fractions import Fraction

from lndlab.linalg import echelon, in_span, kernel, rank, rref, solve
from lndlab.polyalg import GaussianRational

Q = GaussianRational


def mat(rows):
    return [[Q(x) if not isinstance(x, GaussianRational) else x for x in row] for row in rows]


def mat_vec(rows, x):
    return [sum((a * b for a, b in zip(row, x)), Q(0)) for row in rows]


class TestRank:
    def test_hand_cases(self):
        assert rank(mat([[1, 0], [0, 1]])) == 2
        assert rank(mat([[1, 2], [2, 4]])) == 1
        assert rank(mat([[0, 0], [0, 0]])) == 0
        assert rank([]) == 0

    def test_fractions_and_complex(self):
        rows = [
            [Q(Fraction(1, 2)), Q(0, 1)],
            [Q(0, 1), Q(Fraction(1, 2))],
        ]
        # second row = I * first row -> rank 1
        rows[1] = [Q(0, 1) * rows[0][0], Q(0, 1) * rows[0][1]]
        assert rank(rows) == 1

    def test_duplicate_rows_do_not_raise_rank(self):
        rng = random.Random(3)
        for _ in range(25):
            rows = [
                [Q(Fraction(rng.randint(-5, 5), rng.randint(1, 4))) for _ in range(4)]
                for _ in range(3)
            ]
            r = rank(rows)
            assert rank(rows + [rows[0]]) == r
            combo = [a + b for a, b in zip(rows[0], rows[-1])]
            assert rank(rows + [combo]) == r


class TestKernel:
    def test_single_equation(self):
        # x + z = 0 in 3 unknowns -> kernel dim 2
        basis = kernel(mat([[1, 0, 1]]), 3)
        assert len(basis) == 2
        for vec in basis:
            assert mat_vec(mat([[1, 0, 1]]), vec) == [Q(0)]

    def test_empty_system_full_kernel(self):
        basis = kernel([], 2)
        assert basis == [[Q(1), Q(0)], [Q(0), Q(1)]]

    def test_kernel_vectors_annihilate_random(self):
        rng = random.Random(8)
        for _ in range(25):
            rows = [
                [Q(rng.randint(-3, 3), rng.randint(-2, 2)) for _ in range(5)]
                for _ in range(3)
            ]
            basis = kernel(rows, 5)
            assert len(basis) == 5 - rank(rows)
            for vec in basis:
                assert mat_vec(rows, vec) == [Q(0)] * 3


class TestSolve:
    def test_unique_solution(self):
        rows = mat([[2, 1], [1, -1]])
        x = solve(rows, [Q(5), Q(1)])
        assert mat_vec(rows, x) == [Q(5), Q(1)]

    def test_inconsistent(self):
        rows = mat([[1, 1], [1, 1]])
        assert solve(rows, [Q(1), Q(2)]) is None

    def test_underdetermined_deterministic(self):
        rows = mat([[1, 1, 0]])
        x = solve(rows, [Q(3)])
        assert x == [Q(3), Q(0), Q(0)]


class TestSpanAndEchelon:
    def test_in_span(self):
        rows = mat([[1, 0, 0], [0, 1, 0]])
        assert in_span(rows, [Q(2), Q(-3), Q(0)])
        assert not in_span(rows, [Q(0), Q(0), Q(1)])
        assert in_span([], [Q(0), Q(0)])
        assert not in_span([], [Q(1), Q(0)])

    def test_echelon_pivots(self):
        rows = mat([[0, 1, 1], [1, 0, 1], [1, 1, 2]])
        m, pivots = echelon(rows)
        assert pivots == [0, 1]
        assert rank(rows) == 2

    def test_rref_unit_pivots(self):
        rows = mat([[2, 0, 4], [0, 3, 6]])
        m, pivots = rref(rows)
        assert pivots == [0, 1]
        assert m[0] == [Q(1), Q(0), Q(2)]
        assert m[1] == [Q(0), Q(1), Q(2)]


def naive_rank(rows):
    """Independent oracle: plain division-based Gaussian elimination."""
    m = [list(r) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(m)):
            if m[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = m[r][c]
        m[r] = [x / inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                factor = m[i][c]
                m[i] = [a - factor * b for a, b in zip(m[i], m[r])]
        r += 1
    return r


class TestAgainstNaiveElimination:
    def test_rank_matches_on_random_complex_matrices(self):
        rng = random.Random(424242)
        for _ in range(40):
            nrows = rng.randint(1, 5)
            ncols = rng.randint(1, 5)
            rows = [
                [
                    Q(
                        Fraction(rng.randint(-4, 4), rng.randint(1, 3)),
                        Fraction(rng.randint(-4, 4), rng.randint(1, 3))
                        if rng.random() < 0.5
                        else 0,
                    )
                    for _ in range(ncols)
                ]
                for _ in range(nrows)
            ]
            assert rank(rows) == naive_rank(rows)
            for vec in kernel(rows, ncols):
                assert mat_vec(rows, vec) == [Q(0)] * nrows
