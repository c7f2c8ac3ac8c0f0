"""Exact linear algebra over Q on lists of Fractions."""

from fractions import Fraction


def to_fractions(rows):
    return [[Fraction(x) for x in row] for row in rows]


def rref(rows, ncols=None):
    """Reduced row echelon form.

    Returns ``(reduced_rows, pivot_columns)``; zero rows are dropped.
    """
    m = [list(r) for r in to_fractions(rows)]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows):
    if not rows:
        return 0
    return len(rref(rows)[1])


def det(matrix):
    m = to_fractions(matrix)
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        d *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return d


def solve(matrix, rhs):
    """Solve ``matrix @ x = rhs`` for square invertible ``matrix``."""
    n = len(matrix)
    aug = [list(row) + [b] for row, b in zip(to_fractions(matrix), rhs)]
    red, piv = rref(aug, ncols=n)
    if piv != list(range(n)):
        raise ValueError("singular system")
    return [row[n] for row in red]


def transpose(matrix):
    return [list(col) for col in zip(*matrix)]


def in_span(vectors, target):
    """Whether ``target`` lies in the Q-span of ``vectors``."""
    if all(x == 0 for x in target):
        return True
    if not vectors:
        return False
    return rank(list(vectors) + [list(target)]) == rank(vectors)
