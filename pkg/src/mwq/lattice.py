"""Positive-definite rational Gram lattices.

ADE root lattices and their duals, exact short-vector enumeration in the
Fincke-Pohst style (rational LDL^T, integer interval bounds from integer
square roots -- no floating point), orthogonal complements over Z, sublattice
embeddings found by exhaustive enumeration, and the Mordell-Weil structures
whose norm-2 / norm-1/2 vector counts this package reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

Vector = tuple[int, ...]
Matrix = tuple[tuple[Fraction, ...], ...]


def _to_matrix(rows: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


@dataclass(frozen=True)
class GramLattice:
    """Symmetric positive-definite Gram matrix; rank 0 is the trivial lattice."""

    gram: Matrix

    def __post_init__(self):
        g = _to_matrix(self.gram)
        object.__setattr__(self, "gram", g)
        n = len(g)
        for row in g:
            if len(row) != n:
                raise ValueError("gram matrix must be square")
        for i in range(n):
            for j in range(i):
                if g[i][j] != g[j][i]:
                    raise ValueError("gram matrix must be symmetric")
        # positive definiteness via leading principal minors
        for k in range(1, n + 1):
            if _det([row[:k] for row in g[:k]]) <= 0:
                raise ValueError("gram matrix must be positive definite")

    @property
    def rank(self) -> int:
        return len(self.gram)

    def det(self) -> Fraction:
        return _det([list(r) for r in self.gram])

    def inner(self, v: Vector, w: Vector) -> Fraction:
        return sum(
            Fraction(v[i]) * self.gram[i][j] * w[j]
            for i in range(self.rank)
            for j in range(self.rank)
            if v[i] and w[j]
        ) if self.rank else Fraction(0)

    def norm(self, v: Vector) -> Fraction:
        return self.inner(v, v)

    def direct_sum(self, other: "GramLattice") -> "GramLattice":
        n, m = self.rank, other.rank
        rows = []
        for i in range(n):
            rows.append(list(self.gram[i]) + [Fraction(0)] * m)
        for i in range(m):
            rows.append([Fraction(0)] * n + list(other.gram[i]))
        return GramLattice(tuple(map(tuple, rows)))

    def scale(self, c: Fraction) -> "GramLattice":
        return GramLattice(tuple(tuple(c * x for x in row) for row in self.gram))


TRIVIAL_LATTICE = GramLattice(())


def _det(rows: list[list[Fraction]]) -> Fraction:
    n = len(rows)
    if n == 0:
        return Fraction(1)
    m = [list(map(Fraction, r)) for r in rows]
    det = Fraction(1)
    for k in range(n):
        piv = next((r for r in range(k, n) if m[r][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = -det
        det *= m[k][k]
        inv = 1 / m[k][k]
        for r in range(k + 1, n):
            f = m[r][k] * inv
            if f:
                for c in range(k, n):
                    m[r][c] -= f * m[k][c]
    return det


def _invert(rows: Matrix) -> Matrix:
    n = len(rows)
    m = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for k in range(n):
        piv = next(r for r in range(k, n) if m[r][k] != 0)
        m[k], m[piv] = m[piv], m[k]
        inv = 1 / m[k][k]
        m[k] = [x * inv for x in m[k]]
        for r in range(n):
            if r != k and m[r][k]:
                f = m[r][k]
                m[r] = [a - f * b for a, b in zip(m[r], m[k])]
    return tuple(tuple(row[n:]) for row in m)


# ---------------------------------------------------------------------------
# ADE constructors and duals
# ---------------------------------------------------------------------------

_ADE_EDGES = {
    "E6": [(0, 1), (1, 2), (2, 3), (3, 4), (2, 5)],
    "E7": [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (2, 6)],
    "E8": [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7)],
}


def ade_gram(family: str, n: int) -> GramLattice:
    """Root-lattice Gram matrix: 2 on the diagonal, -1 on Dynkin edges."""
    family = family.upper()
    if family == "A" and n >= 1:
        edges = [(i, i + 1) for i in range(n - 1)]
    elif family == "D" and n >= 4:
        edges = [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
    elif family == "E" and n in (6, 7, 8):
        edges = _ADE_EDGES[f"E{n}"]
    else:
        raise ValueError(f"invalid root lattice {family}{n}")
    rows = [[Fraction(2) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    for i, j in edges:
        rows[i][j] = rows[j][i] = Fraction(-1)
    return GramLattice(tuple(map(tuple, rows)))


def dual_gram(lat: GramLattice) -> GramLattice:
    """Gram matrix of the dual lattice (inverse matrix in the dual basis)."""
    if lat.rank == 0:
        return lat
    return GramLattice(_invert(lat.gram))


def discriminant_group_order(family: str, n: int) -> int:
    """Order of L*/L for the named root lattice (the Gram determinant)."""
    d = ade_gram(family, n).det()
    assert d.denominator == 1
    return int(d)


# ---------------------------------------------------------------------------
# short-vector enumeration
# ---------------------------------------------------------------------------


def _ldl(g: Matrix) -> tuple[list[Fraction], list[list[Fraction]]]:
    """g = L^T D L with L unit upper triangular: q(x) = sum_i d[i]*(x_i + sum_{j>i} L[i][j] x_j)^2."""
    n = len(g)
    a = [list(row) for row in g]
    d = [Fraction(0)] * n
    lm = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = a[i][i]
        for j in range(i + 1, n):
            lm[i][j] = a[i][j] / d[i]
        for j in range(i + 1, n):
            for k in range(j, n):
                a[j][k] -= d[i] * lm[i][j] * lm[i][k]
    return d, lm


def _floor_sqrt(q: Fraction) -> Fraction:
    """A rational s with s <= sqrt(q) < s + 1/q.denominator (q >= 0)."""
    return Fraction(math.isqrt(q.numerator * q.denominator), q.denominator)


def _int_interval(center: Fraction, bound: Fraction) -> range:
    """Integers x with (x + center)^2 <= bound, by exact arithmetic."""
    if bound < 0:
        return range(0)
    s = _floor_sqrt(bound)
    hi = math.floor(s - center) + 1
    while (hi + center) * (hi + center) <= bound:
        hi += 1
    hi -= 1
    lo = math.floor(-s - center)
    while lo <= hi and (lo + center) * (lo + center) > bound:
        lo += 1
    return range(lo, hi + 1)


def enumerate_up_to(lat: GramLattice, bound: Fraction) -> list[Vector]:
    """All integer vectors with norm <= bound, zero included, in lex order."""
    n = lat.rank
    bound = Fraction(bound)
    if n == 0:
        return [()] if bound >= 0 else []
    d, lm = _ldl(lat.gram)
    out: list[Vector] = []
    x = [0] * n

    def walk(i: int, rem: Fraction):
        if i < 0:
            out.append(tuple(x))
            return
        center = sum(lm[i][j] * x[j] for j in range(i + 1, n))
        for xi in _int_interval(center, rem / d[i]):
            x[i] = xi
            walk(i - 1, rem - d[i] * (xi + center) ** 2)
        x[i] = 0

    walk(n - 1, bound)
    return sorted(out)


def enumerate_by_norm(lat: GramLattice, q: Fraction) -> list[Vector]:
    """All integer vectors v with v^T G v = q exactly, lexicographically sorted."""
    q = Fraction(q)
    if q <= 0:
        raise ValueError("norm must be positive")
    return [v for v in enumerate_up_to(lat, q) if lat.norm(v) == q]


def minimal_norm(lat: GramLattice) -> Fraction:
    """Smallest norm of a nonzero vector."""
    if lat.rank == 0:
        raise ValueError("trivial lattice has no nonzero vectors")
    cap = min(lat.gram[i][i] for i in range(lat.rank))
    return min(lat.norm(v) for v in enumerate_up_to(lat, cap) if any(v))


# ---------------------------------------------------------------------------
# integer linear algebra: kernels, complements, embeddings
# ---------------------------------------------------------------------------


def integer_kernel(rows: Sequence[Sequence[int]], n_cols: int) -> list[Vector]:
    """Z-basis of {x in Z^n : A x = 0} via unimodular column reduction."""
    a = [list(map(int, r)) for r in rows]
    u = [[int(i == j) for j in range(n_cols)] for i in range(n_cols)]

    def col_op(dst: int, src: int, factor: int):
        for r in a:
            r[dst] += factor * r[src]
        for r in u:
            r[dst] += factor * r[src]

    def col_swap(i: int, j: int):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in u:
            r[i], r[j] = r[j], r[i]

    pivot_col = 0
    for row_i in range(len(a)):
        # clear row row_i using columns >= pivot_col
        while True:
            nz = [c for c in range(pivot_col, n_cols) if a[row_i][c] != 0]
            if len(nz) <= 1:
                break
            c1, c2 = sorted(nz[:2], key=lambda c: abs(a[row_i][c]))
            q = a[row_i][c2] // a[row_i][c1]
            col_op(c2, c1, -q)
        nz = [c for c in range(pivot_col, n_cols) if a[row_i][c] != 0]
        if nz:
            col_swap(pivot_col, nz[0])
            pivot_col += 1
    kernel = []
    for c in range(pivot_col, n_cols):
        kernel.append(tuple(u[r][c] for r in range(n_cols)))
    return kernel


def orthogonal_complement_basis(
    ambient: GramLattice, embedded: Sequence[Vector]
) -> list[Vector]:
    """Integral basis of {v : <v, e> = 0 for all embedded e}; rejects dependent input."""
    n = ambient.rank
    rows = []
    for e in embedded:
        row = [ambient.inner(e, tuple(int(i == j) for j in range(n))) for i in range(n)]
        lcm = math.lcm(*[x.denominator for x in row]) if row else 1
        rows.append([int(x * lcm) for x in row])
    rank = _rational_rank(rows, n)
    if rank != len(embedded):
        raise ValueError("embedded vectors are linearly dependent")
    return integer_kernel(rows, n)


def _rational_rank(rows: Sequence[Sequence[int]], n_cols: int) -> int:
    m = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    for c in range(n_cols):
        piv = next((r for r in range(rank, len(m)) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][c]
        for r in range(len(m)):
            if r != rank and m[r][c]:
                f = m[r][c] * inv
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def orthogonal_complement_gram(ambient: GramLattice, embedded: Sequence[Vector]) -> GramLattice:
    basis = orthogonal_complement_basis(ambient, embedded)
    return GramLattice(
        tuple(tuple(ambient.inner(b1, b2) for b2 in basis) for b1 in basis)
    )


def find_sublattice_embeddings(
    big: GramLattice, small_gram: Matrix
) -> Iterator[tuple[Vector, ...]]:
    """Yield column tuples B with B^T G B = small_gram, by exhaustive search."""
    small = _to_matrix(small_gram)
    k = len(small)
    if k == 0:
        yield ()
        return
    by_norm: dict[Fraction, list[Vector]] = {}
    for j in range(k):
        q = small[j][j]
        if q not in by_norm:
            by_norm[q] = enumerate_by_norm(big, q)
    cols: list[Vector] = []

    def extend(j: int):
        if j == k:
            yield tuple(cols)
            return
        for v in by_norm[small[j][j]]:
            if all(big.inner(cols[i], v) == small[i][j] for i in range(j)):
                cols.append(v)
                yield from extend(j + 1)
                cols.pop()

    yield from extend(0)


def find_sublattice_embedding(
    big: GramLattice, small_gram: Matrix
) -> Optional[tuple[Vector, ...]]:
    """First embedding in canonical order, or None (absence is a valid answer)."""
    for cols in find_sublattice_embeddings(big, small_gram):
        small = _to_matrix(small_gram)
        for i in range(len(cols)):
            for j in range(len(cols)):
                assert big.inner(cols[i], cols[j]) == small[i][j]
        return cols
    return None


def isometric(a: GramLattice, b: GramLattice) -> bool:
    """Exact isometry test by exhaustive basis matching (small ranks only)."""
    if a.rank != b.rank:
        return False
    if a.rank == 0:
        return True
    if a.det() != b.det():
        return False
    # equal determinants force any Gram-preserving column matrix to be unimodular
    return find_sublattice_embedding(a, b.gram) is not None


def solve_integer(columns: Sequence[Vector], target: Sequence[Fraction]) -> Optional[Vector]:
    """Integer solution y of B y = target for full-column-rank B, or None."""
    if not columns:
        return () if all(x == 0 for x in target) else None
    n = len(columns[0])
    k = len(columns)
    m = [[Fraction(columns[j][i]) for j in range(k)] + [Fraction(target[i])] for i in range(n)]
    pivots = []
    r = 0
    for c in range(k):
        piv = next((i for i in range(r, n) if m[i][c] != 0), None)
        if piv is None:
            return None  # not full column rank
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(n):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(r)
        r += 1
    for i in range(r, n):
        if m[i][k] != 0:
            return None
    y = tuple(m[i][k] for i in pivots)
    if any(v.denominator != 1 for v in y):
        return None
    sol = tuple(int(v) for v in y)
    for i in range(n):
        if sum(columns[j][i] * sol[j] for j in range(k)) != target[i]:
            return None
    return sol


# ---------------------------------------------------------------------------
# Mordell-Weil structures
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MWStructure:
    """Free part of a Mordell-Weil lattice, its odd torsion, and the embedded
    narrow part (sections meeting the identity component of every fiber)."""

    mw_free: GramLattice
    torsion: tuple[int, ...]
    narrow_gram: GramLattice
    narrow_basis: tuple[Vector, ...]  # columns, in mw_free coordinates

    def __post_init__(self):
        for order in self.torsion:
            if order % 2 == 0:
                raise ValueError("torsion orders must be odd")
        if self.mw_free.rank != self.narrow_gram.rank:
            raise ValueError("narrow part must have full rank in the free part")
        for i, bi in enumerate(self.narrow_basis):
            for j, bj in enumerate(self.narrow_basis):
                if self.mw_free.inner(bi, bj) != self.narrow_gram.gram[i][j]:
                    raise ValueError("narrow basis does not realize the narrow Gram")
        if self.mw_free.rank:
            ratio = self.narrow_gram.det() / self.mw_free.det()
            idx = frac_index(ratio)
            if idx is None:
                raise ValueError("narrow index is not an integer")

    @property
    def index(self) -> int:
        if self.mw_free.rank == 0:
            return 1
        idx = frac_index(self.narrow_gram.det() / self.mw_free.det())
        assert idx is not None
        return idx


def frac_index(ratio: Fraction) -> Optional[int]:
    if ratio <= 0:
        return None
    if ratio.denominator != 1:
        return None
    r = math.isqrt(ratio.numerator)
    return r if r * r == ratio.numerator else None


def integral_dual_basis(lat: GramLattice) -> list[Vector]:
    """Basis of {v in Z^r : <v, w> in Z for every w in Z^r}.

    For the Mordell-Weil lattice of a rational elliptic surface this sublattice
    is exactly the narrow part: pairing a narrow section against anything lands
    in Z, and the pairing identifies the full lattice with the dual of the
    narrow one.
    """
    r = lat.rank
    if r == 0:
        return []
    n = math.lcm(*[x.denominator for row in lat.gram for x in row])
    a = [[int(x * n) for x in row] for row in lat.gram]
    # solutions of A v = -n w: kernel of [A | n I] in Z^(2r), projected to v
    block = [a[i] + [n if j == i else 0 for j in range(r)] for i in range(r)]
    kernel = integer_kernel(block, 2 * r)
    assert len(kernel) == r
    return [vec[:r] for vec in kernel]


def make_mw_structure(
    mw_free: GramLattice, torsion: Sequence[int], narrow_gram: GramLattice
) -> MWStructure:
    """Bundle a free Gram with its narrow Gram and a basis of the narrow part.

    The narrow part is located canonically as the integral-pairing sublattice;
    the Gram-embedding search then only rebases it to match the designated
    narrow Gram exactly.  (Searching for an arbitrary Gram-isometric sublattice
    instead can return a subgroup that is not the narrow part and corrupt the
    2-divisibility counts.)
    """
    kernel = integral_dual_basis(mw_free)
    restricted = GramLattice(
        tuple(tuple(mw_free.inner(b1, b2) for b2 in kernel) for b1 in kernel)
    )
    if restricted.det() != narrow_gram.det():
        raise ValueError(
            "integral-pairing sublattice does not match the designated narrow Gram"
        )
    rebase = find_sublattice_embedding(restricted, narrow_gram.gram)
    if rebase is None:
        raise ValueError("no basis of the narrow part realizes the narrow Gram")
    rank = mw_free.rank
    basis = tuple(
        tuple(sum(kernel[j][i] * col[j] for j in range(len(kernel))) for i in range(rank))
        for col in rebase
    )
    return MWStructure(mw_free, tuple(torsion), narrow_gram, basis)


def count_etc(mw: MWStructure) -> int:
    """Half the number of norm-2 vectors of the narrow part.  Torsion never
    contributes: the narrow part sits in the free part and the pairing kills
    torsion classes."""
    if mw.narrow_gram.rank == 0:
        return 0
    n = len(enumerate_by_norm(mw.narrow_gram, Fraction(2)))
    assert n % 2 == 0
    return n // 2


def count_qretc(mw: MWStructure) -> int:
    """Half the number of vectors s with <s,s> = 1/2 whose double lies in the
    narrow part.  Odd torsion cannot enter: 2*tau = 0 forces tau = 0."""
    if mw.mw_free.rank == 0:
        return 0
    halves = enumerate_by_norm(mw.mw_free, Fraction(1, 2))
    hits = 0
    for v in halves:
        target = tuple(Fraction(2 * c) for c in v)
        if solve_integer(mw.narrow_basis, target) is not None:
            hits += 1
    assert hits % 2 == 0
    return hits // 2


# ---------------------------------------------------------------------------
# tiny grammar for lattice expressions ("A3*+A1*", "<1/6>^2", "(1/10)[[2,1],[1,3]]")
# ---------------------------------------------------------------------------


def lattice_from_text(text: str) -> tuple[GramLattice, tuple[int, ...]]:
    """Parse a direct sum of ADE lattices, duals, rank-1 scalars, Gram matrices
    and cyclic torsion factors.  Returns (lattice, torsion orders)."""
    text = text.replace(" ", "")
    if text in ("0", "{0}"):
        return TRIVIAL_LATTICE, ()
    parts = []
    depth = 0
    start = 0
    for i, ch in enumerate(text):
        if ch in "[(<":
            depth += 1
        elif ch in "])>":
            depth -= 1
        elif ch == "+" and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    lat = TRIVIAL_LATTICE
    torsion: list[int] = []
    for part in parts:
        piece, power = part, 1
        if "^" in piece and not piece.startswith("<"):
            piece, pw = piece.rsplit("^", 1)
            power = int(pw)
        elif piece.startswith("<") and "^" in piece[piece.index(">") :]:
            piece, pw = piece.rsplit("^", 1)
            power = int(pw)
        for _ in range(power):
            got = _lattice_atom(piece)
            if isinstance(got, int):
                torsion.append(got)
            else:
                lat = lat.direct_sum(got)
    return lat, tuple(torsion)


def _lattice_atom(piece: str):
    if piece.startswith("Z/") and piece.endswith("Z"):
        return int(piece[2:-1])
    if piece.startswith("<") and piece.endswith(">"):
        return GramLattice(((Fraction(piece[1:-1]),),))
    if piece.startswith("[["):
        return GramLattice(_matrix_literal(piece))
    if piece.startswith("(") and ")[[" in piece:
        close = piece.index(")")
        scale = Fraction(piece[1:close])
        return GramLattice(_matrix_literal(piece[close + 1 :])).scale(scale)
    dual = piece.endswith("*")
    if dual:
        piece = piece[:-1]
    fam, num = piece[0], int(piece[1:])
    lat = ade_gram(fam, num)
    return dual_gram(lat) if dual else lat


def _matrix_literal(text: str) -> Matrix:
    if not (text.startswith("[[") and text.endswith("]]")):
        raise ValueError(f"bad matrix literal {text!r}")
    rows = text[2:-2].split("],[")
    return tuple(tuple(Fraction(x) for x in row.split(",")) for row in rows)
