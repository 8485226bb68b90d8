"""Concrete Chevalley data for G = SL_n over a field tower.

Conventions (0-based throughout this package):

* Positive roots of type A_{n-1} are pairs (k, m) with 0 <= k < m < n,
  standing for e_k - e_m; the root subgroup element eps((k,m), c) is the
  identity matrix plus c in entry (k, m).
* The Weyl group is S_n.  A WeylElement stores its one-line permutation
  `perm` with perm[j] = w(j); the permutation matrix P_w has entry 1 at
  (w(j), j), so P_w P_v = P_{wv} and conjugation sends the root (k, m)
  to (w(k), w(m)).
* The fixed reduced word for the longest element is
  s_0 (s_1 s_0) (s_2 s_1 s_0) ... ; for this word the associated root
  sequence beta_1, ..., beta_r enumerates the positive roots in
  lexicographic order, which is asserted at construction.  Consequently a
  product eps(beta_r, c_r) ... eps(beta_1, c_1) is simply the identity
  plus c_j in entry beta_j: factors appear in order of strictly decreasing
  row, so no cross terms ever arise.  Unipotent coordinates are matrix
  entries.
* Simple reflection representatives are the signed permutation blocks
  (0 1; -1 0), determinant one.

RootDatum and all enumerations are immutable after construction;
GroupElement is value-semantic and normalized to the minimal tower level
containing its entries.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import LevelError
from .fields import FieldElement, FieldTower


def _inversions(perm: tuple[int, ...]) -> int:
    n = len(perm)
    return sum(1 for j in range(n) for k in range(j + 1, n) if perm[j] > perm[k])


class WeylElement:
    """An element of W = S_n with a reduced word.

    The word is either the fixed word supplied at construction (used for
    the longest element) or the canonical one obtained by stripping right
    descents, smallest simple reflection first.  Letters are 0-based
    indices of simple reflections.
    """

    __slots__ = ("perm", "_word")

    def __init__(self, perm: tuple[int, ...], word: tuple[int, ...] | None = None):
        self.perm = tuple(perm)
        self._word = tuple(word) if word is not None else None
        if word is not None and len(word) != _inversions(self.perm):
            raise ValueError("word length does not match the inversion count")

    @classmethod
    def identity(cls, n: int) -> "WeylElement":
        return cls(tuple(range(n)))

    @classmethod
    def from_word(cls, n: int, word) -> "WeylElement":
        perm = list(range(n))
        for i in word:  # successive right multiplications: s_{i_1} ... s_{i_k}
            perm[i], perm[i + 1] = perm[i + 1], perm[i]
        return cls(tuple(perm))

    @property
    def n(self) -> int:
        return len(self.perm)

    @property
    def length(self) -> int:
        return _inversions(self.perm)

    @property
    def word(self) -> tuple[int, ...]:
        if self._word is None:
            collected = []
            p = list(self.perm)
            while True:
                for i in range(len(p) - 1):
                    if p[i] > p[i + 1]:
                        collected.append(i)
                        p[i], p[i + 1] = p[i + 1], p[i]
                        break
                else:
                    break
            self._word = tuple(reversed(collected))
        return self._word

    def inverse(self) -> "WeylElement":
        inv = [0] * len(self.perm)
        for j, i in enumerate(self.perm):
            inv[i] = j
        return WeylElement(tuple(inv))

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return WeylElement(tuple(self.perm[other.perm[j]] for j in range(len(self.perm))))

    def apply_root(self, root: tuple[int, int]) -> tuple[int, int]:
        """Image of the root e_k - e_m; may come out negative (k > m)."""
        return (self.perm[root[0]], self.perm[root[1]])

    def __eq__(self, other):
        return isinstance(other, WeylElement) and self.perm == other.perm

    def __hash__(self):
        return hash(self.perm)

    def __repr__(self):
        return f"W{self.perm}"


def _simple_root_reflect(i: int, root: tuple[int, int]) -> tuple[int, int]:
    swap = {i: i + 1, i + 1: i}
    return (swap.get(root[0], root[0]), swap.get(root[1], root[1]))


@dataclass(frozen=True)
class RootDatum:
    """Root system data for SL_n with the fixed longest word."""

    n: int
    r: int
    positive_roots: tuple[tuple[int, int], ...]
    w0_word: tuple[int, ...]
    beta_seq: tuple[tuple[int, int], ...]
    w0_perm: tuple[int, ...]

    def beta(self, i: int) -> tuple[int, int]:
        """beta_i for 1 <= i <= r."""
        return self.beta_seq[i - 1]

    @property
    def w0(self) -> WeylElement:
        return WeylElement(self.w0_perm, self.w0_word)


@lru_cache(maxsize=None)
def root_datum(n: int) -> RootDatum:
    if n < 2:
        raise ValueError("need n >= 2")
    pos = tuple((k, m) for k in range(n) for m in range(k + 1, n))
    r = n * (n - 1) // 2
    word: list[int] = []
    for blk in range(1, n):
        word.extend(range(blk - 1, -1, -1))
    word_t = tuple(word)
    # alpha_j is the j-th letter counted from the right end of the word
    betas = []
    for j in range(1, r + 1):
        root = (word_t[r - j], word_t[r - j] + 1)
        for t in range(j - 1, 0, -1):
            root = _simple_root_reflect(word_t[r - t], root)
        if root[0] > root[1]:
            raise RuntimeError("non-reduced longest word: negative beta")
        betas.append(root)
    betas_t = tuple(betas)
    if betas_t != pos:
        raise RuntimeError("beta sequence is not the lex-ordered positive roots")
    w0_perm = tuple(range(n - 1, -1, -1))
    if WeylElement.from_word(n, word_t).perm != w0_perm:
        raise RuntimeError("fixed word does not multiply to the longest element")
    return RootDatum(n, r, pos, word_t, betas_t, w0_perm)


# ---------------------------------------------------------------------------
# matrices


class GroupElement:
    """An n x n determinant-one matrix over a tower level.

    Entries are stored as integer values at a common level, row-major; the
    constructor projects to the minimal level containing every entry, so
    equality and hashing are canonical across construction paths.
    """

    __slots__ = ("tower", "n", "level", "vals", "_hash")

    def __init__(self, tower: FieldTower, n: int, level: int, vals: tuple[int, ...]):
        minlev = 1
        pairs = [tower.minlevel_val(level, v) for v in vals]
        for a, _ in pairs:
            minlev = math.lcm(minlev, a)
        if minlev != level:
            vals = tuple(
                tower.embed_val(a, minlev, v) for a, v in pairs
            )
            level = minlev
        self.tower = tower
        self.n = n
        self.level = level
        self.vals = vals
        self._hash = hash((n, level, vals))

    @classmethod
    def identity(cls, tower: FieldTower, n: int) -> "GroupElement":
        vals = tuple(1 if i == j else 0 for i in range(n) for j in range(n))
        return cls(tower, n, 1, vals)

    @classmethod
    def from_entries(cls, tower: FieldTower, entries) -> "GroupElement":
        n = len(entries)
        lev = 1
        for row in entries:
            for x in row:
                lev = math.lcm(lev, x.level)
        vals = tuple(tower.embed_val(x.level, lev, x.val) for row in entries for x in row)
        return cls(tower, n, lev, vals)

    def entry(self, i: int, j: int) -> FieldElement:
        return FieldElement(self.tower, self.level, self.vals[i * self.n + j])

    def rows(self):
        n = self.n
        return [list(self.vals[i * n : (i + 1) * n]) for i in range(n)]

    def at_level(self, b: int) -> tuple[int, ...]:
        if b == self.level:
            return self.vals
        return tuple(self.tower.embed_val(self.level, b, v) for v in self.vals)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if other.tower is not self.tower or other.n != self.n:
            raise ValueError("mismatched matrices")
        n = self.n
        c = math.lcm(self.level, other.level)
        lev = self.tower.level(c)
        a, b = self.at_level(c), other.at_level(c)
        out = [0] * (n * n)
        for i in range(n):
            for j in range(n):
                acc = 0
                for k in range(n):
                    acc = lev.add(acc, lev.mul(a[i * n + k], b[k * n + j]))
                out[i * n + j] = acc
        return GroupElement(self.tower, n, c, tuple(out))

    def inverse(self) -> "GroupElement":
        n = self.n
        lev = self.tower.level(self.level)
        m = [list(self.vals[i * n : (i + 1) * n]) + [1 if i == j else 0 for j in range(n)] for i in range(n)]
        for col in range(n):
            piv = next((i for i in range(col, n) if m[i][col] != 0), None)
            if piv is None:
                raise ValueError("singular matrix")
            m[col], m[piv] = m[piv], m[col]
            inv_p = lev.inv(m[col][col])
            m[col] = [lev.mul(inv_p, x) for x in m[col]]
            for i in range(n):
                if i != col and m[i][col] != 0:
                    f = m[i][col]
                    m[i] = [lev.sub(x, lev.mul(f, y)) for x, y in zip(m[i], m[col])]
        vals = tuple(m[i][n + j] for i in range(n) for j in range(n))
        return GroupElement(self.tower, n, self.level, vals)

    def det(self) -> FieldElement:
        n = self.n
        lev = self.tower.level(self.level)
        m = self.rows()
        det, swaps = 1, 0
        for col in range(n):
            piv = next((i for i in range(col, n) if m[i][col] != 0), None)
            if piv is None:
                return FieldElement(self.tower, self.level, 0)
            if piv != col:
                m[col], m[piv] = m[piv], m[col]
                swaps += 1
            det = lev.mul(det, m[col][col])
            inv_p = lev.inv(m[col][col])
            for i in range(col + 1, n):
                if m[i][col] != 0:
                    f = lev.mul(inv_p, m[i][col])
                    m[i] = [lev.sub(x, lev.mul(f, y)) for x, y in zip(m[i], m[col])]
        if swaps % 2:
            det = lev.neg(det)
        return FieldElement(self.tower, self.level, det)

    def is_identity(self) -> bool:
        return self == GroupElement.identity(self.tower, self.n)

    def is_upper_unitriangular(self) -> bool:
        n = self.n
        for i in range(n):
            for j in range(n):
                v = self.vals[i * n + j]
                if i == j and v != 1:
                    return False
                if i > j and v != 0:
                    return False
        return True

    def is_diagonal(self) -> bool:
        n = self.n
        return all(self.vals[i * n + j] == 0 for i in range(n) for j in range(n) if i != j)

    def __eq__(self, other):
        return (
            isinstance(other, GroupElement)
            and self.n == other.n
            and self.level == other.level
            and self.vals == other.vals
        )

    def __hash__(self):
        return self._hash

    def sort_key(self):
        return (self.level, self.vals)

    def __repr__(self):
        return f"GroupElement(n={self.n}, level={self.level}, vals={self.vals})"


# ---------------------------------------------------------------------------
# constructors


def _as_element(tower: FieldTower, c) -> FieldElement:
    if isinstance(c, FieldElement):
        return c
    return tower.element(int(c) % tower.level(1).size, 1)


def eps(tower: FieldTower, n: int, root: tuple[int, int], c) -> GroupElement:
    """One-parameter root subgroup element: identity plus c in entry root."""
    k, m = root
    if k == m:
        raise ValueError("invalid root: equal indices")
    if not (0 <= k < n and 0 <= m < n):
        raise ValueError("root indices out of range")
    ce = _as_element(tower, c)
    vals = [0] * (n * n)
    for i in range(n):
        vals[i * n + i] = 1
    g = GroupElement(tower, n, 1, tuple(vals))
    if ce.is_zero():
        return g
    vals = [tower.embed_val(1, ce.level, v) for v in g.vals]
    vals[k * n + m] = ce.val
    return GroupElement(tower, n, ce.level, tuple(vals))


def simple_rep(tower: FieldTower, n: int, i: int) -> GroupElement:
    """Signed permutation representative of s_i: block (0 1; -1 0)."""
    lev1 = tower.level(1)
    vals = [0] * (n * n)
    for t in range(n):
        vals[t * n + t] = 1
    vals[i * n + i] = 0
    vals[(i + 1) * n + (i + 1)] = 0
    vals[i * n + (i + 1)] = 1
    vals[(i + 1) * n + i] = lev1.neg(1)
    return GroupElement(tower, n, 1, tuple(vals))


def weyl_rep(tower: FieldTower, n: int, w) -> GroupElement:
    """Product of the fixed simple representatives along w's reduced word."""
    word = w.word if isinstance(w, WeylElement) else tuple(w)
    g = GroupElement.identity(tower, n)
    for i in word:
        g = g * simple_rep(tower, n, i)
    return g


def perm_matrix(tower: FieldTower, n: int, perm: tuple[int, ...]) -> GroupElement:
    """Unsigned permutation matrix (not determinant-normalized)."""
    vals = [0] * (n * n)
    for j in range(n):
        vals[perm[j] * n + j] = 1
    return GroupElement(tower, n, 1, tuple(vals))


def diag(tower: FieldTower, entries) -> GroupElement:
    n = len(entries)
    lev = 1
    elems = [e for e in entries]
    for e in elems:
        lev = math.lcm(lev, e.level)
    vals = [0] * (n * n)
    for i, e in enumerate(elems):
        vals[i * n + i] = tower.embed_val(e.level, lev, e.val)
    return GroupElement(tower, n, lev, tuple(vals))


def root_value(g: GroupElement, root: tuple[int, int]) -> FieldElement:
    """Evaluate the character e_k - e_m on a diagonal matrix."""
    k, m = root
    return g.entry(k, k) * g.entry(m, m).inverse()


def torus_for_root_value(tower: FieldTower, n: int, root: tuple[int, int], c: FieldElement) -> GroupElement:
    """A determinant-one diagonal t with root(t) = c.

    For n >= 3 the inverse entry is parked at the smallest unused index and
    all entries stay at c's level.  For n = 2 the torus character is a
    square, so a square root of c is used; it lives at c's minimal level
    when c is a square there, else at the doubled level.
    """
    if c.is_zero():
        raise ValueError("invalid character value: zero")
    k, m = root
    if n >= 3:
        j = next(t for t in range(n) if t not in (k, m))
        entries = [tower.one() for _ in range(n)]
        entries[k] = c
        entries[j] = c.inverse()
        return diag(tower, entries)
    d = tower.sqrt_element(c)
    if k == 0 and m == 1:
        return diag(tower, [d, d.inverse()])
    return diag(tower, [d.inverse(), d])


# ---------------------------------------------------------------------------
# Bruhat decomposition


def _column_reduce(g: GroupElement) -> tuple[tuple[int, ...], list[list[int]]]:
    """Canonical column reduction of g under right multiplication by B.

    Returns (sigma, M) where column j of M has pivot 1 at row sigma(j),
    zeros below it and at rows sigma(j') for j' < j, and the remaining free
    entries are the canonical coordinates of the coset gB in its cell.
    """
    n = g.n
    lev = g.tower.level(g.level)
    m = g.rows()
    sigma = [-1] * n
    pivots: list[tuple[int, int]] = []  # (row, col), appended in col order
    for j in range(n):
        # clear entries of column j at already-used pivot rows, bottom-up
        for (pi, pj) in sorted(pivots, key=lambda t: -t[0]):
            c = m[pi][j]
            if c:
                for i in range(n):
                    if m[i][pj]:
                        m[i][j] = lev.sub(m[i][j], lev.mul(c, m[i][pj]))
        piv_row = max((i for i in range(n) if m[i][j] != 0), default=-1)
        if piv_row < 0:
            raise ValueError("singular matrix has no Bruhat cell")
        inv_p = lev.inv(m[piv_row][j])
        for i in range(n):
            if m[i][j]:
                m[i][j] = lev.mul(m[i][j], inv_p)
        sigma[j] = piv_row
        pivots.append((piv_row, j))
    return tuple(sigma), m


def cell_of(g: GroupElement) -> WeylElement:
    """The Weyl group element indexing g's Bruhat cell."""
    sigma, _ = _column_reduce(g)
    return WeylElement(sigma)


def canonical_coset(g: GroupElement) -> tuple[WeylElement, tuple[FieldElement, ...], GroupElement]:
    """Canonical data of the coset gB.

    Returns (w, coords, y) with gB = y n_w B, where y is upper unitriangular
    supported on the roots sent negative by w^{-1} and coords lists y's
    entries at those roots in lexicographic order.  coords has length l(w).
    """
    sigma, m = _column_reduce(g)
    n = g.n
    tower = g.tower
    sig_inv = [0] * n
    for j in range(n):
        sig_inv[sigma[j]] = j
    free_positions = sorted(
        (sigma[j2], sigma[j1])
        for j1 in range(n)
        for j2 in range(j1 + 1, n)
        if sigma[j2] < sigma[j1]
    )
    coords = tuple(FieldElement(tower, g.level, m[k][sig_inv[mm]]) for (k, mm) in free_positions)
    yvals = [0] * (n * n)
    for i in range(n):
        yvals[i * n + i] = 1
    y = GroupElement(tower, n, 1, tuple(yvals))
    if coords:
        lev = g.level
        yv = [tower.embed_val(1, lev, v) for v in y.vals]
        for (k, mm), c in zip(free_positions, coords):
            yv[k * n + mm] = tower.embed_val(c.level, lev, c.val)
        y = GroupElement(tower, n, lev, tuple(yv))
    return WeylElement(tuple(sigma)), coords, y


@dataclass(frozen=True)
class BruhatDecomposition:
    u_prime: GroupElement
    w: WeylElement
    t: GroupElement
    u: GroupElement


def bruhat_decompose(g: GroupElement) -> BruhatDecomposition:
    """Exact normal form g = u' n_w t u.

    u' is the canonical unipotent part of the coset gB (supported on the
    l(w) roots sent negative by w^{-1}), n_w the fixed representative, t
    diagonal and u upper unitriangular.  Recomposition reproduces g.
    """
    one = g.tower.one()
    if g.det() != one:
        raise ValueError("invalid element: determinant is not 1")
    w, _, y = canonical_coset(g)
    n_w = weyl_rep(g.tower, g.n, w)
    rest = n_w.inverse() * (y.inverse() * g)
    n = g.n
    t_entries = [rest.entry(i, i) for i in range(n)]
    if any(e.is_zero() for e in t_entries):
        raise RuntimeError("Bruhat residue is not triangular")
    t = diag(g.tower, t_entries)
    u = t.inverse() * rest
    if not u.is_upper_unitriangular():
        raise RuntimeError("Bruhat residue is not unipotent")
    return BruhatDecomposition(y, w, t, u)


# ---------------------------------------------------------------------------
# enumerations


def unipotent_from_key(tower: FieldTower, n: int, key: tuple[FieldElement, ...]) -> GroupElement:
    """The unipotent with coordinate tuple (c_r, ..., c_1).

    Entry beta_j receives c_j; for the fixed longest word that is just the
    identity plus the given entries.
    """
    rd = root_datum(n)
    lev = 1
    for c in key:
        lev = math.lcm(lev, c.level)
    vals = [0] * (n * n)
    for i in range(n):
        vals[i * n + i] = tower.embed_val(1, lev, 1)
    for t, c in enumerate(key):
        k, m = rd.beta_seq[rd.r - 1 - t]
        vals[k * n + m] = tower.embed_val(c.level, lev, c.val)
    return GroupElement(tower, n, lev, tuple(vals))


def unipotent_key(g: GroupElement) -> tuple[FieldElement, ...]:
    """Coordinate tuple (c_r, ..., c_1) of an upper unitriangular matrix."""
    rd = root_datum(g.n)
    return tuple(g.entry(*rd.beta_seq[rd.r - 1 - t]) for t in range(rd.r))


def enumerate_U(tower: FieldTower, n: int, a: int) -> list[GroupElement]:
    """All q^{a r} unipotent elements, coordinates (c_r, ..., c_1) in
    lexicographic order over the level-a enumeration."""
    rd = root_datum(n)
    field = tower.enumerate_level(a)
    return [unipotent_from_key(tower, n, key) for key in itertools.product(field, repeat=rd.r)]


def enumerate_X(tower: FieldTower, n: int, i: int, b: int) -> list[GroupElement]:
    """The subgroup X_i at level b: products over the roots beta_r ... beta_i."""
    rd = root_datum(n)
    if not 1 <= i <= rd.r:
        raise ValueError(f"index i must be in 1..{rd.r}")
    field = tower.enumerate_level(b)
    zero = tower.zero()
    out = []
    for partial in itertools.product(field, repeat=rd.r - i + 1):
        key = partial + (zero,) * (i - 1)
        out.append(unipotent_from_key(tower, n, key))
    return out


def enumerate_T(tower: FieldTower, n: int, a: int) -> list[GroupElement]:
    """All determinant-one diagonal matrices at level a."""
    units = [e for e in tower.enumerate_level(a) if not e.is_zero()]
    out = []
    for head in itertools.product(units, repeat=n - 1):
        prod = tower.one(a)
        for e in head:
            prod = prod * e
        out.append(diag(tower, list(head) + [prod.inverse()]))
    return out


def enumerate_B(tower: FieldTower, n: int, a: int) -> list[GroupElement]:
    return [t * u for t in enumerate_T(tower, n, a) for u in enumerate_U(tower, n, a)]


def sl_order(n: int, q_level: int) -> int:
    """|SL_n(F_Q)| for Q = q^a."""
    out = q_level ** (n * (n - 1) // 2)
    for m in range(2, n + 1):
        out *= q_level**m - 1
    return out


def enumerate_SL(tower: FieldTower, n: int, a: int, cap: int = 300_000) -> list[GroupElement]:
    """Brute-force enumeration of SL_n(F_{q^a}); guarded by a search cap."""
    size = tower.level(a).size
    if size ** (n * n) > cap:
        raise ValueError("enumeration space too large; use sampling")
    one = tower.one()
    out = []
    for vals in itertools.product(range(size), repeat=n * n):
        g = GroupElement(tower, n, a, vals)
        if g.det() == one:
            out.append(g)
    return out


def sl_generators(tower: FieldTower, n: int, a: int) -> list[GroupElement]:
    """Root-subgroup generators of SL_n(F_{q^a}): simple roots, both signs,
    over a GF(p)-basis of the level."""
    lev = tower.level(a)
    basis = [FieldElement(tower, a, lev.exp[k % (lev.size - 1)]) for k in range(lev.m)]
    if lev.size == 2:
        basis = [tower.one(a)]
    gens = []
    for i in range(n - 1):
        for c in basis:
            gens.append(eps(tower, n, (i, i + 1), c))
            gens.append(eps(tower, n, (i + 1, i), c))
    return gens


def random_sl_element(tower: FieldTower, n: int, a: int, rng, word_length: int = 20) -> GroupElement:
    """Seeded random element as a product of random root elements."""
    rd = root_datum(n)
    size = tower.level(a).size
    g = GroupElement.identity(tower, n)
    for _ in range(word_length):
        k, m = rd.positive_roots[rng.randrange(rd.r)]
        if rng.randrange(2):
            k, m = m, k
        c = FieldElement(tower, a, rng.randrange(size))
        g = g * eps(tower, n, (k, m), c)
    return g
