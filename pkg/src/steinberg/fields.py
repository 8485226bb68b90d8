"""Compatible towers of finite fields F_q ⊆ F_{q^2} ⊆ F_{q^4} ⊆ ...

A tower is anchored at q = p^d.  Level a is the field F_{q^a}, realized as
GF(p)[x]/(f_{d*a}) for a deterministic defining polynomial f_m of degree
m = d*a.  Polynomials are chosen as the least monic primitive polynomial
(candidates ordered by the base-p integer encoding of their non-leading
coefficients, constant term in the least significant digit) that is
norm-compatible with every proper divisor degree already forced by the
recursion: f_{m'}(x^{(p^m-1)/(p^{m'}-1)}) = 0 (mod f_m) for all m' | m.
The compatibility constraint makes the canonical embedding

    embed_{a -> b}:  x_a  |->  x_b ^ ((p^{d*b}-1)/(p^{d*a}-1))

a field homomorphism for every a | b, and such embeddings compose exactly
along any divisor chain.  The unconstrained least primitive polynomial
would not admit composing embeddings, so the constraint is part of the
canonical tower, not an optimization.

Elements are (level, val) pairs where val encodes the coordinate vector
over GF(p) in base p, least significant digit first.  Levels keep full
exp/log tables with respect to the residue class of x, which is a
generator of the multiplicative group by primitivity.

Levels are immutable once built; construction is serialized behind a lock
so concurrent readers are safe.  FieldElement is value-semantic.
"""

from __future__ import annotations

import math
import threading
from functools import lru_cache

from .errors import LevelError

# Largest field a level may hold.  Everything in this package is meant to
# run at desk scale; the cap turns runaway level requests into clean errors.
MAX_LEVEL_SIZE = 1 << 16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division (desk-scale inputs)."""
    out: dict[int, int] = {}
    f = 2
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    ds = [1]
    for p, e in factorize(n).items():
        ds = [d * p**k for d in ds for k in range(e + 1)]
    return sorted(ds)


# ---------------------------------------------------------------------------
# polynomial helpers over GF(p); a polynomial is a tuple of ints, ascending
# degree, no trailing zeros (except the zero polynomial ()).


def _poly_trim(c: list[int]) -> tuple[int, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _poly_mulmod(a, b, f, p):
    m = len(f) - 1
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    # reduce by the monic f
    for i in range(len(out) - 1, m - 1, -1):
        c = out[i]
        if c:
            out[i] = 0
            for j in range(m):
                out[i - m + j] = (out[i - m + j] - c * f[j]) % p
    return _poly_trim(out[:m] if len(out) > m else out)


def _poly_powmod(base, e, f, p):
    acc = (1,)
    b = base
    while e:
        if e & 1:
            acc = _poly_mulmod(acc, b, f, p)
        b = _poly_mulmod(b, b, f, p)
        e >>= 1
    return acc


def _x_has_full_order(f, p, m) -> bool:
    """True iff x generates a cyclic group of order p^m - 1 mod f.

    That forces GF(p)[x]/(f) to be a field, so it also certifies f
    irreducible and primitive in one test.
    """
    if len(f) < 2 or f[0] == 0:
        return False
    order = p**m - 1
    x = (0, 1)
    if _poly_powmod(x, order, f, p) != (1,):
        return False
    for s in factorize(order):
        if _poly_powmod(x, order // s, f, p) == (1,):
            return False
    return True


def _poly_eval_mod(f_sub, y, f, p):
    """Evaluate f_sub at y in GF(p)[x]/(f), by Horner."""
    acc: tuple[int, ...] = ()
    for c in reversed(f_sub):
        acc = _poly_mulmod(acc, y, f, p)
        if c:
            lst = list(acc) if acc else [0]
            lst[0] = (lst[0] + c) % p
            acc = _poly_trim(lst)
    return acc


@lru_cache(maxsize=None)
def defining_polynomial(p: int, m: int) -> tuple[int, ...]:
    """The canonical degree-m defining polynomial over GF(p).

    Least monic primitive polynomial (in the deterministic candidate order
    described in the module docstring) compatible with the canonical
    polynomials of all proper divisor degrees.
    """
    subs = [(m2, defining_polynomial(p, m2)) for m2 in divisors(m) if m2 < m]
    for enc in range(p**m):
        coeffs, v = [], enc
        for _ in range(m):
            coeffs.append(v % p)
            v //= p
        f = tuple(coeffs) + (1,)
        if f[0] == 0:
            continue
        if not _x_has_full_order(f, p, m):
            continue
        n_full = p**m - 1
        ok = True
        for m2, f2 in subs:
            y = _poly_powmod((0, 1), n_full // (p**m2 - 1), f, p)
            if _poly_eval_mod(f2, y, f, p) != ():
                ok = False
                break
        if ok:
            return f
    raise RuntimeError(f"no compatible primitive polynomial of degree {m} over GF({p})")


# ---------------------------------------------------------------------------


class _Level:
    """Arithmetic tables for one tower level; values are ints in [0, size)."""

    __slots__ = ("a", "m", "p", "size", "poly", "exp", "log", "digits", "_powers")

    def __init__(self, p: int, d: int, a: int):
        m = d * a
        size = p**m
        if size > MAX_LEVEL_SIZE:
            raise LevelError(f"level {a} would need GF({p}^{m}); beyond the desk-scale cap")
        self.a, self.m, self.p, self.size = a, m, p, size
        self.poly = defining_polynomial(p, m)
        self._powers = [p**i for i in range(m)]
        # digit decompositions, least significant first
        digits = []
        for v in range(size):
            row, t = [], v
            for _ in range(m):
                row.append(t % p)
                t //= p
            digits.append(tuple(row))
        self.digits = digits
        # exp/log with respect to the residue class of x (primitive)
        exp = [0] * (size - 1)
        log = [-1] * size
        cur = [0] * m
        cur[0] = 1
        for k in range(size - 1):
            v = sum(c * self._powers[i] for i, c in enumerate(cur))
            exp[k] = v
            log[v] = k if log[v] == -1 else log[v]
            # multiply cur by x and reduce
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                for i in range(m):
                    cur[i] = (cur[i] - top * self.poly[i]) % p
        if sorted(exp) != list(range(1, size)):
            raise RuntimeError("exp table is not a bijection; defining polynomial not primitive?")
        self.exp, self.log = exp, log

    def add(self, u: int, v: int) -> int:
        if self.p == 2:
            return u ^ v
        du, dv, pw = self.digits[u], self.digits[v], self._powers
        p = self.p
        return sum(((du[i] + dv[i]) % p) * pw[i] for i in range(self.m))

    def neg(self, u: int) -> int:
        if self.p == 2:
            return u
        du, pw, p = self.digits[u], self._powers, self.p
        return sum(((-du[i]) % p) * pw[i] for i in range(self.m))

    def sub(self, u: int, v: int) -> int:
        if self.p == 2:
            return u ^ v
        return self.add(u, self.neg(v))

    def mul(self, u: int, v: int) -> int:
        if u == 0 or v == 0:
            return 0
        return self.exp[(self.log[u] + self.log[v]) % (self.size - 1)]

    def inv(self, u: int) -> int:
        if u == 0:
            raise ZeroDivisionError("inverse of zero field element")
        return self.exp[(-self.log[u]) % (self.size - 1)]

    def pow(self, u: int, e: int) -> int:
        if u == 0:
            if e < 0:
                raise ZeroDivisionError("inverse of zero field element")
            return 0 if e else 1
        return self.exp[(self.log[u] * e) % (self.size - 1)]


class FieldElement:
    """An element of F_{q^a} inside a tower; value-semantic.

    Equality and hashing are level-insensitive: elements that agree after
    projection to their minimal level compare equal, so they can serve as
    canonical dictionary keys.
    """

    __slots__ = ("tower", "level", "val", "_norm")

    def __init__(self, tower: "FieldTower", level: int, val: int):
        self.tower = tower
        self.level = level
        self.val = val
        self._norm = None

    # -- canonical form ----------------------------------------------------
    def norm_pair(self) -> tuple[int, int]:
        """(minimal level, value there); cached."""
        if self._norm is None:
            self._norm = self.tower.minlevel_val(self.level, self.val)
        return self._norm

    def normalized(self) -> "FieldElement":
        a, v = self.norm_pair()
        if a == self.level:
            return self
        return FieldElement(self.tower, a, v)

    def minlevel(self) -> int:
        return self.norm_pair()[0]

    @property
    def coords(self) -> tuple[int, ...]:
        return self.tower.level(self.level).digits[self.val]

    def is_zero(self) -> bool:
        return self.val == 0

    # -- arithmetic ---------------------------------------------------------
    def _pair(self, other: "FieldElement") -> tuple[_Level, int, int]:
        if self.level == other.level:
            return self.tower.level(self.level), self.val, other.val
        c = math.lcm(self.level, other.level)
        return (
            self.tower.level(c),
            self.tower.embed_val(self.level, c, self.val),
            self.tower.embed_val(other.level, c, other.val),
        )

    def __add__(self, other):
        lev, u, v = self._pair(other)
        return FieldElement(self.tower, lev.a, lev.add(u, v))

    def __sub__(self, other):
        lev, u, v = self._pair(other)
        return FieldElement(self.tower, lev.a, lev.sub(u, v))

    def __mul__(self, other):
        lev, u, v = self._pair(other)
        return FieldElement(self.tower, lev.a, lev.mul(u, v))

    def __neg__(self):
        return FieldElement(self.tower, self.level, self.tower.level(self.level).neg(self.val))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.tower, self.level, self.tower.level(self.level).inv(self.val))

    def __pow__(self, e: int):
        return FieldElement(self.tower, self.level, self.tower.level(self.level).pow(self.val, e))

    def embed_to(self, b: int) -> "FieldElement":
        return self.tower.embed(self, b)

    # -- comparisons ---------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        if self.tower.p != other.tower.p or self.tower.d != other.tower.d:
            return False
        if self.level == other.level:
            return self.val == other.val
        return self.norm_pair() == other.norm_pair()

    def __hash__(self):
        return hash(self.norm_pair())

    def __repr__(self):
        return f"F({self.tower.p}^{self.tower.d * self.level})[{self.val}]"


class FieldTower:
    """A compatible tower of extensions of F_q, q = p^d.

    Levels are created lazily and cached; creation is serialized behind a
    lock (single-writer), after which a level is immutable and safe to read
    concurrently.
    """

    def __init__(self, p: int, d: int = 1):
        if not is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if d < 1:
            raise ValueError("base degree d must be >= 1")
        self.p = p
        self.d = d
        self.q = p**d
        self._levels: dict[int, _Level] = {}
        self._embeds: dict[tuple[int, int], tuple[list[int], dict[int, int]]] = {}
        self._lock = threading.RLock()
        self.level(1)

    # -- levels and embeddings ----------------------------------------------
    def level(self, a: int) -> _Level:
        if a < 1:
            raise LevelError(f"level must be >= 1, got {a}")
        lev = self._levels.get(a)
        if lev is None:
            with self._lock:
                lev = self._levels.get(a)
                if lev is None:
                    lev = _Level(self.p, self.d, a)
                    self._levels[a] = lev
        return lev

    def _embed_tables(self, a: int, b: int) -> tuple[list[int], dict[int, int]]:
        key = (a, b)
        tab = self._embeds.get(key)
        if tab is None:
            with self._lock:
                tab = self._embeds.get(key)
                if tab is None:
                    la, lb = self.level(a), self.level(b)
                    n_exp = (lb.size - 1) // (la.size - 1)
                    rho = lb.exp[n_exp % (lb.size - 1)]
                    # rho must be a root of the level-a polynomial; this is
                    # what the compatibility constraint on polynomials buys.
                    acc = 0
                    for c in reversed(la.poly):
                        acc = lb.add(lb.mul(acc, rho), c % self.p)
                    if acc != 0:
                        raise RuntimeError("tower polynomials are not embedding-compatible")
                    fwd = [0] * la.size
                    for v in range(la.size):
                        img = 0
                        for c in reversed(la.digits[v]):
                            img = lb.add(lb.mul(img, rho), c)
                        fwd[v] = img
                    rev = {img: v for v, img in enumerate(fwd)}
                    if len(rev) != la.size:
                        raise RuntimeError("embedding is not injective")
                    tab = (fwd, rev)
                    self._embeds[key] = tab
        return tab

    def embed_val(self, a: int, b: int, val: int) -> int:
        if a == b:
            return val
        if b % a != 0:
            raise LevelError(f"level {a} does not divide level {b}")
        return self._embed_tables(a, b)[0][val]

    def embed(self, x: FieldElement, b: int) -> FieldElement:
        """The canonical embedding F_{q^a} -> F_{q^b}; requires a | b."""
        return FieldElement(self, b, self.embed_val(x.level, b, x.val))

    def minlevel_val(self, level: int, val: int) -> tuple[int, int]:
        """Project to the smallest divisor level containing the element."""
        if val == 0:
            return (1, 0)
        if val == 1:
            return (1, 1)
        lev = self.level(level)
        lg = lev.log[val]
        ordx = (lev.size - 1) // math.gcd(lg, lev.size - 1)
        for a in divisors(level):
            if (self.p ** (self.d * a) - 1) % ordx == 0:
                if a == level:
                    return (level, val)
                return (a, self._embed_tables(a, level)[1][val])
        raise RuntimeError("unreachable: element order divides no sublevel order")

    # -- element constructors -------------------------------------------------
    def element(self, val: int, a: int = 1) -> FieldElement:
        lev = self.level(a)
        if not 0 <= val < lev.size:
            raise ValueError(f"value {val} out of range for level {a}")
        return FieldElement(self, a, val)

    def zero(self, a: int = 1) -> FieldElement:
        return FieldElement(self, a, 0)

    def one(self, a: int = 1) -> FieldElement:
        return FieldElement(self, a, 1)

    def gen(self, a: int) -> FieldElement:
        """The canonical multiplicative generator of level a (class of x)."""
        lev = self.level(a)
        return FieldElement(self, a, lev.exp[1] if lev.size > 2 else 1)

    # -- enumeration ----------------------------------------------------------
    def enumerate_level(self, a: int) -> list[FieldElement]:
        """All q^a elements of F_{q^a}, zero first, deterministic order."""
        lev = self.level(a)
        return [FieldElement(self, a, v) for v in range(lev.size)]

    def mult_coset_reps(self, a: int) -> list[FieldElement]:
        """Representatives of the cosets of F_{q^a}^* in F_{q^{2a}}^*.

        Consecutive powers g^0, g^1, ..., g^{q^a} of the canonical level-2a
        generator: the subgroup is generated by g^{q^a + 1}, so exponent
        differences below q^a + 1 never land in it, and the q^a + 1 powers
        cover every coset.
        """
        lev2 = self.level(2 * a)
        count = self.q**a + 1
        return [FieldElement(self, 2 * a, lev2.exp[j % (lev2.size - 1)]) for j in range(count)]

    def sqrt_element(self, c: FieldElement) -> FieldElement:
        """A deterministic square root of c, at c's minimal level when it is
        a square there, else at the doubled level (always possible)."""
        if c.is_zero():
            return self.zero()
        a, v = c.norm_pair()
        lev = self.level(a)
        lg = lev.log[v]
        if self.p == 2:
            half = (lg * ((lev.size) // 2)) % (lev.size - 1)
            return FieldElement(self, a, lev.exp[half])
        if lg % 2 == 0:
            return FieldElement(self, a, lev.exp[lg // 2])
        lev2 = self.level(2 * a)
        lg2 = lg * ((lev2.size - 1) // (lev.size - 1))
        if lg2 % 2 != 0:
            raise ValueError("element is not a square at the doubled level")
        return FieldElement(self, 2 * a, lev2.exp[(lg2 // 2) % (lev2.size - 1)])

    def __repr__(self):
        return f"FieldTower(p={self.p}, d={self.d})"


def make_tower(p: int, d: int = 1) -> FieldTower:
    """Create the canonical tower anchored at q = p^d."""
    return FieldTower(p, d)
