"""The induced module on Borel cosets over GF(ell), and its Steinberg basis.

An MVector is a sparse vector indexed by canonical coset labels (Bruhat
cell plus the l(w) free coordinates of the cell's Schubert chart).  The
group acts by permuting labels.  Vectors supported on unipotent translates
of the alternating generator eta admit Steinberg coordinates: the
coefficient of z*eta is read off the big-cell label of z*n_{w0}, whose
chart coordinates are exactly z's entries; the readout is validated by
re-synthesis rather than trusted.

Scalars are ints in [0, ell); all reductions are eager.  Vectors are
value-semantic, operations pure.
"""

from __future__ import annotations

import math
from .errors import NotInSteinbergError
from .fields import FieldElement, FieldTower, is_prime
from .group import (
    GroupElement,
    WeylElement,
    canonical_coset,
    root_datum,
    unipotent_from_key,
    weyl_rep,
)


class CosetLabel:
    """Canonical label of a coset gB: the cell w and the chart coordinates
    along the roots sent negative by w^{-1}, in lexicographic order."""

    __slots__ = ("cell", "coords", "_hash")

    def __init__(self, cell: WeylElement, coords: tuple[FieldElement, ...]):
        self.cell = cell
        self.coords = coords
        self._hash = hash((cell.perm, coords))

    @property
    def level(self) -> int:
        out = 1
        for c in self.coords:
            out = math.lcm(out, c.minlevel())
        return out

    def sort_key(self):
        return (self.cell.perm, tuple(c.norm_pair() for c in self.coords))

    def __eq__(self, other):
        return (
            isinstance(other, CosetLabel)
            and self.cell.perm == other.cell.perm
            and self.coords == other.coords
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"[{self.cell.perm}|{','.join(str(c.norm_pair()) for c in self.coords)}]"


class MVector:
    """Sparse module vector: finite map from coset labels to nonzero scalars."""

    __slots__ = ("ell", "terms")

    def __init__(self, ell: int, terms: dict | None = None):
        self.ell = ell
        self.terms = {k: v % ell for k, v in (terms or {}).items() if v % ell}

    def copy(self) -> "MVector":
        out = MVector(self.ell)
        out.terms = dict(self.terms)
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def scale(self, c: int) -> "MVector":
        c %= self.ell
        return MVector(self.ell, {k: (v * c) % self.ell for k, v in self.terms.items()})

    def add(self, other: "MVector") -> "MVector":
        out = dict(self.terms)
        for k, v in other.terms.items():
            w = (out.get(k, 0) + v) % self.ell
            if w:
                out[k] = w
            else:
                out.pop(k, None)
        res = MVector(self.ell)
        res.terms = out
        return res

    def sub(self, other: "MVector") -> "MVector":
        return self.add(other.scale(self.ell - 1))

    def support(self) -> list[CosetLabel]:
        return sorted(self.terms, key=lambda lb: lb.sort_key())

    def __eq__(self, other):
        return isinstance(other, MVector) and self.ell == other.ell and self.terms == other.terms

    def __repr__(self):
        return f"MVector(ell={self.ell}, {len(self.terms)} terms)"


class StVector:
    """Sparse vector in Steinberg coordinates, keyed by unipotent
    coordinate tuples (c_r, ..., c_1); represents the sum of c_z * (z eta)."""

    __slots__ = ("ell", "terms")

    def __init__(self, ell: int, terms: dict | None = None):
        self.ell = ell
        self.terms = {k: v % ell for k, v in (terms or {}).items() if v % ell}

    def is_zero(self) -> bool:
        return not self.terms

    def level(self) -> int:
        out = 1
        for key in self.terms:
            for c in key:
                out = math.lcm(out, c.minlevel())
        return out

    def scale(self, c: int) -> "StVector":
        c %= self.ell
        return StVector(self.ell, {k: (v * c) % self.ell for k, v in self.terms.items()})

    def support_keys(self, at_level: int) -> list[tuple]:
        """Keys sorted by their value tuples embedded at a common level."""

        def key_fn(key):
            return tuple(c.embed_to(at_level).val for c in key)

        return sorted(self.terms, key=key_fn)

    def __eq__(self, other):
        return isinstance(other, StVector) and self.ell == other.ell and self.terms == other.terms

    def __repr__(self):
        return f"StVector(ell={self.ell}, {len(self.terms)} terms)"


class ModuleContext:
    """Bundles the tower, the rank and the coefficient prime, with caches.

    All operations are pure; the caches only memoize the label action
    (g, label) -> g.label, canonical label interning and representatives,
    which is what makes certificate replay cheap.
    """

    def __init__(self, tower: FieldTower, n: int, ell: int):
        if not is_prime(ell):
            raise ValueError(f"coefficient modulus {ell} is not prime")
        self.tower = tower
        self.n = n
        self.ell = ell
        self.rd = root_datum(n)
        self.w0 = self.rd.w0
        self._nw_cache: dict[tuple[int, ...], GroupElement] = {}
        self._label_pool: dict[CosetLabel, CosetLabel] = {}
        self._rep_cache: dict[CosetLabel, GroupElement] = {}
        self._act_cache: dict[tuple[GroupElement, CosetLabel], CosetLabel] = {}
        self._eta: MVector | None = None

    @property
    def p(self) -> int:
        return self.tower.p

    @property
    def q(self) -> int:
        return self.tower.q

    @property
    def r(self) -> int:
        return self.rd.r

    # -- scalars -------------------------------------------------------------
    def sc_inv(self, c: int) -> int:
        return pow(c, -1, self.ell)

    def sign(self, parity: int) -> int:
        return (self.ell - 1) % self.ell if parity % 2 else 1 % self.ell

    # -- labels ---------------------------------------------------------------
    def _intern(self, label: CosetLabel) -> CosetLabel:
        return self._label_pool.setdefault(label, label)

    def nw_rep(self, w: WeylElement) -> GroupElement:
        g = self._nw_cache.get(w.perm)
        if g is None:
            g = weyl_rep(self.tower, self.n, w)
            self._nw_cache[w.perm] = g
        return g

    def coset_label(self, g: GroupElement) -> CosetLabel:
        if g.det() != self.tower.one():
            raise ValueError("invalid element: determinant is not 1")
        w, coords, _ = canonical_coset(g)
        return self._intern(CosetLabel(w, coords))

    def label_rep(self, label: CosetLabel) -> GroupElement:
        """The canonical representative y * n_w of the coset."""
        g = self._rep_cache.get(label)
        if g is None:
            w = label.cell
            inv_roots = sorted(
                (w.perm[j2], w.perm[j1])
                for j1 in range(self.n)
                for j2 in range(j1 + 1, self.n)
                if w.perm[j2] < w.perm[j1]
            )
            lev = 1
            for c in label.coords:
                lev = math.lcm(lev, c.level)
            tw = self.tower
            vals = [0] * (self.n * self.n)
            for i in range(self.n):
                vals[i * self.n + i] = tw.embed_val(1, lev, 1)
            for (k, m), c in zip(inv_roots, label.coords):
                vals[k * self.n + m] = tw.embed_val(c.level, lev, c.val)
            y = GroupElement(tw, self.n, lev, tuple(vals))
            g = y * self.nw_rep(w)
            self._rep_cache[label] = g
        return g

    def act_label(self, g: GroupElement, label: CosetLabel) -> CosetLabel:
        key = (g, label)
        out = self._act_cache.get(key)
        if out is None:
            moved = g * self.label_rep(label)
            w, coords, _ = canonical_coset(moved)
            out = self._intern(CosetLabel(w, coords))
            self._act_cache[key] = out
        return out

    # -- module operations ------------------------------------------------------
    def act(self, g: GroupElement, v: MVector) -> MVector:
        out = MVector(self.ell)
        terms = out.terms
        for label, c in v.terms.items():
            terms[self.act_label(g, label)] = c
        return out

    def group_sum_apply(self, elements, v: MVector) -> MVector:
        out: dict = {}
        ell = self.ell
        for g in elements:
            for label, c in v.terms.items():
                moved = self.act_label(g, label)
                w = (out.get(moved, 0) + c) % ell
                if w:
                    out[moved] = w
                else:
                    out.pop(moved, None)
        res = MVector(ell)
        res.terms = out
        return res

    def eta(self) -> MVector:
        """Alternating sum of the Weyl cells' base points; |W| terms."""
        if self._eta is None:
            import itertools

            zero = self.tower.zero()
            terms = {}
            for perm in itertools.permutations(range(self.n)):
                w = WeylElement(perm)
                label = self._intern(CosetLabel(w, (zero,) * w.length))
                terms[label] = self.sign(w.length)
            self._eta = MVector(self.ell, terms)
        return self._eta.copy()

    # -- Steinberg coordinates ---------------------------------------------------
    def st_vector(self, terms: dict) -> StVector:
        return StVector(self.ell, terms)

    def identity_key(self) -> tuple[FieldElement, ...]:
        return (self.tower.zero(),) * self.r

    def from_steinberg(self, v: StVector) -> MVector:
        out = MVector(self.ell)
        eta = self.eta()
        for key, c in v.terms.items():
            z = unipotent_from_key(self.tower, self.n, key)
            out = out.add(self.act(z, eta).scale(c))
        return out

    def to_steinberg_coords(self, v: MVector) -> StVector:
        """Read Steinberg coordinates off the big cell and validate by
        re-synthesis; raises NotInSteinbergError when v is outside the span.

        The big-cell term of z * eta is (-1)^{l(w0)} [z n_{w0} B], so the
        coefficient of z is the big-cell coefficient times (-1)^r.
        """
        w0p = self.rd.w0_perm
        sign_r = self.sign(self.r)
        terms = {}
        for label, c in v.terms.items():
            if label.cell.perm == w0p:
                terms[tuple(reversed(label.coords))] = (c * sign_r) % self.ell
        st = StVector(self.ell, terms)
        if self.from_steinberg(st) != v:
            raise NotInSteinbergError("vector is not in the Steinberg span")
        return st

    def coeff_sum(self, v: StVector) -> int:
        return sum(v.terms.values()) % self.ell

    # -- serialization --------------------------------------------------------
    @staticmethod
    def _coords_text(coords) -> str:
        return "|".join(f"{a}:{v}" for a, v in (c.norm_pair() for c in coords)) or "-"

    def _coords_parse(self, text: str):
        if text == "-":
            return ()
        out = []
        for part in text.split("|"):
            a, v = part.split(":")
            out.append(self.tower.element(int(v), int(a)))
        return tuple(out)

    def mvector_text(self, v: MVector) -> str:
        lines = [f"mvector ell={v.ell}"]
        for label in v.support():
            perm = ",".join(map(str, label.cell.perm))
            lines.append(f"cell={perm} coords={self._coords_text(label.coords)} c={v.terms[label]}")
        return "\n".join(lines) + "\n"

    def parse_mvector(self, text: str) -> MVector:
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        head = lines[0].split("ell=")
        ell = int(head[1])
        terms = {}
        for ln in lines[1:]:
            fields = dict(part.split("=", 1) for part in ln.split())
            perm = tuple(int(t) for t in fields["cell"].split(","))
            coords = self._coords_parse(fields["coords"])
            label = self._intern(CosetLabel(WeylElement(perm), coords))
            terms[label] = int(fields["c"])
        return MVector(ell, terms)

    def stvector_text(self, v: StVector) -> str:
        lines = [f"stvector ell={v.ell}"]
        lvl = v.level()
        for key in v.support_keys(lvl):
            lines.append(f"key={self._coords_text(key)} c={v.terms[key]}")
        return "\n".join(lines) + "\n"

    def parse_stvector(self, text: str) -> StVector:
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        ell = int(lines[0].split("ell=")[1])
        terms = {}
        for ln in lines[1:]:
            fields = dict(part.split("=", 1) for part in ln.split())
            terms[self._coords_parse(fields["key"])] = int(fields["c"])
        return StVector(ell, terms)
