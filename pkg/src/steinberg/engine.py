"""Constructive irreducibility engine.

Given any nonzero Steinberg vector v at field level a, produce a replayable
chain of group-algebra multipliers whose application to v yields a nonzero
multiple of the generator eta.  The chain is:

1. lift: translate v so the identity coordinate is nonzero, hit it with the
   longest-word representative and average over the level-a unipotents; the
   coefficient-sum identity collapses the result to a multiple of the full
   unipotent orbit sum.
2. ladder (i, b) -> (i+1, 2b), repeated r-1 times: average over torus
   elements realizing multiplicative coset representatives, then over the
   next subgroup at the doubled level; both averages merge into a single
   group-algebra multiplier that carries the subgroup orbit sum one root up.
3. extract: at the last root, the torus average equals q^b * eta plus the
   doubled-level orbit sum, so subtracting the doubled sum and dividing by
   q^b (nonzero since ell does not divide q) isolates eta.

Every step is checked against an independently recomputed closed-form orbit
sum; a mismatch is an implementation bug and raises immediately.
Certificates are verified by pure replay with no trust in the producer.

A spinning routine (iterative echelonized closure under group generators)
exhibits the finite-level contrast: the level-a module can be reducible
even though every vector admits a certificate using higher-level
multipliers.

All operations are pure; independent runs may execute concurrently.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import CharacteristicClashError
from .coset_module import CosetLabel, ModuleContext, MVector, StVector
from .fields import FieldElement
from .group import (
    GroupElement,
    enumerate_U,
    enumerate_X,
    sl_generators,
    torus_for_root_value,
    unipotent_from_key,
)

# A multiplier is one group-algebra element: scalars attached to group
# elements, applied to a vector as sum_g c_g * (g . v).
Multiplier = tuple[tuple[GroupElement, int], ...]


def build_multiplier(ctx: ModuleContext, pairs) -> Multiplier:
    """Merge duplicate elements, drop zero scalars, sort canonically."""
    acc: dict[GroupElement, int] = {}
    for g, c in pairs:
        w = (acc.get(g, 0) + c) % ctx.ell
        if w:
            acc[g] = w
        else:
            acc.pop(g, None)
    return tuple(sorted(acc.items(), key=lambda t: t[0].sort_key()))


def apply_multiplier(ctx: ModuleContext, mult: Multiplier, v: MVector) -> MVector:
    out: dict = {}
    ell = ctx.ell
    for g, c in mult:
        for label, cv in v.terms.items():
            moved = ctx.act_label(g, label)
            w = (out.get(moved, 0) + c * cv) % ell
            if w:
                out[moved] = w
            else:
                out.pop(moved, None)
    res = MVector(ell)
    res.terms = out
    return res


def _require_cross_characteristic(ctx: ModuleContext):
    if ctx.ell == ctx.p:
        raise CharacteristicClashError(
            f"coefficient characteristic {ctx.ell} equals the defining characteristic {ctx.p}"
        )


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class Certificate:
    """Replayable witness that the stored multiplier chain carries the input
    vector to claimed_scalar * eta.

    max_level is the top of the field-level chain a, 2a, 4a, ... walked by
    the intermediate vectors and subgroup data.  entry_max_level is the
    largest level of any stored matrix entry; for n = 2 and odd q the torus
    multipliers need square roots one doubling above the chain, so it can
    exceed max_level.
    """

    n: int
    p: int
    d: int
    ell: int
    input_level: int
    w0_word: tuple[int, ...]
    claimed_scalar: int
    max_level: int
    entry_max_level: int
    steps: tuple[Multiplier, ...]

    def step_sizes(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.steps)

    def to_text(self) -> str:
        lines = [
            "steinberg-certificate v1",
            f"n {self.n}",
            f"p {self.p}",
            f"d {self.d}",
            f"ell {self.ell}",
            f"input-level {self.input_level}",
            "w0-word " + " ".join(str(i + 1) for i in self.w0_word),
            f"claimed-scalar {self.claimed_scalar}",
            f"max-level {self.max_level}",
            f"entry-max-level {self.entry_max_level}",
        ]
        levels = sorted({g.level for step in self.steps for g, _ in step} | {1})
        from .fields import defining_polynomial

        for a in levels:
            poly = defining_polynomial(self.p, self.d * a)
            lines.append(f"tower-poly {a} " + " ".join(map(str, poly)))
        lines.append(f"steps {len(self.steps)}")
        for k, step in enumerate(self.steps):
            lines.append(f"step {k} terms {len(step)}")
            for g, c in step:
                vals = " ".join(map(str, g.vals))
                lines.append(f"t {c} {g.level} {vals}")
        lines.append("end")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, tower) -> "Certificate":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if lines[0] != "steinberg-certificate v1":
            raise ValueError("unrecognized certificate header")
        meta: dict[str, str] = {}
        idx = 1
        while not lines[idx].startswith("steps "):
            key, _, rest = lines[idx].partition(" ")
            meta[key] = rest
            idx += 1
        n = int(meta["n"])
        p, d = int(meta["p"]), int(meta["d"])
        if (tower.p, tower.d) != (p, d):
            raise ValueError("certificate tower does not match")
        from .fields import defining_polynomial

        for ln in (l for l in lines[1:idx] if l.startswith("tower-poly")):
            parts = ln.split()
            a, poly = int(parts[1]), tuple(int(t) for t in parts[2:])
            if defining_polynomial(p, d * a) != poly:
                raise ValueError("certificate tower polynomial mismatch")
        nsteps = int(lines[idx].split()[1])
        idx += 1
        steps = []
        for _ in range(nsteps):
            header = lines[idx].split()
            nterms = int(header[3])
            idx += 1
            terms = []
            for _ in range(nterms):
                parts = lines[idx].split()
                c, level = int(parts[1]), int(parts[2])
                vals = tuple(int(t) for t in parts[3 : 3 + n * n])
                terms.append((GroupElement(tower, n, level, vals), c))
                idx += 1
            steps.append(tuple(terms))
        word = tuple(int(t) - 1 for t in meta["w0-word"].split())
        return cls(
            n=n,
            p=p,
            d=d,
            ell=int(meta["ell"]),
            input_level=int(meta["input-level"]),
            w0_word=word,
            claimed_scalar=int(meta["claimed-scalar"]),
            max_level=int(meta["max-level"]),
            entry_max_level=int(meta["entry-max-level"]),
            steps=tuple(steps),
        )


@dataclass
class LadderState:
    """Orbit-sum state: vector equals (up to a nonzero scalar) the sum of
    x * eta over the subgroup X_i at field level b."""

    i: int
    b: int
    vector: MVector


def closed_form_state_sum(ctx: ModuleContext, i: int, b: int) -> MVector:
    """Independent recomputation of the X_i orbit sum at level b."""
    return ctx.group_sum_apply(enumerate_X(ctx.tower, ctx.n, i, b), ctx.eta())


def state_scale(ctx: ModuleContext, state: LadderState) -> int:
    """The nonzero scalar relating the state vector to its closed form;
    raises if the state is not proportional to it."""
    closed = closed_form_state_sum(ctx, state.i, state.b)
    ref = next(iter(sorted(closed.terms, key=lambda lb: lb.sort_key())))
    got = state.vector.terms.get(ref, 0)
    if got == 0 or state.vector != closed.scale(got * ctx.sc_inv(closed.terms[ref])):
        raise RuntimeError("ladder state does not match its closed-form orbit sum")
    return (got * ctx.sc_inv(closed.terms[ref])) % ctx.ell


# ---------------------------------------------------------------------------
# the individual proof steps


@dataclass(frozen=True)
class Lemma25Report:
    n: int
    q: int
    a: int
    ell: int
    passed: bool
    total: int
    failures: tuple


def check_lemma25(ctx: ModuleContext, a: int) -> Lemma25Report:
    """Exhaustive coefficient-sum check over the level-a unipotents.

    For u not the identity, the longest-word translate of u * eta has
    coefficient sum zero in Steinberg coordinates; for u = e the sum is
    (-1)^r.  Also asserts the support stays at level a.
    """
    _require_cross_characteristic(ctx)
    n_rep = ctx.nw_rep(ctx.w0)
    eta = ctx.eta()
    failures = []
    total = 0
    for u in enumerate_U(ctx.tower, ctx.n, a):
        total += 1
        stv = ctx.to_steinberg_coords(ctx.act(n_rep * u, eta))
        if a % stv.level() != 0:
            failures.append((u, "support escaped the level", a))
            continue
        got = ctx.coeff_sum(stv)
        expected = 0 if not u.is_identity() else ctx.sign(ctx.r)
        if got != expected:
            failures.append((u, got, expected))
    return Lemma25Report(ctx.n, ctx.q, a, ctx.ell, not failures, total, tuple(failures))


@dataclass(frozen=True)
class LiftResult:
    vector: MVector
    scalar: int
    multiplier: Multiplier
    level: int


def lift_to_U_sum(ctx: ModuleContext, v: StVector, a: int | None = None) -> LiftResult:
    """Carry a nonzero Steinberg vector to A times the level-a unipotent
    orbit sum, A = (-1)^r times the coefficient at the identity after
    translating the first supported coordinate there."""
    _require_cross_characteristic(ctx)
    if v.is_zero():
        raise ValueError("empty vector")
    if a is None:
        a = v.level()
    y_key = v.support_keys(a)[0]
    y = unipotent_from_key(ctx.tower, ctx.n, y_key)
    y_inv = y.inverse()
    scalar_a = (ctx.sign(ctx.r) * v.terms[y_key]) % ctx.ell
    n_rep = ctx.nw_rep(ctx.w0)
    tail = n_rep * y_inv
    mult = build_multiplier(ctx, ((x * tail, 1) for x in enumerate_U(ctx.tower, ctx.n, a)))
    vec = apply_multiplier(ctx, mult, ctx.from_steinberg(v))
    expected = closed_form_state_sum(ctx, 1, a).scale(scalar_a)
    if vec != expected:
        raise RuntimeError("lift did not land on the unipotent orbit sum")
    return LiftResult(vec, scalar_a, mult, a)


@dataclass(frozen=True)
class DoubleFieldResult:
    state: LadderState
    scalar: int
    multiplier: Multiplier


def double_field_sum(ctx: ModuleContext, state: LadderState) -> DoubleFieldResult:
    """Left-translate the X_i orbit sum by X_i at the doubled level; the
    output is q^{b(r-i+1)} times the doubled-level orbit sum."""
    _require_cross_characteristic(ctx)
    i, b = state.i, state.b
    nu = pow(ctx.q, b * (ctx.r - i + 1), ctx.ell)
    mult = build_multiplier(
        ctx, ((x, 1) for x in enumerate_X(ctx.tower, ctx.n, i, 2 * b))
    )
    vec = apply_multiplier(ctx, mult, state.vector)
    new_state = LadderState(i, 2 * b, vec)
    state_scale(ctx, new_state)
    return DoubleFieldResult(new_state, nu, mult)


def _ladder_torus_elements(ctx: ModuleContext, i: int, b: int) -> list[GroupElement]:
    beta = ctx.rd.beta(i)
    return [
        torus_for_root_value(ctx.tower, ctx.n, beta, c)
        for c in ctx.tower.mult_coset_reps(b)
    ]


@dataclass(frozen=True)
class LadderResult:
    state: LadderState
    multiplier: Multiplier


def ladder_step(ctx: ModuleContext, state: LadderState) -> LadderResult:
    """Advance the orbit sum from (i, b) to (i+1, 2b).

    The torus average over the q^b + 1 coset representatives and the
    doubled-level translation merge into one multiplier: with
    lam = q^{b(r-i)}, mu = q^b and nu = q^{b(r-i+1)} (all nonzero mod ell),

        m = (lam*mu)^{-1} * (X_{i+1,2b} sum) * (torus sum)
            - (mu*nu)^{-1} * (X_{i,2b} sum).
    """
    _require_cross_characteristic(ctx)
    i, b = state.i, state.b
    if not 1 <= i < ctx.r:
        raise ValueError("ladder step needs 1 <= i < r")
    kappa = state_scale(ctx, state)
    lam = pow(ctx.q, b * (ctx.r - i), ctx.ell)
    mu = pow(ctx.q, b, ctx.ell)
    nu = pow(ctx.q, b * (ctx.r - i + 1), ctx.ell)
    c_front = ctx.sc_inv(lam * mu)
    c_back = (-ctx.sc_inv(mu * nu)) % ctx.ell
    t_elems = _ladder_torus_elements(ctx, i, b)
    z_elems = enumerate_X(ctx.tower, ctx.n, i + 1, 2 * b)
    x2_elems = enumerate_X(ctx.tower, ctx.n, i, 2 * b)
    pairs = [(z * t, c_front) for z in z_elems for t in t_elems]
    pairs.extend((x, c_back) for x in x2_elems)
    mult = build_multiplier(ctx, pairs)
    vec = apply_multiplier(ctx, mult, state.vector)
    new_state = LadderState(i + 1, 2 * b, vec)
    if state_scale(ctx, new_state) != kappa:
        raise RuntimeError("ladder step changed the state scale")
    return LadderResult(new_state, mult)


@dataclass(frozen=True)
class ExtractResult:
    vector: MVector
    multiplier: Multiplier
    divided_scalar: int


def extract_eta(ctx: ModuleContext, state: LadderState) -> ExtractResult:
    """Close the chain at i = r: the torus average equals q^b * eta plus the
    doubled-level orbit sum; subtract the doubled sum and divide by q^b."""
    _require_cross_characteristic(ctx)
    if state.i != ctx.r:
        raise ValueError("extraction happens at the last root")
    b = state.b
    kappa = state_scale(ctx, state)
    mu = pow(ctx.q, b, ctx.ell)
    t_elems = _ladder_torus_elements(ctx, ctx.r, b)
    u2_elems = enumerate_X(ctx.tower, ctx.n, ctx.r, 2 * b)
    pairs = [(t, ctx.sc_inv(mu)) for t in t_elems]
    inv_mu2 = (-ctx.sc_inv(mu * mu)) % ctx.ell
    pairs.extend((x, inv_mu2) for x in u2_elems)
    mult = build_multiplier(ctx, pairs)
    vec = apply_multiplier(ctx, mult, state.vector)
    if vec != ctx.eta().scale(kappa):
        raise RuntimeError("extraction did not isolate eta")
    return ExtractResult(vec, mult, mu)


def reach_eta(ctx: ModuleContext, v: StVector, a: int | None = None) -> Certificate:
    """Produce a verified multiplier chain carrying v to claimed_scalar * eta."""
    _require_cross_characteristic(ctx)
    if v.is_zero():
        raise ValueError("cannot reach eta from the zero vector")
    if a is None:
        a = v.level()
    e_key = ctx.identity_key()
    meta = dict(
        n=ctx.n,
        p=ctx.p,
        d=ctx.tower.d,
        ell=ctx.ell,
        input_level=a,
        w0_word=ctx.rd.w0_word,
    )
    if set(v.terms) == {e_key}:
        return Certificate(
            claimed_scalar=v.terms[e_key],
            max_level=a,
            entry_max_level=a,
            steps=(),
            **meta,
        )
    lift = lift_to_U_sum(ctx, v, a)
    steps = [lift.multiplier]
    state = LadderState(1, a, lift.vector)
    while state.i < ctx.r:
        result = ladder_step(ctx, state)
        steps.append(result.multiplier)
        state = result.state
    extract = extract_eta(ctx, state)
    steps.append(extract.multiplier)
    if extract.vector != ctx.eta().scale(lift.scalar):
        raise RuntimeError("chain did not end on the claimed multiple of eta")
    chain_max = 2 * state.b
    entry_max = max(g.level for step in steps for g, _ in step)
    return Certificate(
        claimed_scalar=lift.scalar,
        max_level=chain_max,
        entry_max_level=max(entry_max, chain_max),
        steps=tuple(steps),
        **meta,
    )


def verify_certificate(ctx: ModuleContext, cert: Certificate, v: StVector) -> bool:
    """Replay the multiplier chain on v by pure vector arithmetic and compare
    with claimed_scalar * eta; no trust in the producer."""
    if (cert.n, cert.p, cert.d, cert.ell) != (ctx.n, ctx.p, ctx.tower.d, ctx.ell):
        return False
    w = ctx.from_steinberg(v)
    for step in cert.steps:
        w = apply_multiplier(ctx, step, w)
    return w == ctx.eta().scale(cert.claimed_scalar)


# ---------------------------------------------------------------------------
# spinning and finite-level reports


@dataclass(frozen=True)
class SpinResult:
    dimension: int
    basis: tuple


def spin(ctx: ModuleContext, v: MVector, generators) -> SpinResult:
    """Echelonized closure of v under the generators and linear span."""
    rows: dict[CosetLabel, MVector] = {}

    def reduce(vec: MVector) -> MVector:
        while True:
            hit = next((lb for lb in vec.terms if lb in rows), None)
            if hit is None:
                return vec
            vec = vec.sub(rows[hit].scale(vec.terms[hit]))

    def insert(vec: MVector) -> MVector | None:
        vec = reduce(vec)
        if vec.is_zero():
            return None
        pivot = min(vec.terms, key=lambda lb: lb.sort_key())
        row = vec.scale(ctx.sc_inv(vec.terms[pivot]))
        rows[pivot] = row
        return row

    queue = []
    first = insert(v)
    if first is not None:
        queue.append(first)
    while queue:
        x = queue.pop()
        for g in generators:
            nr = insert(ctx.act(g, x))
            if nr is not None:
                queue.append(nr)
    basis = tuple(rows[k] for k in sorted(rows, key=lambda lb: lb.sort_key()))
    return SpinResult(len(rows), basis)


def st_basis_keys(ctx: ModuleContext, a: int) -> list[tuple[FieldElement, ...]]:
    field = ctx.tower.enumerate_level(a)
    return list(itertools.product(field, repeat=ctx.r))


def st_vector_from_coeffs(ctx: ModuleContext, a: int, coeffs) -> StVector:
    keys = st_basis_keys(ctx, a)
    return StVector(ctx.ell, {k: c for k, c in zip(keys, coeffs) if c % ctx.ell})


def random_st_vector(ctx: ModuleContext, a: int, rng) -> StVector:
    dim = len(st_basis_keys(ctx, a))
    while True:
        coeffs = [rng.randrange(ctx.ell) for _ in range(dim)]
        if any(coeffs):
            return st_vector_from_coeffs(ctx, a, coeffs)


@dataclass(frozen=True)
class FiniteSteinbergReport:
    n: int
    q: int
    a: int
    ell: int
    dimension: int
    mode: str  # "certified" | "randomized"
    probable: bool
    irreducible: bool | None
    proper_dims: tuple[int, ...]
    vectors_checked: int
    seed: int | None


def finite_steinberg_report(
    ctx: ModuleContext,
    a: int,
    seed: int = 0,
    certified_threshold: int = 1 << 20,
    random_samples: int = 64,
) -> FiniteSteinbergReport:
    """(Ir)reducibility report for the level-a module of dimension q^{a r}.

    Certified mode spins every nonzero vector when ell^dim is small enough;
    otherwise a seeded randomized mode spins all basis vectors plus random
    samples and can only certify reducibility, never irreducibility.
    """
    _require_cross_characteristic(ctx)
    dim = ctx.q ** (a * ctx.r)
    gens = sl_generators(ctx.tower, ctx.n, a)
    dims_found = set()
    checked = 0

    def spin_dim(stv: StVector) -> int:
        return spin(ctx, ctx.from_steinberg(stv), gens).dimension

    if ctx.ell**dim <= certified_threshold:
        for coeffs in itertools.product(range(ctx.ell), repeat=dim):
            if not any(coeffs):
                continue
            dims_found.add(spin_dim(st_vector_from_coeffs(ctx, a, coeffs)))
            checked += 1
        proper = tuple(sorted(d for d in dims_found if d < dim))
        return FiniteSteinbergReport(
            ctx.n, ctx.q, a, ctx.ell, dim, "certified", False, not proper, proper, checked, None
        )
    import random as _random

    rng = _random.Random(seed)
    keys = st_basis_keys(ctx, a)
    vectors = [StVector(ctx.ell, {k: 1}) for k in keys]
    vectors.extend(random_st_vector(ctx, a, rng) for _ in range(random_samples))
    for stv in vectors:
        dims_found.add(spin_dim(stv))
        checked += 1
    proper = tuple(sorted(d for d in dims_found if d < dim))
    return FiniteSteinbergReport(
        ctx.n,
        ctx.q,
        a,
        ctx.ell,
        dim,
        "randomized",
        True,
        False if proper else None,
        proper,
        checked,
        seed,
    )
