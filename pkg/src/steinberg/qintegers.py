"""Exact q-integer arithmetic and divisibility scans.

A_m(q, a) = 1 + q^a + ... + q^{(m-1)a}; the product A_2 * ... * A_n governs
whether the coefficient characteristic obstructs level-by-level
irreducibility.  Divisibility of A_m(q, a) by a prime ell depends only on
q^a mod ell, hence only on a modulo the multiplicative order of q mod ell;
a scan horizon covering one full period therefore certifies the "for all a"
quantifier, which is periodicity folklore rather than deep arithmetic but
is worth stating: the reports carry an explicit period-coverage flag.

Everything is exact big-integer arithmetic; scans are pure functions and
parallelize across parameter tuples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .fields import factorize, is_prime


def q_integer(m: int, q: int, a: int) -> int:
    """A_m = 1 + q^a + ... + q^{(m-1)a}, exactly."""
    if m < 1:
        raise ValueError("m must be >= 1")
    qa = q**a
    return sum(qa**j for j in range(m))


def steinberg_product(n: int, q: int, a: int) -> int:
    """prod_{m=2..n} A_m(q, a), exactly."""
    if n < 2:
        raise ValueError("n must be >= 2")
    out = 1
    for m in range(2, n + 1):
        out *= q_integer(m, q, a)
    return out


def multiplicative_order(q: int, ell: int) -> int:
    if q % ell == 0:
        raise ValueError("q and ell are not coprime")
    k, acc = 1, q % ell
    while acc != 1:
        acc = (acc * q) % ell
        k += 1
    return k


@dataclass(frozen=True)
class DivisibilityScan:
    ell: int
    n: int
    q: int
    a_max: int
    all_divisible: bool
    first_failure: int | None
    order: int
    period_covered: bool
    rows: tuple  # (a, residues of A_2..A_n mod ell, product mod ell, divisible)


def divides_for_all_a(ell: int, n: int, q: int, a_max: int = 64) -> DivisibilityScan:
    """Scan a = 1..a_max for ell | A_2(q,a) * ... * A_n(q,a).

    The verdict is a proof of the unbounded statement exactly when the
    horizon covers a full period of a mod ord_ell(q); the flag says so.
    """
    if not is_prime(ell):
        raise ValueError(f"ell = {ell} is not prime")
    if a_max < 1:
        raise ValueError("a_max must be >= 1")
    if q % ell == 0:
        raise ValueError("ell divides q: the cross-characteristic setting excludes this")
    order = multiplicative_order(q, ell)
    rows = []
    first_failure = None
    for a in range(1, a_max + 1):
        residues = tuple(q_integer(m, q, a) % ell for m in range(2, n + 1))
        prod = 1
        for t in residues:
            prod = (prod * t) % ell
        divisible = prod == 0
        if not divisible and first_failure is None:
            first_failure = a
        rows.append((a, residues, prod, divisible))
    return DivisibilityScan(
        ell=ell,
        n=n,
        q=q,
        a_max=a_max,
        all_divisible=first_failure is None,
        first_failure=first_failure,
        order=order,
        period_covered=a_max >= order,
        rows=tuple(rows),
    )


def prime_power(n: int) -> tuple[int, int] | None:
    """(p, s) with n = p^s, or None."""
    if n < 2:
        return None
    fac = factorize(n)
    if len(fac) != 1:
        return None
    [(p, s)] = fac.items()
    return p, s


@dataclass(frozen=True)
class Remark33Report:
    n: int
    q: int
    a_max: int
    prime: int
    exponent: int
    passed: bool
    failures: tuple[int, ...]
    witnesses: tuple  # per a: ((m, A_m mod n, v_p(A_m)), ...)


def remark33_check(n: int, q: int, a_max: int = 32) -> Remark33Report:
    """Verify n | A_2 * ... * A_n for a = 1..a_max when n is a prime power
    coprime to q, recording which factors contribute which prime powers."""
    pp = prime_power(n)
    if pp is None:
        raise ValueError(f"n = {n} is not a prime power")
    if math.gcd(n, q) != 1:
        raise ValueError("hypothesis violation: n and q are not coprime")
    p, s = pp
    failures = []
    witnesses = []
    for a in range(1, a_max + 1):
        per_factor = []
        for m in range(2, n + 1):
            am = q_integer(m, q, a)
            v = 0
            t = am
            while t % p == 0:
                v += 1
                t //= p
            per_factor.append((m, am % n, v))
        total = sum(v for (_, _, v) in per_factor)
        if total < s:
            failures.append(a)
        witnesses.append(tuple(per_factor))
    return Remark33Report(
        n=n,
        q=q,
        a_max=a_max,
        prime=p,
        exponent=s,
        passed=not failures,
        failures=tuple(failures),
        witnesses=tuple(witnesses),
    )


def scan_rows(n: int, q: int, ell: int, a_max: int) -> list[dict]:
    """Flat scan rows for CSV/JSON reports."""
    scan = divides_for_all_a(ell, n, q, a_max)
    out = []
    for a, residues, prod, divisible in scan.rows:
        row = {"n": n, "q": q, "ell": ell, "a": a}
        for m, res in zip(range(2, n + 1), residues):
            row[f"A{m}_mod_ell"] = res
        row["product_mod_ell"] = prod
        row["divisible"] = divisible
        out.append(row)
    return out
