"""High-order exact expansion of the cubic/quintic return equations.

The per-order solver in systems.py is exact but its Laurent arithmetic is too
slow past a few hundred orders.  Here the q-variable is evaluated at all
1024-th roots of unity modulo a stack of 31-bit primes p = 1 (mod 1024), the
equation is expanded order by order independently on every (prime, lane) pair
with numpy, and coefficients are recovered by an inverse transform over lanes
followed by CRT and a signed lift.  Products of two residues stay below 2^62,
so plain int64 arithmetic is exact throughout.  Winding symmetry f(q) =
f(1/q) halves the lanes that need solving, and the q = 1 specialization is
recomputed independently with big integers as an end-to-end mass check.
"""
from __future__ import annotations

import numpy as np

from .algebraic import PolynomialEquation, _is_prime, series_solve_polynomial
from .qseries import QPolynomial, QZSeries

LANES = 1024


def _ntt_primes(bound: int) -> list[int]:
    """Primes p = 1 (mod LANES) just under 2^31 whose product exceeds bound."""
    out = []
    modulus = 1
    m = ((1 << 31) - 2) // LANES
    while modulus <= bound:
        p = m * LANES + 1
        if _is_prime(p):
            out.append(p)
            modulus *= p
        m -= 1
    return out


def _root_of_unity(p: int) -> int:
    for a in range(2, 1000):
        w = pow(a, (p - 1) // LANES, p)
        if pow(w, LANES // 2, p) == p - 1:
            return w
    raise ArithmeticError(f"no primitive {LANES}-th root mod {p}")


def _bit_reverse(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.int64)
    for _ in range(bits):
        rev = (rev << 1) | (idx & 1)
        idx >>= 1
    return rev


def _intt_rows(mat: np.ndarray, p: int, w: int) -> np.ndarray:
    """Inverse transform along axis 1; mat holds values at powers of w's inverse."""
    rows, n = mat.shape
    out = mat[:, _bit_reverse(n)].copy()
    root = pow(w, p - 2, p)  # evaluate at inverse powers
    length = 2
    while length <= n:
        wlen = pow(root, n // length, p)
        half = length // 2
        wp = np.empty(half, dtype=np.int64)
        acc = 1
        for i in range(half):
            wp[i] = acc
            acc = acc * wlen % p
        view = out.reshape(rows, n // length, length)
        a = view[:, :, :half].copy()  # the in-place write below must not alias it
        b = view[:, :, half:] * wp % p
        view[:, :, :half] = (a + b) % p
        view[:, :, half:] = (a - b) % p
        length *= 2
    inv_n = pow(n, p - 2, p)
    return out * inv_n % p


def _lane_coefficients(eq: PolynomialEquation, p: int, w: int, half: int) -> list:
    """eq coefficients evaluated at q = w^t for t = 0..half-1, per F-power."""
    table = []
    for zpoly in eq.terms:
        entries = []
        for zp, cq in zpoly:
            vals = np.zeros(half, dtype=np.int64)
            for e, v in cq.pairs():
                we = pow(w, e % LANES, p)
                acc = 1
                powers = np.empty(half, dtype=np.int64)
                for t in range(half):
                    powers[t] = acc
                    acc = acc * we % p
                vals = (vals + v % p * powers) % p
            entries.append((zp, vals))
        table.append(entries)
    return table


def _solve_lanes(eq: PolynomialEquation, order: int, p: int, w: int) -> np.ndarray:
    """Series root with f0 = 1 on lanes q = w^t, t = 0..LANES/2; shape (order+1, half)."""
    half = LANES // 2 + 1
    deg = eq.degree
    cs = _lane_coefficients(eq, p, w, half)
    d0 = np.zeros(half, dtype=np.int64)
    a0 = np.zeros(half, dtype=np.int64)
    for k in range(deg + 1):
        for zp, vals in cs[k]:
            if zp == 0:
                a0 = (a0 + vals) % p
                d0 = (d0 + k * vals) % p
    if a0.any():
        raise ArithmeticError("f0 = 1 is not a root on some lane")
    inv_d0 = np.array([pow(int(x), p - 2, p) for x in d0], dtype=np.int64)

    pows = [np.zeros((order + 1, half), dtype=np.int64) for _ in range(deg + 1)]
    for k in range(deg + 1):
        pows[k][0] = 1
    for n in range(1, order + 1):
        r = np.zeros(half, dtype=np.int64)
        for k in range(deg + 1):
            for zp, vals in cs[k]:
                if zp <= n:
                    r = (r + vals * pows[k][n - zp]) % p
        fn = (p - r) * inv_d0 % p
        if not fn.any():
            continue
        fp = [None, fn]
        for _ in range(2, deg + 1):
            fp.append(fp[-1] * fn % p)
        for k in range(deg, 0, -1):
            binom = 1
            for j in range(1, k + 1):
                start = n * j
                if start > order:
                    break
                binom = binom * (k - j + 1) // j
                weight = binom % p * fp[j] % p
                span = order + 1 - start
                base = pows[k - j][:span]
                pows[k][start:] = (pows[k][start:] + weight * base) % p
    return pows[1]


def _garner(residues: list[int], primes: list[int], inverses: list[int]) -> int:
    """Signed integer congruent to residues; |result| < prod(primes)/2."""
    x = 0
    modulus = 1
    for r, p, inv in zip(residues, primes, inverses):
        t = (r - x) % p * inv % p
        x += modulus * t
        modulus *= p
    if 2 * x >= modulus:
        x -= modulus
    return x


def high_order_rows(eq: PolynomialEquation, order: int) -> QZSeries:
    """Exact coefficient rows of eq's counting-series root up to z^order.

    Winding support must fit the signed window (|m| <= LANES/2 - 1); the
    groups handled here change winding at most once per two steps, which keeps
    order <= 1022 safe.
    """
    max_w = order // 2
    if 2 * max_w + 1 >= LANES:
        raise ValueError(f"winding support exceeds {LANES} lanes")
    # coefficients are bounded by the number of 4-letter words
    primes = _ntt_primes(2 * 4**order)
    nprimes = len(primes)
    half = LANES // 2 + 1
    mirror = np.concatenate(
        [np.arange(half), np.arange(half - 2, 0, -1)]
    )

    per_prime = []
    for p in primes:
        w = _root_of_unity(p)
        lanes = _solve_lanes(eq, order, p, w)
        full = lanes[:, mirror]
        per_prime.append(_intt_rows(full, p, w))

    inverses = []
    modulus = 1
    for p in primes:
        inverses.append(pow(modulus % p, p - 2, p))
        modulus *= p

    coeffs = [QPolynomial.constant(1)]
    for n in range(1, order + 1):
        pairs = []
        for m in range(0, min(n, max_w) + 1):
            residues = [int(per_prime[i][n, m]) for i in range(nprimes)]
            if not any(residues):
                continue
            v = _garner(residues, primes, inverses)
            pairs.append((m, v))
            if m:
                pairs.append((-m, v))
        for m in range(max_w + 1, LANES - max_w):
            if any(int(per_prime[i][n, m]) for i in range(nprimes)):
                raise ArithmeticError(f"winding support leaked outside window at {n}")
            break  # spot-check the first out-of-window slot only
        coeffs.append(QPolynomial.from_pairs(pairs))
    return QZSeries(order, coeffs)


def series_at_q1(eq: PolynomialEquation, order: int) -> list[int]:
    """Row sums (q = 1) of the counting series, exactly, via big integers."""
    collapsed = tuple(
        tuple(
            (zp, QPolynomial.constant(cq.eval_at_one()))
            for zp, cq in zpoly
        )
        for zpoly in eq.terms
    )
    flat = PolynomialEquation(eq.name + "-q1", collapsed)
    series = series_solve_polynomial(flat, 1, order)
    return [series.coeffs[n].coeff(0) for n in range(order + 1)]
