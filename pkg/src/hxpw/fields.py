"""Exact arithmetic in the binary field tower GF(2^h) < GF(2^(2h)) < GF(2^(4h)).

All scalars live in one ambient field GF(2^(4h)); the proper subfields are
recovered as fixed-point sets of Frobenius powers, so no isomorphism
bookkeeping between separately constructed fields is ever needed.

An element is a plain int: bit i is the coefficient of X^i in the residue
polynomial, and the int value doubles as the element's canonical encoding.
Every "smallest element" tie-break in the package compares these encodings.
Zero and one are literally 0 and 1, and addition is xor.

The reducing modulus is the lexicographically smallest irreducible
polynomial of degree 4h over GF(2) (encodings compared as integers), found
by trial division.  Each tower also carries a distinguished element
``omega`` satisfying omega^(q^2) = omega + 1; together with 1 it is a
GF(q^2)-basis of GF(q^4) and pins down every construction that needs a
fixed basis choice.

Scalar multiplication runs on log/exp tables over a fixed multiplicative
generator; scalar inversion uses the extended Euclidean algorithm on
polynomials.  Bulk operations on numpy int arrays use the same tables and
are cross-checked against the scalar route in the test suite.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np


# ---------------------------------------------------------------------------
# GF(2)[X] helpers on int-encoded polynomials (bit i = coefficient of X^i)

def poly_degree(p: int) -> int:
    """Degree of the polynomial p; degree of 0 is -1 by convention."""
    return p.bit_length() - 1


def clmul(a: int, b: int) -> int:
    """Carry-less (GF(2)[X]) product of two polynomials."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def polymod(p: int, m: int) -> int:
    """Remainder of p modulo m (m != 0)."""
    dm = poly_degree(m)
    dp = poly_degree(p)
    while dp >= dm:
        p ^= m << (dp - dm)
        dp = poly_degree(p)
    return p


def polydivmod(p: int, m: int):
    """Quotient and remainder of p divided by m (m != 0)."""
    dm = poly_degree(m)
    q = 0
    dp = poly_degree(p)
    while dp >= dm:
        q |= 1 << (dp - dm)
        p ^= m << (dp - dm)
        dp = poly_degree(p)
    return q, p


def is_irreducible(p: int) -> bool:
    """Irreducibility over GF(2) by trial division.

    A reducible polynomial of degree d has a factor of degree <= d // 2, so
    dividing by every polynomial of degree 1 .. d // 2 is a complete test
    (and is feasible for every degree this package constructs).
    """
    d = poly_degree(p)
    if d < 1:
        return False
    if d == 1:
        return True
    for f in range(2, 1 << (d // 2 + 1)):
        if polymod(p, f) == 0:
            return False
    return True


def smallest_irreducible(degree: int) -> int:
    """Lexicographically smallest irreducible polynomial of the degree.

    Encodings are compared as integers with the low bit holding the
    constant term, so "lexicographically smallest" is just the smallest
    int whose top bit sits at `degree`.
    """
    for p in range(1 << degree, 1 << (degree + 1)):
        if is_irreducible(p):
            return p
    raise RuntimeError(f"no irreducible polynomial of degree {degree}")  # unreachable


def _prime_factors(n: int):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class FieldTower:
    """GF(2^(4h)) with its GF(2^h) and GF(2^(2h)) subfields.

    Attributes
    ----------
    h : base exponent, q = 2^h
    q, q2, q4 : orders of the three tower fields (q4 = field size)
    degree : 4h, the ambient extension degree over GF(2)
    modulus : int-encoded reducing polynomial
    omega : distinguished element with omega^(q^2) = omega + 1
    """

    def __init__(self, h: int) -> None:
        if not isinstance(h, int) or h < 1:
            raise ValueError(f"h must be a positive integer, got {h!r}")
        self.h = h
        self.degree = 4 * h
        self.q = 1 << h
        self.q2 = 1 << (2 * h)
        self.q4 = 1 << (4 * h)
        self.size = self.q4
        self.modulus = smallest_irreducible(self.degree)

        self._build_tables()

        # omega: smallest solution of X^(q^2) + X = 1 in the ambient field.
        arr = np.arange(self.size, dtype=np.int64)
        sol = arr[(self.frob_arr(arr, 2 * h) ^ arr) == 1]
        if sol.size == 0:
            raise RuntimeError("no omega with omega^(q^2) = omega + 1")  # unreachable
        self.omega = int(sol.min())
        if self.in_subfield(self.omega, 2 * h):
            raise RuntimeError("omega landed in GF(q^2)")  # contradicts its equation

        self._subfields: dict[int, tuple[int, ...]] = {}

    def __repr__(self) -> str:
        return f"FieldTower(h={self.h}, modulus={hex(self.modulus)})"

    # -- table construction -------------------------------------------------

    def _build_tables(self) -> None:
        n1 = self.size - 1
        g = self._find_generator()
        exp = [0] * n1
        log = [0] * self.size  # log[0] is a masked-out sentinel
        v = 1
        for i in range(n1):
            exp[i] = v
            log[v] = i
            v = polymod(clmul(v, g), self.modulus)
        if v != 1:
            raise RuntimeError("generator order mismatch")  # unreachable
        self.generator = g
        self._exp = exp
        self._log = log
        self._exp_np = np.array(exp + exp, dtype=np.int64)  # doubled: no % needed for sums
        self._log_np = np.array(log, dtype=np.int64)
        sqr = np.arange(self.size, dtype=np.int64)
        self._sqr_np = self.mul_arr(sqr, sqr)
        self._sqr = self._sqr_np.tolist()

    def _find_generator(self) -> int:
        n1 = self.size - 1
        primes = _prime_factors(n1)
        for g in range(2, self.size):
            if all(self._pow_raw(g, n1 // p) != 1 for p in primes):
                return g
        raise RuntimeError("no multiplicative generator found")  # unreachable

    def _pow_raw(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = polymod(clmul(r, a), self.modulus)
            a = polymod(clmul(a, a), self.modulus)
            e >>= 1
        return r

    # -- scalar operations ---------------------------------------------------

    def check(self, a: int) -> int:
        if not 0 <= a < self.size:
            raise ValueError(f"{a!r} is not an element of {self!r}")
        return a

    def add(self, a: int, b: int) -> int:
        return self.check(a) ^ self.check(b)

    def mul(self, a: int, b: int) -> int:
        self.check(a)
        self.check(b)
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.size - 1)]

    def sqr(self, a: int) -> int:
        return self._sqr[self.check(a)]

    def inv(self, a: int) -> int:
        """Multiplicative inverse by the extended Euclidean algorithm."""
        self.check(a)
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in a finite field")
        # Invariant: ua * a == ra (mod modulus), ub * a == rb (mod modulus).
        ra, rb = self.modulus, a
        ua, ub = 0, 1
        while rb != 1:
            qt, rr = polydivmod(ra, rb)
            ra, rb = rb, rr
            ua, ub = ub, ua ^ polymod(clmul(qt, ub), self.modulus)
        return ub

    def div(self, a: int, b: int) -> int:
        self.check(a)
        self.check(b)
        if b == 0:
            raise ZeroDivisionError("division by 0")
        if a == 0:
            return 0
        return self._exp[(self._log[a] - self._log[b]) % (self.size - 1)]

    def pow(self, a: int, e: int) -> int:
        """a**e for a nonnegative integer exponent (square-and-multiply)."""
        self.check(a)
        if e < 0:
            raise ValueError("exponent must be nonnegative (use inv for inverses)")
        if a == 0:
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % (self.size - 1)]

    def frobenius(self, a: int, k: int = 1) -> int:
        """a^(2^k); k is reduced mod 4h.  frobenius(a, h) is a -> a^q."""
        self.check(a)
        for _ in range(k % self.degree):
            a = self._sqr[a]
        return a

    def frob_q(self, a: int) -> int:
        return self.frobenius(a, self.h)

    def conj(self, a: int) -> int:
        """The GF(q^2)-conjugate a^(q^2)."""
        return self.frobenius(a, 2 * self.h)

    # -- subfields and traces -------------------------------------------------

    def in_subfield(self, a: int, m: int) -> bool:
        """Whether a lies in GF(2^m); requires m | 4h."""
        if self.degree % m:
            raise ValueError(f"GF(2^{m}) is not a subfield of GF(2^{self.degree})")
        return self.frobenius(a, m) == a

    def subfield(self, m: int) -> tuple[int, ...]:
        """All 2^m elements of GF(2^m) in ascending encoding order."""
        if self.degree % m:
            raise ValueError(f"GF(2^{m}) is not a subfield of GF(2^{self.degree})")
        if m not in self._subfields:
            arr = np.arange(self.size, dtype=np.int64)
            fixed = arr[self.frob_arr(arr, m) == arr]
            if fixed.size != 1 << m:
                raise RuntimeError(f"subfield GF(2^{m}) has wrong size {fixed.size}")
            self._subfields[m] = tuple(int(x) for x in fixed)
        return self._subfields[m]

    def abs_trace(self, a: int, m: int) -> int:
        """Absolute trace of GF(2^m) -> GF(2); requires a in GF(2^m)."""
        if not self.in_subfield(a, m):
            raise ValueError(f"element {a} is not in GF(2^{m})")
        t = 0
        x = a
        for _ in range(m):
            t ^= x
            x = self._sqr[x]
        return t

    def trace_to_base(self, a: int) -> int:
        """Trace from GF(q^4) down to GF(q): a + a^q + a^(q^2) + a^(q^3)."""
        self.check(a)
        t = a
        x = a
        for _ in range(3):
            x = self.frobenius(x, self.h)
            t ^= x
        return t

    # -- bulk operations on numpy int arrays ----------------------------------

    def mul_arr(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self._exp_np[self._log_np[a] + self._log_np[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def inv_arr(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of 0 in bulk operand")
        return self._exp_np[(self.size - 1) - self._log_np[a]]

    def div_arr(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if np.any(b == 0):
            raise ZeroDivisionError("division by 0 in bulk operand")
        out = self._exp_np[self._log_np[a] - self._log_np[b] + (self.size - 1)]
        return np.where(a == 0, 0, out)

    def frob_arr(self, a, k: int = 1):
        a = np.asarray(a, dtype=np.int64)
        for _ in range(k % self.degree):
            a = self._sqr_np[a]
        return a


@lru_cache(maxsize=None)
def tower(h: int) -> FieldTower:
    """Shared FieldTower instances (immutable after construction)."""
    return FieldTower(h)
