"""Association-scheme analytics over relation tables.

A relation table is an n x n integer matrix with 0 exactly on the diagonal
and symmetric classes 1..d off it.  Axiom verification counts, for every
ordered class triple (i, j, k), the number of two-step walks i-then-j
between the endpoints of each class-k pair and demands constancy; the
counts are the intersection numbers p^k_ij.  Counting uses float64 matrix
products, which are exact here (every count is at most n < 2^53).

Everything downstream of the counts is exact rational arithmetic on
(d+1)-square matrices:

* the first eigenmatrix P has the valencies as row 0 and column 0 all
  ones; its rows are the common left eigenvectors of the intersection
  matrices, found by factoring the characteristic polynomial of B_1 over
  the integers (these schemes have integral character tables; a
  non-integer eigenvalue aborts certification) and splitting repeated
  eigenspaces with B_2, B_3, ...;
* the second eigenmatrix is Q = n P^(-1), multiplicities are row 0 of Q;
* Krein parameters solve Q[l][i] Q[l][j] = sum_k q^k_ij Q[l][k], i.e.
  q^._ij = (1/n) P (Q[:,i] o Q[:,j]); they must be nonnegative;
* cometric (Q-polynomial) orderings are eigenspace reorderings making the
  matrix (q^k_1j) tridiagonal with nonzero off-diagonals, and metric
  (P-polynomial) orderings are the analogous relation reorderings on
  (p^k_1j).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import permutations

import numpy as np


class SchemeAxiomError(Exception):
    """A relation table failed an axiom; carries a reproducible witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness or {}


# ---------------------------------------------------------------------------
# exact linear algebra on small Fraction matrices

def _frac_identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def _frac_matmul(A, B):
    n, m, k = len(A), len(B[0]), len(B)
    return [[sum(A[i][l] * B[l][j] for l in range(k)) for j in range(m)]
            for i in range(n)]


def _frac_inverse(A):
    n = len(A)
    M = [list(row) + ident for row, ident in zip(A, _frac_identity(n))]
    for c in range(n):
        pr = next((r for r in range(c, n) if M[r][c] != 0), None)
        if pr is None:
            raise ValueError("singular matrix")
        M[c], M[pr] = M[pr], M[c]
        pv = M[c][c]
        M[c] = [x / pv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [row[n:] for row in M]


def _frac_nullspace(A):
    rows = [list(r) for r in A]
    if not rows:
        return []
    width = len(rows[0])
    pivots = []
    r = 0
    for c in range(width):
        pr = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    free = [c for c in range(width) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * width
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][fc]
        basis.append(v)
    return basis


def _charpoly(A):
    """Monic characteristic polynomial (Faddeev-LeVerrier), low degree first."""
    n = len(A)
    coeffs = [Fraction(0)] * n + [Fraction(1)]
    N = _frac_identity(n)
    for k in range(1, n + 1):
        M = _frac_matmul(A, N)
        c = -sum(M[i][i] for i in range(n)) / k
        coeffs[n - k] = c
        N = [[M[i][j] + (c if i == j else 0) for j in range(n)] for i in range(n)]
    return coeffs


def _int_roots(coeffs):
    """Integer roots with multiplicity of a monic integer polynomial."""
    coeffs = list(coeffs)
    if any(c.denominator != 1 for c in coeffs):
        raise SchemeAxiomError("characteristic polynomial is not integral")
    roots = []
    while len(coeffs) > 1:
        ev = lambda x: sum(c * x ** k for k, c in enumerate(coeffs))
        c0 = int(coeffs[0])
        if c0 == 0:
            root = 0
        else:
            cands = sorted({d for d in range(1, abs(c0) + 1) if c0 % d == 0})
            root = next((r for d in cands for r in (d, -d) if ev(r) == 0), None)
            if root is None:
                raise SchemeAxiomError(
                    "non-integer eigenvalue of an intersection matrix")
        roots.append(root)
        # synthetic division by (x - root)
        out = []
        acc = Fraction(0)
        for c in reversed(coeffs[1:]):
            acc = c + root * acc
            out.append(acc)
        coeffs = list(reversed(out))
    return roots


# ---------------------------------------------------------------------------
# relation tables

class RelationTable:
    """n x n class matrix with identity class 0 on the diagonal."""

    def __init__(self, classes, d=None):
        classes = np.asarray(classes)
        if classes.ndim != 2 or classes.shape[0] != classes.shape[1]:
            raise ValueError("relation table must be square")
        self.classes = classes
        self.n = classes.shape[0]
        self.d = int(classes.max()) if d is None else d

    def structure_report(self):
        c = self.classes
        diag_ok = bool(np.all(np.diag(c) == 0))
        offdiag = c[~np.eye(self.n, dtype=bool)]
        off_ok = bool(offdiag.size == 0 or (offdiag.min() >= 1 and offdiag.max() <= self.d))
        sym_ok = bool(np.array_equal(c, c.T))
        empty = [k for k in range(1, self.d + 1) if not np.any(c == k)]
        return {"symmetric": sym_ok, "diagonal_ok": diag_ok,
                "classes_in_range": off_ok, "empty_classes": empty,
                "degenerate": bool(empty)}

    def valencies(self):
        """Per-class degrees; raises if any class is not regular."""
        out = []
        for k in range(1, self.d + 1):
            rows = (self.classes == k).sum(axis=1)
            if rows.min() != rows.max():
                raise SchemeAxiomError(
                    f"class {k} is not regular",
                    {"class": k, "min_degree": int(rows.min()),
                     "max_degree": int(rows.max())})
            out.append(int(rows[0]))
        return out


def verify_scheme(table: RelationTable):
    """Full intersection-number constancy check; returns the analytics."""
    rep = table.structure_report()
    if not (rep["symmetric"] and rep["diagonal_ok"] and rep["classes_in_range"]):
        raise SchemeAxiomError("structural invariant violated", rep)
    if rep["empty_classes"]:
        raise SchemeAxiomError(
            f"empty classes {rep['empty_classes']} (degenerate table)", rep)
    n, d = table.n, table.d
    c = table.classes
    A = [(c == k).astype(np.float64) for k in range(d + 1)]
    masks = [c == k for k in range(d + 1)]
    firsts = [tuple(int(x[0]) for x in np.nonzero(masks[k])) for k in range(d + 1)]
    p = [[[0] * (d + 1) for _ in range(d + 1)] for _ in range(d + 1)]
    for i in range(d + 1):
        for j in range(i, d + 1):
            C = A[i] @ A[j]
            for k in range(d + 1):
                vals = C[masks[k]]
                v0 = vals[0]
                if not np.all(vals == v0):
                    bad = int(np.argmax(vals != v0))
                    xs, ys = np.nonzero(masks[k])
                    raise SchemeAxiomError(
                        f"count of (R{i}, R{j}) walks is not constant on class {k}",
                        {"i": i, "j": j, "k": k,
                         "base_pair": [firsts[k][0], firsts[k][1]],
                         "count": int(v0),
                         "other_pair": [int(xs[bad]), int(ys[bad])],
                         "other_count": int(vals[bad])})
                p[k][i][j] = int(v0)
                p[k][j][i] = int(v0)
    return SchemeAnalytics(table, p)


class SchemeAnalytics:
    """Intersection numbers and the exact eigen/Krein data derived from them."""

    def __init__(self, table, p):
        self.table = table
        self.n = table.n
        self.d = table.d
        self.p = p
        self.valencies = [p[0][i][i] for i in range(self.d + 1)]
        self._eigen = None
        self._krein = None

    # -- eigenmatrices ------------------------------------------------------

    def intersection_matrix(self, i):
        """B_i with (B_i)[k][j] = p^k_ij."""
        return [[Fraction(self.p[k][i][j]) for j in range(self.d + 1)]
                for k in range(self.d + 1)]

    def _common_left_eigenvectors(self):
        d1 = self.d + 1
        Bts = [[[self.intersection_matrix(i)[k][j] for k in range(d1)]
                for j in range(d1)] for i in range(1, d1)]  # transposed B_i
        roots = _int_roots(_charpoly(Bts[0]))
        spaces = []
        for lam in sorted(set(roots)):
            M = [[Bts[0][r][c] - (lam if r == c else 0) for c in range(d1)]
                 for r in range(d1)]
            spaces.append(_frac_nullspace(M))
        vectors = []
        queue = [(basis, 1) for basis in spaces]
        while queue:
            basis, depth = queue.pop()
            if len(basis) == 1:
                vectors.append(basis[0])
                continue
            if depth >= len(Bts):
                raise SchemeAxiomError("eigenspace split exhausted the algebra")
            # restrict the next intersection matrix to the span of `basis`
            Mn = Bts[depth]
            imgs = [[sum(Mn[r][c] * v[c] for c in range(d1)) for r in range(d1)]
                    for v in basis]
            # coordinates of each image in the basis (solve basis^T a = img)
            BT = [[basis[b][r] for b in range(len(basis))] for r in range(d1)]
            sq = _frac_matmul([[BT[r][c] for r in range(d1)] for c in range(len(basis))], BT)
            sqinv = _frac_inverse(sq)
            R = []
            for img in imgs:
                rhs = [sum(BT[r][c] * img[r] for r in range(d1))
                       for c in range(len(basis))]
                R.append([sum(sqinv[a][b] * rhs[b] for b in range(len(basis)))
                          for a in range(len(basis))])
            Rt = [[R[j][i] for j in range(len(basis))] for i in range(len(basis))]
            for lam in sorted(set(_int_roots(_charpoly(Rt)))):
                M = [[Rt[r][c] - (lam if r == c else 0) for c in range(len(basis))]
                     for r in range(len(basis))]
                subbasis = [
                    [sum(coeffs[b] * basis[b][r] for b in range(len(basis)))
                     for r in range(d1)]
                    for coeffs in _frac_nullspace(M)]
                if subbasis:
                    queue.append((subbasis, depth + 1))
        if len(vectors) != d1:
            raise SchemeAxiomError(
                f"found {len(vectors)} common eigenvectors, expected {d1}")
        return vectors

    def eigenmatrix(self):
        """(P, Q, multiplicities): row 0 of P is the valency row."""
        if self._eigen is not None:
            return self._eigen
        d1 = self.d + 1
        rows = []
        for v in self._common_left_eigenvectors():
            if v[0] == 0:
                raise SchemeAxiomError("eigenvector with zero identity coordinate")
            rows.append([x / v[0] for x in v])
        kvec = [Fraction(k) for k in self.valencies]
        try:
            rows.remove(kvec)
        except ValueError:
            raise SchemeAxiomError("valency row missing from the eigenvectors")
        rows.sort(key=lambda r: r[1:], reverse=True)
        P = [kvec] + rows
        Q = [[self.n * x for x in row] for row in _frac_inverse(P)]
        mult = Q[0]
        if any(m.denominator != 1 or m <= 0 for m in mult):
            raise SchemeAxiomError(f"multiplicities {mult} are not positive integers")
        if sum(mult) != self.n:
            raise SchemeAxiomError("multiplicities do not sum to the point count")
        self._eigen = (P, Q, [int(m) for m in mult])
        return self._eigen

    # -- Krein parameters and polynomial orderings ----------------------------

    def krein(self):
        """q[k][i][j], exact; raises on any negative value."""
        if self._krein is not None:
            return self._krein
        P, Q, _ = self.eigenmatrix()
        d1 = self.d + 1
        q = [[[Fraction(0)] * d1 for _ in range(d1)] for _ in range(d1)]
        for i in range(d1):
            for j in range(i, d1):
                rhs = [Q[l][i] * Q[l][j] for l in range(d1)]
                for k in range(d1):
                    val = sum(P[k][l] * rhs[l] for l in range(d1)) / self.n
                    if val < 0:
                        raise SchemeAxiomError(
                            f"negative Krein parameter q^{k}_{i}{j} = {val}")
                    q[k][i][j] = val
                    q[k][j][i] = val
        self._krein = q
        return q

    @staticmethod
    def _tridiagonal_orderings(d, entry):
        """Orderings sigma of 1..d making entry(sigma(k), sigma(1), sigma(j))
        tridiagonal with nonzero off-diagonals (indices 0 fixed)."""
        found = []
        for perm in permutations(range(1, d + 1)):
            sigma = (0,) + perm
            ok = True
            for j in range(d + 1):
                for k in range(d + 1):
                    v = entry(sigma[k], sigma[1], sigma[j])
                    if abs(j - k) > 1 and v != 0:
                        ok = False
                        break
                    if abs(j - k) == 1 and v == 0:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                found.append(list(perm))
        return found

    def q_polynomial_orderings(self):
        q = self.krein()
        return self._tridiagonal_orderings(self.d, lambda k, i, j: q[k][i][j])

    def p_polynomial_orderings(self):
        return self._tridiagonal_orderings(self.d, lambda k, i, j: self.p[k][i][j])

    # -- primitivity ----------------------------------------------------------

    def primitivity(self):
        c = self.table.classes
        report = {}
        for k in range(1, self.d + 1):
            report[f"class_{k}_connected"] = _connected(c == k)
        report["pass"] = all(report.values())
        return report


def _connected(adj):
    n = adj.shape[0]
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    frontier = np.zeros(n, dtype=bool)
    frontier[0] = True
    while frontier.any():
        nxt = adj[frontier].any(axis=0) & ~seen
        seen |= nxt
        frontier = nxt
    return bool(seen.all())


def primitivity(table: RelationTable):
    """Connectivity of every nonidentity class graph (no axioms assumed)."""
    report = {}
    for k in range(1, table.d + 1):
        report[f"class_{k}_connected"] = _connected(table.classes == k)
    report["pass"] = all(v for kk, v in report.items() if kk != "pass")
    return report


# ---------------------------------------------------------------------------
# fusions, strongly regular graphs, table comparison

def fuse(table: RelationTable, partition):
    """Relabel classes by their part index (1-based); identity stays 0."""
    flat = [c for part in partition for c in part]
    if sorted(flat) != list(range(1, table.d + 1)):
        raise ValueError(f"{partition} is not a partition of 1..{table.d}")
    lut = np.zeros(table.d + 1, dtype=table.classes.dtype)
    for idx, part in enumerate(partition, start=1):
        for c in part:
            lut[c] = idx
    return RelationTable(lut[table.classes], d=len(partition))


def srg_check(table: RelationTable, merged):
    """Exact strongly-regular check of the union of the given classes."""
    merged = sorted(set(merged))
    if not merged:
        raise ValueError("merged class set is empty")
    adj = np.isin(table.classes, merged)
    np.fill_diagonal(adj, False)
    n = table.n
    deg = adj.sum(axis=1)
    if deg.min() != deg.max():
        w = int(np.argmin(deg))
        return {"pass": False, "reason": "not regular", "witness_vertex": w,
                "degrees": [int(deg.min()), int(deg.max())]}
    k = int(deg[0])
    A = adj.astype(np.float64)
    A2 = A @ A
    off = ~np.eye(n, dtype=bool)
    lam_vals = A2[adj]
    mu_mask = off & ~adj
    if not lam_vals.size or lam_vals.min() != lam_vals.max():
        return {"pass": False, "reason": "common-neighbor count varies on edges"}
    lam = int(lam_vals[0])
    if not mu_mask.any():
        return {"pass": True, "degenerate": True, "v": n, "k": k,
                "lambda": lam, "mu": None,
                "reason": "complete graph; mu undefined"}
    mu_vals = A2[mu_mask]
    if mu_vals.min() != mu_vals.max():
        return {"pass": False, "reason": "common-neighbor count varies on non-edges"}
    mu = int(mu_vals[0])
    expect = k * np.eye(n) + lam * A + mu * (np.ones((n, n)) - np.eye(n) - A)
    if not np.array_equal(A2, expect):
        xs, ys = np.nonzero(A2 != expect)
        return {"pass": False, "reason": "A^2 identity fails",
                "witness_pair": [int(xs[0]), int(ys[0])]}
    return {"pass": True, "degenerate": False, "v": n, "k": k,
            "lambda": lam, "mu": mu}


def diff_tables(ta: RelationTable, tb: RelationTable):
    """All (i, j), i < j, where the class assignments differ."""
    if ta.n != tb.n:
        raise ValueError(f"size mismatch: {ta.n} vs {tb.n}")
    xs, ys = np.nonzero(ta.classes != tb.classes)
    return [(int(i), int(j)) for i, j in zip(xs, ys) if i < j]


# ---------------------------------------------------------------------------
# the family's known first eigenmatrix

@lru_cache(maxsize=None)
def expected_p_matrix(q: int):
    """First eigenmatrix of the 3-class family at even q, valency row first."""
    F = Fraction
    return (
        (F(1), F((q - 2) * (q * q + 1), 2), F(q * (q * q + 1), 2),
         F(q * (q - 2) * (q * q + 1), 2)),
        (F(1), F(-(q - 1) * (q - 2), 2), F(-q * (q - 1), 2), F(q * (q - 2))),
        (F(1), F(-(q * q - q + 2), 2), F(q * (q + 1), 2), F(-q)),
        (F(1), F(q - 1), F(0), F(-q)),
    )


def frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"
