"""Exact arithmetic over GF(p) and GF(2^m), plus the small amount of
linear algebra the rest of the package needs.

Elements are plain integers in ``[0, q)``.  For binary extension fields an
element is the bit vector of its polynomial coefficients (bit ``k`` is the
coefficient of ``x^k``).  Matrices are ``numpy.int64`` arrays; every routine
here is exact, nothing ever touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "DEFAULT_MODULI",
    "FieldError",
    "FieldSpec",
    "GF",
    "field_op",
    "get_field",
    "is_irreducible_gf2",
    "mat_rank",
    "member_of_subspace_sum",
    "spaces_intersect_nontrivially",
    "supported_orders",
]

# Bitmask encodings; bit k is the coefficient of x^k.
DEFAULT_MODULI = {
    2: 0x7,
    3: 0xB,
    4: 0x13,       # x^4 + x + 1
    5: 0x25,
    6: 0x43,
    7: 0x83,
    8: 0x11B,      # x^8 + x^4 + x^3 + x + 1
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x4443,
    15: 0x8003,
    16: 0x1002D,
}

MAX_PRIME = 1 << 16
MAX_DEGREE = 16


class FieldError(ValueError):
    """Invalid field description or an undefined field operation."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    k = 2
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        out.append(n)
    return out


def _poly_mod2(a: int, m: int) -> int:
    """Remainder of GF(2)[x] polynomial ``a`` modulo ``m`` (bitmasks)."""
    dm = m.bit_length()
    while a.bit_length() >= dm:
        a ^= m << (a.bit_length() - dm)
    return a


def _poly_mulmod2(a: int, b: int, m: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
    return _poly_mod2(r, m)


def is_irreducible_gf2(modulus: int) -> bool:
    """Trial division by every polynomial of degree 1..deg/2."""
    deg = modulus.bit_length() - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for low in range(1 << d):
            if _poly_mod2(modulus, (1 << d) | low) == 0:
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Description of a finite field: GF(p) or GF(2^m) with a modulus.

    ``modulus`` is the bitmask of the reducing polynomial and is ignored
    (kept ``None``) when ``m == 1``.
    """

    p: int
    m: int = 1
    modulus: int | None = None

    def __post_init__(self):
        if not _is_prime(self.p) or self.p >= MAX_PRIME:
            raise FieldError(f"characteristic must be a prime below {MAX_PRIME}, got {self.p}")
        if self.m < 1:
            raise FieldError(f"degree must be >= 1, got {self.m}")
        if self.m == 1:
            object.__setattr__(self, "modulus", None)
            return
        if self.p != 2:
            raise FieldError("extension fields are only supported in characteristic 2")
        if self.m > MAX_DEGREE:
            raise FieldError(f"degree must be <= {MAX_DEGREE}, got {self.m}")
        if self.modulus is None:
            object.__setattr__(self, "modulus", DEFAULT_MODULI[self.m])
        if self.modulus.bit_length() - 1 != self.m:
            raise FieldError(f"modulus {self.modulus:#x} does not have degree {self.m}")
        if not is_irreducible_gf2(self.modulus):
            raise FieldError(f"modulus {self.modulus:#x} is reducible over GF(2)")

    @property
    def order(self) -> int:
        return self.p ** self.m

    @classmethod
    def of_order(cls, q: int) -> "FieldSpec":
        """The supported field with ``q`` elements (default modulus)."""
        if _is_prime(q):
            return cls(q)
        m = q.bit_length() - 1
        if q == 1 << m and m >= 1:
            return cls(2, m)
        raise FieldError(f"no supported field of order {q}")

    def to_json(self) -> dict:
        out = {"p": self.p, "m": self.m}
        if self.m > 1:
            out["modulus"] = [(self.modulus >> k) & 1 for k in range(self.m + 1)]
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "FieldSpec":
        p = int(obj["p"])
        m = int(obj.get("m", 1))
        coeffs = obj.get("modulus")
        modulus = None
        if coeffs is not None and m > 1:
            if len(coeffs) != m + 1:
                raise FieldError(f"modulus must list {m + 1} coefficients, got {len(coeffs)}")
            modulus = sum(int(c) << k for k, c in enumerate(coeffs))
        return cls(p, m, modulus)


def supported_orders(limit: int = MAX_PRIME) -> list[int]:
    """All field orders up to ``limit`` this module can build, ascending."""
    orders = {q for q in range(2, min(limit, MAX_PRIME - 1) + 1) if _is_prime(q)}
    orders.update(1 << m for m in range(1, MAX_DEGREE + 1) if (1 << m) <= limit)
    return sorted(orders)


class GF:
    """A concrete finite field with vectorised numpy arithmetic.

    All arithmetic methods accept Python ints or integer arrays and
    broadcast like numpy ufuncs.
    """

    def __init__(self, spec: FieldSpec | int, m: int = 1, modulus: int | None = None):
        if not isinstance(spec, FieldSpec):
            spec = FieldSpec(int(spec), m, modulus)
        self.spec = spec
        self.p = spec.p
        self.m = spec.m
        self.q = spec.order
        self.binary = self.p == 2 and self.m > 1
        self._build_tables()

    def __repr__(self):
        if self.m == 1:
            return f"GF({self.p})"
        return f"GF(2^{self.m}, modulus={self.spec.modulus:#x})"

    def __eq__(self, other):
        return isinstance(other, GF) and self.spec == other.spec

    def __hash__(self):
        return hash(self.spec)

    def _schoolbook_mul(self, a: int, b: int) -> int:
        if self.binary:
            return _poly_mulmod2(a, b, self.spec.modulus)
        return a * b % self.p

    def _build_tables(self):
        q = self.q
        if q == 2:
            self._exp = np.array([1, 1, 1], dtype=np.int64)
            self._log = np.array([0, 0], dtype=np.int64)
            self._inv = np.array([0, 1], dtype=np.int64)
            return
        factors = _prime_factors(q - 1)
        for g in range(2, q):
            if all(self._pow_slow(g, (q - 1) // r) != 1 for r in factors):
                break
        exp = np.empty(2 * q, dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        x = 1
        for k in range(q - 1):
            exp[k] = x
            log[x] = k
            x = self._schoolbook_mul(x, g)
        exp[q - 1:2 * (q - 1)] = exp[: q - 1]
        exp[2 * (q - 1):] = exp[: 2 * q - 2 * (q - 1)]
        self._exp = exp
        self._log = log
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = exp[(q - 1 - log[1:]) % (q - 1)]
        self._inv = inv
        self.generator = g

    def _pow_slow(self, a: int, n: int) -> int:
        r = 1
        while n:
            if n & 1:
                r = self._schoolbook_mul(r, a)
            a = self._schoolbook_mul(a, a)
            n >>= 1
        return r

    # -- elementwise arithmetic ------------------------------------------

    def add(self, a, b):
        if self.binary:
            return np.bitwise_xor(a, b)
        return (np.asarray(a, dtype=np.int64) + b) % self.p

    def sub(self, a, b):
        if self.binary:
            return np.bitwise_xor(a, b)
        return (np.asarray(a, dtype=np.int64) - b) % self.p

    def neg(self, a):
        if self.binary:
            return np.asarray(a, dtype=np.int64)
        return (-np.asarray(a, dtype=np.int64)) % self.p

    def mul(self, a, b):
        if not self.binary:
            return np.asarray(a, dtype=np.int64) * b % self.p
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        prod = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, prod)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise FieldError("division by zero")
        return self._inv[a]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def scalar(self, a) -> int:
        return int(a) % self.q if not self.binary else int(a)

    def random(self, shape, rng: np.random.Generator):
        return rng.integers(0, self.q, size=shape, dtype=np.int64)

    # -- matrices ------------------------------------------------------------

    def asmatrix(self, M, cols: int | None = None) -> np.ndarray:
        A = np.array(M, dtype=np.int64)
        if A.ndim == 1:
            A = A.reshape(1, -1) if A.size else np.zeros((0, cols or 0), dtype=np.int64)
        if A.ndim != 2:
            raise FieldError(f"expected a 2-d matrix, got shape {A.shape}")
        if A.size and (A.min() < 0 or A.max() >= self.q):
            raise FieldError(f"matrix entries must lie in [0, {self.q})")
        return A

    def matmul(self, A, B) -> np.ndarray:
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if A.shape[-1] != B.shape[0]:
            raise FieldError(f"shape mismatch {A.shape} @ {B.shape}")
        if not self.binary:
            # entries < 2^16, so each product < 2^32 and sums stay in int64
            return (A @ B) % self.p
        out = np.zeros(A.shape[:-1] + B.shape[1:], dtype=np.int64)
        for k in range(A.shape[-1]):
            a = A[..., k, None] if B.ndim > 1 else A[..., k]
            out ^= self.mul(a, B[k])
        return out

    def rref(self, M) -> tuple[np.ndarray, list[int]]:
        """Reduced row echelon form and pivot columns (first-nonzero pivoting)."""
        A = np.array(M, dtype=np.int64, copy=True)
        rows, cols = A.shape
        pivots = []
        r = 0
        for c in range(cols):
            if r == rows:
                break
            nz = np.flatnonzero(A[r:, c])
            if nz.size == 0:
                continue
            piv = r + int(nz[0])
            if piv != r:
                A[[r, piv]] = A[[piv, r]]
            if A[r, c] != 1:
                A[r] = self.mul(A[r], self._inv[A[r, c]])
            col = A[:, c].copy()
            col[r] = 0
            hit = np.flatnonzero(col)
            if hit.size:
                A[hit] = self.sub(A[hit], self.mul(col[hit, None], A[r]))
            pivots.append(c)
            r += 1
        return A, pivots

    def rank(self, M) -> int:
        A = np.asarray(M, dtype=np.int64)
        if A.size == 0:
            return 0
        return len(self.rref(A)[1])

    def rank_batch(self, stack) -> np.ndarray:
        """Ranks of a ``(batch, rows, cols)`` stack, eliminated in lockstep."""
        A = np.array(stack, dtype=np.int64, copy=True)
        nb, rows, cols = A.shape
        rank = np.zeros(nb, dtype=np.int64)
        if nb == 0 or rows == 0:
            return rank
        ridx = np.arange(rows)
        for c in range(cols):
            cand = (A[:, :, c] != 0) & (ridx[None, :] >= rank[:, None])
            b = np.flatnonzero(cand.any(axis=1))
            if b.size == 0:
                continue
            piv = cand[b].argmax(axis=1)
            rb = rank[b]
            top = A[b, rb].copy()
            A[b, rb] = A[b, piv]
            A[b, piv] = top
            A[b, rb] = self.mul(A[b, rb], self._inv[A[b, rb, c]][:, None])
            factors = np.where(ridx[None, :] > rb[:, None], A[b, :, c], 0)
            A[b] = self.sub(A[b], self.mul(factors[:, :, None], A[b, rb][:, None, :]))
            rank[b] += 1
            if np.all(rank == rows):
                break
        return rank

    def row_basis(self, M) -> np.ndarray:
        A = np.asarray(M, dtype=np.int64)
        if A.size == 0:
            return A.reshape(0, A.shape[-1] if A.ndim == 2 else 0)
        R, piv = self.rref(A)
        return R[: len(piv)]

    def nullspace(self, M) -> np.ndarray:
        """Basis (as rows) of the right null space ``{x : M x = 0}``."""
        A = np.asarray(M, dtype=np.int64)
        cols = A.shape[1]
        if A.shape[0] == 0:
            return np.eye(cols, dtype=np.int64)
        R, piv = self.rref(A)
        free = [c for c in range(cols) if c not in piv]
        basis = np.zeros((len(free), cols), dtype=np.int64)
        for k, f in enumerate(free):
            basis[k, f] = 1
            for i, pc in enumerate(piv):
                basis[k, pc] = self.neg(R[i, f])
        return basis

    def reduce(self, basis_rref: np.ndarray, pivots: list[int], V) -> np.ndarray:
        """Residues of the rows of ``V`` modulo a row space in RREF."""
        V = np.array(V, dtype=np.int64, copy=True)
        for i, c in enumerate(pivots):
            coef = V[:, c].copy()
            hit = np.flatnonzero(coef)
            if hit.size:
                V[hit] = self.sub(V[hit], self.mul(coef[hit, None], basis_rref[i]))
        return V

    def solve_left(self, A, b):
        """One solution ``y`` of ``y A = b`` and a basis of ``{y : y A = 0}``.

        Returns ``(None, kernel)`` when the system is inconsistent.
        """
        A = np.asarray(A, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64).reshape(-1)
        n = A.shape[0]
        # y A = b  <=>  A^T y^T = b^T
        aug = np.concatenate([A.T, b[:, None]], axis=1)
        R, piv = self.rref(aug)
        kernel = self.nullspace(A.T) if n else np.zeros((0, 0), dtype=np.int64)
        if n in piv:
            return None, kernel
        y = np.zeros(n, dtype=np.int64)
        for i, c in enumerate(piv):
            y[c] = R[i, n]
        return y, kernel


@lru_cache(maxsize=None)
def get_field(spec: FieldSpec) -> GF:
    """Shared, cached field instance for a spec."""
    return GF(spec)


def field_op(a: int, b: int, kind: str, field: GF) -> int:
    """Single field operation ``kind`` in {add, sub, mul, div}.

    Raises :class:`FieldError` for division by zero or operands outside
    the field.
    """
    for v in (a, b):
        if not 0 <= int(v) < field.q:
            raise FieldError(f"{v} is not an element of {field!r}")
    ops = {"add": field.add, "sub": field.sub, "mul": field.mul, "div": field.div}
    if kind not in ops:
        raise FieldError(f"unknown operation {kind!r}")
    return int(ops[kind](int(a), int(b)))


def mat_rank(field: GF, M) -> int:
    return field.rank(M)


def _same_width(*mats):
    widths = {np.asarray(m).shape[-1] for m in mats}
    if len(widths) > 1:
        raise FieldError(f"dimension mismatch: column counts {sorted(widths)}")


def spaces_intersect_nontrivially(field: GF, A, B) -> bool:
    """True iff rowspace(A) and rowspace(B) share a nonzero vector."""
    A = np.atleast_2d(np.asarray(A, dtype=np.int64))
    B = np.atleast_2d(np.asarray(B, dtype=np.int64))
    _same_width(A, B)
    return field.rank(A) + field.rank(B) > field.rank(np.vstack([A, B]))


def member_of_subspace_sum(field: GF, v, U, W) -> bool:
    """True iff ``v`` lies in rowspace(U) + rowspace(W)."""
    v = np.asarray(v, dtype=np.int64).reshape(1, -1)
    U = np.atleast_2d(np.asarray(U, dtype=np.int64))
    W = np.atleast_2d(np.asarray(W, dtype=np.int64))
    _same_width(v, U, W)
    UW = np.vstack([U, W])
    return field.rank(UW) == field.rank(np.vstack([UW, v]))
