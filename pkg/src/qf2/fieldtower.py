"""Exact arithmetic in iterated Laurent-series towers over GF(2^e).

The supported fields are F_{2^e}((t1))...((tn)).  Computable elements are
iterated rational fractions: at level n an element is a reduced fraction of
polynomials in t_n whose coefficients are level n-1 elements; at level 0 an
element of F_{2^e} in a fixed polynomial basis (stored as an int bitmask).
Every decision procedure here (valuation, squareness, Artin-Schreier class)
is exact on this representation and answers the question for the full
Laurent field, not just for the fraction subfield.

Conventions:
  * fractions are gcd-reduced with monic denominator (in the top variable,
    with recursively canonical coefficients), so equality is structural;
  * addition is its own inverse (characteristic 2);
  * the degree of any intermediate polynomial is capped (DegreeOverflow)
    so that fraction blow-up stays observable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Union

from .errors import (DegreeOverflow, FieldMismatch, ParseError, TowerDepthExceeded,
                     ZeroElement)

__all__ = [
    "FieldDescriptor", "FieldElem", "WpClass", "ExtensionResult",
    "valuation_split", "unit_residue", "is_square", "frobenius_components",
    "wp_reduce", "wp_member", "wp_add", "quad_extend",
    "parse_field", "parse_element", "render_element",
    "DEFAULT_DEGREE_CAP", "DEFAULT_TOWER_CAP", "set_degree_cap", "get_degree_cap",
]

DEFAULT_DEGREE_CAP = 64
DEFAULT_TOWER_CAP = 4

_degree_cap = DEFAULT_DEGREE_CAP


def set_degree_cap(cap: int) -> None:
    global _degree_cap
    if cap < 4:
        raise ValueError("degree cap too small")
    _degree_cap = cap


def get_degree_cap() -> int:
    return _degree_cap


# ---------------------------------------------------------------------------
# GF(2^e) arithmetic on int bitmasks.
#
# An element of F_{2^e} is an int < 2^e: bit i is the coefficient of x^i in
# the polynomial basis modulo a fixed irreducible polynomial (the smallest
# one of degree e in lexicographic order, computed once per exponent).

def _poly2_mul(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def _poly2_divmod(a: int, b: int):
    if b == 0:
        raise ZeroDivisionError
    db = b.bit_length() - 1
    q = 0
    while a.bit_length() - 1 >= db and a:
        sh = a.bit_length() - 1 - db
        q ^= 1 << sh
        a ^= b << sh
    return q, a


def _poly2_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, _poly2_divmod(a, b)[1]
    return a


def _poly2_powmod(a: int, n: int, m: int) -> int:
    r = 1
    a = _poly2_divmod(a, m)[1]
    while n:
        if n & 1:
            r = _poly2_divmod(_poly2_mul(r, a), m)[1]
        a = _poly2_divmod(_poly2_mul(a, a), m)[1]
        n >>= 1
    return r


def _is_irreducible(f: int, e: int) -> bool:
    # f irreducible over F_2 iff x^(2^e) = x mod f and gcd(x^(2^(e/p)) - x, f) = 1
    # for every prime p dividing e.
    if _poly2_powmod(2, 2 ** e, f) != _poly2_divmod(2, f)[1]:
        return False
    d, primes = e, []
    p = 2
    while p * p <= d:
        if d % p == 0:
            primes.append(p)
            while d % p == 0:
                d //= p
        p += 1
    if d > 1:
        primes.append(d)
    for p in primes:
        g = _poly2_gcd(_poly2_powmod(2, 2 ** (e // p), f) ^ 2, f)
        if g != 1:
            return False
    return True


@lru_cache(maxsize=None)
def _modulus(e: int) -> int:
    """Smallest irreducible polynomial of degree e over F_2, as a bitmask."""
    if e == 1:
        return 0b10  # x itself: F_2[x]/(x) = F_2
    for f in range(1 << e, 1 << (e + 1)):
        if f & 1 and _is_irreducible(f, e):
            return f
    raise AssertionError(f"no irreducible of degree {e}")


class _GF2e:
    """Arithmetic context for F_{2^e}."""

    def __init__(self, e: int):
        self.e = e
        self.q = 1 << e
        self.mod = _modulus(e)

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a & b
        return _poly2_divmod(_poly2_mul(a, b), self.mod)[1]

    def square(self, a: int) -> int:
        return self.mul(a, a)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError
        return self.pow(a, self.q - 2)

    def pow(self, a: int, n: int) -> int:
        r = 1
        while n:
            if n & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            n >>= 1
        return r

    def sqrt(self, a: int) -> int:
        # Frobenius is bijective: sqrt(a) = a^(2^(e-1)).
        return self.pow(a, 1 << (self.e - 1))

    def trace(self, a: int) -> int:
        t, x = 0, a
        for _ in range(self.e):
            t ^= x
            x = self.mul(x, x)
        return t & 1 if self.e > 1 else a & 1

    def wp_image(self, a: int) -> int:
        return self.mul(a, a) ^ a

    def wp_solve(self, c: int) -> Optional[int]:
        """A root of z^2 + z = c, or None (exists iff trace 0)."""
        if self.trace(c):
            return None
        # z -> z^2 + z is F_2-linear; solve the e x e bit system over the
        # basis images by elimination.
        images = [self.wp_image(1 << i) for i in range(self.e)]
        rows = [[(images[j] >> bit) & 1 for j in range(self.e)] + [(c >> bit) & 1]
                for bit in range(self.e)]
        n = self.e
        piv_of_col = [-1] * n
        r = 0
        for col in range(n):
            pr = None
            for i in range(r, n):
                if rows[i][col]:
                    pr = i
                    break
            if pr is None:
                continue
            rows[r], rows[pr] = rows[pr], rows[r]
            for i in range(n):
                if i != r and rows[i][col]:
                    rows[i] = [x ^ y for x, y in zip(rows[i], rows[r])]
            piv_of_col[col] = r
            r += 1
        z = 0
        for col in range(n):
            if piv_of_col[col] >= 0 and rows[piv_of_col[col]][n]:
                z |= 1 << col
        if self.wp_image(z) != c:
            return None
        return z


@lru_cache(maxsize=None)
def _gf(e: int) -> _GF2e:
    return _GF2e(e)


@lru_cache(maxsize=None)
def _embedding_table(e: int, e2: int):
    """Powers rho^i (i < e) of a root rho of modulus(e) inside F_{2^e2}."""
    if e2 % e != 0:
        raise FieldMismatch(f"F_2^{e} does not embed in F_2^{e2}")
    if e == 1:
        return (1,)
    big = _gf(e2)
    mod = _modulus(e)
    deg = e
    for cand in range(big.q):
        acc, val = 1, 0
        for i in range(deg + 1):
            if (mod >> i) & 1:
                val ^= acc
            acc = big.mul(acc, cand)
        if val == 0:
            rho = cand
            break
    else:
        raise AssertionError("no root found for embedding")
    table, acc = [], 1
    for _ in range(e):
        table.append(acc)
        acc = big.mul(acc, rho)
    return tuple(table)


def _embed_base(x: int, e: int, e2: int) -> int:
    table = _embedding_table(e, e2)
    r = 0
    i = 0
    while x:
        if x & 1:
            r ^= table[i]
        x >>= 1
        i += 1
    return r


# ---------------------------------------------------------------------------
# Field descriptors.

@dataclass(frozen=True)
class FieldDescriptor:
    """A tower F_{2^e}((t1))...((tn)).

    extension_chain records the Artin-Schreier constant extensions that were
    applied to reach this base (rendered deltas, provenance only).
    """

    base_exponent: int = 1
    variables: tuple = ()
    extension_chain: tuple = ()

    def __post_init__(self):
        if self.base_exponent < 1:
            raise ValueError("base exponent must be >= 1")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("variable names must be unique")
        if len(self.variables) > DEFAULT_TOWER_CAP:
            raise TowerDepthExceeded(f"{len(self.variables)} > {DEFAULT_TOWER_CAP}")

    @property
    def level(self) -> int:
        return len(self.variables)

    def lower(self) -> "FieldDescriptor":
        if not self.variables:
            raise ValueError("already at the base")
        return FieldDescriptor(self.base_exponent, self.variables[:-1],
                               self.extension_chain)

    @property
    def top_variable(self) -> str:
        return self.variables[-1]

    def embeds_in(self, other: "FieldDescriptor") -> bool:
        return (other.base_exponent % self.base_exponent == 0
                and other.variables[:self.level] == self.variables)

    def render(self) -> str:
        base = "F2" if self.base_exponent == 1 else f"F2^{self.base_exponent}"
        return base + "".join(f"(({v}))" for v in self.variables)

    def __repr__(self):
        return f"FieldDescriptor<{self.render()}>"

    # element constructors -------------------------------------------------
    def zero(self) -> "FieldElem":
        return FieldElem(self, _ops(self).zero)

    def one(self) -> "FieldElem":
        return FieldElem(self, _ops(self).one)

    def from_base(self, bits: int) -> "FieldElem":
        if not 0 <= bits < (1 << self.base_exponent):
            raise ValueError(f"{bits} out of range for F_2^{self.base_exponent}")
        return FieldElem(self, _ops(self).lift_const(bits))

    def generator(self) -> "FieldElem":
        if self.base_exponent == 1:
            raise ValueError("F_2 has no generator beyond 1")
        return self.from_base(2)

    def var(self, name: str) -> "FieldElem":
        if name not in self.variables:
            raise ValueError(f"unknown variable {name!r}")
        idx = self.variables.index(name)
        data = _ops_key(self.base_exponent, idx + 1).var_data()
        for lvl in range(idx + 2, self.level + 1):
            data = _ops_key(self.base_exponent, lvl).lift_data(data)
        return FieldElem(self, data)

    def element(self, text: str) -> "FieldElem":
        return parse_element(self, text)


# ---------------------------------------------------------------------------
# Level operations on raw data.
#
# Raw data: level 0 -> int; level n -> (num, den) with num/den tuples of
# lower-level raw data (coefficient of degree i at index i, last entry
# nonzero, () the zero polynomial).


class _BaseOps:
    level = 0

    def __init__(self, e: int):
        self.gf = _gf(e)
        self.zero = 0
        self.one = 1

    def is_zero(self, x):
        return x == 0

    def add(self, x, y):
        return x ^ y

    def mul(self, x, y):
        return self.gf.mul(x, y)

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError
        return self.gf.inv(x)

    def sqrt_exact(self, x):
        return self.gf.sqrt(x)

    def is_square(self, x):
        return True

    def lift_const(self, bits):
        return bits

    def lift_data(self, lower_data):
        raise ValueError("base level has nothing below")


class _FracOps:
    def __init__(self, lower):
        self.lower = lower
        self.level = lower.level + 1
        self.zero = ((), (lower.one,))
        self.one = ((lower.one,), (lower.one,))

    # --- polynomial layer -------------------------------------------------
    def ptrim(self, p):
        n = len(p)
        while n and self.lower.is_zero(p[n - 1]):
            n -= 1
        return tuple(p[:n])

    def padd(self, p, q):
        if len(p) < len(q):
            p, q = q, p
        out = list(p)
        for i, c in enumerate(q):
            out[i] = self.lower.add(out[i], c)
        return self.ptrim(out)

    def pmul(self, p, q):
        if not p or not q:
            return ()
        if p == (self.lower.one,):
            return q
        if q == (self.lower.one,):
            return p
        deg = len(p) + len(q) - 2
        if deg > _degree_cap:
            raise DegreeOverflow(f"degree {deg} exceeds cap {_degree_cap}")
        out = [self.lower.zero] * (deg + 1)
        for i, a in enumerate(p):
            if self.lower.is_zero(a):
                continue
            for j, b in enumerate(q):
                if self.lower.is_zero(b):
                    continue
                out[i + j] = self.lower.add(out[i + j], self.lower.mul(a, b))
        return self.ptrim(out)

    def pscale(self, p, c):
        if self.lower.is_zero(c):
            return ()
        return self.ptrim([self.lower.mul(a, c) for a in p])

    def pdivmod(self, p, q):
        if not q:
            raise ZeroDivisionError
        inv_lc = self.lower.inv(q[-1])
        rem = list(p)
        quo = [self.lower.zero] * max(0, len(p) - len(q) + 1)
        while len(rem) >= len(q):
            if self.lower.is_zero(rem[-1]):
                rem.pop()
                continue
            sh = len(rem) - len(q)
            c = self.lower.mul(rem[-1], inv_lc)
            quo[sh] = c
            for i, b in enumerate(q):
                rem[sh + i] = self.lower.add(rem[sh + i], self.lower.mul(b, c))
            rem.pop()
        return self.ptrim(quo), self.ptrim(rem)

    def pgcd(self, p, q):
        while q:
            p, q = q, self.pdivmod(p, q)[1]
        if p:
            p = self.pscale(p, self.lower.inv(p[-1]))
        return p

    def pval(self, p):
        """Index of the lowest nonzero coefficient (p nonzero)."""
        for i, c in enumerate(p):
            if not self.lower.is_zero(c):
                return i
        raise ZeroElement

    # --- fraction layer ---------------------------------------------------
    def canon(self, num, den):
        num, den = self.ptrim(num), self.ptrim(den)
        if not den:
            raise ZeroDivisionError
        if not num:
            return self.zero
        if den == (self.lower.one,):
            return (num, den)
        g = self.pgcd(num, den)
        if len(g) > 1:
            num = self.pdivmod(num, g)[0]
            den = self.pdivmod(den, g)[0]
        lc = den[-1]
        if lc != self.lower.one:
            ilc = self.lower.inv(lc)
            num = self.pscale(num, ilc)
            den = self.pscale(den, ilc)
        return (num, den)

    def is_zero(self, x):
        return not x[0]

    def add(self, x, y):
        (n1, d1), (n2, d2) = x, y
        if d1 == d2:
            return self.canon(self.padd(n1, n2), d1)
        return self.canon(self.padd(self.pmul(n1, d2), self.pmul(n2, d1)),
                          self.pmul(d1, d2))

    def mul(self, x, y):
        (n1, d1), (n2, d2) = x, y
        return self.canon(self.pmul(n1, n2), self.pmul(d1, d2))

    def inv(self, x):
        n, d = x
        if not n:
            raise ZeroDivisionError
        return self.canon(d, n)

    def is_square(self, x):
        n, d = x
        if not n:
            return True
        f = self.pmul(n, d)
        for i, c in enumerate(f):
            if i % 2 == 1 and not self.lower.is_zero(c):
                return False
            if i % 2 == 0 and not self.lower.is_square(c):
                return False
        return True

    def sqrt_exact(self, x):
        """Square root of a known square (is_square(x) must hold)."""
        n, d = x
        if not n:
            return self.zero
        f = self.pmul(n, d)
        root = [self.lower.zero] * ((len(f) + 1) // 2)
        for i in range(0, len(f), 2):
            root[i // 2] = self.lower.sqrt_exact(f[i])
        return self.canon(self.ptrim(root), d)

    def lift_const(self, bits):
        return self.lift_data(self.lower.lift_const(bits))

    def lift_data(self, lower_data):
        if self.lower.is_zero(lower_data):
            return self.zero
        return ((lower_data,), (self.lower.one,))

    def var_data(self):
        return ((self.lower.zero, self.lower.one), (self.lower.one,))

    def shift(self, x, k):
        """Multiply by t^k (k may be negative)."""
        n, d = x
        if not n:
            return self.zero
        if k >= 0:
            return self.canon((self.lower.zero,) * k + n, d)
        return self.canon(n, (self.lower.zero,) * (-k) + d)


@lru_cache(maxsize=None)
def _ops_key(e: int, level: int):
    if level == 0:
        return _BaseOps(e)
    return _FracOps(_ops_key(e, level - 1))


def _ops(K: FieldDescriptor):
    return _ops_key(K.base_exponent, K.level)


# ---------------------------------------------------------------------------
# Elements.

@dataclass(frozen=True)
class FieldElem:
    """An exact element of a Laurent tower; immutable, structural equality."""

    field: FieldDescriptor
    data: Union[int, tuple]

    def _ops(self):
        return _ops(self.field)

    def _check(self, other):
        if self.field != other.field:
            raise FieldMismatch(f"{self.field.render()} vs {other.field.render()}")

    def is_zero(self) -> bool:
        return self._ops().is_zero(self.data)

    def is_one(self) -> bool:
        return self.data == self._ops().one

    def __add__(self, other: "FieldElem") -> "FieldElem":
        self._check(other)
        return FieldElem(self.field, self._ops().add(self.data, other.data))

    __sub__ = __add__  # characteristic 2

    def __mul__(self, other: "FieldElem") -> "FieldElem":
        self._check(other)
        return FieldElem(self.field, self._ops().mul(self.data, other.data))

    def __truediv__(self, other: "FieldElem") -> "FieldElem":
        self._check(other)
        return FieldElem(self.field, self._ops().mul(self.data,
                                                     self._ops().inv(other.data)))

    def inverse(self) -> "FieldElem":
        return FieldElem(self.field, self._ops().inv(self.data))

    def __pow__(self, n: int) -> "FieldElem":
        if n < 0:
            return self.inverse() ** (-n)
        r = self.field.one()
        b = self
        while n:
            if n & 1:
                r = r * b
            n >>= 1
            if n:
                b = b * b
        return r

    def square(self) -> "FieldElem":
        return self * self

    def __str__(self):
        return render_element(self)

    def __repr__(self):
        return f"<{render_element(self)} over {self.field.render()}>"

    def lift_to(self, K: FieldDescriptor) -> "FieldElem":
        """Embed into a larger tower (base divides, variables extend)."""
        if not self.field.embeds_in(K):
            raise FieldMismatch(f"{self.field.render()} does not embed in {K.render()}")
        data = self.data
        if K.base_exponent != self.field.base_exponent:
            data = _embed_raw(data, self.field.level,
                              self.field.base_exponent, K.base_exponent)
        for lvl in range(self.field.level, K.level):
            sub = FieldDescriptor(K.base_exponent, K.variables[:lvl + 1],
                                  K.extension_chain)
            data = _ops(sub).lift_data(data)
        return FieldElem(K, data)


def _embed_raw(data, level, e, e2):
    if level == 0:
        return _embed_base(data, e, e2)
    n, d = data
    return (tuple(_embed_raw(c, level - 1, e, e2) for c in n),
            tuple(_embed_raw(c, level - 1, e, e2) for c in d))


# ---------------------------------------------------------------------------
# Valuation and squares.

def valuation_split(x: FieldElem, var: Optional[str] = None):
    """Write x = t^v * u with u a unit at the top variable; returns (v, u).

    The t-adic valuation at the top Laurent level.  Raises ZeroElement on 0
    (valuation +infinity is signalled by the exception, never by a number).
    """
    if x.field.level == 0:
        raise ValueError("base-field elements have no Laurent valuation")
    if var is not None and var != x.field.top_variable:
        raise ValueError(f"{var!r} is not the top variable of {x.field.render()}")
    if x.is_zero():
        raise ZeroElement("valuation of zero")
    ops = x._ops()
    n, d = x.data
    v = ops.pval(n) - ops.pval(d)
    u = FieldElem(x.field, ops.shift(x.data, -v))
    return v, u


def unit_residue(u: FieldElem) -> FieldElem:
    """Constant term of a valuation-0 element, as a lower-level element."""
    ops = u._ops()
    n, d = u.data
    if not n or ops.pval(n) != 0 or ops.pval(d) != 0:
        raise ZeroElement("not a unit at the top variable")
    return FieldElem(u.field.lower(), ops.lower.mul(n[0], ops.lower.inv(d[0])))


def is_square(x: FieldElem):
    """Decide x in K^2; on success also return the exact root.

    At a Laurent level x = p/q is a square iff p*q has zero odd-degree
    coefficients and square even-degree coefficients (squares in K are
    K^2 = k^2((t^2))); at the finite base everything is a square.
    """
    ops = x._ops()
    if ops.is_square(x.data):
        return True, FieldElem(x.field, ops.sqrt_exact(x.data))
    return False, None


def _series_prefix(x: FieldElem, upto: int):
    """Coefficients (c_v, ..., c_upto) of the expansion of x, plus v.

    Exact: from the reduced fraction, by power-series division of the unit
    part.  Only finitely many terms are requested.
    """
    ops = x._ops()
    lo = ops.lower
    n, d = x.data
    pv_n, pv_d = ops.pval(n), ops.pval(d)
    v = pv_n - pv_d
    n1 = n[pv_n:]
    d1 = d[pv_d:]
    count = upto - v + 1
    if count <= 0:
        return v, []
    inv0 = lo.inv(d1[0])
    coeffs = []
    for i in range(count):
        acc = n1[i] if i < len(n1) else lo.zero
        for j in range(1, min(i, len(d1) - 1) + 1):
            acc = lo.add(acc, lo.mul(d1[j], coeffs[i - j]))
        coeffs.append(lo.mul(acc, inv0))
    return v, coeffs


# ---------------------------------------------------------------------------
# Artin-Schreier classes.

@dataclass(frozen=True)
class WpClass:
    """Reduced representative of an element of K/wp(K), wp(x) = x^2 - x.

    wild holds (negative exponent, coefficient) pairs at the top variable:
    odd exponents carry arbitrary nonzero coefficients, even exponents carry
    non-square coefficients.  constant recurses one level down; at the finite
    base only the trace bit remains.  A class is zero iff it is structurally
    zero; equality of classes is semantic (same_class), not structural.
    """

    field: FieldDescriptor
    wild: tuple = ()            # ((exp, FieldElem at lower level), ...)
    constant: Optional["WpClass"] = None
    bit: Optional[int] = None   # only at level 0

    def is_zero(self) -> bool:
        if self.wild:
            return False
        if self.bit is not None:
            return self.bit == 0
        return self.constant.is_zero()

    def is_tame(self) -> bool:
        """No wild part at any level (class comes from the base constants)."""
        if self.wild:
            return False
        if self.bit is not None:
            return True
        return self.constant.is_tame()

    def trace_bit(self) -> int:
        if not self.is_tame():
            raise ValueError("wild class has no trace bit")
        c = self
        while c.bit is None:
            c = c.constant
        return c.bit

    def representative(self) -> FieldElem:
        """An exact element of the tower representing this class."""
        K = self.field
        if self.bit is not None:
            return K.from_base(_canonical_trace_one(K.base_exponent)) \
                if self.bit else K.zero()
        acc = self.constant.representative().lift_to(K)
        ops = _ops(K)
        t = K.var(K.top_variable)
        for exp, coeff in self.wild:
            term = coeff.lift_to(K) * t ** exp
            acc = acc + term
        return acc

    def plus(self, other: "WpClass") -> "WpClass":
        if self.field != other.field:
            raise FieldMismatch("classes over different fields")
        return wp_reduce(self.representative() + other.representative())

    def same_class(self, other: "WpClass") -> bool:
        return self.plus(other).is_zero()

    def to_json(self):
        if self.bit is not None:
            return {"bit": self.bit}
        return {"wild": [[e, render_element(c)] for e, c in self.wild],
                "constant": self.constant.to_json()}


@lru_cache(maxsize=None)
def _canonical_trace_one(e: int) -> int:
    gf = _gf(e)
    for x in range(1, gf.q):
        if gf.trace(x) == 1:
            return x
    raise AssertionError("no trace-one element")


def wp_reduce(a: FieldElem) -> WpClass:
    """Canonical reduction of a modulo wp(K) = {x^2 + x}.

    At a Laurent level: expand the principal part exactly; from the most
    negative exponent upward, odd poles are recorded, even poles with square
    coefficient c = d^2 are replaced by d at half the exponent (additivity of
    wp), even poles with non-square coefficient are recorded; the positive
    part is discarded (wp is onto the maximal ideal by Hensel); the constant
    term recurses.  At the base the class is the trace over F_2.
    """
    K = a.field
    if K.level == 0:
        return WpClass(K, bit=_gf(K.base_exponent).trace(a.data))
    lower = K.lower()
    if a.is_zero():
        return WpClass(K, wild=(), constant=wp_reduce(lower.zero()))
    ops = a._ops()
    lo = ops.lower
    v, coeffs = _series_prefix(a, 0)
    pending = {}
    for i, c in enumerate(coeffs):
        if not lo.is_zero(c):
            pending[v + i] = c
    # Invariant check: the discarded part a - (principal + constant) must
    # have positive valuation.
    tail = a.data
    for exp, c in pending.items():
        term = ops.shift(((c,), (lo.one,)), exp) if exp >= 0 else \
            ops.canon((c,), (lo.zero,) * (-exp) + (lo.one,))
        tail = ops.add(tail, term)
    if not ops.is_zero(tail):
        tn, td = tail
        assert ops.pval(tn) - ops.pval(td) >= 1, "principal-part extraction broken"

    # Most negative exponent first; square corrections inject new terms at
    # strictly larger (half) exponents, so the worklist must be dynamic.
    wild = []
    processed = set()
    while True:
        todo = [k for k in pending
                if k < 0 and k not in processed and not lo.is_zero(pending[k])]
        if not todo:
            break
        exp = min(todo)
        processed.add(exp)
        c = pending[exp]
        j = -exp
        if j % 2 == 1:
            wild.append((exp, FieldElem(lower, c)))
            continue
        if lo.is_square(c):
            d = lo.sqrt_exact(c)
            half = exp // 2
            pending[half] = lo.add(pending.get(half, lo.zero), d)
        else:
            wild.append((exp, FieldElem(lower, c)))
    wild.sort()
    const = pending.get(0, lo.zero)
    return WpClass(K, wild=tuple(wild),
                   constant=wp_reduce(FieldElem(lower, const)))


def wp_member(a: FieldElem) -> bool:
    """True iff a = z^2 + z for some z in the Laurent field."""
    return wp_reduce(a).is_zero()


def wp_add(a: WpClass, b: WpClass) -> WpClass:
    return a.plus(b)


def wp_root(a: FieldElem, _iter_cap: int = 128) -> Optional[FieldElem]:
    """A rational z with z^2 + z = a, or None.

    None means no root exists inside the fraction field (membership in
    wp(K-hat) may still hold; wp_member decides that).  The root of the
    positive-valuation part is found by the terminating rewrite
    r -> r + (c t^k + c^2 t^{2k}); when the rewrite does not terminate the
    root is a genuine infinite series and None is returned.
    """
    K = a.field
    if K.level == 0:
        bits = _gf(K.base_exponent).wp_solve(a.data)
        return None if bits is None else FieldElem(K, bits)
    if a.is_zero():
        return K.zero()
    lower = K.lower()
    t = K.var(K.top_variable)
    ops = a._ops()
    lo = ops.lower
    v, coeffs = _series_prefix(a, 0)
    z = K.zero()
    pending = {}
    for i, c in enumerate(coeffs):
        if not lo.is_zero(c):
            pending[v + i] = c
    processed = set()
    while True:
        todo = [k for k in pending
                if k < 0 and k not in processed and not lo.is_zero(pending[k])]
        if not todo:
            break
        exp = min(todo)
        processed.add(exp)
        c = pending[exp]
        if (-exp) % 2 == 1 or not lo.is_square(c):
            return None
        d = lo.sqrt_exact(c)
        half = exp // 2
        pending[half] = lo.add(pending.get(half, lo.zero), d)
        z = z + FieldElem(lower, d).lift_to(K) * t ** half
    const = FieldElem(lower, pending.get(0, lo.zero))
    z0 = wp_root(const)
    if z0 is None:
        return None
    z = z + z0.lift_to(K)
    try:
        r = a + z * z + z
        for _ in range(_iter_cap):
            if r.is_zero():
                assert z * z + z == a
                return z
            rv, ru = valuation_split(r)
            if rv < 1 or 2 * rv > _degree_cap:
                # an infinite-series root; not rational within the cap
                return None
            term = unit_residue(ru).lift_to(K) * t ** rv
            z = z + term
            r = r + term + term * term
    except DegreeOverflow:
        return None
    return None


# ---------------------------------------------------------------------------
# Quadratic Artin-Schreier extensions.

@dataclass(frozen=True)
class ExtensionResult:
    """Classification of K[theta]/(theta^2 + theta + delta).

    kind is one of "split" (etale K x K), "unramified" (constants extended:
    base F_{2^e} -> F_{2^{2e}}), "ramified" (unsupported in v1: consumers
    must degrade to Unknown verdicts).
    """

    kind: str
    field: FieldDescriptor
    new_field: Optional[FieldDescriptor] = None
    theta: Optional[FieldElem] = None
    delta_class: Optional[WpClass] = None

    @property
    def is_supported(self) -> bool:
        return self.kind != "ramified"

    def embed(self, x: FieldElem) -> FieldElem:
        if self.kind == "split":
            return x
        if self.kind != "unramified":
            raise FieldMismatch("no embedding for a ramified extension")
        return x.lift_to(self.new_field)


def quad_extend(K: FieldDescriptor, delta: FieldElem) -> ExtensionResult:
    """Classify the discriminant-type algebra K[T]/(T^2 - T - delta)."""
    if delta.field != K:
        raise FieldMismatch("delta not over K")
    cls = wp_reduce(delta)
    if cls.is_zero():
        return ExtensionResult("split", K, new_field=K, delta_class=cls)
    if cls.is_tame():
        e = K.base_exponent
        K2 = FieldDescriptor(2 * e, K.variables,
                             K.extension_chain + (render_element(delta),))
        alpha = _canonical_trace_one(e)
        theta_bits = _gf(2 * e).wp_solve(_embed_base(alpha, e, 2 * e))
        theta = K2.from_base(theta_bits) if theta_bits is not None else None
        return ExtensionResult("unramified", K, new_field=K2, theta=theta,
                               delta_class=cls)
    return ExtensionResult("ramified", K, delta_class=cls)


# ---------------------------------------------------------------------------
# Frobenius (K^2-linear) component decomposition.

def frobenius_components(x: FieldElem) -> dict:
    """Write x = sum_m y_m^2 * m over square-free monomials m in the tower
    variables; returns {exponent-bitvector: y_m} with zero components absent.

    The keys are tuples of 0/1 per variable (innermost first); [K : K^2] is
    2^n since the base field is perfect.
    """
    K = x.field
    if K.level == 0:
        return {(): FieldElem(K, _gf(K.base_exponent).sqrt(x.data))} \
            if x.data else {}
    if x.is_zero():
        return {}
    ops = x._ops()
    lo = ops.lower
    n, d = x.data
    f = ops.pmul(n, d)  # x = f / d^2
    lower = K.lower()
    halves = {}  # parity -> list of (half-degree, lower coeff)
    for i, c in enumerate(f):
        if lo.is_zero(c):
            continue
        halves.setdefault(i % 2, []).append((i // 2, c))
    out = {}
    for parity, terms in halves.items():
        # sum c_i t^(2q+parity) = t^parity * (sum over m' (y'_m')^2 m')^...
        # decompose each lower coefficient and regroup per lower monomial.
        per_m = {}
        for q, c in terms:
            for m, y in frobenius_components(FieldElem(lower, c)).items():
                per_m.setdefault(m, []).append((q, y))
        for m, pairs in per_m.items():
            poly = [lo.zero] * (max(q for q, _ in pairs) + 1)
            for q, y in pairs:
                poly[q] = lo.add(poly[q], y.data)
            num = ops.ptrim(poly)
            if not num:
                continue
            comp = FieldElem(K, ops.canon(num, d))
            out[m + (parity,)] = comp
    return out


# ---------------------------------------------------------------------------
# Parsing and rendering.

_TOKEN_RE = re.compile(r"\s*(\(\(|\)\)|[()+\-*/^;,\[\]<>=]|[A-Za-z_][A-Za-z_0-9]*|\d+)")


class _Tok:
    def __init__(self, text: str, doubles: bool = False):
        # doubles=True keeps "((" / "))" as single tokens (field syntax);
        # element and form expressions want plain parentheses.
        self.text = text
        self.toks = []
        self._scan(doubles)
        self.i = 0

    def _scan(self, doubles):
        pos = 0
        while pos < len(self.text):
            m = _TOKEN_RE.match(self.text, pos)
            if not m:
                if self.text[pos:].strip():
                    line = self.text.count("\n", 0, pos) + 1
                    col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
                    raise ParseError(line, col, "a token", self.text[pos])
                break
            tok, start = m.group(1), m.start(1)
            if not doubles and tok in ("((", "))"):
                half = tok[0]
                self.toks.append((half, start))
                self.toks.append((half, start + 1))
            else:
                self.toks.append((tok, start))
            pos = m.end()

    def _linecol(self, pos):
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def next(self):
        t = self.peek()
        self.i += 1
        return t

    def expect(self, tok):
        if self.peek() != tok:
            self.fail(repr(tok))
        return self.next()

    def fail(self, expected):
        if self.i < len(self.toks):
            t, pos = self.toks[self.i]
        else:
            t, pos = "<eof>", len(self.text)
        line, col = self._linecol(pos)
        raise ParseError(line, col, expected, t)

    def done(self):
        return self.i >= len(self.toks)


def parse_field(text: str) -> FieldDescriptor:
    """Parse `F2^e((t1))((t2))...`; F4/F16-style shorthands are accepted."""
    tk = _Tok(text, doubles=True)
    name = tk.next()
    if not name or not name.startswith("F"):
        tk.fail("a field name like F2 or F2^3")
    rest = name[1:]
    if not rest.isdigit():
        tk.fail("a field name like F2 or F2^3")
    q = int(rest)
    if tk.peek() == "^":
        if q != 2:
            tk.fail("only F2^e supports an explicit exponent")
        tk.next()
        exp_tok = tk.next()
        if exp_tok is None or not exp_tok.isdigit():
            tk.fail("an integer exponent")
        e = int(exp_tok)
    else:
        e = q.bit_length() - 1
        if q != (1 << e) or q < 2:
            tk.fail("a power of two")
    varnames = []
    while tk.peek() == "((":
        tk.next()
        v = tk.next()
        if not v or not v[0].isalpha():
            tk.fail("a variable name")
        varnames.append(v)
        tk.expect("))")
    if not tk.done():
        tk.fail("end of field declaration")
    return FieldDescriptor(e, tuple(varnames))


def _parse_expr(tk: _Tok, K: FieldDescriptor) -> FieldElem:
    x = _parse_term(tk, K)
    while tk.peek() in ("+", "-"):
        tk.next()
        x = x + _parse_term(tk, K)
    return x


def _parse_term(tk: _Tok, K: FieldDescriptor) -> FieldElem:
    x = _parse_factor(tk, K)
    while tk.peek() in ("*", "/"):
        op = tk.next()
        y = _parse_factor(tk, K)
        x = x * y if op == "*" else x / y
    return x


def _parse_factor(tk: _Tok, K: FieldDescriptor) -> FieldElem:
    x = _parse_atom(tk, K)
    if tk.peek() == "^":
        tk.next()
        sign = 1
        if tk.peek() == "-":
            tk.next()
            sign = -1
        n = tk.next()
        if n is None or not n.isdigit():
            tk.fail("an integer exponent")
        x = x ** (sign * int(n))
    return x


def _parse_atom(tk: _Tok, K: FieldDescriptor) -> FieldElem:
    t = tk.peek()
    if t == "(":
        tk.next()
        x = _parse_expr(tk, K)
        tk.expect(")")
        return x
    if t is None:
        tk.fail("an element")
    tk.next()
    if t.isdigit():
        return K.from_base(int(t))
    if t == "g":
        return K.generator()
    if t in K.variables:
        return K.var(t)
    tk.fail(f"a variable of {K.render()}, an integer, or 'g'")


def parse_element(K: FieldDescriptor, text: str) -> FieldElem:
    tk = _Tok(text)
    x = _parse_expr(tk, K)
    if not tk.done():
        tk.fail("end of element expression")
    return x


def _render_base(bits: int, e: int) -> str:
    if e == 1 or bits < 2:
        return str(bits)
    terms = []
    for i in range(e - 1, -1, -1):
        if (bits >> i) & 1:
            if i == 0:
                terms.append("1")
            elif i == 1:
                terms.append("g")
            else:
                terms.append(f"g^{i}")
    return "+".join(terms)


def _render_poly(p: tuple, level: int, e: int, varnames: tuple) -> str:
    if not p:
        return "0"
    var = varnames[level - 1]
    terms = []
    for i in range(len(p) - 1, -1, -1):
        c = p[i]
        if _ops_key(e, level - 1).is_zero(c):
            continue
        cs = _render_raw(c, level - 1, e, varnames)
        need_paren = ("+" in cs or "/" in cs) and i > 0
        if i == 0:
            terms.append(cs)
        else:
            tpart = var if i == 1 else f"{var}^{i}"
            if cs == "1":
                terms.append(tpart)
            elif need_paren:
                terms.append(f"({cs})*{tpart}")
            else:
                terms.append(f"{cs}*{tpart}")
    return "+".join(terms) if terms else "0"


def _render_raw(data, level: int, e: int, varnames: tuple) -> str:
    if level == 0:
        return _render_base(data, e)
    n, d = data
    ns = _render_poly(n, level, e, varnames)
    if d == (_ops_key(e, level - 1).one,):
        return ns
    ds = _render_poly(d, level, e, varnames)
    ns_p = f"({ns})" if "+" in ns or "/" in ns or "*" in ns else ns
    ds_p = f"({ds})" if "+" in ds or "/" in ds or "*" in ds else ds
    return f"{ns_p}/{ds_p}"


def render_element(x: FieldElem) -> str:
    return _render_raw(x.data, x.field.level, x.field.base_exponent,
                       x.field.variables)
