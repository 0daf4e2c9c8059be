"""Forward-mode automatic differentiation on nilpotent multi-dual numbers.

A ``MultiDual`` carries a truncated Taylor expansion in ``m`` anticommuting-free
nilpotent generators e_1, ..., e_m with e_k**2 = 0.  Coefficients are indexed by
subset bitmask, so a value with ``m`` generators stores ``2**m`` floats.  Seeding
generator ``k`` on coordinate ``j`` and reading the coefficient of the full mask
``e_1 e_2 ... e_m`` after evaluating a composite function yields the exact mixed
partial derivative of order ``m`` (up to floating point roundoff, with no step
size to tune).  Repeating a coordinate across slots yields repeated partials,
e.g. two slots on the same coordinate give the second pure partial.

Orders up to 4 are exercised heavily here (metric second derivatives through a
pulled-back chart Jacobian); the implementation is generic in ``m``.

The module also provides a small truncated univariate Taylor series type used
for Taylor-stepping autonomous ODE jets, plus scalar-generic helpers (``gsqrt``,
``gexp``, ...) and a scalar-generic linear solver so that the same evaluator
code runs on floats and on dual numbers.
"""

from __future__ import annotations

import math

import numpy as np

_MUL_TABLES: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}


def _mul_table(m: int):
    """Index arrays (ia, ib, iout) over disjoint subset pairs of {1..m}."""
    tab = _MUL_TABLES.get(m)
    if tab is None:
        size = 1 << m
        ia, ib, io = [], [], []
        for a in range(size):
            for b in range(size):
                if a & b == 0:
                    ia.append(a)
                    ib.append(b)
                    io.append(a | b)
        tab = (np.array(ia), np.array(ib), np.array(io))
        _MUL_TABLES[m] = tab
    return tab


class MultiDual:
    """Scalar with nilpotent generators; value part plus derivative payload."""

    __slots__ = ("c", "m")

    def __init__(self, coeffs, m: int):
        self.c = np.asarray(coeffs, dtype=float)
        self.m = m

    # -- construction -----------------------------------------------------

    @staticmethod
    def constant(value: float, m: int) -> "MultiDual":
        c = np.zeros(1 << m)
        c[0] = value
        return MultiDual(c, m)

    @property
    def value(self) -> float:
        return float(self.c[0])

    def coeff(self, mask: int) -> float:
        return float(self.c[mask])

    def __repr__(self):
        return f"MultiDual(m={self.m}, c={self.c!r})"

    # -- ring operations ---------------------------------------------------

    def _wrap(self, other):
        if isinstance(other, MultiDual):
            if other.m != self.m:
                raise ValueError(f"generator count mismatch: {self.m} vs {other.m}")
            return other
        return MultiDual.constant(float(other), self.m)

    def __add__(self, other):
        o = self._wrap(other)
        return MultiDual(self.c + o.c, self.m)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._wrap(other)
        return MultiDual(self.c - o.c, self.m)

    def __rsub__(self, other):
        o = self._wrap(other)
        return MultiDual(o.c - self.c, self.m)

    def __neg__(self):
        return MultiDual(-self.c, self.m)

    def __mul__(self, other):
        if not isinstance(other, MultiDual):
            return MultiDual(self.c * float(other), self.m)
        if other.m != self.m:
            raise ValueError(f"generator count mismatch: {self.m} vs {other.m}")
        ia, ib, io = _mul_table(self.m)
        prod = self.c[ia] * other.c[ib]
        return MultiDual(np.bincount(io, weights=prod, minlength=1 << self.m), self.m)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, MultiDual):
            return MultiDual(self.c / float(other), self.m)
        return self * other._inverse()

    def __rtruediv__(self, other):
        return self._inverse() * float(other)

    def _inverse(self) -> "MultiDual":
        v = self.value
        if v == 0.0:
            raise ZeroDivisionError("division by dual with zero value part")
        ders = [(-1.0) ** k * math.factorial(k) / v ** (k + 1) for k in range(self.m + 1)]
        ders[0] = 1.0 / v
        return self.apply_series(ders)

    def __pow__(self, p):
        if isinstance(p, int) or (isinstance(p, float) and p.is_integer()):
            p = int(p)
            if p == 0:
                return MultiDual.constant(1.0, self.m)
            if p < 0:
                return (self ** (-p))._inverse()
            out = self
            for _ in range(p - 1):
                out = out * self
            return out
        v = self.value
        ders = []
        fac = 1.0
        for k in range(self.m + 1):
            ders.append(fac * v ** (p - k))
            fac *= p - k
        return self.apply_series(ders)

    # -- analytic functions -------------------------------------------------

    def apply_series(self, ders) -> "MultiDual":
        """Compose with f given f, f', f'', ... evaluated at the value part."""
        nil = MultiDual(self.c.copy(), self.m)
        nil.c = nil.c.copy()
        nil.c[0] = 0.0
        out = MultiDual.constant(ders[self.m] / math.factorial(self.m), self.m)
        for k in range(self.m - 1, -1, -1):
            out = out * nil + ders[k] / math.factorial(k)
        return out

    # -- comparisons on the value part --------------------------------------

    def _cmp_val(self, other):
        return other.value if isinstance(other, MultiDual) else float(other)

    def __lt__(self, other):
        return self.value < self._cmp_val(other)

    def __le__(self, other):
        return self.value <= self._cmp_val(other)

    def __gt__(self, other):
        return self.value > self._cmp_val(other)

    def __ge__(self, other):
        return self.value >= self._cmp_val(other)


def generator(slot: int, m: int) -> MultiDual:
    """The nilpotent generator e_{slot+1} as a MultiDual with m generators."""
    c = np.zeros(1 << m)
    c[1 << slot] = 1.0
    return MultiDual(c, m)


def value(x) -> float:
    """Value part of a float or MultiDual."""
    return x.value if isinstance(x, MultiDual) else float(x)


def lift(x, m: int):
    """Embed x into arithmetic with m generators (floats pass through)."""
    if not isinstance(x, MultiDual):
        return x
    if x.m == m:
        return x
    if x.m > m:
        raise ValueError("cannot lower generator count by lifting")
    c = np.zeros(1 << m)
    c[: 1 << x.m] = x.c
    return MultiDual(c, m)


def split_last(y, m: int):
    """Split off the last generator: y = lo + e_m * hi, both with m-1 generators.

    Floats split as (y, 0).  When m == 1 the parts demote to plain floats.
    """
    if not isinstance(y, MultiDual):
        return (float(y), 0.0)
    half = 1 << (m - 1)
    lo, hi = y.c[:half], y.c[half:]
    if m == 1:
        return (float(lo[0]), float(hi[0]))
    return (MultiDual(lo.copy(), m - 1), MultiDual(hi.copy(), m - 1))


def _common_order(xs) -> int:
    ms = {x.m for x in xs if isinstance(x, MultiDual)}
    if len(ms) > 1:
        raise ValueError(f"mixed generator counts in argument list: {sorted(ms)}")
    return ms.pop() if ms else 0


def eval_with_partials(fn, xs):
    """Evaluate fn(list of scalars) -> list of scalars together with all partials.

    Works when xs already carry dual payloads: one extra generator is appended
    per input slot in turn, so the returned values and partial derivatives are
    themselves scalars of the incoming order.  Returns (values, cols) with
    cols[j][i] = d fn_i / d x_j.
    """
    m0 = _common_order(xs)
    m1 = m0 + 1
    vals = None
    cols = []
    for j in range(len(xs)):
        args = [lift(x, m1) for x in xs]
        args[j] = args[j] + generator(m0, m1)
        out = fn(args)
        lows, highs = [], []
        for y in out:
            lo, hi = split_last(lift(y, m1) if isinstance(y, MultiDual) else y, m1)
            lows.append(lo)
            highs.append(hi)
        vals = lows
        cols.append(highs)
    return vals, cols


# -- scalar-generic math -----------------------------------------------------


def gsqrt(x):
    if not isinstance(x, MultiDual):
        return math.sqrt(x)
    v = x.value
    if v <= 0.0:
        raise ValueError("gsqrt requires positive value part")
    ders = [math.sqrt(v)]
    fac = 0.5
    for k in range(1, x.m + 1):
        ders.append(fac * v ** (0.5 - k))
        fac *= 0.5 - k
    return x.apply_series(ders)


def glog(x):
    if not isinstance(x, MultiDual):
        return math.log(x)
    v = x.value
    if v <= 0.0:
        raise ValueError("glog requires positive value part")
    ders = [math.log(v)]
    for k in range(1, x.m + 1):
        ders.append((-1.0) ** (k - 1) * math.factorial(k - 1) / v ** k)
    return x.apply_series(ders)


def gexp(x):
    if not isinstance(x, MultiDual):
        return math.exp(x)
    e = math.exp(x.value)
    return x.apply_series([e] * (x.m + 1))


def gsin(x):
    if not isinstance(x, MultiDual):
        return math.sin(x)
    v = x.value
    cyc = [math.sin(v), math.cos(v), -math.sin(v), -math.cos(v)]
    return x.apply_series([cyc[k % 4] for k in range(x.m + 1)])


def gcos(x):
    if not isinstance(x, MultiDual):
        return math.cos(x)
    v = x.value
    cyc = [math.cos(v), -math.sin(v), -math.cos(v), math.sin(v)]
    return x.apply_series([cyc[k % 4] for k in range(x.m + 1)])


def gatan(x):
    if not isinstance(x, MultiDual):
        return math.atan(x)
    v = x.value
    d = 1.0 + v * v
    ders = [
        math.atan(v),
        1.0 / d,
        -2.0 * v / d**2,
        (6.0 * v * v - 2.0) / d**3,
        24.0 * v * (1.0 - v * v) / d**4,
        24.0 * (5.0 * v**4 - 10.0 * v**2 + 1.0) / d**5,
    ]
    if x.m + 1 > len(ders):
        raise ValueError("gatan supports at most 5 generators")
    return x.apply_series(ders[: x.m + 1])


# -- scalar-generic linear algebra -------------------------------------------


def solve_generic(A, b):
    """Solve A x = b by Gaussian elimination, pivoting on value parts.

    A is a square list-of-lists of floats or MultiDuals; b is a list (single
    right-hand side) or list-of-lists (columns stacked as rows of the output).
    """
    n = len(A)
    single = not isinstance(b[0], (list, tuple))
    rhs = [[x] for x in b] if single else [list(row) for row in b]
    a = [list(row) for row in A]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(value(a[r][col])))
        if abs(value(a[piv][col])) < 1e-300:
            raise ZeroDivisionError("singular matrix in solve_generic")
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            rhs[col], rhs[piv] = rhs[piv], rhs[col]
        inv = 1.0 / a[col][col] if isinstance(a[col][col], MultiDual) else 1.0 / a[col][col]
        for r in range(n):
            if r == col:
                continue
            f = a[r][col] * inv
            if isinstance(f, float) and f == 0.0:
                continue
            for cc in range(col, n):
                a[r][cc] = a[r][cc] - f * a[col][cc]
            for cc in range(len(rhs[0])):
                rhs[r][cc] = rhs[r][cc] - f * rhs[col][cc]
    out = [[rhs[r][cc] / a[r][r] for cc in range(len(rhs[0]))] for r in range(n)]
    if single:
        return [row[0] for row in out]
    return out


# -- truncated univariate Taylor series ---------------------------------------


class Taylor1:
    """Truncated Taylor series in one step variable, for ODE jets.

    Coefficients are plain Taylor coefficients (not derivatives): the series
    represents sum(c[k] * h**k).  Only the ring operations plus sqrt are
    needed by the meridian jet code.
    """

    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = [float(x) for x in coeffs]

    @property
    def order(self):
        return len(self.c) - 1

    def _wrap(self, other):
        if isinstance(other, Taylor1):
            return other
        out = [0.0] * len(self.c)
        out[0] = float(other)
        return Taylor1(out)

    def __add__(self, other):
        o = self._wrap(other)
        return Taylor1([a + b for a, b in zip(self.c, o.c)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._wrap(other)
        return Taylor1([a - b for a, b in zip(self.c, o.c)])

    def __rsub__(self, other):
        o = self._wrap(other)
        return Taylor1([b - a for a, b in zip(self.c, o.c)])

    def __neg__(self):
        return Taylor1([-a for a in self.c])

    def __mul__(self, other):
        if not isinstance(other, Taylor1):
            return Taylor1([a * float(other) for a in self.c])
        n = len(self.c)
        out = [0.0] * n
        for i, a in enumerate(self.c):
            if a == 0.0:
                continue
            for j in range(n - i):
                out[i + j] += a * other.c[j]
        return Taylor1(out)

    __rmul__ = __mul__

    def sqrt(self):
        v = self.c[0]
        if v <= 0.0:
            raise ValueError("Taylor1.sqrt requires positive leading coefficient")
        n = len(self.c)
        out = [0.0] * n
        out[0] = math.sqrt(v)
        # (sum out[k] h^k)^2 = self: solve coefficientwise
        for k in range(1, n):
            acc = sum(out[i] * out[k - i] for i in range(1, k))
            out[k] = (self.c[k] - acc) / (2.0 * out[0])
        return Taylor1(out)

    def eval_poly(self, h):
        """Evaluate the polynomial at h, which may be a float or MultiDual."""
        out = self.c[-1]
        for k in range(len(self.c) - 2, -1, -1):
            out = out * h + self.c[k]
        return out
