# spectral_forge/covers.py
"""
Exact arithmetic on hyperelliptic double covers of the projective line.

Everything in this module is exact: coefficients live in Q(i) (pairs of
`fractions.Fraction`), curves are odd models

    w**2 = f(b),   f squarefree over Q(i), deg f = 2g + 1, g >= 1,

with a single point at infinity fixed by the sheet involution iota: w -> -w.
Degree-0 divisor classes are stored in Mumford form (u, v) with u monic,
deg v < deg u, u | v**2 - f, balanced by a multiple of infinity.  Group law is
Cantor composition plus reduction to deg u <= g.  No floating point enters the
group law; float evaluation of the curve is provided separately for sampling.

Two independent decision procedures for principality are provided:

- Cantor reduction (``cantor_reduce`` / ``class_add`` / ``in_prym``), and
- explicit function search (``classes_equal_by_search``,
  ``conjugate_sum_principal_witness``): exact linear algebra over Q(i) finds a
  function a(b) + c(b) w with the prescribed divisor and verifies the norm
  identity a**2 - c**2 f = const * (target) exactly.

The second route never calls the first; the test suite plays them against
each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "QI",
    "Poly",
    "BasePoint",
    "HyperCover",
    "DivisorClass",
    "point_class",
    "mumford_compose",
    "cantor_reduce",
    "class_add",
    "class_neg",
    "involution_pullback",
    "class_equal",
    "norm_degree",
    "in_prym",
    "classes_equal_by_search",
    "conjugate_sum_principal_witness",
    "qi_nullspace",
]


# ============================================================
# Gaussian rationals
# ============================================================

@dataclass(frozen=True)
class QI:
    """Element of Q(i): re + im*i with exact Fraction parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    # ----- constructors ---------------------------------------------------

    @staticmethod
    def of(re: int | Fraction, im: int | Fraction = 0) -> "QI":
        return QI(Fraction(re), Fraction(im))

    @staticmethod
    def from_pair(re_num: int, re_den: int, im_num: int = 0, im_den: int = 1) -> "QI":
        return QI(Fraction(re_num, re_den), Fraction(im_num, im_den))

    # ----- predicates -----------------------------------------------------

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_one(self) -> bool:
        return self.re == 1 and self.im == 0

    # ----- arithmetic -----------------------------------------------------

    def __add__(self, o: "QI") -> "QI":
        return QI(self.re + o.re, self.im + o.im)

    def __sub__(self, o: "QI") -> "QI":
        return QI(self.re - o.re, self.im - o.im)

    def __neg__(self) -> "QI":
        return QI(-self.re, -self.im)

    def __mul__(self, o: "QI") -> "QI":
        return QI(self.re * o.re - self.im * o.im,
                  self.re * o.im + self.im * o.re)

    def conj(self) -> "QI":
        return QI(self.re, -self.im)

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def inv(self) -> "QI":
        n = self.norm2()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return QI(self.re / n, -self.im / n)

    def __truediv__(self, o: "QI") -> "QI":
        return self * o.inv()

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:
        if self.im == 0:
            return f"{self.re}"
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"


_QI_ZERO = QI()
_QI_ONE = QI(Fraction(1))


# ============================================================
# Dense univariate polynomials over Q(i)
# ============================================================

@dataclass(frozen=True)
class Poly:
    """Dense polynomial over Q(i), coefficients ascending, no trailing zeros."""

    coeffs: tuple[QI, ...] = ()

    def __post_init__(self) -> None:
        cs = list(self.coeffs)
        while cs and cs[-1].is_zero():
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    # ----- constructors ---------------------------------------------------

    @staticmethod
    def of(*ints: int | Fraction | QI) -> "Poly":
        return Poly(tuple(c if isinstance(c, QI) else QI.of(c) for c in ints))

    @staticmethod
    def const(c: QI) -> "Poly":
        return Poly((c,))

    @staticmethod
    def x_minus(a: QI) -> "Poly":
        return Poly((-a, _QI_ONE))

    # ----- structure ------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0].is_one()

    def lead(self) -> QI:
        if self.is_zero():
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, k: int) -> QI:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else _QI_ZERO

    # ----- ring operations ------------------------------------------------

    def __add__(self, o: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(o.coeffs))
        return Poly(tuple(self.coeff(k) + o.coeff(k) for k in range(n)))

    def __sub__(self, o: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(o.coeffs))
        return Poly(tuple(self.coeff(k) - o.coeff(k) for k in range(n)))

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __mul__(self, o: "Poly") -> "Poly":
        if self.is_zero() or o.is_zero():
            return Poly()
        out = [_QI_ZERO] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(tuple(out))

    def scale(self, c: QI) -> "Poly":
        return Poly(tuple(a * c for a in self.coeffs))

    def divmod(self, o: "Poly") -> tuple["Poly", "Poly"]:
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q: list[QI] = [_QI_ZERO] * max(0, self.degree - o.degree + 1)
        r = list(self.coeffs)
        inv_lead = o.lead().inv()
        while len(r) - 1 >= o.degree and any(not c.is_zero() for c in r):
            while r and r[-1].is_zero():
                r.pop()
            if len(r) - 1 < o.degree:
                break
            k = len(r) - 1 - o.degree
            c = r[-1] * inv_lead
            q[k] = q[k] + c
            for j, b in enumerate(o.coeffs):
                r[k + j] = r[k + j] - c * b
        return Poly(tuple(q)), Poly(tuple(r))

    def __floordiv__(self, o: "Poly") -> "Poly":
        return self.divmod(o)[0]

    def __mod__(self, o: "Poly") -> "Poly":
        return self.divmod(o)[1]

    def exact_div(self, o: "Poly") -> "Poly":
        q, r = self.divmod(o)
        if not r.is_zero():
            raise ArithmeticError("polynomial division was not exact")
        return q

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(self.lead().inv())

    def deriv(self) -> "Poly":
        return Poly(tuple(c * QI.of(k) for k, c in enumerate(self.coeffs) if k >= 1))

    def gcd(self, o: "Poly") -> "Poly":
        a, b = self, o
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def xgcd(self, o: "Poly") -> tuple["Poly", "Poly", "Poly"]:
        """(g, s, t) with s*self + t*o = g, g monic (or zero)."""
        r0, r1 = self, o
        s0, s1 = Poly.const(_QI_ONE), Poly()
        t0, t1 = Poly(), Poly.const(_QI_ONE)
        while not r1.is_zero():
            q, r = r0.divmod(r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        if r0.is_zero():
            return r0, s0, t0
        c = r0.lead().inv()
        return r0.scale(c), s0.scale(c), t0.scale(c)

    def is_squarefree(self) -> bool:
        if self.degree < 1:
            return not self.is_zero()
        return self.gcd(self.deriv()).degree == 0

    # ----- evaluation -----------------------------------------------------

    def eval(self, b: QI) -> QI:
        acc = _QI_ZERO
        for c in reversed(self.coeffs):
            acc = acc * b + c
        return acc

    def eval_complex(self, b: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * b + c.to_complex()
        return acc

    def __repr__(self) -> str:
        if self.is_zero():
            return "Poly(0)"
        terms = [f"{c}*b^{k}" for k, c in enumerate(self.coeffs) if not c.is_zero()]
        return "Poly(" + " + ".join(terms) + ")"


# ============================================================
# Base points of P^1
# ============================================================

@dataclass(frozen=True)
class BasePoint:
    """Point of the base line: a Q(i) coordinate, or infinity (x=None)."""

    x: QI | None

    @staticmethod
    def of(re: int | Fraction, im: int | Fraction = 0) -> "BasePoint":
        return BasePoint(QI.of(re, im))

    @staticmethod
    def infinity() -> "BasePoint":
        return BasePoint(None)

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def to_complex(self) -> complex:
        if self.x is None:
            raise ValueError("infinity has no affine coordinate")
        return self.x.to_complex()

    def __repr__(self) -> str:
        return "BasePoint(inf)" if self.x is None else f"BasePoint({self.x})"


# ============================================================
# Hyperelliptic covers
# ============================================================

@dataclass(frozen=True)
class HyperCover:
    """Odd-model double cover w**2 = f(b) of the base line.

    Odd degree keeps infinity a single branch point; degree 1 (genus 0)
    covers like w**2 = b are allowed, they model irreducible bisections
    through a branch point."""

    f: Poly

    def __post_init__(self) -> None:
        d = self.f.degree
        if d < 1 or d % 2 == 0:
            raise ValueError(f"deg f must be odd and >= 1; got {d}")
        if not self.f.is_squarefree():
            raise ValueError("f must be squarefree")

    @property
    def genus(self) -> int:
        return (self.f.degree - 1) // 2

    def is_branch(self, b: BasePoint) -> bool:
        """Branch point of the cover: a root of f, or infinity (odd model)."""
        if b.is_infinity:
            return True
        return self.f.eval(b.x).is_zero()

    def sheets(self, b: complex) -> tuple[complex, complex]:
        """Float w-values over b: (w, -w) with w the principal square root."""
        w = complex(self.f.eval_complex(b)) ** 0.5
        return (w, -w)

    def branch_distance(self, b: complex) -> float:
        """|f(b)|, a cheap proximity measure to the branch locus."""
        return abs(self.f.eval_complex(b))

    def same_curve(self, other: "HyperCover") -> bool:
        return self.f == other.f


# ============================================================
# Mumford divisor classes
# ============================================================

@dataclass(frozen=True)
class DivisorClass:
    """Semi-reduced Mumford pair (u, v) minus inf_mult * infinity.

    Invariants (checked): u monic, deg v < deg u, u | v**2 - f.
    degree() = deg u - inf_mult; the group law acts on degree-0 classes.
    """

    cover: HyperCover
    u: Poly
    v: Poly
    inf_mult: int

    def __post_init__(self) -> None:
        if self.u.is_zero():
            raise ValueError("u must be nonzero")
        if not self.u.lead().is_one():
            raise ValueError("u must be monic")
        if not self.v.is_zero() and self.v.degree >= self.u.degree:
            raise ValueError("deg v must be < deg u")
        rem = (self.v * self.v - self.cover.f) % self.u
        if not rem.is_zero():
            raise ValueError("u does not divide v^2 - f")

    @staticmethod
    def zero(cover: HyperCover) -> "DivisorClass":
        return DivisorClass(cover, Poly.const(_QI_ONE), Poly(), 0)

    def degree(self) -> int:
        return self.u.degree - self.inf_mult

    def is_zero_class(self) -> bool:
        return self.u.degree == 0 and self.inf_mult == 0

    def is_reduced(self) -> bool:
        return self.u.degree <= self.cover.genus

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DivisorClass):
            return NotImplemented
        return (self.cover.same_curve(other.cover) and self.u == other.u
                and self.v == other.v and self.inf_mult == other.inf_mult)

    def __repr__(self) -> str:
        return f"DivisorClass(u={self.u}, v={self.v}, -{self.inf_mult}*inf)"


def point_class(cover: HyperCover, x: QI, w: QI) -> DivisorClass:
    """Degree-0 class (P) - (inf) for the affine point P = (x, w)."""
    if not (w * w - cover.f.eval(x)).is_zero():
        raise ValueError("(x, w) does not lie on the cover")
    return DivisorClass(cover, Poly.x_minus(x), Poly.const(w), 1)


# ----- Cantor composition and reduction ----------------------------------

def mumford_compose(d1: DivisorClass, d2: DivisorClass) -> DivisorClass:
    """Semi-reduced composition (no reduction step)."""
    if not d1.cover.same_curve(d2.cover):
        raise ValueError("classes live on different covers")
    f = d1.cover.f
    u1, v1, u2, v2 = d1.u, d1.v, d2.u, d2.v
    g1, e1, e2 = u1.xgcd(u2)
    g, c1, c2 = g1.xgcd(v1 + v2)
    if g.is_zero():
        g = Poly.const(_QI_ONE)
    s1, s2, s3 = c1 * e1, c1 * e2, c2
    u = (u1 * u2).exact_div(g * g)
    num = s1 * u1 * v2 + s2 * u2 * v1 + s3 * (v1 * v2 + f)
    v = num.exact_div(g) % u
    u = u.monic()
    # each cancelled conjugate pair P + iota(P) is equivalent to 2*inf
    return DivisorClass(d1.cover, u, v, d1.inf_mult + d2.inf_mult - 2 * g.degree)


def cantor_reduce(d: DivisorClass) -> DivisorClass:
    """Reduce to the unique representative with deg u <= genus."""
    cover = d.cover
    g = cover.genus
    u, v = d.u, d.v
    deg_in = u.degree
    while u.degree > g:
        u_next = (cover.f - v * v).exact_div(u)
        u_next = u_next.monic()
        v = (-v) % u_next if u_next.degree > 0 else Poly()
        u = u_next
    # linear equivalence preserves total degree; rebalance against infinity
    inf = d.inf_mult - (deg_in - u.degree)
    return DivisorClass(cover, u, v, inf)


def class_add(d1: DivisorClass, d2: DivisorClass) -> DivisorClass:
    return cantor_reduce(mumford_compose(d1, d2))


def class_neg(d: DivisorClass) -> DivisorClass:
    v = (-d.v) % d.u if d.u.degree > 0 else Poly()
    return DivisorClass(d.cover, d.u, v, d.inf_mult)


def involution_pullback(d: DivisorClass) -> DivisorClass:
    """Pullback along the sheet involution (b, w) -> (b, -w)."""
    return class_neg(d)


def class_equal(d1: DivisorClass, d2: DivisorClass) -> bool:
    """Exact class equality via Cantor reduction of the difference."""
    return class_add(d1, class_neg(d2)).is_zero_class()


def norm_degree(d: DivisorClass) -> int:
    """Degree of the pushforward to the base line.

    The affine part pushes forward point by point; infinity on the cover maps
    to infinity on the base.  For balanced (degree-0) classes this is 0.
    """
    return d.u.degree - d.inf_mult


def in_prym(d: DivisorClass) -> bool:
    """True iff D + iota*D is the zero class (decided by Cantor reduction).

    Over a rational base the pushforward of any degree-0 class is principal,
    so this holds for every degree-0 class; the function computes it rather
    than asserting it.
    """
    if d.degree() != 0:
        raise ValueError("in_prym is defined for degree-0 classes")
    return class_add(d, involution_pullback(d)).is_zero_class()


# ============================================================
# Exact linear algebra over Q(i)
# ============================================================

def qi_nullspace(rows: list[list[QI]], n_cols: int) -> list[list[QI]]:
    """Basis of the right nullspace of the matrix given by `rows`."""
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        pivot = None
        for i in range(r, len(m)):
            if not m[i][c].is_zero():
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = m[r][c].inv()
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and not m[i][c].is_zero():
                factor = m[i][c]
                m[i] = [a - factor * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(n_cols) if c not in pivots]
    basis: list[list[QI]] = []
    for fc in free:
        vec = [_QI_ZERO] * n_cols
        vec[fc] = _QI_ONE
        for row_idx, pc in enumerate(pivots):
            vec[pc] = -m[row_idx][fc]
        basis.append(vec)
    return basis


# ============================================================
# Function-search principality oracles (independent of Cantor)
# ============================================================

def _search_basis(genus: int, pole_order: int) -> tuple[int, int]:
    """Degree bounds (deg a, deg c) for functions a(b) + c(b) w with pole
    order <= pole_order at infinity.  deg c < 0 means no w-part is allowed."""
    da = pole_order // 2
    dc = (pole_order - (2 * genus + 1)) // 2 if pole_order >= 2 * genus + 1 else -1
    return da, dc


def _divisibility_rows(u: Poly, combo: Poly, da: int, dc: int) -> list[list[QI]]:
    """Linear conditions: u | (a + c * combo), as rows over the coefficient
    vector (a_0..a_da, c_0..c_dc).  `combo` is the signed v, reduced mod u."""
    n_cols = (da + 1) + (dc + 1 if dc >= 0 else 0)
    # remainder of b^k mod u, cached incrementally
    rem_cache: list[Poly] = []
    rem = Poly.const(_QI_ONE)
    b_poly = Poly.of(0, 1)
    for _ in range(max(da, dc if dc >= 0 else 0) + 1):
        rem_cache.append(rem)
        rem = (rem * b_poly) % u
    mat: list[list[QI]] = [[_QI_ZERO] * n_cols for _ in range(u.degree)]
    for k in range(da + 1):
        rk = rem_cache[k]
        for j in range(u.degree):
            mat[j][k] = rk.coeff(j)
    if dc >= 0:
        for k in range(dc + 1):
            rk = (rem_cache[k] * combo) % u
            for j in range(u.degree):
                mat[j][(da + 1) + k] = rk.coeff(j)
    return mat


def _vector_to_pair(vec: list[QI], da: int, dc: int) -> tuple[Poly, Poly]:
    a = Poly(tuple(vec[: da + 1]))
    c = Poly(tuple(vec[da + 1:])) if dc >= 0 else Poly()
    return a, c


def classes_equal_by_search(d1: DivisorClass, d2: DivisorClass) -> bool:
    """Decide [D1] == [D2] by explicit function search (no Cantor reduction).

    Looks for h = a(b) + c(b) w with divisor D1 + iota(D2) - (r1+r2) inf and
    verifies the norm identity a^2 - c^2 f = const * u1 * u2 exactly.  Requires
    gcd(u1, u2) = 1 (generic position) and balanced degree-0 inputs.
    """
    if not d1.cover.same_curve(d2.cover):
        raise ValueError("classes live on different covers")
    if d1.degree() != 0 or d2.degree() != 0:
        raise ValueError("search oracle requires degree-0 classes")
    if d1.u.gcd(d2.u).degree != 0:
        raise ValueError("search oracle requires disjoint Mumford supports")
    cover = d1.cover
    r = d1.u.degree + d2.u.degree
    if r == 0:
        return True
    da, dc = _search_basis(cover.genus, r)
    rows = []
    if d1.u.degree > 0:
        rows += _divisibility_rows(d1.u, d1.v % d1.u, da, dc)
    if d2.u.degree > 0:
        rows += _divisibility_rows(d2.u, (-d2.v) % d2.u, da, dc)
    n_cols = (da + 1) + (dc + 1 if dc >= 0 else 0)
    basis = qi_nullspace(rows, n_cols)
    if not basis:
        return False
    # any nonzero solution vanishes on a degree-r divisor, hence has pole
    # order exactly r; verify the norm identity as a hard witness check
    for vec in basis:
        a, c = _vector_to_pair(vec, da, dc)
        if a.is_zero() and c.is_zero():
            continue
        nrm = a * a - c * c * cover.f
        target = d1.u * d2.u
        q, rem = nrm.divmod(target)
        if rem.is_zero() and q.degree == 0:
            return True
    raise ArithmeticError(
        "nullspace nonempty but no vector satisfied the norm identity; "
        "inputs violate the generic-position precondition")


def conjugate_sum_principal_witness(d: DivisorClass) -> tuple[Poly, Poly]:
    """Explicit function with divisor D + iota(D) - 2r inf, by search.

    Returns (a, c) with h = a + c w; raises if no witness exists (which for a
    degree-0 class over a rational base never happens; the point is to find
    the witness without Cantor arithmetic and verify it exactly).
    """
    if d.degree() != 0:
        raise ValueError("witness search requires a degree-0 class")
    cover = d.cover
    r = d.u.degree
    if r == 0:
        return Poly.const(_QI_ONE), Poly()
    da, dc = _search_basis(cover.genus, 2 * r)
    # vanishing on D and on iota(D) at shared u-roots forces u | a and u | c v;
    # impose the two divisibility conditions directly
    rows = _divisibility_rows(d.u, d.v % d.u, da, dc)
    rows += _divisibility_rows(d.u, (-d.v) % d.u, da, dc)
    n_cols = (da + 1) + (dc + 1 if dc >= 0 else 0)
    basis = qi_nullspace(rows, n_cols)
    for vec in basis:
        a, c = _vector_to_pair(vec, da, dc)
        if a.is_zero() and c.is_zero():
            continue
        nrm = a * a - c * c * cover.f
        target = d.u * d.u
        q, rem = nrm.divmod(target)
        if rem.is_zero() and q.degree == 0:
            return a, c
    raise ArithmeticError("no principality witness found for D + iota(D)")
