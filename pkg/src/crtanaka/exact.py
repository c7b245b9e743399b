"""Exact scalars over Q(i) and sparse exact linear algebra.

Scalars are plain ``int``/``Fraction`` when real and :class:`GaussianRational`
when they carry an imaginary part.  The two mix freely, the same way ``float``
and ``complex`` do.

Elimination is fraction free: every row is scaled to integer (or Gaussian
integer) entries, rows are combined by cross multiplication and then divided by
their integer content.  Denominators only reappear when kernel vectors are
read off at the very end.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence


class GaussianRational:
    """An element ``re + im*i`` of Q(i) with exact rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if isinstance(re, Fraction) else Fraction(re)
        self.im = im if isinstance(im, Fraction) else Fraction(im)

    @staticmethod
    def _parts(other):
        if isinstance(other, GaussianRational):
            return other.re, other.im
        if isinstance(other, (int, Fraction)):
            return other, 0
        if isinstance(other, Rational):
            return Fraction(other), 0
        return None

    def __add__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return GaussianRational(self.re + p[0], self.im + p[1])

    __radd__ = __add__

    def __sub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return GaussianRational(self.re - p[0], self.im - p[1])

    def __rsub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return GaussianRational(p[0] - self.re, p[1] - self.im)

    def __mul__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        a, b = self.re, self.im
        c, d = p
        return GaussianRational(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        c, d = p
        den = c * c + d * d
        if not den:
            raise ZeroDivisionError("division by zero in Q(i)")
        a, b = self.re, self.im
        return GaussianRational((a * c + b * d) / den, (b * c - a * d) / den)

    def __rtruediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return GaussianRational(*p) / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return self.re == p[0] and self.im == p[1]

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    @property
    def real(self):
        return self.re

    @property
    def imag(self):
        return self.im

    def __repr__(self):
        return f"GaussianRational({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)


I = GaussianRational(0, 1)


def conj(x):
    """Complex conjugate of a scalar (identity on rationals)."""
    if isinstance(x, GaussianRational):
        return GaussianRational(x.re, -x.im)
    return x


def real_part(x) -> Fraction:
    if isinstance(x, GaussianRational):
        return x.re
    return Fraction(x)


def imag_part(x) -> Fraction:
    if isinstance(x, GaussianRational):
        return x.im
    return Fraction(0)


def simplify(x):
    """Demote a Gaussian rational with zero imaginary part to a Fraction/int."""
    if isinstance(x, GaussianRational):
        if x.im:
            return x
        x = x.re
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def div(a, b):
    """Exact quotient that stays rational when both operands are rational."""
    if isinstance(a, GaussianRational) or isinstance(b, GaussianRational):
        return simplify(GaussianRational(*GaussianRational._parts(a)) / b)
    return simplify(Fraction(a) / Fraction(b))


# -- serialization ---------------------------------------------------------

def _format_rational(q) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_scalar(x) -> str:
    """Serialize as ``p/q``, ``r/s*i`` or ``p/q+r/s*i`` (zero parts omitted)."""
    re_, im_ = real_part(x), imag_part(x)
    if not im_:
        return _format_rational(re_)
    imag = _format_rational(im_) + "*i"
    if not re_:
        return imag
    sign = "" if im_ < 0 else "+"
    return _format_rational(re_) + sign + imag


_RAT_RE = re.compile(r"[+-]?\d+(?:/\d+)?")


def _parse_rational(s: str, text: str) -> Fraction:
    if not _RAT_RE.fullmatch(s):
        raise ValueError(f"malformed scalar {text!r}")
    q = Fraction(s)
    return q


def parse_scalar(text: str):
    """Inverse of :func:`format_scalar`; also accepts ``i``, ``-i``, ``2+i``."""
    s = "".join(text.split())
    if not s:
        raise ValueError("empty scalar")
    if not s.endswith("i"):
        return simplify(_parse_rational(s, text))
    body = s[:-1]
    k = max(body.rfind("+"), body.rfind("-"))
    re_text, im_text = (body[:k], body[k:]) if k > 0 else ("", body)
    if im_text.endswith("*"):
        im_text = im_text[:-1]
        if im_text in ("", "+", "-"):
            raise ValueError(f"malformed scalar {text!r}")
    elif im_text not in ("", "+", "-"):
        raise ValueError(f"malformed scalar {text!r}")
    im_ = Fraction(im_text + "1") if im_text in ("", "+", "-") else _parse_rational(im_text, text)
    re_ = _parse_rational(re_text, text) if re_text else Fraction(0)
    return simplify(GaussianRational(re_, im_))


# -- sparse matrices -------------------------------------------------------

class SparseMatrix:
    """Immutable sparse matrix stored as a dict of row dicts."""

    __slots__ = ("nrows", "ncols", "_rows")

    def __init__(self, nrows: int, ncols: int, entries=()):
        self.nrows = nrows
        self.ncols = ncols
        rows: dict[int, dict[int, object]] = {}
        if isinstance(entries, Mapping):
            entries = [(r, c, v) for (r, c), v in entries.items()]
        for r, c, v in entries:
            if not (0 <= r < nrows and 0 <= c < ncols):
                raise IndexError(f"entry ({r}, {c}) outside {nrows}x{ncols}")
            row = rows.setdefault(r, {})
            if c in row:
                raise ValueError(f"duplicate entry at ({r}, {c})")
            if v:
                row[c] = simplify(v)
        self._rows = {r: row for r, row in rows.items() if row}

    @classmethod
    def from_rows(cls, rows: Sequence[Mapping[int, object]], ncols: int) -> SparseMatrix:
        m = cls(len(rows), ncols)
        for r, row in enumerate(rows):
            clean = {c: simplify(v) for c, v in row.items() if v}
            for c in clean:
                if not 0 <= c < ncols:
                    raise IndexError(f"column {c} outside {ncols}")
            if clean:
                m._rows[r] = clean
        return m

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[object]], ncols: int | None = None) -> SparseMatrix:
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        return cls.from_rows([{c: v for c, v in enumerate(row) if v} for row in rows], ncols)

    @classmethod
    def identity(cls, n: int) -> SparseMatrix:
        return cls.from_rows([{i: 1} for i in range(n)], n)

    @property
    def shape(self):
        return self.nrows, self.ncols

    def row(self, r: int) -> dict:
        return dict(self._rows.get(r, {}))

    def rows(self) -> list[dict]:
        return [dict(self._rows.get(r, {})) for r in range(self.nrows)]

    def entries(self) -> list[tuple[int, int, object]]:
        return [(r, c, v) for r in sorted(self._rows) for c, v in sorted(self._rows[r].items())]

    def get(self, r: int, c: int):
        return self._rows.get(r, {}).get(c, 0)

    def to_dense(self) -> list[list]:
        return [[self.get(r, c) for c in range(self.ncols)] for r in range(self.nrows)]

    def transpose(self) -> SparseMatrix:
        return SparseMatrix(self.ncols, self.nrows, [(c, r, v) for r, c, v in self.entries()])

    def conjugate(self) -> SparseMatrix:
        return SparseMatrix(self.nrows, self.ncols, [(r, c, conj(v)) for r, c, v in self.entries()])

    def matvec(self, v: Sequence) -> list:
        return [simplify(sum((x * v[c] for c, x in self._rows.get(r, {}).items()), 0))
                for r in range(self.nrows)]

    def __matmul__(self, other: SparseMatrix) -> SparseMatrix:
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        out = []
        for r in range(self.nrows):
            acc: dict[int, object] = {}
            for k, a in self._rows.get(r, {}).items():
                for c, b in other._rows.get(k, {}).items():
                    acc[c] = acc.get(c, 0) + a * b
            out.append(acc)
        return SparseMatrix.from_rows(out, other.ncols)

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={sum(map(len, self._rows.values()))})"


# -- fraction-free elimination ---------------------------------------------

def _is_gauss(x) -> bool:
    return isinstance(x, GaussianRational)


def _integral_row(row: Mapping[int, object]) -> dict:
    """Scale a row so that all entries are (Gaussian) integers with content 1."""
    lcm = 1
    for v in row.values():
        if _is_gauss(v):
            lcm = math.lcm(lcm, v.re.denominator, v.im.denominator)
        elif isinstance(v, Fraction):
            lcm = math.lcm(lcm, v.denominator)
    out = {}
    for c, v in row.items():
        if not v:
            continue
        w = v * lcm
        if _is_gauss(w):
            w = w if w.im else int(w.re)
        elif isinstance(w, Fraction):
            w = int(w)
        out[c] = w
    return _primitive(out)


def _content(row: Mapping[int, object]) -> int:
    nums = []
    for v in row.values():
        if _is_gauss(v):
            nums.append(int(v.re))
            nums.append(int(v.im))
        else:
            nums.append(v)
    return math.gcd(*nums) if nums else 0


def _primitive(row: dict) -> dict:
    g = _content(row)
    if g > 1:
        for c, v in row.items():
            if _is_gauss(v):
                row[c] = GaussianRational(int(v.re) // g, int(v.im) // g)
            else:
                row[c] = v // g
    return row


def _combine(r: dict, p_row: dict, col: int) -> dict:
    """Eliminate ``col`` from ``r`` using the pivot row ``p_row``."""
    a = r[col]
    p = p_row[col]
    if not _is_gauss(a) and not _is_gauss(p):
        g = math.gcd(a, p)
        a //= g
        p //= g
    out = {c: p * v for c, v in r.items()} if p != 1 else dict(r)
    for c, v in p_row.items():
        nv = out.get(c, 0) - a * v
        if nv:
            out[c] = nv
        else:
            out.pop(c, None)
    for c, v in out.items():
        if _is_gauss(v) and not v.im:
            out[c] = int(v.re)
    return _primitive(out)


class Echelon:
    """Reduced row echelon form over Q(i), built incrementally.

    Rows are kept fully reduced: a pivot column appears in exactly one stored
    row.  ``priority`` (column -> sort key) decides which column of a new row
    becomes its pivot; by default the smallest column index.
    """

    def __init__(self, ncols: int, priority=None):
        self.ncols = ncols
        self.pivots: dict[int, dict] = {}
        self._occurs: dict[int, set[int]] = {}
        self._priority = priority

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _key(self, c):
        return c if self._priority is None else self._priority(c)

    def _index(self, pc: int, row: dict, add: bool):
        for c in row:
            if c == pc:
                continue
            if add:
                self._occurs.setdefault(c, set()).add(pc)
            else:
                s = self._occurs.get(c)
                if s is not None:
                    s.discard(pc)

    def reduce(self, row: Mapping[int, object]) -> dict:
        """Return the integral normal form of ``row`` modulo the stored rows."""
        r = _integral_row(row)
        for c in [c for c in r if c in self.pivots]:
            if c in r:
                r = _combine(r, self.pivots[c], c)
        return r

    def add(self, row: Mapping[int, object]) -> bool:
        """Insert a row; return True iff it increased the rank."""
        r = self.reduce(row)
        if not r:
            return False
        pc = min(r, key=self._key)
        for q in list(self._occurs.get(pc, ())):
            old = self.pivots[q]
            new = _combine(old, r, pc)
            self._index(q, old, False)
            self.pivots[q] = new
            self._index(q, new, True)
        self._occurs.pop(pc, None)
        self.pivots[pc] = r
        self._index(pc, r, True)
        return True

    def contains(self, row: Mapping[int, object]) -> bool:
        return not self.reduce(row)

    def normalized_rows(self) -> dict[int, dict]:
        """Pivot rows scaled so the pivot entry is 1 (keyed by pivot column)."""
        out = {}
        for pc, r in self.pivots.items():
            p = r[pc]
            out[pc] = {c: div(v, p) for c, v in r.items()}
        return out

    def kernel(self) -> list[dict]:
        """Canonical kernel basis (sparse), one vector per free column."""
        basis = []
        for f in range(self.ncols):
            if f in self.pivots:
                continue
            v = {f: 1}
            for pc in self._occurs.get(f, ()):
                r = self.pivots[pc]
                v[pc] = div(-r[f], r[pc])
            lead = v[min(v)]
            if lead != 1:
                v = {c: div(x, lead) for c, x in v.items()}
            basis.append(v)
        return basis


def echelon(rows: Iterable[Mapping[int, object]], ncols: int, priority=None) -> Echelon:
    e = Echelon(ncols, priority)
    for r in rows:
        e.add(r)
    return e


def rank(m: SparseMatrix) -> int:
    """Exact rank over Q(i)."""
    return echelon(m.rows(), m.ncols).rank


def kernel_sparse(rows: Iterable[Mapping[int, object]], ncols: int) -> list[dict]:
    return echelon(rows, ncols).kernel()


def kernel_basis(m: SparseMatrix) -> list[list]:
    """Basis of the right null space, each vector with first nonzero entry 1."""
    return [_dense(v, m.ncols) for v in kernel_sparse(m.rows(), m.ncols)]


def _dense(v: Mapping[int, object], n: int) -> list:
    return [v.get(i, 0) for i in range(n)]


def solve_in_span(basis: Sequence[Mapping[int, object]], target: Mapping[int, object]):
    """Coordinates ``c`` with ``sum c_k basis[k] == target`` or None if impossible.

    ``basis`` must be linearly independent.
    """
    k = len(basis)
    # columns: coordinates 0..k-1, then the target as column k
    rows: dict[int, dict[int, object]] = {}
    for j, vec in enumerate(basis):
        for pos, x in vec.items():
            rows.setdefault(pos, {})[j] = x
    for pos, x in target.items():
        rows.setdefault(pos, {})[k] = -x
    e = echelon(rows.values(), k + 1)
    ker = e.kernel()
    for v in ker:
        if k in v:
            t = v[k]
            return [div(v.get(j, 0), t) for j in range(k)]
    if not target or all(not x for x in target.values()):
        return [0] * k
    return None


def apply_sparse(m: Mapping[int, Mapping[int, object]], v: Mapping[int, object]) -> dict:
    """Product of a column-indexed sparse matrix ``m[col] -> {row: x}`` with ``v``."""
    out: dict[int, object] = {}
    for c, x in v.items():
        for r, y in m.get(c, {}).items():
            out[r] = out.get(r, 0) + x * y
    return {r: simplify(x) for r, x in out.items() if x}


# -- semilinear systems ----------------------------------------------------

def _sigma_matrix(sigma, n: int) -> SparseMatrix:
    if isinstance(sigma, SparseMatrix):
        if sigma.shape != (n, n):
            raise ValueError("sigma has the wrong shape")
        return sigma
    entries = []
    for i, item in enumerate(sigma):
        j, s = item if isinstance(item, tuple) else (item, 1)
        entries.append((j, i, s))
    if len(entries) != n:
        raise ValueError("sigma must list one image per coordinate")
    return SparseMatrix(n, n, entries)


def solve_semilinear_fixed_points(m: SparseMatrix, sigma) -> list[list]:
    """Basis over R of ``{v : m v = 0, sigma(v) = v}`` where ``sigma(v) = S conj(v)``.

    ``sigma`` is either the matrix ``S`` or a list whose ``i``-th item is
    ``(j, s)``, meaning ``sigma(e_i) = s e_j``.  The system is solved after
    splitting every coordinate ``v = x + i y`` into two rational unknowns.
    """
    n = m.ncols
    s = _sigma_matrix(sigma, n)
    if s @ s.conjugate() != SparseMatrix.identity(n):
        raise ValueError("sigma is not an involution")
    rows = []
    for r in range(m.nrows):
        row = m.row(r)
        re_row, im_row = {}, {}
        for c, v in row.items():
            a, b = real_part(v), imag_part(v)
            if a:
                re_row[c] = a
                im_row[n + c] = a
            if b:
                re_row[n + c] = -b
                im_row[c] = b
        rows += [re_row, im_row]
    # S conj(x + iy) = (Sr x + Si y) + i (Si x - Sr y); subtract (x + iy)
    for r in range(n):
        row = s.row(r)
        re_row = {r: -1}
        im_row = {n + r: -1}
        for c, v in row.items():
            a, b = real_part(v), imag_part(v)
            if a:
                re_row[c] = re_row.get(c, 0) + a
                im_row[n + c] = im_row.get(n + c, 0) - a
            if b:
                re_row[n + c] = re_row.get(n + c, 0) + b
                im_row[c] = im_row.get(c, 0) + b
        rows += [re_row, im_row]
    out = []
    for v in kernel_sparse(rows, 2 * n):
        out.append([simplify(GaussianRational(v.get(c, 0), v.get(n + c, 0))) for c in range(n)])
    return out
