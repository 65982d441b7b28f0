"""Exact exterior algebra over the rationals on a fixed frame e_1, ..., e_n.

Monomials e_{i1...ik} (indices strictly increasing) are stored as bitmasks,
so wedge signs reduce to popcount parity.  All coefficients are
`fractions.Fraction`; nothing is ever rounded.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Mapping, Sequence

MAX_DIM = 14

Coeff = Fraction | int


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, Rational):  # int, or a user-supplied rational type
        return Fraction(c)
    raise TypeError(f"coefficients must be exact rationals, got {type(c).__name__}")


def mask_of(indices: Iterable[int], dim: int) -> int:
    """Bitmask of a strictly increasing index set; rejects anything else."""
    mask, prev = 0, 0
    for i in indices:
        if not 1 <= i <= dim:
            raise ValueError(f"index {i} out of range 1..{dim}")
        if i <= prev:
            raise ValueError(f"indices must be strictly increasing, got {i} after {prev}")
        mask |= 1 << (i - 1)
        prev = i
    return mask


def indices_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def merge_sign(a: int, b: int) -> int:
    """Parity sign of sorting the concatenation of index sets a then b."""
    sign = 1
    while b:
        low = b & -b
        if (a >> low.bit_length()).bit_count() & 1:
            sign = -sign
        b ^= low
    return sign


class KForm:
    """Homogeneous exterior form of fixed degree on an n-dimensional frame.

    Immutable value type: term map monomial-mask -> nonzero Fraction.
    """

    __slots__ = ("dim", "degree", "terms")

    def __init__(self, dim: int, degree: int, terms: Mapping[int, Coeff] | None = None):
        if not 0 < dim <= MAX_DIM:
            raise ValueError(f"dimension must be in 1..{MAX_DIM}, got {dim}")
        if not 0 <= degree <= dim:
            raise ValueError(f"degree must be in 0..{dim}, got {degree}")
        clean: dict[int, Fraction] = {}
        if terms:
            for mask, c in terms.items():
                if mask >> dim:
                    raise ValueError(f"monomial {indices_of(mask)} does not fit dimension {dim}")
                if mask.bit_count() != degree:
                    raise ValueError(
                        f"monomial {indices_of(mask)} has degree {mask.bit_count()}, expected {degree}"
                    )
                c = _as_fraction(c)
                if c:
                    clean[mask] = c
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("KForm is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, dim: int, degree: int) -> "KForm":
        return cls(dim, degree, None)

    @classmethod
    def scalar(cls, dim: int, value) -> "KForm":
        return cls(dim, 0, {0: _as_fraction(value)})

    @classmethod
    def monomial(cls, dim: int, indices: Sequence[int], coeff=1) -> "KForm":
        """c * e_{i1} ^ ... ^ e_{ik}; indices may come in any order (sign applied)."""
        seq = list(indices)
        if len(set(seq)) != len(seq):
            raise ValueError(f"repeated index in monomial {seq}")
        sign, mask = 1, 0
        for i in seq:
            if not 1 <= i <= dim:
                raise ValueError(f"index {i} out of range 1..{dim}")
            bit = 1 << (i - 1)
            sign *= merge_sign(mask, bit)
            mask |= bit
        return cls(dim, len(seq), {mask: sign * _as_fraction(coeff)})

    # -- predicates and canonical views ------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Terms sorted lexicographically on index sets (canonical public order)."""
        return sorted(((indices_of(m), c) for m, c in self.terms.items()), key=lambda t: t[0])

    def coefficient(self, indices: Sequence[int]) -> Fraction:
        return self.terms.get(mask_of(sorted(indices), self.dim), Fraction(0))

    # -- arithmetic ---------------------------------------------------------

    def _check_compatible(self, other: "KForm") -> None:
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "KForm") -> "KForm":
        if not isinstance(other, KForm):
            return NotImplemented
        self._check_compatible(other)
        # zero forms are degree-polymorphic; genuine mixed-degree sums are rejected
        if self.degree != other.degree:
            if self.is_zero():
                return other
            if other.is_zero():
                return self
            raise ValueError(f"degree mismatch in sum: {self.degree} vs {other.degree}")
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, Fraction(0)) + c
        return KForm(self.dim, self.degree, terms)

    def __neg__(self) -> "KForm":
        return KForm(self.dim, self.degree, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "KForm") -> "KForm":
        if not isinstance(other, KForm):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar) -> "KForm":
        c = _as_fraction(scalar)
        return KForm(self.dim, self.degree, {m: c * v for m, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, KForm):
            return NotImplemented
        return (
            self.dim == other.dim
            and (self.degree == other.degree or self.is_zero() and other.is_zero())
            and self.terms == other.terms
        )

    def __hash__(self):
        # degree omitted: zero forms compare equal across degrees
        return hash((self.dim, frozenset(self.terms.items())))

    def __call__(self, *vectors: "Vector") -> Fraction:
        """Evaluate the k-form on k vectors (alternating multilinear pairing)."""
        if len(vectors) != self.degree:
            raise ValueError(f"need {self.degree} vectors, got {len(vectors)}")
        for v in vectors:
            if v.dim != self.dim:
                raise ValueError(f"dimension mismatch: {self.dim} vs {v.dim}")
        if self.degree == 0:
            return self.terms.get(0, Fraction(0))
        total = Fraction(0)
        for mask, c in self.terms.items():
            idx = indices_of(mask)
            rows = [[v.components[i - 1] for i in idx] for v in vectors]
            total += c * _det(rows)
        return total

    def __repr__(self) -> str:
        return f"KForm({self.dim}, {self.degree}, {self!s})"

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for idx, c in self.sorted_terms():
            if not idx:
                mono = "1"
            elif self.dim > 9:
                mono = "e[" + ",".join(str(i) for i in idx) + "]"
            else:
                mono = "e" + "".join(str(i) for i in idx)
            if c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    # -- operations as methods ----------------------------------------------

    def wedge(self, other: "KForm") -> "KForm":
        return wedge(self, other)


def _det(rows: list[list[Fraction]]) -> Fraction:
    """Exact determinant by fraction-free-ish Gaussian elimination (tiny matrices)."""
    n = len(rows)
    m = [row[:] for row in rows]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            if m[r][col]:
                f = m[r][col] * inv
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
    return det


class Vector:
    """Vector in the frame E_1, ..., E_n with exact rational components."""

    __slots__ = ("dim", "components")

    def __init__(self, components: Sequence):
        comps = tuple(_as_fraction(c) for c in components)
        if not 0 < len(comps) <= MAX_DIM:
            raise ValueError(f"dimension must be in 1..{MAX_DIM}, got {len(comps)}")
        object.__setattr__(self, "dim", len(comps))
        object.__setattr__(self, "components", comps)

    def __setattr__(self, name, value):
        raise AttributeError("Vector is immutable")

    @classmethod
    def basis(cls, dim: int, k: int) -> "Vector":
        if not 1 <= k <= dim:
            raise ValueError(f"basis index {k} out of range 1..{dim}")
        return cls([Fraction(i == k - 1) for i in range(dim)])

    @classmethod
    def zero(cls, dim: int) -> "Vector":
        return cls([Fraction(0)] * dim)

    def is_zero(self) -> bool:
        return not any(self.components)

    def __add__(self, other: "Vector") -> "Vector":
        if not isinstance(other, Vector):
            return NotImplemented
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return Vector([a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: "Vector") -> "Vector":
        if not isinstance(other, Vector):
            return NotImplemented
        return self + (-1) * other

    def __mul__(self, scalar) -> "Vector":
        c = _as_fraction(scalar)
        return Vector([c * v for v in self.components])

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, Vector):
            return NotImplemented
        return self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.components)

    def __repr__(self) -> str:
        return f"Vector({list(self.components)})"


def wedge(a: KForm, b: KForm) -> KForm:
    """Exterior product; signs from permutation parity of the merged index sets."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    degree = a.degree + b.degree
    if degree > a.dim:
        return KForm.zero(a.dim, min(degree, a.dim))
    terms: dict[int, Fraction] = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            if ma & mb:
                continue
            m = ma | mb
            c = ca * cb * merge_sign(ma, mb)
            terms[m] = terms.get(m, Fraction(0)) + c
    return KForm(a.dim, degree, terms)


def wedge_all(forms: Sequence[KForm]) -> KForm:
    if not forms:
        raise ValueError("empty wedge product")
    out = forms[0]
    for f in forms[1:]:
        out = wedge(out, f)
    return out


def interior(v: Vector, a: KForm) -> KForm:
    """Interior product v . a (antiderivation; degree drops by one)."""
    if v.dim != a.dim:
        raise ValueError(f"dimension mismatch: {v.dim} vs {a.dim}")
    if a.degree == 0:
        return KForm.zero(a.dim, 0)
    terms: dict[int, Fraction] = {}
    for mask, c in a.terms.items():
        rem = mask
        while rem:
            low = rem & -rem
            rem ^= low
            i = low.bit_length()  # frame index of this slot
            comp = v.components[i - 1]
            if comp:
                # slot position parity inside the monomial
                sign = -1 if (mask & (low - 1)).bit_count() & 1 else 1
                m2 = mask ^ low
                terms[m2] = terms.get(m2, Fraction(0)) + sign * comp * c
    return KForm(a.dim, a.degree - 1, terms)


def hodge_star_orthonormal(a: KForm, orientation: int = 1) -> KForm:
    """Hodge star for the frame declared orthonormal with volume e_1...e_n.

    *e_I = s * e_{I^c} with s the shuffle parity of (I, I^c) times orientation.
    """
    if orientation not in (1, -1):
        raise ValueError("orientation must be +1 or -1")
    full = (1 << a.dim) - 1
    terms = {}
    for mask, c in a.terms.items():
        comp = full ^ mask
        terms[comp] = c * merge_sign(mask, comp) * orientation
    return KForm(a.dim, a.dim - a.degree, terms)


def pullback(matrix: Sequence[Sequence], a: KForm) -> KForm:
    """Pullback of a form along the endomorphism given in the frame.

    (P*a)(v_1, ..., v_k) = a(Pv_1, ..., Pv_k); covectors map by e_i -> sum_j M[i][j] e_j.
    """
    n = a.dim
    if len(matrix) != n or any(len(row) != n for row in matrix):
        raise ValueError(f"matrix must be {n}x{n}")
    rows = [
        KForm(n, 1, {1 << j: _as_fraction(matrix[i][j]) for j in range(n)})
        for i in range(n)
    ]
    out = KForm.zero(n, a.degree)
    for mask, c in a.terms.items():
        image = KForm.scalar(n, c)
        for i in indices_of(mask):
            image = wedge(image, rows[i - 1])
        out = out + image
    return out
