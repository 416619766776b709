"""SL_n matrices, pairs of them, words in generators, and the JSON group spec."""
from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import permutations
from pathlib import Path
from typing import Optional, Sequence, Tuple, Union

from .errors import DeterminantError, DimensionMismatchError, DomainMismatchError, GroupSpecError
from .scalars import FLOAT, RATIONAL, FieldDescriptor, LaurentDomain, ScalarParseError, domain_of

DET_TOL = 1e-9


def _mat_mul(a, b, zero):
    cols = list(zip(*b))
    out = []
    for row in a:
        new = []
        for col in cols:
            acc = zero
            for x, y in zip(row, col):
                if x and y:
                    acc = acc + x * y
            new.append(acc)
        out.append(tuple(new))
    return tuple(out)


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


_PERMS: dict = {}


def det_division_free(rows, zero):
    """Leibniz determinant; valid over any commutative ring.  Meant for n <= 5."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    perms = _PERMS.get(n)
    if perms is None:
        perms = _PERMS[n] = [(p, _perm_sign(p)) for p in permutations(range(n))]
    total = zero
    for perm, sign in perms:
        term = None
        for i, j in enumerate(perm):
            x = rows[i][j]
            if not x:
                term = None
                break
            term = x if term is None else term * x
        if term is not None:
            total = total + term if sign > 0 else total - term
    return total


def det_by_elimination(rows, one):
    """Determinant over a field by Gaussian elimination (exact for Fractions)."""
    a = [list(r) for r in rows]
    n = len(a)
    det = one
    for c in range(n):
        if isinstance(one, float):
            piv = max(range(c, n), key=lambda r: abs(a[r][c]))
        else:
            piv = next((r for r in range(c, n) if a[r][c]), None)
            if piv is None:
                return one - one
        if not a[piv][c]:
            return one - one
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        pv = a[c][c]
        det = det * pv
        for r in range(c + 1, n):
            if a[r][c]:
                f = a[r][c] / pv
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return det


def determinant(rows, domain):
    if isinstance(domain, LaurentDomain):
        return det_division_free(rows, domain.zero)
    return det_by_elimination(rows, domain.one)


def submatrix(rows, row_idx, col_idx):
    return [[rows[i][j] for j in col_idx] for i in row_idx]


class SLMatrix:
    """Immutable n x n matrix of determinant one over an exact or float domain."""

    __slots__ = ("domain", "rows", "_key")

    def __init__(self, rows, domain=None, check: bool = True):
        rows = [list(r) for r in rows]
        n = len(rows)
        if n < 2 or any(len(r) != n for r in rows):
            raise DimensionMismatchError("an SL_n matrix must be square with n >= 2")
        if domain is None:
            domain = domain_of(rows[0][0])
        rows = tuple(tuple(domain.coerce(x) for x in r) for r in rows)
        self.domain = domain
        self.rows = rows
        self._key = None
        if check:
            self._check_det()

    @classmethod
    def _trusted(cls, rows, domain):
        obj = cls.__new__(cls)
        obj.domain = domain
        obj.rows = rows
        obj._key = None
        return obj

    def _check_det(self):
        d = self.det()
        if self.domain.exact:
            if d != self.domain.one:
                raise DeterminantError(f"determinant is {d}, not 1")
        elif not abs(d - 1.0) <= DET_TOL:
            raise DeterminantError(f"determinant {d!r} differs from 1 by more than {DET_TOL}")

    @classmethod
    def identity(cls, n: int, domain=RATIONAL) -> "SLMatrix":
        z, o = domain.zero, domain.one
        return cls._trusted(tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)), domain)

    @classmethod
    def diag(cls, entries, domain=None) -> "SLMatrix":
        entries = list(entries)
        domain = domain or domain_of(entries[0])
        n = len(entries)
        return cls([[entries[i] if i == j else domain.zero for j in range(n)] for i in range(n)], domain)

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def det(self):
        return determinant(self.rows, self.domain)

    def __matmul__(self, other: "SLMatrix") -> "SLMatrix":
        if not isinstance(other, SLMatrix):
            return NotImplemented
        if other.domain is not self.domain:
            raise DomainMismatchError(f"cannot multiply {self.domain!r} by {other.domain!r}")
        if other.n != self.n:
            raise DimensionMismatchError(f"cannot multiply {self.n}x{self.n} by {other.n}x{other.n}")
        return SLMatrix._trusted(_mat_mul(self.rows, other.rows, self.domain.zero), self.domain)

    def inverse(self) -> "SLMatrix":
        """Inverse via the adjugate, so exact entries never leave their ring."""
        n = self.n
        rows = self.rows
        dom = self.domain
        if n == 2:
            (a, b), (c, d) = rows
            adj = ((d, -b), (-c, a))
        else:
            adj = [[None] * n for _ in range(n)]
            for i in range(n):
                others_i = [r for r in range(n) if r != i]
                for j in range(n):
                    others_j = [c for c in range(n) if c != j]
                    minor = determinant(submatrix(rows, others_i, others_j), dom)
                    adj[j][i] = minor if (i + j) % 2 == 0 else -minor
            adj = tuple(tuple(r) for r in adj)
        if dom.exact:
            return SLMatrix._trusted(adj, dom)
        d = self.det()
        return SLMatrix._trusted(tuple(tuple(x / d for x in r) for r in adj), dom)

    def __pow__(self, m: int) -> "SLMatrix":
        base = self if m >= 0 else self.inverse()
        m = abs(m)
        result = SLMatrix.identity(self.n, self.domain)
        while m:
            if m & 1:
                result = result @ base
            m >>= 1
            if m:
                base = base @ base
        return result

    def transpose(self) -> "SLMatrix":
        return SLMatrix._trusted(tuple(zip(*self.rows)), self.domain)

    def is_identity(self) -> bool:
        one, zero = self.domain.one, self.domain.zero
        return all(x == (one if i == j else zero) for i, r in enumerate(self.rows) for j, x in enumerate(r))

    def to_float(self) -> "SLMatrix":
        if self.domain is FLOAT:
            return self
        if isinstance(self.domain, LaurentDomain):
            raise DomainMismatchError("Laurent polynomial entries have no real value")
        return SLMatrix._trusted(tuple(tuple(float(x) for x in r) for r in self.rows), FLOAT)

    def float_rows(self):
        return [[float(x) for x in r] for r in self.rows]

    def key(self) -> bytes:
        """Canonical byte serialization; equal keys iff equal matrices (exact domains)."""
        if self._key is None:
            fmt = self.domain.format
            body = ";".join(fmt(x) for r in self.rows for x in r)
            self._key = f"{self.domain.tag}{self.n}|{body}".encode()
        return self._key

    def __eq__(self, other):
        if not isinstance(other, SLMatrix):
            return NotImplemented
        return self.domain is other.domain and self.rows == other.rows

    def __hash__(self):
        return hash(self.key()) if self.domain.exact else hash(self.rows)

    def __reduce__(self):
        return (SLMatrix._trusted, (self.rows, self.domain))

    def entries_str(self):
        return [[self.domain.format(x) for x in r] for r in self.rows]

    def __repr__(self):
        body = "; ".join(", ".join(r) for r in self.entries_str())
        return f"SLMatrix[{body}]"


class Pair:
    """Element (left, right) of G x G; every operation acts componentwise."""

    __slots__ = ("left", "right", "_key")

    def __init__(self, left: SLMatrix, right: SLMatrix):
        if left.domain is not right.domain or left.n != right.n:
            raise DomainMismatchError("pair components must share dimension and domain")
        self.left = left
        self.right = right
        self._key = None

    @property
    def n(self):
        return self.left.n

    @property
    def domain(self):
        return self.left.domain

    @classmethod
    def identity(cls, n, domain=RATIONAL):
        e = SLMatrix.identity(n, domain)
        return cls(e, e)

    def __matmul__(self, other: "Pair") -> "Pair":
        if not isinstance(other, Pair):
            return NotImplemented
        return Pair(self.left @ other.left, self.right @ other.right)

    def inverse(self) -> "Pair":
        return Pair(self.left.inverse(), self.right.inverse())

    def __pow__(self, m):
        return Pair(self.left ** m, self.right ** m)

    def is_identity(self):
        return self.left.is_identity() and self.right.is_identity()

    def is_diagonal(self) -> bool:
        return self.left == self.right

    def key(self) -> bytes:
        if self._key is None:
            self._key = self.left.key() + b"#" + self.right.key()
        return self._key

    def __eq__(self, other):
        if not isinstance(other, Pair):
            return NotImplemented
        return self.left == other.left and self.right == other.right

    def __hash__(self):
        return hash(self.key())

    def __reduce__(self):
        return (Pair, (self.left, self.right))

    def __repr__(self):
        return f"Pair({self.left!r}, {self.right!r})"


GroupElement = Union[SLMatrix, Pair]


def identity_like(g: GroupElement) -> GroupElement:
    if isinstance(g, Pair):
        return Pair.identity(g.n, g.domain)
    return SLMatrix.identity(g.n, g.domain)


def multiply(a: GroupElement, b: GroupElement) -> GroupElement:
    if type(a) is not type(b):
        raise DomainMismatchError("cannot multiply a matrix by a pair")
    return a @ b


def inverse(a: GroupElement) -> GroupElement:
    if isinstance(a, SLMatrix) and a.domain.exact:
        a._check_det()
    return a.inverse()


@dataclass(frozen=True)
class GroupWord:
    """Word in the generators: a tuple of ``(index, sign)`` letters, index 0-based."""

    letters: Tuple[Tuple[int, int], ...] = ()

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def append(self, index: int, sign: int) -> "GroupWord":
        return GroupWord(self.letters + ((index, sign),))

    def inverse(self) -> "GroupWord":
        return GroupWord(tuple((i, -s) for i, s in reversed(self.letters)))

    def format(self, labels: Sequence[str]) -> str:
        if not self.letters:
            return "1"
        return "*".join(labels[i] if s > 0 else f"{labels[i]}^-1" for i, s in self.letters)

    @classmethod
    def parse(cls, text: str, labels: Sequence[str]) -> "GroupWord":
        text = text.strip()
        if text in ("", "1"):
            return cls()
        letters = []
        for tok in text.split("*"):
            tok = tok.strip()
            sign = 1
            if tok.endswith("^-1"):
                tok, sign = tok[:-3], -1
            if tok not in labels:
                raise GroupSpecError(f"unknown generator label {tok!r}")
            letters.append((list(labels).index(tok), sign))
        return cls(tuple(letters))


def default_labels(count: int):
    letters = "abcdefghijklmnopqrstuvwxyz"
    if count <= len(letters):
        return tuple(letters[:count])
    return tuple(f"g{i}" for i in range(count))


@dataclass(frozen=True)
class GeneratorSet:
    field: FieldDescriptor
    n: int
    generators: Tuple[GroupElement, ...]
    labels: Tuple[str, ...] = dc_field(default=())

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        if not gens:
            raise GroupSpecError("a generator set needs at least one generator")
        kinds = {type(g) for g in gens}
        if len(kinds) != 1:
            raise GroupSpecError("generators must be all matrices or all pairs")
        dom = gens[0].domain
        for g in gens:
            if g.n != self.n or g.domain is not dom:
                raise DimensionMismatchError("generators must share dimension and coefficient domain")
        if not self.field.accepts(dom):
            raise DomainMismatchError(f"field {self.field} cannot view {dom!r} entries")
        labels = tuple(self.labels) or default_labels(len(gens))
        if len(labels) != len(gens) or len(set(labels)) != len(labels):
            raise GroupSpecError("labels must be distinct and match the generator count")
        object.__setattr__(self, "labels", labels)

    @property
    def domain(self):
        return self.generators[0].domain

    @property
    def is_pair(self) -> bool:
        return isinstance(self.generators[0], Pair)

    def identity(self) -> GroupElement:
        return identity_like(self.generators[0])

    def letters(self):
        """``[((index, sign), element)]`` in the fixed generator order a, a^-1, b, b^-1, ..."""
        out = []
        for i, g in enumerate(self.generators):
            out.append(((i, 1), g))
            out.append(((i, -1), g.inverse()))
        return out

    def __len__(self):
        return len(self.generators)


def evaluate_word(w: GroupWord, gens: GeneratorSet) -> GroupElement:
    result = gens.identity()
    inverses = {}
    for i, s in w:
        if not 0 <= i < len(gens.generators):
            raise IndexError(f"generator index {i} out of range for {len(gens.generators)} generators")
        g = gens.generators[i]
        if s < 0:
            if i not in inverses:
                inverses[i] = g.inverse()
            g = inverses[i]
        result = result @ g
    return result


def pair_group(gens_left: GeneratorSet, gens_right: GeneratorSet, labels=None) -> GeneratorSet:
    if len(gens_left) != len(gens_right):
        raise GroupSpecError("left and right generator lists must have the same length")
    if gens_left.field != gens_right.field or gens_left.n != gens_right.n:
        raise DomainMismatchError("left and right generator sets must share field and dimension")
    if gens_left.is_pair or gens_right.is_pair:
        raise GroupSpecError("pair_group expects plain matrix generator sets")
    pairs = tuple(Pair(a, b) for a, b in zip(gens_left.generators, gens_right.generators))
    return GeneratorSet(gens_left.field, gens_left.n, pairs, tuple(labels) if labels else gens_left.labels)


# --- JSON group spec -------------------------------------------------------


def _field_from_json(obj) -> FieldDescriptor:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise GroupSpecError("'field' must be an object with a 'kind'")
    try:
        return FieldDescriptor(obj["kind"], obj.get("p"))
    except ValueError as exc:
        raise GroupSpecError(str(exc)) from exc


def parse_matrix(entries, n: int, domain, check=True) -> SLMatrix:
    if not isinstance(entries, list) or len(entries) != n or any(not isinstance(r, list) or len(r) != n for r in entries):
        raise GroupSpecError(f"expected a {n}x{n} array of scalar strings")
    rows = []
    for r in entries:
        row = []
        for x in r:
            if not isinstance(x, (str, int)):
                raise GroupSpecError(f"matrix entries must be strings, got {x!r}")
            row.append(domain.parse(str(x)))
        rows.append(row)
    return SLMatrix(rows, domain, check=check)


def load_group_spec(source, field_override: Optional[FieldDescriptor] = None) -> GeneratorSet:
    """Build a :class:`GeneratorSet` from a JSON group spec (path, string or dict).

    A spec with ``right_generators`` describes a pair group; a spec with a
    single ``matrix`` is treated as a one-generator set.
    """
    if isinstance(source, dict):
        obj = source
    else:
        if isinstance(source, str) and source.lstrip()[:1] in ("{", "["):
            text = source
        else:
            text = Path(source).read_text(encoding="utf-8")
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GroupSpecError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise GroupSpecError("group spec must be a JSON object")
    fld = field_override or _field_from_json(obj.get("field"))
    n = obj.get("n")
    if not isinstance(n, int) or n < 2:
        raise GroupSpecError("'n' must be an integer >= 2")
    domain = fld.default_domain()
    raw = obj.get("generators")
    if raw is None and "matrix" in obj:
        raw = [obj["matrix"]]
    if not isinstance(raw, list) or not raw:
        raise GroupSpecError("'generators' must be a nonempty list of matrices")
    try:
        left = tuple(parse_matrix(m, n, domain) for m in raw)
        labels = tuple(obj.get("labels") or ())
        right_raw = obj.get("right_generators")
        if right_raw is None:
            return GeneratorSet(fld, n, left, labels)
        if not isinstance(right_raw, list) or len(right_raw) != len(raw):
            raise GroupSpecError("'right_generators' must match 'generators' in length")
        right = tuple(parse_matrix(m, n, domain) for m in right_raw)
        return GeneratorSet(fld, n, tuple(Pair(a, b) for a, b in zip(left, right)), labels)
    except (ScalarParseError, DeterminantError, DomainMismatchError, DimensionMismatchError) as exc:
        raise GroupSpecError(str(exc)) from exc


def group_spec_to_json(gens: GeneratorSet) -> dict:
    fld = {"kind": gens.field.kind}
    if gens.field.p is not None:
        fld["p"] = gens.field.p
    obj = {"field": fld, "n": gens.n}
    if gens.is_pair:
        obj["generators"] = [g.left.entries_str() for g in gens.generators]
        obj["right_generators"] = [g.right.entries_str() for g in gens.generators]
    else:
        obj["generators"] = [g.entries_str() for g in gens.generators]
    obj["labels"] = list(gens.labels)
    return obj


def rational_matrix(rows) -> SLMatrix:
    return SLMatrix([[Fraction(x) for x in r] for r in rows], RATIONAL)
