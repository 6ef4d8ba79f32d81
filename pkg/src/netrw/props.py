"""Built-in target PROPs: matrices over N, Q, and the boolean semiring,
the biaffine PROP over N, and the connectivity PROP, together with the
matrix formal feedback."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from .core import BoolMat, Perm


class TargetValueError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Plain matrices over a semiring
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Mat:
    rows: int
    cols: int
    entries: tuple[tuple, ...]

    @staticmethod
    def from_rows(rows, cols: int | None = None) -> "Mat":
        data = tuple(tuple(row) for row in rows)
        nrows = len(data)
        ncols = len(data[0]) if data else (cols or 0)
        if any(len(r) != ncols for r in data):
            raise TargetValueError("ragged matrix rows")
        return Mat(nrows, ncols, data)

    def get(self, i: int, j: int):
        return self.entries[i][j]

    def __str__(self) -> str:
        return "[" + "; ".join(" ".join(str(x) for x in row) for row in self.entries) + "]"


def _mat_blocks(a: Mat, row_split: int, col_split: int) -> tuple[Mat, Mat, Mat, Mat]:
    def sub(rs, cs):
        return Mat(
            len(rs), len(cs), tuple(tuple(a.entries[i][j] for j in cs) for i in rs)
        )

    r0, r1 = range(0, row_split), range(row_split, a.rows)
    c0, c1 = range(0, col_split), range(col_split, a.cols)
    return sub(r0, c0), sub(r0, c1), sub(r1, c0), sub(r1, c1)


class MatrixTarget:
    """Matrices of any sides over a commutative semiring given by
    (zero, one, add, mul)."""

    def __init__(self, name: str, zero, one, add, mul):
        self.name = name
        self.zero = zero
        self.one = one
        self.add = add
        self.mul_op = mul

    def dims(self, a: Mat) -> tuple[int, int]:
        return (a.rows, a.cols)

    def eq(self, a: Mat, b: Mat) -> bool:
        return a == b

    def compose(self, a: Mat, b: Mat) -> Mat:
        if a.cols != b.rows:
            raise TargetValueError("matrix product shape mismatch")
        out = []
        for i in range(a.rows):
            row = []
            for j in range(b.cols):
                acc = self.zero
                for k in range(a.cols):
                    acc = self.add(acc, self.mul_op(a.entries[i][k], b.entries[k][j]))
                row.append(acc)
            out.append(row)
        return Mat.from_rows(out, cols=b.cols)

    def tensor(self, a: Mat, b: Mat) -> Mat:
        out = []
        for i in range(a.rows):
            out.append(list(a.entries[i]) + [self.zero] * b.cols)
        for i in range(b.rows):
            out.append([self.zero] * a.cols + list(b.entries[i]))
        return Mat.from_rows(out, cols=a.cols + b.cols)

    def phi(self, p: Perm) -> Mat:
        out = [[self.zero] * p.n for _ in range(p.n)]
        for j in range(1, p.n + 1):
            out[p(j) - 1][j - 1] = self.one
        return Mat.from_rows(out)

    def identity(self, n: int) -> Mat:
        return self.phi(Perm(tuple(range(1, n + 1))))

    def from_rows(self, rows) -> Mat:
        return Mat.from_rows(rows)


def _int_add(a, b):
    return a + b


def _int_mul(a, b):
    return a * b


NAT_MATRIX = MatrixTarget("nat-matrix", 0, 1, _int_add, _int_mul)
RAT_MATRIX = MatrixTarget("rat-matrix", Fraction(0), Fraction(1), _int_add, _int_mul)


class BoolMatrixTarget:
    """The boolean matrix PROP; elements are :class:`core.BoolMat`."""

    name = "bool-matrix"

    def dims(self, a: BoolMat) -> tuple[int, int]:
        return (a.rows, a.cols)

    def eq(self, a: BoolMat, b: BoolMat) -> bool:
        return a == b

    def compose(self, a: BoolMat, b: BoolMat) -> BoolMat:
        return a.mul(b)

    def tensor(self, a: BoolMat, b: BoolMat) -> BoolMat:
        return a.tensor(b)

    def phi(self, p: Perm) -> BoolMat:
        return BoolMat.from_perm(p)

    def identity(self, n: int) -> BoolMat:
        return BoolMat.eye(n)

    def ones(self, rows: int, cols: int) -> BoolMat:
        return BoolMat.ones(rows, cols)


BOOL_MATRIX = BoolMatrixTarget()


def all_ones_assignment(sym) -> BoolMat:
    """The generator image used to compute transference by evaluation."""
    return BoolMat.ones(sym.coarity, sym.arity)


# ---------------------------------------------------------------------------
# Biaffine PROP
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BaffElem:
    """An element of the biaffine PROP over N, stored as its full padded
    matrix.  The matrix part, vector part, covector part, and scalar part
    are views into that matrix."""

    full: Mat

    def __post_init__(self) -> None:
        f = self.full
        if f.rows < 2 or f.cols < 2:
            raise TargetValueError("biaffine matrix must be at least 2x2")
        if f.get(0, 0) != 1 or f.get(1, 1) != 1:
            raise TargetValueError("biaffine pattern: corner entries must be 1")
        for i in range(1, f.rows):
            if f.get(i, 0) != 0:
                raise TargetValueError("biaffine pattern: column 1 not zero below row 1")
        for j in range(f.cols):
            if j != 1 and f.get(1, j) != 0:
                raise TargetValueError("biaffine pattern: row 2 not zero off column 2")

    @property
    def coarity(self) -> int:
        return self.full.rows - 2

    @property
    def arity(self) -> int:
        return self.full.cols - 2

    @property
    def matrix_part(self) -> Mat:
        return Mat.from_rows([row[2:] for row in self.full.entries[2:]])

    @property
    def vector_part(self) -> tuple:
        return tuple(row[1] for row in self.full.entries[2:])

    @property
    def covector_part(self) -> tuple:
        return tuple(self.full.entries[0][2:])

    @property
    def scalar_part(self):
        return self.full.get(0, 1)

    def __str__(self) -> str:
        return str(self.full)


class BaffTarget:
    """The biaffine PROP over N: compose is plain matrix product of the
    padded matrices, tensor adds the scalar parts and block-sums the rest."""

    name = "baff-nat"

    def dims(self, a: BaffElem) -> tuple[int, int]:
        return (a.coarity, a.arity)

    def eq(self, a: BaffElem, b: BaffElem) -> bool:
        return a.full == b.full

    def compose(self, a: BaffElem, b: BaffElem) -> BaffElem:
        return BaffElem(NAT_MATRIX.compose(a.full, b.full))

    def tensor(self, a: BaffElem, b: BaffElem) -> BaffElem:
        m1, n1 = a.coarity, a.arity
        m2, n2 = b.coarity, b.arity
        rows = []
        top = [1, a.scalar_part + b.scalar_part]
        top += list(a.covector_part) + list(b.covector_part)
        rows.append(top)
        rows.append([0, 1] + [0] * (n1 + n2))
        av, bm = a.vector_part, a.matrix_part
        for i in range(m1):
            rows.append([0, av[i]] + list(bm.entries[i]) + [0] * n2)
        bv, bmat = b.vector_part, b.matrix_part
        for i in range(m2):
            rows.append([0, bv[i]] + [0] * n1 + list(bmat.entries[i]))
        return BaffElem(Mat.from_rows(rows))

    def phi(self, p: Perm) -> BaffElem:
        full = NAT_MATRIX.tensor(NAT_MATRIX.identity(2), NAT_MATRIX.phi(p))
        return BaffElem(full)

    def identity(self, n: int) -> BaffElem:
        return BaffElem(NAT_MATRIX.identity(n + 2))

    def from_rows(self, rows) -> BaffElem:
        return BaffElem(Mat.from_rows(rows))


BAFF_NAT = BaffTarget()


# ---------------------------------------------------------------------------
# Connectivity PROP
# ---------------------------------------------------------------------------


Label = tuple[int, int]  # (0, i) for output i, (1, j) for input j; 1-based


@dataclass(frozen=True)
class ConnElem:
    """A partition of the output/input labels plus a cycle count."""

    coarity: int
    arity: int
    blocks: frozenset[frozenset[Label]]
    cyc: int

    def __post_init__(self) -> None:
        want = {(0, i) for i in range(1, self.coarity + 1)} | {
            (1, j) for j in range(1, self.arity + 1)
        }
        seen: set[Label] = set()
        for block in self.blocks:
            if not block:
                raise TargetValueError("empty block in connectivity element")
            if block & seen:
                raise TargetValueError("overlapping blocks")
            seen |= block
        if seen != want:
            raise TargetValueError("blocks do not partition the label set")
        if self.cyc < 0:
            raise TargetValueError("negative cycle count")


def _merge_partition(universe: set, links: list[tuple]) -> list[set]:
    parent = {x: x for x in universe}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in links:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    out: dict = {}
    for x in universe:
        out.setdefault(find(x), set()).add(x)
    return list(out.values())


class ConnectivityTarget:
    """Pairs (partition of legs, cyclomatic count)."""

    name = "connectivity"

    def dims(self, a: ConnElem) -> tuple[int, int]:
        return (a.coarity, a.arity)

    def eq(self, a: ConnElem, b: ConnElem) -> bool:
        return a == b

    def compose(self, a: ConnElem, b: ConnElem) -> ConnElem:
        if a.arity != b.coarity:
            raise TargetValueError("connectivity compose shape mismatch")
        l, m, n = a.coarity, a.arity, b.arity
        # working labels: (0,i) outputs, (2,k) interface, (1,j) inputs
        universe = (
            {(0, i) for i in range(1, l + 1)}
            | {(2, k) for k in range(1, m + 1)}
            | {(1, j) for j in range(1, n + 1)}
        )
        links = []
        for block in a.blocks:
            items = [((0, i) if s == 0 else (2, i)) for s, i in block]
            links += [(items[0], x) for x in items[1:]]
        for block in b.blocks:
            items = [((2, i) if s == 0 else (1, i)) for s, i in block]
            links += [(items[0], x) for x in items[1:]]
        merged = _merge_partition(universe, links)
        cyc = a.cyc + m + len(merged) - len(a.blocks) - len(b.blocks) + b.cyc
        outer = []
        for block in merged:
            keep = frozenset(x for x in block if x[0] != 2)
            if keep:
                outer.append(keep)
        return ConnElem(l, n, frozenset(outer), cyc)

    def tensor(self, a: ConnElem, b: ConnElem) -> ConnElem:
        shifted = frozenset(
            frozenset((s, i + (a.coarity if s == 0 else a.arity)) for s, i in block)
            for block in b.blocks
        )
        return ConnElem(
            a.coarity + b.coarity, a.arity + b.arity, a.blocks | shifted, a.cyc + b.cyc
        )

    def phi(self, p: Perm) -> ConnElem:
        blocks = frozenset(
            frozenset({(0, p(j)), (1, j)}) for j in range(1, p.n + 1)
        )
        return ConnElem(p.n, p.n, blocks, 0)

    def identity(self, n: int) -> ConnElem:
        return self.phi(Perm(tuple(range(1, n + 1))))

    def generator_image(self, sym) -> ConnElem:
        """All legs of the generator in a single block, no cycles."""
        labels = {(0, i) for i in range(1, sym.coarity + 1)} | {
            (1, j) for j in range(1, sym.arity + 1)
        }
        blocks = frozenset({frozenset(labels)}) if labels else frozenset()
        return ConnElem(sym.coarity, sym.arity, blocks, 0)

    def leq(self, a: ConnElem, b: ConnElem) -> bool:
        """(B1,c1) <= (B2,c2): c1 <= c2 and B1 refines B2."""
        if (a.coarity, a.arity) != (b.coarity, b.arity):
            return False
        if a.cyc > b.cyc:
            return False
        for block in a.blocks:
            if not any(block <= other for other in b.blocks):
                return False
        return True


CONNECTIVITY = ConnectivityTarget()


#: cup/cap datum in the connectivity PROP used as a fixed regression test:
#: evaluates the zig-zag composite to the identity.
CONN_CUP = ConnElem(0, 2, frozenset({frozenset({(1, 1), (1, 2)})}), 0)
CONN_CAP = ConnElem(2, 0, frozenset({frozenset({(0, 1), (0, 2)})}), 0)


# ---------------------------------------------------------------------------
# Matrix formal feedback
# ---------------------------------------------------------------------------


class PatternNotNilpotentError(ValueError):
    pass


class PatternViolatedError(ValueError):
    pass


def _mat_pattern(a: Mat) -> BoolMat:
    return BoolMat.from_rows([[1 if x else 0 for x in row] for row in a.entries])


def matrix_feedback(a, n: int, pattern: BoolMat | None = None, target=None):
    """Formal feedback: connect the last n outputs back to the last n
    inputs of a matrix (or biaffine) element.

    The bottom-right n x n block must have a nilpotent zero/nonzero
    pattern bounded by ``pattern`` (which defaults to the block's own
    pattern); its Kleene star is then the finite Neumann sum.
    """
    if isinstance(a, BaffElem):
        result = matrix_feedback(a.full, n, pattern, target=NAT_MATRIX)
        return BaffElem(result)
    t = target or NAT_MATRIX
    if n == 0:
        return a
    if a.rows < n or a.cols < n:
        raise TargetValueError("feedback size exceeds element shape")
    a11, a12, a21, a22 = _mat_blocks(a, a.rows - n, a.cols - n)
    pat22 = _mat_pattern(a22)
    if pattern is None:
        pattern = pat22
    if not pattern.is_square() or pattern.rows != n:
        raise TargetValueError("pattern shape mismatch")
    if not pattern.is_nilpotent():
        raise PatternNotNilpotentError("feedback pattern is not nilpotent")
    if not pat22.leq(pattern):
        raise PatternViolatedError("block exceeds the declared pattern")
    # finite Neumann sum: I + A22 + A22^2 + ... (terminates by nilpotence)
    star = t.identity(n)
    power = t.identity(n)
    for _ in range(n):
        power = t.compose(power, a22)
        star = Mat.from_rows(
            [
                [t.add(star.entries[i][j], power.entries[i][j]) for j in range(n)]
                for i in range(n)
            ]
        )
    middle = t.compose(t.compose(a12, star), a21)
    return Mat.from_rows(
        [
            [t.add(a11.entries[i][j], middle.entries[i][j]) for j in range(a11.cols)]
            for i in range(a11.rows)
        ]
    )


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------


TARGETS = {
    "nat-matrix": NAT_MATRIX,
    "rat-matrix": RAT_MATRIX,
    "bool-matrix": BOOL_MATRIX,
    "baff-nat": BAFF_NAT,
    "connectivity": CONNECTIVITY,
}


def get_target(name: str):
    try:
        return TARGETS[name]
    except KeyError:
        raise TargetValueError(
            f"unknown target {name!r}; known: {', '.join(sorted(TARGETS))}"
        ) from None


def parse_assignment(text: str, sig, target):
    """Parse a generator-assignment file.

    One ``map <symbol> = <rows>`` line per generator; rows are separated
    by ``;`` and entries by whitespace.  For the biaffine target the full
    padded (m+2) x (n+2) matrix is given.  Entries may be fractions
    ``p/q`` for the rational target.
    """
    is_baff = isinstance(target, BaffTarget)
    is_conn = isinstance(target, ConnectivityTarget)
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not line.startswith("map "):
            raise TargetValueError(f"line {lineno}: expected 'map <symbol> = <rows>'")
        head, _, body = line[4:].partition("=")
        name = head.strip()
        if name not in sig:
            raise TargetValueError(f"line {lineno}: unknown symbol {name!r}")
        sym = sig[name]
        if is_conn:
            raise TargetValueError("connectivity target needs no assignment file")
        rows = sym.coarity + (2 if is_baff else 0)
        cols = sym.arity + (2 if is_baff else 0)
        data = []
        for chunk in body.split(";"):
            entries = chunk.split()
            if entries:
                data.append([Fraction(x) if "/" in x else int(x) for x in entries])
        if len(data) != rows or any(len(r) != cols for r in data):
            raise TargetValueError(
                f"line {lineno}: {name!r} needs a {rows}x{cols} matrix"
            )
        if is_baff:
            out[name] = BaffElem(Mat.from_rows(data))
        else:
            out[name] = Mat.from_rows(data)
    missing = [s.name for s in sig if s.name not in out and not is_conn]
    if missing:
        raise TargetValueError(f"no assignment for symbols: {', '.join(missing)}")
    return out


def connectivity_assignment(sig):
    return {s.name: CONNECTIVITY.generator_image(s) for s in sig}
