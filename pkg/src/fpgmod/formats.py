"""Plain-text file formats.

Matrix:      ``p rows cols`` then ``rows`` lines of ``cols`` residues.
Module:      ``p n dim`` then the action matrix in the matrix format.
Norm data:   ``p n m`` then ``d_0 d_1 ... d_n``.
Model:       a module followed by ``n + 1`` matrices whose rows span ``W_0 .. W_n``.

Blank lines and ``#`` comments are ignored everywhere.
"""

from __future__ import annotations

from .analyzer import NormData, NormFiltrationModel
from .errors import CharacteristicMismatch, DimensionMismatch, ParseError
from .linalg import FpMatrix, Subspace, check_prime
from .module import GModule, GroupSpec


class _Lines:
    def __init__(self, text: str):
        self.items: list[tuple[int, list[str]]] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if line:
                self.items.append((lineno, line.split()))
        self.pos = 0

    def next(self, what: str) -> tuple[int, list[str]]:
        if self.pos >= len(self.items):
            raise ParseError(f"unexpected end of input while reading {what}")
        item = self.items[self.pos]
        self.pos += 1
        return item

    def done(self) -> None:
        if self.pos < len(self.items):
            lineno, toks = self.items[self.pos]
            raise ParseError(f"line {lineno}: unexpected trailing content {' '.join(toks)!r}")


def _ints(lineno: int, toks: list[str], count: int | None, what: str) -> list[int]:
    if count is not None and len(toks) != count:
        raise ParseError(f"line {lineno}: expected {count} values for {what}, got {len(toks)}")
    out = []
    for t in toks:
        try:
            out.append(int(t))
        except ValueError:
            raise ParseError(f"line {lineno}: {t!r} is not an integer") from None
    return out


def _read_matrix(lines: _Lines) -> FpMatrix:
    lineno, toks = lines.next("matrix header")
    p, nrows, ncols = _ints(lineno, toks, 3, "matrix header 'p rows cols'")
    check_prime(p)
    if nrows < 0 or ncols < 0:
        raise ParseError(f"line {lineno}: negative matrix dimension")
    rows = []
    for _ in range(nrows):
        lineno, toks = lines.next("matrix row")
        row = _ints(lineno, toks, ncols, "matrix row")
        bad = [x for x in row if not 0 <= x < p]
        if bad:
            raise ParseError(f"line {lineno}: {bad[0]} is not a residue mod {p}")
        rows.append(row)
    return FpMatrix.from_rows(p, rows, ncols=ncols)


def _read_module(lines: _Lines) -> GModule:
    lineno, toks = lines.next("module header")
    p, n, dim = _ints(lineno, toks, 3, "module header 'p n dim'")
    if n < 0 or dim < 0:
        raise ParseError(f"line {lineno}: negative group exponent or dimension")
    group = GroupSpec(p, n)
    sigma = _read_matrix(lines)
    if sigma.p != p:
        raise CharacteristicMismatch(f"module over F_{p} with an action matrix over F_{sigma.p}")
    if sigma.shape != (dim, dim):
        raise DimensionMismatch(f"module of dimension {dim} with a {sigma.nrows}x{sigma.ncols} action matrix")
    return GModule(group, sigma)


def parse_matrix(text: str) -> FpMatrix:
    lines = _Lines(text)
    M = _read_matrix(lines)
    lines.done()
    return M


def format_matrix(M: FpMatrix) -> str:
    out = [f"{M.p} {M.nrows} {M.ncols}"]
    out += [" ".join(map(str, r)) for r in M.data]
    return "\n".join(out) + "\n"


def parse_module(text: str) -> GModule:
    lines = _Lines(text)
    X = _read_module(lines)
    lines.done()
    return X


def format_module(X: GModule) -> str:
    return f"{X.p} {X.group.n} {X.dim}\n" + format_matrix(X.sigma)


def parse_norm_data(text: str) -> NormData:
    lines = _Lines(text)
    lineno, toks = lines.next("norm data header")
    p, n, m = _ints(lineno, toks, 3, "norm data header 'p n m'")
    if n < 0:
        raise ParseError(f"line {lineno}: negative group exponent")
    group = GroupSpec(p, n)
    lineno, toks = lines.next("norm dimensions")
    d = _ints(lineno, toks, n + 1, "norm dimensions 'd_0 .. d_n'")
    lines.done()
    return NormData(group, tuple(d), m)


def format_norm_data(data: NormData) -> str:
    return f"{data.group.p} {data.group.n} {data.m}\n" + " ".join(map(str, data.d)) + "\n"


def parse_model(text: str) -> NormFiltrationModel:
    lines = _Lines(text)
    X = _read_module(lines)
    W = []
    for i in range(X.group.n + 1):
        M = _read_matrix(lines)
        if M.p != X.p:
            raise CharacteristicMismatch(f"W_{i} given over F_{M.p} in a module over F_{X.p}")
        if M.ncols != X.dim:
            raise DimensionMismatch(f"W_{i} has {M.ncols} columns, module has dimension {X.dim}")
        W.append(Subspace.span(X.p, X.dim, M.data))
    lines.done()
    return NormFiltrationModel(X, tuple(W))


def format_model(model: NormFiltrationModel) -> str:
    X = model.module
    parts = [format_module(X)]
    for i, Wi in enumerate(model.W):
        parts.append(f"# W_{i}\n" + format_matrix(Wi.basis))
    return "".join(parts)
