"""The small quantum group at an odd root of unity and its modules.

Modules carry explicit matrices for E, F, K over Q(q).  Tensor powers of
the two-dimensional module X use the ordered basis of words in {0, 1}
(the index of a_0^1 or a_1^1 in each factor) with the last factor varying
fastest, and the actions come from iterating the coproduct

    Δ(E) = E ⊗ K + 1 ⊗ E,   Δ(F) = K⁻¹ ⊗ F + F ⊗ 1,   Δ(K) = K ⊗ K.

Embedded bases realize the simple modules X_m, the projective modules P_m,
the two copies X^±_{r-1} inside X^{⊗2r-1} and a few supplements as
explicit coordinate vectors in tensor powers.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

from .cycmat import CycMatrix
from .errors import IndexOutOfRange, ShapeMismatch, SolverFailure
from .scalars import CyclotomicScalar, RingTag, quantum_int

__all__ = [
    "BasedModule",
    "EmbeddedBasis",
    "ModuleMap",
    "appendix_oracles",
    "dimension_table",
    "embed",
    "hom_space",
    "named_morphism",
    "projective_module",
    "restrict",
    "simple_module",
    "tensor_power",
]


def _check_level(r: int) -> None:
    if r < 3 or r % 2 == 0:
        raise ValueError(f"level must be an odd integer >= 3, got {r}")


def _q(r: int, k: int = 1) -> CyclotomicScalar:
    return CyclotomicScalar.q(r, k)


def _qi(k: int, r: int) -> CyclotomicScalar:
    return quantum_int(k, RingTag.root(r))


# ---------------------------------------------------------------------------
# modules and maps


@dataclass(frozen=True, eq=False)
class BasedModule:
    """A finite-dimensional module with a chosen basis and action matrices."""

    name: str
    r: int
    labels: tuple[str, ...]
    E: CycMatrix
    F: CycMatrix
    K: CycMatrix
    weights: tuple[int, ...] | None = field(default=None)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def act(self, g: str) -> CycMatrix:
        return {"E": self.E, "F": self.F, "K": self.K}[g]

    def basis_vector(self, label: str) -> CycMatrix:
        return CycMatrix.from_entries(self.r, self.dim, 1, [(self.index(label), 0, 1)])

    def hopf_checks(self) -> dict[str, bool]:
        """The defining relations of the small quantum group, as matrix identities."""
        r, n = self.r, self.dim
        one = CycMatrix.identity(r, n)
        zero = CycMatrix.zeros(r, n, n)
        E, F, K = self.E, self.F, self.K
        try:
            Kinv = K.inverse()
            invertible = (K @ Kinv) == one
        except SolverFailure:
            return {"K invertible": False}
        q = _q(r)
        out = {"K invertible": invertible}
        out["K^r = 1"] = _power(K, r) == one
        out["E^r = 0"] = _power(E, r) == zero
        out["F^r = 0"] = _power(F, r) == zero
        out["K E K^-1 = q^2 E"] = (K @ E @ Kinv) == E.scale(q * q)
        out["K F K^-1 = q^-2 F"] = (K @ F @ Kinv) == F.scale(_q(r, -2))
        lhs = ((E @ F) - (F @ E)).scale(q - _q(r, -1))
        out["[E,F] = (K - K^-1)/(q - q^-1)"] = lhs == (K - Kinv)
        return out


def _power(M: CycMatrix, k: int) -> CycMatrix:
    out = CycMatrix.identity(M.r, M.rows)
    for _ in range(k):
        out = out @ M
    return out


@dataclass(frozen=True, eq=False)
class ModuleMap:
    source: BasedModule
    target: BasedModule
    matrix: CycMatrix

    def __post_init__(self):
        if self.matrix.shape != (self.target.dim, self.source.dim):
            raise ShapeMismatch(
                f"matrix {self.matrix.shape} does not map {self.source.name} -> {self.target.name}"
            )

    def is_intertwiner(self) -> bool:
        M = self.matrix
        return all(
            M @ self.source.act(g) == self.target.act(g) @ M for g in "EFK"
        )

    def __matmul__(self, other: ModuleMap) -> ModuleMap:
        if other.target.dim != self.source.dim:
            raise ShapeMismatch(f"{other.target.name} vs {self.source.name}")
        return ModuleMap(other.source, self.target, self.matrix @ other.matrix)

    def __add__(self, other: ModuleMap) -> ModuleMap:
        return ModuleMap(self.source, self.target, self.matrix + other.matrix)

    def to_json(self) -> dict:
        return {
            "source_dim": self.source.dim,
            "target_dim": self.target.dim,
            "entries": self.matrix.to_triplets(),
        }


def matrix_from_json(data: dict, r: int) -> CycMatrix:
    from .scalars import scalar_from_json

    return CycMatrix.from_entries(
        r,
        data["target_dim"],
        data["source_dim"],
        [(i, j, scalar_from_json(s)) for i, j, s in data["entries"]],
    )


def _module(name, r, labels, e, f, k_exp, weights=None) -> BasedModule:
    """Assemble a module from sparse action data.

    ``e`` and ``f`` map a source label to a list of (target label, scalar);
    ``k_exp`` maps each label to the exponent of q in its K-eigenvalue.
    """
    idx = {lab: i for i, lab in enumerate(labels)}
    n = len(labels)

    def mat(action):
        entries = []
        for src, images in action.items():
            for tgt, c in images:
                entries.append((idx[tgt], idx[src], c))
        return CycMatrix.from_entries(r, n, n, entries)

    K = CycMatrix.from_entries(r, n, n, [(i, i, _q(r, k_exp[lab])) for i, lab in enumerate(labels)])
    w = tuple(k_exp[lab] % r for lab in labels)
    return BasedModule(name, r, tuple(labels), mat(e), mat(f), K, w)


@functools.cache
def simple_module(m: int, r: int) -> BasedModule:
    """X_m with basis a_0 .. a_m."""
    _check_level(r)
    if not 0 <= m <= r - 1:
        raise IndexOutOfRange(f"simple module index {m} outside [0, {r - 1}]")
    labels = [f"a{j}" for j in range(m + 1)]
    e, f = {}, {}
    for j in range(m + 1):
        if j > 0:
            e[f"a{j}"] = [(f"a{j - 1}", _qi(j, r) * _qi(m - j + 1, r))]
        if j < m:
            f[f"a{j}"] = [(f"a{j + 1}", 1)]
    return _module(f"X_{m}", r, labels, e, f, {f"a{j}": m - 2 * j for j in range(m + 1)})


def _projective_labels(m: int, r: int) -> list[str]:
    top = 2 * r - m - 2
    labels = [f"a{j}" for j in range(top + 1)] + [f"b{j}" for j in range(top + 1)]
    labels += [f"x{k}" for k in range(m - r + 1)] + [f"y{k}" for k in range(m - r + 1)]
    return labels


@functools.cache
def projective_module(m: int, r: int) -> BasedModule:
    """P_m, the projective cover of X_{2r-m-2}, with basis a, b, x, y."""
    _check_level(r)
    if not r <= m <= 2 * r - 2:
        raise IndexOutOfRange(f"projective module index {m} outside [{r}, {2 * r - 2}]")
    top, low = 2 * r - m - 2, m - r
    Q = lambda k: _qi(k, r)
    e, f, k_exp = {}, {}, {}
    for j in range(top + 1):
        k_exp[f"a{j}"] = k_exp[f"b{j}"] = -m - 2 * j - 2
        if j > 0:
            e[f"a{j}"] = [(f"a{j - 1}", -Q(j) * Q(m + j + 1))]
            e[f"b{j}"] = [(f"a{j - 1}", 1), (f"b{j - 1}", -Q(j) * Q(m + j + 1))]
        else:
            e["b0"] = [(f"x{low}", 1)]
        if j < top:
            f[f"a{j}"] = [(f"a{j + 1}", 1)]
            f[f"b{j}"] = [(f"b{j + 1}", 1)]
        else:
            f[f"b{j}"] = [("y0", 1)]
    for k in range(low + 1):
        k_exp[f"x{k}"] = k_exp[f"y{k}"] = m - 2 * k
        if k > 0:
            e[f"x{k}"] = [(f"x{k - 1}", Q(k) * Q(m - k + 1))]
            e[f"y{k}"] = [(f"y{k - 1}", Q(k) * Q(m - k + 1))]
        else:
            e["y0"] = [(f"a{top}", 1)]
        f[f"x{k}"] = [(f"x{k + 1}" if k < low else "a0", 1)]
        if k < low:
            f[f"y{k}"] = [(f"y{k + 1}", 1)]
    return _module(f"P_{m}", r, _projective_labels(m, r), e, f, k_exp)


def _word(index: int, m: int) -> str:
    return format(index, f"0{m}b") if m else ""


@functools.cache
def tensor_power(m: int, r: int) -> BasedModule:
    """X^{⊗m}; basis words with the last factor varying fastest."""
    _check_level(r)
    if m < 0:
        raise IndexOutOfRange(f"negative tensor power {m}")
    if m == 0:
        one = CycMatrix.identity(r, 1)
        zero = CycMatrix.zeros(r, 1, 1)
        return BasedModule("X^0", r, ("1",), zero, zero, one, (0,))
    X = simple_module(1, r)
    if m == 1:
        return BasedModule("X^1", r, ("0", "1"), X.E, X.F, X.K, X.weights)
    prev = tensor_power(m - 1, r)
    I1, In = CycMatrix.identity(r, 2), CycMatrix.identity(r, prev.dim)
    Kinv = CycMatrix.from_entries(
        r, prev.dim, prev.dim, [(i, i, _q(r, -w)) for i, w in enumerate(prev.weights)]
    )
    E = prev.E.kron(X.K) + In.kron(X.E)
    F = Kinv.kron(X.F) + prev.F.kron(I1)
    K = prev.K.kron(X.K)
    labels = tuple(_word(i, m) for i in range(2**m))
    weights = tuple((m - 2 * lab.count("1")) % r for lab in labels)
    return BasedModule(f"X^{m}", r, labels, E, F, K, weights)


def ones_count(index: int) -> int:
    return bin(index).count("1")


def weight_space(m: int, j: int) -> list[int]:
    """Indices of the basis words of X^{⊗m} with exactly j letters equal to 1."""
    return [i for i in range(2**m) if ones_count(i) == j]


# ---------------------------------------------------------------------------
# embedded bases


@dataclass(frozen=True, eq=False)
class EmbeddedBasis:
    """Coordinate vectors in X^{⊗m}, one column per abstract basis label."""

    kind: str
    m: int
    r: int
    labels: tuple[str, ...]
    vectors: CycMatrix

    def __getitem__(self, label: str) -> CycMatrix:
        return self.vectors.column(self.labels.index(label))

    def get(self, label: str, default=None):
        return self[label] if label in self.labels else default

    @property
    def ambient(self) -> BasedModule:
        return tensor_power(self.m, self.r)


def _apply_power(M: CycMatrix, v: CycMatrix, k: int) -> CycMatrix:
    for _ in range(k):
        v = M @ v
    return v


def _unit(m: int, r: int, word: str) -> CycMatrix:
    return CycMatrix.from_entries(r, 2**m, 1, [(int(word, 2) if word else 0, 0, 1)])


def _x(r: int, j: int) -> CycMatrix:
    return _unit(1, r, str(j))


def _chain(m, r, start, length) -> list[CycMatrix]:
    """start, F start, ..., F^(length-1) start inside X^{⊗m}."""
    F = tensor_power(m, r).F
    out = [start]
    for _ in range(length - 1):
        out.append(F @ out[-1])
    return out


def _basis(kind, m, r, families) -> EmbeddedBasis:
    labels, cols = [], []
    for prefix, vecs in families:
        for j, v in enumerate(vecs):
            labels.append(f"{prefix}{j}")
            cols.append(v)
    return EmbeddedBasis(kind, m, r, tuple(labels), CycMatrix.hstack(cols))


@functools.cache
def embed_simple(m: int, r: int) -> EmbeddedBasis:
    _check_level(r)
    if not 0 <= m <= r - 1:
        raise IndexOutOfRange(f"simple index {m} outside [0, {r - 1}]")
    if m == 0:
        return _basis("X", 0, r, [("a", [CycMatrix.identity(r, 1)])])
    start = embed_simple(m - 1, r)["a0"].kron(_x(r, 0))
    return _basis("X", m, r, [("a", _chain(m, r, start, m + 1))])


@functools.cache
def embed_projective(m: int, r: int) -> EmbeddedBasis:
    _check_level(r)
    if not r <= m <= 2 * r - 2:
        raise IndexOutOfRange(f"projective index {m} outside [{r}, {2 * r - 2}]")
    top, low = 2 * r - m - 2, m - r
    x0, x1 = _x(r, 0), _x(r, 1)
    q = _q(r)
    Q = lambda k: _qi(k, r)
    if m == r:
        S = embed_simple(r - 1, r)
        a_start = q * S["a0"].kron(x1) + S["a1"].kron(x0)
        x_start = S["a0"].kron(x0)
        b_start = S["a0"].kron(x1)
        y_start = S[f"a{r - 1}"].kron(x1)
    else:
        P = embed_projective(m - 1, r)
        a_start = (Q(m + 1) * q) * P["a0"].kron(x1) + P["a1"].kron(x0)
        x_start = P["x0"].kron(x0)
        b_start = (
            (_q(r, -m) / Q(m + 1)) * P["a0"].kron(x1)
            + (Q(m) * q) * P["b0"].kron(x1)
            + (Q(m) / Q(m + 1)) * P["b1"].kron(x0)
        )
        y_start = (_q(r, -m) / Q(m + 1)) * P[f"a{2 * r - m - 1}"].kron(x1) + (
            Q(m) / Q(m + 1)
        ) * P["y0"].kron(x0)
    return _basis(
        "P",
        m,
        r,
        [
            ("a", _chain(m, r, a_start, top + 1)),
            ("b", _chain(m, r, b_start, top + 1)),
            ("x", _chain(m, r, x_start, low + 1)),
            ("y", _chain(m, r, y_start, low + 1)),
        ],
    )


@functools.cache
def embed_top(r: int) -> EmbeddedBasis:
    """X^+_{r-1} ⊕ X^-_{r-1} inside X^{⊗2r-1}; labels p0.., n0.."""
    _check_level(r)
    P = embed_projective(2 * r - 2, r)
    m = 2 * r - 1
    plus = P["x0"].kron(_x(r, 0))
    minus = _q(r) * P["a0"].kron(_x(r, 1)) - P["y0"].kron(_x(r, 0))
    return _basis("X±", m, r, [("p", _chain(m, r, plus, r)), ("n", _chain(m, r, minus, r))])


@functools.cache
def embed_supplement(kind: str, m: int, r: int) -> EmbeddedBasis:
    """Supplements inside X_{m-1} ⊗ X, X_{r-1} ⊗ X ⊗ X or P_{m-1} ⊗ X.

    kind "X'" : copy of X_{m-2} in X^{⊗m}, 2 <= m <= r-1;
    kind "X'±": the two copies of X_{r-1} in X^{⊗r+1} (m is ignored);
    kind "P'" : copy of P_{m-2} in X^{⊗m}, r+2 <= m <= 2r-1.
    """
    _check_level(r)
    x0, x1 = _x(r, 0), _x(r, 1)
    q = _q(r)
    Q = lambda k: _qi(k, r)
    if kind == "X'":
        if not 2 <= m <= r - 1:
            raise IndexOutOfRange(f"supplement X' needs 2 <= m <= {r - 1}, got {m}")
        S = embed_simple(m - 1, r)
        start = (Q(m - 1) * q) * S["a0"].kron(x1) - S["a1"].kron(x0)
        return _basis("X'", m, r, [("a", _chain(m, r, start, m - 1))])
    if kind == "X'±":
        S = embed_simple(r - 1, r)
        m = r + 1
        plus = q * S["a0"].kron(x0).kron(x1) - S["a0"].kron(x1).kron(x0)
        minus = q * S["a0"].kron(x1).kron(x0) + S["a1"].kron(x0).kron(x0)
        return _basis("X'±", m, r, [("p", _chain(m, r, plus, r)), ("n", _chain(m, r, minus, r))])
    if kind == "P'":
        if not r + 2 <= m <= 2 * r - 1:
            raise IndexOutOfRange(f"supplement P' needs {r + 2} <= m <= {2 * r - 1}, got {m}")
        P = embed_projective(m - 1, r)
        top, low = 2 * r - m, m - 2 - r
        a = -P["a0"].kron(x0)
        x = (Q(m - 1) * q) * P["x0"].kron(x1) - P["x1"].kron(x0)
        b = (_q(r, m) / Q(m - 1)) * P[f"x{m - r - 1}"].kron(x1) - (Q(m) / Q(m - 1)) * P["b0"].kron(x0)
        y = (Q(m) * q) * P["y0"].kron(x1) - (Q(m) / Q(m - 1)) * P["y1"].kron(x0)
        return _basis(
            "P'",
            m,
            r,
            [
                ("a", _chain(m, r, a, top + 1)),
                ("b", _chain(m, r, b, top + 1)),
                ("x", _chain(m, r, x, low + 1)),
                ("y", _chain(m, r, y, low + 1)),
            ],
        )
    raise ValueError(f"unknown supplement kind {kind!r}")


def embed(kind: str, m: int, r: int) -> EmbeddedBasis:
    """Dispatch: kind in {"X", "P", "X±", "X'", "X'±", "P'"}."""
    if kind == "X":
        return embed_simple(m, r)
    if kind == "P":
        return embed_projective(m, r)
    if kind == "X±":
        if m != 2 * r - 1:
            raise IndexOutOfRange(f"X± lives in X^(2r-1), got m={m}")
        return embed_top(r)
    return embed_supplement(kind, m, r)


def coordinates(basis: CycMatrix, vectors: CycMatrix) -> CycMatrix:
    """Solve basis @ C = vectors exactly; raises SolverFailure if impossible."""
    n = basis.cols
    pivots = independent_rows(basis)
    if len(pivots) < n:
        raise SolverFailure("embedded vectors are linearly dependent")
    sub = basis.take(rows=pivots)
    C = sub.inverse() @ vectors.take(rows=pivots)
    if basis @ C != vectors:
        raise SolverFailure("vectors do not lie in the span of the basis")
    return C


def independent_rows(M: CycMatrix) -> list[int]:
    """Greedy choice of rank(M) rows that are linearly independent."""
    import numpy as np

    real = M.T.realify()  # columns of real correspond to (row, coefficient)
    R, _, rank = CycMatrix._fmpz(real).rref()
    R = np.array([int(x) for x in R.entries()], dtype=object).reshape(real.shape)
    d = M.d
    out = []
    for row in R[:rank]:
        p = int(np.nonzero(row)[0][0])
        if p % d == 0:
            out.append(p // d)
    return out


def restrict(ambient: BasedModule, basis: EmbeddedBasis, name: str | None = None) -> BasedModule:
    """The submodule spanned by an embedded basis, with induced action matrices."""
    V = basis.vectors
    acts = [coordinates(V, ambient.act(g) @ V) for g in "EFK"]
    K = acts[2]
    weights = []
    for i in range(K.rows):
        diag = K.entry(i, i)
        w = next((k for k in range(ambient.r) if diag == _q(ambient.r, k)), None)
        weights.append(w)
    w = tuple(weights) if None not in weights else None
    return BasedModule(name or basis.kind, ambient.r, basis.labels, acts[0], acts[1], K, w)


@functools.cache
def top_module(r: int) -> BasedModule:
    """X_{2r-1} = X^+_{r-1} ⊕ X^-_{r-1}, realized by its embedded copy."""
    return restrict(tensor_power(2 * r - 1, r), embed_top(r), "X_{2r-1}")


# ---------------------------------------------------------------------------
# named morphisms


def named_morphism(name: str, m: int, r: int, sign: str | None = None) -> ModuleMap:
    """eps, pi, iota, gamma (sign +/-) at index m; pi2r-1, iota2r-1 with sign."""
    _check_level(r)

    def build(src, tgt, pairs):
        entries = [(tgt.index(t), src.index(s), 1) for s, t in pairs]
        return ModuleMap(src, tgt, CycMatrix.from_entries(r, tgt.dim, src.dim, entries))

    if name in ("pi2r-1", "iota2r-1"):
        if sign not in ("+", "-"):
            raise ValueError("sign must be '+' or '-'")
        X, top = simple_module(r - 1, r), top_module(r)
        pre = "p" if sign == "+" else "n"
        pairs = [(f"{pre}{j}", f"a{j}") for j in range(r)]
        if name == "pi2r-1":
            return build(top, X, pairs)
        return build(X, top, [(t, s) for s, t in pairs])
    if not r <= m <= 2 * r - 2:
        raise IndexOutOfRange(f"index {m} outside [{r}, {2 * r - 2}]")
    top, low = 2 * r - m - 2, m - r
    P = projective_module(m, r)
    if name == "eps":
        return build(P, P, [(f"b{j}", f"a{j}") for j in range(top + 1)])
    if name == "pi":
        return build(P, simple_module(top, r), [(f"b{j}", f"a{j}") for j in range(top + 1)])
    if name == "iota":
        return build(simple_module(top, r), P, [(f"a{j}", f"a{j}") for j in range(top + 1)])
    if name == "gamma":
        target = projective_module(3 * r - m - 2, r)
        if sign == "+":
            pairs = [(f"y{k}", f"a{k}") for k in range(low + 1)]
            pairs += [(f"b{j}", f"x{j}") for j in range(top + 1)]
        elif sign == "-":
            pairs = [(f"x{k}", f"a{k}") for k in range(low + 1)]
            pairs += [(f"b{j}", f"y{j}") for j in range(top + 1)]
        else:
            raise ValueError("gamma needs sign '+' or '-'")
        return build(P, target, pairs)
    raise ValueError(f"unknown morphism {name!r}")


# ---------------------------------------------------------------------------
# commutant solver


def intertwiner_system(M: BasedModule, N: BasedModule):
    """(system, unknowns): T in Hom(M, N) restricted to weight-compatible cells."""
    import numpy as np

    r = M.r
    if M.weights is not None and N.weights is not None:
        cells = [(i, j) for i in range(N.dim) for j in range(M.dim) if N.weights[i] == M.weights[j]]
        gens = "EF"
    else:
        cells = [(i, j) for i in range(N.dim) for j in range(M.dim)]
        gens = "EFK"
    col = {c: n for n, c in enumerate(cells)}
    d = M.E.d
    den = 1
    import math

    for g in gens:
        for X in (M.act(g), N.act(g)):
            den = den * X.den // math.gcd(den, X.den)
    rows: dict = {}

    def add(row_key, unknown, coeff_vec):
        rows.setdefault(row_key, {})
        acc = rows[row_key].get(unknown)
        rows[row_key][unknown] = coeff_vec if acc is None else acc + coeff_vec

    for g in gens:
        XM, XN = M.act(g), N.act(g)
        fM, fN = den // XM.den, den // XN.den
        nzM = {}
        for a, b in XM.nonzero():
            nzM.setdefault(a, []).append(b)
        nzN = {}
        for a, b in XN.nonzero():
            nzN.setdefault(b, []).append(a)
        # (T XM - XN T)[i, b] = sum_a T[i, a] XM[a, b] - sum_c XN[i, c] T[c, b]
        for (i, a), u in col.items():
            for b in nzM.get(a, ()):
                add((g, i, b), u, XM.num[:, a, b].astype(object) * fM)
            for c in nzN.get(i, ()):
                add((g, c, a), u, -XN.num[:, c, i].astype(object) * fN)
    keys = [k for k, v in rows.items() if any(any(x != 0 for x in vec) for vec in v.values())]
    num = np.zeros((d, len(keys), len(cells)), dtype=object)
    for n, k in enumerate(keys):
        for u, vec in rows[k].items():
            num[:, n, u] = vec
    return CycMatrix(r, num, 1), cells


def hom_space(M: BasedModule, N: BasedModule) -> list[CycMatrix]:
    """A basis over Q(q) of Hom(M, N), as N.dim x M.dim matrices."""
    system, cells = intertwiner_system(M, N)
    if not cells:
        return []
    kernel = system.nullspace() if system.rows else CycMatrix.identity(M.r, len(cells))
    out = []
    for k in range(kernel.cols):
        entries = [
            (i, j, kernel.entry(u, k)) for u, (i, j) in enumerate(cells) if not kernel.entry(u, k).is_zero()
        ]
        out.append(CycMatrix.from_entries(M.r, N.dim, M.dim, entries))
    return out


def hom_dimension(M: BasedModule, N: BasedModule) -> int:
    system, cells = intertwiner_system(M, N)
    if not cells:
        return 0
    return len(cells) - (system.rank() if system.rows else 0)


def dimension_table(r: int) -> list[tuple[str, int, int]]:
    """(description, computed dimension, expected dimension) for every table row."""
    _check_level(r)
    rows = []
    for m in range(r):
        X = simple_module(m, r)
        rows.append((f"End(X_{m})", hom_dimension(X, X), 1))
    top = top_module(r)
    for m in range(r, 2 * r - 1):
        P = projective_module(m, r)
        S = simple_module(2 * r - m - 2, r)
        rows.append((f"End(P_{m})", hom_dimension(P, P), 2))
        rows.append((f"Hom(P_{m}, X_{2 * r - m - 2})", hom_dimension(P, S), 1))
        rows.append((f"Hom(X_{2 * r - m - 2}, P_{m})", hom_dimension(S, P), 1))
        Pp = projective_module(3 * r - m - 2, r)
        rows.append((f"Hom(P_{m}, P_{3 * r - m - 2})", hom_dimension(P, Pp), 2))
    X = simple_module(r - 1, r)
    rows.append(("End(X_{2r-1})", hom_dimension(top, top), 4))
    rows.append(("Hom(X_{r-1}, X_{2r-1})", hom_dimension(X, top), 2))
    rows.append(("Hom(X_{2r-1}, X_{r-1})", hom_dimension(top, X), 2))
    return rows


def appendix_oracles(r: int):
    from .appendix import appendix_oracles as run

    return run(r)
