"""Closed-form identities for embedded bases, checked against the module actions.

The projectors onto X_m (m <= r-1) and onto X^±_{r-1} inside X^{⊗2r-1} are
computed here from weight-space kernels of powers of E and F, without any
reference to Temperley-Lieb diagrams, so they can serve as an independent
oracle for the functor.
"""

from __future__ import annotations

import functools

from .cycmat import CycMatrix
from .report import Report, timed
from .scalars import CyclotomicScalar, RingTag, quantum_factorial, quantum_int
from .uq import (
    embed_projective,
    embed_simple,
    embed_top,
    ones_count,
    tensor_power,
)

__all__ = ["appendix_oracles", "projector_simple", "projector_top"]


class _Family:
    """Accumulates the cases of one identity into a single report line."""

    def __init__(self, report: Report, name: str):
        self.report, self.name = report, name
        self.count, self.failed = 0, None

    def check(self, ok: bool, case: str):
        self.count += 1
        if not ok and self.failed is None:
            self.failed = case

    def close(self):
        detail = f"{self.count} cases" + (f", first failure at {self.failed}" if self.failed else "")
        self.report.add(self.name, self.failed is None and self.count > 0, detail)


def _ops(r):
    R = RingTag.root(r)
    return (lambda k: quantum_int(k, R)), (lambda k: quantum_factorial(k, R)), (
        lambda k: CyclotomicScalar.q(r, k)
    )


def _pow_apply(M, v, k):
    for _ in range(k):
        v = M @ v
    return v


def _unit(m, r, index):
    return CycMatrix.from_entries(r, 2**m, 1, [(index, 0, 1)])


def _row_functional(M: CycMatrix, index: int, k: int) -> CycMatrix:
    """Row ``index`` of M^k, as a 1 x n matrix."""
    n = M.rows
    row = CycMatrix.from_entries(M.r, 1, n, [(0, index, 1)])
    for _ in range(k):
        row = row @ M
    return row


def _mask(row: CycMatrix, m: int, j: int) -> CycMatrix:
    keep = [i for i in range(2**m) if ones_count(i) == j]
    out = CycMatrix.zeros(row.r, 1, row.cols)
    if keep:
        out.num[:, :, keep] = row.num[:, :, keep]
        out = CycMatrix(row.r, out.num, row.den)
    return out


def _rank_one_projector(vectors, functionals) -> CycMatrix:
    total = None
    for v, lam in zip(vectors, functionals):
        c = (lam @ v).entry(0, 0)
        term = (v @ lam).scale(1 / c)
        total = term if total is None else total + term
    return total


@functools.cache
def projector_simple(m: int, r: int, via: str = "E") -> CycMatrix:
    """Idempotent onto X_m in X^{⊗m} whose kernel meets V_j in ker E^j (or V_{m-j} in ker F^j)."""
    T = tensor_power(m, r)
    S = embed_simple(m, r)
    vecs = [S[f"a{j}"] for j in range(m + 1)]
    if via == "E":
        lams = [_mask(_row_functional(T.E, 0, j), m, j) for j in range(m + 1)]
    else:
        last = 2**m - 1
        lams = [_mask(_row_functional(T.F, last, m - j), m, j) for j in range(m + 1)]
    return _rank_one_projector(vecs, lams)


@functools.cache
def projector_top(r: int, sign: str) -> CycMatrix:
    """Idempotent onto X^±_{r-1} inside X^{⊗2r-1}, from the kernel characterization."""
    m = 2 * r - 1
    T = tensor_power(m, r)
    B = embed_top(r)
    if sign == "+":
        vecs = [B[f"p{j}"] for j in range(r)]
        lams = [_mask(_row_functional(T.E, 0, j), m, j) for j in range(r)]
    else:
        vecs = [B[f"n{j}"] for j in range(r)]
        last = 2**m - 1
        lams = [_mask(_row_functional(T.F, last, r - 1 - j), m, r + j) for j in range(r)]
    return _rank_one_projector(vecs, lams)


# ---------------------------------------------------------------------------


def appendix_oracles(r: int) -> Report:
    rep = Report(f"appendix r={r}")
    Q, fact, q = _ops(r)
    with timed(rep):
        _reversal(rep, r, fact)
        _coproduct(rep, r, fact, q)
        _extremes(rep, r, Q, fact, q)
        _projectors(rep, r)
        _projector_values(rep, r, Q, fact, q)
        _descent(rep, r, Q, fact)
        _splittings(rep, r, Q, fact, q)
    return rep


def _reversal(rep, r, fact):
    fam = _Family(rep, "reversal of quantum factorials")
    for j in range(r):
        sign = -1 if j % 2 else 1
        fam.check(fact(r - j - 1) == sign * fact(r - 1) / fact(j), f"j={j}")
    fam.close()


def _coproduct(rep, r, fact, q):
    famE = _Family(rep, "coproduct of E^j")
    famF = _Family(rep, "coproduct of F^j")
    top = 4 if r <= 5 else 3
    for a in range(1, top):
        for b in range(1, top + 1 - a):
            A, B, AB = tensor_power(a, r), tensor_power(b, r), tensor_power(a + b, r)
            KAinv, KB = A.K.inverse(), B.K
            Epow, Fpow = CycMatrix.identity(r, AB.dim), CycMatrix.identity(r, AB.dim)
            for j in range(r):
                if j:
                    Epow, Fpow = AB.E @ Epow, AB.F @ Fpow
                sumE = CycMatrix.zeros(r, AB.dim, AB.dim)
                sumF = CycMatrix.zeros(r, AB.dim, AB.dim)
                for k in range(j + 1):
                    c = fact(j) / (fact(k) * fact(j - k)) * q(k * (j - k))
                    left = _mpow(A.E, j - k)
                    right = _mpow(B.E, k) @ _mpow(KB, j - k)
                    sumE = sumE + left.kron(right).scale(c)
                    left = _mpow(A.F, k) @ _mpow(KAinv, j - k)
                    right = _mpow(B.F, j - k)
                    sumF = sumF + left.kron(right).scale(c)
                famE.check(sumE == Epow, f"{a}+{b}, j={j}")
                famF.check(sumF == Fpow, f"{a}+{b}, j={j}")
    famE.close()
    famF.close()


def _mpow(M, k):
    out = CycMatrix.identity(M.r, M.rows)
    for _ in range(k):
        out = M @ out
    return out


def _extremes(rep, r, Q, fact, q):
    fam = _Family(rep, "extreme vectors as pure tensors")
    for m in range(r):
        S = embed_simple(m, r)
        fam.check(S["a0"] == _unit(m, r, 0), f"a_0^{m}")
        fam.check(S[f"a{m}"] == _unit(m, r, 2**m - 1).scale(fact(m)), f"a_{m}^{m}")
    for m in range(r, 2 * r - 1):
        P = embed_projective(m, r)
        fam.check(P["x0"] == _unit(m, r, 0), f"x_0^{m}")
        want = _unit(m, r, 2**m - 1).scale(fact(m - r) * fact(r - 1) / Q(m + 1))
        fam.check(P[f"y{m - r}"] == want, f"y_(m-r)^{m}")
    m = 2 * r - 1
    B = embed_top(r)
    fam.check(B["p0"] == _unit(m, r, 0), "a_0^(r-1,+)")
    fam.check(B[f"n{r - 1}"] == _unit(m, r, 2**m - 1).scale(fact(r - 1) ** 2), "a_(r-1)^(r-1,-)")
    fam.close()

    hs = _Family(rep, "raising and lowering to extreme vectors (simple)")
    for m in range(r):
        T, S = tensor_power(m, r), embed_simple(m, r)
        for j in range(m + 1):
            v = S[f"a{j}"]
            hs.check(
                _pow_apply(T.E, v, j) == S["a0"].scale(fact(m) * fact(j) / fact(m - j)), f"E m={m} j={j}"
            )
            hs.check(_pow_apply(T.F, v, m - j) == S[f"a{m}"], f"F m={m} j={j}")
    hs.close()

    hp = _Family(rep, "raising and lowering to extreme vectors (projective)")
    for m in range(r, 2 * r - 1):
        T, P = tensor_power(m, r), embed_projective(m, r)
        for k in range(m - r + 1):
            want = P["x0"].scale(fact(m - r) * fact(k) / fact(m - k - r))
            hp.check(_pow_apply(T.E, P[f"x{k}"], k) == want, f"E x m={m} k={k}")
            hp.check(_pow_apply(T.F, P[f"y{k}"], m - k - r) == P[f"y{m - r}"], f"F y m={m} k={k}")
        for l in range(2 * r - m - 1):
            sign = -1 if l % 2 else 1
            c = sign * fact(m - r) * fact(m + l - r + 1) * fact(l) / Q(m + 1)
            hp.check(_pow_apply(T.E, P[f"b{l}"], m + l - r + 1) == P["x0"].scale(c), f"E b m={m} l={l}")
            hp.check(_pow_apply(T.F, P[f"b{l}"], r - l - 1) == P[f"y{m - r}"], f"F b m={m} l={l}")
    hp.close()

    ht = _Family(rep, "raising and lowering to extreme vectors (X^±)")
    m = 2 * r - 1
    T = tensor_power(m, r)
    for j in range(r):
        sign = -1 if j % 2 else 1
        ht.check(_pow_apply(T.E, B[f"p{j}"], j) == B["p0"].scale(sign * fact(j) ** 2), f"E j={j}")
        ht.check(_pow_apply(T.F, B[f"n{j}"], r - j - 1) == B[f"n{r - 1}"], f"F j={j}")
    ht.close()


def _projectors(rep, r):
    fam = _Family(rep, "kernel-characterized projectors are idempotent intertwiners")
    agree = _Family(rep, "E-kernel and F-kernel characterizations agree")
    for m in range(r):
        T = tensor_power(m, r)
        phi = projector_simple(m, r)
        ok = phi @ phi == phi and all(phi @ T.act(g) == T.act(g) @ phi for g in "EFK")
        fam.check(ok and phi.rank() == m + 1, f"m={m}")
        agree.check(phi == projector_simple(m, r, via="F"), f"m={m}")
    T = tensor_power(2 * r - 1, r)
    pp, pm = projector_top(r, "+"), projector_top(r, "-")
    for name, phi in (("+", pp), ("-", pm)):
        ok = phi @ phi == phi and all(phi @ T.act(g) == T.act(g) @ phi for g in "EFK")
        fam.check(ok and phi.rank() == r, f"2r-1 {name}")
    fam.check((pp @ pm).is_zero() and (pm @ pp).is_zero(), "2r-1 orthogonal")
    fam.close()
    agree.close()


def _projector_values(rep, r, Q, fact, q):
    phi = projector_simple(r - 1, r)
    fam = _Family(rep, "projector onto X_(r-1) on split tensors")
    for m in range(r):
        S, S2 = embed_simple(m, r), embed_simple(r - m - 1, r)
        R = embed_simple(r - 1, r)
        for j in range(m + 1):
            for k in range(r - m):
                sign = -1 if j % 2 else 1
                c = sign * fact(m + k) / (fact(m - j) * fact(j + k))
                want = R[f"a{j + k}"]
                fam.check(
                    phi @ S[f"a{j}"].kron(S2[f"a{k}"]) == want.scale(c * q(-j * (m + k + 1))),
                    f"left m={m} j={j} k={k}",
                )
                fam.check(
                    phi @ S2[f"a{k}"].kron(S[f"a{j}"]) == want.scale(c * q((m - j) * k)),
                    f"right m={m} j={j} k={k}",
                )
    fam.close()

    pp, pm = projector_top(r, "+"), projector_top(r, "-")
    B = embed_top(r)
    fp = _Family(rep, "projector onto X^+_(r-1) on split tensors")
    fm = _Family(rep, "projector onto X^-_(r-1) on split tensors")
    for m in range(1, r):
        S, P = embed_simple(m, r), embed_projective(2 * r - m - 1, r)
        zero = CycMatrix.zeros(r, 2 ** (2 * r - 1), 1)
        for j in range(m + 1):
            a = S[f"a{j}"]
            sj = -1 if j % 2 else 1
            for k in range(r - m):
                c = sj * fact(m + k) / (fact(m - j) * fact(j + k))
                case = f"m={m} j={j} k={k}"
                fp.check(pp @ a.kron(P[f"x{k}"]) == B[f"p{j + k}"].scale(c * q(-j * (m + k + 1))), "ax " + case)
                fp.check(pp @ P[f"x{k}"].kron(a) == B[f"p{j + k}"].scale(c * q((m - j) * k)), "xa " + case)
                fp.check(pp @ a.kron(P[f"y{k}"]) == zero, "ay " + case)
                fp.check(pp @ P[f"y{k}"].kron(a) == zero, "ya " + case)
                fm.check(pm @ a.kron(P[f"x{k}"]) == zero, "ax " + case)
                fm.check(pm @ P[f"x{k}"].kron(a) == zero, "xa " + case)
                cm = -c / Q(m)
                fm.check(pm @ a.kron(P[f"y{k}"]) == B[f"n{j + k}"].scale(cm * q(-j * (m + k + 1))), "ay " + case)
                fm.check(pm @ P[f"y{k}"].kron(a) == B[f"n{j + k}"].scale(cm * q((m - j) * k)), "ya " + case)
            for l in range(m - j):
                case = f"m={m} j={j} l={l}"
                s = -1 if (m + l + 1) % 2 else 1
                c = s * fact(m - j - l - 1) * fact(l) / (fact(m - j) * Q(m))
                want = B[f"p{j + l - m + r}"]
                fp.check(pp @ a.kron(P[f"a{l}"]) == zero, "aa " + case)
                fp.check(pp @ P[f"a{l}"].kron(a) == zero, "aa' " + case)
                fp.check(pp @ a.kron(P[f"b{l}"]) == want.scale(c * q(-j * (l + 1))), "ab " + case)
                fp.check(pp @ P[f"b{l}"].kron(a) == want.scale(c * q(-(m - j) * (m - l))), "ba " + case)
            for l in range(m - j, m):
                case = f"m={m} j={j} l={l}"
                c = -sj * fact(l) / (fact(m - j) * fact(j + l - m) * Q(m))
                want = B[f"n{j + l - m}"]
                fm.check(pm @ a.kron(P[f"a{l}"]) == zero, "aa " + case)
                fm.check(pm @ P[f"a{l}"].kron(a) == zero, "aa' " + case)
                fm.check(pm @ a.kron(P[f"b{l}"]) == want.scale(c * q(-j * (l + 1))), "ab " + case)
                fm.check(pm @ P[f"b{l}"].kron(a) == want.scale(c * q(-(m - j) * (m - l))), "ba " + case)
    fp.close()
    fm.close()


def _descent(rep, r, Q, fact):
    fs = _Family(rep, "basis vectors from extreme vectors (simple)")
    for m in range(r):
        T, S = tensor_power(m, r), embed_simple(m, r)
        for j in range(m + 1):
            fs.check(_pow_apply(T.F, S["a0"], j) == S[f"a{j}"], f"F m={m} j={j}")
            want = S[f"a{j}"].scale(fact(m) * fact(m - j) / fact(j))
            fs.check(_pow_apply(T.E, S[f"a{m}"], m - j) == want, f"E m={m} j={j}")
    fs.close()

    fp = _Family(rep, "basis vectors from extreme vectors (projective)")
    for m in range(r, 2 * r - 1):
        T, P = tensor_power(m, r), embed_projective(m, r)
        y = P[f"y{m - r}"]
        for k in range(m - r + 1):
            fp.check(_pow_apply(T.F, P["x0"], k) == P[f"x{k}"], f"F x m={m} k={k}")
            want = P[f"y{k}"].scale(fact(m - r) * fact(m - k - r) / fact(k))
            fp.check(_pow_apply(T.E, y, m - k - r) == want, f"E y m={m} k={k}")
        for l in range(2 * r - m - 1):
            fp.check(_pow_apply(T.F, P["x0"], m + l - r + 1) == P[f"a{l}"], f"F a m={m} l={l}")
            sign = -1 if l % 2 else 1
            c = sign * fact(m - r) * fact(r - 1) ** 2 / (fact(m + l - r + 1) * fact(l) * Q(m + 1))
            fp.check(_pow_apply(T.E, y, r - l - 1) == P[f"a{l}"].scale(c), f"E a m={m} l={l}")
    fp.close()

    ft = _Family(rep, "basis vectors from extreme vectors (X^±)")
    T, B = tensor_power(2 * r - 1, r), embed_top(r)
    for j in range(r):
        ft.check(_pow_apply(T.F, B["p0"], j) == B[f"p{j}"], f"F j={j}")
        sign = -1 if j % 2 else 1
        want = B[f"n{j}"].scale(sign * fact(r - 1) ** 2 / fact(j) ** 2)
        ft.check(_pow_apply(T.E, B[f"n{r - 1}"], r - j - 1) == want, f"E j={j}")
    ft.close()


def _splittings(rep, r, Q, fact, q):
    fs = _Family(rep, "splitting a_j^(r-1) across X^m and X^(r-m-1)")
    ft = _Family(rep, "splitting a_j^(r-1,±) across X^m and X^(2r-m-1)")
    R = embed_simple(r - 1, r)
    B = embed_top(r)
    for m in range(r):
        S, S2 = embed_simple(m, r), embed_simple(r - m - 1, r)
        P = embed_projective(2 * r - m - 1, r) if m >= 1 else None
        for j in range(r):
            binom = lambda k: fact(j) / (fact(k) * fact(j - k))
            left = right = CycMatrix.zeros(r, 2 ** (r - 1), 1)
            for k in range(max(m + j - r + 1, 0), min(m, j) + 1):
                left = left + S[f"a{k}"].kron(S2[f"a{j - k}"]).scale(binom(k) * q(-(m - k) * (j - k)))
                right = right + S2[f"a{j - k}"].kron(S[f"a{k}"]).scale(binom(k) * q((m + j - k + 1) * k))
            fs.check(left == R[f"a{j}"], f"left m={m} j={j}")
            fs.check(right == R[f"a{j}"], f"right m={m} j={j}")
            if P is None:
                continue
            zero = CycMatrix.zeros(r, 2 ** (2 * r - 1), 1)
            pl = pr = nl = nr = zero
            for k in range(m + j - r + 1):
                pl = pl + S[f"a{k}"].kron(P[f"a{j - k + m - r}"]).scale(binom(k) * q(-(m - k) * (j - k)))
                pr = pr + P[f"a{j - k + m - r}"].kron(S[f"a{k}"]).scale(binom(k) * q((m + j - k + 1) * k))
            for k in range(max(m + j - r + 1, 0), min(m, j) + 1):
                pl = pl + S[f"a{k}"].kron(P[f"x{j - k}"]).scale(binom(k) * q(-(m - k) * (j - k)))
                pr = pr + P[f"x{j - k}"].kron(S[f"a{k}"]).scale(binom(k) * q((m + j - k + 1) * k))
                c = -binom(k) * Q(m)
                nl = nl + S[f"a{k}"].kron(P[f"y{j - k}"]).scale(c * q(-(m - k) * (j - k)))
                nr = nr + P[f"y{j - k}"].kron(S[f"a{k}"]).scale(c * q((m + j - k + 1) * k))
            for k in range(min(m + 1, j + 1), m + 1):
                c = fact(j) * fact(r - 1) / (fact(k) * fact(j - k + r))
                nl = nl + S[f"a{k}"].kron(P[f"a{j - k + m}"]).scale(c * q(-(m - k) * (j - k)))
                nr = nr + P[f"a{j - k + m}"].kron(S[f"a{k}"]).scale(c * q((m + j - k + 1) * k))
            ft.check(pl == B[f"p{j}"], f"+ left m={m} j={j}")
            ft.check(pr == B[f"p{j}"], f"+ right m={m} j={j}")
            ft.check(nl == B[f"n{j}"], f"- left m={m} j={j}")
            ft.check(nr == B[f"n{j}"], f"- right m={m} j={j}")
    fs.close()
    ft.close()
