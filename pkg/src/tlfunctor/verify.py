"""Verification suites.  Each suite returns a Report of exact checks."""

from __future__ import annotations

from . import jw
from .errors import PoleAtRootOfUnity
from .report import Report, timed
from .scalars import (
    CyclotomicScalar,
    GenericScalar,
    RingTag,
    quantum_brace_prime,
    quantum_int,
    scalar_from_json,
    specialize,
)
from .tangles import (
    Tangle,
    TLMorphism,
    catalan,
    compose,
    enumerate_tangles,
    partial_trace_right,
    rotate_pi,
    tensor,
)


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def _idn(m, ring):
    return TLMorphism.identity(m, ring)


def _caps_and_cups(report, name, x, m, ring, skip=()):
    ok = True
    for j in range(1, m):
        if j in skip:
            continue
        cap = TLMorphism.from_tangle(Tangle.cap_at(m, j), ring)
        cup = TLMorphism.from_tangle(Tangle.cup_at(m - 2, j), ring)
        ok &= compose(cap, x).is_zero() and compose(x, cup).is_zero()
    report.add(f"{name}: caps and cups annihilate", ok)


def _absorbs(report, name, big, small, m, n, want):
    ring = big.ring
    lifted = tensor(small, _idn(m - n, ring))
    report.add(f"{name} m={m} n={n}", compose(big, lifted) == want and compose(lifted, big) == want)


# ---------------------------------------------------------------------------


def suite_scalars(r: int) -> Report:
    rep = Report("scalars")
    with timed(rep):
        G, R = RingTag.generic(), RingTag.root(r)
        a2 = GenericScalar.A(2) + GenericScalar.A(-2)
        rep.add("[2] generic is A^2 + A^-2", quantum_int(2, G) == a2)
        rep.add("[r] vanishes at the root", quantum_int(r, R).is_zero())
        ok = all(specialize(quantum_int(k, G), r) == quantum_int(k, R) for k in range(3 * r))
        rep.add("specialization of [k] agrees with the root values", ok)
        ok = all(
            quantum_int(r - k, R) == -quantum_int(k, R) for k in range(r)
        )
        rep.add("[r-k] = -[k] at the root", ok)
        ok = True
        for k in range(1, 2 * r):
            for m in range(k, 2 * r):
                lhs = quantum_int(k, G) * quantum_int(m, G)
                rhs = sum(
                    (quantum_int(m - k + 1 + 2 * i, G) for i in range(k)), GenericScalar(0)
                )
                ok &= lhs == rhs
        rep.add("Clebsch-Gordan product rule for quantum integers", ok)
        try:
            specialize(1 / quantum_int(r, G), r)
            rep.add("1/[r] has a pole at the root", False)
        except PoleAtRootOfUnity:
            rep.add("1/[r] has a pole at the root", True)
        xs = [quantum_int(5, G) / quantum_int(3, G), quantum_brace_prime(r, R), CyclotomicScalar.q(r, 2)]
        ok = all(scalar_from_json(x.to_json()) == x for x in xs)
        rep.add("scalar JSON round trip", ok)
    return rep


def suite_tangles(r: int) -> Report:
    rep = Report("tangles")
    with timed(rep):
        ok = all(
            len(enumerate_tangles(m, n)) == catalan((m + n) // 2)
            for n in range(11)
            for m in range(11)
            if (m + n) % 2 == 0 and m + n <= 10
        )
        rep.add("Catalan counts up to 10 boundary points", ok)
        for ring in (RingTag.generic(), RingTag.root(r)):
            cup, cap, one = TLMorphism.cup(ring), TLMorphism.cap(ring), _idn(1, ring)
            delta = -quantum_int(2, ring)
            rep.add(f"loop value [{ring}]", compose(cap, cup) == delta * _idn(0, ring))
            snake = compose(tensor(one, cap), tensor(cup, one))
            rep.add(f"snake identity [{ring}]", snake == one)
            f4 = jw.build_f(min(4, r - 1), ring)
            rep.add(f"JSON round trip [{ring}]", TLMorphism.from_json(f4.to_json()) == f4)
        t = Tangle.from_text("3->1:[(0,3),(1,2)]")
        rep.add("text round trip", Tangle.from_text(t.to_text()) == t)
    return rep


def suite_jw_generic(r: int) -> Report:
    """Identities of simple and non-semisimple idempotents over the generic ring."""
    rep = Report(f"jw-generic r={r}")
    G = RingTag.generic()
    Q = lambda k: quantum_int(k, G)
    f = lambda m: jw.build_f(m, G)
    g = lambda m: jw.build_g(m, G, r)
    h = lambda m: jw.build_h(m, G, r)
    with timed(rep):
        top = 2 * r - 2
        for m in range(top + 1):
            _caps_and_cups(rep, f"f_{m}", f(m), m, G)
            ok = all(
                compose(f(m), tensor(f(n), _idn(m - n, G))) == f(m)
                and compose(tensor(f(n), _idn(m - n, G)), f(m)) == f(m)
                for n in range(m + 1)
            )
            rep.add(f"f_{m} absorbs f_n", ok)
            ok = all(
                partial_trace_right(f(m), k)
                == (_sign(k) * Q(m + 1) / Q(m - k + 1)) * f(m - k)
                for k in range(m + 1)
            )
            rep.add(f"f_{m} partial traces", ok)
            rep.add(f"f_{m} rotation invariant", rotate_pi(f(m)) == f(m))
        for m in range(r, top + 1):
            _caps_and_cups(rep, f"g_{m}", g(m), m, G, skip={r - 1})
            _caps_and_cups(rep, f"h_{m}", h(m), m, G, skip={r - 1})
            for n in range(r, m + 1):
                _absorbs(rep, "f absorbs g", f(m), g(n), m, n, f(m))
                _absorbs(rep, "f kills h", f(m), h(n), m, n, TLMorphism.zero(m, m, G))
                _absorbs(rep, "g absorbs g", g(m), g(n), m, n, g(m))
                _absorbs(rep, "g absorbs h", g(m), h(n), m, n, h(m))
                _absorbs(rep, "h on h scales by [r]", h(m), h(n), m, n, Q(r) * h(m))
            rep.add(f"g_{m} idempotent", compose(g(m), g(m)) == g(m))
            for k in range(m + 1):
                pg = partial_trace_right(g(m), k)
                ph = partial_trace_right(h(m), k)
                if k <= m - r:
                    want_g = (_sign(k) * Q(m + 1) / Q(m - k + 1)) * g(m - k) - (
                        _sign(k)
                        * quantum_brace_prime(r, G)
                        * Q(k)
                        / (Q(2 * r - m + k - 1) * Q(m - k + 1))
                    ) * h(m - k)
                    want_h = (_sign(k) * Q(2 * r - m - 1) / Q(2 * r - m + k - 1)) * h(m - k)
                else:
                    want_g = (
                        _sign(k) * Q(r) * quantum_brace_prime(m - r + 1, G) / Q(m - k + 1)
                    ) * f(m - k)
                    want_h = (_sign(k) * Q(r) * Q(2 * r - m - 1) / Q(m - k + 1)) * f(m - k)
                rep.add(f"g_{m} partial trace k={k}", pg == want_g)
                rep.add(f"h_{m} partial trace k={k}", ph == want_h)
        rep.add(f"g_{top} rotation invariant", rotate_pi(g(top)) == g(top))
        rep.add(f"h_{top} rotation invariant", rotate_pi(h(top)) == h(top))
    return rep


def suite_jw_recursions(r: int) -> Report:
    """The root-friendly recursions agree with the definitions over the generic ring."""
    rep = Report(f"jw-recursions r={r}")
    G, R = RingTag.generic(), RingTag.root(r)
    with timed(rep):
        for m in range(r, 2 * r - 1):
            rep.add(f"g_{m} recursion (generic)", jw.g_recursion(m, G, r) == jw.build_g(m, G, r))
        rep.add(
            f"f_{2 * r - 1} recursion (generic)",
            jw.f_top_recursion(G, r) == jw.build_f(2 * r - 1, G),
        )
        for m in range(r, 2 * r - 1):
            rep.add(
                f"g_{m} generic specializes to the root build",
                jw.build_g(m, G, r).specialize(r) == jw.build_g(m, R),
            )
        rep.add(
            f"f_{2 * r - 1} generic specializes to the root build",
            jw.build_f(2 * r - 1, G).specialize(r) == jw.build_f(2 * r - 1, R),
        )
    return rep


def suite_jw_root(r: int) -> Report:
    rep = Report(f"jw-root r={r}")
    R = RingTag.root(r)
    with timed(rep):
        ok = True
        for m in range(2 * r + 2):
            try:
                jw.build_f(m, R)
                built = True
            except PoleAtRootOfUnity:
                built = False
            ok &= built == (m <= r - 1 or m == 2 * r - 1)
        rep.add("f_m specializes exactly for m <= r-1 and m = 2r-1", ok)
        for m in list(range(r)) + [2 * r - 1]:
            f = jw.build_f(m, R)
            rep.add(f"f_{m} idempotent", compose(f, f) == f)
            _caps_and_cups(rep, f"f_{m}", f, m, R)
        for m in range(r, 2 * r - 1):
            g, h = jw.build_g(m, R), jw.build_h(m, R)
            p, i = jw.build_p(m, R), jw.build_i(m, R)
            rep.add(f"g_{m} idempotent", compose(g, g) == g)
            _caps_and_cups(rep, f"g_{m}", g, m, R, skip={r - 1})
            rep.add(f"p_{m} g_{m} = p_{m}", compose(p, g) == p)
            rep.add(f"g_{m} i_{m} = i_{m}", compose(g, i) == i)
            rep.add(f"h_{m} rotation invariant", rotate_pi(h) == h)
        rep.add(
            "g_r = f_(r-1) (x) f_1",
            jw.build_g(r, R) == tensor(jw.build_f(r - 1, R), jw.build_f(1, R)),
        )
        F, one, mid = jw.build_f(r - 1, R), _idn(1, R), _idn(r - 2, R)
        cup, cap = TLMorphism.cup(R), TLMorphism.cap(R)
        lhs = compose(tensor(F, one), tensor(mid, cup))
        rhs = compose(tensor(one, F), tensor(cup, mid))
        rep.add("cup on f_(r-1) changes sign under reflection", lhs == -rhs)
        lhs = compose(tensor(mid, cap), tensor(F, one))
        rhs = compose(tensor(cap, mid), tensor(one, F))
        rep.add("cap on f_(r-1) changes sign under reflection", lhs == -rhs)
    return rep


# ---------------------------------------------------------------------------


def suite_uq(r: int) -> Report:
    import json

    from .cycmat import CycMatrix
    from .uq import (
        dimension_table,
        embed_projective,
        embed_simple,
        hom_dimension,
        matrix_from_json,
        named_morphism,
        projective_module,
        restrict,
        simple_module,
        tensor_power,
        top_module,
    )

    rep = Report(f"uq r={r}")
    with timed(rep):
        modules = [simple_module(m, r) for m in range(r)]
        modules += [projective_module(m, r) for m in range(r, 2 * r - 1)]
        modules += [tensor_power(m, r) for m in range(5)] + [top_module(r)]
        for M in modules:
            checks = M.hopf_checks()
            bad = [k for k, v in checks.items() if not v]
            rep.add(f"{M.name}: defining relations of the small quantum group", not bad, ", ".join(bad))

        def same(A, B):
            return all(A.act(g) == B.act(g) for g in "EFK")

        top = min(2 * r - 2, 7)
        for m in range(r):
            sub = restrict(tensor_power(m, r), embed_simple(m, r))
            rep.add(f"embedded X_{m} carries the action of X_{m}", same(sub, simple_module(m, r)))
        for m in range(r, top + 1):
            sub = restrict(tensor_power(m, r), embed_projective(m, r))
            rep.add(f"embedded P_{m} carries the action of P_{m}", same(sub, projective_module(m, r)))

        ok = True
        for m in range(r, 2 * r - 1):
            for name, sign in (("eps", None), ("pi", None), ("iota", None), ("gamma", "+"), ("gamma", "-")):
                ok &= named_morphism(name, m, r, sign).is_intertwiner()
        for name in ("pi2r-1", "iota2r-1"):
            for s in "+-":
                ok &= named_morphism(name, 0, r, s).is_intertwiner()
        rep.add("named morphisms are intertwiners", ok)

        ok1 = ok2 = True
        for m in range(r, 2 * r - 1):
            mm = 3 * r - m - 2
            eps = named_morphism("eps", m, r).matrix
            pi, iota = named_morphism("pi", m, r).matrix, named_morphism("iota", m, r).matrix
            gp, gm = named_morphism("gamma", m, r, "+").matrix, named_morphism("gamma", m, r, "-").matrix
            hp, hm = named_morphism("gamma", mm, r, "+").matrix, named_morphism("gamma", mm, r, "-").matrix
            ok1 &= eps == iota @ pi and eps == hp @ gm and eps == hm @ gp
            ok2 &= (eps @ eps).is_zero() and (hp @ gp).is_zero() and (hm @ gm).is_zero()
        rep.add("eps_m = iota_m pi_m = gamma^+ gamma^- = gamma^- gamma^+", ok1)
        rep.add("eps_m^2 = gamma^+ gamma^+ = gamma^- gamma^- = 0", ok2)
        P = {s: named_morphism("pi2r-1", 0, r, s).matrix for s in "+-"}
        I = {s: named_morphism("iota2r-1", 0, r, s).matrix for s in "+-"}
        one = CycMatrix.identity(r, r)
        ok = all((P[t] @ I[s]) == (one if s == t else one.scale(0)) for s in "+-" for t in "+-")
        rep.add("pi^e' iota^e = delta id on X_(r-1)", ok)
        rep.add("iota^+ pi^+ + iota^- pi^- = id on X_(2r-1)", I["+"] @ P["+"] + I["-"] @ P["-"] == CycMatrix.identity(r, 2 * r))

        for name, got, want in dimension_table(r):
            rep.add(f"dim {name} = {want}", got == want, f"computed {got}")
        rep.add("dim End(X^2) = 2", hom_dimension(tensor_power(2, r), tensor_power(2, r)) == 2)

        f = named_morphism("gamma", r, r, "+")
        back = matrix_from_json(json.loads(json.dumps(f.to_json())), r)
        rep.add("module maps survive a JSON round trip", back == f.matrix)
    return rep


def suite_appendix(r: int) -> Report:
    from .appendix import appendix_oracles

    return appendix_oracles(r)


def suite_functor(r: int) -> Report:
    from .functor import suite_functor as run

    return run(r)


def suite_extended(r: int, fullness_top: int | None = None) -> Report:
    """Quotient relations, domination, and fullness (fullness only up to ``fullness_top``)."""
    from .extended import (
        verify_domination,
        verify_fullness,
        verify_quotient_relations,
        words_spot_checks,
    )

    rep = Report(f"extended r={r}")
    with timed(rep):
        rep.merge(words_spot_checks(r))
        rep.merge(verify_quotient_relations(r))
        rep.merge(verify_domination(r, 6))
        top = fullness_top if fullness_top is not None else (5 if r == 3 else 3)
        rep.merge(verify_fullness(r, top))
    return rep


SUITES = {
    "scalars": suite_scalars,
    "tangles": suite_tangles,
    "jw-generic": suite_jw_generic,
    "jw-root": lambda r: _both(suite_jw_recursions(r), suite_jw_root(r), f"jw-root r={r}"),
    "uq": suite_uq,
    "appendix": suite_appendix,
    "functor": suite_functor,
    "extended": suite_extended,
}


def _both(a: Report, b: Report, title: str) -> Report:
    rep = Report(title)
    rep.merge(a)
    rep.merge(b)
    rep.seconds = a.seconds + b.seconds
    return rep


def run_suite(name: str, r: int) -> Report:
    if name == "all":
        rep = Report(f"all r={r}")
        with timed(rep):
            for fn in SUITES.values():
                rep.merge(fn(r))
        return rep
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name](r)
