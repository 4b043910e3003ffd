"""Catalog-wide property suites, one per acceptance criterion.

Every suite returns a :class:`Report` whose checks aggregate one property
over the whole catalog: the detail field records how many instances were
examined and the witness is the first failing instance.  Reports contain no
timing, so repeated runs serialize identically.
"""

from __future__ import annotations

from itertools import combinations, product
from typing import Any, Callable

from .bimodule import (
    QRBisheaf,
    bimodule_iso,
    bisheaf_laws,
    interchange_check,
    is_biprincipal,
    is_principal,
    theta_inner_check,
    translation_laws,
    unit_maps_check,
)
from .catalog import (
    catalog_bisheaves,
    catalog_blocales,
    catalog_functors,
    catalog_groupoids,
    catalog_posets,
    catalog_sheaves,
)
from .errors import HypothesisFailed, Inconclusive, NotBisheaf, NotSheafHom, PreconditionFailed
from .groupoid import (
    bundle_of_functor,
    functor_from_section,
    global_section_of_bundle,
    is_essential_equivalence,
    section_isomorphism,
)
from .locale import (
    BLocale,
    SheafHom,
    compatible,
    local_sections,
    pairing_direct_image,
    support_of,
    surjection_pullback_check,
    tensor_over_base,
)
from .morita import (
    decide_morita,
    hs_compose,
    hs_of_functor,
    is_hs_invertible,
    morita_oracle,
)
from .qmodule import (
    RightStructure,
    adjoint_identity,
    alpha_star_check,
    bisections,
    check_freeness,
    check_transitivity_splitting,
    hilbert_laws,
    hilbert_sections,
    inner_fast,
    inner_oracle,
    invariant_part,
    module_of_action,
    orbit_unions,
    principal_pair_laws,
    principal_sections,
    right_structure,
)
from .quantale import GroupoidQuantale, shared_quantale, validate_iqf
from .report import Report


class Tally:
    """Aggregate named checks over many instances, keeping the first failure."""

    def __init__(self) -> None:
        self.order: list[str] = []
        self.count: dict[str, int] = {}
        self.fails: dict[str, int] = {}
        self.first: dict[str, Any] = {}

    def check(self, name: str, ok: bool, witness: Any = None) -> bool:
        if name not in self.count:
            self.order.append(name)
            self.count[name] = 0
            self.fails[name] = 0
        self.count[name] += 1
        if not ok:
            self.fails[name] += 1
            self.first.setdefault(name, witness)
        return bool(ok)

    def absorb(self, rep: Report, context: Any, prefix: str = "") -> bool:
        for c in rep.checks:
            self.check(prefix + c.name, c.passed, [context, c.witness])
        return rep.passed

    def note(self, name: str, value: int) -> None:
        """An informational counter, recorded as a passing check."""
        self.order.append(name)
        self.count[name] = value
        self.fails[name] = 0

    def report(self) -> Report:
        rep = Report()
        for name in self.order:
            nf = self.fails[name]
            rep.add(name, nf == 0, self.first.get(name), f"{self.count[name]} instances, {nf} failures")
        return rep


def _sheaves(max_points: int, max_objects: int = 3):
    for i, (G, a) in enumerate(catalog_sheaves(max_points, max_objects)):
        yield f"{G.name}#{i}", module_of_action(a, shared_quantale(G))


# ---------------------------------------------------------------------------
# 1. quantale axioms


def quantale_suite(max_objects: int = 3, max_arrows: int = 8) -> Report:
    t = Tally()
    gs = catalog_groupoids(max_objects, max_arrows)
    t.note("catalog groupoids", len(gs))
    for G in gs:
        t.absorb(validate_iqf(GroupoidQuantale(G)), G.name)
    return t.report()


# ---------------------------------------------------------------------------
# 2. inner products


def inner_suite(max_points: int = 4, max_objects: int = 3) -> Report:
    t = Tally()
    n = total = 0
    for name, X in _sheaves(max_points, max_objects):
        n += 1
        bad_oracle = bad_closed = None
        pairs = 0
        for x in X.elements:
            for y in X.elements:
                pairs += 1
                f = inner_fast(X, x, y)
                if bad_oracle is None and f != inner_oracle(X, x, y):
                    bad_oracle = (name, X.render(x), X.render(y))
                if bad_closed is None and f != X.closed_inner(x, y):
                    bad_closed = (name, X.render(x), X.render(y))
        t.check("inner_fast = inner_oracle on all element pairs", bad_oracle is None, bad_oracle)
        t.check("inner_fast = closed form on all element pairs", bad_closed is None, bad_closed)
        total += pairs
    t.note("catalog sheaves", n)
    t.note("element pairs compared", total)
    return t.report()


# ---------------------------------------------------------------------------
# 3. Hilbert-module laws


def _bisheaf_right(X: QRBisheaf) -> RightStructure:
    return RightStructure(X.R, X.ract, X.tspp, X.rinner, X.bisections, True)


def hilbert_suite(max_points: int = 4, max_objects: int = 3, bisheaves: bool = True) -> Report:
    t = Tally()
    for name, X in _sheaves(max_points, max_objects):
        t.absorb(hilbert_sections(X).report, name)
        t.absorb(hilbert_laws(X), name)
        t.absorb(alpha_star_check(X), name)
        rs = right_structure(X)
        t.absorb(adjoint_identity(X, rs), name, "I(X): ")
    if bisheaves:
        for name, B in catalog_bisheaves(max_objects=max_objects):
            small = B.n <= 4 and B.H.n_arrows <= 4 and B.G.n_arrows <= 4
            t.absorb(adjoint_identity(B.left, _bisheaf_right(B), exhaustive=small), name, "O(H): ")
    return t.report()


# ---------------------------------------------------------------------------
# 4. direct-image calculus on finite locales


def _homs(Z: BLocale, X: BLocale) -> list[SheafHom]:
    out = []
    for pts in product(range(len(X.carrier)), repeat=len(Z.carrier)):
        try:
            out.append(SheafHom(Z, X, pts))
        except (ValueError, NotSheafHom):
            continue
    return out


def _describe(X: BLocale) -> list:
    return [sorted(X.carrier.below), list(X.anchor.points)]


def _tensor_checks(t: Tally, X: BLocale, Y: BLocale, ctx: Any) -> None:
    T = tensor_over_base(X, Y)
    sx, sy = support_of(X), support_of(Y)
    st = support_of(T)
    xs, ys = X.carrier.frame.elements, Y.carrier.frame.elements
    t.check("π1 and π2 are open", T.pi1.is_open() and T.pi2.is_open(), ctx)
    w = next(
        ((x, y) for x in xs for y in ys
         if T.pi1.direct_image(T.pure(x, y)) != X.act(sy(y), x)
         or T.pi2.direct_image(T.pure(x, y)) != Y.act(sx(x), y)),
        None,
    )
    t.check("(π1)_!(x⊗y) = spp_Y(y)x and (π2)_!(x⊗y) = spp_X(x)y", w is None, [ctx, w])
    w = next(((x, y) for x in xs for y in ys if st(T.pure(x, y)) != sx(x) & sy(y)), None)
    t.check("spp(x⊗y) = spp_X(x) ∧ spp_Y(y)", w is None, [ctx, w])
    lx, ly = local_sections(X), local_sections(Y)
    if not (lx.is_sheaf and ly.is_sheaf):
        return
    lt = local_sections(T)
    t.check("X⊗_B Y is a B-sheaf", lt.is_sheaf, ctx)
    prods = {T.pure(s, u) for s in lx.sections for u in ly.sections}
    tsec = set(lt.sections)
    t.check("s⊗t are local sections", prods <= tsec, ctx)
    frame = T.carrier.frame
    w = next(
        (z for z in frame.elements
         if frame.join_all(v for v in prods if v & ~z == 0) != z),
        None,
    )
    t.check("{s⊗t} is join-dense (Hilbert basis)", w is None, [ctx, w])
    t.check("local sections of X⊗_B Y are exactly the products s⊗t", tsec == prods,
            [ctx, sorted(tsec ^ prods)])
    # compatible families, normalized so that spp_X(s) = spp_Y(t)
    norm = sorted({(s, u) for s in lx.sections for u in ly.sections if sx(s) == sy(u)})
    fams = [list(c) for k in (2, 3) for c in combinations(norm, k)] if len(norm) <= 12 \
        else [list(c) for c in combinations(norm, 2)]
    w = None
    for fam in fams:
        elems = [T.pure(s, u) for s, u in fam]
        if not all(compatible(T, a, b) for a, b in combinations(elems, 2)):
            continue
        js = X.carrier.frame.join_all(s for s, _ in fam)
        ju = Y.carrier.frame.join_all(u for _, u in fam)
        lhs = frame.join_all(elems)
        if lhs != T.pure(js, ju) or js not in lx or ju not in ly:
            w = fam
            break
    t.check("compatible joins: ⋁ s_i⊗t_i = (⋁s_i)⊗(⋁t_i) with both joins sections",
            w is None, [ctx, w])


def locale_suite(max_points: int = 3, max_total: int = 6) -> Report:
    """Tensor, pairing and surjection-stability checks over small finite locales.

    Instances use bases with at most ``max_points`` points and carriers of at
    most ``max_points`` points each, with at most ``max_total`` carrier points
    in total.
    """
    t = Tally()
    n_tensor = n_pair = n_surj = 0
    for bi, B in enumerate(catalog_posets(max_points)):
        bl = [X for X in catalog_blocales(B, max_points) if X.is_open]
        for i, X in enumerate(bl):
            for j, Y in enumerate(bl):
                if len(X.carrier) + len(Y.carrier) > max_total:
                    continue
                ctx = [bi, _describe(X), _describe(Y)]
                if i <= j:
                    n_tensor += 1
                    _tensor_checks(t, X, Y, ctx)
                if support_of(Y)(Y.carrier.top) == B.top:
                    n_surj += 1
                    t.check("π1 of a pullback of an open surjection is an open surjection",
                            surjection_pullback_check(X, Y), ctx)
                else:
                    try:
                        surjection_pullback_check(X, Y)
                        ok = False
                    except PreconditionFailed:
                        ok = True
                    t.check("non-surjective p is rejected", ok, ctx)
        sheaves = [X for X in bl if local_sections(X).is_sheaf]
        for Z in sheaves:
            zs = local_sections(Z).sections
            # the diagonal case
            ident = SheafHom(Z, Z, range(len(Z.carrier)))
            T, d = pairing_direct_image(ident, ident)
            w = next((s for s in zs if d(s) != T.pure(s, s)), None)
            t.check("Δ_!(s) = s⊗s", w is None, [bi, _describe(Z), w])
            for X in sheaves:
                hx = _homs(Z, X)
                for Y in sheaves:
                    if len(Z.carrier) + len(X.carrier) + len(Y.carrier) > max_total:
                        continue
                    for f in hx:
                        for g in _homs(Z, Y):
                            n_pair += 1
                            T, pd = pairing_direct_image(f, g)
                            w = next(
                                (s for s in zs
                                 if pd(s) != T.pure(f.direct_image(s), g.direct_image(s))),
                                None,
                            )
                            ctx = [bi, _describe(Z), f.map.points, g.map.points]
                            t.check("⟨f,g⟩_!(s) = f_!(s)⊗g_!(s)", w is None, [ctx, w])
                            lt = set(local_sections(T).sections)
                            t.check("⟨f,g⟩_! sends sections to sections",
                                    all(pd(s) in lt for s in zs), ctx)
    t.note("tensor instances", n_tensor)
    t.note("pairing instances", n_pair)
    t.note("surjection instances", n_surj)
    return t.report()


# ---------------------------------------------------------------------------
# 5. principal sections, freeness, transitivity


def principality_suite(max_points: int = 4, max_objects: int = 3) -> Report:
    t = Tally()
    n_free = 0
    for name, X in _sheaves(max_points, max_objects):
        ps = principal_sections(X)
        t.absorb(ps.report, name)
        rs = right_structure(X)
        t.check("the right I(X)-structure is a sheaf (bisheaf)", rs.is_sheaf, name)
        free, w = check_freeness(X)
        t.check("[act*,π2*](s⊗t) = ⟨s,t⟩⊗t; covered ⟹ mono; covered ⟺ free", w is None, [name, w])
        t.check("principally covered bisheaf ⟺ free action",
                (ps.covered and rs.is_sheaf) == free, [name, ps.covered, free])
        bis = bisections(X, rs)
        if free:
            n_free += 1
            t.check("free ⟹ principal sections = local bisections",
                    set(ps.sections) == set(bis), name)
            Q = X.Q
            t.check("free ⟹ ⟨s,s⟩ ∈ Q_0 for every tsection",
                    all(Q.leq(X.inner(s, s), Q.e) for s in rs.sections), name)
        try:
            ok, why = check_transitivity_splitting(X), None
        except NotBisheaf as exc:
            ok, why = False, str(exc)
        t.check("φ♯∘⟨act,π2⟩* = id with φ♯(u⊗t) = ut⊗t", ok, [name, why])
        t.absorb(principal_pair_laws(X), name)
        t.check("I(X) = unions of orbits",
                set(invariant_part(X).elements) == orbit_unions(X.action), name)
    t.note("free catalog sheaves", n_free)
    return t.report()


# ---------------------------------------------------------------------------
# 6. biprincipality


def biprincipality_suite(max_objects: int = 3) -> Report:
    t = Tally()
    n_bp = n_hyp = n_int = 0
    bishs = catalog_bisheaves(max_objects=max_objects)
    for name, X in bishs:
        t.absorb(bisheaf_laws(X), name)
        bp = is_biprincipal(X)
        t.absorb(bp.consistency, name)
        try:
            holds, rep = interchange_check(X)
            n_hyp += 1
            n_int += holds
            c = rep["interchange ⟺ biprincipal"]
            t.check(c.name, c.passed, [name, c.witness])
        except HypothesisFailed:
            t.check("without the unit joins the bisheaf is not biprincipal", not bp.biprincipal, name)
        if bp.principal:
            t.check("θ_!(x⊗y) = ⟨x,y⟩", theta_inner_check(X), name)
            t.absorb(translation_laws(X), name)
        if bp.biprincipal:
            n_bp += 1
            t.absorb(unit_maps_check(X), name)
    t.note("catalog bisheaves", len(bishs))
    t.note("bisheaves meeting the unit-join hypothesis", n_hyp)
    t.note("bisheaves satisfying the interchange rule", n_int)
    t.note("biprincipal bisheaves", n_bp)
    return t.report()


# ---------------------------------------------------------------------------
# 7. Morita decision


def morita_suite(max_objects: int = 3, threads: int = 1) -> Report:
    t = Tally()
    gs = catalog_groupoids(max_objects)
    equivalent = 0
    verdicts: dict[tuple[str, str], bool] = {}
    for g1 in gs:
        for g2 in gs:
            ctx = [g1.name, g2.name]
            try:
                v = decide_morita(g1, g2, threads=threads)
            except Inconclusive as exc:
                t.check("inconclusive only below the minimal witness size",
                        exc.witness is not None and max(g1.n_arrows, g2.n_arrows) < exc.witness, ctx)
                continue
            verdicts[(g1.name, g2.name)] = v.equivalent
            equivalent += v.equivalent
            t.check("decide_morita agrees with morita_oracle",
                    v.oracle_agrees and v.equivalent == morita_oracle(g1, g2), ctx)
            if v.equivalent:
                t.absorb(v.report, ctx)
    for n in range(2, max_objects + 1):
        t.check(f"P{n} ~ T", verdicts.get((f"P{n}", "T")) is True)
    t.check("Z2 ≁ T", verdicts.get(("Z2", "T")) is False)
    t.check("G ~ G for every catalog groupoid", all(verdicts.get((G.name, G.name)) for G in gs))
    t.note("ordered pairs decided", len(verdicts))
    t.note("equivalent pairs", equivalent)
    return t.report()


# ---------------------------------------------------------------------------
# 8. functors and Hilsum–Skandalis maps


def _q_fiber_section(X: QRBisheaf) -> list[int] | None:
    sec = []
    for y in range(X.H.n_objects):
        pts = [x for x in range(X.n) if X.q[x] == y]
        if not pts:
            return None
        sec.append(pts[0])
    return sec


def functor_suite(max_arrows: int = 4, max_objects: int = 3) -> Report:
    t = Tally()
    fs = catalog_functors(max_arrows, max_objects)
    hs = []
    for i, f in enumerate(fs):
        ctx = f"φ{i}: {f.source.name}→{f.target.name}"
        X = QRBisheaf(bundle_of_functor(f))
        t.check("⟨φ⟩ is principal", is_principal(X).principal, ctx)
        sec = global_section_of_bundle(f)
        mask = sum(1 << x for x in sec)
        t.check("the identity section is a q-section with tspp(s) = e_R",
                len({X.q[x] for x in sec}) == len(sec) and X.tspp(mask) == X.R.e, ctx)
        g = functor_from_section(X.b, sec)
        t.check("functor recovered from the section is φ", g.obj == f.obj and g.arr == f.arr, ctx)
        iso = section_isomorphism(X.b, sec)
        t.check("(g,y) ↦ g·s(y) is the identity on ⟨φ⟩", all(iso[k] == k for k in iso), ctx)
        hs.append(hs_of_functor(f))
        ess, _ = is_essential_equivalence(f)
        if ess:
            t.check("essential equivalence ⟹ ⟨φ⟩ is HS-invertible",
                    is_hs_invertible(hs[-1]).invertible, ctx)
    # the other direction of the round trip, on principal catalog bisheaves
    for name, X in catalog_bisheaves(max_objects=max_objects):
        if not is_principal(X).principal:
            continue
        sec = _q_fiber_section(X)
        if sec is None:
            continue
        f = functor_from_section(X.b, sec)
        t.check("principal X with a global section ≅ ⟨functor of the section⟩",
                bool(bimodule_iso(bundle_of_functor(f), X.b)), name)
    # composition: ⟨φ∘ψ⟩ ≅ ⟨φ⟩⊗⟨ψ⟩
    by_source: dict[str, list[int]] = {}
    for i, f in enumerate(fs):
        by_source.setdefault(f.source.name, []).append(i)
    n_comp = 0
    for j, psi in enumerate(fs):
        for i in by_source.get(psi.target.name, []):
            phi = fs[i]
            if phi.source is not psi.target:
                continue
            n_comp += 1
            comp = hs_of_functor(phi.compose(psi))
            t.check("⟨φ∘ψ⟩ ≅ ⟨φ⟩⊗⟨ψ⟩", comp == hs_compose(hs[i], hs[j]), [i, j])
    t.note("catalog functors", len(fs))
    t.note("composable functor pairs", n_comp)
    return t.report()


SUITES: dict[int, tuple[str, Callable[[], Report]]] = {
    1: ("quantale axioms", quantale_suite),
    2: ("inner-product equivalence", inner_suite),
    3: ("Hilbert-module laws", hilbert_suite),
    4: ("direct-image calculus", locale_suite),
    5: ("principality stack", principality_suite),
    6: ("biprincipality", biprincipality_suite),
    7: ("Morita decision", morita_suite),
    8: ("functor bridge", functor_suite),
}
