"""Named checks runnable from the command line, and the default parameter grid.

Each entry maps an id to a runner taking one parameter point and a
:class:`CheckOptions`, and returning a list of :class:`IdentityReport`.
Runners pick their own index ranges; the tolerance in the options, when
given, overrides the per-check default.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional

from . import identities as ids
from . import orthogonality as orth
from . import spectral as spec
from .exceptions import DomainError, NonConvergence
from .families import BigParams, LittleParams, qdiff_residual_big, qdiff_residual_little
from .qcore import QBase
from .reports import IdentityReport, Timer, make_report

GRID_Q = (0.3, 0.5, 0.7)
GRID_C = (-0.1, -0.5, -2.0)


def grid_ab(q: float):
    return (0.2, 0.5, 0.891 / q)


@dataclass
class CheckOptions:
    tolerance: Optional[float] = None
    truncation: int = 200
    matrix_size: int = 300
    k: Optional[int] = None
    t: Optional[float] = None
    x: Optional[int] = None
    n: Optional[int] = None
    timing: bool = False


@dataclass(frozen=True)
class Entry:
    identity_id: str
    kind: str  # 'little', 'big' or 'scalar'
    default_tol: float
    runner: Callable[..., List[IdentityReport]] = field(compare=False)
    description: str = ""


def _tol(entry: Entry, opts: CheckOptions) -> float:
    return entry.default_tol if opts.tolerance is None else float(opts.tolerance)


def _gram_report(ident, params, rep: orth.GramReport, tol, detail="") -> IdentityReport:
    res = max(rep.max_offdiag_abs, rep.max_diag_reldev)
    return make_report(ident, params, float(rep.gram[0, 0]), float(rep.rhs_diag[0]), tol,
                       rep.terms_used, residual=res,
                       detail=(detail + "; " if detail else "")
                       + f"K={len(rep.rhs_diag)}; offdiag={rep.max_offdiag_abs:.3g}; "
                       f"diag={rep.max_diag_reldev:.3g}; tail={rep.tail_bound:.3g}")


def _worst(reports: Iterable[IdentityReport]) -> IdentityReport:
    reports = list(reports)
    failing = [r for r in reports if not r.passed]
    pool = failing or reports
    return max(pool, key=lambda r: (r.residual if math.isfinite(r.residual) else math.inf))


MAX_TRUNC = 3200


def _grown(fn, trunc: int):
    """Call ``fn(trunc)``, doubling ``trunc`` while the tail bound is too large.

    The requested truncation is a floor: near ``aq = 1`` the weights decay
    slowly and 200 points do not reach the tail tolerance.
    """
    while True:
        try:
            return fn(trunc)
        except NonConvergence:
            if trunc * 2 > MAX_TRUNC:
                raise
            trunc *= 2


# ---------------------------------------------------------------- runners

def _gram_check(ident, params, build, o, tol, detail=""):
    """Gram report with the truncation grown until the tail is 100x below ``tol``."""
    rep = _grown(lambda t: build(t, tol / 100), o.truncation)
    return _gram_report(ident, params, rep, tol, detail)


def _orth_little(p, o, tol):
    return [_gram_check("orth-4.8", p.as_dict(), lambda t, tt: orth.gram_little(13, p, t, tt), o, tol)]


def _orth_dual_little(p, o, tol):
    return [_gram_check("orth-5.5", p.as_dict(), lambda t, tt: orth.gram_dual_little(13, p, t, tt), o, tol)]


def _orth_big(p, o, tol):
    return [_gram_check("orth-7.13", p.as_dict(), lambda t, tt: orth.gram_big(11, p, t, tt), o, tol)]


def _orth_functions_f(p, o, tol):
    return [_gram_check("orth-8.5", p.as_dict(),
                        lambda t, tt: orth.gram_functions_big(11, p, t, "F", tt), o, tol)]


def _orth_functions_fprime(p, o, tol):
    g = _gram_check("orth-8.6", p.as_dict(), lambda t, tt: orth.gram_functions_big(11, p, t, "F'", tt), o, tol)
    return [g, orth.cross_functions_big_all(10, p, o.truncation, tol)]


def _orth_dual_big(p, o, tol):
    return [_gram_check("orth-8.9", p.as_dict(), lambda t, tt: orth.gram_dual_big(11, p, t, tt), o, tol)]


def _cross_dual_big(p, o, tol):
    return [orth.cross_orth_dual_big_all(10, p, o.truncation, tol)]


def _unitary_size(o):
    return max(6, o.matrix_size // 2)


def _unitary_little(p, o, tol):
    # rows decay like (aq)^n; near aq = 1 the half-size truncation leaves too much tail
    M = _unitary_size(o)
    if p.a * p.q < 1:
        M = min(max(M, int(math.ceil(1.5 * math.log(1e-10) / math.log(p.a * p.q)))), max(M, o.matrix_size))
    d = spec.unitarity_defect_little(M, p)
    return [make_report("unitary-4.7", dict(p.as_dict(), M=M), d["max"], 0.0, tol, M * M,
                        residual=d["max"], detail=f"rows={d['rows']:.3g}; cols={d['cols']:.3g}")]


def _unitary_big_cols(p, o, tol):
    M = _unitary_size(o)
    d = spec.unitarity_defect_big(M, p)
    res = max(d["cols_a"], d["cols_c"], d["cross"])
    return [make_report("unitary-7.11", dict(p.as_dict(), M=M), res, 0.0, tol, 2 * M * M, residual=res,
                        detail=f"cols_a={d['cols_a']:.3g}; cols_c={d['cols_c']:.3g}; cross={d['cross']:.3g}")]


def _unitary_big_rows(p, o, tol):
    M = _unitary_size(o)
    d = spec.unitarity_defect_big(M, p)
    return [make_report("unitary-7.12", dict(p.as_dict(), M=M), d["rows"], 0.0, tol, 2 * M * M,
                        residual=d["rows"], detail="row relation over both branches")]


def _special_values(p, o, tol):
    ns = [o.n] if o.n is not None else range(21)
    return [_worst(ids.check_special_values(p, n, tol) for n in ns)]


def _symmetry_dual_big(p, o, tol):
    ns = [o.n] if o.n is not None else range(16)
    return [_worst(ids.check_symmetry(p, n, m, tol) for n in ns for m in range(16))]


def _qdiff(ident, fn, p, points, o, tol):
    ns = [o.n] if o.n is not None else range(11)
    reps = []
    for n in ns:
        for lam in points:
            res, scale = fn(n, lam, p, with_scale=True)
            reps.append(make_report(ident, dict(p.as_dict(), n=n, lam=lam), res, 0.0, tol,
                                    residual=abs(res) / scale if scale else abs(res),
                                    detail="residual / max|term|"))
    return [_worst(reps)]


def _qdiff_little(p, o, tol):
    q = p.q
    points = [q ** k for k in range(1, 6)] + [-0.5, 0.7]
    return _qdiff("qdiff-3.6", qdiff_residual_little, p, points, o, tol)


def _qdiff_big(p, o, tol):
    q, a, c = p.q, p.a, p.c
    points = [a * q ** k for k in range(2, 6)] + [c * q ** k for k in range(2, 6)] + [0.7 * a * q]
    return _qdiff("qdiff-6.6", qdiff_residual_big, p, points, o, tol)


def _racah(p, o, tol):
    errs = ids.racah_limit_errors(p, 8)
    monotone = all(e2 < e1 for e1, e2 in zip(errs, errs[1:]))
    rep = make_report("limit-racah-8.10", dict(p.as_dict(), N=40), errs[-1], 0.0, tol,
                      residual=errs[-1],
                      detail="worst relative error at N=10,20,30,40: " + ", ".join(f"{e:.3g}" for e in errs))
    rep.passed = rep.passed and monotone
    return [rep]


def _limit_c0(p, o, tol):
    return [_worst(ids.check_c0_limit(p, n, m) for n in range(7) for m in range(7))]


def _limit_b0(q, a, b, o, tol):
    return [_worst(ids.check_b0_limit(a, q, n, m, tol) for n in range(11) for m in range(11))]


def _t_values(o):
    return [o.t] if o.t is not None else list(ids.GENFUN_T)


def _x_values(o):
    return [o.x] if o.x is not None else range(7)


def _gen(fns, p, o, tol):
    reps = []
    for t in _t_values(o):
        for x in _x_values(o):
            for fn in fns:
                reps.append(fn(p, t, x, tol))
    return [_worst(reps)]


def _gen_2phi2(p, o, tol):
    return _gen([ids.genfun_dual_big_2phi2], p, o, tol)


def _gen_2phi1(p, o, tol):
    return _gen([ids.genfun_dual_big_2phi1, ids.check_dual_big_genfun_forms], p, o, tol)


def _gen_abqc(p, o, tol):
    return _gen([ids.genfun_dual_big_abqc, ids.genfun_dual_big_abqc_symmetry], p, o, tol)


def _gen_little(p, o, tol):
    reps = []
    for t in _t_values(o):
        if abs(p.a * t) >= 1:
            continue
        for x in _x_values(o):
            reps.append(ids.genfun_dual_little(p, t, x, tol))
            reps.append(ids.genfun_asc2(p.a, p.q, t, x, tol))
    if not reps:
        raise DomainError("no t value satisfies |a t| < 1")
    return [_worst(reps)]


def _sum_dual_little_mass(p, o, tol):
    return [ids.check_dual_little_mass(p, tol)]


A4_TRIPLES = ((2.0, 1.5, -3.0), (-2.0, 3.0, 4.0), (5.0, -1.5, 2.5))


def _sum_vwp_6phi5(q, a, b, o, tol):
    return [_worst(ids.check_vwp_6phi5(a, B, C, D, q, tol) for B, C, D in A4_TRIPLES)]


def _sum_vwp_4phi5(q, a, b, o, tol):
    bb = b if b else a
    return [ids.check_vwp_4phi5(a, bb, q, tol), ids.check_vwp_4phi5_limit(a, bb, q)]


def _sum_dual_big_mass(p, o, tol):
    return [ids.check_dual_big_mass(p, tol)]


def _sum_dual_big_mass_swapped(p, o, tol):
    return [ids.check_dual_big_mass_swapped(p, tol)]


def _eta(q, a, b, o, tol):
    ks = [o.k] if o.k is not None else range(11)
    vanish = _worst(ids.eta_k(a, q, k, tol) for k in ks)
    rec = _worst(ids.eta_recursion(a, q, k) for k in ks)
    return [vanish, rec]


def _complete(p, o, tol):
    return [ids.check_big_completeness(p, tol)]


def _qbinom(p, o, tol):
    return [ids.check_qbinomial(p, tol)]


def _alt(q, a, b, o, tol):
    return [_gram_check("orth-alt-charlier", {"q": q, "a": a},
                        lambda t, tt: orth.gram_alt_qcharlier_dual(11, a, q, t, tt), o, tol)]


def _jsym_little(p, o, tol):
    return [spec.j_dual_symmetry_check(p, "little", 30, tol)]


def _jsym_big(p, o, tol):
    return [spec.j_dual_symmetry_check(p, "big_a", 30, tol), spec.j_dual_symmetry_check(p, "big_c", 30, tol)]


REGISTRY: Dict[str, Entry] = {e.identity_id: e for e in (
    Entry("orth-4.8", "little", 1e-10, _orth_little, "orthogonality of the little family on {q^n}"),
    Entry("orth-5.5", "little", 1e-10, _orth_dual_little, "orthogonality of the dual little family"),
    Entry("orth-7.13", "big", 1e-10, _orth_big, "two-branch orthogonality of the big family"),
    Entry("orth-8.5", "big", 1e-10, _orth_functions_f, "orthogonality of the functions F_n"),
    Entry("orth-8.6", "big", 1e-10, _orth_functions_fprime, "orthogonality of F'_n and the F/F' cross relation"),
    Entry("orth-8.9", "big", 1e-10, _orth_dual_big, "orthogonality of the dual big family"),
    Entry("cross-8.12", "big", 1e-10, _cross_dual_big, "vanishing cross sum of two dual big families"),
    Entry("unitary-4.7", "little", 1e-8, _unitary_little, "unitarity of the little connection matrix"),
    Entry("unitary-7.11", "big", 1e-8, _unitary_big_cols, "column relations of the big connection matrix"),
    Entry("unitary-7.12", "big", 1e-8, _unitary_big_rows, "row relation of the big connection matrix"),
    Entry("special-7.1", "big", 1e-12, _special_values, "big family at aq and cq"),
    Entry("symmetry-8.13", "big", 1e-12, _symmetry_dual_big, "parameter symmetry of the dual big family"),
    Entry("qdiff-3.6", "little", 1e-10, _qdiff_little, "q-difference equation of the little family"),
    Entry("qdiff-6.6", "big", 1e-10, _qdiff_big, "q-difference equation of the big family"),
    Entry("limit-racah-8.10", "big", 1e-8, _racah, "q-Racah limit to the dual big family"),
    Entry("limit-c0", "little", math.inf, _limit_c0, "dual big to dual little as c -> 0-"),
    Entry("limit-b0-8.11", "scalar", 1e-12, _limit_b0, "dual little at b=0 vs Al-Salam--Carlitz II"),
    Entry("gen-9.1", "big", 1e-10, _gen_2phi2, "generating function, 2phi2 form"),
    Entry("gen-9.2", "big", 1e-10, _gen_2phi1, "generating function, 2phi1 form and equivalence"),
    Entry("gen-9.3", "big", 1e-10, _gen_abqc, "second generating function, both forms"),
    Entry("gen-9.4", "little", 1e-10, _gen_little, "generating function of the dual little family"),
    Entry("sum-A.1", "little", 1e-12, _sum_dual_little_mass, "dual little weight sum"),
    Entry("sum-A.4", "scalar", 1e-12, _sum_vwp_6phi5, "very-well-poised 6phi5 sum"),
    Entry("sum-A.5", "scalar", 1e-12, _sum_vwp_4phi5, "4phi5 sum and its limit relation"),
    Entry("sum-A.6", "big", 1e-12, _sum_dual_big_mass, "dual big weight sum"),
    Entry("sum-A.7", "big", 1e-12, _sum_dual_big_mass_swapped, "companion weight sum"),
    Entry("eta-A.8", "scalar", 1e-10, _eta, "vanishing of eta_k and its recursion"),
    Entry("complete-7.14", "big", 1e-11, _complete, "two-2phi1 completeness identity"),
    Entry("qbinom-4.9", "little", 1e-12, _qbinom, "q-binomial theorem for the little weight"),
    Entry("orth-alt-charlier", "scalar", 1e-10, _alt, "alternative q-Charlier dual orthogonality"),
    Entry("jsym-4.4", "little", 1e-13, _jsym_little, "J symmetric in the normalized dual little basis"),
    Entry("jsym-7.4", "big", 1e-13, _jsym_big, "J symmetric in both normalized dual big bases"),
)}

IDS = tuple(REGISTRY)


def make_params(kind: str, point: Dict[str, float]):
    """Validated parameter object for ``kind`` from a point dict."""
    try:
        q = point["q"]
        a = point["a"]
        if kind == "little":
            return LittleParams(QBase(q), a, point["b"])
        if kind == "big":
            return BigParams(QBase(q), a, point["b"], point["c"])
    except KeyError as exc:
        raise DomainError(f"missing parameter {exc.args[0]!r} for a {kind} check") from None
    if kind == "scalar":
        return QBase(q).q, float(a), float(point.get("b", 0.0) or 0.0)
    raise DomainError(f"unknown kind {kind!r}")


def run_check(identity_id: str, point: Dict[str, float], opts: Optional[CheckOptions] = None) -> List[IdentityReport]:
    """Run one registered check at one parameter point."""
    if identity_id not in REGISTRY:
        raise KeyError(identity_id)
    opts = opts or CheckOptions()
    entry = REGISTRY[identity_id]
    tol = _tol(entry, opts)
    params = make_params(entry.kind, point)
    with Timer() as timer:
        if entry.kind == "scalar":
            reports = entry.runner(*params, opts, tol)
        else:
            reports = entry.runner(params, opts, tol)
    for r in reports:
        r.wall_ms = timer.ms / len(reports) if opts.timing else 0.0
    return reports


def default_grid(kind: str) -> List[Dict[str, float]]:
    """Parameter points of the default grid for a check kind (sorted, deterministic)."""
    points = []
    for q in GRID_Q:
        ab = grid_ab(q)
        if kind == "scalar":
            points.extend({"q": q, "a": a} for a in ab)
        elif kind == "little":
            points.extend({"q": q, "a": a, "b": b} for a, b in itertools.product(ab, ab))
        else:
            points.extend({"q": q, "a": a, "b": b, "c": c}
                          for a, b, c in itertools.product(ab, ab, GRID_C))
    return points


def grid_from_values(values: Dict[str, List[float]], kind: str) -> List[Dict[str, float]]:
    """Cross product of explicit per-parameter value lists, restricted to the keys ``kind`` needs."""
    keys = {"scalar": ("q", "a", "b"), "little": ("q", "a", "b"), "big": ("q", "a", "b", "c")}[kind]
    used = [k for k in keys if k in values]
    combos = itertools.product(*(values[k] for k in used))
    return [dict(zip(used, combo)) for combo in combos]
