"""Acceptance suite: the library's closed-form claims checked end to end.

Each criterion is a standalone function returning a CriterionResult; the
registry drives both ``qck verify`` and the acceptance test gate, so the
command line and the test suite can never drift apart.  Criteria carry a
wall-clock budget and fail when they blow it.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .ambient import (AmbientSpace, DefiniteLogFamily, InverseFamily,
                      LogFamily, flat_metric, potential_metric, radial_frame,
                      radial_unit_field)
from .config import worker_count
from .curvature import curvature_bundle, kahler_defect
from .qch import (bochner_flat, bochner_of_tensor, build_basis_tensors,
                  decompose, extract_shape_data)
from .rotational import (BochnerFamily, ConstHSC, const_hsc_profile,
                         embed_and_verify, qc_coefficients)
from .sampling import point_at_radius, radial_points
from .sasakian import family_h1_report, sphere_report
from .tensors import Tensor4


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    elapsed: float
    budget: float
    details: dict
    failures: tuple

    def to_json(self) -> dict:
        return {"number": self.number, "name": self.name,
                "passed": self.passed, "elapsed": self.elapsed,
                "budget": self.budget, "details": dict(self.details),
                "failures": list(self.failures)}


def _pmap(fn, items):
    items = list(items)
    cap = worker_count()
    if cap <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=min(cap, len(items))) as pool:
        return list(pool.map(fn, items))


def _decompose_at(space, metric, xi_field, x):
    bundle = curvature_bundle(metric, x)
    frame = radial_frame(space, x, metric)
    shape = extract_shape_data(metric, xi_field, x)
    basis = build_basis_tensors(bundle.G, bundle.J, frame)
    return decompose(bundle, basis, shape), bundle, frame


# -- criterion bodies ----------------------------------------------------------


def _crit_flat_baselines():
    failures = []
    worst = 0.0
    spaces = [AmbientSpace(3, "lorentz"), AmbientSpace(2, "definite"),
              AmbientSpace(3, "definite")]
    for space in spaces:
        metric = flat_metric(space)
        for seed in (0, 1):
            x = point_at_radius(space, 1.7, seed=seed)
            bundle = curvature_bundle(metric, x)
            r = abs(float(space.square_norm(x))) ** 0.5
            u = np.asarray(x, float) / r
            vals = {"curvature": bundle.R.scale(),
                    "tau": abs(bundle.scalar_curvature()),
                    "sigma": abs(bundle.sigma_radial(u)),
                    "kappa": abs(bundle.kappa_radial(u))}
            for name, v in vals.items():
                worst = max(worst, v)
                if v >= 1e-10:
                    failures.append(
                        f"{space.signature} n={space.n}: {name} = {v:.3e}")
    return {"worst_component": worst}, failures


def _crit_disc_model():
    space = AmbientSpace(2, "lorentz")
    family = LogFamily(-1.0, 1.0)
    metric = potential_metric(space, family)
    xi_field = radial_unit_field(space, metric, "outward")
    pts = radial_points(space, 10, 1.1, 3.0, seed=5, family=family)

    def one(item):
        i, x = item
        out = []
        dec, bundle, _ = _decompose_at(space, metric, xi_field, x)
        coeff = max(abs(dec.a + 1.0), abs(dec.b), abs(dec.c))
        if coeff > 1e-6 or dec.residual > 1e-6:
            out.append(f"point {i}: decomposition off by {coeff:.3e}, "
                       f"residual {dec.residual:.3e}")
        rng = np.random.default_rng(1000 + i)
        hsc_err = 0.0
        for _ in range(20):
            X = rng.normal(size=4)
            X = X / math.sqrt(float(X @ bundle.G @ X))
            hsc_err = max(hsc_err, abs(bundle.hsc(X) + 1.0))
        if hsc_err > 1e-7:
            out.append(f"point {i}: holomorphic curvature off by {hsc_err:.3e}")
        bnorm = bochner_of_tensor(bundle.R, bundle.G, bundle.J).scale()
        if bnorm > 1e-6:
            out.append(f"point {i}: Bochner norm {bnorm:.3e}")
        return coeff, dec.residual, hsc_err, bnorm, out

    rows = _pmap(one, list(enumerate(pts)))
    failures = [msg for row in rows for msg in row[4]]
    details = {"max_coefficient_delta": max(r[0] for r in rows),
               "max_residual": max(r[1] for r in rows),
               "max_hsc_delta": max(r[2] for r in rows),
               "max_bochner_norm": max(r[3] for r in rows)}
    return details, failures


def _crit_negative_class():
    cases = [(2, LogFamily(-1.0, 1.0)), (2, LogFamily(-1.0, 1.5)),
             (2, LogFamily(-2.0, 1.0)), (2, LogFamily(-2.0, 1.5)),
             (2, InverseFamily()), (3, LogFamily(-1.0, 1.0))]
    failures = []
    worst = {"kahler": 0.0, "residual": 0.0, "margin": -math.inf}

    def run_case(case):
        n, family = case
        space = AmbientSpace(n, "lorentz")
        metric = potential_metric(space, family)
        xi_field = radial_unit_field(space, metric, "outward")
        count = 10 if n == 2 else 3
        pts = radial_points(space, count, 1.2, 3.0, seed=11 + n,
                            family=family)
        out = []
        kmax = rmax = 0.0
        margin = -math.inf
        for x in pts:
            kd = kahler_defect(metric, x)
            dec, _, _ = _decompose_at(space, metric, xi_field, x)
            kmax = max(kmax, kd)
            rmax = max(rmax, dec.residual)
            margin = max(margin, dec.a_plus_k2)
            if kd > 1e-9 or dec.residual > 1e-6:
                out.append(f"{family.describe()} n={n}: defects {kd:.2e}, "
                           f"{dec.residual:.2e}")
            if not (dec.a_plus_k2 < -1e-3 and dec.klass == "negative"):
                out.append(f"{family.describe()} n={n}: class {dec.klass} "
                           f"with a+k^2 = {dec.a_plus_k2:.3e}")
        return kmax, rmax, margin, out

    for kmax, rmax, margin, out in _pmap(run_case, cases):
        failures.extend(out)
        worst["kahler"] = max(worst["kahler"], kmax)
        worst["residual"] = max(worst["residual"], rmax)
        worst["margin"] = max(worst["margin"], margin)
    details = {"max_kahler_defect": worst["kahler"],
               "max_residual": worst["residual"],
               "max_a_plus_k2": worst["margin"]}
    return details, failures


def _crit_definite_class():
    failures = []
    details = {"max_residual": 0.0, "min_a_plus_k2": math.inf}
    for family in (DefiniteLogFamily(2.0, 1.0), DefiniteLogFamily(1.0, 1.5)):
        space = AmbientSpace(2, "definite")
        metric = potential_metric(space, family)
        xi_field = radial_unit_field(space, metric, "outward")
        pts = radial_points(space, 10, 0.4, 2.0, seed=4, family=family)
        for x in pts:
            dec, _, _ = _decompose_at(space, metric, xi_field, x)
            details["max_residual"] = max(details["max_residual"], dec.residual)
            details["min_a_plus_k2"] = min(details["min_a_plus_k2"],
                                           dec.a_plus_k2)
            if dec.residual > 1e-6:
                failures.append(f"{family.describe()}: residual "
                                f"{dec.residual:.3e}")
            if not (dec.a_plus_k2 > 1e-3 and dec.klass == "positive"):
                failures.append(f"{family.describe()}: class {dec.klass} with "
                                f"a+k^2 = {dec.a_plus_k2:.3e}")
    return details, failures


def _crit_radial_law():
    space = AmbientSpace(2, "lorentz")
    u = np.zeros(4)
    u[3] = 1.0
    failures = []
    worst = 0.0
    for family in (LogFamily(-1.0, 1.0), InverseFamily()):
        metric = potential_metric(space, family)
        xi_field = radial_unit_field(space, metric, "outward")

        def a_at(r):
            dec, _, _ = _decompose_at(space, metric, xi_field, r * u)
            return dec

        for r in (1.4, 1.7, 2.0, 2.4, 2.8):
            h = 1e-3 * r
            da_dr = (a_at(r + h).a - a_at(r - h).a) / (2.0 * h)
            dec, bundle, frame = _decompose_at(space, metric, xi_field, r * u)
            eta_dr = float(frame.xi @ bundle.G @ u)
            rhs = 0.5 * dec.k * dec.b * eta_dr
            err = abs(da_dr - rhs) / max(1.0, abs(da_dr), abs(rhs))
            worst = max(worst, err)
            if err > 1e-4:
                failures.append(f"{family.describe()} r={r}: da/dr "
                                f"{da_dr:.6e} vs {rhs:.6e}")
    return {"max_relative_error": worst}, failures


def _crit_bochner_equivalence():
    space = AmbientSpace(3, "definite")
    x = point_at_radius(space, 1.5, seed=3)
    G = space.flat_real()
    metric = flat_metric(space)
    J = metric.structure_matrix(x)
    frame = radial_frame(space, x)
    basis = build_basis_tensors(G, J, frame)
    n = space.n
    model = (2.0 / ((n + 1) * (n + 2)) * basis.pi.a
             - 4.0 / (n + 2) * basis.phi.a + basis.psi.a)
    rng = np.random.default_rng(101)
    failures = []
    worst_identity = 0.0
    for trial in range(50):
        a, b = rng.uniform(-2.0, 2.0, size=2)
        if trial % 2 == 0:
            c = 0.0
        else:
            c = float(rng.uniform(0.01, 2.0) * rng.choice([-1.0, 1.0]))
        T = Tensor4(a * basis.pi.a + b * basis.phi.a + c * basis.psi.a,
                    symmetry="curvature")
        B = bochner_of_tensor(T, G, J)
        flat = bochner_flat(B)
        if flat != (abs(c) < 1e-6):
            failures.append(f"trial {trial}: flat={flat} but c={c:.3e}")
        defect = float(np.max(np.abs(B.a - c * model)))
        worst_identity = max(worst_identity, defect)
        if defect > 1e-9:
            failures.append(f"trial {trial}: operator identity off by "
                            f"{defect:.3e}")
    return {"max_identity_defect": worst_identity}, failures


def _crit_hypersphere():
    space = AmbientSpace(2, "lorentz")
    family = LogFamily(-1.0, 1.0)
    failures = []
    details = {}
    for r in (1.5, 2.0, 3.0):
        rep = sphere_report(space, family, r, seed=2)
        want_c3 = -(r * r - 1.0) / (r * r)
        checks = [
            (abs(rep.alpha - 1.0 / (2.0 * r)) < 1e-6,
             f"alpha {rep.alpha:.8f} vs {1.0 / (2.0 * r):.8f}"),
            (rep.alpha_defect < 1e-5, f"alpha defect {rep.alpha_defect:.2e}"),
            (rep.c_spread < 1e-6, f"curvature spread {rep.c_spread:.2e}"),
            (abs(rep.c_plus_3a2 - want_c3) < 1e-5,
             f"c+3a^2 {rep.c_plus_3a2:.8f} vs {want_c3:.8f}"),
            (rep.type_tag == "III", f"type {rep.type_tag}"),
            (rep.decompose_delta is not None and rep.decompose_delta < 1e-5,
             f"ambient relation delta {rep.decompose_delta}"),
        ]
        for ok, msg in checks:
            if not ok:
                failures.append(f"r={r}: {msg}")
        details[f"alpha_r{r:g}"] = rep.alpha
        details[f"c_plus_3a2_r{r:g}"] = rep.c_plus_3a2
    return details, failures


def _crit_deformed_family():
    failures = []
    details = {}
    for q in (1.0, 2.0):
        rep = family_h1_report(2, q, seed=1)
        want_c = -4.0 / (q * q) - 3.0
        if abs(rep.alpha - 1.0) > 1e-6:
            failures.append(f"q={q:g}: alpha {rep.alpha:.8f}")
        if abs(rep.c - want_c) > 1e-5:
            failures.append(f"q={q:g}: c {rep.c:.8f} vs {want_c:.8f}")
        details[f"alpha_q{q:g}"] = rep.alpha
        details[f"c_q{q:g}"] = rep.c
    return details, failures


def _crit_meridian_identities():
    failures = []
    worst_const = 0.0
    for c1, c2 in ((1.0, 0.0), (0.5, 1.0), (0.0, 0.0)):
        src = BochnerFamily(c1, c2)
        for t in np.linspace(0.4, 1.4, 21):
            tp, tpp, _ = src.jets(float(t))
            lhs = tpp / (t * tp) + 4.0 * (1.0 - tp) / t ** 2
            worst_const = max(worst_const, abs(lhs + 2.0 * c2))
            co = qc_coefficients("II", float(t), *src.jets(float(t)))
            if abs(co.a_plus_k2 - 4.0 / t ** 2) > 1e-10:
                failures.append(f"bochner({c1:g},{c2:g}) t={t:.3f}: a+k^2 off")
    if worst_const > 1e-10:
        failures.append(f"radial trace expression drifts by {worst_const:.3e}")

    worst_abc = 0.0
    for tag, window in (("II", (0.5, 3.0)), ("III", (3.0, 5.0))):
        src = ConstHSC(-1.0, tag)
        sign = 1.0 if tag == "II" else -1.0
        for t in np.linspace(*window, 21):
            co = qc_coefficients(tag, float(t), *src.jets(float(t)))
            err = max(abs(co.a + 1.0), abs(co.b), abs(co.c))
            worst_abc = max(worst_abc, err)
            if err > 1e-6:
                failures.append(f"const-hsc {tag} t={t:.3f}: coefficients "
                                f"off by {err:.3e}")
            if abs(co.a_plus_k2 - sign * 4.0 / t ** 2) > 1e-10:
                failures.append(f"const-hsc {tag} t={t:.3f}: a+k^2 off")
    return {"max_trace_drift": worst_const,
            "max_coefficient_error": worst_abc}, failures


def _crit_embedded_rotational():
    failures = []
    details = {}
    cases = [("II", const_hsc_profile("II", -1.0, 0.7, 2.8), 11),
             ("III", const_hsc_profile("III", -1.0, 3.0, 5.0), 13)]
    for tag, profile, seed in cases:
        rep = embed_and_verify(profile, n=2, count=6, seed=seed)
        details[f"coefficient_delta_{tag}"] = rep.max_coefficient_delta
        details[f"k_delta_{tag}"] = rep.max_k_delta
        details[f"min_eigenvalue_{tag}"] = rep.min_eigenvalue
        details[f"kahler_defect_{tag}"] = rep.max_kahler_defect
        if rep.max_coefficient_delta > 1e-4 or rep.max_k_delta > 1e-4:
            failures.append(f"type {tag}: fitted vs closed delta "
                            f"{rep.max_coefficient_delta:.3e}")
        if rep.min_eigenvalue <= 0:
            failures.append(f"type {tag}: metric not positive definite "
                            f"({rep.min_eigenvalue:.3e})")
        if rep.max_kahler_defect > 1e-6:
            failures.append(f"type {tag}: closedness defect "
                            f"{rep.max_kahler_defect:.3e}")
    return details, failures


def _crit_numerical_hygiene():
    space = AmbientSpace(2, "lorentz")
    family = LogFamily(-1.0, 1.0)
    metric = potential_metric(space, family)
    pts = radial_points(space, 5, 1.3, 2.8, seed=21, family=family)
    failures = []
    worst_rel = worst_sym = worst_bia = 0.0
    for x in pts:
        bd = curvature_bundle(metric, x, jets="dual")
        bf = curvature_bundle(metric, x, jets="fd")
        scale = max(1.0, bd.R.scale())
        rel = float(np.max(np.abs(bd.R.a - bf.R.a))) / scale
        sym = bd.R.curvature_symmetry_defect() / scale
        bia = bd.R.first_bianchi_defect() / scale
        worst_rel = max(worst_rel, rel)
        worst_sym = max(worst_sym, sym)
        worst_bia = max(worst_bia, bia)
        if rel > 1e-6:
            failures.append(f"dual vs finite-difference drift {rel:.3e}")
        if sym > 1e-9 or bia > 1e-9:
            failures.append(f"algebraic identity defect {max(sym, bia):.3e}")
    return {"max_path_drift": worst_rel, "max_symmetry_defect": worst_sym,
            "max_bianchi_defect": worst_bia}, failures


CRITERIA = {
    1: ("flat-baselines", 1.0, _crit_flat_baselines),
    2: ("disc-model", 10.0, _crit_disc_model),
    3: ("negative-class-potentials", 30.0, _crit_negative_class),
    4: ("definite-potentials", 10.0, _crit_definite_class),
    5: ("radial-derivative-law", 5.0, _crit_radial_law),
    6: ("bochner-equivalence", 5.0, _crit_bochner_equivalence),
    7: ("hypersphere-structures", 20.0, _crit_hypersphere),
    8: ("deformed-sphere-family", 10.0, _crit_deformed_family),
    9: ("meridian-identities", 5.0, _crit_meridian_identities),
    10: ("embedded-rotational", 60.0, _crit_embedded_rotational),
    11: ("numerical-hygiene", 10.0, _crit_numerical_hygiene),
}

SUITES = {
    "all": tuple(sorted(CRITERIA)),
    "bochner": (6, 9),
}


def run_criterion(number: int) -> CriterionResult:
    name, budget, fn = CRITERIA[number]
    start = time.perf_counter()
    details, failures = fn()
    elapsed = time.perf_counter() - start
    if elapsed >= budget:
        failures = list(failures) + [
            f"runtime {elapsed:.2f}s exceeded the {budget:.0f}s budget"]
    return CriterionResult(number=number, name=name,
                           passed=not failures, elapsed=elapsed,
                           budget=budget,
                           details={k: details[k] for k in sorted(details)},
                           failures=tuple(failures))


def run_suite(suite: str = "all") -> list[CriterionResult]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from "
                         f"{sorted(SUITES)}")
    return [run_criterion(k) for k in SUITES[suite]]
