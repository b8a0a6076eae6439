"""JSON encodings for every wire type.

Complex numbers serialize as [re, im] pairs, never strings; polynomials as
ascending coefficient arrays. Dumps are key-sorted with fixed separators so
identical inputs produce byte-identical reports.
"""

from __future__ import annotations

import json

import numpy as np

from .cnu import CnuReport, ConstantScan, GammaData, ViolationCertificate
from .counterexample import CounterexampleReport
from .errors import ValidationError
from .gamma import GammaMap, GammaPoint
from .pick import NPData
from .ratfun import BlaschkeProduct, Poly, RationalFn
from .spectral import SpectralNPProblem


def cplx(z):
    z = complex(z)
    return [z.real, z.imag]


def as_complex(v):
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(v[0], v[1])
    if isinstance(v, (int, float)):
        return complex(v)
    raise ValidationError(f"expected [re, im], got {v!r}")


def poly_to_json(p):
    return [cplx(c) for c in p.coeffs]


def poly_from_json(v):
    return Poly([as_complex(c) for c in v])


def rational_to_json(f):
    return {"num": poly_to_json(f.num), "den": poly_to_json(f.den)}


def rational_from_json(v):
    return RationalFn(poly_from_json(v["num"]), poly_from_json(v["den"]))


def blaschke_to_json(b):
    return {"phase": b.phase, "zeros": [cplx(z) for z in b.zeros]}


def blaschke_from_json(v):
    return BlaschkeProduct(v["phase"], [as_complex(z) for z in v["zeros"]])


def point_to_json(t):
    return {"s": cplx(t.s), "p": cplx(t.p)}


def point_from_json(v):
    return GammaPoint(as_complex(v["s"]), as_complex(v["p"]))


def map_to_json(h):
    return {"s": rational_to_json(h.s), "p": rational_to_json(h.p)}


def map_from_json(v):
    return GammaMap(rational_from_json(v["s"]), rational_from_json(v["p"]))


def np_data_to_json(d):
    return {"nodes": [cplx(z) for z in d.nodes],
            "targets": [cplx(w) for w in d.targets]}


def np_data_from_json(v):
    return NPData(tuple(as_complex(z) for z in v["nodes"]),
                  tuple(as_complex(w) for w in v["targets"]))


def gamma_data_to_json(d):
    return {"nodes": [cplx(z) for z in d.nodes],
            "targets": [point_to_json(t) for t in d.targets],
            "requireOpen": d.require_open}


def gamma_data_from_json(v):
    return GammaData(tuple(as_complex(z) for z in v["nodes"]),
                     tuple(point_from_json(t) for t in v["targets"]),
                     require_open=bool(v.get("requireOpen", True)))


def spectral_problem_from_json(v):
    mats = [[[as_complex(x) for x in row] for row in m] for m in v["matrices"]]
    return SpectralNPProblem(tuple(as_complex(z) for z in v["nodes"]),
                             tuple(np.array(m, dtype=complex) for m in mats))


def spectral_problem_to_json(prob):
    return {"nodes": [cplx(z) for z in prob.nodes],
            "matrices": [[[cplx(x) for x in row] for row in m]
                         for m in prob.matrices]}


def membership_to_json(m):
    return {"region": m.region(), "openG": m.open_g, "closedGamma": m.closed_gamma,
            "boundaryTopological": m.boundary,
            "distinguishedBoundary": m.distinguished_boundary,
            "outside": m.outside, "defect": m.defect,
            "sModulus": m.s_modulus, "pModulus": m.p_modulus}


def np_status_to_json(st):
    return {"kind": st.kind, "minEigenvalue": st.min_eigenvalue,
            "rank": st.rank, "scale": st.scale}


def inner_check_to_json(c):
    return {"ok": c.ok, "maxPDeviation": c.max_p_deviation,
            "maxSModulus": c.max_s_modulus,
            "maxSymmetryError": c.max_symmetry_error,
            "minPoleModulus": c.min_pole_modulus, "reason": c.reason}


def violation_to_json(v):
    return {"upsilon": blaschke_to_json(v.upsilon), "eigenvalue": v.eigenvalue,
            "eigenvector": [cplx(x) for x in v.eigenvector]}


def cnu_report_to_json(r, verbose=False):
    out = {"nu": r.nu, "status": r.status, "supNorm": r.sup_norm,
           "evaluations": r.evaluations, "evidenceGrade": r.evidence_grade}
    if r.witness_m is not None:
        out["witnessM"] = blaschke_to_json(r.witness_m)
    if r.witness_q is not None:
        out["witnessQ"] = blaschke_to_json(r.witness_q)
    if r.violation is not None:
        out["violation"] = violation_to_json(r.violation)
    if verbose:
        out["searchLog"] = r.search_log
    return out


def constant_scan_to_json(s):
    return {"minEigenvalue": s.min_eigenvalue, "argminTheta": s.argmin_theta,
            "maxXnorm": s.max_xnorm, "argmaxTheta": s.argmax_theta,
            "scale": s.scale, "grid": s.grid}


def cell_to_json(c):
    out = {"nu": c.nu, "k": c.k, "inClass": c.in_class, "exact": c.exact,
           "note": c.note}
    if c.witness_m is not None:
        out["witnessM"] = blaschke_to_json(c.witness_m)
    if c.q is not None:
        out["q"] = blaschke_to_json(c.q)
    return out


def eclass_report_to_json(rep):
    return {"dp": rep.dp, "nuMax": rep.nu_max, "kMax": rep.k_max,
            "cells": [cell_to_json(rep.cells[key]) for key in sorted(rep.cells)],
            "superficial": cplx(rep.superficial) if rep.superficial is not None else None,
            "geodesic": rep.geodesic,
            "kExtremal": [{"k": c.k, "nu": c.nu,
                           "witnessM": blaschke_to_json(c.witness_m),
                           "qDegree": c.q_degree} for c in rep.k_extremal],
            "inconsistencies": list(rep.inconsistencies)}


def counterexample_to_json(rep, verbose=False):
    if isinstance(rep.weaker_evidence, ConstantScan):
        weaker = constant_scan_to_json(rep.weaker_evidence)
    else:
        weaker = cnu_report_to_json(rep.weaker_evidence, verbose)
    return {"nu": rep.nu, "r": rep.r, "seed": rep.seed, "eps": rep.eps,
            "base": gamma_data_to_json(rep.base),
            "perturbed": gamma_data_to_json(rep.perturbed),
            "m": blaschke_to_json(rep.m), "q": blaschke_to_json(rep.q),
            "violation": violation_to_json(rep.violation),
            "weakerEvidence": weaker, "evidenceGrade": rep.evidence_grade,
            "trace": rep.trace}


def counterexample_from_json(v):
    # round-trips the fields verify() needs
    weaker = v["weakerEvidence"]
    if "minEigenvalue" in weaker:
        weaker_obj = ConstantScan(weaker["minEigenvalue"], weaker["argminTheta"],
                                  weaker["maxXnorm"], weaker["argmaxTheta"],
                                  weaker["scale"], weaker["grid"])
    else:
        weaker_obj = CnuReport(nu=weaker["nu"], status=weaker["status"],
                               sup_norm=weaker["supNorm"],
                               evaluations=weaker["evaluations"],
                               evidence_grade=weaker["evidenceGrade"])
    viol = ViolationCertificate(
        upsilon=blaschke_from_json(v["violation"]["upsilon"]),
        eigenvalue=v["violation"]["eigenvalue"],
        eigenvector=tuple(as_complex(x) for x in v["violation"]["eigenvector"]))
    return CounterexampleReport(
        nu=int(v["nu"]), r=float(v["r"]), seed=int(v["seed"]),
        base=gamma_data_from_json(v["base"]),
        perturbed=gamma_data_from_json(v["perturbed"]), eps=float(v["eps"]),
        m=blaschke_from_json(v["m"]), q=blaschke_from_json(v["q"]),
        violation=viol, weaker_evidence=weaker_obj,
        evidence_grade=v["evidenceGrade"], trace=dict(v.get("trace", {})))


def dumps(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"),
                      allow_nan=True)
