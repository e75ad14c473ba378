"""Seeded experiment drivers: component scans and randomized isomorphism tests."""
from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass

from .cartan import CartanSpec, dominant_weights_up_to, parse_cartan, weyl_dim
from .core import DualElem, dual
from .graph import BudgetExceeded, canonical_form, explore
from .monomial import (ORIGINAL, CMatrix, Monomial, MonomialCrystal, MonomialRule, all_cmatrices,
                       good_monomial_violation, hw_monomial, psi_map, shift_map)
from .verify import (FAIL, INCONCLUSIVE, PASS, CheckReport, check_component_is_Blam, check_crystal_axioms,
                     check_semi_normal)

DEFAULT_SEED = 20240601

SCAN_COLUMNS = ["cartan", "rule", "c", "lam", "size", "oracle_size", "verdict", "structural",
                "good_violation", "truncated", "certificate"]


def random_monomial(spec: CartanSpec, rng: random.Random, window=(-4, 4), max_terms: int = 4,
                    max_exp: int = 2) -> Monomial:
    exps = {}
    for _ in range(rng.randint(0, max_terms)):
        key = (rng.choice(spec.labels), rng.randint(*window))
        exps[key] = rng.choice([k for k in range(-max_exp, max_exp + 1) if k])
    return Monomial(exps)


def certificate_digest(cert: bytes) -> str:
    return hashlib.sha256(cert).hexdigest()[:16]


def scan_component(spec: CartanSpec, rule: MonomialRule, lam, depth=None, budget=None):
    """Explore the component of ``prod_i Y_i(0)^{lam_i}`` and check it; returns ``(row, graph)``."""
    B = MonomialCrystal(spec, rule)
    seed = hw_monomial(spec, lam)
    row = {"cartan": spec.name or str(spec), "rule": rule.tag, "c": "" if rule.c is None else str(rule.c),
           "lam": ",".join(map(str, lam))}
    try:
        G = explore(B, [seed], depth=depth if not spec.is_finite else None, budget=budget)
    except BudgetExceeded as exc:
        row.update(size=len(exc.graph), oracle_size="", verdict=INCONCLUSIVE, structural="",
                   good_violation="", truncated=True, certificate="")
        return row, exc.graph
    rep = check_component_is_Blam(G, spec, lam)
    structural = FAIL if any(r.verdict == FAIL for r in rep.subreports[:2]) else PASS
    # the sign pattern is only forbidden for the original rule
    viol = good_monomial_violation(G) if rule.tag == "original" else None
    row.update(
        size=len(G),
        oracle_size=weyl_dim(spec, lam) if spec.is_finite else "",
        verdict=rep.verdict,
        structural=structural,
        good_violation=("n/a" if rule.tag != "original" else
                        "NONE" if viol is None else f"{viol[0]}|{viol[1]}|{viol[2]}"),
        truncated=G.truncated,
        certificate=certificate_digest(canonical_form(G, seed)),
    )
    return row, G


def scan_conjecture(types, bound: int = 2, rule: str = "original", c_lo: int = 0, c_hi: int = 1,
                    c_total: int = 1, depth: int = 5, budget=None, weights=None):
    """Rows for every type, dominant weight with pairings ``<= bound``, and rule.

    For ``rule="variant"`` every c with entries in ``[c_lo, c_hi]`` and
    ``c_ij + c_ji = c_total`` is used.  Returns ``(rows, graphs)`` where
    ``graphs`` maps the index of each FAIL row to its graph.
    """
    rows, failed = [], {}
    for t in types:
        spec = parse_cartan(t) if isinstance(t, str) else t
        if rule == "original":
            rules = [ORIGINAL]
        else:
            rules = [MonomialRule.variant(c) for c in all_cmatrices(spec, c_lo, c_hi, c_total)]
        lams = weights if weights is not None else [l for l in dominant_weights_up_to(spec, bound) if any(l)]
        for lam in lams:
            for r in rules:
                row, G = scan_component(spec, r, lam, depth=depth, budget=budget)
                if row["verdict"] == FAIL:
                    failed[len(rows)] = G
                rows.append(row)
    return rows, failed


def c_independence(rows) -> dict:
    """``(cartan, lam) -> True`` iff all variant rows share one certificate."""
    groups = {}
    for r in rows:
        if r["rule"] == "variant" and r["certificate"]:
            groups.setdefault((r["cartan"], r["lam"]), set()).add(r["certificate"])
    return {k: len(v) == 1 for k, v in groups.items()}


def summarize(rows) -> str:
    by = {}
    for r in rows:
        by.setdefault(r["verdict"], 0)
        by[r["verdict"]] += 1
    viol = sum(1 for r in rows if r["good_violation"] not in ("NONE", "n/a", ""))
    parts = [f"{len(rows)} components"] + [f"{k}: {v}" for k, v in sorted(by.items())]
    parts.append(f"good-monomial violations: {viol}")
    return ", ".join(parts)


# ---------------------------------------------------------------------------
# Randomized isomorphism tests

def psi_duality_test(spec: CartanSpec, c: CMatrix, count: int = 500, seed: int = DEFAULT_SEED) -> CheckReport:
    """``psi`` from the dual of ``M_c`` to ``M_{c^T}`` commutes with all five maps."""
    rng = random.Random(seed)
    src = dual(MonomialCrystal(spec, MonomialRule.variant(c)))
    tgt = MonomialCrystal(spec, MonomialRule.variant(c.transpose()))
    wit = []
    for _ in range(count):
        M = random_monomial(spec, rng)
        b, y = DualElem(M), psi_map(M)
        if src.wt(b) != tgt.wt(y):
            wit.append({"monomial": str(M), "detail": "wt"})
        for i in spec.labels:
            if src.eps(i, b) != tgt.eps(i, y) or src.phi(i, b) != tgt.phi(i, y):
                wit.append({"monomial": str(M), "i": i, "detail": "eps/phi"})
            for op in ("e", "f"):
                r = getattr(src, op)(i, b)
                img = None if r is None else psi_map(r.b)
                if img != getattr(tgt, op)(i, y):
                    wit.append({"monomial": str(M), "i": i, "detail": f"{op}_{i}"})
    stats = {"samples": count, "seed": seed, "c": str(c)}
    return CheckReport("psi_duality", FAIL if wit else PASS, wit, stats)


def shift_test(spec: CartanSpec, c: CMatrix, count: int = 500, seed: int = DEFAULT_SEED,
               max_shift: int = 3) -> CheckReport:
    """``Y_i(n) -> Y_i(n + m_i)`` intertwines ``M_c`` and ``M_{c'}``, random ``m``."""
    rng = random.Random(seed)
    src = MonomialCrystal(spec, MonomialRule.variant(c))
    wit = []
    for _ in range(count):
        m = {i: rng.randint(-max_shift, max_shift) for i in spec.labels}
        tgt = MonomialCrystal(spec, MonomialRule.variant(c.shifted(m)))
        M = random_monomial(spec, rng)
        y = shift_map(M, m)
        if src.wt(M) != tgt.wt(y):
            wit.append({"monomial": str(M), "m": m, "detail": "wt"})
        for i in spec.labels:
            if src.eps(i, M) != tgt.eps(i, y) or src.phi(i, M) != tgt.phi(i, y):
                wit.append({"monomial": str(M), "m": m, "i": i, "detail": "eps/phi"})
            for op in ("e", "f"):
                r = getattr(src, op)(i, M)
                img = None if r is None else shift_map(r, m)
                if img != getattr(tgt, op)(i, y):
                    wit.append({"monomial": str(M), "m": m, "i": i, "detail": f"{op}_{i}"})
    stats = {"samples": count, "seed": seed, "c": str(c)}
    return CheckReport("shift_isomorphism", FAIL if wit else PASS, wit, stats)


def semi_normal_run(spec: CartanSpec, rule: MonomialRule, count: int = 1000, seed: int = DEFAULT_SEED,
                    window: int = 8) -> CheckReport:
    """Random monomials: strings of length ``<= window`` match ``eps``/``phi``
    exactly, and ``e_i f_i = f_i e_i = id`` along them."""
    rng = random.Random(seed)
    B = MonomialCrystal(spec, rule)
    wit = []
    strings = 0
    for _ in range(count):
        M = random_monomial(spec, rng)
        for i in spec.labels:
            for op, back, stat in (("f", "e", B.phi), ("e", "f", B.eps)):
                go, ret = getattr(B, op), getattr(B, back)
                n = stat(i, M)
                if n > window:
                    continue
                strings += 1
                x = M
                for step in range(n):
                    y = go(i, x)
                    if y is None:
                        wit.append({"monomial": str(M), "i": i, "detail": f"{op}-string stops after {step} < {n}"})
                        break
                    if ret(i, y) != x:
                        wit.append({"monomial": str(x), "i": i, "detail": f"{back}_{i} {op}_{i} != id"})
                        break
                    x = y
                else:
                    if go(i, x) is not None:
                        wit.append({"monomial": str(M), "i": i, "detail": f"{op}-string longer than {n}"})
    stats = {"samples": count, "strings": strings, "seed": seed, "window": window}
    return CheckReport("semi_normal_random", FAIL if wit else PASS, wit, stats)


@dataclass
class AffineRun:
    graph: object
    axioms: CheckReport
    semi_normal: CheckReport
    blam: CheckReport


def affine_relaxation_run(spec_string: str = "A1~", c: CMatrix | None = None, seed_monomial=None,
                          depth: int = 6) -> AffineRun:
    """Depth-bounded component of ``Y_0(0)`` in a (possibly relaxed) ``M_c``."""
    spec = parse_cartan(spec_string)
    if c is None:
        a, b = spec.labels[:2]
        c = CMatrix({(a, b): 1, (b, a): 1}, relaxed=True)
    seed = seed_monomial or Monomial.Y(spec.labels[0], 0)
    G = explore(MonomialCrystal(spec, MonomialRule.variant(c)), [seed], depth=depth)
    return AffineRun(G, check_crystal_axioms(G), check_semi_normal(G), check_component_is_Blam(G, spec))
