"""Enumeration of the irreducible systems on the star with commuting pairs.

Pair indices in partitions and case ids are 0-based.  Case ids name single
representatives:

``xi_zero``      all R_k = 0 when xi(tau) = 0
``zero``         all R_k = 0 when xi(tau) > 0
``e<i>``         R_i = I for i in M_e
``l<a>``         R_a = I for a in M_l
``l<a>+<b>``     R_a = R_b = I for the two indices of M_l
``family``       the two-projection pair at angle phi on C^2
``family_edge``  the same pair at phi = phi(tau)
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError, ValidationError
from .g_construction import construct
from .irreducibility import family_irreducible_Q, system_irreducible
from .numerics import DEFAULT_TOL, Tolerance
from .star_b import (ProjectorFamily, StarParams, assemble, kernel_dim_formula,
                     nonneg_criterion)
from .subspace_system import GeneralizedDimension, generalized_dimension, verify_relations

EQ_TOL = 1e-12
RELATION_TOL = 1e-8

REGIMES = ("empty", "xi_zero_unique", "finite", "tame_family", "wild")


@dataclass(frozen=True)
class RawAngles:
    m: int
    r: int
    tau_pairs: tuple
    tau_rays: tuple

    def __post_init__(self):
        pairs = tuple((float(a), float(b)) for a, b in self.tau_pairs)
        rays = tuple(float(t) for t in self.tau_rays)
        if len(pairs) != self.m or len(rays) != self.r:
            raise ParameterError("pair/ray counts do not match m and r")
        if any(not 0 < t < 1 for t in (*rays, *(x for p in pairs for x in p))):
            raise ParameterError("all cosines must lie in (0, 1)")
        object.__setattr__(self, "tau_pairs", pairs)
        object.__setattr__(self, "tau_rays", rays)


def normalize(raw: RawAngles, gap_tol: float = EQ_TOL) -> StarParams:
    """Demote commuting pairs with unequal angles to two orthogonal rays.

    Commuting subspaces at different angles to the hub are orthogonal, so
    such a pair carries no commutation relation of its own.
    """
    kept, demoted = [], []
    for a, b in raw.tau_pairs:
        if abs(a - b) > gap_tol:
            demoted.extend((a, b))
        else:
            kept.append(0.5 * (a + b))
    rays = list(raw.tau_rays) + demoted
    return StarParams(len(kept), len(rays), tuple(kept + rays))


@dataclass(frozen=True)
class IndexPartition:
    M_l: tuple
    M_e: tuple
    M_g: tuple
    boundary: bool = False

    @property
    def order(self) -> tuple:
        """Pair indices arranged so that M_l < M_e < M_g."""
        return self.M_l + self.M_e + self.M_g

    def to_json(self) -> dict:
        return {"M_l": list(self.M_l), "M_e": list(self.M_e), "M_g": list(self.M_g)}


def _cmp(a, b, eq_tol):
    d = a - b
    return 0 if abs(d) <= eq_tol else (1 if d > 0 else -1)


def partition(params: StarParams, eq_tol: float = EQ_TOL) -> IndexPartition:
    xi = params.xi
    if xi <= eq_tol:
        raise ParameterError("the index partition is only defined for xi(tau) > 0")
    sets = {-1: [], 0: [], 1: []}
    boundary = False
    for k in range(params.m):
        c = _cmp(params.tau[k] ** 2, xi, eq_tol)
        sets[c].append(k)
        boundary |= c == 0
    return IndexPartition(tuple(sets[-1]), tuple(sets[0]), tuple(sets[1]), boundary)


@dataclass(frozen=True)
class Item:
    count: object                 # int, or "family"
    gen_dim: tuple                # (dim H, dim H_k)
    case_ids: tuple
    phi_range: tuple | None = None

    @property
    def dim0(self) -> int:
        return self.gen_dim[1]

    def to_json(self) -> dict:
        out = {"count": self.count, "gen_dim": list(self.gen_dim), "case_ids": list(self.case_ids)}
        if self.phi_range is not None:
            out["phi_range"] = list(self.phi_range)
        return out


@dataclass
class ClassificationReport:
    regime: str
    xi: float
    case: str
    items: list = field(default_factory=list)
    partition: IndexPartition | None = None
    phi_tau: float | None = None
    eta_tau: float | None = None
    boundary: bool = False
    witness: str | None = None

    def case_ids(self) -> list:
        return [c for item in self.items for c in item.case_ids]

    def item_for(self, case_id: str) -> Item:
        for item in self.items:
            if case_id in item.case_ids:
                return item
        raise ValidationError(f"case {case_id!r} is not part of this classification")

    def summary(self) -> str:
        return items_summary(self.items)

    def to_json(self) -> dict:
        out = {"regime": self.regime, "xi": self.xi, "case": self.case,
               "partition": self.partition.to_json() if self.partition else None,
               "items": [it.to_json() for it in self.items], "boundary": self.boundary}
        if self.phi_tau is not None:
            out["phi_tau"] = self.phi_tau
        if self.eta_tau is not None:
            out["eta_tau"] = self.eta_tau
        if self.witness:
            out["witness"] = self.witness
        return out


def _gd(h, d):
    return (h, d)


def classify(params: StarParams, eq_tol: float = EQ_TOL) -> ClassificationReport:
    m, r, xi = params.m, params.r, params.xi
    sign = _cmp(xi, 0.0, eq_tol)
    if sign < 0:
        return ClassificationReport("empty", xi, "xi<0")
    if sign == 0:
        return ClassificationReport("xi_zero_unique", xi, "xi=0",
                                    [Item(1, _gd(m + r, 1), ("xi_zero",))], boundary=True)

    part = partition(params, eq_tol)
    boundary = part.boundary or abs(xi) <= 10 * eq_tol
    base = Item(len(part.M_e) + 1, _gd(m + r + 1, 1), ("zero",) + tuple(f"e{i}" for i in part.M_e))
    n_l = len(part.M_l)
    if n_l >= 3:
        return ClassificationReport("wild", xi, "wild", [], part, boundary=boundary,
                                    witness="irreducibility.wild_embed")
    if n_l == 0:
        return ClassificationReport("finite", xi, "1", [base], part, boundary=boundary)
    if n_l == 1:
        (a,) = part.M_l
        items = [base, Item(1, _gd(m + r + 2, 1), (f"l{a}",))]
        return ClassificationReport("finite", xi, "2", items, part, boundary=boundary)

    a, b = part.M_l
    ta2, tb2 = params.tau[a] ** 2, params.tau[b] ** 2
    eta = (xi - ta2) * (xi - tb2) / (ta2 * tb2)
    family = _gd(2 * m + 2 * r + 4, 2)
    singles = (f"l{a}", f"l{b}")
    c = _cmp(ta2 + tb2, xi, eq_tol)
    boundary |= c == 0
    if c > 0:
        phi = math.acos(math.sqrt(eta))
        items = [base, Item(2, _gd(m + r + 2, 1), singles),
                 Item("family", family, ("family",), (phi, math.pi / 2)),
                 Item(1, _gd(2 * m + 2 * r + 3, 2), ("family_edge",), (phi, phi))]
        return ClassificationReport("tame_family", xi, "3", items, part, phi, eta, boundary)
    full = Item("family", family, ("family",), (0.0, math.pi / 2))
    if c == 0:
        items = [base, Item(3, _gd(m + r + 2, 1), singles + (f"l{a}+{b}",)), full]
        return ClassificationReport("tame_family", xi, "4", items, part, None, eta, boundary)
    items = [base, Item(2, _gd(m + r + 2, 1), singles),
             Item(1, _gd(m + r + 3, 1), (f"l{a}+{b}",)), full]
    return ClassificationReport("tame_family", xi, "5", items, part, None, eta, boundary)


def two_projections(phi: float):
    """The irreducible pair of rank-one projections on C^2 at angle phi."""
    c, s = math.cos(phi), math.sin(phi)
    return np.diag([1.0, 0.0]), np.array([[c * c, c * s], [c * s, s * s]])


def representative(params: StarParams, case_id: str, phi: float | None = None,
                   eq_tol: float = EQ_TOL, tol: Tolerance = DEFAULT_TOL):
    """Projector family for one enumerated system and its expected generalized dimension."""
    report = classify(params, eq_tol)
    item = report.item_for(case_id)
    m = params.m
    if item.dim0 == 1:
        R = [np.zeros((1, 1)) for _ in range(m)]
        match = re.fullmatch(r"[el](\d+)(?:\+(\d+))?", case_id)
        if match:
            for g in match.groups():
                if g is not None:
                    R[int(g)] = np.eye(1)
        fam = ProjectorFamily.from_complements(1, R)
    else:
        lo, hi = item.phi_range
        if case_id == "family_edge":
            if phi is not None and abs(phi - lo) > 1e-12:
                raise ValidationError(f"family_edge is fixed at phi(tau) = {lo}")
            phi = lo
        elif phi is None:
            phi = 0.5 * (lo + hi)
        elif not lo < phi < hi:
            raise ValidationError(f"phi = {phi} outside the admissible interval ({lo}, {hi})")
        a, b = report.partition.M_l
        R = [np.zeros((2, 2)) for _ in range(m)]
        R[a], R[b] = two_projections(phi)
        fam = ProjectorFamily.from_complements(2, R)
    dim_h = params.n_blocks * fam.dim0 - kernel_dim_formula(params, fam, tol)
    return fam, GeneralizedDimension(dim_h, (fam.dim0,) * params.n_blocks)


@dataclass
class VerificationReport:
    failures: list
    gen_dim: GeneralizedDimension | None = None
    max_residual: float | None = None
    commutant_family_irreducible: bool | None = None
    system_irreducible: bool | None = None

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"ok": self.ok, "failures": self.failures,
                "gen_dim": list(self.gen_dim.collapsed()) if self.gen_dim else None,
                "max_residual": self.max_residual,
                "family_irreducible": self.commutant_family_irreducible,
                "system_irreducible": self.system_irreducible}


def verify_representative(params: StarParams, fam: ProjectorFamily,
                          expected: GeneralizedDimension | None,
                          tol: Tolerance = DEFAULT_TOL,
                          relation_tol: float = RELATION_TOL) -> VerificationReport:
    if not nonneg_criterion(params, fam, tol):
        return VerificationReport(
            ["PSD criterion violated: sum tau_k^2 R_k <= xi(tau) I fails, so B(Q) is not positive"])
    failures = []
    S = construct(assemble(params, fam), tol)
    rel = verify_relations(S, params, tol, threshold=relation_tol)
    for v in rel.violations:
        failures.append(f"{v.relation} relation fails for subspaces ({v.i}, {v.j}): residual {v.residual:.3e}")
    fam_irr = family_irreducible_Q(fam, tol)
    sys_irr = system_irreducible(S, tol)
    if not fam_irr:
        failures.append("projector family is reducible")
    if not sys_irr:
        failures.append("constructed system is reducible")
    gd = generalized_dimension(S)
    if expected is not None and gd != expected:
        failures.append(f"dimension mismatch: got {gd}, expected {expected}")
    return VerificationReport(failures, gd, rel.max_residual, fam_irr, sys_irr)


# -- paper-example family and sweeps -----------------------------------------

def paper_example(tau0: float) -> StarParams:
    """m = 3, r = 1 with tau = (t, sqrt(2) t, 2t, 3t); xi = 1 - 16 t^2."""
    return StarParams(3, 1, (tau0, math.sqrt(2) * tau0, 2 * tau0, 3 * tau0))


FAMILIES = {"paper-example": paper_example}

SWEEP_COLUMNS = ("tau0", "xi", "regime", "case", "n_xi_zero", "n_base", "n_plus1", "n_plus2",
                 "family", "n_edge", "phi_lo", "phi_hi", "phi_tau", "boundary", "items")


def items_summary(items) -> str:
    parts = []
    for it in items:
        h, d = it.gen_dim
        label = "family" if it.count == "family" else f"{it.count}x"
        parts.append(f"{label}({h};{d})")
    return " ".join(parts)


def parse_items_summary(text: str) -> list:
    """Inverse of :func:`items_summary`: list of (count, (dim H, dim H_k))."""
    out = []
    for tok in text.split():
        mt = re.fullmatch(r"(family|\d+x)\((\d+);(\d+)\)", tok)
        if not mt:
            raise ValidationError(f"bad item token {tok!r}")
        count = "family" if mt.group(1) == "family" else int(mt.group(1)[:-1])
        out.append((count, (int(mt.group(2)), int(mt.group(3)))))
    return out


def sweep_row(tau0: float, params: StarParams, report: ClassificationReport) -> dict:
    m, r = params.m, params.r
    counts = {"n_xi_zero": (m + r, 1), "n_base": (m + r + 1, 1), "n_plus1": (m + r + 2, 1),
              "n_plus2": (m + r + 3, 1), "n_edge": (2 * m + 2 * r + 3, 2)}
    row = {"tau0": tau0, "xi": report.xi, "regime": report.regime, "case": report.case}
    for col, gd in counts.items():
        row[col] = sum(it.count for it in report.items if it.count != "family" and it.gen_dim == gd)
    fam = [it for it in report.items if it.count == "family"]
    row["family"] = len(fam)
    row["phi_lo"] = fam[0].phi_range[0] if fam else ""
    row["phi_hi"] = fam[0].phi_range[1] if fam else ""
    row["phi_tau"] = report.phi_tau if report.phi_tau is not None else ""
    row["boundary"] = int(report.boundary)
    row["items"] = report.summary()
    return row


def sweep(family: str, tau0_min: float, tau0_max: float, steps: int,
          eq_tol: float = EQ_TOL) -> list:
    if family not in FAMILIES:
        raise ValidationError(f"unknown family {family!r}; known: {sorted(FAMILIES)}")
    if not 0 < tau0_min <= tau0_max < 1 or steps < 1:
        raise ValidationError("need 0 < min <= max < 1 and steps >= 1")
    if steps > 1 and tau0_min == tau0_max:
        raise ValidationError("min must be below max when steps > 1")
    values = np.linspace(tau0_min, tau0_max, steps) if steps > 1 else np.array([tau0_min])
    rows = []
    for t in values:
        params = FAMILIES[family](float(t))
        rows.append(sweep_row(float(t), params, classify(params, eq_tol)))
    return rows
