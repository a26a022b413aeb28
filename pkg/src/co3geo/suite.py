"""Orchestration of the verification suites and the JSON report.

Each suite is a list of named checks with an expected and an actual
value; a check passes when they agree.  Suites share one lazily built
pipeline (context -> Sylow model -> candidates -> normalizer table ->
orbit/collapse/fixed-point analyses), so running `all` computes each
stage exactly once.  Expensive derived data (the Sylow subgroup, the
normalizer generators) is cached on disk keyed by the generator file
digest and the seed.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field

import numpy as np

from . import gf2
from .cache import Cache, NullCache, file_digest
from .groups import PermGroup
from .permutation import parse_generator_file
from .co3.context import (CENTRAL_CENTRALIZER, CENTRAL_CLASS_SIZE, Co3Context,
                          GROUP_ORDER, NONCENTRAL_CENTRALIZER,
                          NONCENTRAL_CLASS_SIZE)
from .co3.euler import EXPECTED_EULER, euler_characteristic
from .co3.facts import classify_center, cone_facts, normality_pairing
from .co3.fixedpoint import delta_fixed_z
from .co3.geometry import geometry_axioms
from .co3.local import replay_collapse
from .co3.model import (RADICAL_CENTER_POINTS, RADICAL_NAMES, RADICAL_ORDERS,
                        cone_quadrangle, instantiate_radicals)
from .co3.orbits import table2_orbits
from .co3.sylow import SylowModel, climb_sylow2
from .co3.verify import (EXPECTED_NORMALIZERS, EXPECTED_STABILIZERS,
                         verify_table1)

SUITE_NAMES = ["calibrate", "sylow", "prop43", "table1", "table2",
               "axioms", "euler", "delta-fixed"]


@dataclass
class CheckResult:
    check_id: str
    paper_anchor: str
    status: str                 # pass / fail / skipped / unverified
    expected: object
    actual: object
    runtime_ms: int

    def as_dict(self) -> dict:
        return {
            "check_id": self.check_id,
            "paper_anchor": self.paper_anchor,
            "status": self.status,
            "expected": _jsonable(self.expected),
            "actual": _jsonable(self.actual),
            "runtime_ms": self.runtime_ms,
        }


def _jsonable(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, (frozenset, set)):
        return sorted(_jsonable(v) for v in x)
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    return x


@dataclass
class VerificationReport:
    entries: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    @property
    def failed(self) -> list:
        return [e for e in self.entries if e.status == "fail"]

    @property
    def exit_code(self) -> int:
        return 1 if self.failed else 0

    def as_dict(self) -> dict:
        return {"meta": _jsonable(self.meta),
                "checks": [e.as_dict() for e in self.entries]}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True) + "\n"

    def summary_lines(self) -> list:
        lines = []
        for e in self.entries:
            mark = {"pass": "ok", "fail": "FAIL", "skipped": "skip",
                    "unverified": "??"}[e.status]
            lines.append(f"[{mark:4s}] {e.check_id}  ({e.runtime_ms} ms)")
            if e.status == "fail":
                lines.append(f"       expected: {_jsonable(e.expected)}")
                lines.append(f"       actual:   {_jsonable(e.actual)}")
        n = len(self.entries)
        bad = len(self.failed)
        lines.append(f"{n - bad}/{n} checks passed")
        return lines


class SuiteError(RuntimeError):
    """Input or resource problem (exit code 2), not a failed check."""


class SuiteRunner:
    def __init__(self, gens_path: str, *, seed: int = 20070403,
                 cache_dir: str | None = None, max_mem_mb: int = 2048,
                 with_noncentral: bool = True):
        if not os.path.exists(gens_path):
            raise SuiteError(f"generator file not found: {gens_path}")
        if max_mem_mb < 512:
            raise SuiteError("memory budget below 512 MB is not supported")
        self.gens_path = gens_path
        self.seed = seed
        self.max_mem_mb = max_mem_mb
        self.with_noncentral = with_noncentral
        if cache_dir:
            self.cache = Cache(cache_dir, file_digest(gens_path), seed)
        else:
            self.cache = NullCache()
        self._memo: dict[str, object] = {}

    # -- pipeline stages, each computed once --------------------------------

    def _get(self, name, build):
        if name not in self._memo:
            self._memo[name] = build()
        return self._memo[name]

    @property
    def ctx(self) -> Co3Context:
        def build():
            try:
                _, gens = parse_generator_file(self.gens_path)
            except (OSError, ValueError) as e:
                raise SuiteError(f"cannot parse generators: {e}") from e
            return Co3Context(gens, seed=self.seed,
                              check_noncentral=self.with_noncentral)
        return self._get("ctx", build)

    @property
    def sylow(self) -> PermGroup:
        def build():
            got = self.cache.get("sylow_gens")
            if got is not None:
                S = PermGroup(list(got["gens"]), self.ctx.degree)
                if S.order() == 1024:
                    return S
            S = climb_sylow2(self.ctx)
            self.cache.put("sylow_gens", gens=np.stack(S.gens))
            return S
        return self._get("sylow", build)

    @property
    def model(self) -> SylowModel:
        return self._get("model", lambda: SylowModel(self.ctx, S=self.sylow))

    @property
    def instances(self) -> dict:
        return self._get("instances", lambda: instantiate_radicals(self.model))

    @property
    def table1(self):
        return self._get("table1", lambda: verify_table1(
            self.ctx, self.model, self.instances, cache=self.cache))

    @property
    def table2(self):
        return self._get("table2", lambda: table2_orbits(
            self.ctx, self.model, self.instances, self.table1))

    @property
    def quadrangle(self):
        return self._get("quadrangle", lambda: cone_quadrangle(self.model))

    # -- the checks ----------------------------------------------------------

    def _run(self, entries, check_id, anchor, expected, fn):
        t0 = time.monotonic()
        try:
            actual = fn()
            status = "pass" if actual == expected else "fail"
        except SuiteError:
            raise
        except Exception as e:          # a crashed check is a failed check
            actual = f"error: {type(e).__name__}: {e}"
            status = "fail"
        ms = int((time.monotonic() - t0) * 1000)
        entries.append(CheckResult(check_id, anchor, status,
                                   expected, actual, ms))

    def suite_calibrate(self, entries):
        run = lambda *a: self._run(entries, *a)
        run("calibrate.group-order", "claim:group-identification",
            GROUP_ORDER, lambda: self.ctx.group.order())
        run("calibrate.central-class", "claim:involution-classes",
            {"size": CENTRAL_CLASS_SIZE, "centralizer": CENTRAL_CENTRALIZER},
            lambda: {"size": self.ctx.class2A.size,
                     "centralizer": self.ctx.centralizer_z.order()})
        if self.with_noncentral:
            run("calibrate.noncentral-class", "claim:involution-classes",
                {"size": NONCENTRAL_CLASS_SIZE,
                 "centralizer": NONCENTRAL_CENTRALIZER},
                lambda: {"size": self.ctx.noncentral_class_size,
                         "centralizer":
                         GROUP_ORDER // self.ctx.noncentral_class_size})
        else:
            entries.append(CheckResult(
                "calibrate.noncentral-class", "claim:involution-classes",
                "skipped", NONCENTRAL_CLASS_SIZE, "disabled by flag", 0))

    def suite_sylow(self, entries):
        run = lambda *a: self._run(entries, *a)
        run("sylow.order", "claim:sylow-2-subgroup",
            1024, lambda: self.sylow.order())
        run("sylow.central-involutions", "claim:sylow-census",
            55, lambda: len(self.model.centrals))
        run("sylow.rank-spectrum", "claim:pure-subgroup-ranks",
            [1, 2, 3, 4], lambda: self.model.rank_spectrum)
        run("sylow.maximal-pure", "claim:maximal-pure-subgroups",
            {"rank4": 3, "rank3": 12},
            lambda: {"rank4": sum(1 for s in self.model.maximal_pure
                                  if len(s) == 15),
                     "rank3": sum(1 for s in self.model.maximal_pure
                                  if len(s) == 7)})
        run("sylow.line-structure", "claim:line-structure-39",
            39, lambda: len(self.model.line_structure))
        run("sylow.quotient-fit", "claim:unitriangular-quotient",
            64, lambda: len(set(self.model.u4_keys.tolist())))

    def suite_prop43(self, entries):
        run = lambda *a: self._run(entries, *a)
        run("prop43.matrix-census", "claim:rank2-squarezero-matrices",
            10, lambda: len(gf2.enumerate_rank2_squarezero()))
        run("prop43.matrix-relations", "claim:unipotent-relations",
            True, lambda: gf2.u4_relations_check()["ok"])
        run("prop43.cone-quadrangle", "claim:cone-point-quadrangle",
            {"lines": 15, "planes": 15, "points": 31,
             "overlap": 15, "overlap_lines": 7},
            lambda: {"lines": len(self.quadrangle.lines),
                     "planes": len(self.quadrangle.planes),
                     "points": len(self.quadrangle.points),
                     "overlap": len(self.quadrangle.overlap),
                     "overlap_lines": self.quadrangle.overlap_line_count})
        run("prop43.lift-cosets", "claim:lift-coset-structure",
            [4] * 10, lambda: [len(c) for c in self.model.lift_cosets])

    def suite_table1(self, entries):
        run = lambda *a: self._run(entries, *a)
        run("table1.orders", "claim:candidate-orders",
            dict(zip(RADICAL_NAMES, RADICAL_ORDERS)),
            lambda: {r.name: r.order for r in self.table1.rows})
        run("table1.center-points", "claim:candidate-centers",
            dict(zip(RADICAL_NAMES, RADICAL_CENTER_POINTS)),
            lambda: {r.name: r.center_involutions for r in self.table1.rows})
        run("table1.normalizers", "claim:candidate-normalizers",
            EXPECTED_NORMALIZERS,
            lambda: {r.name: r.normalizer_order for r in self.table1.rows})
        run("table1.radical-centric", "claim:radical-and-centric",
            {"radical": [True] * 11,
             "centric": [False] + [True] * 10},
            lambda: {"radical": [r.is_radical for r in self.table1.rows],
                     "centric": [r.is_centric for r in self.table1.rows]})
        run("table1.flag-stabilizers", "claim:flag-stabilizer-orders",
            EXPECTED_STABILIZERS, lambda: self.table1.stabilizer_orders)

    def suite_table2(self, entries):
        run = lambda *a: self._run(entries, *a)
        run("table2.orbit-rows", "claim:orbit-decompositions",
            {"rows": 44, "failed": []},
            lambda: {"rows": len(self.table2.rows),
                     "failed": [r.flag for r in self.table2.rows if not r.ok]})
        want = {
            ("p", "p_sq"): [1, 30],
            ("p", "pM_sq"): [1, 6, 8, 24],
            ("p", "pL_sq"): [1, 2, 12, 16, 24],
            ("p", "S"): [1, 2, 4, 8, 8, 16, 16],
            ("M", "S"): [1, 2],
            ("M", "pL_sq"): [3],
            ("Lst", "pL_sq"): [1],
            ("Lst", "S"): [1],
        }
        def heads():
            got = {(r.flag, r.container): sorted(r.orbit_sizes)
                   for r in self.table2.rows}
            return {f"{a} in {b}": got.get(((a, b), b))
                    for (a, b) in want}
        run("table2.head-orbits", "claim:first-member-orbits",
            {f"{a} in {b}": sorted(v) for (a, b), v in want.items()}, heads)
        run("table2.cone-facts", "claim:cone-uniqueness",
            True, lambda: cone_facts(self.model, self.instances,
                                     self.table2.collections).all_ok)
        run("table2.normality-pairing", "claim:point-line-normality",
            True, lambda: normality_pairing(self.model,
                                            self.instances).all_ok)
        run("table2.center-shapes", "claim:center-classifier",
            {"S": "point", "M": "m_space", "L": "line", "M_sq": "plane"},
            lambda: {n: classify_center(self.ctx, self.table1,
                                        self.instances[n].gens).kind
                     for n in ("S", "M", "L", "M_sq")})
        def local():
            rep = self._get("local", lambda: replay_collapse(
                self.ctx, self.model, self.instances, self.table1))
            return {"flags": rep.n_box_flags,
                    "steps_ok": all(s.ok for s in rep.steps),
                    "after_schedule": rep.delta2_remaining,
                    "final": rep.final_remaining}
        run("table2.local-collapse", "claim:collapse-schedule",
            {"flags": 880, "steps_ok": True, "after_schedule": 44, "final": 0},
            local)

    def suite_axioms(self, entries):
        run = lambda *a: self._run(entries, *a)
        geo = lambda: self._get("geometry", lambda: geometry_axioms(
            self.ctx, self.model, self.table1, noncentral_mode="sampled"))
        run("axioms.point-residue", "claim:point-residue-census",
            {"lines": 315, "m_spaces": 135},
            lambda: {"lines": geo().lines_through_z,
                     "m_spaces": geo().m_spaces_through_z})
        run("axioms.incidence", "claim:incidence-axioms",
            {"delta4": True, "delta5": True, "delta6": True,
             "plane_unique_m": True},
            lambda: {"delta4": geo().delta4_ok, "delta5": geo().delta5_ok,
                     "delta6": geo().delta6_ok,
                     "plane_unique_m": geo().plane_in_unique_m})
        run("axioms.product-closure", "claim:commuting-product-closure",
            True, lambda: geo().product_closure_ok)
        run("axioms.transitivity", "claim:residue-transitivity",
            {"lines": True, "m_spaces": True},
            lambda: {"lines": geo().line_orbit_single,
                     "m_spaces": geo().m_space_orbit_single})
        run("axioms.noncentral-products", "claim:involution-products",
            {"ok": True},
            lambda: {"ok": bool(geo().noncentral_rule_ok)})

    def suite_euler(self, entries):
        run = lambda *a: self._run(entries, *a)
        def rep():
            fixed = self._memo.get("fixed")
            return self._get("euler", lambda: euler_characteristic(
                self.table1,
                fixed_complex_euler=fixed.euler_reduced if fixed else None))
        run("euler.value", "claim:euler-characteristic",
            EXPECTED_EULER, lambda: rep().euler_reduced)
        run("euler.two-part", "claim:two-adic-valuation",
            {"valuation": 7, "odd_part": 393_583},
            lambda: {"valuation": rep().two_adic_valuation,
                     "odd_part": rep().odd_part})
        run("euler.point-orbit", "claim:point-orbit-size",
            CENTRAL_CLASS_SIZE, lambda: rep().orbit_sizes[("p",)])

    def suite_delta_fixed(self, entries):
        run = lambda *a: self._run(entries, *a)
        rep = lambda: self._get("fixed",
                                lambda: delta_fixed_z(self.ctx, self.table1))
        run("delta-fixed.census", "claim:fixed-subcomplex-census",
            {"points": 631, "pointwise_lines": 4095, "swapped_lines": 15120,
             "lines_through_base": 315},
            lambda: {"points": rep().fixed_points,
                     "pointwise_lines": rep().pointwise_lines,
                     "swapped_lines": rep().swapped_lines,
                     "lines_through_base": rep().lines_through_base})
        run("delta-fixed.contractible", "claim:fixed-subcomplex-contractible",
            {"greedy": True, "staged": True, "betti": [0],
             "euler_reduced": 0},
            lambda: {"greedy": rep().certificate.complete,
                     "staged": rep().guided_certificate.complete,
                     "betti": rep().betti_reduced or [0],
                     "euler_reduced": rep().euler_reduced})

    # -- driver ---------------------------------------------------------------

    def run(self, suites) -> VerificationReport:
        table = {
            "calibrate": self.suite_calibrate,
            "sylow": self.suite_sylow,
            "prop43": self.suite_prop43,
            "table1": self.suite_table1,
            "table2": self.suite_table2,
            "axioms": self.suite_axioms,
            "euler": self.suite_euler,
            "delta-fixed": self.suite_delta_fixed,
        }
        entries: list[CheckResult] = []
        for name in SUITE_NAMES:
            if name in suites:
                table[name](entries)
        report = VerificationReport(entries=entries)
        report.meta = {
            "seed": self.seed,
            "generators": os.path.basename(self.gens_path),
            "cache_hits": self.cache.hits,
            "cache_misses": self.cache.misses,
            "suites": [s for s in SUITE_NAMES if s in suites],
        }
        return report
