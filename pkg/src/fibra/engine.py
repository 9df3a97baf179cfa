from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple, Union

from . import corpus
from .arrangement import (
    classify_singularity,
    singular_locus_certify,
    strict_transform_smooth_after_blowup,
)
from .bounds import miyaoka_yau_check
from .construction_file import (
    LITERATURE,
    VARIANT,
    ConstructionFile,
    load_construction,
)
from .constructions import (
    SurfacePair,
    assemble_surface_pair,
    check_genus_two_pencil,
    standard_construction,
    variant_construction,
)
from .doublecover import (
    CoverData,
    CoverInvariants,
    branch_component_halving,
    branch_pieces,
    contract_minus_one,
    cover_invariants,
    even_resolution,
    exceptional_strict_class,
    make_cover,
    pencil_analysis,
    strict_class,
)
from .errors import (
    ClaimMismatch,
    ExpectationMismatch,
    FibraError,
    IncompleteReport,
    InputError,
)
from .piclattice import DivClass, parse_class, verify_class_identity
from .report import (
    FAIL,
    PASS,
    SKIPPED,
    ConstructionReport,
    CorpusRow,
    CorpusSummary,
    StageResult,
    jsonable,
)

log = logging.getLogger(__name__)

Resolver = Callable[[str], ConstructionFile]


class _Stages:
    """Runs named stages in order; after the first failure the rest are skipped."""

    def __init__(self, cid: str) -> None:
        self.cid = cid
        self.results: List[StageResult] = []
        self.failed = False

    def run(self, name: str, fn: Callable[[], Optional[Mapping[str, Any]]]) -> bool:
        if self.failed:
            self.results.append(StageResult(name, SKIPPED))
            return False
        log.info("%s: %s", self.cid, name)
        try:
            values = fn()
        except FibraError as e:
            log.info("%s: %s failed: %s", self.cid, name, e.message)
            self._fail(name, e.to_dict())
            return False
        except Exception as e:  # noqa: BLE001
            log.warning("%s: %s raised %s: %s", self.cid, name, type(e).__name__, e)
            self._fail(name, {"error": type(e).__name__, "message": str(e)})
            return False
        self.results.append(StageResult(name, PASS, jsonable(values or {})))
        return True

    def _fail(self, name: str, diagnostic: Dict[str, Any]) -> None:
        self.failed = True
        self.results.append(StageResult(name, FAIL, diagnostic=jsonable(diagnostic)))


class _SurfaceRun:
    """State threaded through the double-cover stages of one construction."""

    def __init__(self, cf: ConstructionFile, computed: Dict[str, Any]) -> None:
        self.cf = cf
        self.computed = computed
        self.cover: Optional[CoverData] = None
        self.resolved: Optional[CoverData] = None
        self.inv: Optional[CoverInvariants] = None
        self.contracted: List[Tuple[str, DivClass]] = []
        self.pair: Optional[SurfacePair] = None

    @property
    def points(self):
        return [p.point for p in self.cf.points]

    def branch_class(self) -> Dict[str, Any]:
        assert self.cf.branch is not None
        self.cover = make_cover(self.cf.branch, self.cf.delta)
        return {
            "delta": self.cover.delta.to_text(),
            "branch": self.cover.branch_class.to_text(),
            "components": self.cf.branch.names,
        }

    def singular_locus(self) -> Dict[str, Any]:
        assert self.cf.branch is not None
        cert = singular_locus_certify(self.cf.branch, self.points)
        return cert.to_dict()

    def singular_points(self) -> Dict[str, Any]:
        assert self.cf.branch is not None
        records = []
        problems = []
        for spec in self.cf.points:
            rec = classify_singularity(self.cf.branch, spec.point)
            records.append(rec.to_dict())
            if spec.mult is not None and spec.mult != rec.total_mult:
                problems.append(f"{spec.label}: multiplicity {rec.total_mult}, claimed {spec.mult}")
            if spec.type is not None and spec.type != rec.type:
                problems.append(f"{spec.label}: type {rec.type}, claimed {spec.type}")
            for name, m in sorted(spec.incidence.items()):
                got = rec.component_mults.get(name, 0)
                if got != m:
                    problems.append(f"{spec.label}: {name} has multiplicity {got}, claimed {m}")
        if problems:
            raise ClaimMismatch(
                f"{len(problems)} claimed singular-point entries differ",
                details={"mismatches": problems},
            )
        self.computed["singular_points"] = sum(p.weight for p in self.points)
        return {"points": records}

    def one_blowup(self) -> Dict[str, Any]:
        """Points where one blow-up leaves the branch with normal crossings."""
        assert self.cf.branch is not None
        resolved, deeper = [], []
        for p in self.points:
            ok = strict_transform_smooth_after_blowup(self.cf.branch, [p])
            (resolved if ok else deeper).append(p)
        self.computed["one_blowup_points"] = sum(p.weight for p in resolved)
        return {
            "resolved": [p.name() for p in resolved],
            "need_further_blowups": [p.name() for p in deeper],
            "all_resolved": not deeper,
        }

    def resolution(self) -> Dict[str, Any]:
        assert self.cover is not None
        self.resolved = even_resolution(self.cover, self.points)
        steps = self.resolved.resolution_log
        self.computed["blowups"] = sum(s.weight for s in steps)
        return {
            "steps": [s.to_dict() for s in steps],
            "delta": self.resolved.delta.to_text(),
            "branch": self.resolved.branch_class.to_text(),
            "exceptional_in_branch": self.resolved.exceptional_branch,
        }

    def cover_invariants(self) -> Dict[str, Any]:
        assert self.resolved is not None
        self.inv = cover_invariants(self.resolved)
        self.computed.update(chi=self.inv.chi, K2=self.inv.K2, pg=self.inv.pg, q=self.inv.q)
        return self.inv.to_dict()

    def contraction(self) -> Dict[str, Any]:
        assert self.resolved is not None and self.inv is not None
        halvings = []
        total = 0
        for name, cls in branch_pieces(self.resolved):
            h = branch_component_halving(cls, name=name)
            halvings.append(h.to_dict())
            if h.minus_one_curves:
                self.contracted.append((name, cls))
                total += h.minus_one_curves
        self.inv = contract_minus_one(self.inv, total)
        self.computed.update(
            minus_one_contractions=self.inv.minus_one_contractions, K2_minimal=self.inv.K2_minimal
        )
        return {
            "halvings": halvings,
            "contracted": [n for n, _ in self.contracted],
            "minus_one_contractions": total,
            "K2_minimal": self.inv.K2_minimal,
        }

    def names(self) -> Dict[str, DivClass]:
        assert self.resolved is not None
        lat = self.resolved.ambient
        out: Dict[str, DivClass] = {
            "delta": self.resolved.delta,
            "R": self.resolved.branch_class,
        }
        for name, form in self.cf.curves:
            out[f"~{name}"] = strict_class(lat, form)
        for label in self.resolved.exceptional_branch:
            out[f"~E_{label}"] = exceptional_strict_class(lat, label)
        if self.cf.pencil:
            out["G"] = parse_class(self.cf.pencil, lat, out)
        if self.cf.fibration:
            out["L"] = parse_class(self.cf.fibration, lat, out)
        return out

    def pencil(self) -> Dict[str, Any]:
        assert self.resolved is not None
        if not self.cf.pencil or not self.cf.fibration:
            raise IncompleteReport(f"{self.cf.id} declares no pencil and fibration classes")
        names = self.names()
        pa = pencil_analysis(self.resolved, names["G"], names["L"], self.contracted)
        if not pa.identity_holds:
            raise ClaimMismatch(
                "K + delta~ + L differs from the pencil plus the contracted branch components",
                details={"pencil": names["G"].to_text(), "fibration": names["L"].to_text()},
            )
        self.computed.update(
            h0_pencil=pa.h0,
            g_C_hat=pa.g_C_hat,
            base_points=pa.base_points,
            d=pa.d,
            H2=pa.H2,
            KH=pa.KH,
            g_H=pa.g_H,
        )
        return pa.to_dict()

    def class_identities(self) -> Dict[str, Any]:
        assert self.resolved is not None
        names = self.names()
        results = []
        failing = []
        for ident in self.cf.class_identities:
            holds = verify_class_identity(ident.lhs, ident.rhs, self.resolved.ambient, names)
            results.append({"lhs": ident.lhs, "rhs": ident.rhs, "tag": ident.tag, "holds": holds})
            if not holds:
                failing.append(f"{ident.lhs} = {ident.rhs}")
        if failing:
            raise ClaimMismatch(
                f"{len(failing)} class identities fail", details={"failing": failing}
            )
        return {"identities": results}


def _surface_pair_stage(run_pair: Callable[[SurfacePair], None], computed: Dict[str, Any], cid: str):
    def stage() -> Dict[str, Any]:
        pair = assemble_surface_pair(computed, provenance=cid)
        check = check_genus_two_pencil(pair)
        computed["g_H"] = pair.g_H
        run_pair(pair)
        return {"pair": pair.to_dict(), "pencil_check": check.to_dict()}

    return stage


def _standard_stage(get_pair: Callable[[], Optional[SurfacePair]], computed: Dict[str, Any]):
    def stage() -> Dict[str, Any]:
        pair = get_pair()
        assert pair is not None
        out = standard_construction(pair)
        computed.update(pg_F=out.pg_F, pg_X=out.pg_X, K3_X=out.K3_X, chi_omega_X=out.chi_omega_X)
        return out.to_dict()

    return stage


def _miyaoka_yau_stage(computed: Dict[str, Any]):
    def stage() -> Dict[str, Any]:
        k3, chi = computed["K3_X"], computed["chi_omega_X"]
        if not miyaoka_yau_check(k3, chi):
            raise ClaimMismatch(f"K^3 = {k3} exceeds 72 chi(omega) = {72 * chi}")
        return {"K3_X": k3, "bound": 72 * chi, "holds": True}

    return stage


def compare_expected(cf: ConstructionFile, computed: Mapping[str, Any]) -> Dict[str, Any]:
    rows = []
    bad = []
    for e in cf.expected:
        got = computed.get(e.key)
        ok = got is not None and got == e.value
        row = {"key": e.key, "expected": e.value, "computed": got, "tag": e.tag, "match": ok}
        if e.note:
            row["note"] = e.note
        rows.append(row)
        if not ok:
            bad.append(f"{e.key}: computed {got}, expected {e.value}")
    if bad:
        raise ExpectationMismatch(
            f"{len(bad)} of {len(rows)} expected values differ", details={"mismatches": bad}
        )
    return {"compared": rows}


class VerificationEngine:
    """Verifies construction files, resolving variant stubs through their sibling surface."""

    def __init__(
        self,
        *,
        resolver: Optional[Resolver] = None,
        reports: Optional[Dict[str, ConstructionReport]] = None,
    ) -> None:
        self._resolver = resolver
        self._reports: Dict[str, ConstructionReport] = dict(reports or {})

    def verify(self, cf: ConstructionFile) -> ConstructionReport:
        computed: Dict[str, Any] = {}
        stages = _Stages(cf.id)
        stages.results.append(StageResult("parse", PASS, jsonable(_parse_summary(cf))))
        if cf.kind == VARIANT:
            self._variant(cf, stages, computed)
        elif cf.kind == LITERATURE:
            self._literature(cf, stages, computed)
        else:
            self._surface(cf, stages, computed)
        stages.run("expected", lambda: compare_expected(cf, computed))
        report = ConstructionReport(
            id=cf.id,
            label=cf.label,
            kind=cf.kind,
            stages=tuple(stages.results),
            computed=jsonable(dict(sorted(computed.items()))),
            assertions=cf.assertions,
        )
        self._reports[cf.id] = report
        log.info("%s: %s", cf.id, "pass" if report.passed else f"fail at {report.first_failure}")
        return report

    def _surface(self, cf: ConstructionFile, stages: _Stages, computed: Dict[str, Any]) -> None:
        run = _SurfaceRun(cf, computed)
        stages.run("branch_class", run.branch_class)
        stages.run("singular_locus", run.singular_locus)
        stages.run("singular_points", run.singular_points)
        stages.run("one_blowup", run.one_blowup)
        stages.run("resolution", run.resolution)
        stages.run("cover_invariants", run.cover_invariants)
        stages.run("contraction", run.contraction)
        stages.run("pencil", run.pencil)
        stages.run("class_identities", run.class_identities)
        self._threefold(cf, stages, computed)

    def _literature(self, cf: ConstructionFile, stages: _Stages, computed: Dict[str, Any]) -> None:
        assert cf.surface is not None
        computed.update(cf.surface)
        self._threefold(cf, stages, computed)

    def _threefold(self, cf: ConstructionFile, stages: _Stages, computed: Dict[str, Any]) -> None:
        holder: List[SurfacePair] = []
        stages.run("surface_pair", _surface_pair_stage(holder.append, computed, cf.id))
        stages.run("standard_construction", _standard_stage(lambda: holder[0], computed))
        stages.run("miyaoka_yau", _miyaoka_yau_stage(computed))

    def _variant(self, cf: ConstructionFile, stages: _Stages, computed: Dict[str, Any]) -> None:
        holder: List[SurfacePair] = []

        def sibling() -> Dict[str, Any]:
            assert cf.sibling is not None
            rep = self.sibling_report(cf.sibling)
            if not rep.passed:
                raise IncompleteReport(
                    f"sibling {cf.sibling} failed at {rep.first_failure}",
                    details={"sibling": cf.sibling},
                )
            pair = assemble_surface_pair(rep.computed, provenance=cf.sibling)
            holder.append(pair)
            return {"sibling": cf.sibling, "pair": pair.to_dict()}

        def variant() -> Dict[str, Any]:
            assert cf.nu is not None
            out = variant_construction(holder[0], cf.nu)
            computed.update(g_F=out.g_F, pg_X=out.pg_X)
            return out.to_dict()

        stages.run("sibling", sibling)
        stages.run("variant_construction", variant)

    def sibling_report(self, cid: str) -> ConstructionReport:
        if cid in self._reports:
            return self._reports[cid]
        if self._resolver is None:
            raise IncompleteReport(f"no report or resolver for sibling {cid}")
        try:
            cf = self._resolver(cid)
        except (InputError, OSError) as e:
            raise IncompleteReport(f"sibling {cid} cannot be loaded: {e}") from None
        return self.verify(cf)


def _parse_summary(cf: ConstructionFile) -> Dict[str, Any]:
    out: Dict[str, Any] = {"kind": cf.kind}
    if cf.field is not None:
        out.update(
            field=cf.field.min_poly_text(),
            base=cf.base,
            curves=[n for n, _ in cf.curves],
            points=[p.label for p in cf.points],
        )
    if cf.sibling:
        out.update(sibling=cf.sibling, nu=cf.nu)
    if cf.provenance:
        out["provenance"] = cf.provenance
    return out


def sibling_resolver(*directories: Union[str, Path], bundled: bool = True) -> Resolver:
    """Look a sibling id up in the given directories, then in the bundled corpus."""
    search = [Path(d) for d in directories]
    if bundled:
        search.append(corpus.corpus_dir())

    def resolve(cid: str) -> ConstructionFile:
        for d in search:
            path = d / f"{cid}.json"
            if path.exists():
                return load_construction(path)
        raise IncompleteReport(f"sibling construction {cid} not found")

    return resolve


def verify_file(path: Union[str, Path]) -> ConstructionReport:
    """Parse and verify one file; parse errors propagate as InputError."""
    cf = load_construction(path)
    return VerificationEngine(resolver=sibling_resolver(Path(path).parent)).verify(cf)


# ---------------------------------------------------------------------------
# corpus


def _parse_failure(cid: str, error: FibraError) -> ConstructionReport:
    stage = StageResult("parse", FAIL, diagnostic=jsonable(error.to_dict()))
    return ConstructionReport(id=cid, label="", kind="unknown", stages=(stage,))


def _verify_standalone(path: str) -> Dict[str, Any]:
    cid = Path(path).stem
    try:
        cf = load_construction(path)
    except InputError as e:
        return _parse_failure(cid, e).to_dict()
    return VerificationEngine().verify(cf).to_dict()


def _row(report: ConstructionReport) -> CorpusRow:
    invariant, value = report.fiber_invariant()
    return CorpusRow(report.id, invariant, value, report.passed, report.first_failure)


def run_corpus(
    directory: Optional[Union[str, Path]] = None,
    *,
    parallel: bool = False,
    max_workers: Optional[int] = None,
) -> Tuple[CorpusSummary, List[ConstructionReport]]:
    """Verify every construction in the corpus directory, in canonical id order.

    Surface and literature files are independent and may run in worker
    processes; variant stubs run afterwards against their siblings' reports.
    """
    d = corpus.corpus_dir(directory)
    ids = corpus.ordered_ids(d)
    paths = {cid: d / f"{cid}.json" for cid in ids}
    variants: Dict[str, ConstructionFile] = {}
    standalone: List[str] = []
    reports: Dict[str, ConstructionReport] = {}
    for cid in ids:
        try:
            cf = load_construction(paths[cid])
        except InputError as e:
            reports[cid] = _parse_failure(cid, e)
            continue
        if cf.kind == VARIANT:
            variants[cid] = cf
        else:
            standalone.append(cid)

    targets = [str(paths[cid]) for cid in standalone]
    if parallel and len(targets) > 1:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            results = list(pool.map(_verify_standalone, targets))
    else:
        results = [_verify_standalone(p) for p in targets]
    for cid, data in zip(standalone, results):
        reports[cid] = ConstructionReport.from_dict(data)

    engine = VerificationEngine(resolver=sibling_resolver(d, bundled=False), reports=dict(reports))
    for cid, cf in variants.items():
        reports[cid] = engine.verify(cf)

    ordered = [reports[cid] for cid in ids]
    summary = CorpusSummary(tuple(_row(r) for r in ordered), tuple(corpus.missing_ids(d)))
    log.info("corpus %s: %d/%d pass", d, summary.pass_count, len(ordered))
    return summary, ordered
