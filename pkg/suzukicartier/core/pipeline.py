import time
from typing import Any, Callable, Dict, List, Optional

from loguru import logger

from .cache import cache_matrix, cache_path, load_matrix
from .context import RunContext
from .eo import (
    a_number_from_matrix,
    count_compatible_final_types,
    decomposition_bound,
    derive_constraints,
    enumerate_compatible_final_types,
    superspecial_check,
)
from .f2la import BitMatrix, rank, rank_profile
from .gf2n import point_count_naive
from .models import (
    ComputationStage,
    FinalTypeConstraints,
    FinalTypeSummary,
    RankProfile,
    RunReport,
    VerificationSummary,
)
from .params import (
    SuzukiParams,
    a_number_formula,
    hasse_weil_holds,
    is_maximal_over,
    lattice_count,
    make_params,
    nu_g_formula,
    point_count_zeta,
    ratio_bound_holds,
    semigroup_count,
    semigroup_elements,
)
from .structured import Basis, MatrixPath, build_cartier_matrix, enumerate_basis
from ..config.models import Command, RunConfig
from ..utils.errors import EnumerationCapError

# Naive point counts inside verify stay at or below this many field bits.
VERIFY_POINT_BITS = 12
VERIFY_POINT_DEGREES = (1, 2, 4)


class SuzukiPipeline:
    """Main orchestrator: computes what a command needs and assembles its report."""

    def __init__(self, config: RunConfig, context: Optional[RunContext] = None):
        """Initialize the pipeline.

        Args:
            config: Validated run configuration
            context: Optional RunContext; a fresh one is created if None
        """
        self.config = config
        self.context = context or RunContext(m=config.m)
        self._params: Optional[SuzukiParams] = None
        self._basis: Optional[Basis] = None
        self._matrix: Optional[BitMatrix] = None
        self._profile: Optional[RankProfile] = None
        self._constraints: Optional[FinalTypeConstraints] = None

    # - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - -
    # Stages
    # - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - -

    @property
    def params(self) -> SuzukiParams:
        if self._params is None:
            self._params = make_params(self.config.m)
            self.context.mark_stage(ComputationStage.PARAMS.name, g=self._params.g)
        return self._params

    @property
    def basis(self) -> Basis:
        if self._basis is None:
            self._basis = enumerate_basis(self.params)
            self.context.mark_stage(ComputationStage.BASIS.name, size=len(self._basis))
        return self._basis

    def _build(self, path: MatrixPath) -> BitMatrix:
        started = time.perf_counter()
        matrix = build_cartier_matrix(self.params, self.basis, path=path, workers=self.config.workers)
        self.context.matrix.elapsed_ms = (time.perf_counter() - started) * 1000
        return matrix

    @property
    def matrix(self) -> BitMatrix:
        """Table-driven Cartier matrix, read from or written to the cache directory when one is set."""
        if self._matrix is not None:
            return self._matrix

        self.context.matrix.path = MatrixPath.STRUCTURED.value
        self.context.matrix.workers = self.config.workers
        cache_dir = self.config.cache_dir
        target = cache_path(cache_dir, self.config.m) if cache_dir is not None else None

        if target is not None and target.is_file():
            self._matrix = load_matrix(target, self.config.m)
            self.context.matrix.source = "cache"
        else:
            self._matrix = self._build(MatrixPath.STRUCTURED)
            self.context.matrix.source = "computed"
            if target is not None:
                cache_matrix(target, self.config.m, self._matrix)
        self.context.matrix.cache_file = str(target) if target is not None else None
        self.context.mark_stage(
            ComputationStage.MATRIX.name,
            source=self.context.matrix.source,
            elapsed_ms=self.context.matrix.elapsed_ms
        )
        return self._matrix

    def oracle_matrix(self) -> BitMatrix:
        """Definition-driven Cartier matrix; never cached."""
        return self._build(MatrixPath.ORACLE)

    @property
    def profile(self) -> RankProfile:
        if self._profile is None:
            self._profile = rank_profile(self.matrix)
            self.context.mark_stage(ComputationStage.RANK_PROFILE.name, ranks=list(self._profile.ranks))
        return self._profile

    @property
    def constraints(self) -> FinalTypeConstraints:
        if self._constraints is None:
            self._constraints = derive_constraints(self.profile, self.config.m)
            self.context.mark_stage(ComputationStage.FINAL_TYPES.name, fixed=len(self._constraints.fixed))
        return self._constraints

    # - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - -
    # Command payloads
    # - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - -

    def params_payload(self) -> Dict[str, Any]:
        p = self.params
        m = self.config.m
        return {
            "vy": p.vy,
            "vz": p.vz,
            "vh1": p.vh1,
            "vh2": p.vh2,
            "a_number_formula": a_number_formula(m),
            "nu_g_formula": nu_g_formula(m),
            "ratio_bound": ratio_bound_holds(m),
            "superspecial": superspecial_check(m),
        }

    def a_number_payload(self) -> Dict[str, Any]:
        a = a_number_from_matrix(self.matrix)
        return {
            "a_number": a,
            "a_number_formula": a_number_formula(self.config.m),
            "decomposition_bound": decomposition_bound(a),
        }

    def basis_rows(self) -> List[Dict[str, Any]]:
        return [
            {"index": k, "a": mon.a, "b": mon.b, "c": mon.c, "d": mon.d, "pole": mon.pole_order(self.params)}
            for k, mon in enumerate(self.basis)
        ]

    def matrix_rows(self) -> List[Dict[str, Any]]:
        matrix = self.matrix
        return [
            {"column": j, "element": self.basis[j].label(), "image_rows": matrix.column_support(j)}
            for j in range(matrix.cols)
        ]

    def rank_profile_payload(self) -> Dict[str, Any]:
        profile = self.profile
        return {
            "rank_profile": list(profile.ranks),
            "nilpotency": profile.nilpotency,
            "a_number": profile.a_number,
            "p_rank": profile.p_rank,
        }

    def constraints_payload(self) -> Dict[str, Any]:
        constraints = self.constraints
        summary = FinalTypeSummary.from_constraints(constraints, count_compatible_final_types(constraints))
        return {"rank_profile": list(self.profile.ranks), **summary.model_dump()}

    def enumerate_payload(self) -> Dict[str, Any]:
        constraints = self.constraints
        payload = self.constraints_payload()
        try:
            sequences = enumerate_compatible_final_types(constraints, self.config.enumerate_cap)
        except EnumerationCapError as e:
            logger.warning("Enumeration skipped; reporting counts only", count=str(e.count), free_gaps=e.free_gaps)
            payload.update({"final_types": None, "cap_exceeded": True})
            return payload
        payload.update({"final_types": [list(seq) for seq in sequences], "cap_exceeded": False})
        return payload

    def points_rows(self) -> List[Dict[str, Any]]:
        m = self.config.m
        rows = []
        for k in self.config.ks:
            row: Dict[str, Any] = {
                "k": k,
                "zeta": point_count_zeta(m, k),
                "maximal": is_maximal_over(m, k),
                "hasse_weil": hasse_weil_holds(m, k),
            }
            if self.config.naive:
                fits = (2 * m + 1) * k <= self.config.compute.point_bits_limit
                row["naive"] = point_count_naive(m, k) if fits else None
            rows.append(row)
        self.context.mark_stage(ComputationStage.POINTS.name, degrees=list(self.config.ks))
        return rows

    def points_payload(self, rows: List[Dict[str, Any]]) -> Dict[str, Any]:
        payload: Dict[str, Any] = {
            "points": {str(row["k"]): row["zeta"] for row in rows},
            "maximal": {str(row["k"]): row["maximal"] for row in rows},
            "hasse_weil": {str(row["k"]): row["hasse_weil"] for row in rows},
        }
        if self.config.naive:
            payload["naive_points"] = {str(row["k"]): row["naive"] for row in rows}
        return payload

    # - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - -
    # Verification
    # - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - -

    def verify(self) -> VerificationSummary:
        """Run every consistency check; a failing check is recorded, not raised."""
        m = self.config.m
        p = self.params
        summary = VerificationSummary()

        def check(name: str, actual: Any, expected: Any) -> None:
            passed = actual == expected
            summary.add(name, passed, f"expected {expected}, got {actual}")
            self.context.verification.checks_run += 1
            if not passed:
                self.context.verification.checks_failed += 1
                logger.warning("Verification check failed", check=name, m=m)

        check("basis_count", len(self.basis), p.g)
        check("semigroup_count", semigroup_count(m), p.g)
        check("basis_poles_match_semigroup", sorted(self.basis.pole_orders()), semigroup_elements(m))
        check("lattice_count", lattice_count(m), a_number_formula(m))

        if self.config.verify_oracle:
            oracle = self.oracle_matrix()
            column = self.matrix.first_differing_column(oracle)
            summary.first_differing_column = column
            self.context.verification.oracle_compared = True
            self.context.verification.first_differing_column = column
            summary.add(
                "structured_equals_oracle",
                column is None,
                "identical" if column is None else f"first differing column {column} ({self.basis[column].label()})"
            )
            self.context.verification.checks_run += 1
            if column is not None:
                self.context.verification.checks_failed += 1
                logger.warning("Structured and oracle matrices differ", m=m, column=column)

        check("corank_equals_formula", p.g - rank(self.matrix), a_number_formula(m))
        check("nilpotent", self.profile.is_nilpotent, True)
        check("first_rank_equals_nu_g_formula", self.profile.ranks[0] if self.profile.ranks else 0, nu_g_formula(m))
        check("ratio_bound", ratio_bound_holds(m), True)
        check("not_superspecial", superspecial_check(m), False)

        bits_limit = min(VERIFY_POINT_BITS, self.config.compute.point_bits_limit)
        for k in VERIFY_POINT_DEGREES:
            if (2 * m + 1) * k <= bits_limit:
                check(f"naive_points_k{k}", point_count_naive(m, k), point_count_zeta(m, k))

        self.context.mark_stage(
            ComputationStage.VERIFICATION.name,
            checks=self.context.verification.checks_run,
            failed=self.context.verification.checks_failed
        )
        return summary

    def verify_payload(self, summary: VerificationSummary) -> Dict[str, Any]:
        return {
            "verified": summary.verified,
            "checks": [c.model_dump() for c in summary.checks],
            "first_differing_column": summary.first_differing_column,
        }

    # - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - -
    # Dispatch
    # - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - -

    def _report(self, payload: Dict[str, Any], rows: Optional[List[Dict[str, Any]]] = None) -> RunReport:
        p = self.params
        return RunReport(
            m=p.m, q0=p.q0, q=p.q, g=p.g,
            command=self.config.command.value,
            payload=payload,
            rows=rows if rows is not None else [payload],
        )

    def run(self) -> RunReport:
        """Compute the configured command and return its report."""
        logger.info("Starting run", run_id=str(self.context.run_id), m=self.config.m, command=self.config.command.value)
        handlers: Dict[Command, Callable[[], RunReport]] = {
            Command.PARAMS: self._run_params,
            Command.A_NUMBER: self._run_a_number,
            Command.BASIS: self._run_basis,
            Command.MATRIX: self._run_matrix,
            Command.RANK_PROFILE: self._run_rank_profile,
            Command.EO_CONSTRAINTS: self._run_eo_constraints,
            Command.EO_ENUMERATE: self._run_eo_enumerate,
            Command.POINTS: self._run_points,
            Command.VERIFY: self._run_verify,
            Command.ALL: self._run_all,
        }
        report = handlers[self.config.command]()
        self.context.mark_stage(ComputationStage.COMPLETE.name, command=self.config.command.value)
        return report

    def _run_params(self) -> RunReport:
        payload = self.params_payload()
        return self._report(payload, [{"name": k, "value": v} for k, v in sorted(payload.items())])

    def _run_a_number(self) -> RunReport:
        return self._report(self.a_number_payload())

    def _run_basis(self) -> RunReport:
        rows = self.basis_rows()
        return self._report({"basis": rows}, rows)

    def _run_matrix(self) -> RunReport:
        rows = self.matrix_rows()
        payload = {
            "rank": rank(self.matrix),
            "ones": self.matrix.count_ones(),
            "columns": [row["image_rows"] for row in rows],
        }
        return self._report(payload, [{**row, "image_rows": " ".join(map(str, row["image_rows"]))} for row in rows])

    def _run_rank_profile(self) -> RunReport:
        payload = self.rank_profile_payload()
        rows = [{"k": k, "rank": r} for k, r in enumerate(self.profile.ranks, start=1)]
        return self._report(payload, rows)

    def _run_eo_constraints(self) -> RunReport:
        payload = self.constraints_payload()
        rows = [{"index": i, "value": v} for i, v in sorted(self.constraints.fixed.items())]
        return self._report(payload, rows)

    def _run_eo_enumerate(self) -> RunReport:
        payload = self.enumerate_payload()
        rows = [
            {"sequence": n, "nu": " ".join(map(str, seq))}
            for n, seq in enumerate(payload["final_types"] or [])
        ]
        return self._report(payload, rows)

    def _run_points(self) -> RunReport:
        rows = self.points_rows()
        return self._report(self.points_payload(rows), rows)

    def _run_verify(self) -> RunReport:
        summary = self.verify()
        payload = self.verify_payload(summary)
        return self._report(payload, payload["checks"])

    def _run_all(self) -> RunReport:
        payload: Dict[str, Any] = {}
        payload.update(self.params_payload())
        payload.update(self.a_number_payload())
        payload.update(self.rank_profile_payload())
        payload.update(self.constraints_payload())
        payload.update(self.points_payload(self.points_rows()))
        payload.update(self.verify_payload(self.verify()))
        rows = [{"k": k, "rank": r} for k, r in enumerate(self.profile.ranks, start=1)]
        return self._report(payload, rows)
