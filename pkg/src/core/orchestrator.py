"""Orchestrator - runs decompose, verify, generate and search commands."""
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, List, Optional, Tuple

import numpy as np

from src.certify.factory import CheckFactory
from src.core.blocks import BlockMatrix, direct_sum_copies, pad_to_dyadic, partial_trace
from src.core.decompose import (
    WeightedIsometryDecomposition,
    clifford_decompose,
    pinch_decompose,
    probe_residual,
    two_block_hermitian_decompose,
)
from src.core.exceptions import DecompositionError
from src.core.linalg import frobenius, psd_sqrt, psd_threshold
from src.core.models import (
    CertificateReport,
    DecompositionSummary,
    GeneratorConfig,
    GeneratorMethod,
    RunReport,
    VerifyOptions,
)
from src.generate.generators import (
    gen_commuting_family,
    gen_hermitian_block_psd,
    gen_rearrangement_weight,
    gen_separable_real_factor,
)
from src.generate.search import search_counterexample_normal_blocks, self_test
from src.ui.console_ui import ConsoleUI
from src.utils.config import Config
from src.utils.matrix_io import (
    digest,
    load_block_matrix,
    load_commuting_family,
    load_decomposition,
    load_separable_state,
    save_commuting_family,
    save_separable_state,
)
from src.utils.output_manager import OutputManager

logger = logging.getLogger(__name__)

PROBE_TOL = 1e-8


class Orchestrator:
    """Runs one CLI command end to end and assembles its RunReport."""

    def __init__(self, console_ui: Optional[ConsoleUI] = None, output_dir: Optional[Path] = None):
        """
        Initialize orchestrator.

        Args:
            console_ui: Optional console UI instance
            output_dir: Directory for emitted files (default: Config.DEFAULT_OUTPUT_DIR)
        """
        self.console_ui = console_ui or ConsoleUI()
        self.output_manager = OutputManager(output_dir or Config.DEFAULT_OUTPUT_DIR)
        self.start_time = time.perf_counter()

    def _report(self, command: str, arguments: dict) -> RunReport:
        return RunReport(command=command, arguments=arguments, tolerances=Config.tolerances())

    def _finish(self, report: RunReport) -> RunReport:
        report.wall_time = time.perf_counter() - self.start_time
        return report

    # --- decompose ---

    def run_decompose(
        self,
        kind: str,
        input_path: Path,
        beta: Optional[int] = None,
        n: Optional[int] = None,
        pad: bool = False,
        structured: bool = False,
        probes: int = 20,
        seed: int = 0,
        out: Optional[Path] = None,
    ) -> RunReport:
        """
        Decompose, write the decomposition file, reload it and recompute residuals.

        Returns:
            RunReport with one DecompositionSummary
        """
        report = self._report("decompose", {
            "kind": kind, "input": str(input_path), "pad": pad, "structured": structured,
        })
        h = load_block_matrix(Path(input_path), beta, n)
        report.input_digests[str(input_path)] = digest(h.carrier)
        self.console_ui.display_header(f"{kind} decomposition", f"beta={h.beta}, n={h.n}")

        if kind == "clifford" and pad:
            h = pad_to_dyadic(h)

        decomposition, sqrt_h, delta = self._decompose(kind, h, structured)
        saved = self.output_manager.save_decomposition(decomposition, out, sqrt_h, delta, h.padded_from)
        report.notes.append(f"decomposition written to {saved['path']}")

        reloaded = load_decomposition(saved["path"])
        report.decompositions.append(self._summarize(h, reloaded, probes, seed))
        return self._finish(report)

    def _decompose(self, kind: str, h: BlockMatrix, structured: bool) -> Tuple[WeightedIsometryDecomposition, Any, Any]:
        if kind == "pinch":
            return pinch_decompose(h), None, None
        if kind == "two-block":
            return two_block_hermitian_decompose(h), None, None
        decomposition = clifford_decompose(h, materialize=not structured)
        if structured:
            return decomposition, psd_sqrt(h.carrier), partial_trace(h)
        return decomposition, None, None

    def _summarize(self, h: BlockMatrix, d: WeightedIsometryDecomposition, probes: int, seed: int) -> DecompositionSummary:
        """Residuals of a decomposition reloaded from its emitted file."""
        if d.materialized:
            target = h.carrier if d.m == 1 else direct_sum_copies(h.carrier, d.m)
            residual = d.residual(target)
            limit = psd_threshold(target)
            residual_kind = "dense"
        else:
            residual = probe_residual(h, d, probes=probes, seed=seed)
            limit = PROBE_TOL * max(1.0, frobenius(h.carrier))
            residual_kind = "probe"
        if residual > limit:
            raise DecompositionError(
                f"reconstruction residual {residual:.3e} exceeds {limit:.3e}",
                {"residual": residual, "limit": limit},
            )
        return DecompositionSummary(
            kind=d.kind,
            beta=d.beta,
            n=d.n,
            m=d.m,
            weight=d.weight,
            residual=residual,
            residual_kind=residual_kind,
            isometry_defects=d.isometry_defects(probes=probes, seed=seed),
            materialized=d.materialized,
            padded_from=h.padded_from,
        )

    # --- verify ---

    def _load_for(self, input_kind: str, path: Path, beta: Optional[int], n: Optional[int]) -> Tuple[Any, str]:
        if input_kind == "family":
            family, t = load_commuting_family(path)
            stacked = np.concatenate(family.members + ([t] if t is not None else []))
            return (family, t), digest(stacked)
        if input_kind == "separable":
            state = load_separable_state(path)
            return state, digest(state.assemble())
        h = load_block_matrix(path, beta, n)
        return h, digest(h.carrier)

    def run_verify(
        self,
        check_name: str,
        inputs: List[Path],
        options: VerifyOptions,
        beta: Optional[int] = None,
        n: Optional[int] = None,
        jobs: int = 1,
    ) -> RunReport:
        """
        Certify one inequality on every input file.

        Workers run in parallel when jobs > 1; certificates keep input order.
        """
        check = CheckFactory().create(check_name)
        report = self._report("verify", {
            "check": check_name,
            "inputs": [str(p) for p in inputs],
            "options": options.model_dump(mode="json", exclude_none=True),
        })
        if options.tol is not None:
            report.tolerances["tol_cert"] = options.tol
        self.console_ui.display_header(f"verify {check_name}", f"{len(inputs)} input file(s)")

        def certify_one(path: Path) -> Tuple[str, List[CertificateReport]]:
            document, input_digest = self._load_for(check.input_kind, Path(path), beta, n)
            certificates = check.certify(document, options)
            for certificate in certificates:
                certificate.context["input"] = str(path)
                certificate.context["input_digest"] = input_digest
            return input_digest, certificates

        if jobs > 1 and len(inputs) > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(certify_one, inputs))
        else:
            results = [certify_one(p) for p in inputs]

        for path, (input_digest, certificates) in zip(inputs, results):
            report.input_digests[str(path)] = input_digest
            report.certificates.extend(certificates)
        return self._finish(report)

    # --- generate ---

    def run_generate(self, cfg: GeneratorConfig, out: Optional[Path] = None) -> RunReport:
        """Write a seeded instance with its provenance header."""
        report = self._report("generate", cfg.provenance())
        path = self.output_manager.resolve(out, f"{cfg.method.value}_seed{cfg.seed}.json")
        provenance = cfg.provenance()

        if cfg.method is GeneratorMethod.COMMUTING:
            family = gen_commuting_family(cfg)
            t = gen_rearrangement_weight(cfg)
            save_commuting_family(path, family, t, provenance)
            report.input_digests[str(path)] = digest(np.concatenate(family.members + [t]))
        elif cfg.method is GeneratorMethod.SEPARABLE_STATE:
            state = gen_separable_real_factor(cfg)
            save_separable_state(path, state, provenance)
            report.input_digests[str(path)] = digest(state.assemble())
        else:
            h = gen_hermitian_block_psd(cfg, on_event=self.console_ui.on_event)
            self.output_manager.save_instance(h, path, provenance)
            report.input_digests[str(path)] = digest(h.carrier)

        report.notes.append(f"instance written to {path}")
        return self._finish(report)

    # --- search ---

    def run_search(self, cfg: GeneratorConfig, run_self_test: bool = False, out: Optional[Path] = None) -> RunReport:
        """Best-effort search; absence of a positive gap is a valid outcome."""
        report = self._report("search", cfg.provenance())
        if run_self_test:
            report.notes.append(f"self-test gap on rank-one control: {self_test()!r}")

        result = search_counterexample_normal_blocks(cfg, on_event=self.console_ui.on_event)
        if result.evaluated == 0:
            report.notes.append("no candidate evaluated")
            return self._finish(report)

        report.notes.append(f"evaluated {result.evaluated} candidate(s); best gap {result.best_margin!r}")
        if result.found and result.instance is not None:
            path = self.output_manager.save_instance(
                result.instance,
                self.output_manager.resolve(out, f"normal_block_seed{cfg.seed}.json"),
                {**cfg.provenance(), "gap": result.best_margin},
            )
            report.input_digests[str(path)] = digest(result.instance.carrier)
            report.notes.append(f"instance with positive gap written to {path}")
        else:
            report.notes.append("no instance with positive gap found")
        return self._finish(report)
