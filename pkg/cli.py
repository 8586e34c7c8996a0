#!/usr/bin/env python3
"""
CLI for quadratic exponential equations over free and one-relator products.

This CLI provides commands to:
- Normalize an equation file to standard form with a normalized parameter system
- Compute a special resolution, one output file per resolvent
- Decide or search for solutions, and verify a given solution
- Validate pictures and report their curvature
- Print the boundary statistics and arc bounds of an equation
- Enumerate path-subgraphs of the Z-graph of a section catalog

Exit codes: 0 sat/valid, 1 unsat/invalid, 2 unknown/undecided, 3 error.

Usage:
    python cli.py normalize examples_data/exx_eqn.qeq
    python cli.py resolve examples_data/exx_eqn.qeq
    python cli.py decide examples_data/cyclic.qeq --backend cyclic
    python cli.py verify examples_data/exx_eqn.qeq examples_data/exx_eqn.sol
    python cli.py picture-check examples_data/annulus.qpic --alpha examples_data/annulus.alpha
    python cli.py bounds examples_data/exx_z.qeq
    python cli.py zgraph examples_data/exx_z.qeq examples_data/exx_z.qcat
    python cli.py --help
"""

import sys
import argparse
import json
import logging
from pathlib import Path
from typing import List, Optional

from tabulate import tabulate

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent))

from qexp.bounds import bounds as boundary_bounds, equation_chi
from qexp.config import QexpConfig, RunConfig, parse_backend
from qexp.curvature import assign_angles, boundary_curvature_bound, check_gauss_bonnet, curvature, interior_region_flat
from qexp.decide import SAT, UNSAT, decide_bounded, decide_cyclic_free, verify_solution
from qexp.exponential import homogeneous_equation
from qexp.formats import (
    emit_equation,
    emit_solution,
    parse_alpha,
    parse_catalog_file,
    parse_equation_file,
    parse_picture_file,
    parse_solution,
    write_equation_file,
)
from qexp.params import Retraction, is_consistent, normalize_system
from qexp.pictures import validate as validate_picture
from qexp.provenance_logger import ProvenanceLogger
from qexp.resolution import reduce_to_standard_form, special_resolution
from qexp.validators import sanitize_filename
from qexp.zmachine import basic_reduce_check, build_zgraph, path_subgraphs, section_system

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_UNKNOWN = 2
EXIT_ERROR = 3

VERDICT_EXIT = {SAT: EXIT_OK, UNSAT: EXIT_NEGATIVE}


class QexpCLI:
    """Command-line interface for the equation engine."""

    def __init__(self, config: Optional[QexpConfig] = None):
        self.config = config or QexpConfig()
        self.run_config: Optional[RunConfig] = None

    # Helpers ----------------------------------------------------------------

    def _output_dir(self, args, source: Path) -> Path:
        if getattr(args, "output_dir", None):
            out = Path(args.output_dir)
        else:
            out = self.config.output_root / sanitize_filename(source.stem)
        out.mkdir(parents=True, exist_ok=True)
        return out

    def _provenance(self) -> ProvenanceLogger:
        return ProvenanceLogger(self.config.provenance_log_path, timestamps=self.config.timestamps)

    def _run_config(self, args) -> RunConfig:
        names = ("eqfile", "solfile", "picfile", "catalog")
        inputs = [Path(getattr(args, name)) for name in names if getattr(args, name, None)]
        backend, box, length = None, None, None
        if getattr(args, "backend", None):
            backend, box, length = parse_backend(args.backend)
        # --box and --length override the bounds written into the backend name
        if getattr(args, "box", None) is not None:
            box = args.box
        if getattr(args, "length", None) is not None:
            length = args.length
        return RunConfig(
            subcommand=args.command,
            inputs=inputs,
            backend=backend,
            box_bound=self.config.box_bound if box is None else box,
            length_bound=self.config.length_bound if length is None else length,
            output_dir=Path(args.output_dir) if getattr(args, "output_dir", None) else None,
            verbosity=args.verbose,
            timestamps=self.config.timestamps,
        )

    # Commands ---------------------------------------------------------------

    def normalize(self, args) -> int:
        """Rewrite an equation into standard form with a normalized parameter system.

        Args:
            args: Parsed arguments with eqfile and optional output
        """
        _, W = parse_equation_file(Path(args.eqfile))
        child, _ = reduce_to_standard_form(W)
        child = child.with_L(normalize_system(child.L))
        if args.output:
            path = write_equation_file(child, Path(args.output), f"normalized from {Path(args.eqfile).name}")
            print(f"✓ Normalized equation written to {path}")
        else:
            print(emit_equation(child, f"normalized from {Path(args.eqfile).name}"), end="")
        self._provenance().log_run("normalize", "ok", {"input": Path(args.eqfile).name})
        return EXIT_OK

    def resolve(self, args) -> int:
        """Compute a special resolution and write each resolvent to its own file.

        Args:
            args: Parsed arguments with eqfile, output_dir and max_branches
        """
        source = Path(args.eqfile)
        _, W = parse_equation_file(source)
        provenance = self._provenance()
        recorded: List[str] = []

        def on_step(step):
            recorded.append(step.lemma)
            provenance.record(step)

        max_branches = args.max_branches or self.config.max_branches
        resolution = special_resolution(W, on_step=on_step, max_branches=max_branches)
        if not recorded and resolution.resolvents:
            provenance.log_step("resolve", "already special", "input", {"file": source.name})

        if not resolution.resolvents:
            print(f"\n✗ Empty resolution: {resolution.diagnostic}\n")
            provenance.log_run("resolve", UNSAT, {"input": source.name, "diagnostic": resolution.diagnostic})
            return EXIT_NEGATIVE

        out_dir = self._output_dir(args, source)
        stem = sanitize_filename(source.stem)
        rows = []
        for i, resolvent in enumerate(resolution.resolvents, start=1):
            path = out_dir / f"{stem}.r{i}.qeq"
            write_equation_file(
                resolvent.equation, path, f"resolvent {i} of {source.name} after {len(resolvent.history)} steps"
            )
            eq = resolvent.equation
            rows.append([i, path.name, len(resolvent.history), len(eq.system), len(eq.coefficients), eq.hl_length()])

        if recorded:
            print(f"\n✓ Special resolution of {source.name}: {len(rows)} equation(s) after {len(recorded)} step(s)\n")
        else:
            print(f"\n✓ {source.name} is already special\n")
        headers = ["#", "File", "Steps", "Words", "Coefficients", "HΛ-length"]
        print(tabulate(rows, headers=headers, tablefmt="grid"))
        print(f"\nOutput directory: {out_dir}\n")
        provenance.log_run("resolve", "ok", {"input": source.name, "resolvents": len(rows), "steps": len(recorded)})
        return EXIT_OK

    def decide(self, args) -> int:
        """Decide an equation with the cyclic backend or search it with the bounded one.

        Args:
            args: Parsed arguments with eqfile, backend, box, length and output_dir
        """
        source = Path(args.eqfile)
        _, W = parse_equation_file(source)
        if self.run_config.backend == "cyclic":
            verdict = decide_cyclic_free(W)
        else:
            verdict = decide_bounded(W, self.run_config.box_bound, self.run_config.length_bound)

        print(f"\n{'─' * 70}")
        print(f"  {source.name}: {verdict.status.upper()}  ({self.run_config.backend})")
        print(f"{'─' * 70}")
        if verdict.reason:
            print(f"  {verdict.reason}")
        if verdict.solution is not None:
            rows = [[f"l{pid}" if pid > 0 else f"t{-pid}", value]
                    for pid, value in sorted(verdict.solution.alpha.assignment.items())
                    if pid in W.parameters]
            rows += [[str(a), str(v)] for a, v in sorted(verdict.solution.phi.items()) if a.kind == "x"]
            if rows:
                print()
                print(tabulate(rows, headers=["Name", "Value"], tablefmt="grid"))
            path = self._output_dir(args, source) / f"{sanitize_filename(source.stem)}.sol"
            path.write_text(emit_solution(verdict.solution), encoding="utf-8")
            print(f"\n✓ Solution written to {path}")
        print()
        self._provenance().log_run("decide", verdict.status, {"input": source.name, "backend": self.run_config.backend})
        return VERDICT_EXIT.get(verdict.status, EXIT_UNKNOWN)

    def verify(self, args) -> int:
        """Check a solution file against an equation.

        Args:
            args: Parsed arguments with eqfile and solfile
        """
        _, W = parse_equation_file(Path(args.eqfile))
        solution = parse_solution(Path(args.solfile).read_text(encoding="utf-8"), W.product)
        ok = verify_solution(W, solution)
        mark = "✓" if ok else "✗"
        print(f"\n{mark} {Path(args.solfile).name} {'solves' if ok else 'does not solve'} {Path(args.eqfile).name}\n")
        self._provenance().log_run("verify", "valid" if ok else "invalid", {"input": Path(args.eqfile).name})
        return EXIT_OK if ok else EXIT_NEGATIVE

    def picture_check(self, args) -> int:
        """Validate a picture and report curvature.

        Args:
            args: Parsed arguments with picfile, alpha, length and output_dir
        """
        source = Path(args.picfile)
        picture = parse_picture_file(source)
        alpha = parse_alpha(Path(args.alpha).read_text(encoding="utf-8")) if args.alpha else Retraction()
        report = validate_picture(picture, alpha, self.run_config.length_bound)
        result = {"validation": report.as_dict()}

        print(f"\n{'─' * 70}")
        print(f"  {source.name}: {report.status.upper()}")
        print(f"{'─' * 70}")
        for error in report.errors:
            print(f"  ✗ {error}")
        for item in report.undecided:
            print(f"  ? {item}")

        if report.valid:
            angles = assign_angles(picture, alpha)
            curv = curvature(picture, angles)
            bounded = {bid: boundary_curvature_bound(picture, alpha, bid) for bid in picture.boundaries}
            not_flat = interior_region_flat(picture, angles)
            gauss_bonnet = check_gauss_bonnet(picture, angles)
            result["curvature"] = curv.as_dict()
            result["gauss_bonnet"] = gauss_bonnet
            result["boundary_bound"] = dict(sorted(bounded.items()))
            result["non_flat_interior_regions"] = not_flat
            rows = [["vertex", k, str(v)] for k, v in sorted(curv.vertices.items())]
            rows += [["region", k, str(v)] for k, v in sorted(curv.regions.items())]
            rows += [["boundary", k, f"{v} {'✓' if bounded[k] else '✗'}"] for k, v in sorted(curv.boundaries.items())]
            print()
            print(tabulate(rows, headers=["Kind", "Id", "κ / π"], tablefmt="grid"))
            print(f"\n  Total κ = {curv.total}π, 2χ(Σ) = {2 * picture.chi}  {'✓' if gauss_bonnet else '✗'}")

        path = self._output_dir(args, source) / f"{sanitize_filename(source.stem)}.report.json"
        path.write_text(json.dumps(result, indent=2, sort_keys=True, ensure_ascii=False) + "\n", encoding="utf-8")
        print(f"\nReport written to {path}\n")
        self._provenance().log_run("picture-check", report.status, {"input": source.name})
        return {"valid": EXIT_OK, "invalid": EXIT_NEGATIVE}.get(report.status, EXIT_UNKNOWN)

    def bounds(self, args) -> int:
        """Print the boundary statistics and arc bounds of an equation's coefficient images.

        Args:
            args: Parsed arguments with eqfile, chi and s_length
        """
        _, W = parse_equation_file(Path(args.eqfile))
        z = [W.beta[a] for a in W.coefficients]
        chi = equation_chi(W) if args.chi is None else args.chi
        stats = boundary_bounds(z, W.env, chi, args.s_length)
        rows = [[key, value] for key, value in stats.as_dict().items()]
        print()
        print(tabulate(rows, headers=["Statistic", "Value"], tablefmt="grid"))
        print()
        self._provenance().log_run("bounds", "ok", {"input": Path(args.eqfile).name, **stats.as_dict()})
        return EXIT_OK

    def zgraph(self, args) -> int:
        """Enumerate path-subgraphs of the Z-graph and check their parameter systems.

        Args:
            args: Parsed arguments with eqfile, catalog, start, limit and output_dir
        """
        source = Path(args.eqfile)
        _, W = parse_equation_file(source)
        catalog = parse_catalog_file(Path(args.catalog))
        if not catalog:
            raise ValueError(f"Catalog {args.catalog} declares no sections")
        z = [W.beta[a] for a in W.coefficients]
        G = build_zgraph(catalog, z)

        by_id = {section.id: section for section in catalog}
        names = [s.strip() for s in args.start.split(",")] if args.start else [catalog[0].id]
        unknown = [name for name in names if name not in by_id]
        if unknown:
            raise ValueError(f"Unknown section id(s) in --start: {', '.join(unknown)}")
        start = frozenset(by_id[name].left_marking for name in names)

        first = max(W.parameters, default=0) + 1
        _, H = homogeneous_equation(z, W.L, first)
        alpha_s = is_consistent(H)
        if alpha_s is None:
            raise ValueError("Homogeneous system of the coefficient images is inconsistent")

        rows = []
        lines = [f"# path-subgraphs of {source.name} with {Path(args.catalog).name}"]
        found = False
        for n, P in enumerate(path_subgraphs(G, start), start=1):
            if n > args.limit:
                break
            system, _ = section_system(alpha_s, P, z, G, first)
            alpha0 = basic_reduce_check(alpha_s, P, W.L, z, G, first)
            found = found or alpha0 is not None
            path = " ".join(G.section(e.label).id for e in P.path) or "-"
            loops = " ".join(G.section(e.label).id for e in P.loops) or "-"
            rows.append([n, path, loops, "✓" if alpha0 is not None else "✗"])
            lines.append(f"[subgraph {n}]")
            lines.append(f"path = {path}")
            lines.append(f"loops = {loops}")
            lines += system.lines()

        print()
        print(tabulate(rows, headers=["#", "Path", "Loops", "Consistent"], tablefmt="grid"))
        out = self._output_dir(args, source) / f"{sanitize_filename(source.stem)}.zgraph.txt"
        out.write_text("\n".join(lines) + "\n", encoding="utf-8")
        print(f"\nSystems written to {out}\n")
        self._provenance().log_run("zgraph", SAT if found else UNSAT, {"input": source.name, "subgraphs": len(rows)})
        return EXIT_OK if found else EXIT_NEGATIVE

    # Parser -----------------------------------------------------------------

    def build_parser(self) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(
            prog="qexp",
            description="Quadratic exponential equations over free and one-relator products",
            formatter_class=argparse.RawDescriptionHelpFormatter,
            epilog="""
Examples:
  python cli.py normalize examples_data/exx_eqn.qeq -o exx_eqn.std.qeq
  python cli.py resolve examples_data/exx_eqn.qeq --output-dir runs/exx
  python cli.py decide examples_data/cyclic.qeq --backend cyclic
  python cli.py decide examples_data/exx_eqn.qeq --backend bounded:6,2
  python cli.py verify examples_data/exx_eqn.qeq examples_data/exx_eqn.sol
  python cli.py picture-check examples_data/annulus.qpic --alpha examples_data/annulus.alpha
  python cli.py bounds examples_data/exx_z.qeq --chi 1
  python cli.py zgraph examples_data/exx_z.qeq examples_data/exx_z.qcat --start L1

Exit codes: 0 sat/valid, 1 unsat/invalid, 2 unknown/undecided, 3 error.
File formats are described in docs/formats.md.
            """
        )
        parser.add_argument("-v", "--verbose", action="count", default=0, help="More logging (-v info, -vv debug)")
        parser.add_argument("--output-root", help="Root directory for outputs and the provenance log")
        parser.add_argument("--no-timestamps", action="store_true", help="Timestamp-free provenance log")

        subparsers = parser.add_subparsers(dest="command", help="Command to run")

        # Normalize command
        normalize_parser = subparsers.add_parser("normalize", help="Standard form and normalized parameter system")
        normalize_parser.add_argument("eqfile", help="Equation file")
        normalize_parser.add_argument("-o", "--output", help="Output file (default: stdout)")
        normalize_parser.set_defaults(func=self.normalize)

        # Resolve command
        resolve_parser = subparsers.add_parser("resolve", help="Compute a special resolution")
        resolve_parser.add_argument("eqfile", help="Equation file")
        resolve_parser.add_argument("--output-dir", help="Directory for resolvent files")
        resolve_parser.add_argument("--max-branches", type=int, help="Branch budget (default: QEXP_MAX_BRANCHES)")
        resolve_parser.set_defaults(func=self.resolve)

        # Decide command
        decide_parser = subparsers.add_parser("decide", help="Decide or search for a solution")
        decide_parser.add_argument("eqfile", help="Equation file")
        decide_parser.add_argument("--backend", default="bounded",
                                   help="cyclic: exact, single cyclic factor per component; bounded or bounded:B,M: search")
        decide_parser.add_argument("--box", type=int, help="Parameter box B for the bounded backend")
        decide_parser.add_argument("--length", type=int, help="Word length bound M for the bounded backend")
        decide_parser.add_argument("--output-dir", help="Directory for the solution file")
        decide_parser.set_defaults(func=self.decide)

        # Verify command
        verify_parser = subparsers.add_parser("verify", help="Verify a solution file")
        verify_parser.add_argument("eqfile", help="Equation file")
        verify_parser.add_argument("solfile", help="Solution file")
        verify_parser.set_defaults(func=self.verify)

        # Picture-check command
        picture_parser = subparsers.add_parser("picture-check", help="Validate a picture and report curvature")
        picture_parser.add_argument("picfile", help="Picture file")
        picture_parser.add_argument("--alpha", help="Solution or alpha file evaluating the prime labels")
        picture_parser.add_argument("--length", type=int, help="Word length bound for region equations")
        picture_parser.add_argument("--output-dir", help="Directory for the JSON report")
        picture_parser.set_defaults(func=self.picture_check)

        # Bounds command
        bounds_parser = subparsers.add_parser("bounds", help="Boundary statistics and arc bounds")
        bounds_parser.add_argument("eqfile", help="Equation file")
        bounds_parser.add_argument("--chi", type=int, help="Euler characteristic (default: from the equation)")
        bounds_parser.add_argument("--s-length", type=int, help="Override the relator length |s|")
        bounds_parser.set_defaults(func=self.bounds)

        # Zgraph command
        zgraph_parser = subparsers.add_parser("zgraph", help="Path-subgraphs of a section catalog's Z-graph")
        zgraph_parser.add_argument("eqfile", help="Equation file whose coefficient images are the boundary labels")
        zgraph_parser.add_argument("catalog", help="Section catalog file")
        zgraph_parser.add_argument("--start", help="Comma-separated section ids whose left markings form the start vertex")
        zgraph_parser.add_argument("--limit", type=int, default=50, help="Maximum number of path-subgraphs")
        zgraph_parser.add_argument("--output-dir", help="Directory for the systems file")
        zgraph_parser.set_defaults(func=self.zgraph)

        return parser

    def run(self, argv: Optional[List[str]] = None) -> int:
        """Parse ``argv`` and run the command; returns the exit code."""
        parser = self.build_parser()
        args = parser.parse_args(argv)

        if not args.command:
            parser.print_help()
            return EXIT_OK

        if args.output_root:
            self.config = QexpConfig(Path(args.output_root))
        if args.no_timestamps:
            self.config.timestamps = False
        level = logging.DEBUG if args.verbose >= 2 else logging.INFO if args.verbose == 1 else self.config.log_level
        logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")

        try:
            self.run_config = self._run_config(args)
            self.run_config.validate()
            self.config.ensure_output_root()
            return args.func(args)
        except (ValueError, RuntimeError, OSError) as e:
            print(f"\n✗ Error: {e}\n")
            self._provenance().log_run(args.command, "error", {"error": str(e)})
            return EXIT_ERROR


def main():
    """Entry point for the CLI."""
    cli = QexpCLI()
    try:
        sys.exit(cli.run())
    except KeyboardInterrupt:
        print("\n\nInterrupted by user.")
        sys.exit(EXIT_ERROR)
    except Exception as e:
        print(f"\n✗ Error: {e}\n")
        sys.exit(EXIT_ERROR)


if __name__ == "__main__":
    main()
