"""Console UI for reports, decompositions and search progress."""
import logging
from typing import List, Optional

from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.table import Table
from rich.text import Text

from src.core.events import (
    CounterexampleFoundEvent,
    HermblockEvent,
    ProjectionConvergedEvent,
    ProjectionProgressEvent,
    SearchRestartEvent,
)
from src.core.models import CertificateReport, DecompositionSummary, RunReport


def configure_logging(verbose: bool = False, quiet: bool = False) -> None:
    """Route library logging through rich."""
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(rich_tracebacks=True, show_path=verbose)],
        force=True,
    )


class ConsoleUI:
    """Console UI for certificates, decompositions and progress events."""

    def __init__(self, verbose: bool = True, console: Optional[Console] = None):
        """
        Initialize console UI.

        Args:
            verbose: Show per-item tables and progress events
            console: rich Console (default: stdout)
        """
        self.console = console or Console()
        self.verbose = verbose
        self.events: List[HermblockEvent] = []

    def display_header(self, title: str, subtitle: Optional[str] = None):
        """Display a header panel."""
        content = title
        if subtitle:
            content += f"\n[dim]{subtitle}[/dim]"

        panel = Panel(
            content,
            title="[bold cyan]hermblock[/bold cyan]",
            border_style="cyan"
        )
        self.console.print(panel)

    def display_certificate(self, report: CertificateReport):
        """Display one certificate with its per-item margins."""
        status = "[bold green]PASS[/bold green]" if report.passed else "[bold red]FAIL[/bold red]"
        if report.hypothesis_violated:
            status += " [yellow](hypothesis violated)[/yellow]"
        self.console.print(f"\n{report.name}: {status}  tolerance {report.tolerance:.3e}")

        if not self.verbose and report.passed:
            return

        table = Table(show_header=True, header_style="bold magenta")
        table.add_column("Item", style="cyan")
        table.add_column("lhs", justify="right")
        table.add_column("rhs", justify="right")
        table.add_column("margin", justify="right")

        for item in report.items:
            style = "red" if item.margin < -report.tolerance else "green"
            label = item.label if item.requires_hypothesis else f"{item.label} [dim](unconditional)[/dim]"
            table.add_row(label, f"{item.lhs:.12g}", f"{item.rhs:.12g}", Text(f"{item.margin:.3e}", style=style))

        self.console.print(table)

    def display_decomposition(self, summary: DecompositionSummary):
        """Display recomputed residuals of an emitted decomposition."""
        table = Table(title=f"{summary.kind} decomposition", show_header=True, header_style="bold green")
        table.add_column("Field", style="cyan")
        table.add_column("Value", style="white", justify="right")

        table.add_row("beta", str(summary.beta))
        table.add_row("n", str(summary.n))
        table.add_row("m (copies)", str(summary.m))
        table.add_row("weight", f"{summary.weight:.6g}")
        table.add_row(f"residual ({summary.residual_kind})", f"{summary.residual:.3e}")
        if summary.isometry_defects:
            table.add_row("max isometry defect", f"{max(summary.isometry_defects):.3e}")
        table.add_row("materialized", "yes" if summary.materialized else "no (structured)")
        if summary.padded_from:
            table.add_row("padded from", str(summary.padded_from))

        self.console.print(table)

    def display_run(self, report: RunReport):
        """Display every part of a run report."""
        for summary in report.decompositions:
            self.display_decomposition(summary)
        for certificate in report.certificates:
            self.display_certificate(certificate)
        for note in report.notes:
            self.display_info(note)
        if report.wall_time is not None:
            self.console.print(f"[dim]wall time {report.wall_time:.3f} s[/dim]")

    def on_event(self, event: HermblockEvent):
        """Render a progress event."""
        self.events.append(event)

        if isinstance(event, CounterexampleFoundEvent):
            self.display_success(f"restart {event.restart}: gap {event.margin:.6e} > 0")
            return
        if not self.verbose:
            return
        if isinstance(event, SearchRestartEvent):
            self.console.print(
                f"[dim]restart {event.restart}: gap {event.margin:.3e} (best {event.best_margin:.3e})[/dim]"
            )
        elif isinstance(event, ProjectionProgressEvent):
            self.console.print(
                f"[dim]projection {event.iteration}: psd {event.psd_residual:.2e}, "
                f"subspace {event.subspace_residual:.2e}[/dim]"
            )
        elif isinstance(event, ProjectionConvergedEvent):
            self.display_info(f"projection converged after {event.iterations} iterations")

    def display_error(self, error: str):
        """Display an error message."""
        self.console.print(f"[bold red]Error:[/bold red] {error}")

    def display_warning(self, warning: str):
        self.console.print(f"[bold yellow]Warning:[/bold yellow] {warning}")

    def display_info(self, info: str):
        """Display an info message."""
        self.console.print(f"[cyan]ℹ[/cyan] {info}")

    def display_success(self, message: str):
        """Display a success message."""
        self.console.print(f"[green]✓[/green] {message}")
