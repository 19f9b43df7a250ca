"""``bcauth-sim``: CLI entry points for the simulation harness."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from bcauth.bca import BcaConfig
from bcauth.harness import runs
from bcauth.resource import ResourceConfig


def _load_stack_config(path: str | None):
    if path is None:
        return None, None
    raw = json.loads(Path(path).read_text())
    bca = BcaConfig.from_dict(raw["bca"]) if "bca" in raw else None
    resource = ResourceConfig(**raw["resource"]) if "resource" in raw else None
    return bca, resource


def _write_out(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
        click.echo(f"wrote {out}")
    else:
        click.echo(text, nl=False)


@click.group()
def main() -> None:
    """Simulation harness for the biometric confidence authentication stack."""


@main.command()
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--users", type=int, default=1, show_default=True)
@click.option("--tx", "transactions", type=int, default=120, show_default=True)
@click.option("--good-fraction", type=float, default=1.0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="CSV output path.")
@click.option("--config", type=click.Path(exists=True, dir_okay=False), default=None)
def fig8(seed, users, transactions, good_fraction, out, config) -> None:
    """Confidence-level time series for a probe stream."""
    bca_cfg, rs_cfg = _load_stack_config(config)
    stack = runs.build_stack(bca_cfg, rs_cfg)
    try:
        csv_text = runs.run_fig8(users, transactions, good_fraction, seed, stack=stack)
    except (ValueError, RuntimeError) as exc:
        raise click.ClickException(str(exc))
    finally:
        stack.close()
    _write_out(csv_text, out)


@main.command("six-users")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--tx", "transactions", type=int, default=110, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="JSON output path.")
@click.option("--config", type=click.Path(exists=True, dir_okay=False), default=None)
def six_users(seed, transactions, out, config) -> None:
    """The six-user mixed-quality verification scenario."""
    bca_cfg, rs_cfg = _load_stack_config(config)
    stack = runs.build_stack(bca_cfg, rs_cfg)
    try:
        report = runs.run_six_users(seed, transactions, stack=stack)
    except (ValueError, RuntimeError) as exc:
        raise click.ClickException(str(exc))
    finally:
        stack.close()
    _write_out(json.dumps(report, indent=2) + "\n", out)
    ok = report["bca_chain_valid"] and report["replica_chain_valid"]
    ok = ok and report["ledger_transactions"] == 6
    for user, stats in report["users"].items():
        if stats["good_fraction"] >= 1.0 and stats["post_warmup_grant_rate"] < 0.95:
            ok = False
        if stats["good_fraction"] <= 0.0 and stats["post_warmup_grant_rate"] > 0.0:
            ok = False
    if not ok:
        click.echo("six-user scenario violated an expected property", err=True)
        sys.exit(1)


@main.command()
@click.option("--threshold", type=int, default=21_474, show_default=True,
              help="Finger threshold on the [0, MAXINT) scale.")
@click.option("--trials", type=int, default=10_000_000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def fpir(threshold, trials, seed, out) -> None:
    """Monte Carlo check of the threshold/FPIR relation."""
    try:
        report = runs.run_fpir_check(threshold, trials, seed)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    _write_out(json.dumps(report, indent=2) + "\n", out)
    if abs(report["z_score"]) >= 4.0:
        click.echo(f"calibration violated: |z| = {abs(report['z_score']):.2f}", err=True)
        sys.exit(1)


@main.command()
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def e2e(seed, out) -> None:
    """Full enrollment -> token -> resource flow across both servers."""
    report = runs.run_e2e(seed)
    _write_out(json.dumps(report, indent=2) + "\n", out)
    if not report["ok"]:
        failing = [c["name"] for c in report["checks"] if not c["ok"]]
        click.echo(f"e2e checks failed: {', '.join(failing)}", err=True)
        sys.exit(1)


if __name__ == "__main__":
    main()
