"""Command line entry point: ``titsgroup COMMAND DESCRIPTOR [flags]``.

DESCRIPTOR is inline descriptor text or a path to a descriptor file.
Exit codes: 0 all checks pass, 1 a check failed, 2 usage error.
"""
from __future__ import annotations

import os
import sys

import click

from .descriptor import DescriptorError, parse_descriptor
from .reports import COMMANDS, Flags, UsageError, dumps, render_text, run_command


def _load(text: str):
    if os.path.isfile(text):
        with open(text, encoding="utf-8") as fh:
            text = fh.read()
    return parse_descriptor(text)


@click.command(context_settings={"help_option_names": ["-h", "--help"]})
@click.argument("command", type=click.Choice(COMMANDS))
@click.argument("descriptor")
@click.option("--radius", default=6, show_default=True, type=click.IntRange(0), help="Word/ball radius.")
@click.option("--seed", default=0, show_default=True, type=int, help="Seed for sampled checks.")
@click.option("--include-e7", is_flag=True, help="Allow E7/E8 data.")
@click.option("--level", default=0, show_default=True, type=click.IntRange(0), help="Level n for emit-presentation.")
@click.option("--triples", default=500, show_default=True, type=click.IntRange(0), help="Random Hecke triples.")
@click.option("--format", "fmt", default="json", type=click.Choice(["json", "text"]), show_default=True)
@click.option("--timing/--no-timing", default=True, help="Include the timing block in JSON output.")
def main(command, descriptor, radius, seed, include_e7, level, triples, fmt, timing):
    """Run COMMAND on the group described by DESCRIPTOR."""
    try:
        desc = _load(descriptor)
        report, code = run_command(command, desc, Flags(radius, seed, include_e7, level, triples))
    except (DescriptorError, UsageError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    if not timing:
        report = {"report": report["report"]}
    click.echo(dumps(report) if fmt == "json" else render_text(report))
    sys.exit(code)


if __name__ == "__main__":
    main()
