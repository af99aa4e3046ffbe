# !/usr/bin/env python3

import argparse
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

from src.app.commands import COMMANDS, build_command
from src.app.config import load_config
from src.utils import logging
from src.utils.errors import CapacityError, CavityError

DESCRIPTIONS = {
    "modes": "mode structure, resonance peaks and photon mode set of a spherical cavity",
    "spectrum": "polariton excitations and strength function in a spherical cavity",
    "purcell-planar": "Purcell enhancement against mirror spacing of a planar cavity",
    "tune-radius": "radius placing a spherical cavity resonance at a target energy",
    "geff": "effective coupling of a molecule family with per molecule re-tuning",
    "materials": "dielectric function and refractive index of the configured material",
}


class CliBuilder:
    """command line application builder

    Attributes:
        parser (argparse.ArgumentParser): argument parser with one subparser per command
    """

    def __init__(self) -> None:
        """initiation"""
        self.logger = logging.set_logger("warning")
        self.parser = self.build_parser()

    def __call__(self, argv: Optional[Sequence[str]] = None) -> int:
        """parse arguments and run a command

        Args:
            argv (Optional[Sequence[str]], optional): arguments. Defaults to sys.argv.

        Returns:
            int: exit code
        """
        args = self.parser.parse_args(argv)
        self.logger = logging.set_logger(args.log_level)

        try:
            config = load_config(args.config, self.overrides(args))
            runner = build_command(
                args.command,
                config=config,
                out_dir=Path(config.output),
                timestamp=not args.no_timestamp,
            )
            return runner()
        except CapacityError as err:
            self.logger.error("%s", err)
            self.logger.error("reduce grid.window_eV or grid.points_per_meV, or raise grid.capacity")
            print(f"error: {err}", file=sys.stderr)
            return err.exit_code
        except CavityError as err:
            self.logger.error("%s", err)
            print(f"error: {err}", file=sys.stderr)
            return err.exit_code

    def build_parser(self) -> argparse.ArgumentParser:
        """create argument parser"""
        parser = argparse.ArgumentParser(
            prog="cavity-polariton",
            description="Cavity coupling and polariton spectra from dyadic Green's functions",
        )
        subparsers = parser.add_subparsers(dest="command", required=True)
        for name in COMMANDS:
            subparser = subparsers.add_parser(name, help=DESCRIPTIONS[name])
            self.common_arguments(subparser)

        return parser

    @staticmethod
    def common_arguments(parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--config", type=Path, default=None, help="YAML run configuration")
        parser.add_argument("--out", type=Path, default=None, help="output directory")
        parser.add_argument(
            "--density", type=float, default=None, help="photon grid points per meV"
        )
        parser.add_argument(
            "--no-timestamp", action="store_true", help="omit the timestamp line in tables"
        )
        parser.add_argument(
            "--log-level",
            choices=["debug", "info", "warning", "error"],
            default="warning",
            help="console log level",
        )

    @staticmethod
    def overrides(args: argparse.Namespace) -> dict[str, Any]:
        """config overrides given by flags"""
        overrides: dict[str, Any] = {}
        if args.density is not None:
            overrides["grid.points_per_meV"] = args.density
        if args.out is not None:
            overrides["output"] = str(args.out)
        return overrides
