# !/usr/bin/env python3

import sys

from src.app.cli import CliBuilder


def main() -> int:
    """entry point of the cavity-polariton command"""
    return CliBuilder()()


if __name__ == "__main__":
    sys.exit(main())
