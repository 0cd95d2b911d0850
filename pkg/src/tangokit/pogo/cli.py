"""Command-line front end for the device-class code generator."""
from __future__ import annotations

import argparse
import sys

from ..model import DevFailed
from .definition import parse_definition
from .generator import generate, regenerate


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="pogo", description="Generate device-class skeletons from JSON definitions.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate", help="emit a fresh skeleton file set")
    p_gen.add_argument("definition", help="class definition JSON file")
    p_gen.add_argument("-o", "--out-dir", default=".", help="output directory")

    p_regen = sub.add_parser("regenerate",
                             help="re-emit skeletons, preserving protected regions")
    p_regen.add_argument("definition", help="class definition JSON file")
    p_regen.add_argument("-d", "--dir", default=".", help="directory holding generated sources")

    args = parser.parse_args(argv)
    try:
        definition = parse_definition(args.definition)
        if args.command == "generate":
            written = generate(definition, args.out_dir)
        else:
            written = regenerate(definition, args.dir)
    except DevFailed as exc:
        for err in exc.errors:
            print(f"pogo: {err.reason}: {err.description}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
