"""CLI: fca-figures render --spec <file>."""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from .render import EmptyInputError, NamedColumnError, parse_spec, render


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def main(argv: Optional[list[str]] = None) -> int:
    parser = _Parser(prog="fca-figures")
    sub = parser.add_subparsers(dest="command", required=True)
    rend = sub.add_parser("render", help="render one figure from a spec file")
    rend.add_argument("--spec", required=True, help="flat key = value figure spec")
    args = parser.parse_args(argv)
    try:
        with open(args.spec) as fh:
            spec = parse_spec(fh.read())
        out = render(spec)
    except (OSError, ValueError, NamedColumnError, EmptyInputError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
