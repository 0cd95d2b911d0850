"""Process entry for TypesEcho device servers."""
import sys

from tangokit.server import run_server_main

try:
    from .types_echo_device import build_class
except ImportError:
    from types_echo_device import build_class


def main(argv=None):
    return run_server_main('TypesEcho', [build_class()], argv)


if __name__ == "__main__":
    sys.exit(main())
