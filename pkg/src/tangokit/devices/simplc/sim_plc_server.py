"""Process entry for SimPLC device servers."""
import sys

from tangokit.server import run_server_main

try:
    from .sim_plc_device import build_class
except ImportError:
    from sim_plc_device import build_class


def main(argv=None):
    return run_server_main('SimPLC', [build_class()], argv)


if __name__ == "__main__":
    sys.exit(main())
