"""
pyoffset.

The most commonly used pyoffset commands are:
   utilities    Tabulate the conditional 3G utilities of a scenario
   equilibria   List every pure-strategy equilibrium with its certificate
   centralized  Base-station utility when every user is directed to 3G
   stackelberg  Threshold maximizing the expected number of 3G users
   noncoop      Two-user thresholds where each c-function meets v
   bound        Upper bound k** on k*
   sweep        Loads and utility over a grid of psi, n or v
   poa-curve    Price of anarchy of the Stackelberg design against n
   calibrate    k* and n* over a range of p / sigma2
   oracle       Monte-Carlo validation of the analytic utilities

See 'pyoffset help <command>' for more information on a specific command.

usage: pyoffset [--log-level=<lvl>] [--log-console] <command> [<args>...]

options:
   -h, --help
   --version
   --log-level <lvl>    DEBUG, INFO, WARNING, ERROR or CRITICAL [default: WARNING]
   --log-console        Also log to stderr
"""
import logging
import sys

from docopt import DocoptExit, docopt

from celloffset import __version__
from celloffset.errors import ConsistencyError, NumericalError, ParameterError
from celloffset.logging import log

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NUMERICAL = 2
EXIT_INFEASIBLE = 3


def _dispatch(command, argv) -> int:
    if command in ("utilities", "equilibria"):
        from celloffset.cli.tables import main
    elif command in ("centralized", "stackelberg", "noncoop", "bound"):
        from celloffset.cli.design import main
    elif command in ("sweep", "poa-curve", "calibrate"):
        from celloffset.cli.sweep import main
    elif command == "oracle":
        from celloffset.cli.oracle import main
    else:
        print(f"{command} is not a valid pyoffset command. See 'pyoffset help'", file=sys.stderr)
        return EXIT_INVALID
    return main([command] + list(argv))


def run(argv=None) -> int:
    """
    Parse ``argv`` and run one command.

    :return: 0 on success, 1 on invalid input, 2 on numerical failure, 3 on infeasibility with ``--strict``
    """
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = docopt(__doc__, argv=argv, version=f"pyoffset version {__version__}", options_first=True)
    except DocoptExit as e:
        print(e, file=sys.stderr)
        return EXIT_INVALID
    except SystemExit as e:
        return EXIT_OK if not e.code else EXIT_INVALID

    try:
        level = log.log_levels.parse(args["--log-level"])
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    log.set_package_level("celloffset", level, console_logging=args["--log-console"])

    command, rest = args["<command>"], args["<args>"]
    logger.debug(f"command: {command} {rest}")
    try:
        if command in ("help", None):
            if rest:
                return _dispatch(rest[0], ["--help"])
            docopt(__doc__, argv="--help")
            return EXIT_OK
        return _dispatch(command, rest)
    except DocoptExit as e:
        print(e, file=sys.stderr)
        return EXIT_INVALID
    except SystemExit as e:
        return EXIT_OK if not e.code else EXIT_INVALID
    except ParameterError as e:
        logger.error(f"{command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except (NumericalError, ConsistencyError) as e:
        logger.error(f"{command}: {e}")
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as e:
        logger.error(f"{command}: {e}")
        print(f"cannot write output: {e}", file=sys.stderr)
        return EXIT_NUMERICAL


def main():
    """Pyoffset entry point."""
    sys.exit(run())


if __name__ == "__main__":
    main()
