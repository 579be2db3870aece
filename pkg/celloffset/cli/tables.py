"""
pyoffset utilities / equilibria.

Usage:
    pyoffset utilities [options] [--method=<m>] [--raw]
    pyoffset equilibria [options] [--psi=<psi>]

Options:
   -h, --help
   -c, --config <file>       Scenario file (key = value lines)
   -o, --output <file>       Destination of the CSV table [default: -]
   --strict                  Exit with status 3 on infeasibility flags
   --method <m>              Utility evaluation: transform or nested [default: transform]
   --raw                     Dump every memoized utility with its full key
   --psi <psi>               Override the scenario threshold (both users in the two-user game)
"""

import logging

from docopt import docopt

from .. import __version__
from ..engine import UNCONDITIONED, ScenarioUtilities, UtilityTable
from ..errors import ParameterError
from ..metrics import bs_utility
from ..model import STATES, Policy, PolicyStatistics
from ..solvers.equilibrium import check_no_deviation, equilibria
from .config import load_scenario
from .csvout import emit_csv

logger = logging.getLogger(__name__)

UTILITY_HEADER = ("player", "descriptor", "state", "psi", "utility")
EQUILIBRIUM_HEADER = ("profile", "case_label", "k_cc", "k_wc", "bs_utility", "min_margin", "deviation_check")
RAW_HEADER = ("descriptor", "state", "lambda", "psi", "opponent_lambda", "opponent_psi", "method", "utility")


def _number(args, name):
    value = args[name]
    if value is None:
        return None
    try:
        return float(value)
    except ValueError:
        raise ParameterError(f"{name.lstrip('-')} must be a number, got {value!r}")


def utility_rows(utilities: ScenarioUtilities):
    """Every utility the equilibrium conditions of the scenario refer to."""
    scenario = utilities.scenario
    if scenario.two_user:
        players = (0, 1)
        descriptors = [Policy.WW, Policy.WC, Policy.CC]
    else:
        players = (0,)
        n = scenario.n
        descriptors = [(k1, k2) for k1 in range(n) for k2 in range(n - k1)]
    for player in players:
        psi = scenario.users[player].psi
        for descriptor in descriptors:
            label = _descriptor_label(descriptor)
            for state in STATES + (UNCONDITIONED,):
                yield player + 1, label, state, psi, utilities.value(descriptor, state, player)


def _descriptor_label(descriptor) -> str:
    return descriptor.name if isinstance(descriptor, Policy) else f"[{descriptor[0]},{descriptor[1]}]"


def table_rows(table: UtilityTable):
    """Every memoized utility, sorted so the dump does not depend on evaluation order."""
    rows = []
    for (descriptor, state, user, opp, _sys, _tol, method), value in table.entries():
        rows.append((_descriptor_label(descriptor), state, user.lam, user.psi, opp.lam, opp.psi, method, value))
    return sorted(rows, key=lambda row: tuple(str(cell) for cell in row[:7]))


def _profile_counts(profile):
    if isinstance(profile, PolicyStatistics):
        return profile.k_cc, profile.k_wc
    return sum(p is Policy.CC for p in profile), sum(p is Policy.WC for p in profile)


def main(argv) -> int:
    """Run the utilities or equilibria command; ``argv`` starts with the command name."""
    args = docopt(__doc__, version=f"pyoffset version {__version__}", argv=argv)
    scenario = load_scenario(args["--config"])

    if args["utilities"]:
        if args["--method"] not in ("transform", "nested"):
            raise ParameterError(f"method must be transform or nested, got {args['--method']!r}")
        utilities = ScenarioUtilities(scenario, method=args["--method"])
        rows = list(utility_rows(utilities))
        if args["--raw"]:
            emit_csv(RAW_HEADER, table_rows(utilities.table), args["--output"])
        else:
            emit_csv(UTILITY_HEADER, rows, args["--output"])
        logger.info(f"wrote {len(rows)} utilities ({utilities.table!r})")
        return 0

    psi = _number(args, "--psi")
    if psi is not None:
        scenario = scenario.with_psi(psi)
    utilities = ScenarioUtilities(scenario)
    rows = []
    for certificate in equilibria(scenario, utilities):
        report = check_no_deviation(certificate.profile, scenario, utilities)
        k_cc, k_wc = _profile_counts(certificate.profile)
        rows.append(
            (
                certificate.profile_label(),
                certificate.case_label,
                k_cc,
                k_wc,
                bs_utility(certificate.profile, users=scenario.users),
                certificate.min_margin,
                "pass" if report.passed else "fail",
            )
        )
    emit_csv(EQUILIBRIUM_HEADER, rows, args["--output"])
    return 0
