"""
pyoffset centralized / stackelberg / noncoop / bound.

Usage:
    pyoffset centralized [options]
    pyoffset stackelberg [options] [--candidates]
    pyoffset noncoop [options]
    pyoffset bound [options] [--prefactor=<f>] [--n-max=<n>]

Options:
   -h, --help
   -c, --config <file>       Scenario file (key = value lines)
   -o, --output <file>       Destination of the CSV table [default: -]
   --strict                  Exit with status 3 on infeasibility flags
   --workers <n>             Threads for the candidate table
   --candidates              Emit the (k, l) candidate table instead of the outcome
   --prefactor <f>           Weight of the mean-rate term in the bound equation [default: 0.5]
   --n-max <n>               Search limit for k* and n* [default: 200]
"""

import logging

from docopt import docopt

from .. import __version__
from ..errors import ParameterError
from ..solvers.hierarchy import (
    centralized,
    find_kstar_nstar,
    kstar_upper_bound,
    noncooperative_two_user,
    stackelberg_multi,
    stackelberg_two_user,
)
from .config import load_scenario, with_settings
from .csvout import emit_csv

logger = logging.getLogger(__name__)

OUTCOME_HEADER = (
    "mode",
    "psi1",
    "psi2",
    "profile",
    "case_label",
    "bs_utility",
    "poa",
    "kstar",
    "nstar",
    "infeasible",
)
CANDIDATE_HEADER = ("k", "l", "psi", "value", "status")
BOUND_HEADER = ("kbound", "kplus", "no_solution", "kstar", "nstar")


def _integer(args, name):
    value = args[name]
    if value is None:
        return None
    try:
        return int(value)
    except ValueError:
        raise ParameterError(f"{name.lstrip('-')} must be an integer, got {value!r}")


def outcome_row(outcome):
    psi = outcome.psi_choice
    psi1, psi2 = psi if isinstance(psi, tuple) else (psi, None)
    return (
        outcome.mode,
        psi1,
        psi2,
        outcome.induced.profile_label(),
        outcome.induced.case_label,
        outcome.bs_utility,
        outcome.poa,
        outcome.kstar,
        outcome.nstar,
        outcome.infeasible,
    )


def main(argv) -> int:
    """Run one of the threshold-design commands; ``argv`` starts with the command name."""
    args = docopt(__doc__, version=f"pyoffset version {__version__}", argv=argv)
    scenario = with_settings(load_scenario(args["--config"]), workers=_integer(args, "--workers"))
    output = args["--output"]

    if args["bound"]:
        try:
            prefactor = float(args["--prefactor"])
        except ValueError:
            raise ParameterError(f"prefactor must be a number, got {args['--prefactor']!r}")
        bound = kstar_upper_bound(scenario, prefactor=prefactor)
        counts = find_kstar_nstar(scenario, _integer(args, "--n-max"))
        emit_csv(BOUND_HEADER, [(bound.kbound, bound.kplus, bound.no_solution, counts.kstar, counts.nstar)], output)
        return 3 if args["--strict"] and bound.no_solution else 0

    if args["centralized"]:
        outcome = centralized(scenario)
    elif args["noncoop"]:
        outcome = noncooperative_two_user(scenario)
    elif scenario.two_user:
        outcome = stackelberg_two_user(scenario)
    else:
        outcome = stackelberg_multi(scenario)

    if args["--candidates"]:
        rows = [(c.k, c.l, c.psi, c.value, c.status) for c in outcome.candidates]
        emit_csv(CANDIDATE_HEADER, rows, output)
    else:
        emit_csv(OUTCOME_HEADER, [outcome_row(outcome)], output)
    return 3 if args["--strict"] and outcome.infeasible else 0
