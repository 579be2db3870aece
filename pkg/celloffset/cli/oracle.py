"""
pyoffset oracle.

Usage:
    pyoffset oracle [options] [--cases=<k>] [--samples=<m>] [--seed=<s>]

Options:
   -h, --help
   -c, --config <file>       Scenario file (key = value lines)
   -o, --output <file>       Destination of the CSV table [default: -]
   --strict                  Exit with status 3 when fewer than 95% of the cases agree
   --workers <n>             Threads drawing sample blocks
   --cases <k>               Number of grid cases [default: 100]
   --samples <m>             Samples per case (default: mc_samples of the scenario)
   --seed <s>                Stream seed (default: seed of the scenario)
"""

import logging

from docopt import docopt

from .. import __version__
from ..errors import ParameterError
from ..oracle.montecarlo import validation_grid
from .config import load_scenario, with_settings
from .csvout import emit_csv

logger = logging.getLogger(__name__)

ORACLE_HEADER = ("case", "quantity", "descriptor", "state", "psi", "analytic", "mean", "stderr", "z_score", "passed")
REQUIRED_AGREEMENT = 0.95


def _integer(args, name):
    value = args[name]
    if value is None:
        return None
    try:
        return int(value)
    except ValueError:
        pass
    try:
        number = float(value)
    except ValueError:
        number = None
    if number is None or not number.is_integer():
        raise ParameterError(f"{name.lstrip('-')} must be an integer, got {value!r}")
    return int(number)


def main(argv) -> int:
    """Compare analytic utilities with Monte-Carlo estimates; ``argv`` starts with ``oracle``."""
    args = docopt(__doc__, version=f"pyoffset version {__version__}", argv=argv)
    scenario = with_settings(
        load_scenario(args["--config"]),
        workers=_integer(args, "--workers"),
        mc_samples=_integer(args, "--samples"),
        seed=_integer(args, "--seed"),
    )
    cases = _integer(args, "--cases")
    if cases < 1:
        raise ParameterError(f"cases must be positive, got {cases}")
    rows = validation_grid(scenario, cases)
    emit_csv(
        ORACLE_HEADER,
        [
            (
                r.case,
                r.quantity,
                r.descriptor,
                r.state,
                r.psi,
                r.analytic,
                r.estimate.mean,
                r.estimate.stderr,
                r.z_score,
                r.passed,
            )
            for r in rows
        ],
        args["--output"],
    )
    agreement = sum(r.passed for r in rows) / len(rows) if rows else 1.0
    if agreement < REQUIRED_AGREEMENT:
        logger.warning(f"only {agreement:.1%} of the oracle cases agree within four standard errors")
        if args["--strict"]:
            return 3
    return 0
