"""
pyoffset sweep / poa-curve / calibrate.

Usage:
    pyoffset sweep --param=<name> --from=<x> --to=<y> --steps=<k> [options] [--select=<rule>] [--weighted]
    pyoffset poa-curve [options] [--n-from=<n>] [--n-to=<n>]
    pyoffset calibrate [options] [--ratio-from=<r>] [--ratio-to=<r>] [--steps=<k>] [--n-max=<n>]

Options:
   -h, --help
   -c, --config <file>       Scenario file (key = value lines)
   -o, --output <file>       Destination of the CSV table [default: -]
   --strict                  Exit with status 3 on infeasibility flags
   --workers <n>             Threads evaluating grid points
   --param <name>            Swept parameter: psi, n or v
   --from <x>                First grid value
   --to <y>                  Last grid value
   --steps <k>               Number of grid values, endpoints included
   --select <rule>           Equilibrium reported per point: first or max-load [default: first]
   --weighted                Report demand-weighted loads
   --n-from <n>              Smallest population [default: 2]
   --n-to <n>                Largest population [default: 50]
   --ratio-from <r>          Smallest p / sigma2 [default: 0.1]
   --ratio-to <r>            Largest p / sigma2 [default: 100]
   --n-max <n>               Search limit for k* and n* [default: 200]
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Tuple

import numpy as np
from docopt import docopt

from .. import __version__
from ..engine import ScenarioUtilities, UtilityTable
from ..errors import ParameterError
from ..metrics import bs_utility, price_of_anarchy, system_loads
from ..model import PolicyStatistics
from ..solvers.equilibrium import multi_user_equilibria
from ..solvers.hierarchy import calibrate_snr, poa_curve
from .config import SweepSpec, load_scenario, round_significant, with_settings
from .csvout import emit_csv

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ("psi", "k_cc", "k_wc", "load_3g", "load_wifi", "bs_utility", "poa", "case_label")
POA_HEADER = ("n", "psi", "k_cc", "k_wc", "bs_utility", "poa", "kstar", "nstar", "infeasible")
CALIBRATION_HEADER = ("ratio", "kstar", "nstar", "hit")
SELECT_RULES = ("first", "max-load")
DEFAULT_CALIBRATION_STEPS = 50


def _parse(args, name, kind):
    value = args[name]
    if value is None:
        return None
    try:
        return kind(value)
    except ValueError:
        expected = "an integer" if kind is int else "a number"
        raise ParameterError(f"{name.lstrip('-')} must be {expected}, got {value!r}")


def _map(fn, items, workers):
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


def sweep_header(parameter: str) -> Tuple[str, ...]:
    """Psi sweeps use the fixed column set; n and v sweeps lead with the swept value."""
    if parameter == "psi":
        return SWEEP_COLUMNS
    return (parameter,) + SWEEP_COLUMNS


def sweep_rows(spec: SweepSpec, select: str = "first", weighted: bool = False):
    """One row per grid value, in grid order, laid out as :func:`sweep_header`."""
    if select not in SELECT_RULES:
        raise ParameterError(f"select must be one of {', '.join(SELECT_RULES)}, got {select!r}")
    table = UtilityTable(spec.scenario.quad_tol)

    def row(value):
        scenario = spec.at(value)
        user = scenario.user
        found = multi_user_equilibria(scenario, ScenarioUtilities(scenario, table))
        loads = [system_loads(c.profile, user.psi, user, weighted=weighted) for c in found]
        pick = 0
        if select == "max-load":
            pick = max(range(len(found)), key=lambda i: (loads[i].load_3g, -i))
        certificate, load = found[pick], loads[pick]
        statistics: PolicyStatistics = certificate.profile
        utility = bs_utility(statistics, user.psi, user)
        columns = (
            user.psi,
            statistics.k_cc,
            statistics.k_wc,
            load.load_3g,
            load.load_wifi,
            utility,
            price_of_anarchy(utility, user, scenario.n),
            certificate.case_label,
        )
        return columns if spec.parameter == "psi" else (value,) + columns

    return _map(row, spec.values(), spec.scenario.workers)


def main(argv) -> int:
    """Run a grid command; ``argv`` starts with the command name."""
    args = docopt(__doc__, version=f"pyoffset version {__version__}", argv=argv)
    scenario = with_settings(load_scenario(args["--config"]), workers=_parse(args, "--workers", int))
    output = args["--output"]

    if args["sweep"]:
        spec = SweepSpec(
            args["--param"],
            _parse(args, "--from", float),
            _parse(args, "--to", float),
            _parse(args, "--steps", int),
            scenario,
        )
        rows = sweep_rows(spec, args["--select"], args["--weighted"])
        emit_csv(sweep_header(spec.parameter), rows, output)
        return 0

    if args["poa-curve"]:
        if scenario.two_user:
            raise ParameterError("poa-curve runs on the symmetric game")
        curve = poa_curve(scenario, _parse(args, "--n-from", int), _parse(args, "--n-to", int))
        rows = []
        for n, outcome in curve:
            statistics = outcome.induced.profile
            rows.append(
                (
                    n,
                    outcome.psi_choice,
                    statistics.k_cc,
                    statistics.k_wc,
                    outcome.bs_utility,
                    outcome.poa,
                    outcome.kstar,
                    outcome.nstar,
                    outcome.infeasible,
                )
            )
        emit_csv(POA_HEADER, rows, output)
        return 3 if args["--strict"] and any(o.infeasible for _, o in curve) else 0

    if scenario.two_user:
        raise ParameterError("calibrate runs on the symmetric game")
    low, high = _parse(args, "--ratio-from", float), _parse(args, "--ratio-to", float)
    steps = _parse(args, "--steps", int) or DEFAULT_CALIBRATION_STEPS
    if not 0 < low < high or steps < 2:
        raise ParameterError("calibration needs 0 < ratio-from < ratio-to and at least 2 steps")
    ratios = [round_significant(float(r)) for r in np.geomspace(low, high, steps)]
    rows = calibrate_snr(scenario, ratios, n_max=_parse(args, "--n-max", int))
    emit_csv(CALIBRATION_HEADER, [(r.ratio, r.kstar, r.nstar, r.hit) for r in rows], output)
    if not any(r.hit for r in rows):
        logger.warning("no ratio reproduces k* = 12, n* = 41")
    return 0
