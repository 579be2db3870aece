"""Thin wrappers over scipy's adaptive quadrature with budget checks."""

import logging
import math

from scipy import integrate

from ..errors import QuadratureError

logger = logging.getLogger(__name__)

SUBDIVISION_LIMIT = 200


def integrate_interval(func, a, b, tol, what="integral"):
    """
    Integrate ``func`` over ``[a, b]`` (``b`` may be ``math.inf``) to absolute tolerance ``tol``.

    :param func: scalar integrand
    :param a: lower limit
    :param b: upper limit, finite or ``math.inf``
    :param tol: absolute error target
    :param what: label used in log and error messages
    :return: the integral
    :raises QuadratureError: when the error estimate stays above ten times ``tol``
    """
    if a == b:
        return 0.0
    result = integrate.quad(func, a, b, epsabs=tol, epsrel=0.0, limit=SUBDIVISION_LIMIT, full_output=1)
    value, abserr = result[0], result[1]
    if len(result) > 3:
        # quad reports a problem; accept it if the estimate still meets the target
        if not math.isfinite(value) or abserr > 10 * tol:
            raise QuadratureError(f"{what} did not converge: {result[3].splitlines()[0]}", residual=abserr)
        logger.debug(f"{what}: quad warning with abserr {abserr:.2e} accepted")
    if not math.isfinite(value):
        raise QuadratureError(f"{what} is not finite", residual=abserr)
    return value


def integrate_unit(func, tol, what="integral"):
    """Integrate over ``[0, 1]``, the image of every inverse-CDF substitution."""
    return integrate_interval(func, 0.0, 1.0, tol, what)


def integrate_half_line(func, tol, what="integral"):
    """Integrate over ``[0, inf)``."""
    return integrate_interval(func, 0.0, math.inf, tol, what)
