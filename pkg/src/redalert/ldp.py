"""Large-deviations machinery: rate functions, Chernoff-style tail bounds and
exact chi-square tails.

Exact tails are carried in natural-log domain so that probabilities near
exp(-1e4) (blocklength 1e4 in the acceptance runs) remain representable.
"""

import math
from dataclasses import dataclass
from typing import Literal

from scipy.special import erfc

from .errors import InvalidArgumentError
from .special import log_gammainc, log_gammaincc

Direction = Literal["upper_tail", "lower_tail"]

LOG2 = math.log(2.0)


@dataclass(frozen=True)
class TailBound:
    """Natural-log probability bound for one tail of a concentration event."""

    log_bound: float
    direction: Direction

    def __post_init__(self):
        # every Cramér-type bound here carries a prefactor of 2
        if self.log_bound > LOG2 + 1e-12:
            raise InvalidArgumentError(f"log_bound {self.log_bound} exceeds ln 2")


def chi_square_rate(b: float) -> float:
    """Rate function of a chi-square(1) sample mean: (b - 1 - ln b)/2."""
    if b <= 0:
        raise InvalidArgumentError(f"rate function needs b > 0, got {b}")
    return 0.5 * (b - 1.0 - math.log(b))


def gaussian_norm_tail_bound(
    n: int, noise_var: float, beta: float, direction: Direction
) -> TailBound:
    """Chernoff bound on the squared norm of an i.i.d. Gaussian vector.

    upper_tail bounds ln P(||z||^2 >= n N (1 + beta)); lower_tail bounds
    ln P(||z||^2 <= n N (1 - beta)). The bound itself is scale invariant,
    but the noise variance is validated because it defines the event.
    """
    if n < 1:
        raise InvalidArgumentError(f"blocklength must be >= 1, got {n}")
    if noise_var <= 0:
        raise InvalidArgumentError(f"noise variance must be positive, got {noise_var}")
    if direction == "upper_tail":
        if beta <= 0:
            raise InvalidArgumentError(f"upper tail needs beta > 0, got {beta}")
        exponent = 0.5 * (beta - math.log1p(beta))
    elif direction == "lower_tail":
        if not 0.0 < beta < 1.0:
            raise InvalidArgumentError(f"lower tail needs 0 < beta < 1, got {beta}")
        exponent = 0.5 * (-beta - math.log1p(-beta))
    else:
        raise InvalidArgumentError(f"unknown direction {direction!r}")
    return TailBound(log_bound=LOG2 - n * exponent, direction=direction)


def q_function(t: float) -> float:
    """Standard normal upper-tail probability P(Z >= t)."""
    return 0.5 * float(erfc(t / math.sqrt(2.0)))


def q_function_upper_bound(t: float) -> float:
    """Chernoff bound exp(-t^2/2)/2, valid (and strict) for t > 0."""
    if t <= 0:
        raise InvalidArgumentError(f"the Q-function bound needs t > 0, got {t}")
    return 0.5 * math.exp(-t * t / 2.0)


def log_chi_square_survival(n: int, x: float) -> float:
    """ln P(chi^2_n >= x), exact via the regularized upper incomplete gamma."""
    if n < 1:
        raise InvalidArgumentError(f"degrees of freedom must be >= 1, got {n}")
    if x < 0:
        raise InvalidArgumentError(f"threshold must be nonnegative, got {x}")
    return log_gammaincc(n / 2.0, x / 2.0)


def chi_square_survival(n: int, x: float) -> float:
    """P(chi^2_n >= x); underflows to 0.0 when the log value is below -745."""
    return math.exp(min(log_chi_square_survival(n, x), 0.0))


def log_chi_square_cdf(n: int, x: float) -> float:
    """ln P(chi^2_n <= x), exact via the regularized lower incomplete gamma."""
    if n < 1:
        raise InvalidArgumentError(f"degrees of freedom must be >= 1, got {n}")
    if x < 0:
        raise InvalidArgumentError(f"threshold must be nonnegative, got {x}")
    if x == 0:
        return -math.inf
    return log_gammainc(n / 2.0, x / 2.0)
