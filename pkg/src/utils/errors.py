# !/usr/bin/env python3

from typing import Optional, Sequence


class CavityError(Exception):
    """base error of the package

    Attributes:
        exit_code (int): process exit code used by the command line front end
    """

    exit_code: int = 1


"""
Configuration and input errors (exit code 2)
"""


class ConfigError(CavityError, ValueError):
    """invalid configuration or user input

    Attributes:
        field (Optional[str]): dotted path of the offending config field
    """

    exit_code = 2

    def __init__(self, message: str, field: Optional[str] = None) -> None:
        """initiation

        Args:
            message (str): error message
            field (Optional[str], optional): dotted config path. Defaults to None.
        """
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


class ValidationError(ConfigError):
    """value outside its admissible domain"""


class OutOfRangeError(ConfigError):
    """query outside a tabulated grid"""


class TransitionParseError(ConfigError):
    """malformed row in a transition file

    Attributes:
        line_number (int): 1-based line of the offending row
    """

    def __init__(self, message: str, line_number: int) -> None:
        """initiation

        Args:
            message (str): error message
            line_number (int): 1-based line number
        """
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


"""
Numerical errors (exit code 3)
"""


class NumericalError(CavityError, ArithmeticError):
    """numerical evaluation failed"""

    exit_code = 3


class PassivityError(NumericalError):
    """negative spectral density beyond tolerance"""


class EvaluationError(NumericalError):
    """closed-form evaluation overflowed or produced non-finite values"""


class PoleError(NumericalError):
    """vanishing multiple-reflection denominator"""


class QuadratureError(NumericalError):
    """adaptive quadrature did not converge

    Attributes:
        estimate (float): achieved integral estimate
        error_bound (float): reported absolute error bound
    """

    def __init__(self, message: str, estimate: float, error_bound: float) -> None:
        """initiation

        Args:
            message (str): error message
            estimate (float): achieved estimate
            error_bound (float): error bound
        """
        self.reason = message
        self.estimate = estimate
        self.error_bound = error_bound
        super().__init__(
            f"{message} (estimate {estimate:.6e}, error bound {error_bound:.3e})"
        )


class RankDeficiencyError(NumericalError):
    """overlap matrix is not positive definite"""


class DegenerateBasisError(NumericalError):
    """dark orientation with nonzero overlap row"""


class InstabilityError(NumericalError):
    """negative squared eigenfrequency beyond tolerance"""


class BracketingError(NumericalError):
    """no sign change inside a radius bracket

    Attributes:
        lower_centers (Sequence[float]): peak centres at the lower bracket end
        upper_centers (Sequence[float]): peak centres at the upper bracket end
    """

    def __init__(
        self,
        message: str,
        lower_centers: Sequence[float] = (),
        upper_centers: Sequence[float] = (),
    ) -> None:
        """initiation

        Args:
            message (str): error message
            lower_centers (Sequence[float], optional): peak centres in eV. Defaults to ().
            upper_centers (Sequence[float], optional): peak centres in eV. Defaults to ().
        """
        self.lower_centers = list(lower_centers)
        self.upper_centers = list(upper_centers)
        lower = ", ".join(f"{c:.4f}" for c in self.lower_centers) or "none"
        upper = ", ".join(f"{c:.4f}" for c in self.upper_centers) or "none"
        super().__init__(
            f"{message}; peak centres [eV] at lower end: {lower}; at upper end: {upper}"
        )


"""
Capacity errors (exit code 4)
"""


class CapacityError(CavityError):
    """problem size above the configured cap"""

    exit_code = 4
