"""Exception types shared across the package."""


class TaubnutError(Exception):
    """Base class for all package errors."""


class ConfigError(TaubnutError, ValueError):
    """Invalid instanton data (bad mass, coincident centers, malformed file)."""


class JetDomainError(TaubnutError, ArithmeticError):
    """Jet arithmetic left its domain (zero denominator, nonpositive radicand)."""


class ExclusionBallError(TaubnutError, ValueError):
    """Evaluation requested inside the exclusion ball of a NUT center."""

    def __init__(self, center_index, distance, radius):
        self.center_index = int(center_index)
        self.distance = float(distance)
        self.radius = float(radius)
        super().__init__(
            f"point lies {distance:.3e} from center {center_index}, "
            f"inside its exclusion radius {radius:.3e}"
        )


class StringProximityError(TaubnutError, ValueError):
    """Evaluation requested too close to the Dirac string of a fixed chart."""

    def __init__(self, center_index, chart, angle, guard):
        self.center_index = int(center_index)
        self.chart = chart
        self.suggested_chart = "S" if chart == "N" else "N"
        super().__init__(
            f"point lies {angle:.3e} rad from the {chart} string of center "
            f"{center_index} (guard {guard:.3e}); use chart "
            f"{self.suggested_chart} or the automatic gauge"
        )


class QuadratureNodeError(TaubnutError, ValueError):
    """A quadrature node violates an admissibility guard."""


class ScheduleError(TaubnutError, ValueError):
    """A radius schedule is too short or otherwise unusable."""
