"""Exception and warning types shared across the package."""


class GravNoiseError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(GravNoiseError, ValueError):
    """Invalid specification or configuration.

    ``errors`` holds every problem found, as ``"section.field: message"``
    strings, not just the first one.
    """

    def __init__(self, errors):
        if isinstance(errors, str):
            errors = [errors]
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class PrecisionError(GravNoiseError, ValueError):
    """A step or resolution guard was violated.

    ``suggestion`` carries a value that would satisfy the guard.
    """

    def __init__(self, message, suggestion=None):
        self.suggestion = suggestion
        if suggestion is not None:
            message = f"{message} (suggested value: {suggestion:.6g})"
        super().__init__(message)


class UnstableRegimeError(GravNoiseError, ArithmeticError):
    """Negative curvature component: locally exponential, not oscillatory.

    ``magnitude`` is c*sqrt(|R|), the growth rate a caller may reinterpret
    as an imaginary frequency.
    """

    def __init__(self, magnitude):
        self.magnitude = float(magnitude)
        super().__init__(
            f"curvature component is negative; growth-rate magnitude {self.magnitude:.6g}"
        )


class LinearizationError(GravNoiseError, ValueError):
    """A perturbative quantity left the linear regime."""


class NormalizationError(GravNoiseError, ArithmeticError):
    """The metric quadratic form did not yield a positive real integral.

    ``value`` is the offending integral.
    """

    def __init__(self, message, value):
        self.value = value
        super().__init__(f"{message} (integral = {value!r})")


class DecompositionError(GravNoiseError, RuntimeError):
    """Amplitude nodes fragment the grid; phase unwrapping is ill-defined.

    ``region_sizes`` lists the cell counts of the disconnected regions.
    """

    def __init__(self, message, region_sizes=()):
        self.region_sizes = list(region_sizes)
        super().__init__(message)


class NumericalError(GravNoiseError, RuntimeError):
    """A linear solve or similar numerical kernel failed."""


class LinearizationWarning(UserWarning):
    """Perturbation amplitude exceeds the configured linear-regime bound."""
