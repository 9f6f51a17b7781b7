"""Copyright (c) 2022 VIKTOR B.V.

Permission is hereby granted, free of charge, to any person obtaining a copy of this software and associated
documentation files (the "Software"), to deal in the Software without restriction, including without limitation the
rights to use, copy, modify, merge, publish, distribute, sublicense, and/or sell copies of the Software, and to permit
persons to whom the Software is furnished to do so, subject to the following conditions:

The above copyright notice and this permission notice shall be included in all copies or substantial portions of the
Software.

VIKTOR B.V. PROVIDES THIS SOFTWARE ON AN "AS IS" BASIS, WITHOUT WARRANTY OF ANY KIND, EXPRESS OR IMPLIED, INCLUDING BUT
NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY, FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT
SHALL THE AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER LIABILITY, WHETHER IN AN ACTION OF
CONTRACT, TORT OR OTHERWISE, ARISING FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
SOFTWARE.
"""
from viktor import UserError


class ValidationError(UserError):
    """Raised when an input lies outside the domain of an operation."""


class DegenerateModeError(ValidationError):
    """Raised when a plane-wave mode is requested at a degenerate point (negative energy at rest)."""


class NumericalError(Exception):
    """Base class for failures of a numerical procedure on valid input."""


class SingularSystemError(NumericalError):
    """Raised when a linear system is singular up to the configured condition-number limit."""

    def __init__(self, message: str, condition_number: float):
        super().__init__(f"{message} (condition number {condition_number:.3e})")
        self.detail = message
        self.condition_number = condition_number

    def __reduce__(self):
        return self.__class__, (self.detail, self.condition_number)


class ResonanceSingularityError(NumericalError):
    """Raised when the cavity denominator drops below the resonance floor."""

    def __init__(self, parameters: dict, denom_magnitude: float, floor: float):
        details = ", ".join(f"{key}={value!r}" for key, value in parameters.items())
        super().__init__(f"Resonance singularity: |denominator| = {denom_magnitude:.3e} < {floor:.1e} at {details}")
        self.parameters = parameters
        self.denom_magnitude = denom_magnitude
        self.floor = floor

    def __reduce__(self):
        return self.__class__, (self.parameters, self.denom_magnitude, self.floor)


class IntegrationError(NumericalError):
    """Raised when the time integration fails or does not converge under profile refinement."""

    def __init__(self, message: str, richardson_residual: float = float("nan")):
        super().__init__(f"{message} (Richardson residual {richardson_residual:.3e})")
        self.detail = message
        self.richardson_residual = richardson_residual

    def __reduce__(self):
        return self.__class__, (self.detail, self.richardson_residual)


class CompletenessError(NumericalError):
    """Raised when the probabilities of a complete outcome set do not sum to one."""

    def __init__(self, residual: float, tolerance: float):
        super().__init__(f"Outcome probabilities do not sum to one: residual {residual:.3e} > {tolerance:.1e}")
        self.residual = residual
        self.tolerance = tolerance

    def __reduce__(self):
        return self.__class__, (self.residual, self.tolerance)
