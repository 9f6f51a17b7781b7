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
import math
from dataclasses import dataclass
from dataclasses import field
from typing import Dict
from typing import Optional
from typing import Tuple

from .constants import CTC_VARIANTS
from .constants import DEFAULT_ALPHA
from .constants import DEFAULT_CTC_VARIANT
from ..cavity.model import CavityCoeffs
from ..errors import ValidationError
from ..spinor.model import Spinor2
from ..spinor.model import UnitaryMatrix2


@dataclass(frozen=True)
class GameOutcome:
    guess: float
    truth: float
    pattern: str
    joint_probability: float


@dataclass(frozen=True)
class GainReport:
    """Gains of the retrocausal guessing game."""
    gain: float
    classical_bound: float
    postselected_gain: float
    conditional_gain: float
    outcomes: Tuple[GameOutcome, ...] = ()
    likelihood_gain: float = math.nan
    monte_carlo_gain: Optional[float] = None
    monte_carlo_stderr: Optional[float] = None
    trials: int = 0

    @property
    def total_probability(self) -> float:
        return sum(outcome.joint_probability for outcome in self.outcomes)

    def to_json_dict(self) -> dict:
        return {
            "gain": self.gain,
            "classicalBound": self.classical_bound,
            "postselectedGain": self.postselected_gain,
            "conditionalGain": self.conditional_gain,
            "likelihoodGain": self.likelihood_gain,
            "monteCarloGain": self.monte_carlo_gain,
            "monteCarloStderr": self.monte_carlo_stderr,
            "trials": self.trials,
            "totalProbability": self.total_probability,
            "outcomes": [{"guess": outcome.guess, "truth": outcome.truth, "pattern": outcome.pattern,
                          "jointProbability": outcome.joint_probability} for outcome in self.outcomes],
        }


@dataclass(frozen=True)
class SwitchSpec:
    u_a: UnitaryMatrix2
    u_b: UnitaryMatrix2
    psi0: Spinor2
    xi: float
    cavity: CavityCoeffs
    momentum: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.xi):
            raise ValidationError(f"xi must be finite, got {self.xi}")
        if not (math.isfinite(self.momentum) and self.momentum > 0):
            raise ValidationError(f"Switch momentum must be positive, got {self.momentum}")


@dataclass(frozen=True)
class CtcSpec:
    unitary: UnitaryMatrix2
    xi: float
    cavity: CavityCoeffs
    alpha: float = DEFAULT_ALPHA
    input_spinor: Spinor2 = field(default_factory=lambda: Spinor2([1, 0]))
    variant: str = DEFAULT_CTC_VARIANT
    momentum: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.xi):
            raise ValidationError(f"xi must be finite, got {self.xi}")
        if not (math.isfinite(self.alpha) and self.alpha >= 0):
            raise ValidationError(f"alpha must be finite and non-negative, got {self.alpha}")
        if self.variant not in CTC_VARIANTS:
            raise ValidationError(f"CTC variant must be one of {CTC_VARIANTS}, got {self.variant!r}")
        if not (math.isfinite(self.momentum) and self.momentum > 0):
            raise ValidationError(f"CTC momentum must be positive, got {self.momentum}")


@dataclass(frozen=True)
class PairWeights:
    """Relative pair-channel weights P_i/P_v of the ring CTC."""
    weights: Dict[str, float]
    variant: str

    @property
    def vacuum_probability(self) -> float:
        return 1 / (1 + sum(self.weights.values()))
