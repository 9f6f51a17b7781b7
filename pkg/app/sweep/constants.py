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
from pathlib import Path

from ..experiments.constants import C_PORT
from ..experiments.constants import DEFAULT_ALPHA
from ..experiments.constants import DEFAULT_CTC_VARIANT
from ..experiments.constants import D1_D2_D3
from ..experiments.constants import D1_ONLY
from ..experiments.constants import D2_ONLY
from ..experiments.constants import D3_ONLY
from ..experiments.constants import ELECTRON_PLUS_PAIR
from ..experiments.constants import REFLECTED
from ..experiments.constants import THETA_PLUS
from ..experiments.constants import TRANSMITTED
from ..interface.model import QConvention

EXIT_SUCCESS = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

OUTPUT_DIR_ENV = "TEMPORAL_CAVITY_OUTPUT_DIR"
DEFAULT_LOG_LEVEL = "WARNING"
LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"

FLOAT_FORMAT = ".17g"
CSV_LINE_TERMINATOR = "\n"

DEFAULT_REFERENCE_POINTS = Path(__file__).resolve().parents[2] / "manifest" / "fixtures" / "reference_points.json"

# CSV schemas
CAVITY_SWEEP_COLUMNS = ("kOverM", "eAOverM", "mTau", "Rtot", "Ttot", "phaseR", "phaseT", "denomMag", "schwingerFlag")
RMAX_COLUMNS = ("eAOverM", "mTau", "kStar", "Rmax", "eta", "denomMag", "refined", "schwingerFlag")
GYNI_COLUMNS = ("R", "gain")
EXPERIMENT_TRAILER_COLUMNS = ("vacuumProbability", "sumCheck")

CAVITY_VARIABLES = ("kOverM", "eAOverM", "mTau")
SWEEP_VARIABLES = CAVITY_VARIABLES + ("theta", "xi", "R", "alpha")

# experiment -> (sweepable variables, outcome labels in report order)
EXPERIMENT_SWEEPS = {
    "cavity": (CAVITY_VARIABLES, ()),
    "double-cavity": (("R",), (REFLECTED, TRANSMITTED, ELECTRON_PLUS_PAIR)),
    "interferometer": (("theta", "R"), (D1_ONLY, D1_D2_D3, D3_ONLY)),
    "switch": (("xi", "R"), (D2_ONLY, D3_ONLY)),
    "ctc": (("xi", "R", "alpha"), (D1_ONLY, D3_ONLY)),
    "deutsch": (("xi", "R", "alpha"), (D1_ONLY, C_PORT)),
    "gyni": (("R",), ()),
}

# sweep points per worker task
SWEEP_CHUNKS_PER_WORKER = 4

# reference resonance at m tau = 1.5 reported in the literature
REFERENCE_M_TAU = 1.5
REFERENCE_RMAX = 143.13
REFERENCE_EA_AT_RMAX = 46.45
REFERENCE_ETA = 0.9862
RMAX_RELATIVE_TOLERANCE = 0.02
ETA_RELATIVE_TOLERANCE = 0.002
DEFAULT_LEDGER_EA_RANGE = "1:60:600"

# reflectivity peak location check
PEAK_K_RANGE = (0.1, 20.0, 1024)
PEAK_EA_OVER_M = 10.0
PEAK_M_TAU = 1.5
PEAK_RELATIVE_TOLERANCE = 0.25

LEDGER_RESIDUAL_TOLERANCE = 1e-8
Q_ZERO_OFFSET = 1e-7

DEFAULT_EXPERIMENT = "cavity"
CAVITY_DEFAULTS = {"kOverM": 10.0, "eAOverM": 10.0, "mTau": 1.5}
EXPERIMENT_DEFAULTS = {
    "theta": THETA_PLUS,
    "xi": 0.0,
    "alpha": DEFAULT_ALPHA,
    "gateA": "x",
    "gateB": "z",
    "gate": "h",
    "psi0": "1,0",
    "variant": DEFAULT_CTC_VARIANT,
    "momentum": 1.0,
    "qConvention": QConvention.SIGNED.value,
    "strict": True,
    "loopPhase": None,
}
Q_ZERO_TOLERANCE = 1e-5

# ODE check of the scanned resonance peak: widths 5e-3, 2.5e-3, 1.25e-3, halved once more if that does not converge
PEAK_ORACLE_WIDTH = 5e-3
PEAK_ORACLE_ATTEMPTS = 2
PEAK_ORACLE_TOLERANCE = 1e-3

CAVITY_COEFFICIENTS = ("r_tot", "t_tot", "r_tot_prime", "t_tot_prime")
