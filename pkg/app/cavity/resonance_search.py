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
import logging
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Iterable
from typing import List
from typing import Optional

import numpy as np
from scipy.optimize import minimize_scalar

from .constants import DEFAULT_K_COUNT
from .constants import GOLDEN_TOLERANCE
from .constants import K_LOWER_BOUND
from .constants import MIN_K_COUNT
from .constants import RESONANCE_FLOOR
from .constants import WINDOW_FRACTION
from .constants import WINDOW_MIN_HALF_WIDTH
from .fabry_perot_functions import cavity_reflectivity_curve
from .model import GridRange
from .model import RmaxResult
from ..errors import ValidationError
from ..interface.model import QConvention
from ..spinor.constants import DEFAULT_MASS

logger = logging.getLogger(__name__)


def default_k_grid(e_a_over_m: float, count: int = DEFAULT_K_COUNT) -> GridRange:
    """Returns the search window around |k| = e|A|, where the reflectivity peaks."""
    half_width = max(WINDOW_MIN_HALF_WIDTH, WINDOW_FRACTION * e_a_over_m)
    return GridRange(max(K_LOWER_BOUND, e_a_over_m - half_width), e_a_over_m + half_width, count)


def find_rmax(m_tau: float, e_a_over_m: float, k_grid: Optional[GridRange] = None, mass: float = DEFAULT_MASS,
              q_convention: QConvention = QConvention.SIGNED, floor: float = RESONANCE_FLOOR,
              refine: bool = True) -> RmaxResult:
    """Locates the reflectivity maximum over |k| at fixed m tau and e|A|/m.

    The grid maximum is refined by a golden-section search on the bracket of its two neighbours. An
    argmax on the grid edge, or a bracket the search rejects, keeps the grid value.
    """
    grid = k_grid if k_grid is not None else default_k_grid(e_a_over_m)
    if grid.count < MIN_K_COUNT:
        raise ValidationError(f"Resonance search needs at least {MIN_K_COUNT} grid points, got {grid.count}")
    if grid.start < 0:
        raise ValidationError(f"Momentum magnitudes must be non-negative, got grid start {grid.start}")
    tau, e_a = m_tau / mass, e_a_over_m * mass
    if e_a == 0:
        return RmaxResult(e_a=e_a, tau=tau, k_star=grid.start, r_max=0.0, denom_magnitude=1.0, refined=False,
                          mass=mass)

    k = grid.values * mass
    curve = cavity_reflectivity_curve(k, e_a, tau, mass, q_convention, floor)
    reflectivity = curve.reflectivity
    best = int(np.argmax(reflectivity))
    k_star, r_max, denom = float(k[best]), float(reflectivity[best]), float(curve.denom_magnitude[best])

    refined = False
    if refine and 0 < best < len(k) - 1:
        def negative_reflectivity(trial_k):
            return -float(cavity_reflectivity_curve(trial_k, e_a, tau, mass, q_convention, floor).reflectivity[0])

        try:
            search = minimize_scalar(negative_reflectivity, bracket=(k[best - 1], k[best], k[best + 1]),
                                     method="golden", tol=GOLDEN_TOLERANCE / max(abs(k_star), K_LOWER_BOUND))
        except (ValueError, RuntimeError) as rejected:
            logger.warning("Golden refinement skipped at eA=%s tau=%s: %s", e_a, tau, rejected)
        else:
            if -search.fun >= r_max:
                k_star, r_max, refined = float(search.x), float(-search.fun), True
                denom = float(cavity_reflectivity_curve(k_star, e_a, tau, mass, q_convention).denom_magnitude[0])
    elif refine:
        logger.warning("Reflectivity maximum at the grid edge k=%s (eA=%s tau=%s); widen the grid", k_star, e_a, tau)

    result = RmaxResult(e_a=e_a, tau=tau, k_star=k_star / mass, r_max=r_max, denom_magnitude=denom, refined=refined,
                        mass=mass)
    logger.debug("Rmax at eA/m=%s m tau=%s: k*=%s R=%s eta=%s", e_a_over_m, m_tau, result.k_star, r_max, result.eta)
    return result


def _find_rmax_at(e_a_over_m: float, m_tau: float, k_count: int, mass: float, q_convention: QConvention,
                  floor: float) -> RmaxResult:
    return find_rmax(m_tau, e_a_over_m, default_k_grid(e_a_over_m, k_count), mass, q_convention, floor)


def scan_rmax(m_tau: float, e_a_values: Iterable[float], workers: int = 1, k_count: int = DEFAULT_K_COUNT,
              mass: float = DEFAULT_MASS, q_convention: QConvention = QConvention.SIGNED,
              floor: float = RESONANCE_FLOOR) -> List[RmaxResult]:
    """Runs find_rmax over a grid of e|A|/m values; results keep the order of e_a_values."""
    e_a_values = [float(value) for value in e_a_values]
    task = partial(_find_rmax_at, m_tau=m_tau, k_count=k_count, mass=mass, q_convention=q_convention, floor=floor)
    logger.info("Scanning %d eA values at m tau=%s with %d worker(s)", len(e_a_values), m_tau, workers)
    if workers <= 1:
        return [task(value) for value in e_a_values]
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(task, e_a_values))


def global_maximum(results: List[RmaxResult]) -> RmaxResult:
    """Returns the scan row with the largest reflectivity; the first one on ties."""
    if not results:
        raise ValidationError("Cannot take the maximum of an empty scan")
    return max(results, key=lambda result: result.r_max)

