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
import math
from concurrent.futures import ProcessPoolExecutor
from itertools import repeat
from typing import Dict
from typing import Tuple
from typing import Union

import numpy as np
from scipy.optimize import brentq

from .constants import CAUSAL_GAIN_BOUND
from .constants import CLASSICAL_GAIN_BOUND
from .constants import D1_D2_D3
from .constants import D1_ONLY
from .constants import D3_ONLY
from .constants import DEFAULT_SEED
from .constants import ELECTRON_PLUS_PAIR
from .constants import MC_CHUNK_SIZE
from .constants import R0
from .constants import REFLECTED
from .constants import THETA_MINUS
from .constants import THETA_PLUS
from .constants import TRANSMITTED
from .model import GainReport
from .model import GameOutcome
from ..amplitudes.amplitude_functions import compose_path
from ..amplitudes.amplitude_functions import normalize_report
from ..amplitudes.constants import BS_REFLECTION
from ..amplitudes.constants import BS_TRANSMISSION
from ..amplitudes.model import DiagramTerm
from ..amplitudes.model import ExperimentReport
from ..amplitudes.model import PhaseFactor
from ..amplitudes.model import VacuumSpec
from ..cavity.fabry_perot_functions import ideal_cavity
from ..cavity.model import CavityCoeffs
from ..errors import ValidationError

logger = logging.getLogger(__name__)

CavityLike = Union[CavityCoeffs, float]

PATTERNS = (D1_ONLY, D1_D2_D3, D3_ONLY)


def as_cavity(cavity: CavityLike) -> CavityCoeffs:
    """Returns the cavity itself, or the ideal cavity of reflectivity R when given a number."""
    if isinstance(cavity, CavityCoeffs):
        return cavity
    return ideal_cavity(float(cavity))


def phases_from_timing(chi: float, energy: float, t_a: float, t_b: float, cavity: CavityLike) -> Tuple[float, float]:
    """Returns (theta, xi) for a phase shifter chi and cavities at times t_A < t_B."""
    c = as_cavity(cavity)
    xi = chi - 2 * energy * (t_b - t_a)
    return xi + 2 * np.angle(c.r_tot) - np.angle(c.t_tot), xi


def xi_from_theta(theta: float, cavity: CavityLike) -> float:
    """Removes the cavity phase offset 2 arg r - arg t from theta."""
    c = as_cavity(cavity)
    return float(theta - 2 * np.angle(c.r_tot) + np.angle(c.t_tot))


def visibility(reflectivity: float) -> float:
    """Returns V = 2R sqrt(T)/(T + R^2) with T = 1 + R."""
    transmittivity = 1 + reflectivity
    return 2 * reflectivity * math.sqrt(transmittivity) / (transmittivity + reflectivity ** 2)


def golden_reflectivity() -> float:
    """Returns the reflectivity of unit visibility, root of 1 + R - R^2."""
    return brentq(lambda reflectivity: 1 + reflectivity - reflectivity ** 2, 1.0, 2.0, xtol=1e-15)


def interferometer_closed_form(reflectivity: float, theta: float) -> Dict[str, float]:
    """Returns the three outcome probabilities of the interferometer from their closed forms."""
    transmittivity = 1 + reflectivity
    p_v = 1 / (1 + reflectivity) ** 2
    modulation = (transmittivity + reflectivity ** 2) * visibility(reflectivity) * math.sin(theta)
    return {
        D1_ONLY: p_v / 2 * (transmittivity + reflectivity ** 2 + modulation),
        D1_D2_D3: p_v * reflectivity / 2 * (2 + reflectivity) - p_v / 2 * modulation,
        D3_ONLY: p_v * transmittivity / 2,
    }


def _cavity_vacuum(c: CavityCoeffs) -> ExperimentReport:
    """Outcomes without an incoming electron: nothing, a pair at the later cavity, a pair at the earlier one."""
    raw = {"vacuum": 1.0,
           "pair_at_B": abs(compose_path([DiagramTerm((c.r_tot_prime,))])) ** 2,
           "pair_at_A": abs(compose_path([DiagramTerm((c.t_tot_prime, c.r_tot))])) ** 2}
    return normalize_report("two_cavity_vacuum", raw, VacuumSpec.cavities(c.reflectivity, 2))


def double_cavity(cavity: CavityLike) -> ExperimentReport:
    """Electron crossing two identical temporal cavities A then B."""
    c = as_cavity(cavity)
    r, t, r_prime, t_prime = c.r_tot, c.t_tot, c.r_tot_prime, c.t_tot_prime
    raw = {
        REFLECTED: abs(compose_path([DiagramTerm((r, r_prime))])) ** 2,
        TRANSMITTED: abs(compose_path([DiagramTerm((t,))])) ** 2,
        ELECTRON_PLUS_PAIR: abs(compose_path([DiagramTerm((r_prime, r, r_prime), label="zigzag"),
                                              DiagramTerm((t, t_prime, r_prime), -1, label="exchange")])) ** 2,
    }
    return normalize_report("double_cavity", raw, VacuumSpec.cavities(c.reflectivity, 2),
                            diagnostics={"reflectivity": c.reflectivity, "vacuum": _cavity_vacuum(c)})


def interferometer_terms(c: CavityCoeffs, xi: float) -> Dict[str, Tuple[DiagramTerm, ...]]:
    """Returns the path diagrams of each detector pattern."""
    r, t, r_prime, t_prime = c.r_tot, c.t_tot, c.r_tot_prime, c.t_tot_prime
    shifter = PhaseFactor.shifter(xi)
    return {
        D1_ONLY: (DiagramTerm((BS_REFLECTION, r_prime, r, shifter), label="a"),
                  DiagramTerm((BS_TRANSMISSION, t), label="b")),
        D1_D2_D3: (DiagramTerm((BS_REFLECTION, r_prime, r, r_prime, shifter), label="d"),
                   DiagramTerm((BS_TRANSMISSION, t, r_prime), label="e"),
                   DiagramTerm((BS_REFLECTION, t, t_prime, r_prime, shifter), -1, label="f")),
        D3_ONLY: (DiagramTerm((BS_REFLECTION, t, shifter), label="c"),),
    }


def interferometer(cavity: CavityLike, theta: float) -> ExperimentReport:
    """Retrocausal interferometer; theta already contains the cavity offset 2 arg r - arg t."""
    if not math.isfinite(theta):
        raise ValidationError(f"theta must be finite, got {theta}")
    c = as_cavity(cavity)
    xi = xi_from_theta(theta, c)
    raw = {pattern: abs(compose_path(terms)) ** 2 for pattern, terms in interferometer_terms(c, xi).items()}
    diagnostics = {
        "theta": theta,
        "xi": xi,
        "reflectivity": c.reflectivity,
        "visibility": visibility(c.reflectivity),
        "closedForm": interferometer_closed_form(c.reflectivity, theta),
        "vacuum": _cavity_vacuum(c),
    }
    return normalize_report("interferometer", raw, VacuumSpec.cavities(c.reflectivity, 2), diagnostics=diagnostics)


def _certain_only_guess(pattern: str) -> Dict[float, float]:
    """Guess theta+ when D1 fires alone, where theta- never lands; toss a fair coin otherwise."""
    if pattern == D1_ONLY:
        return {THETA_PLUS: 1.0}
    return {THETA_PLUS: 0.5, THETA_MINUS: 0.5}


def _conditional_tables(cavity: CavityLike) -> Dict[float, Dict[str, float]]:
    return {theta: interferometer(cavity, theta).outcomes for theta in (THETA_PLUS, THETA_MINUS)}


def _play_chunk(seed: np.random.SeedSequence, trials: int, tables: Dict[float, Dict[str, float]]) -> int:
    """Plays `trials` rounds of the guessing game and returns the number of correct guesses."""
    rng = np.random.default_rng(seed)
    thetas = (THETA_PLUS, THETA_MINUS)
    truth = rng.integers(0, 2, trials)
    cumulative = np.array([np.cumsum([tables[theta][pattern] for pattern in PATTERNS]) for theta in thetas])
    cumulative[:, -1] = 1.0
    draws = rng.random(trials)
    pattern = np.minimum(np.sum(draws[:, None] >= cumulative[truth], axis=1), len(PATTERNS) - 1)
    coin = rng.integers(0, 2, trials)
    guess = np.where(pattern == PATTERNS.index(D1_ONLY), 0, coin)
    return int(np.sum(guess == truth))


def monte_carlo_gain(cavity: CavityLike, trials: int, seed: int = DEFAULT_SEED,
                     workers: int = 1) -> Tuple[float, float]:
    """Estimates the game gain by sampling; returns (gain, standard error).

    Trials are split into fixed-size chunks with seeds spawned from `seed`, so the estimate does not
    depend on the worker count.
    """
    if int(trials) != trials or trials <= 0:
        raise ValidationError(f"Monte Carlo needs a positive number of trials, got {trials}")
    trials = int(trials)
    tables = _conditional_tables(cavity)
    sizes = [MC_CHUNK_SIZE] * (trials // MC_CHUNK_SIZE)
    if trials % MC_CHUNK_SIZE:
        sizes.append(trials % MC_CHUNK_SIZE)
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))
    if workers <= 1:
        wins = sum(_play_chunk(child, size, tables) for child, size in zip(seeds, sizes))
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            wins = sum(executor.map(_play_chunk, seeds, sizes, repeat(tables)))
    gain = wins / trials
    return gain, math.sqrt(gain * (1 - gain) / trials)


def retro_game(cavity: CavityLike = R0, trials: int = None, seed: int = DEFAULT_SEED, workers: int = 1) -> GainReport:
    """Guessing game on the coin-selected phase theta+/- of the interferometer at unit visibility."""
    c = as_cavity(cavity)
    if abs(visibility(c.reflectivity) - 1) > 1e-9:
        logger.warning("Guessing game run at visibility %.6f; the certain-guess rule assumes 1",
                       visibility(c.reflectivity))
    tables = _conditional_tables(c)
    outcomes = []
    for truth, table in tables.items():
        for pattern in PATTERNS:
            for guess, guess_probability in _certain_only_guess(pattern).items():
                outcomes.append(GameOutcome(guess, truth, pattern, 0.5 * table[pattern] * guess_probability))
    gain = sum(outcome.joint_probability for outcome in outcomes if outcome.guess == outcome.truth)
    postselected = sum(outcome.joint_probability for outcome in outcomes
                       if outcome.pattern == D1_ONLY and outcome.guess == outcome.truth)
    p_d1_only = sum(0.5 * table[D1_ONLY] for table in tables.values())
    likelihood = sum(max(0.5 * table[pattern] for table in tables.values()) for pattern in PATTERNS)

    mc_gain, mc_stderr = None, None
    if trials is not None:
        mc_gain, mc_stderr = monte_carlo_gain(c, trials, seed, workers)
        logger.info("Monte Carlo gain %.6f +- %.6f over %d trials", mc_gain, mc_stderr, trials)
    return GainReport(gain=gain, classical_bound=CLASSICAL_GAIN_BOUND, postselected_gain=postselected,
                      conditional_gain=postselected / p_d1_only, outcomes=tuple(outcomes), likelihood_gain=likelihood,
                      monte_carlo_gain=mc_gain, monte_carlo_stderr=mc_stderr, trials=int(trials or 0))


def retro_game_closed_form(reflectivity: float = R0) -> float:
    """Returns 3/4 - R/(4(1+R)^2)."""
    return 0.75 - reflectivity / (4 * (1 + reflectivity) ** 2)


def gyni_gain(reflectivity: float) -> float:
    """Returns the guess-your-neighbour's-input gain R^2/(1+R)^2 of the zigzag channel."""
    if not (math.isfinite(reflectivity) and reflectivity >= 0):
        raise ValidationError(f"Reflectivity R must be finite and non-negative, got {reflectivity}")
    return reflectivity ** 2 / (1 + reflectivity) ** 2


def gyni_threshold() -> float:
    """Returns the reflectivity where the gain reaches the causal bound."""
    return brentq(lambda reflectivity: gyni_gain(reflectivity) - CAUSAL_GAIN_BOUND, 0.0, 10.0, xtol=1e-14)
