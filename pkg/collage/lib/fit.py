import math
import time
from typing import Callable, List, Literal, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, PositiveFloat, PositiveInt

from algebra.lib.algebra import TemplateAlgebra
from algebra.lib.evaluate import total_value
from algebra.lib.grounding import Example
from algebra.utils.errors import NonFiniteLoss, TemplateError, UsageError
from shared import const
from shared.helpers import make_rng, progress
from shared.lprint import lprint
from .algebra import collage_template
from .raster import UNIT_VIEWPORT, Viewport


class FitConfig(BaseModel):
    step: PositiveFloat = 0.05
    max_iters: PositiveInt = 500
    fd_epsilon: PositiveFloat = const.FD_EPSILON
    tolerance: PositiveFloat = const.LOSS_TOLERANCE
    resolution: PositiveInt = 64
    distance: Literal["symdiff", "hausdorff"] = "symdiff"
    smooth: bool = True
    seed: int | None = None

    def template(self, viewport: Viewport = UNIT_VIEWPORT) -> TemplateAlgebra:
        return collage_template(viewport, self.distance, self.resolution, self.smooth)


def _fitted_symbol(alg: TemplateAlgebra) -> str:
    open_symbols = [name for name in alg.uninterpreted() if alg.candidate_families[name].parameter_count]
    if len(open_symbols) != 1:
        raise UsageError(f"Fitting needs exactly one open parametric symbol, found {open_symbols}")
    return open_symbols[0]


def loss_function(alg: TemplateAlgebra, corpus: Sequence[Example]) -> Callable[[np.ndarray], float]:
    name = _fitted_symbol(alg)

    def loss(params: np.ndarray) -> float:
        return float(total_value(alg.instance({name: params}), corpus))
    return loss


def corpus_loss(params: Sequence[float], corpus: Sequence[Example], distance: str = "symdiff",
                resolution: int = const.RASTER_RESOLUTION, smooth: bool = False,
                viewport: Viewport = UNIT_VIEWPORT) -> float:
    """Mean distance between each target picture and its term under the parameterized F.

    Raises:
        EmptyCorpus: No examples.
        UsageError: `params` is not 24 long.
    """
    alg = collage_template(viewport, distance, resolution, smooth)
    return loss_function(alg, corpus)(np.asarray(params, dtype=float))


def _safe(loss: Callable[[np.ndarray], float], params: np.ndarray) -> float:
    try:
        value = loss(params)
    except TemplateError:
        return math.inf
    return value if math.isfinite(value) else math.inf


def fd_gradient(loss: Callable[[np.ndarray], float], params: np.ndarray, epsilon: float) -> np.ndarray:
    """Central finite differences, one coordinate at a time."""
    grad = np.zeros_like(params)
    for i in range(len(params)):
        step = np.zeros_like(params)
        step[i] = epsilon
        grad[i] = (_safe(loss, params + step) - _safe(loss, params - step)) / (2 * epsilon)
    return grad


def fit_transforms(alg: TemplateAlgebra, corpus: Sequence[Example], init: Sequence[float],
                   config: FitConfig = FitConfig()) -> Tuple[np.ndarray, List[float]]:
    """Fits the open collage operation of `alg` to a corpus by gradient descent.

    Each iteration takes a central finite-difference gradient and searches along it,
    halving the step until the loss decreases. The first trial step is the configured
    step, or twice the last accepted one if smaller. Descent stops when the loss falls
    below tolerance, after max_iters, or when no halving helps.

    Args:
        alg (TemplateAlgebra): A collage template with one open parametric symbol.
        corpus (Sequence[Example]): (δ[x, t], {picture}) examples.
        init (Sequence[float]): Starting parameters.
        config (FitConfig, optional): Optimizer settings.

    Raises:
        NonFiniteLoss: The loss or its gradient is not finite at the current parameters.

    Returns:
        Tuple[np.ndarray, List[float]]: Fitted parameters and the loss after every accepted step.
    """
    start = time.perf_counter()
    loss = loss_function(alg, corpus)
    params = np.asarray(init, dtype=float).copy()
    current = _safe(loss, params)
    if not math.isfinite(current):
        raise NonFiniteLoss("Loss is not finite at the initial parameters")
    trace = [current]
    last_step = config.step

    for _ in progress(range(config.max_iters), desc="fit"):
        if current < config.tolerance:
            break
        grad = fd_gradient(loss, params, config.fd_epsilon)
        if not np.all(np.isfinite(grad)):
            raise NonFiniteLoss("Finite-difference gradient is not finite")
        if not grad.any():
            break

        trial = min(config.step, 2 * last_step)
        accepted = False
        for _ in range(const.MAX_HALVINGS + 1):
            candidate = params - trial * grad
            value = _safe(loss, candidate)
            if value < current:
                params, current, last_step, accepted = candidate, value, trial, True
                break
            trial /= 2
        if not accepted:
            break
        trace.append(current)

    lprint("Info", start, f"fit: {len(trace) - 1} steps, loss {trace[0]:.6f} -> {current:.6f}")
    return params, trace


def perturb_params(params: Sequence[float], fraction: float, seed: int | None = None) -> np.ndarray:
    """Multiplies each coefficient by 1 + u, u uniform in [−fraction, fraction].

    Zero coefficients receive u itself.
    """
    params = np.asarray(params, dtype=float)
    noise = make_rng(seed).uniform(-fraction, fraction, size=params.shape)
    return np.where(params == 0.0, noise, params * (1.0 + noise))
