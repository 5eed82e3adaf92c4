"""Compiled recursions for one exponential kernel component.

All functions take strictly increasing event times. For a component with
decay rate beta and marks alpha, the excess intensity at event i is
beta * excitation[i].
"""

import numpy as np
from numba import njit


@njit(nogil=True, cache=True)
def forward(times: np.ndarray,
            alpha: np.ndarray,
            beta: float,
            ) -> tuple:
    """Return (excitation, lagged) at every event time.

    excitation[i] = sum_{j<i} alpha[j] exp(-beta (t_i - t_j))
    lagged[i] = sum_{j<i} alpha[j] (t_i - t_j) exp(-beta (t_i - t_j))
    """
    count = times.shape[0]
    excitation = np.zeros(count)
    lagged = np.zeros(count)
    for i in range(1, count):
        delta = times[i] - times[i - 1]
        decay = np.exp(-beta * delta)
        carry = excitation[i - 1] + alpha[i - 1]
        excitation[i] = decay * carry
        lagged[i] = decay * (lagged[i - 1] + delta * carry)
    return excitation, lagged


@njit(nogil=True, cache=True)
def backward(times: np.ndarray,
             weights: np.ndarray,
             beta: float,
             ) -> np.ndarray:
    """Return influence[j] = sum_{i>j} weights[i] exp(-beta (t_i - t_j))."""
    count = times.shape[0]
    influence = np.zeros(count)
    for j in range(count - 2, -1, -1):
        decay = np.exp(-beta * (times[j + 1] - times[j]))
        influence[j] = decay * (weights[j + 1] + influence[j + 1])
    return influence


@njit(nogil=True, cache=True)
def cumulative_compensator(times: np.ndarray,
                           alpha1: np.ndarray,
                           alpha2: np.ndarray,
                           mu: float,
                           beta1: float,
                           beta2: float,
                           ) -> np.ndarray:
    """Return the compensator at every event time (Lambda(t_i))."""
    count = times.shape[0]
    result = np.empty(count)
    excess1 = 0.0
    excess2 = 0.0
    previous = 0.0
    total = 0.0
    for i in range(count):
        delta = times[i] - previous
        decay1 = np.exp(-beta1 * delta)
        decay2 = np.exp(-beta2 * delta)
        # excess_c is the excess intensity just after the previous event
        total += mu * delta + excess1 * (1.0 - decay1) / beta1 \
            + excess2 * (1.0 - decay2) / beta2
        result[i] = total
        excess1 = excess1 * decay1 + alpha1[i] * beta1
        excess2 = excess2 * decay2 + alpha2[i] * beta2
        previous = times[i]
    return result
