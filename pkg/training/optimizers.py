"""
The ADAM optimizer.

Moments are kept per named parameter array; `adam_step()` updates the arrays in place so the
model sees the new values without rebuilding its parameter objects.
"""

from dataclasses import dataclass, field

import numpy as np

from median_gnn.exceptions import NonFiniteGradientError, ShapeError


@dataclass
class AdamState:
    """
    Optimizer state.

    Attributes:
        learning_rate (float): Step size.
        beta1 (float): Decay of the first-moment average.
        beta2 (float): Decay of the second-moment average.
        epsilon (float): Added to the root of the second moment.
        step (int): Number of updates applied so far.
        m (dict[str, np.ndarray]): First-moment estimates, shaped like the parameters.
        v (dict[str, np.ndarray]): Second-moment estimates, non-negative.
    """

    learning_rate: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    step: int = 0
    m: dict = field(default_factory=dict)
    v: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.learning_rate < 0:
            raise ValueError("learning rate must be non-negative")
        if not (0 <= self.beta1 < 1 and 0 <= self.beta2 < 1):
            raise ValueError("decay factors must lie in [0, 1)")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")

    @classmethod
    def for_params(cls, params, **hyperparameters):
        """Zero moments for every array of a name -> array mapping."""
        state = cls(**hyperparameters)
        for name, array in params.items():
            state.m[name] = np.zeros_like(array, dtype=np.float64)
            state.v[name] = np.zeros_like(array, dtype=np.float64)
        return state


def adam_step(state, params, grads):
    """
    Applies one ADAM update.

    t += 1; m = b1 m + (1 - b1) g; v = b2 v + (1 - b2) g^2; then
    param -= lr * m_hat / (sqrt(v_hat) + eps) with the bias-corrected m_hat and v_hat.

    All gradients are checked before any array changes, so a rejected step leaves the parameters
    and the state untouched.

    Args:
        state (AdamState): Optimizer state; updated.
        params (dict[str, np.ndarray]): Parameter arrays; updated in place.
        grads (dict[str, np.ndarray]): Gradients with the same names and shapes.

    Returns:
        AdamState: The state.

    Raises:
        ShapeError: If names or shapes of params, grads and state differ.
        NonFiniteGradientError: If a gradient has NaN or infinite entries.
    """
    if set(params) != set(grads):
        raise ShapeError(f"gradients for {sorted(grads)} do not match parameters {sorted(params)}")
    for name, array in params.items():
        grad = np.asarray(grads[name])
        if grad.shape != array.shape:
            raise ShapeError(f"gradient of '{name}' has shape {grad.shape}, expected {array.shape}")
        if name not in state.m:
            state.m[name] = np.zeros_like(array, dtype=np.float64)
            state.v[name] = np.zeros_like(array, dtype=np.float64)
        if state.m[name].shape != array.shape:
            raise ShapeError(f"optimizer moments of '{name}' do not match its shape")
        if not np.all(np.isfinite(grad)):
            raise NonFiniteGradientError(name)

    state.step += 1
    correction1 = 1.0 - state.beta1**state.step
    correction2 = 1.0 - state.beta2**state.step
    for name, array in params.items():
        grad = np.asarray(grads[name], dtype=np.float64)
        state.m[name] = state.beta1 * state.m[name] + (1.0 - state.beta1) * grad
        state.v[name] = state.beta2 * state.v[name] + (1.0 - state.beta2) * grad**2
        m_hat = state.m[name] / correction1
        v_hat = state.v[name] / correction2
        array -= state.learning_rate * m_hat / (np.sqrt(v_hat) + state.epsilon)
    return state
