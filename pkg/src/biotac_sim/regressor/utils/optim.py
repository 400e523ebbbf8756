from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from ...schema.constants import ADAM_DEFAULTS

Params = Dict[str, np.ndarray]


@dataclass
class AdamState:
    """First and second moment estimates plus the step counter."""

    t: int = 0
    m: Params = field(default_factory=dict)
    v: Params = field(default_factory=dict)


def adam_step(
    params: Params,
    grads: Params,
    state: AdamState,
    lr: float,
    beta1: float = ADAM_DEFAULTS["beta1"],
    beta2: float = ADAM_DEFAULTS["beta2"],
    epsilon: float = ADAM_DEFAULTS["epsilon"],
) -> Tuple[Params, AdamState]:
    """
    One bias-corrected Adam update, returning new parameters and state.

    Inputs are left untouched. On the first step with a scalar gradient ``g`` the
    update is ``-lr * g / (|g| + epsilon)``.
    """
    new_params = {k: v.copy() for k, v in params.items()}
    new_state = AdamState(
        t=state.t,
        m={k: v.copy() for k, v in state.m.items()},
        v={k: v.copy() for k, v in state.v.items()},
    )
    Adam(lr, beta1, beta2, epsilon, state=new_state).step(new_params, grads)
    return new_params, new_state


class Adam:
    """In-place Adam over a dict of parameter arrays."""

    def __init__(
        self,
        lr: float = 1e-3,
        beta1: float = ADAM_DEFAULTS["beta1"],
        beta2: float = ADAM_DEFAULTS["beta2"],
        epsilon: float = ADAM_DEFAULTS["epsilon"],
        state: Optional[AdamState] = None,
    ):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon
        self.state = state if state is not None else AdamState()

    def step(self, params: Params, grads: Params) -> None:
        s = self.state
        s.t += 1
        bc1 = 1.0 - self.beta1**s.t
        bc2 = 1.0 - self.beta2**s.t
        step_size = self.lr / bc1
        for k in params:
            g = grads[k]
            if k not in s.m:
                s.m[k] = np.zeros_like(params[k])
                s.v[k] = np.zeros_like(params[k])
            s.m[k] *= self.beta1
            s.m[k] += (1.0 - self.beta1) * g
            s.v[k] *= self.beta2
            s.v[k] += (1.0 - self.beta2) * (g * g)
            params[k] -= step_size * s.m[k] / (np.sqrt(s.v[k] / bc2) + self.epsilon)
