"""Adam optimizer and reduce-on-plateau scheduling with early stop."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolation, TrainingError


@dataclass
class AdamState:
    learning_rate: float
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step: int = 0
    m: list = field(default_factory=list)
    v: list = field(default_factory=list)


def adam_step(state: AdamState, params: list[np.ndarray], grads: list[np.ndarray]):
    """One bias-corrected Adam update, in place on params."""
    if len(params) != len(grads):
        raise ContractViolation("params/grads length mismatch")
    if not state.m:
        state.m = [np.zeros_like(p) for p in params]
        state.v = [np.zeros_like(p) for p in params]
    for g in grads:
        if not np.all(np.isfinite(g)):
            raise TrainingError("non-finite gradient passed to adam_step")
    state.step += 1
    t = state.step
    bc1 = 1.0 - state.beta1 ** t
    bc2 = 1.0 - state.beta2 ** t
    for p, g, m, v in zip(params, grads, state.m, state.v):
        if p.shape != g.shape:
            raise ContractViolation("gradient shape mismatch")
        m *= state.beta1
        m += (1.0 - state.beta1) * g
        v *= state.beta2
        v += (1.0 - state.beta2) * g * g
        mhat = m / bc1
        vhat = v / bc2
        p -= state.learning_rate * mhat / (np.sqrt(vhat) + state.eps)
    return params, state


@dataclass
class PlateauSchedule:
    """Reduce lr by 0.8 after 2 stagnant epochs; stop after 4.

    Call once per epoch with the validation loss (lower is better).
    """

    factor: float = 0.8
    patience: int = 2
    stop_patience: int = 4
    best_loss: float = np.inf
    stagnant: int = 0

    def update(self, state: AdamState, validation_loss: float) -> bool:
        """Returns True if training should stop."""
        if validation_loss < self.best_loss:
            self.best_loss = validation_loss
            self.stagnant = 0
            return False
        self.stagnant += 1
        if self.stagnant % self.patience == 0:
            state.learning_rate *= self.factor
        return self.stagnant >= self.stop_patience
