"""Non-feedback and feedback capacity of the noise-erasure channel."""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .entropy import (
    DEFAULT_L,
    conditional_entropy_given_indicator,
    entropy,
    entropy_rate_Z,
    memory_gain,
    ztilde_rate_bounds,
)
from .processes import NoiseModel, erasure_prob, ztilde_is_markov


@dataclass
class CapacityReport:
    """Capacity terms in bits per channel use.

    ``C_lower``/``C_upper`` coincide when the erasure-indicator entropy rate
    is known exactly (memoryless noise, or an indicator process that is
    itself Markov); otherwise they come from ``l``-block bounds.
    """

    q: int
    eps: float
    entropy_rate_Z: float
    Ztilde_rate_lower: float
    Ztilde_rate_upper: float
    exact: bool
    C_lower: float
    C_upper: float
    C_DMC: float
    gain_lower: float
    gain_upper: float
    gain_strict: bool
    l: int

    @property
    def C(self) -> float:
        """Point value; the upper end of the bracket when not exact."""
        return self.C_upper

    @property
    def C_FB(self) -> float:
        return self.C

    def to_dict(self, unit: str = "bits") -> dict:
        scale = {"bits": 1.0, "nats": float(np.log(2.0))}[unit]
        out = asdict(self)
        for k, v in out.items():
            if isinstance(v, float):
                out[k] = v * scale
        out.update(unit=unit, C=self.C * scale, C_FB=self.C_FB * scale)
        return out


def nec_capacity(model: NoiseModel, l: int = DEFAULT_L) -> CapacityReport:
    eps = erasure_prob(model)
    log_q = float(np.log2(model.q))
    hz = entropy_rate_Z(model)
    lo, hi = ztilde_rate_bounds(model, l)
    base = (1 - eps) * log_q - hz
    gain = memory_gain(model, l)
    return CapacityReport(
        q=model.q,
        eps=eps,
        entropy_rate_Z=hz,
        Ztilde_rate_lower=lo,
        Ztilde_rate_upper=hi,
        exact=(not model.is_markov) or ztilde_is_markov(model),
        C_lower=base + lo,
        C_upper=base + hi,
        C_DMC=(1 - eps) * log_q - conditional_entropy_given_indicator(model),
        gain_lower=gain.lower,
        gain_upper=gain.upper,
        gain_strict=gain.strict,
        l=l,
    )


def single_letter_output_entropy(p_x, model: NoiseModel, theta_table: np.ndarray) -> float:
    """``H(Y)`` for input law ``p_x`` and independent noise with the model's marginal."""
    py = np.zeros(model.n_states)
    for x, px in enumerate(p_x):
        np.add.at(py, theta_table[x], px * model.marginal)
    return entropy(py / py.sum())

