"""Matcher configuration, one frozen dataclass for all three stages."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from erratum.dom.tokenize import TokenizerConfig


@dataclass(frozen=True)
class SftmConfig:
    """Defaults follow the matcher's reference parameterization.

    ``None`` means derive at runtime: the prune threshold from the tree
    sizes, the temperature from the median proposal magnitude, the
    penalty from the median pair score.
    """

    tokenizer: TokenizerConfig = field(default_factory=TokenizerConfig)
    prune_threshold: float | None = None
    weight_exponent: float = 1.0
    propagation_weight: float = 0.4
    propagation_rounds: int = 1
    iteration_factor: int = 30
    iteration_cap: int = 200_000
    initial_temperature: float | None = None
    cooling: float = 0.999
    no_match_penalty: float | None = None
    structural_completion: bool = True
    seed: int = 0

    def __post_init__(self) -> None:
        if self.weight_exponent <= 0:
            raise ValueError("weight_exponent must be positive")
        if not 0 <= self.propagation_weight:
            raise ValueError("propagation_weight must be non-negative")
        if self.propagation_rounds < 1:
            raise ValueError("propagation_rounds must be at least 1")
        if self.iteration_factor < 0 or self.iteration_cap < 0:
            raise ValueError("iteration budget must be non-negative")
        if not 0 < self.cooling <= 1:
            raise ValueError("cooling must be in (0, 1]")
        for name in ("prune_threshold", "initial_temperature", "no_match_penalty"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise ValueError(f"{name} must be positive when given")

    def resolve_prune_threshold(self, left_size: int, right_size: int) -> float:
        if self.prune_threshold is not None:
            return self.prune_threshold
        return max(64.0, math.sqrt(left_size * right_size))

    def to_json(self) -> dict:
        return {
            "pruneThreshold": self.prune_threshold,
            "weightExponent": self.weight_exponent,
            "propagationWeight": self.propagation_weight,
            "propagationRounds": self.propagation_rounds,
            "iterationFactor": self.iteration_factor,
            "iterationCap": self.iteration_cap,
            "initialTemperature": self.initial_temperature,
            "cooling": self.cooling,
            "noMatchPenalty": self.no_match_penalty,
            "structuralCompletion": self.structural_completion,
            "includeText": self.tokenizer.include_text,
        }
