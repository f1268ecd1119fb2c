"""Request and response schemas.

Response field names follow the interchange formats (unmatchedLeft,
totalScore, oldXPath, groundTruth); request bodies stay plain snake_case
since they are this service's own contract.
"""

from __future__ import annotations

from pydantic import BaseModel, Field

from erratum.dom.tokenize import TokenizerConfig
from erratum.mutagen import ALL_KINDS, KIND_GROUPS
from erratum.sftm import SftmConfig
from erratum.water import WaterConfig


class MatcherParams(BaseModel):
    seed: int = 0
    propagation_weight: float = 0.4
    propagation_rounds: int = 1
    iteration_factor: int = 30
    iteration_cap: int = 200_000
    cooling: float = 0.999
    no_match_penalty: float | None = None
    prune_threshold: float | None = None
    structural_completion: bool = True
    include_text: bool = False

    def to_config(self) -> SftmConfig:
        return SftmConfig(
            tokenizer=TokenizerConfig(include_text=self.include_text),
            seed=self.seed,
            propagation_weight=self.propagation_weight,
            propagation_rounds=self.propagation_rounds,
            iteration_factor=self.iteration_factor,
            iteration_cap=self.iteration_cap,
            cooling=self.cooling,
            no_match_penalty=self.no_match_penalty,
            prune_threshold=self.prune_threshold,
            structural_completion=self.structural_completion,
        )


class BaselineParams(BaseModel):
    xpath_weight: float = 0.6
    attribute_weight: float = 0.25
    text_weight: float = 0.15
    threshold: float = 0.4
    max_candidates: int | None = None

    def to_config(self) -> WaterConfig:
        return WaterConfig(
            xpath_weight=self.xpath_weight,
            attribute_weight=self.attribute_weight,
            text_weight=self.text_weight,
            threshold=self.threshold,
            max_candidates=self.max_candidates,
        )


class ParseRequest(BaseModel):
    html: str
    wrap_fragment: bool = False
    signature_attr: str = "data-erratum-sig"


class TreeNodeModel(BaseModel):
    id: int
    tag: str
    attrs: dict[str, str]
    text: str
    children: list[int]
    signature: str | None = None


class TreeResponse(BaseModel):
    root: int
    signatureAttr: str | None = None
    nodes: list[TreeNodeModel]


class MatchRequest(BaseModel):
    old_html: str
    new_html: str
    wrap_fragment: bool = False
    config: MatcherParams = Field(default_factory=MatcherParams)


class MatchPairModel(BaseModel):
    left: int
    right: int
    score: float


class MatchResponse(BaseModel):
    pairs: list[MatchPairModel]
    unmatchedLeft: list[int]
    unmatchedRight: list[int]
    totalScore: float
    config: dict
    seed: int


class RepairRequestBody(BaseModel):
    old_html: str
    new_html: str
    locators: list[str] = Field(min_length=1)
    algorithm: str = "erratum"
    wrap_fragment: bool = False
    config: MatcherParams = Field(default_factory=MatcherParams)
    baseline: BaselineParams = Field(default_factory=BaselineParams)


class RepairElementModel(BaseModel):
    oldXPath: str
    status: str
    newXPath: str | None = None
    score: float | None = None


class RepairLocatorModel(BaseModel):
    descriptor: str
    elements: list[RepairElementModel]


class RepairResponse(BaseModel):
    algorithm: str
    locators: list[RepairLocatorModel]


class MutateRequest(BaseModel):
    html: str
    ratio: float = 0.1
    kinds: list[str] = Field(default_factory=lambda: list(ALL_KINDS))
    seed: int = 0
    wrap_fragment: bool = False

    def expanded_kinds(self) -> list[str]:
        expanded: list[str] = []
        for kind in self.kinds:
            expanded.extend(KIND_GROUPS.get(kind, (kind,)))
        return expanded


class MutateResponse(BaseModel):
    html: str
    ops: list[dict]
    groundTruth: dict[str, int | None]
    ratio: float
    seed: int


class HealthResponse(BaseModel):
    status: str
    version: str
