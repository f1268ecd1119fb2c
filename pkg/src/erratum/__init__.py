"""Locator repair for evolving web pages.

The package matches two versions of a DOM tree with a similarity-based
flexible tree matching (token similarity, one topological propagation
pass, Metropolis optimization) and repairs broken XPath locators on top
of the matching.  A WATER-style per-element baseline, a mutation dataset
generator, a web-archive pair builder and a benchmark harness round out
the toolkit.
"""

from __future__ import annotations

from erratum.dom import (
    DomNode,
    DomTree,
    ParseConfig,
    ParseError,
    TokenizerConfig,
    XPathSyntaxError,
    absolute_xpath,
    eval_xpath,
    parse_html,
    tokenize,
    tree_from_json,
    tree_to_html,
    tree_to_json,
)
from erratum.sftm import Matching, SftmConfig, match_trees
from erratum.repair import (
    ElementRepair,
    LocatorError,
    RepairEngine,
    RepairOutcome,
    RepairRequest,
    repair,
)
from erratum.water import WaterConfig, water_relocate, water_repair

__version__ = "0.1.0"

__all__ = [
    "DomNode",
    "DomTree",
    "ElementRepair",
    "LocatorError",
    "Matching",
    "ParseConfig",
    "ParseError",
    "RepairEngine",
    "RepairOutcome",
    "RepairRequest",
    "SftmConfig",
    "TokenizerConfig",
    "WaterConfig",
    "XPathSyntaxError",
    "absolute_xpath",
    "eval_xpath",
    "match_trees",
    "parse_html",
    "repair",
    "tokenize",
    "tree_from_json",
    "tree_to_html",
    "tree_to_json",
    "water_relocate",
    "water_repair",
    "__version__",
]
