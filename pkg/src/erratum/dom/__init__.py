"""Canonical ordered labeled DOM trees and the operations on them."""

from __future__ import annotations

from erratum.dom.tree import DomNode, DomTree, MutableNode, freeze, thaw
from erratum.dom.parse import ParseConfig, ParseError, parse_html
from erratum.dom.tokenize import Label, TokenizerConfig, tokenize
from erratum.dom.xpath import XPathSyntaxError, absolute_xpath, eval_xpath
from erratum.dom.serialize import tree_from_json, tree_to_html, tree_to_json

__all__ = [
    "DomNode",
    "DomTree",
    "Label",
    "MutableNode",
    "ParseConfig",
    "ParseError",
    "TokenizerConfig",
    "XPathSyntaxError",
    "absolute_xpath",
    "eval_xpath",
    "freeze",
    "parse_html",
    "thaw",
    "tokenize",
    "tree_from_json",
    "tree_to_html",
    "tree_to_json",
]
