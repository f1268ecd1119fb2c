"""Absolute XPath generation and the locator evaluator."""

import pytest

from conftest import LOGIN_FORM_HTML
from erratum.dom.parse import ParseConfig, parse_html
from erratum.dom.xpath import XPathSyntaxError, absolute_xpath, eval_xpath


def submit_id(tree) -> int:
    return next(
        n.id for n in tree.nodes if n.attributes.get("type") == "submit"
    )


def test_absolute_xpath_under_document_envelope():
    tree = parse_html(LOGIN_FORM_HTML, ParseConfig(wrap_fragment=True))
    assert absolute_xpath(tree, submit_id(tree)) == "/html[1]/body[1]/form[1]/input[2]"


def test_absolute_xpath_on_fragment(form_tree):
    assert absolute_xpath(form_tree, submit_id(form_tree)) == "/form[1]/input[2]"


def test_positional_locator_selects_submit(form_tree):
    assert eval_xpath(form_tree, "/form/input[2]") == [submit_id(form_tree)]


def test_attribute_locator_selects_submit(form_tree):
    assert eval_xpath(form_tree, 'input[@type="submit"]') == [submit_id(form_tree)]


def test_out_of_range_position_selects_nothing(form_tree):
    assert eval_xpath(form_tree, "/form/input[3]") == []


def test_relative_path_starts_anywhere(form_tree):
    # both inputs match the single relative step, in document order
    assert eval_xpath(form_tree, "input") == [1, 2]


def test_attribute_locator_single_quotes(form_tree):
    assert eval_xpath(form_tree, "input[@name='username']") == [1]


def test_combined_predicates(form_tree):
    assert eval_xpath(form_tree, 'input[2][@type="submit"]') == [submit_id(form_tree)]
    assert eval_xpath(form_tree, 'input[1][@type="submit"]') == []


def test_round_trip_every_node(card_pair):
    for tree in card_pair:
        for node in tree.nodes:
            path = absolute_xpath(tree, node.id)
            assert eval_xpath(tree, path) == [node.id]


def test_attribute_values_case_sensitive(form_tree):
    assert eval_xpath(form_tree, 'input[@value="send"]') == [submit_id(form_tree)]
    assert eval_xpath(form_tree, 'input[@value="Send"]') == []


def test_descendant_axis_rejected(form_tree):
    with pytest.raises(XPathSyntaxError):
        eval_xpath(form_tree, "//input")


def test_empty_locator_rejected(form_tree):
    with pytest.raises(XPathSyntaxError):
        eval_xpath(form_tree, "")
    with pytest.raises(XPathSyntaxError):
        eval_xpath(form_tree, "   ")


def test_empty_step_rejected(form_tree):
    with pytest.raises(XPathSyntaxError):
        eval_xpath(form_tree, "/form/")


def test_functions_rejected(form_tree):
    with pytest.raises(XPathSyntaxError):
        eval_xpath(form_tree, "/form/input[text()='x']")


def test_zero_position_rejected(form_tree):
    with pytest.raises(XPathSyntaxError):
        eval_xpath(form_tree, "/form/input[0]")


def test_double_position_rejected(form_tree):
    with pytest.raises(XPathSyntaxError):
        eval_xpath(form_tree, "/form[1][2]")


def test_unknown_node_id_raises(form_tree):
    with pytest.raises(KeyError):
        absolute_xpath(form_tree, 99)


def test_xpath_cache_returns_same_string(form_tree):
    first = absolute_xpath(form_tree, 2)
    again = absolute_xpath(form_tree, 2)
    assert first == again
