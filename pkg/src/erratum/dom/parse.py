"""HTML to canonical tree.

Built on html.parser with pragmatic repair: unclosed tags are closed when
their ancestor closes or at end of input, stray end tags are dropped, and
a small auto-close table handles the common implied-end-tag cases (p, li,
table sections).  Comments, processing instructions, declarations,
script/style character data and whitespace-only text never reach the
tree.  Parsing only fails when no element at all survives.
"""

from __future__ import annotations

from dataclasses import dataclass
from html.parser import HTMLParser

from erratum.dom.tree import DomTree, MutableNode, freeze

VOID_ELEMENTS = frozenset(
    {
        "area", "base", "br", "col", "embed", "hr", "img", "input",
        "link", "meta", "param", "source", "track", "wbr",
    }
)

RAW_TEXT_ELEMENTS = frozenset({"script", "style"})

# tag being opened -> open tags it implicitly closes
_AUTO_CLOSE = {
    "p": {"p"},
    "li": {"li"},
    "dt": {"dt", "dd"},
    "dd": {"dt", "dd"},
    "tr": {"tr", "td", "th"},
    "td": {"td", "th"},
    "th": {"td", "th"},
    "option": {"option"},
    "thead": {"tbody", "tfoot", "tr", "td", "th"},
    "tbody": {"thead", "tbody", "tfoot", "tr", "td", "th"},
    "tfoot": {"thead", "tbody", "tr", "td", "th"},
}


class ParseError(Exception):
    """Raised when the input yields no element node at all."""


@dataclass(frozen=True)
class ParseConfig:
    signature_attr: str = "data-erratum-sig"
    wrap_fragment: bool = False
    drop_elements: frozenset[str] = frozenset()
    keep_signatures: bool = True


class _Builder(HTMLParser):
    def __init__(self, config: ParseConfig):
        super().__init__(convert_charrefs=True)
        self.config = config
        self.document = MutableNode(tag="#document")
        self.stack: list[MutableNode] = [self.document]
        self.drop_depth = 0

    def _top(self) -> MutableNode:
        return self.stack[-1]

    def _open(self, tag: str, attrs: list[tuple[str, str | None]]) -> MutableNode:
        attributes: dict[str, str] = {}
        signature: str | None = None
        for name, value in attrs:
            name = name.lower()
            value = value if value is not None else ""
            if name == self.config.signature_attr:
                if signature is None and self.config.keep_signatures:
                    signature = value
                continue
            if name not in attributes:  # first occurrence wins
                attributes[name] = value
        node = MutableNode(tag=tag, attributes=attributes, signature=signature)
        self._top().append(node)
        return node

    def handle_starttag(self, tag: str, attrs: list[tuple[str, str | None]]) -> None:
        tag = tag.lower()
        if self.drop_depth:
            if tag in self.config.drop_elements and tag not in VOID_ELEMENTS:
                self.drop_depth += 1
            return
        if tag in self.config.drop_elements:
            if tag not in VOID_ELEMENTS:
                self.drop_depth = 1
            return
        closes = _AUTO_CLOSE.get(tag)
        if closes:
            # a row implied-ends an open cell AND its row, so unwind
            while len(self.stack) > 1 and self._top().tag in closes:
                self.stack.pop()
        node = self._open(tag, attrs)
        if tag not in VOID_ELEMENTS:
            self.stack.append(node)

    def handle_startendtag(self, tag: str, attrs: list[tuple[str, str | None]]) -> None:
        tag = tag.lower()
        if self.drop_depth or tag in self.config.drop_elements:
            return
        self._open(tag, attrs)

    def handle_endtag(self, tag: str) -> None:
        tag = tag.lower()
        if self.drop_depth:
            if tag in self.config.drop_elements:
                self.drop_depth -= 1
            return
        if tag in VOID_ELEMENTS:
            return
        for depth in range(len(self.stack) - 1, 0, -1):
            if self.stack[depth].tag == tag:
                del self.stack[depth:]
                return
        # stray end tag: ignore

    def handle_data(self, data: str) -> None:
        if self.drop_depth or self._top().tag in RAW_TEXT_ELEMENTS:
            return
        if data.strip():
            self._top().text_parts.append(data)


def parse_html(html: str | bytes, config: ParseConfig | None = None) -> DomTree:
    """Parse ``html`` into a canonical tree.

    A single top-level element becomes the root as-is, so fragments keep
    their own root; several top-level elements, or ``wrap_fragment``, get
    a synthetic html/body envelope.  Empty input raises :class:`ParseError`.
    """

    config = config or ParseConfig()
    if isinstance(html, bytes):
        html = html.decode("utf-8", errors="replace")
    builder = _Builder(config=config)
    builder.feed(html)
    builder.close()
    top = builder.document.children
    if not top:
        raise ParseError("no element nodes in input")
    if len(top) == 1 and not (config.wrap_fragment and top[0].tag != "html"):
        root = top[0]
    else:
        body = MutableNode(tag="body", children=list(top))
        root = MutableNode(tag="html", children=[body])
    return freeze(root, config.signature_attr if config.keep_signatures else None)
