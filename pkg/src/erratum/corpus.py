"""Deterministic page corpus for tests and benchmarks.

Pages are generated, not checked in: a seeded builder assembles
realistic documents (nav, card grids, galleries, lists, forms, footer)
with distinctive ids, classes and hrefs, plenty of text, and a
guaranteed minimum of clickable elements.  The same (name, seed) always
yields the same tree, so corpus-driven results reproduce exactly.
"""

from __future__ import annotations

import random
from pathlib import Path
from typing import Sequence

from erratum.dom.serialize import tree_to_html
from erratum.dom.tree import DomTree, MutableNode, freeze

_WORDS = (
    "amber", "anchor", "archive", "atlas", "aurora", "basalt", "beacon", "birch",
    "borough", "breeze", "canyon", "cedar", "cinder", "cobalt", "comet", "coral",
    "crater", "crest", "delta", "drift", "ember", "fable", "falcon", "fathom",
    "fern", "flint", "forge", "fresco", "garnet", "glade", "granite", "grove",
    "harbor", "hazel", "heron", "hollow", "indigo", "iris", "isle", "jasper",
    "juniper", "kestrel", "lagoon", "lantern", "larch", "ledger", "linden",
    "lumen", "maple", "marble", "meadow", "mesa", "mica", "mirror", "moss",
    "nectar", "northern", "oak", "ochre", "onyx", "opal", "orbit", "osprey",
    "pearl", "pine", "plume", "prairie", "prism", "quarry", "quill", "raven",
    "reef", "ridge", "river", "rowan", "saffron", "sage", "sandbar", "sequoia",
    "shale", "signal", "slate", "sparrow", "spruce", "summit", "tarn", "thistle",
    "tide", "timber", "topaz", "trellis", "tundra", "umber", "vale", "velvet",
    "violet", "walnut", "warden", "willow", "zenith", "zephyr",
)


_NAV_LABELS = (
    "Home", "Docs", "About", "Contact", "Blog", "Search", "Archive", "More",
    "News", "Help", "Account", "Browse",
)


class _PageBuilder:
    """Builds one page the way production sites are shaped: link routes
    draw from a small per-page pool and repeat, link classes name the
    role, not the element, and what makes an element unique tends to sit
    in its subtree (an image, a form field) rather than on the element
    itself."""

    def __init__(self, name: str, seed: int):
        self.rng = random.Random(f"{name}:{seed}")
        self.counter = 0
        self.routes = [self.slug() for _ in range(self.rng.randint(8, 12))]
        self.card_routes = [self.slug() for _ in range(2)]

    def uid(self, stem: str) -> str:
        self.counter += 1
        return f"{stem}-{self.counter}"

    def word(self) -> str:
        return self.rng.choice(_WORDS)

    def slug(self) -> str:
        return f"{self.word()}-{self.word()}"

    def route(self) -> str:
        return f"/{self.rng.choice(self.routes)}"

    def sentence(self, low: int = 4, high: int = 12) -> str:
        words = [self.word() for _ in range(self.rng.randint(low, high))]
        return " ".join(words).capitalize() + "."

    def link(self, css: str, pool: list[str] | None = None) -> MutableNode:
        href = f"/{self.rng.choice(pool)}" if pool else self.route()
        a = MutableNode(tag="a", attributes={"href": href, "class": css})
        a.text_parts = [self.rng.choice(_NAV_LABELS)]
        return a

    def item_link(self, css: str, text: str | None = None) -> MutableNode:
        a = MutableNode(
            tag="a",
            attributes={"href": f"/item/{self.slug()}-{self.uid('it')}", "class": css},
        )
        a.text_parts = [text if text is not None else self.sentence(2, 4)]
        return a

    def image(self) -> MutableNode:
        stem = f"{self.slug()}-{self.uid('im')}"
        return MutableNode(
            tag="img",
            attributes={
                "src": f"/media/{stem}.jpg",
                "alt": f"{stem} photo",
                "loading": "lazy",
                "width": "320",
                "height": "200",
            },
        )

    def image_link(self, css: str) -> MutableNode:
        href = f"/{self.rng.choice(self.card_routes)}"
        a = MutableNode(tag="a", attributes={"href": href, "class": css})
        a.append(self.image())
        return a

    def nav(self, items: int) -> MutableNode:
        nav = MutableNode(tag="nav", attributes={"class": "main-nav", "id": self.uid("nav")})
        ul = nav.append(MutableNode(tag="ul", attributes={"class": "nav-list"}))
        # real navs rarely repeat a destination within themselves
        chosen = self.rng.sample(self.routes, min(items, len(self.routes)))
        for pos in range(items):
            li = ul.append(MutableNode(tag="li", attributes={"class": "nav-item"}))
            if pos < len(chosen):
                a = li.append(
                    MutableNode(
                        tag="a", attributes={"href": f"/{chosen[pos]}", "class": "nav-link"}
                    )
                )
                a.text_parts = [self.rng.choice(_NAV_LABELS)]
            else:
                li.append(self.link("nav-link"))
        return nav

    def card_grid(self) -> MutableNode:
        grid = MutableNode(tag="div", attributes={"class": "card-grid", "id": self.uid("grid")})
        for _ in range(self.rng.randint(6, 10)):
            card = grid.append(MutableNode(tag="div", attributes={"class": "card"}))
            media = card.append(MutableNode(tag="div", attributes={"class": "card-media"}))
            media.append(self.image_link("card-link"))
            inner = card.append(MutableNode(tag="div", attributes={"class": "card-inner"}))
            title = inner.append(MutableNode(tag="h3", attributes={"class": "card-title"}))
            title.text_parts = [self.sentence(2, 4)]
            body = inner.append(MutableNode(tag="p", attributes={"class": "card-body"}))
            body.text_parts = [self.sentence()]
            footer = card.append(MutableNode(tag="div", attributes={"class": "card-footer"}))
            if self.rng.random() < 0.35:
                footer.append(self.item_link("card-cta", text="Read more"))
            else:
                badge = footer.append(MutableNode(tag="span", attributes={"class": "badge"}))
                badge.text_parts = [self.word().capitalize()]
        return grid

    def gallery(self) -> MutableNode:
        # lightbox pattern: every item links to "#", the script picks the target
        wrap = MutableNode(tag="div", attributes={"class": "gallery", "id": self.uid("gal")})
        for _ in range(self.rng.randint(12, 18)):
            a = wrap.append(
                MutableNode(tag="a", attributes={"href": "#", "class": "gallery-item"})
            )
            a.append(self.image())
        return wrap

    def linked_list(self) -> MutableNode:
        tag = self.rng.choice(("ul", "ol"))
        listing = MutableNode(tag=tag, attributes={"class": f"{self.word()}-list"})
        for _ in range(self.rng.randint(4, 8)):
            li = listing.append(MutableNode(tag="li"))
            roll = self.rng.random()
            if roll < 0.4:
                li.append(self.item_link("list-link"))
            elif roll < 0.75:
                li.append(self.image_link("list-thumb"))
            else:
                span = li.append(MutableNode(tag="span", attributes={"class": "list-label"}))
                span.text_parts = [self.sentence(2, 5)]
        return listing

    def paragraphs(self) -> MutableNode:
        wrapper = MutableNode(tag="div", attributes={"class": "prose"})
        for _ in range(self.rng.randint(2, 4)):
            p = wrapper.append(MutableNode(tag="p"))
            p.text_parts = [self.sentence(6, 14)]
            if self.rng.random() < 0.5:
                em = p.append(MutableNode(tag="em"))
                em.text_parts = [self.word()]
            if self.rng.random() < 0.3:
                p.append(self.item_link("inline-link"))
        return wrapper

    def form(self) -> MutableNode:
        form = MutableNode(
            tag="form",
            attributes={"action": f"/{self.slug()}", "method": "post", "class": "form"},
        )
        for _ in range(self.rng.randint(2, 4)):
            field = form.append(MutableNode(tag="div", attributes={"class": "field"}))
            input_id = self.uid("in")
            label = field.append(MutableNode(tag="label", attributes={"for": input_id}))
            label.text_parts = [self.word().capitalize()]
            field.append(
                MutableNode(
                    tag="input",
                    attributes={"type": "text", "name": self.word(), "id": input_id},
                )
            )
        select = form.append(MutableNode(tag="select", attributes={"name": self.word()}))
        for _ in range(3):
            option = select.append(MutableNode(tag="option", attributes={"value": self.word()}))
            option.text_parts = [self.word().capitalize()]
        button = form.append(
            MutableNode(tag="button", attributes={"type": "submit", "class": "btn btn-primary"})
        )
        button.text_parts = ["Send"]
        return form

    def section(self) -> MutableNode:
        section = MutableNode(
            tag="section",
            attributes={"class": f"section section--{self.word()}", "id": self.uid("sec")},
        )
        h2 = section.append(MutableNode(tag="h2", attributes={"class": "section-title"}))
        h2.text_parts = [self.sentence(2, 5)]
        blocks = [
            self.card_grid,
            self.card_grid,
            self.gallery,
            self.gallery,
            self.linked_list,
            self.paragraphs,
            self.form,
            self.form,
        ]
        for block in self.rng.sample(blocks, self.rng.randint(2, 3)):
            section.append(block())
        return section

    def search_form(self) -> MutableNode:
        form = MutableNode(
            tag="form",
            attributes={"action": f"/{self.slug()}", "method": "get", "class": "search"},
        )
        form.append(MutableNode(tag="input", attributes={"type": "text", "name": "q"}))
        form.append(
            MutableNode(tag="input", attributes={"type": "submit", "value": "Go"})
        )
        return form

    def footer(self) -> MutableNode:
        footer = MutableNode(tag="footer", attributes={"class": "site-footer"})
        social = footer.append(MutableNode(tag="div", attributes={"class": "social"}))
        for _ in range(self.rng.randint(4, 6)):
            social.append(self.image_link("social-link"))
        links = footer.append(MutableNode(tag="div", attributes={"class": "footer-links"}))
        for route in self.rng.sample(self.routes, self.rng.randint(4, 6)):
            a = links.append(
                MutableNode(tag="a", attributes={"href": f"/{route}", "class": "footer-link"})
            )
            a.text_parts = [self.rng.choice(_NAV_LABELS)]
        footer.append(self.search_form())
        copyright_p = footer.append(MutableNode(tag="p", attributes={"class": "copyright"}))
        copyright_p.text_parts = [self.sentence(4, 7)]
        return footer


def _count(node: MutableNode) -> int:
    return 1 + sum(_count(child) for child in node.children)


def _count_clickable(node: MutableNode) -> int:
    own = int(
        node.tag in ("a", "button")
        or (node.tag == "input" and node.attributes.get("type") in ("submit", "button"))
        or "onclick" in node.attributes
    )
    return own + sum(_count_clickable(child) for child in node.children)


def build_page(
    name: str,
    seed: int = 0,
    sections: int | None = None,
    min_nodes: int | None = None,
) -> DomTree:
    """One deterministic page; grows by whole sections until ``min_nodes``."""

    builder = _PageBuilder(name, seed)
    rng = builder.rng
    html = MutableNode(tag="html", attributes={"lang": "en"})
    head = html.append(MutableNode(tag="head"))
    title = head.append(MutableNode(tag="title"))
    title.text_parts = [builder.sentence(2, 4)]
    head.append(MutableNode(tag="meta", attributes={"charset": "utf-8"}))
    head.append(
        MutableNode(
            tag="link",
            attributes={"rel": "stylesheet", "href": f"/static/{builder.slug()}.css"},
        )
    )
    body = html.append(MutableNode(tag="body", attributes={"class": f"page-{builder.word()}"}))

    header = body.append(MutableNode(tag="header", attributes={"class": "site-header"}))
    brand = header.append(MutableNode(tag="div", attributes={"class": "brand"}))
    brand.append(builder.image_link("brand-link"))
    header.append(builder.nav(rng.randint(5, 8)))
    header.append(builder.search_form())

    main = body.append(MutableNode(tag="main", attributes={"id": "main", "class": "content"}))
    for _ in range(sections if sections is not None else rng.randint(2, 5)):
        main.append(builder.section())
    if min_nodes is not None:
        while _count(html) < min_nodes:
            main.append(builder.section())

    body.append(builder.footer())
    while _count_clickable(html) < 16:
        header.children[-1].children[0].append(
            MutableNode(tag="li", attributes={"class": "nav-item"})
        ).append(builder.link("nav-link"))
    return freeze(html)


def builtin_corpus(n_pages: int = 25, seed: int = 7) -> list[tuple[str, DomTree]]:
    """Named pages sized for the benchmark suites."""

    naming = random.Random(f"corpus:{seed}")
    pages: list[tuple[str, DomTree]] = []
    for index in range(n_pages):
        name = f"site{index:02d}-{naming.choice(_WORDS)}"
        sections = 3 + index % 5
        pages.append((name, build_page(name, seed=seed, sections=sections)))
    return pages


def timing_page(seed: int = 11, min_nodes: int = 1500) -> DomTree:
    return build_page("timing", seed=seed, min_nodes=min_nodes)


def write_corpus(pages: Sequence[tuple[str, DomTree]], out_dir: str | Path) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, tree in pages:
        (out / f"{name}.html").write_text(tree_to_html(tree), encoding="utf-8")
    return out
