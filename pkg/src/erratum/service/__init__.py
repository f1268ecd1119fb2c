"""HTTP face of the toolkit: parse, match, repair, mutate."""

from __future__ import annotations

from erratum.service.app import create_app

__all__ = ["create_app"]
