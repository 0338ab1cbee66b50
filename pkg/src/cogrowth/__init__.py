"""Exact cogrowth-series toolkit for star-polygon and braid-type presentations."""

from .groups import GroupSpec, NormalForm, SignedGenerator, parse_group_spec

__all__ = ["GroupSpec", "NormalForm", "SignedGenerator", "parse_group_spec"]
