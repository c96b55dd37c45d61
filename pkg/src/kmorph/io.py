"""Reading and writing files: the text format of :mod:`kmorph.dsl` and DOT export."""

from .dsl import (Document, DSLSyntaxError, DuplicateId, UnknownReference, dumps,
                  edge_style, export_dot, parse, parse_file, serialize)

__all__ = [
    "DSLSyntaxError", "Document", "DuplicateId", "UnknownReference", "dumps",
    "edge_style", "export_dot", "parse", "parse_file", "serialize",
]
