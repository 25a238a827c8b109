"""Deterministic anti-phishing pond game.

A small fish eats worms; each worm carries a URL. The engine localizes the
phishing indicators in a URL down to exact byte spans, runs the two-phase
classify-then-locate interaction, and turns the resulting telemetry into
procedural/conceptual knowledge and self-efficacy estimates.
"""

from phishpond.urls import (
    ComponentId,
    ComponentKind,
    HostKind,
    MalformedUrl,
    OffsetOutOfRange,
    ParsedUrl,
    Span,
    UrlComponent,
    component_at,
    parse_url,
    registered_domain,
)

__version__ = "0.1.0"

__all__ = [
    "ComponentId",
    "ComponentKind",
    "HostKind",
    "MalformedUrl",
    "OffsetOutOfRange",
    "ParsedUrl",
    "Span",
    "UrlComponent",
    "component_at",
    "parse_url",
    "registered_domain",
    "__version__",
]
