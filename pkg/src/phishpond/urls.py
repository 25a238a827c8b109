"""URL decomposition with exact byte spans.

Splits an absolute http/https URL into typed components (scheme, userinfo,
host labels or an IPv4 literal, port, path segments, query, fragment).
Every component records the span of bytes it occupies in the UTF-8 encoding
of the raw string, so a finding or a player's click maps back to the exact
characters that caused it, and the original URL can be rebuilt byte-for-byte
from the components plus the delimiter gaps between them.

Only absolute http/https URLs are handled; relative references, IPv6
literals, percent-decoding and punycode are out of scope. Scheme, host and
port are validated strictly; userinfo, path, query and fragment accept any
non-delimiter bytes (phishing URLs get creative there).
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from enum import Enum

#: Embedded public-suffix list. Deliberately small so packs stay
#: deterministic at desk scale; pass a custom frozenset to ``parse_url``
#: to extend it. Multi-label suffixes use dotted form.
DEFAULT_PUBLIC_SUFFIXES = frozenset(
    {"com", "org", "net", "edu", "gov", "co.uk", "com.au"}
)

_SCHEMES = (b"http", b"https")
_LABEL_CHARS = frozenset(b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789-")
_DIGITS = frozenset(b"0123456789")


class MalformedUrl(ValueError):
    """Raised when a raw string cannot be parsed as an absolute http(s) URL.

    ``offset`` is the byte offset of the first offending byte.
    """

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.reason = message
        self.offset = offset


class OffsetOutOfRange(IndexError):
    """Raised by :func:`component_at` for offsets outside the raw string."""


class ComponentKind(str, Enum):
    SCHEME = "scheme"
    USERINFO = "userinfo"
    HOST_LABEL = "host_label"
    IPV4_HOST = "ipv4_host"
    PORT = "port"
    PATH_SEGMENT = "path_segment"
    QUERY = "query"
    FRAGMENT = "fragment"


#: Kinds whose ``index`` is meaningful (ordinal within the kind); all other
#: kinds appear at most once and carry index 0.
INDEXED_KINDS = frozenset({ComponentKind.HOST_LABEL, ComponentKind.PATH_SEGMENT})


class HostKind(Enum):
    IPV4_LITERAL = "ipv4_literal"
    REGISTERED_NAME = "registered_name"


@dataclass(frozen=True)
class Span:
    """Half-open byte range [start, end) into the raw URL's UTF-8 bytes."""

    start: int
    end: int

    def __post_init__(self) -> None:
        if not (0 <= self.start <= self.end):
            raise ValueError(f"invalid span [{self.start}, {self.end})")

    def to_json(self) -> dict:
        return {"start": self.start, "end": self.end}

    @classmethod
    def from_json(cls, obj: dict) -> "Span":
        return cls(start=int(obj["start"]), end=int(obj["end"]))


@dataclass(frozen=True)
class ComponentId:
    """Stable identity of one component within a parsed URL."""

    kind: ComponentKind
    index: int = 0

    def __post_init__(self) -> None:
        if self.index < 0:
            raise ValueError("component index must be >= 0")
        if self.index > 0 and self.kind not in INDEXED_KINDS:
            raise ValueError(f"{self.kind.value} does not take an index")

    def to_json(self) -> dict:
        return {"kind": self.kind.value, "index": self.index}

    @classmethod
    def from_json(cls, obj: dict) -> "ComponentId":
        return cls(kind=ComponentKind(obj["kind"]), index=int(obj.get("index", 0)))


@dataclass(frozen=True)
class UrlComponent:
    id: ComponentId
    span: Span
    text: str

    def to_json(self) -> dict:
        return {"id": self.id.to_json(), "span": self.span.to_json(), "text": self.text}


@dataclass(frozen=True)
class ParsedUrl:
    """An absolute http(s) URL split into span-carrying components.

    Components are ordered by span start, spans never overlap, and the gaps
    between them are exactly the delimiter bytes ("://", ".", "/", "?", "#",
    "@", ":").
    """

    raw: str
    components: tuple[UrlComponent, ...]
    host_kind: HostKind
    registered_domain: str | None

    def byte_length(self) -> int:
        return len(self.raw.encode("utf-8"))

    def component(self, cid: ComponentId) -> UrlComponent | None:
        for comp in self.components:
            if comp.id == cid:
                return comp
        return None

    def host_labels(self) -> tuple[UrlComponent, ...]:
        return tuple(c for c in self.components if c.id.kind is ComponentKind.HOST_LABEL)

    def host_component(self) -> UrlComponent | None:
        """The IPv4 component, or the first host label for registered names."""
        for comp in self.components:
            if comp.id.kind is ComponentKind.IPV4_HOST:
                return comp
            if comp.id.kind is ComponentKind.HOST_LABEL:
                return comp
        return None

    def host_text(self) -> str:
        parts = [c for c in self.components
                 if c.id.kind in (ComponentKind.IPV4_HOST, ComponentKind.HOST_LABEL)]
        if not parts:
            return ""
        lo = parts[0].span.start
        hi = parts[-1].span.end
        return self.raw.encode("utf-8")[lo:hi].decode("utf-8")

    def registered_label_start(self) -> int | None:
        """Index of the first host label belonging to the registered domain."""
        if self.registered_domain is None:
            return None
        labels = self.host_labels()
        reg_count = self.registered_domain.count(".") + 1
        return len(labels) - reg_count


def _is_ipv4(host: bytes) -> bool:
    parts = host.split(b".")
    if len(parts) != 4:
        return False
    for part in parts:
        if not 1 <= len(part) <= 3 or any(b not in _DIGITS for b in part):
            return False
        if int(part) > 255:
            return False
    return True


def _registered_domain_of(labels: list[bytes], suffixes: frozenset[str]) -> str | None:
    lowered = [lab.decode("utf-8").lower() for lab in labels]
    if ".".join(lowered) in suffixes:
        return None
    best = 0
    for suffix in suffixes:
        parts = suffix.split(".")
        if len(parts) < len(lowered) and lowered[-len(parts):] == parts:
            best = max(best, len(parts))
    if best == 0:
        # Unknown TLD: treat the final label as the suffix so suffix-plus-one
        # is still defined (brand rules keep working on odd TLDs).
        if len(lowered) < 2:
            return None
        best = 1
    take = best + 1
    return ".".join(lab.decode("utf-8") for lab in labels[-take:])


def parse_url(raw: str, suffixes: frozenset[str] = DEFAULT_PUBLIC_SUFFIXES) -> ParsedUrl:
    """Parse an absolute http/https URL into span-carrying components.

    Raises :class:`MalformedUrl` (with the offending byte offset) for
    missing/unsupported schemes, an empty host, malformed host labels or
    ports, or an invalid IPv4-looking host that fails octet parsing but
    contains characters illegal in a hostname.
    """
    data = raw.encode("utf-8")
    sep = data.find(b"://")
    if sep <= 0:
        raise MalformedUrl("no scheme", 0)
    scheme = data[:sep]
    if scheme.lower() not in _SCHEMES:
        raise MalformedUrl(f"unsupported scheme {scheme.decode('utf-8', 'replace')!r}", 0)

    components: list[UrlComponent] = [
        UrlComponent(ComponentId(ComponentKind.SCHEME), Span(0, sep), scheme.decode("utf-8"))
    ]

    auth_start = sep + 3
    auth_end = len(data)
    for i in range(auth_start, len(data)):
        if data[i] in b"/?#":
            auth_end = i
            break
    authority = data[auth_start:auth_end]
    if not authority:
        raise MalformedUrl("empty host", auth_start)

    host_start = auth_start
    at = authority.rfind(b"@")
    if at >= 0:
        userinfo = authority[:at]
        for j, byte in enumerate(userinfo):
            if byte <= 0x20 or byte == 0x7F:
                raise MalformedUrl("illegal character in authority", auth_start + j)
        host_start = auth_start + at + 1
        if userinfo:
            components.append(
                UrlComponent(
                    ComponentId(ComponentKind.USERINFO),
                    Span(auth_start, auth_start + at),
                    userinfo.decode("utf-8"),
                )
            )

    hostport = data[host_start:auth_end]
    colon = hostport.rfind(b":")
    if colon >= 0:
        host = hostport[:colon]
        port = hostport[colon + 1:]
        port_start = host_start + colon + 1
    else:
        host = hostport
        port = None
        port_start = -1
    if not host:
        raise MalformedUrl("empty host", host_start)

    if _is_ipv4(host):
        host_kind = HostKind.IPV4_LITERAL
        registered = None
        components.append(
            UrlComponent(
                ComponentId(ComponentKind.IPV4_HOST),
                Span(host_start, host_start + len(host)),
                host.decode("utf-8"),
            )
        )
    else:
        host_kind = HostKind.REGISTERED_NAME
        labels: list[bytes] = []
        pos = host_start
        for label in host.split(b"."):
            if not label:
                raise MalformedUrl("empty host label", pos)
            for j, byte in enumerate(label):
                if byte not in _LABEL_CHARS:
                    raise MalformedUrl("illegal character in authority", pos + j)
            components.append(
                UrlComponent(
                    ComponentId(ComponentKind.HOST_LABEL, len(labels)),
                    Span(pos, pos + len(label)),
                    label.decode("utf-8"),
                )
            )
            labels.append(label)
            pos += len(label) + 1
        registered = _registered_domain_of(labels, suffixes)

    if port is not None and port:
        for j, byte in enumerate(port):
            if byte not in _DIGITS:
                raise MalformedUrl("illegal character in authority", port_start + j)
        components.append(
            UrlComponent(
                ComponentId(ComponentKind.PORT),
                Span(port_start, port_start + len(port)),
                port.decode("utf-8"),
            )
        )

    frag_at = data.find(b"#", auth_end)
    query_at = data.find(b"?", auth_end, frag_at if frag_at >= 0 else len(data))
    path_end = query_at if query_at >= 0 else (frag_at if frag_at >= 0 else len(data))

    if auth_end < len(data) and data[auth_end:auth_end + 1] == b"/":
        seg_index = 0
        pos = auth_end
        while pos < path_end:
            nxt = data.find(b"/", pos + 1, path_end)
            seg_end = nxt if nxt >= 0 else path_end
            if seg_end > pos + 1:
                components.append(
                    UrlComponent(
                        ComponentId(ComponentKind.PATH_SEGMENT, seg_index),
                        Span(pos + 1, seg_end),
                        data[pos + 1:seg_end].decode("utf-8"),
                    )
                )
                seg_index += 1
            pos = seg_end

    if query_at >= 0:
        q_end = frag_at if frag_at >= 0 else len(data)
        if q_end > query_at + 1:
            components.append(
                UrlComponent(
                    ComponentId(ComponentKind.QUERY),
                    Span(query_at + 1, q_end),
                    data[query_at + 1:q_end].decode("utf-8"),
                )
            )

    if frag_at >= 0 and len(data) > frag_at + 1:
        components.append(
            UrlComponent(
                ComponentId(ComponentKind.FRAGMENT),
                Span(frag_at + 1, len(data)),
                data[frag_at + 1:].decode("utf-8"),
            )
        )

    return ParsedUrl(
        raw=raw,
        components=tuple(components),
        host_kind=host_kind,
        registered_domain=registered,
    )


def registered_domain(parsed: ParsedUrl) -> str | None:
    """Public-suffix-plus-one for registered-name hosts; None for IP hosts."""
    return parsed.registered_domain


def component_at(parsed: ParsedUrl, offset: int) -> ComponentId | None:
    """Map a byte offset to the component containing it.

    Returns None when the offset falls on a delimiter. Raises
    :class:`OffsetOutOfRange` when the offset is outside [0, byte length).
    """
    if offset < 0 or offset >= parsed.byte_length():
        raise OffsetOutOfRange(f"offset {offset} outside [0, {parsed.byte_length()})")
    starts = [c.span.start for c in parsed.components]
    i = bisect_right(starts, offset) - 1
    if i >= 0 and parsed.components[i].span.end > offset:
        return parsed.components[i].id
    return None
