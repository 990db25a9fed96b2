"""Exception types shared across the package."""

from __future__ import annotations


class LocreditError(Exception):
    """Base class for every error raised by this package."""


class ParseFailure(LocreditError):
    """A structured text input could not be parsed.

    Carries the offending source name and 1-based line number when known.
    """

    def __init__(self, message: str, *, source: str | None = None,
                 line: int | None = None):
        self.source = source
        self.line = line
        prefix = source or ""
        if line is not None:
            prefix = f"{prefix} line {line}" if prefix else f"line {line}"
        super().__init__(f"{prefix}: {message}" if prefix else message)


class WordNetParseError(ParseFailure):
    """Malformed WordNet index/data content."""


class DatasetError(ParseFailure):
    """Malformed verb-pair dataset, annotation file, or course document."""


class SeedFileError(ParseFailure):
    """Malformed or inconsistent seed-verb file."""


class IntegrityError(LocreditError):
    """Parsed content violates cross-record consistency (dangling offsets,
    hypernym cycles, empty databases)."""


class UnknownSynsetError(LocreditError):
    """A query referenced a synset id that is not in the taxonomy."""


class ComputationError(LocreditError):
    """A statistic is undefined for the given inputs."""


class VerbAssignmentError(LocreditError):
    """A verb could not be placed in any cluster."""


class ContractError(LocreditError):
    """Arguments violate an operation's preconditions (dimension or id
    mismatches, out-of-range parameters, wrong grid kind)."""


class ProviderError(LocreditError):
    """Base class for embedding-provider failures."""


class TransportError(ProviderError):
    """Remote embedding call failed; carries retry metadata."""

    def __init__(self, message: str, *, url: str, retryable: bool = True):
        self.url = url
        self.retryable = retryable
        super().__init__(f"{message} (url={url}, retryable={retryable})")


class CacheMissError(ProviderError):
    """A cached-file provider was asked for texts it does not hold."""

    def __init__(self, missing: list[str]):
        self.missing = list(missing)
        shown = ", ".join(repr(t) for t in self.missing[:3])
        extra = "" if len(self.missing) <= 3 else f" (+{len(self.missing) - 3} more)"
        super().__init__(f"embedding cache has no entry for: {shown}{extra}")


class CacheCorruptError(ProviderError):
    """An embedding-cache record failed its checksum."""


class ConfigError(LocreditError):
    """Invalid run configuration (bad parameter values or file contents)."""


class ResourceError(LocreditError):
    """A configured resource is missing or unreachable (paths, endpoints)."""
