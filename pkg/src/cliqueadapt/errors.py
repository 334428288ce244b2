"""Exception hierarchy for the adaptation engine.

Every failure mode raised by the library derives from :class:`EngineError`,
so callers (and the CLI) can catch one type and still emit the specific
class name in machine-readable error output.
"""


class EngineError(Exception):
    """Base class for all engine-raised errors."""


class ZeroVector(EngineError):
    """Normalization of an all-zero vector was requested."""


class DimensionMismatch(EngineError):
    """Operands live in different spaces or have incompatible lengths."""


class NonPositiveTemperature(EngineError):
    """Softmax temperature must be > 0."""


class NotAProbability(EngineError):
    """Entropy input has negative entries or does not sum to 1."""


class EmptyCache(EngineError):
    """A class cache with no entries cannot produce a center or logits."""


class MissingQuery(EngineError):
    """Attention-weighted center computation requires a query feature."""


class MissingCenters(EngineError):
    """A visual class-center row is absent (NaN sentinel) with no fallback applied."""


class EmptyAFV(EngineError):
    """No class has any cached auxiliary feature; the caller substitutes zeros."""


class NonUnitNode(EngineError):
    """Graph node features must be unit-normalized."""


class WrongOrder(EngineError):
    """Second-order graph construction requires a first-order input graph."""


class EmptyCliqueSet(EngineError):
    """Top-r selection needs at least one clique."""


class EmptyStream(EngineError):
    """Weight sweeping needs at least one recorded sample."""


class SchemaMismatch(EngineError):
    """A manifest, config, or data file violates its declared schema."""


class BadMagic(EngineError):
    """Feature file does not start with the expected magic bytes."""


class VersionUnsupported(EngineError):
    """Feature file declares an unknown version or payload dtype."""


class TruncatedPayload(EngineError):
    """Feature file is shorter than its header declares."""


class NonUnitVectors(EngineError):
    """Feature file payload rows are not unit-normalized."""


class InfeasibleSpec(EngineError):
    """Synthetic class means cannot be placed under the pairwise-cosine cap."""
