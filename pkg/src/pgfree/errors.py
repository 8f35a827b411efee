"""Exception types shared across the package."""


class PgfreeError(Exception):
    """Base class for all package-specific errors."""


class GeometryError(PgfreeError):
    """Invalid geometric object or parameter (zero normal, bad rank, ...)."""


class RankCapError(PgfreeError):
    """Ambient rank outside the supported range 1..24."""


class HypothesisError(PgfreeError):
    """A stated hypothesis of a lemma/theorem check does not hold.

    Carries the name of the failing hypothesis and, when available, a
    witness object (e.g. the subgeometry that breaks a freeness hypothesis).
    """

    def __init__(self, hypothesis: str, witness=None):
        self.hypothesis = hypothesis
        self.witness = witness
        msg = f"hypothesis violated: {hypothesis}"
        if witness is not None:
            msg += f" (witness: {witness})"
        super().__init__(msg)


class InternalInconsistencyError(PgfreeError):
    """A proven statement failed on concrete data: an implementation bug."""


class PointSetParseError(PgfreeError):
    """Malformed point-set input; carries the offending position."""

    def __init__(self, message: str, position: str):
        self.position = position
        super().__init__(f"{position}: {message}")


class ResourceCapError(PgfreeError):
    """A configured resource limit (memory, iteration count) was exceeded."""


class ConfigError(PgfreeError):
    """Invalid sweep or CLI configuration."""
