class GraphError(Exception):
    """Raised when a graph or hypergraph is constructed improperly."""
    pass


class FormatError(Exception):
    """Raised when a graph, hypergraph or certificate file is malformed."""
    pass


class CertificateError(Exception):
    """Raised when a certificate can not be built or fails to verify."""
    pass


class DivisibilityError(ValueError):
    """Raised when n is not a valid order for the requested cycle."""
    pass


class PatternError(Exception):
    """Raised by an unusable pattern graph."""
    pass


class BalanceError(ValueError):
    """Raised for degenerate threshold or first-moment computations."""
    pass


class ConfigError(Exception):
    """Raised when a sweep configuration is invalid."""
    pass


class SummaryError(Exception):
    """Raised when sweep records can not be summarized."""
    pass
