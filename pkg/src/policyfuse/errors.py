"""Exception hierarchy shared by all policyfuse modules."""


class PolicyFuseError(Exception):
    """Base class for every error raised by policyfuse."""


# --- lattice construction and queries ---

class UnknownLabelError(PolicyFuseError):
    """A label was referenced that the lattice does not contain."""


class CycleError(PolicyFuseError):
    """The declared ordering contains a cycle (antisymmetry violated)."""


class NoSupError(PolicyFuseError):
    """Some pair of labels has no unique least upper bound."""


class NotComparableError(PolicyFuseError):
    """A chain distance was requested between incomparable labels."""


# --- clearance and combination ---

class OutOfRangeError(PolicyFuseError):
    """A clearance value lies outside the configured [-m, m] range."""


class DomainError(PolicyFuseError):
    """A ratio or weight parameter is outside its valid domain (must be > 0)."""


# --- configuration loading ---

class ParseError(PolicyFuseError):
    """The config or request text is not well-formed; message carries the position."""


class ValidationError(PolicyFuseError):
    """The config parsed but violates a structural constraint."""


class ModeMismatchError(ValidationError):
    """Combiner parameters do not match the selected combination mode."""


# --- request evaluation ---

class RequestError(PolicyFuseError):
    """Base class for errors caused by the incoming access request."""


class UnknownSubjectError(RequestError):
    """The request names a subject with no label assignment."""


class UnknownObjectError(RequestError):
    """The request names an object with no label assignment."""


class UnknownAccessTypeError(RequestError):
    """The request names an access type outside the configured universe."""


class UnknownParameterError(PolicyFuseError):
    """A sweep named a parameter the active mode does not have."""


class SinkError(PolicyFuseError):
    """Writing to the audit sink failed; the decision itself is unaffected."""
