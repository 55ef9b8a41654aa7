"""Exception types raised across the package."""


class GroupError(Exception):
    """Base class for all errors raised by this package."""


class CapExceeded(GroupError):
    """A size limit (closure, automorphism search, enumeration) was exceeded."""


class InconsistentElement(GroupError):
    """A concrete element left the declared carrier during closure."""


class NotNormal(GroupError):
    pass


class NotAbelian(GroupError):
    pass


class NotAHomomorphism(GroupError):
    pass


class NotCentral(GroupError):
    pass


class NotIsomorphicCenters(GroupError):
    pass


class InconsistentExtension(GroupError):
    pass


class ReduciblePolynomial(GroupError):
    pass


class Singular(GroupError):
    pass


class NoSolution(GroupError):
    pass


class NoInvertibleSolution(NoSolution):
    pass


class CertificateFailed(GroupError):
    def __init__(self, label: str, check: str, detail: str = "") -> None:
        self.label = label
        self.check = check
        self.detail = detail
        msg = f"certificate for {label!r} failed at {check}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class ParseError(GroupError):
    def __init__(self, message: str, text: str, position: int) -> None:
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position}: {text!r}")


class CorpusError(GroupError):
    pass
