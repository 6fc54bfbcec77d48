"""Exception hierarchy shared by every layer of the package."""

from __future__ import annotations


class CodegreeError(Exception):
    """Base class for all errors raised by this package."""


class LimitExceeded(CodegreeError):
    """Group enumeration passed the configured element limit."""

    def __init__(self, limit: int):
        super().__init__(f"element closure exceeded limit of {limit}")
        self.limit = limit


class MixedRealization(CodegreeError):
    """Generators do not share one element realization."""


class InternalSearchFailure(CodegreeError):
    pass


class NotNormalized(CodegreeError):
    """The acting subgroup does not normalize the target subgroup."""


class HallNotFound(CodegreeError):
    def __init__(self, p: int, q: int, tries: int):
        super().__init__(f"no Hall {{{p},{q}}}-subgroup found after {tries} conjugators")
        self.p, self.q, self.tries = p, q, tries


class QuotientFailure(CodegreeError):
    pass


class SplitIncomplete(CodegreeError):
    pass


class NoSquareRoot(CodegreeError):
    pass


class DegreeSumMismatch(CodegreeError):
    pass


class MultiplicityOutOfRange(CodegreeError):
    pass


class NonIntegralCodegree(CodegreeError):
    pass


class NotRealizableInput(CodegreeError):
    """Minimality was asked of a graph that is not a codegree graph."""


class StructureViolation(CodegreeError):
    """A coprime Hall pair was neither Frobenius nor 2-Frobenius."""


class SpecError(CodegreeError):
    """A group spec is malformed. ``path`` names the offending node."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class ActionNotHomomorphism(SpecError):
    pass


class NotFixedPointFree(CodegreeError):
    """Raised with a witness pair (actor element, fixed target element)."""

    def __init__(self, message: str, witness: tuple[str, str] | None = None):
        super().__init__(message)
        self.witness = witness


class StructureMismatch(CodegreeError):
    pass


class PreconditionViolated(CodegreeError):
    pass


class ModuleReducible(CodegreeError):
    pass


class MetadataMissing(CodegreeError):
    pass
