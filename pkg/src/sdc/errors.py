class DiagramError(Exception):
    """Base class for all errors raised by sdc."""


class DuplicateName(DiagramError):
    pass


class UnknownSort(DiagramError):
    pass


class TypeMismatch(DiagramError):
    def __init__(self, message, expected=None, actual=None):
        super().__init__(message)
        self.expected = expected
        self.actual = actual


class NotPermutationTerm(DiagramError):
    pass


class BoundaryMismatch(DiagramError):
    pass


class NotMonogamous(DiagramError):
    pass


class CyclicGraph(DiagramError):
    pass


class UnknownTheory(DiagramError):
    pass


class StaleMatch(DiagramError):
    pass


class MixedGenerators(DiagramError):
    pass


class NoSuchRule(DiagramError):
    pass


class NoSuchMatch(DiagramError):
    pass


class UnassignedGenerator(DiagramError):
    pass


class UnsupportedStructure(DiagramError):
    pass


class MissingCompactStructure(DiagramError):
    pass
