"""Exception hierarchy shared by every idlogic module."""


class IDLogicError(Exception):
    """Base class for all errors raised by idlogic."""


class VocabularyError(IDLogicError):
    pass


class MissingFunctionInterpretation(IDLogicError):
    def __init__(self, symbols):
        self.symbols = tuple(sorted(symbols))
        super().__init__(
            "function symbol(s) not interpreted by the base structure: "
            + ", ".join(self.symbols)
        )


class SymbolNotInterpreted(IDLogicError):
    def __init__(self, symbols):
        self.symbols = tuple(sorted(symbols))
        super().__init__("symbol(s) not interpreted: " + ", ".join(self.symbols))


class FreeSymbolUninterpreted(SymbolNotInterpreted):
    pass


class FreeSymbolOutsideVocab(VocabularyError):
    def __init__(self, symbols):
        self.symbols = tuple(sorted(symbols))
        super().__init__(
            "free symbol(s) outside the vocabulary: " + ", ".join(self.symbols)
        )


class ArityMismatch(IDLogicError):
    pass


class ElementOutOfDomain(IDLogicError):
    pass


class DomainMismatch(IDLogicError):
    pass


class BudgetExceeded(IDLogicError):
    def __init__(self, count, budget, what="candidates"):
        self.count = count
        self.budget = budget
        super().__init__(f"{count} {what} exceed the budget of {budget}")


class DomainTooLarge(BudgetExceeded):
    def __init__(self, count, budget):
        super().__init__(count, budget, what="ground atoms")


class NonMonotoneDetected(IDLogicError):
    pass


class NameCollision(IDLogicError):
    pass


class GroundingError(IDLogicError):
    pass


class NotTotal(IDLogicError):
    """Raised by ``extension`` when lb != ub; carries the diagnostic pair."""

    def __init__(self, pair):
        self.pair = pair
        undefined = ", ".join(str(a) for a in pair.undefined_atoms())
        super().__init__(f"definition is not total; undefined atoms: {undefined}")


class PartitionError(IDLogicError):
    pass


class SplitHead(PartitionError):
    pass


class UncoveredPredicate(PartitionError):
    pass


class NotAnIidSequence(IDLogicError):
    def __init__(self, reason):
        self.reason = reason
        super().__init__(reason)


class ParseError(IDLogicError):
    """Syntax error in a theory file, with 1-based position."""

    def __init__(self, message, line=0, col=0, expected=None):
        self.line = line
        self.col = col
        self.expected = expected
        where = f"{line}:{col}: " if line else ""
        tail = f" (expected {expected})" if expected else ""
        super().__init__(f"{where}{message}{tail}")


class ArityError(ParseError):
    pass


class UndeclaredSymbol(ParseError):
    pass


class StructureFormatError(IDLogicError):
    pass
