"""Exception types shared across the package."""


class InvalidParameter(ValueError):
    pass


class EmptyPopulation(LookupError):
    """No node is eligible for the requested draw."""


class InsufficientTargets(RuntimeError):
    """Fewer alive nodes than the number of distinct targets requested."""


class OutOfDomain(ValueError):
    pass


class NotScaleFree(ValueError):
    pass


class InsufficientData(ValueError):
    pass


class InvalidComparison(ValueError):
    pass


class InvariantViolation(RuntimeError):
    pass


class CsvParseError(ValueError):
    def __init__(self, path, line: int, msg: str):
        super().__init__(f"{path}:{line}: {msg}")
        self.path = path
        self.line = line
