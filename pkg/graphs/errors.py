class SplitToolError(Exception):
    """
    Base class for every error raised by the graphs and splitting packages
    """


class ContractViolation(SplitToolError):
    """
    A graph source, rotation system or input file breaks its contract
    (asymmetric neighbours, darts missing from a rotation, dangling endpoints)
    """


class NotFoundError(SplitToolError, KeyError):

    def __str__(self):
        return str(self.args[0]) if self.args else ''


class ArgumentError(SplitToolError, ValueError):
    pass


class PreconditionError(SplitToolError, ValueError):
    """
    A documented precondition of an operation does not hold,
    the message names the failed condition
    """


class NestingViolation(PreconditionError):
    """
    Raised by nested-system validation, has following attributes:

    - axiom: short name of the violated axiom ('nested', 'proper', 'tight', 'involution')
    - cuts: tuple of offending cut sides
    """

    def __init__(self, axiom, cuts, message):
        super().__init__(message)
        self.axiom = axiom
        self.cuts = tuple(cuts)


class InvalidJError(PreconditionError):

    def __init__(self, cell, message):
        super().__init__(message)
        self.cell = cell


class InfeasibleError(SplitToolError):

    def __init__(self, message, max_achievable):
        super().__init__(message)
        self.max_achievable = max_achievable


class BudgetError(SplitToolError):
    """
    Search budget exhausted, partial holds whatever was found before stopping
    """

    def __init__(self, message, partial=()):
        super().__init__(message)
        self.partial = list(partial)


class CertificationError(SplitToolError):

    def __init__(self, message, measured):
        super().__init__(message)
        self.measured = dict(measured)
