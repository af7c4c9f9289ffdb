""" exception types raised by the rtaudit toolkit """

__all__ = (
    'RtAuditError',
    'DegenerateData',
    'DegenerateModel',
    'DomainError',
    'EmptyInput',
    'EmptyHistogram',
    'ParseError',
    'InvariantViolation',
    'UsageError'
)


class RtAuditError(ValueError):
    """ base class for all toolkit errors, maps to a CLI exit code """
    exit_code = 1


class DegenerateData(RtAuditError):
    """ data cannot support the requested computation (too few trials, zero spread) """
    exit_code = 5


class DegenerateModel(RtAuditError):
    """ model has coinciding class locations, every threshold is equivalent

    input:
        threshold - the common location (ms) returned in place of a unique optimum
    """
    exit_code = 5

    def __init__(self, message, threshold=None):
        super().__init__(message)
        self.threshold = threshold


class DomainError(RtAuditError):
    """ argument outside the support of the function """
    exit_code = 7


class EmptyInput(RtAuditError):
    exit_code = 6


class EmptyHistogram(RtAuditError):
    exit_code = 6


class ParseError(RtAuditError):
    """ malformed input file, carries the 1-based line number """
    exit_code = 3

    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ''
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}: "
        elif where:
            where += ' '
        super().__init__(where + message)


class InvariantViolation(RtAuditError):
    """ dataset or histogram breaks a type invariant

    input:
        violations - list of violation records (or strings) describing each failure
    """
    exit_code = 4

    def __init__(self, message, violations=()):
        self.violations = list(violations)
        if self.violations:
            message += '\n' + '\n'.join(f"  - {v}" for v in self.violations)
        super().__init__(message)


class UsageError(RtAuditError):
    """ invalid command line option value """
    exit_code = 2
