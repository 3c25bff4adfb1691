# Copyright (C) 2026 hdqlr developers
# This code is licensed under Apache License 2.0 (see LICENSE for details)

'''Exception hierarchy shared by every hdqlr component.

Each class carries the process exit code the command line front end reports
for it: 2 for configuration and input problems, 4 for numerical or
statistical failures. IO failures are plain OSError (exit 3).
'''


class HdqlrError(Exception):
    exit_code = 4


class ConfigurationError(HdqlrError, ValueError):
    exit_code = 2


class SchemaError(HdqlrError):
    exit_code = 2


class DataValidationError(HdqlrError):
    exit_code = 2

    def __init__(self, message, rows=()):
        self.rows = tuple(int(r) for r in rows)
        if self.rows:
            shown = ', '.join(str(r) for r in self.rows[:20])
            more = '' if len(self.rows) <= 20 else f' (+{len(self.rows) - 20} more)'
            message = f'{message}; offending rows: {shown}{more}'
        super().__init__(message)


class ParseError(HdqlrError):
    exit_code = 2

    def __init__(self, message, row=None, column=None):
        self.row = row
        self.column = column
        super().__init__(f'{message} (row {row}, column {column!r})')


class CapacityError(HdqlrError):
    exit_code = 2


class ConvergenceError(HdqlrError):

    def __init__(self, message, fold=None):
        self.fold = fold
        if fold is not None:
            message = f'fold {fold}: {message}'
        super().__init__(message)


class SeparationError(HdqlrError):
    pass


class SingularFitError(HdqlrError):
    pass


class WeakIdentificationError(HdqlrError):
    pass


class DegenerateVarianceError(HdqlrError):
    pass


class PowerExperimentError(HdqlrError):
    pass
