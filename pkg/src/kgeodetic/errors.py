"""Exception hierarchy.

``DataError`` subclasses describe malformed or unsuitable input, ``CapExceeded``
subclasses mark exact searches that were refused because an instance is too
large. The CLI maps the two families to distinct exit codes.
"""


class GeodeticError(Exception):
    pass


class DataError(GeodeticError):
    pass


class CapExceeded(GeodeticError):
    pass


class DisconnectedGraph(DataError):
    pass


class NonSimpleGraph(DataError):
    pass


class DisconnectedCluster(DataError):
    pass


class MissingWeight(DataError):
    pass


class MissingValues(DataError):
    pass


class TooFewObjects(DataError):
    pass


class TooFewObservations(DataError):
    pass


class ZeroVarianceColumn(DataError):
    def __init__(self, column):
        super().__init__(f"column {column!r} has zero sample variance")
        self.column = column


class Multicollinear(DataError):
    def __init__(self, rank: int, condition_number: float, n_columns: int):
        super().__init__(
            f"design matrix is numerically singular: rank {rank} of {n_columns}, "
            f"cond(X^T X) = {condition_number:.6g}"
        )
        self.rank = rank
        self.condition_number = condition_number
        self.n_columns = n_columns


class SizeCapExceeded(CapExceeded):
    pass


class CliqueCountCapExceeded(CapExceeded):
    pass


class ExactCapExceeded(CapExceeded):
    pass
