class HitmixError(Exception):
    pass


class GraphFormatError(HitmixError):
    def __init__(self, message: str, line_number: int | None = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class SeedSetError(HitmixError):
    pass


class DimensionError(HitmixError):
    pass


class SolverError(HitmixError):
    def __init__(self, message: str, stats=None):
        self.stats = stats
        super().__init__(message)


class SimulationError(HitmixError):
    pass


class MixtureError(HitmixError):
    pass


class MetricError(HitmixError):
    pass


class ConfigError(HitmixError):
    pass
