class CutsetLabError(Exception):
    exit_code: int = 1


class ConfigError(CutsetLabError):
    exit_code = 2


class ResourceLimitError(CutsetLabError):
    exit_code = 3


class ExperimentAssertionError(CutsetLabError):
    exit_code = 4


class MarginError(ExperimentAssertionError, ValueError):
    pass


class NotInWindowError(ExperimentAssertionError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else 'vertex not in window'


class WrongParametersError(ExperimentAssertionError, ValueError):
    pass


class RelatorError(ExperimentAssertionError, ValueError):
    pass


class OddDegreeError(ExperimentAssertionError, ValueError):
    pass


class NoAvoidingPathError(ExperimentAssertionError):
    pass


class DecompositionUnreachableError(ExperimentAssertionError):
    pass


class NotFinitelyPresentedError(ExperimentAssertionError):
    pass
