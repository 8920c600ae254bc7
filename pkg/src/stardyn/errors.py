"""Error vocabulary shared across the package.

DomainError: a caller handed an operation a value outside its contract.
InvariantError: an internal consistency condition failed (these map to CLI
exit code 3, never to a verdict failure).
ConfigError: a scenario config did not validate (CLI exit code 2).
CoverageError: greedy_spanning found a target with no candidate in range.
"""


class DomainError(ValueError):
    pass


class InvariantError(RuntimeError):
    pass


class ConfigError(ValueError):
    def __init__(self, pointer: str, message: str):
        self.pointer = pointer
        super().__init__(f"{pointer}: {message}")


class CoverageError(RuntimeError):
    def __init__(self, target, epsilon):
        self.target = target
        self.epsilon = epsilon
        super().__init__(f"no candidate within {epsilon} of target {target!r}")
